//! Lens spaces and their weight-zero WRT invariants.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cyclo::CyclotomicNumber;
use crate::error::{Error, Result};
use crate::field::{ComplexApprox, Scalar};
use crate::modgroup::{cf_for_lens, linking_data, ContinuedFraction, Sl2};
use crate::numtheory::{dedekind_sum, rademacher_phi, rademacher_phi_cf};
use crate::tqftrep::{rep_bruteforce_column, RelationCheck, TheoryParams};

/// L(p, q); canonical when 0 < -q < p, or (p, q) = (1, 0).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LensSpace {
    pub p: i64,
    pub q: i64,
    pub canonical: bool,
}

impl LensSpace {
    pub fn is_sphere(&self) -> bool {
        self.p == 1
    }
}

/// Shift q by multiples of p into -p < q < 0 (or (1, 0) for p = 1).
pub fn normalize_lens(p: i64, q: i64) -> Result<LensSpace> {
    if p < 1 || p.gcd(&q) != 1 {
        return Err(Error::InvalidLens { p, q });
    }
    if p == 1 {
        return Ok(LensSpace {
            p: 1,
            q: 0,
            canonical: true,
        });
    }
    Ok(LensSpace {
        p,
        q: q.rem_euclid(p) - p,
        canonical: true,
    })
}

/// The normalized q* with q q* ≡ 1 (mod p).
pub fn inverse_q(lens: &LensSpace) -> i64 {
    if lens.p == 1 {
        return 0;
    }
    let ext = lens.q.extended_gcd(&lens.p);
    ext.x.rem_euclid(lens.p) - lens.p
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Oracle,
    Closed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Numeric,
    Exact,
}

/// How the Σ± of the closed formula is read.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignReading {
    /// Both signs summed with coefficient +1.
    Unsigned,
    /// The + branch minus the − branch.
    SignedDifference,
}

/// Surgery data shared by both evaluation paths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LensData {
    pub cf: ContinuedFraction,
    pub u: Sl2,
    pub phi: i64,
    pub weight: i64,
}

pub fn lens_data(lens: &LensSpace) -> Result<LensData> {
    let (cf, u) = cf_for_lens(lens.p, lens.q)?;
    let phi = rademacher_phi(&u)?;
    let phi = if phi.is_integer() {
        phi.to_integer()
            .to_i64()
            .ok_or(Error::Overflow("Rademacher phi"))?
    } else {
        unreachable!("Φ of an SL(2,Z) matrix is an integer, got {phi}")
    };
    let weight = linking_data(&cf).weight;
    Ok(LensData { cf, u, phi, weight })
}

/// κ^Φ · R(U)₁₁ with R(U) from the generator matrices.
pub fn wrt_oracle_value<V: Scalar>(lens: &LensSpace, params: &TheoryParams) -> Result<V> {
    let data = lens_data(lens)?;
    let column = rep_bruteforce_column::<V>(params, &data.cf, 1)?;
    Ok(params.kappa_pow::<V>(data.phi).times(&column[0]))
}

/// -(iζ^{t-1}/√(rp)) e_{2r}(12 s(q,p)) Σ± Σ_{n=1}^{p} e_{rp}(±1) e_p(2qrn²) e_p(2n(q±1)).
///
/// p = 1 has no such expansion and is delegated to the oracle.
pub fn wrt_closed_value<V: Scalar>(
    lens: &LensSpace,
    params: &TheoryParams,
    reading: SignReading,
) -> Result<V> {
    if lens.is_sphere() {
        return wrt_oracle_value(lens, params);
    }
    let data = lens_data(lens)?;
    let (p, q, r) = (lens.p as i128, lens.q as i128, params.r() as i128);
    let t = data.cf.len() as i128;

    let twelve_s = dedekind_sum(lens.q, lens.p)? * BigRational::from_integer(BigInt::from(12));
    let s_num = twelve_s
        .numer()
        .to_i128()
        .ok_or(Error::Overflow("Dedekind sum"))?;
    let s_den = twelve_s
        .denom()
        .to_i128()
        .ok_or(Error::Overflow("Dedekind sum"))?;
    let dedekind_phase = V::root_of_unity(s_num, 2 * r * s_den);

    let mut terms = Vec::with_capacity(2 * p as usize);
    for sign in [1i128, -1] {
        let coeff = match reading {
            SignReading::Unsigned => 1,
            SignReading::SignedDifference => sign as i64,
        };
        for n in 1..=p {
            // e_{rp}(±1) e_p(x) = e_{rp}(±1 + r x)
            let x = 2 * q * r * n * n + 2 * n * (q + sign);
            terms.push((sign + r * x, coeff));
        }
    }
    let sum = V::root_sum(r * p, &terms);
    let rp = (r * p) as u64;
    let pref = V::i()
        .times(&V::root_of_unity(t - 1, 8))
        .times(&V::sqrt_int(rp))
        .scale(-1, rp as i64)
        .times(&dedekind_phase);
    Ok(pref.times(&sum))
}

/// One evaluated invariant with its surgery metadata.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvariantResult {
    pub p: i64,
    pub q: i64,
    pub r: i64,
    pub cf: ContinuedFraction,
    pub phi: i64,
    pub weight: i64,
    pub method: Method,
    pub numeric: ComplexApprox,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<CyclotomicNumber>,
}

fn evaluate(
    lens: &LensSpace,
    params: &TheoryParams,
    method: Method,
    backend: Backend,
) -> Result<InvariantResult> {
    let data = lens_data(lens)?;
    let (numeric, exact) = match backend {
        Backend::Numeric => {
            let v: Complex64 = match method {
                Method::Oracle => wrt_oracle_value(lens, params)?,
                Method::Closed => wrt_closed_value(lens, params, SignReading::Unsigned)?,
            };
            (ComplexApprox::from(v), None)
        }
        Backend::Exact => {
            let v: CyclotomicNumber = match method {
                Method::Oracle => wrt_oracle_value(lens, params)?,
                Method::Closed => wrt_closed_value(lens, params, SignReading::Unsigned)?,
            };
            (v.embed(), Some(v))
        }
    };
    Ok(InvariantResult {
        p: lens.p,
        q: lens.q,
        r: params.r(),
        cf: data.cf,
        phi: data.phi,
        weight: data.weight,
        method,
        numeric,
        exact,
    })
}

pub fn wrt_oracle(
    lens: &LensSpace,
    params: &TheoryParams,
    backend: Backend,
) -> Result<InvariantResult> {
    evaluate(lens, params, Method::Oracle, backend)
}

pub fn wrt_closed(
    lens: &LensSpace,
    params: &TheoryParams,
    backend: Backend,
) -> Result<InvariantResult> {
    evaluate(lens, params, Method::Closed, backend)
}

/// All canonical (r, p, q) with 2 <= p <= p_max, ordered by (r, p, -q).
pub fn grid(p_max: i64, levels: &[i64]) -> Vec<(i64, i64, i64)> {
    let mut rs = levels.to_vec();
    rs.sort_unstable();
    rs.dedup();
    let mut out = Vec::new();
    for &r in &rs {
        for p in 2..=p_max {
            for q in (1 - p..0).rev() {
                if p.gcd(&q) == 1 {
                    out.push((r, p, q));
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct GridEntry {
    pub r: i64,
    pub p: i64,
    pub q: i64,
    pub cf: Vec<i64>,
    pub phi: i64,
    pub weight: i64,
    pub oracle: ComplexApprox,
    pub closed: ComplexApprox,
    /// |closed - oracle|, after the global correction when one was applied.
    pub deviation: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact_equal: Option<bool>,
    pub phi_consistent: bool,
    pub q_inverse: i64,
    /// |closed(q) - closed(q*)|.
    pub closed_homeomorphism_deviation: f64,
    /// |oracle(q) - oracle(q*)|.
    pub oracle_homeomorphism_deviation: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct LevelSummary {
    pub r: i64,
    pub experimental: bool,
    pub s_fourth_deviation: f64,
    /// λ with (ρ(S)ρ(T))⁶ = λI, if the power is scalar.
    pub st_sixth_scalar: Option<ComplexApprox>,
}

/// A root of unity ω with closed = ω · oracle on the whole grid.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct GlobalFactor {
    pub numerator: i64,
    pub order: i64,
}

/// How the closed values relate to the oracle when they disagree.
#[derive(Debug, Clone, Default, Serialize)]
pub struct Diagnostics {
    pub compared: usize,
    pub modulus_agrees: usize,
    pub closed_vanishes: usize,
    pub oracle_vanishes: usize,
    pub distinct_ratios: usize,
    /// ratio = closed/oracle as (k, n) meaning e(k/n), when it is a root of unity of order <= 1000.
    pub ratio_roots: Vec<(i64, i64, i64, i64, i64)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub backend: Backend,
    pub tolerance: f64,
    pub entries: Vec<GridEntry>,
    pub levels: Vec<LevelSummary>,
    pub global_factor: Option<GlobalFactor>,
    pub diagnostics: Diagnostics,
    pub max_deviation: f64,
    pub failures: usize,
    pub pass: bool,
}

/// Recognise z as e(k/n) with n <= max_order.
pub fn as_root_of_unity(z: Complex64, tol: f64, max_order: i64) -> Option<(i64, i64)> {
    if (z.norm() - 1.0).abs() > tol {
        return None;
    }
    let turn = z.arg() / (2.0 * std::f64::consts::PI);
    for n in 1..=max_order {
        let k = (turn * n as f64).round();
        if (turn * n as f64 - k).abs() * 2.0 * std::f64::consts::PI <= tol {
            return Some(((k as i64).rem_euclid(n), n));
        }
    }
    None
}

struct RawEntry {
    r: i64,
    p: i64,
    q: i64,
    data: LensData,
    oracle: Complex64,
    closed: Complex64,
    exact_equal: Option<bool>,
    phi_consistent: bool,
}

fn evaluate_tuple(r: i64, p: i64, q: i64, backend: Backend) -> Result<RawEntry> {
    let params = TheoryParams::new(r)?;
    let lens = normalize_lens(p, q)?;
    let data = lens_data(&lens)?;
    let link = linking_data(&data.cf);
    let phi_consistent =
        data.phi == rademacher_phi_cf(&data.cf) && data.phi == link.trace - 3 * link.signature;
    let (oracle, closed, exact_equal) = match backend {
        Backend::Numeric => (
            wrt_oracle_value::<Complex64>(&lens, &params)?,
            wrt_closed_value::<Complex64>(&lens, &params, SignReading::Unsigned)?,
            None,
        ),
        Backend::Exact => {
            let o = wrt_oracle_value::<CyclotomicNumber>(&lens, &params)?;
            let c = wrt_closed_value::<CyclotomicNumber>(&lens, &params, SignReading::Unsigned)?;
            (o.embed_complex(), c.embed_complex(), Some(o == c))
        }
    };
    Ok(RawEntry {
        r,
        p,
        q,
        data,
        oracle,
        closed,
        exact_equal,
        phi_consistent,
    })
}

/// Compare both evaluation paths on every canonical lens space with p <= p_max.
pub fn verify_grid(p_max: i64, levels: &[i64], backend: Backend, tol: f64) -> Result<VerifyReport> {
    let params: Vec<TheoryParams> = levels
        .iter()
        .map(|&r| TheoryParams::new(r))
        .collect::<Result<_>>()?;
    let tuples = grid(p_max, levels);
    let raw: Vec<RawEntry> = tuples
        .par_iter()
        .map(|&(r, p, q)| evaluate_tuple(r, p, q, backend))
        .collect::<Result<_>>()?;

    let diagnostics = diagnose(&raw, tol);
    let global_factor = detect_global_factor(&raw, tol);
    let correction = global_factor
        .map(|g| Complex64::root_of_unity(-(g.numerator as i128), g.order as i128))
        .unwrap_or(Complex64::new(1.0, 0.0));

    let index: HashMap<(i64, i64, i64), usize> = raw
        .iter()
        .enumerate()
        .map(|(i, e)| ((e.r, e.p, e.q), i))
        .collect();
    let entries: Vec<GridEntry> = raw
        .iter()
        .map(|e| {
            let lens = LensSpace {
                p: e.p,
                q: e.q,
                canonical: true,
            };
            let q_inv = inverse_q(&lens);
            let partner = &raw[index[&(e.r, e.p, q_inv)]];
            GridEntry {
                r: e.r,
                p: e.p,
                q: e.q,
                cf: e.data.cf.entries().to_vec(),
                phi: e.data.phi,
                weight: e.data.weight,
                oracle: e.oracle.into(),
                closed: e.closed.into(),
                deviation: (e.closed * correction - e.oracle).norm(),
                exact_equal: e.exact_equal,
                phi_consistent: e.phi_consistent,
                q_inverse: q_inv,
                closed_homeomorphism_deviation: (e.closed - partner.closed).norm(),
                oracle_homeomorphism_deviation: (e.oracle - partner.oracle).norm(),
            }
        })
        .collect();

    let levels_summary = params
        .iter()
        .map(|pr| {
            let rel = RelationCheck::<Complex64>::compute(pr);
            LevelSummary {
                r: pr.r(),
                experimental: pr.is_experimental(),
                s_fourth_deviation: rel.s_fourth_deviation(),
                st_sixth_scalar: rel.st_sixth_scalar(tol).map(ComplexApprox::from),
            }
        })
        .collect();

    let failed = |e: &GridEntry| {
        let value_ok = match e.exact_equal {
            Some(eq) => eq,
            None => e.deviation <= tol,
        };
        !(value_ok
            && e.phi_consistent
            && e.closed_homeomorphism_deviation <= tol
            && e.oracle_homeomorphism_deviation <= tol)
    };
    let failures = entries.iter().filter(|e| failed(e)).count();
    let max_deviation = entries.iter().map(|e| e.deviation).fold(0.0, f64::max);
    Ok(VerifyReport {
        backend,
        tolerance: tol,
        entries,
        levels: levels_summary,
        global_factor,
        diagnostics,
        max_deviation,
        failures,
        pass: failures == 0,
    })
}

fn diagnose(raw: &[RawEntry], tol: f64) -> Diagnostics {
    let mut d = Diagnostics {
        compared: raw.len(),
        ..Default::default()
    };
    let mut ratios: Vec<(i64, i64)> = Vec::new();
    for e in raw {
        let (o, c) = (e.oracle.norm(), e.closed.norm());
        if (o - c).abs() <= tol {
            d.modulus_agrees += 1;
        }
        if c <= tol && o > tol {
            d.closed_vanishes += 1;
        }
        if o <= tol {
            d.oracle_vanishes += 1;
            continue;
        }
        let ratio = e.closed / e.oracle;
        if let Some((k, n)) = as_root_of_unity(ratio, 1e-7, 1000) {
            d.ratio_roots.push((e.r, e.p, e.q, k, n));
            if !ratios.contains(&(k, n)) {
                ratios.push((k, n));
            }
        } else {
            d.distinct_ratios += 1;
        }
    }
    d.distinct_ratios += ratios.len();
    d
}

// a single root of unity ω with closed = ω · oracle everywhere, if there is one
fn detect_global_factor(raw: &[RawEntry], tol: f64) -> Option<GlobalFactor> {
    if raw.iter().all(|e| (e.closed - e.oracle).norm() <= tol) {
        return None;
    }
    let first = raw.iter().find(|e| e.oracle.norm() > tol)?;
    let (k, n) = as_root_of_unity(first.closed / first.oracle, 1e-7, 1000)?;
    if k == 0 {
        return None;
    }
    let omega = Complex64::root_of_unity(k as i128, n as i128);
    raw.iter()
        .all(|e| (e.closed - omega * e.oracle).norm() <= tol)
        .then_some(GlobalFactor {
            numerator: k,
            order: n,
        })
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.entries.len();
        let spaces = self
            .entries
            .iter()
            .map(|e| (e.p, e.q))
            .collect::<std::collections::HashSet<_>>()
            .len();
        for lvl in &self.levels {
            let scalar = match &lvl.st_sixth_scalar {
                Some(z) => format!("{:.12} {:+.12}i", z.re, z.im),
                None => "not scalar".to_string(),
            };
            writeln!(
                f,
                "r = {}{}: |S^4 - I| = {:.2e}, (ST)^6 = {}",
                lvl.r,
                if lvl.experimental {
                    " (composite, experimental)"
                } else {
                    ""
                },
                lvl.s_fourth_deviation,
                scalar
            )?;
        }
        if let Some(g) = &self.global_factor {
            writeln!(
                f,
                "global correction applied: closed = e({}/{}) * oracle",
                g.numerator, g.order
            )?;
        }
        if !self.pass {
            let d = &self.diagnostics;
            writeln!(
                f,
                "diagnostics: {} compared, {} modulus agreements, {} closed values vanish where the oracle does not, {} distinct closed/oracle ratios",
                d.compared, d.modulus_agrees, d.closed_vanishes, d.distinct_ratios
            )?;
            for e in self
                .entries
                .iter()
                .filter(|e| e.deviation > self.tolerance)
                .take(10)
            {
                writeln!(
                    f,
                    "  r={} L({},{}): oracle {:.10} {:+.10}i, closed {:.10} {:+.10}i, deviation {:.3e}",
                    e.r, e.p, e.q, e.oracle.re, e.oracle.im, e.closed.re, e.closed.im, e.deviation
                )?;
            }
        }
        if self.pass {
            write!(
                f,
                "PASS: {spaces} lens spaces, max deviation < {:e}",
                self.tolerance
            )?;
        } else {
            write!(
                f,
                "FAIL: {} of {n} comparisons out of tolerance {:e} (max deviation {:.3e})",
                self.failures, self.tolerance, self.max_deviation
            )?;
        }
        Ok(())
    }
}
