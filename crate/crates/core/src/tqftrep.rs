//! The SO(3) representation of SL(2, Z) on the torus space at level r.
//!
//! Generators, with h = (r + 1)/2 the inverse of 2 mod r:
//!   S_{jl} = (e_r(jl) - e_r(-jl)) / (i√r)
//!   T_j    = i · e_r(h j²)
//! Indices run over 1..=(r-1)/2.

use num_complex::Complex64;
use serde::{Serialize, Serializer};

use crate::cyclo::CyclotomicNumber;
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::modgroup::ContinuedFraction;
use crate::numtheory::is_prime;

/// Level data and the constants A = ζ_{2r}, κ = iA⁻¹, ζ = e(1/8).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TheoryParams {
    r: i64,
    a: CyclotomicNumber,
    kappa: CyclotomicNumber,
    zeta: CyclotomicNumber,
}

impl TheoryParams {
    pub fn new(r: i64) -> Result<Self> {
        if r < 5 || r % 4 != 1 {
            return Err(Error::InvalidLevel(r));
        }
        let r128 = r as i128;
        Ok(TheoryParams {
            r,
            a: CyclotomicNumber::e_frac(1, 2 * r128),
            kappa: &CyclotomicNumber::e_frac(1, 4) * &CyclotomicNumber::e_frac(-1, 2 * r128),
            zeta: CyclotomicNumber::e_frac(1, 8),
        })
    }

    pub fn r(&self) -> i64 {
        self.r
    }

    pub fn dim(&self) -> usize {
        ((self.r - 1) / 2) as usize
    }

    /// Composite levels are accepted but flagged as experimental.
    pub fn is_experimental(&self) -> bool {
        !is_prime(self.r as u64)
    }

    pub fn a(&self) -> &CyclotomicNumber {
        &self.a
    }

    pub fn kappa(&self) -> &CyclotomicNumber {
        &self.kappa
    }

    pub fn zeta(&self) -> &CyclotomicNumber {
        &self.zeta
    }

    /// h = (r + 1)/2, so that 2h ≡ 1 (mod r).
    pub fn half(&self) -> i64 {
        (self.r + 1) / 2
    }

    /// κ^k = i^k · e_{2r}(-k).
    pub fn kappa_pow<V: Scalar>(&self, k: i64) -> V {
        V::i_pow(k).times(&V::root_of_unity(-(k as i128), 2 * self.r as i128))
    }

    fn check_index(&self, j: usize) -> Result<()> {
        if j == 0 || j > self.dim() {
            return Err(Error::IndexOutOfRange {
                index: j as i64,
                dim: self.dim(),
            });
        }
        Ok(())
    }
}

/// S_{jl} extended to all integers.
pub fn s_entry<V: Scalar>(r: i64, j: i64, l: i64) -> V {
    let r128 = r as i128;
    let jl = j as i128 * l as i128;
    let diff = V::root_sum(r128, &[(jl, 1), (-jl, -1)]);
    // 1/(i√r) = -i√r / r
    let pref = V::i().negated().times(&V::sqrt_int(r as u64)).scale(1, r);
    diff.times(&pref)
}

/// (T^m)_j = i^m · e_r(h m j²), extended to all integers j and m.
pub fn t_entry_pow<V: Scalar>(r: i64, j: i64, m: i64) -> V {
    let h = ((r + 1) / 2) as i128;
    let j = j as i128;
    V::i_pow(m).times(&V::root_of_unity(h * m as i128 * j * j, r as i128))
}

pub fn t_entry<V: Scalar>(r: i64, j: i64) -> V {
    t_entry_pow(r, j, 1)
}

/// Dense square matrix over a backend, 1-based accessors.
#[derive(Debug, Clone)]
pub struct RepMatrix<V> {
    dim: usize,
    data: Vec<V>,
}

impl<V: Scalar> RepMatrix<V> {
    pub fn from_fn(dim: usize, f: impl Fn(usize, usize) -> V) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for j in 1..=dim {
            for l in 1..=dim {
                data.push(f(j, l));
            }
        }
        RepMatrix { dim, data }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |j, l| if j == l { V::one() } else { V::zero() })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, j: usize, l: usize) -> &V {
        &self.data[(j - 1) * self.dim + (l - 1)]
    }

    pub fn column(&self, l: usize) -> Vec<V> {
        (1..=self.dim).map(|j| self.get(j, l).clone()).collect()
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim);
        Self::from_fn(self.dim, |j, l| {
            (1..=self.dim).fold(V::zero(), |acc, k| {
                acc.plus(&self.get(j, k).times(rhs.get(k, l)))
            })
        })
    }

    pub fn apply(&self, v: &[V]) -> Vec<V> {
        (1..=self.dim)
            .map(|j| {
                v.iter().enumerate().fold(V::zero(), |acc, (k, x)| {
                    acc.plus(&self.get(j, k + 1).times(x))
                })
            })
            .collect()
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::identity(self.dim), |acc, _| acc.mul(self))
    }

    pub fn to_complex(&self) -> RepMatrix<Complex64> {
        RepMatrix {
            dim: self.dim,
            data: self.data.iter().map(|x| x.to_complex()).collect(),
        }
    }

    /// Largest entrywise distance in the complex embedding.
    pub fn max_deviation(&self, other: &Self) -> f64 {
        self.data
            .iter()
            .zip(other.data.iter())
            .map(|(x, y)| x.distance(y))
            .fold(0.0, f64::max)
    }

    /// If the matrix is λ·I within `tol`, return λ (the (1,1) entry).
    pub fn scalar_value(&self, tol: f64) -> Option<V> {
        let lambda = self.get(1, 1).clone();
        let target = Self::from_fn(
            self.dim,
            |j, l| if j == l { lambda.clone() } else { V::zero() },
        );
        (self.max_deviation(&target) <= tol).then_some(lambda)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<serde_json::Value> = (1..=self.dim)
            .map(|j| (1..=self.dim).map(|l| self.get(j, l).to_json()).collect())
            .collect();
        serde_json::Value::Array(rows)
    }
}

impl<V: Scalar + PartialEq> PartialEq for RepMatrix<V> {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.data == other.data
    }
}

impl<V: Scalar> Serialize for RepMatrix<V> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

pub fn rep_generators<V: Scalar>(params: &TheoryParams) -> (RepMatrix<V>, RepMatrix<V>) {
    let r = params.r;
    let s = RepMatrix::from_fn(params.dim(), |j, l| s_entry(r, j as i64, l as i64));
    let t = RepMatrix::from_fn(params.dim(), |j, l| {
        if j == l {
            t_entry(r, j as i64)
        } else {
            V::zero()
        }
    });
    (s, t)
}

fn t_diagonal<V: Scalar>(params: &TheoryParams, m: i64) -> Vec<V> {
    (1..=params.dim() as i64)
        .map(|j| t_entry_pow(params.r, j, m))
        .collect()
}

// v ↦ T^m S v for each entry m in order
fn apply_word<V: Scalar>(
    params: &TheoryParams,
    s: &RepMatrix<V>,
    cf: &ContinuedFraction,
    mut v: Vec<V>,
) -> Vec<V> {
    for &m in cf.entries() {
        let diag = t_diagonal::<V>(params, m);
        v = s
            .apply(&v)
            .iter()
            .zip(diag.iter())
            .map(|(x, t)| t.times(x))
            .collect();
    }
    v
}

/// R(U) = T^{m_t} S ⋯ T^{m_1} S by literal matrix multiplication.
pub fn rep_bruteforce<V: Scalar>(params: &TheoryParams, cf: &ContinuedFraction) -> RepMatrix<V> {
    let (s, _) = rep_generators::<V>(params);
    let mut m = RepMatrix::identity(params.dim());
    for &k in cf.entries() {
        let diag = t_diagonal::<V>(params, k);
        let sm = s.mul(&m);
        m = RepMatrix::from_fn(params.dim(), |j, l| diag[j - 1].times(sm.get(j, l)));
    }
    m
}

/// Column `l` of R(U), computed by applying the factors to the basis vector.
pub fn rep_bruteforce_column<V: Scalar>(
    params: &TheoryParams,
    cf: &ContinuedFraction,
    l: usize,
) -> Result<Vec<V>> {
    params.check_index(l)?;
    let (s, _) = rep_generators::<V>(params);
    let v = (1..=params.dim())
        .map(|j| if j == l { V::one() } else { V::zero() })
        .collect();
    Ok(apply_word(params, &s, cf, v))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ImSumMode {
    Direct,
    Closed,
}

/// The nested sum Σ S_{j_out j_t} T^{m_t}_{j_t} S_{j_t j_{t-1}} ⋯ T^{m_1}_{j_1} S_{j_1 j_in}.
pub fn im_sum<V: Scalar>(
    params: &TheoryParams,
    cf: &ContinuedFraction,
    j_out: usize,
    j_in: usize,
    mode: ImSumMode,
) -> Result<V> {
    params.check_index(j_out)?;
    params.check_index(j_in)?;
    match mode {
        ImSumMode::Direct => {
            let (s, _) = rep_generators::<V>(params);
            let basis = (1..=params.dim())
                .map(|j| if j == j_in { V::one() } else { V::zero() })
                .collect();
            let v = apply_word(params, &s, cf, basis);
            Ok(s.apply(&v)[j_out - 1].clone())
        }
        ImSumMode::Closed => im_sum_closed(params, cf, j_out as i64, j_in as i64),
    }
}

fn sign_root<V: Scalar>(x: i64) -> V {
    V::root_of_unity(x.signum() as i128, 8)
}

// C_t Σ_{γ ≡ j_out (r), γ mod 2r a_t} { e_{2r a_t}(-c_t(γ + j_in/c_t)²) - e_{2r a_t}(-c_t(γ - j_in/c_t)²) }
fn im_sum_closed<V: Scalar>(
    params: &TheoryParams,
    cf: &ContinuedFraction,
    j_out: i64,
    j_in: i64,
) -> Result<V> {
    if let Some(i) = (1..=cf.len()).find(|&i| cf.convergent(i).a == 0) {
        return Err(Error::DegenerateConvergent { index: i });
    }
    let t = cf.len() as i64;
    let r = params.r as i128;
    let last = cf.convergent(cf.len());
    let (a_t, c_t) = (last.a as i128, last.c as i128);

    // e_{2r}(-Σ 1/(a_{i-1} a_i)) j_in²): common denominator 2r·Π is avoided by summing roots
    let mut phase = V::one();
    for i in 1..cf.len() {
        let prod = cf.convergent(i - 1).a as i128 * cf.convergent(i).a as i128;
        phase = phase.times(&V::root_of_unity(-(j_in as i128).pow(2), 2 * r * prod));
    }
    let msum: i64 = cf.entries().iter().sum();
    let constant = V::i_pow(t - 1)
        .times(&V::root_of_unity(t as i128 - 1, 8))
        .times(&sign_root::<V>(last.a))
        .times(&V::i_pow(msum))
        .times(&V::sqrt_int((r * a_t.abs()) as u64))
        .scale(-1, (r * a_t.abs()) as i64)
        .times(&phase);

    // -c(γ ± j/c)²/(2 r a) = -(cγ ± j)² / (2 r a c)
    let den = 2 * r * a_t * c_t;
    let j0 = j_in as i128;
    let mut terms = Vec::with_capacity(4 * a_t.unsigned_abs() as usize);
    for beta in 0..2 * a_t.abs() {
        let gamma = j_out as i128 + r * beta;
        terms.push((-(c_t * gamma + j0).pow(2), 1));
        terms.push((-(c_t * gamma - j0).pow(2), -1));
    }
    Ok(constant.times(&V::root_sum(den, &terms)))
}

/// K_1 = i^{m_1}; K_t = i^{t-1} ζ^{t-2} ζ^{sign(a_{t-1})} i^{Σ m} for t >= 2.
fn k_constant<V: Scalar>(cf: &ContinuedFraction) -> Result<V> {
    let t = cf.len() as i64;
    let msum: i64 = cf.entries().iter().sum();
    if t == 1 {
        return Ok(V::i_pow(msum));
    }
    let a_prev = cf.convergent(cf.len() - 1).a;
    if a_prev == 0 {
        return Err(Error::DegenerateConvergent {
            index: cf.len() - 1,
        });
    }
    Ok(V::i_pow(t - 1)
        .times(&V::root_of_unity(t as i128 - 2, 8))
        .times(&sign_root::<V>(a_prev))
        .times(&V::i_pow(msum)))
}

/// Entry (j, l) of R(U) from the closed Gauss-sum expression
/// (-iK_t)/√(r|c|) · e_{2rc}(d l²) · Σ_{γ = j + rβ, 0 <= β < 2|c|} e_{2rc}(aγ²)(e_{rc}(γl) - e_{rc}(-γl)).
pub fn rep_closed_entry<V: Scalar>(
    params: &TheoryParams,
    cf: &ContinuedFraction,
    j: usize,
    l: usize,
) -> Result<V> {
    params.check_index(j)?;
    params.check_index(l)?;
    let u = cf.matrix();
    if u.c == 0 {
        return Err(Error::ZeroLowerLeft);
    }
    let k = k_constant::<V>(cf)?;
    let r = params.r as i128;
    let (a, c, d) = (u.a as i128, u.c as i128, u.d as i128);
    let (j, l) = (j as i128, l as i128);
    let den = 2 * r * c;
    let mut terms = Vec::with_capacity(4 * c.unsigned_abs() as usize);
    for beta in 0..2 * c.abs() {
        let gamma = j + r * beta;
        let base = d * l * l + a * gamma * gamma;
        terms.push((base + 2 * gamma * l, 1));
        terms.push((base - 2 * gamma * l, -1));
    }
    let rc = (r * c.abs()) as u64;
    let pref = V::i()
        .negated()
        .times(&k)
        .times(&V::sqrt_int(rc))
        .scale(1, rc as i64);
    Ok(pref.times(&V::root_sum(den, &terms)))
}

/// The full matrix from `rep_closed_entry`.
pub fn rep_closed<V: Scalar>(
    params: &TheoryParams,
    cf: &ContinuedFraction,
) -> Result<RepMatrix<V>> {
    let dim = params.dim();
    let mut data = Vec::with_capacity(dim * dim);
    for j in 1..=dim {
        for l in 1..=dim {
            data.push(rep_closed_entry(params, cf, j, l)?);
        }
    }
    Ok(RepMatrix { dim, data })
}

/// ρ(S)⁴ and (ρ(S)ρ(T))⁶ at one level.
#[derive(Debug, Clone)]
pub struct RelationCheck<V> {
    pub s_fourth: RepMatrix<V>,
    pub st_sixth: RepMatrix<V>,
}

impl<V: Scalar> RelationCheck<V> {
    pub fn compute(params: &TheoryParams) -> Self {
        let (s, t) = rep_generators::<V>(params);
        let st = s.mul(&t);
        RelationCheck {
            s_fourth: s.pow(4),
            st_sixth: st.pow(6),
        }
    }

    pub fn s_fourth_deviation(&self) -> f64 {
        self.s_fourth
            .max_deviation(&RepMatrix::identity(self.s_fourth.dim()))
    }

    pub fn st_sixth_scalar(&self, tol: f64) -> Option<V> {
        self.st_sixth.scalar_value(tol)
    }
}
