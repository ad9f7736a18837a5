//! Acceptance criteria, one line per criterion. Exits non-zero if any fails.

use std::time::Instant;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use wrt_core::lens::{inverse_q, verify_grid, wrt_closed_value, Backend, SignReading};
use wrt_core::modgroup::{cf_for_lens, linking_data};
use wrt_core::numtheory::{
    dedekind_sum, gauss_reciprocity, rademacher_phi, rademacher_phi_cf, ReciprocityInstance,
};
use wrt_core::tqftrep::{
    im_sum, rep_bruteforce, rep_closed, s_entry, t_entry, ImSumMode, RelationCheck,
};
use wrt_core::{normalize_lens, ContinuedFraction, CyclotomicNumber, TheoryParams};

const TOL: f64 = 1e-9;
const LEVELS: [i64; 4] = [5, 13, 17, 29];

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn lens_pairs(p_max: i64) -> Vec<(i64, i64)> {
    let mut out = vec![(1, 0)];
    for p in 2..=p_max {
        for q in 1..p {
            if p.gcd(&q) == 1 {
                out.push((p, -q));
            }
        }
    }
    out
}

fn closed_vs_oracle_numeric() -> Outcome {
    let report = verify_grid(25, &LEVELS, Backend::Numeric, TOL).expect("grid evaluates");
    let bad = report.entries.iter().filter(|e| e.deviation > TOL).count();
    let d = &report.diagnostics;
    let factor = match report.global_factor {
        Some(g) => format!("e({}/{})", g.numerator, g.order),
        None => "none".into(),
    };
    outcome(
        bad == 0,
        format!(
            "{} of {} out of tolerance, max deviation {:.3e}; global root-of-unity factor: {factor}; \
             |closed| = |oracle| in {}, closed vanishes in {}, {} distinct ratios",
            bad,
            report.entries.len(),
            report.max_deviation,
            d.modulus_agrees,
            d.closed_vanishes,
            d.distinct_ratios
        ),
    )
}

fn closed_vs_oracle_exact() -> Outcome {
    let report = verify_grid(8, &[5, 13], Backend::Exact, TOL).expect("grid evaluates");
    let equal = report
        .entries
        .iter()
        .filter(|e| e.exact_equal == Some(true))
        .count();
    outcome(
        equal == report.entries.len(),
        format!("{equal} of {} canonical forms equal", report.entries.len()),
    )
}

fn closed_matrix_vs_brute_force() -> Outcome {
    let (mut matrices, mut bad, mut worst) = (0, 0, 0.0f64);
    for r in LEVELS {
        let params = TheoryParams::new(r).unwrap();
        for (p, q) in lens_pairs(25) {
            let (cf, _) = cf_for_lens(p, q).unwrap();
            let brute = rep_bruteforce::<Complex64>(&params, &cf);
            let closed = rep_closed::<Complex64>(&params, &cf).unwrap();
            let dev = closed.max_deviation(&brute);
            matrices += 1;
            worst = worst.max(dev);
            if dev > TOL {
                bad += 1;
            }
        }
    }
    outcome(
        bad == 0,
        format!("{bad} of {matrices} matrices differ, max entry deviation {worst:.3e}"),
    )
}

fn nested_sum_direct_vs_closed() -> Outcome {
    let mut words = Vec::new();
    for len in 1..=3u32 {
        for code in 0..4i64.pow(len) {
            let entries: Vec<i64> = (0..len).map(|i| 2 + (code / 4i64.pow(i)) % 4).collect();
            words.push(ContinuedFraction::new(entries).unwrap());
        }
    }
    let (mut total, mut bad, mut worst) = (0, 0, 0.0f64);
    for r in [5, 13] {
        let params = TheoryParams::new(r).unwrap();
        for cf in words.iter().filter(|cf| cf.is_nondegenerate()) {
            for jo in 1..=params.dim() {
                for ji in 1..=params.dim() {
                    let direct: Complex64 = im_sum(&params, cf, jo, ji, ImSumMode::Direct).unwrap();
                    let closed: Complex64 = im_sum(&params, cf, jo, ji, ImSumMode::Closed).unwrap();
                    let dev = (direct - closed).norm();
                    total += 1;
                    worst = worst.max(dev);
                    if dev > TOL {
                        bad += 1;
                    }
                }
            }
        }
    }
    outcome(
        bad == 0,
        format!("{bad} of {total} entries differ, max deviation {worst:.3e}"),
    )
}

fn gauss_reciprocity_grid() -> Outcome {
    let (mut total, mut worst) = (0, 0.0f64);
    for n in 1..=40 {
        for m in 1..=40 {
            if (n * m) % 2 == 1 {
                continue;
            }
            for k in 0..n {
                let inst = ReciprocityInstance::new(n, m, Ratio::new(k, n)).unwrap();
                let (lhs, rhs) = gauss_reciprocity::<Complex64>(&inst);
                worst = worst.max((lhs - rhs).norm());
                total += 1;
            }
        }
    }
    outcome(
        worst <= TOL,
        format!("{total} instances, max deviation {worst:.3e}"),
    )
}

fn generator_symmetries() -> Outcome {
    let mut failures = 0;
    let mut checked = 0;
    for r in [5i64, 13, 17] {
        let s = |j, l| s_entry::<CyclotomicNumber>(r, j, l);
        let t = |j| t_entry::<CyclotomicNumber>(r, j);
        for j in 1..=3 * r {
            if t(j) != t(j + r) || t(j) != t(r - j) {
                failures += 1;
            }
            for l in 1..=3 * r {
                let base = s(j, l);
                if base != s(j, r + l) || base != -s(j, r - l) {
                    failures += 1;
                }
                checked += 1;
            }
        }
    }
    outcome(
        failures == 0,
        format!("{checked} index pairs, {failures} exact mismatches"),
    )
}

fn rademacher_three_ways() -> Outcome {
    let mut bad = Vec::new();
    let pairs = lens_pairs(50);
    for &(p, q) in &pairs {
        let (cf, u) = cf_for_lens(p, q).unwrap();
        let link = linking_data(&cf);
        let phi = rademacher_phi(&u).unwrap();
        let from_cf = BigRational::from_integer(BigInt::from(rademacher_phi_cf(&cf)));
        let from_plumbing =
            BigRational::from_integer(BigInt::from(link.trace - 3 * link.signature));
        if phi != from_cf || phi != from_plumbing {
            bad.push((p, q));
        }
    }
    outcome(
        bad.is_empty(),
        format!("{} lens spaces, {} disagreements", pairs.len(), bad.len()),
    )
}

fn homeomorphism_invariance() -> Outcome {
    let report = verify_grid(25, &LEVELS, Backend::Numeric, TOL).expect("grid evaluates");
    let closed_worst = report
        .entries
        .iter()
        .map(|e| e.closed_homeomorphism_deviation)
        .fold(0.0, f64::max);
    let oracle_worst = report
        .entries
        .iter()
        .map(|e| e.oracle_homeomorphism_deviation)
        .fold(0.0, f64::max);
    // q + kp before normalization
    let mut shift_worst = 0.0f64;
    for e in &report.entries {
        let params = TheoryParams::new(e.r).unwrap();
        let base = normalize_lens(e.p, e.q).unwrap();
        let shifted = normalize_lens(e.p, e.q + 3 * e.p).unwrap();
        assert_eq!(inverse_q(&base), e.q_inverse);
        let a: Complex64 = wrt_closed_value(&base, &params, SignReading::Unsigned).unwrap();
        let b: Complex64 = wrt_closed_value(&shifted, &params, SignReading::Unsigned).unwrap();
        shift_worst = shift_worst.max((a - b).norm());
    }
    let worst = closed_worst.max(oracle_worst).max(shift_worst);
    outcome(
        worst <= TOL,
        format!(
            "{} lens spaces; q* deviation closed {closed_worst:.3e}, oracle {oracle_worst:.3e}; q+3p deviation {shift_worst:.3e}",
            report.entries.len()
        ),
    )
}

fn dedekind_identities() -> Outcome {
    let mut failures = 0;
    let mut checked = 0;
    let rat = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
    for p in 1..=60i64 {
        for q in -2 * p..=2 * p {
            let s = dedekind_sum(q, p).unwrap();
            checked += 1;
            if s != dedekind_sum(q + p, p).unwrap() || s != -dedekind_sum(-q, p).unwrap() {
                failures += 1;
            }
            if q >= 1 && p.gcd(&q) == 1 {
                let recip = &s + dedekind_sum(p, q).unwrap();
                let expected = rat(-1, 4) + (rat(p, q) + rat(q, p) + rat(1, p * q)) / rat(12, 1);
                if recip != expected {
                    failures += 1;
                }
                let q_star = q.extended_gcd(&p).x.rem_euclid(p);
                if dedekind_sum(q_star, p).unwrap() != s {
                    failures += 1;
                }
            }
        }
    }
    outcome(
        failures == 0,
        format!("{checked} sums, {failures} identity failures"),
    )
}

fn representation_relations() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for r in LEVELS {
        let params = TheoryParams::new(r).unwrap();
        let rel = RelationCheck::<Complex64>::compute(&params);
        let s4 = rel.s_fourth_deviation();
        let scalar = rel.st_sixth_scalar(TOL);
        pass &= s4 <= TOL && scalar.is_some();
        let shown = match scalar {
            Some(z) => format!("{:.12}{:+.12}i", z.re, z.im),
            None => "not scalar".into(),
        };
        parts.push(format!("r={r}: |S^4-I|={s4:.1e}, (ST)^6={shown}"));
    }
    outcome(pass, parts.join("; "))
}

fn main() {
    let criteria: [Criterion; 10] = [
        (
            "closed lens formula vs oracle, p <= 25, r in {5,13,17,29}, 1e-9",
            closed_vs_oracle_numeric,
        ),
        (
            "closed lens formula vs oracle, exact, p <= 8, r in {5,13}",
            closed_vs_oracle_exact,
        ),
        (
            "closed R(U) entries vs matrix product, p <= 25",
            closed_matrix_vs_brute_force,
        ),
        (
            "nested sum direct vs closed, length <= 3, entries 2..5",
            nested_sum_direct_vs_closed,
        ),
        ("Gauss sum reciprocity, n, m <= 40", gauss_reciprocity_grid),
        (
            "S and T index symmetries, exact, r in {5,13,17}",
            generator_symmetries,
        ),
        ("Rademacher phi three ways, p <= 50", rademacher_three_ways),
        (
            "invariance under q -> q + kp and q -> q*",
            homeomorphism_invariance,
        ),
        ("Dedekind sum identities, p <= 60", dedekind_identities),
        ("S^4 = I and (ST)^6 scalar", representation_relations),
    ];
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = run();
        let tag = if result.pass { "PASS" } else { "FAIL" };
        println!(
            "[{tag}] criterion {:>2}: {name} ({:.1}s): {}",
            i + 1,
            start.elapsed().as_secs_f64(),
            result.detail
        );
        if !result.pass {
            failed.push(i + 1);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all {} criteria pass", criteria.len());
    } else {
        println!(
            "acceptance: {} of {} criteria fail: {:?}",
            failed.len(),
            criteria.len(),
            failed
        );
        std::process::exit(1);
    }
}
