//! Integer helpers, Dedekind sums, the Rademacher function and Gauss reciprocity.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::modgroup::{ContinuedFraction, Sl2};

/// Prime factorization by trial division, primes ascending.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut out = vec![1u64];
    for (p, e) in factorize(n) {
        let len = out.len();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                out.push(out[i] * pk);
            }
        }
    }
    out.sort_unstable();
    out
}

pub fn totient(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n).len() == 1 && factorize(n)[0].1 == 1
}

/// The sawtooth ((x)): x - floor(x) - 1/2 off the integers, 0 on them.
pub fn sawtooth(x: &BigRational) -> BigRational {
    if x.is_integer() {
        return BigRational::zero();
    }
    x - x.floor() - BigRational::new(1.into(), 2.into())
}

/// s(q, p) = sum over k mod p of ((k/p))((qk/p)), for p >= 1.
pub fn dedekind_sum(q: i64, p: i64) -> Result<BigRational> {
    if p < 1 {
        return Err(Error::InvalidLens { p, q });
    }
    // ((k/p))((qk/p)) = (2k - p)(2r - p) / 4p^2 when p does not divide qk
    let p128 = p as i128;
    let mut acc: i128 = 0;
    for k in 1..p128 {
        let r = (q as i128 * k).rem_euclid(p128);
        if r != 0 {
            acc += (2 * k - p128) * (2 * r - p128);
        }
    }
    Ok(BigRational::new(
        BigInt::from(acc),
        BigInt::from(4 * p128 * p128),
    ))
}

/// Dedekind sum together with its arguments; `6p·s` is checked to be integral.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DedekindSum {
    pub q: i64,
    pub p: i64,
    pub value: BigRational,
}

impl DedekindSum {
    pub fn new(q: i64, p: i64) -> Result<Self> {
        let value = dedekind_sum(q, p)?;
        debug_assert!((&value * BigRational::from_integer(BigInt::from(6 * p))).is_integer());
        Ok(DedekindSum { q, p, value })
    }
}

/// Rademacher function (a + d)/c - 12 sign(c) s(d, |c|).
pub fn rademacher_phi(u: &Sl2) -> Result<BigRational> {
    if u.c == 0 {
        return Err(Error::ZeroLowerLeft);
    }
    let s = dedekind_sum(u.d, u.c.abs())?;
    let lead = BigRational::new(BigInt::from(u.a + u.d), BigInt::from(u.c));
    let twelve = BigRational::from_integer(BigInt::from(12 * u.c.signum()));
    Ok(lead - twelve * s)
}

/// Φ computed from the continued fraction: sum of chain framings minus 3(t - 1).
pub fn rademacher_phi_cf(cf: &ContinuedFraction) -> i64 {
    let t = cf.len() as i64;
    cf.entries()[..cf.len() - 1].iter().sum::<i64>() - 3 * (t - 1)
}

/// Input to the reciprocity identity: positive `n`, `m` with `nm` even and `n·shift` integral.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReciprocityInstance {
    n: i64,
    m: i64,
    shift: Ratio<i64>,
}

impl ReciprocityInstance {
    pub fn new(n: i64, m: i64, shift: Ratio<i64>) -> Result<Self> {
        if n < 1 || m < 1 {
            return Err(Error::InvalidReciprocity(format!(
                "n = {n}, m = {m} must be positive"
            )));
        }
        if (n * m).is_odd() {
            return Err(Error::InvalidReciprocity(format!("nm = {} is odd", n * m)));
        }
        if !(shift * n).is_integer() {
            return Err(Error::InvalidReciprocity(format!(
                "n * {shift} is not an integer"
            )));
        }
        Ok(ReciprocityInstance { n, m, shift })
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    pub fn m(&self) -> i64 {
        self.m
    }

    pub fn shift(&self) -> Ratio<i64> {
        self.shift
    }
}

/// Both sides of the quadratic reciprocity for Gauss sums:
/// sum over λ mod n of e_2n(mλ² + 2nψλ), and
/// ζ₈ √(n/m) · sum over λ mod m of e_2mn(-(nλ + nψ)²).
pub fn gauss_reciprocity<V: Scalar>(inst: &ReciprocityInstance) -> (V, V) {
    let n = inst.n as i128;
    let m = inst.m as i128;
    let k = (inst.shift * inst.n).to_integer() as i128;
    let lhs_terms: Vec<(i128, i64)> = (0..n).map(|l| (m * l * l + 2 * k * l, 1)).collect();
    let lhs = V::root_sum(2 * n, &lhs_terms);
    let rhs_terms: Vec<(i128, i64)> = (0..m)
        .map(|l| {
            let x = n * l + k;
            (-x * x, 1)
        })
        .collect();
    let sum = V::root_sum(2 * m * n, &rhs_terms);
    let prefactor = V::root_of_unity(1, 8)
        .times(&V::sqrt_int((inst.n * inst.m) as u64))
        .scale(1, inst.m);
    (lhs, prefactor.times(&sum))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    use crate::cyclo::CyclotomicNumber;
    use crate::modgroup::cf_for_lens;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn factor_helpers() {
        assert_eq!(factorize(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(totient(1), 1);
        assert_eq!(totient(36), 12);
        assert!(is_prime(29) && !is_prime(25) && !is_prime(1));
    }

    #[test]
    fn sawtooth_values() {
        assert_eq!(sawtooth(&q(1, 4)), q(-1, 4));
        assert_eq!(sawtooth(&q(-1, 4)), q(1, 4));
        assert_eq!(sawtooth(&q(3, 1)), q(0, 1));
    }

    #[test]
    fn dedekind_values() {
        assert_eq!(dedekind_sum(1, 1).unwrap(), q(0, 1));
        assert_eq!(dedekind_sum(1, 3).unwrap(), q(1, 18));
        assert_eq!(dedekind_sum(2, 5).unwrap(), q(0, 1));
        // s(1, p) = (p - 1)(p - 2) / 12p
        for p in 1..40 {
            assert_eq!(dedekind_sum(1, p).unwrap(), q((p - 1) * (p - 2), 12 * p));
        }
        assert!(dedekind_sum(1, 0).is_err());
        assert!(DedekindSum::new(3, 7).is_ok());
    }

    #[test]
    fn dedekind_matches_sawtooth_definition() {
        for p in 1..20i64 {
            for k in -p..2 * p {
                let direct = (1..p).fold(BigRational::zero(), |acc, j| {
                    acc + sawtooth(&q(j, p)) * sawtooth(&q(k * j, p))
                });
                assert_eq!(dedekind_sum(k, p).unwrap(), direct);
            }
        }
    }

    #[test]
    fn phi_of_lens_matrices() {
        let (cf, u) = cf_for_lens(5, -2).unwrap();
        assert_eq!(rademacher_phi(&u).unwrap(), q(-1, 1));
        assert_eq!(rademacher_phi_cf(&cf), -1);
        assert_eq!(rademacher_phi(&Sl2::S).unwrap(), q(0, 1));
        assert!(rademacher_phi(&Sl2::t_pow(3)).is_err());
    }

    #[test]
    fn reciprocity_examples() {
        let inst = ReciprocityInstance::new(1, 2, Ratio::from_integer(0)).unwrap();
        let (lhs, rhs) = gauss_reciprocity::<Complex64>(&inst);
        assert!((lhs - 1.0).norm() < 1e-12 && (rhs - 1.0).norm() < 1e-12);
        let inst = ReciprocityInstance::new(4, 1, Ratio::new(1, 4)).unwrap();
        let (lhs, rhs) = gauss_reciprocity::<CyclotomicNumber>(&inst);
        assert_eq!(lhs, CyclotomicNumber::from_integer(2));
        assert_eq!(rhs, CyclotomicNumber::from_integer(2));
    }

    #[test]
    fn reciprocity_exact_small() {
        for n in 1..8 {
            for m in 1..8 {
                if (n * m) % 2 == 1 {
                    continue;
                }
                for k in 0..n {
                    let inst = ReciprocityInstance::new(n, m, Ratio::new(k, n)).unwrap();
                    let (lhs, rhs) = gauss_reciprocity::<CyclotomicNumber>(&inst);
                    assert_eq!(lhs, rhs, "n={n} m={m} k={k}");
                }
            }
        }
    }

    #[test]
    fn reciprocity_preconditions() {
        assert!(ReciprocityInstance::new(3, 3, Ratio::from_integer(0)).is_err());
        assert!(ReciprocityInstance::new(0, 2, Ratio::from_integer(0)).is_err());
        assert!(ReciprocityInstance::new(2, 3, Ratio::new(1, 3)).is_err());
    }
}
