//! Exact arithmetic in cyclotomic fields.
//!
//! A value lives in Q(ζ_N) and is stored as integer coordinates in the power
//! basis 1, ζ_N, …, ζ_N^{φ(N)-1} over one positive common denominator.
//! Conductors are kept off 2 (mod 4) since Q(ζ_{2m}) = Q(ζ_m) for odd m.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::field::reduce_fraction;
use crate::numtheory::{divisors, factorize, totient};

fn poly_cache() -> &'static Mutex<HashMap<u64, Arc<Vec<i64>>>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<i64>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Coefficients of Φ_n, lowest degree first. Cached process-wide.
pub fn cyclotomic_polynomial(n: u64) -> Arc<Vec<i64>> {
    assert!(n >= 1, "cyclotomic polynomial of order 0");
    if let Some(p) = poly_cache().lock().expect("poisoned cache").get(&n) {
        return p.clone();
    }
    let mut poly = vec![0i64; n as usize + 1];
    poly[0] = -1;
    poly[n as usize] = 1;
    for d in divisors(n) {
        if d < n {
            poly = divide_monic(&poly, &cyclotomic_polynomial(d));
        }
    }
    let poly = Arc::new(poly);
    poly_cache()
        .lock()
        .expect("poisoned cache")
        .insert(n, poly.clone());
    poly
}

// exact quotient of num by a monic divisor
fn divide_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dn = den.len() - 1;
    let mut rem = num.to_vec();
    let mut quot = vec![0i64; num.len() - dn];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dn];
        quot[k] = c;
        if c != 0 {
            for (i, &di) in den.iter().enumerate() {
                rem[k + i] = rem[k + i]
                    .checked_sub(c.checked_mul(di).expect("cyclotomic coefficient overflow"))
                    .expect("cyclotomic coefficient overflow");
            }
        }
    }
    debug_assert!(rem.iter().all(|&x| x == 0));
    quot
}

// reduce a polynomial in ζ_n modulo Φ_n, leaving φ(n) coordinates
fn reduce_mod_phi(mut v: Vec<BigInt>, n: u64) -> Vec<BigInt> {
    let phi = cyclotomic_polynomial(n);
    let deg = phi.len() - 1;
    if v.len() > deg {
        for k in (deg..v.len()).rev() {
            if v[k].is_zero() {
                continue;
            }
            let c = std::mem::take(&mut v[k]);
            for (i, &pi) in phi[..deg].iter().enumerate() {
                if pi != 0 {
                    v[k - deg + i] -= &c * pi;
                }
            }
        }
    }
    v.resize(deg, BigInt::zero());
    v
}

#[derive(Clone)]
pub struct CyclotomicNumber {
    conductor: u64,
    num: Vec<BigInt>,
    den: BigInt,
}

impl CyclotomicNumber {
    /// Build from a dense vector of ζ_n^k coefficients (any length, exponents
    /// read mod n), over a common denominator.
    fn from_dense(n: u64, dense: Vec<BigInt>, den: BigInt) -> Self {
        let (n, dense) = if n % 4 == 2 {
            let m = n / 2;
            let mut folded = vec![BigInt::zero(); m as usize];
            let half = m.div_ceil(2);
            for (k, c) in dense.into_iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let k = k as u64;
                let e = ((k % m) * half % m) as usize;
                if k.is_multiple_of(2) {
                    folded[e] += c;
                } else {
                    folded[e] -= c;
                }
            }
            (m, folded)
        } else {
            let mut folded = vec![BigInt::zero(); n as usize];
            for (k, c) in dense.into_iter().enumerate() {
                if !c.is_zero() {
                    folded[k % n as usize] += c;
                }
            }
            (n, folded)
        };
        let num = reduce_mod_phi(dense, n);
        Self::normalized(n, num, den)
    }

    fn normalized(conductor: u64, mut num: Vec<BigInt>, mut den: BigInt) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if den.is_negative() {
            den = -den;
            for c in num.iter_mut() {
                *c = -&*c;
            }
        }
        let g = num.iter().fold(den.clone(), |g, c| g.gcd(c));
        if num.iter().all(|c| c.is_zero()) {
            den = BigInt::one();
        } else if !g.is_one() {
            for c in num.iter_mut() {
                *c = &*c / &g;
            }
            den /= g;
        }
        CyclotomicNumber {
            conductor,
            num,
            den,
        }
    }

    pub fn zero() -> Self {
        CyclotomicNumber {
            conductor: 1,
            num: vec![BigInt::zero()],
            den: BigInt::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    pub fn from_integer(n: i64) -> Self {
        CyclotomicNumber {
            conductor: 1,
            num: vec![BigInt::from(n)],
            den: BigInt::one(),
        }
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::normalized(1, vec![BigInt::from(num)], BigInt::from(den))
    }

    pub fn from_rational(x: &BigRational) -> Self {
        Self::normalized(1, vec![x.numer().clone()], x.denom().clone())
    }

    /// Build from explicit power-basis coordinates in Q(ζ_N).
    pub fn from_coeffs(conductor: u64, coeffs: &[BigRational]) -> Result<Self> {
        if conductor == 0 {
            return Err(Error::InvalidCyclotomic(
                "conductor must be positive".into(),
            ));
        }
        let phi = totient(conductor) as usize;
        if coeffs.len() != phi {
            return Err(Error::InvalidCyclotomic(format!(
                "conductor {conductor} needs {phi} coefficients, got {}",
                coeffs.len()
            )));
        }
        let den = coeffs.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        let dense = coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        Ok(Self::from_dense(conductor, dense, den))
    }

    /// exp(2πi · a/n) in its minimal field.
    pub fn e_frac(a: i128, n: i128) -> Self {
        let (k, n) = reduce_fraction(a, n);
        let n = u64::try_from(n).expect("conductor too large");
        let mut dense = vec![BigInt::zero(); n as usize];
        dense[k as usize] = BigInt::one();
        Self::from_dense(n, dense, BigInt::one())
    }

    /// Σ coeff · exp(2πi · e/n), reduced once at the end.
    pub fn root_sum(n: i128, terms: &[(i128, i64)]) -> Self {
        assert!(n != 0, "root sum with zero modulus");
        let (sign, n) = if n < 0 { (-1, -n) } else { (1, n) };
        let size = usize::try_from(n).expect("conductor too large");
        let mut counts = vec![0i64; size];
        for &(e, c) in terms {
            counts[(sign * e).rem_euclid(n) as usize] += c;
        }
        let dense = counts.into_iter().map(BigInt::from).collect();
        Self::from_dense(n as u64, dense, BigInt::one())
    }

    /// Positive square root of `n`, built from √2 = ζ₈ + ζ₈⁻¹ and quadratic Gauss sums.
    pub fn sqrt_exact(n: u64) -> Self {
        if n == 0 {
            return Self::zero();
        }
        let mut outside = 1i64;
        let mut acc = Self::one();
        for (p, e) in factorize(n) {
            outside *= (p as i64).pow(e / 2);
            if e % 2 == 1 {
                acc = &acc * &Self::sqrt_prime(p);
            }
        }
        &acc * &Self::from_integer(outside)
    }

    fn sqrt_prime(p: u64) -> Self {
        if p == 2 {
            return &Self::e_frac(1, 8) + &Self::e_frac(-1, 8);
        }
        let p128 = p as i128;
        let terms: Vec<(i128, i64)> = (0..p128).map(|k| (k * k, 1)).collect();
        let gauss = Self::root_sum(p128, &terms);
        if p % 4 == 1 {
            gauss
        } else {
            // the Gauss sum is i√p here
            &gauss * &Self::e_frac(-1, 4)
        }
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    /// Power-basis coordinates as rationals.
    pub fn coeffs(&self) -> Vec<BigRational> {
        self.num
            .iter()
            .map(|c| BigRational::new(c.clone(), self.den.clone()))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(|c| c.is_zero())
    }

    /// Rational value when the number lies in Q.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.num[1..].iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(BigRational::new(self.num[0].clone(), self.den.clone()))
    }

    // coordinates in Q(ζ_l), l a multiple of the conductor
    fn promote(&self, l: u64) -> Vec<BigInt> {
        debug_assert!(l.is_multiple_of(self.conductor));
        if l == self.conductor {
            return self.num.clone();
        }
        let step = (l / self.conductor) as usize;
        let mut dense = vec![BigInt::zero(); l as usize];
        for (k, c) in self.num.iter().enumerate() {
            dense[k * step] = c.clone();
        }
        reduce_mod_phi(dense, l)
    }

    fn common(&self, other: &Self) -> (u64, Vec<BigInt>, Vec<BigInt>) {
        let l = self.conductor.lcm(&other.conductor);
        let a = self.promote(l);
        let b = other.promote(l);
        (l, a, b)
    }

    /// Complex conjugate: ζ^k ↦ ζ^{-k}.
    pub fn conj(&self) -> Self {
        let n = self.conductor as usize;
        let mut dense = vec![BigInt::zero(); n];
        for (k, c) in self.num.iter().enumerate() {
            dense[(n - k) % n] = c.clone();
        }
        Self::from_dense(self.conductor, dense, self.den.clone())
    }

    /// Image under the embedding ζ_N ↦ exp(2πi/N).
    pub fn embed_complex(&self) -> Complex64 {
        let den = self.den.to_f64().unwrap_or(f64::INFINITY);
        let n = self.conductor as f64;
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let w = c.to_f64().unwrap_or(f64::NAN) / den;
            acc += Complex64::from_polar(w, 2.0 * PI * k as f64 / n);
        }
        acc
    }

    pub fn embed(&self) -> crate::field::ComplexApprox {
        self.embed_complex().into()
    }
}

impl PartialEq for CyclotomicNumber {
    fn eq(&self, other: &Self) -> bool {
        if self.conductor == other.conductor {
            return self.den == other.den && self.num == other.num;
        }
        let (_, a, b) = self.common(other);
        a.iter()
            .zip(b.iter())
            .all(|(x, y)| x * &other.den == y * &self.den)
    }
}

impl Eq for CyclotomicNumber {}

impl fmt::Debug for CyclotomicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CyclotomicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})ζ{}", self.conductor)?,
                _ => write!(f, "({c})ζ{}^{k}", self.conductor)?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl Add for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn add(self, rhs: &CyclotomicNumber) -> CyclotomicNumber {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let (l, a, b) = self.common(rhs);
        let num = a
            .iter()
            .zip(b.iter())
            .map(|(x, y)| x * &rhs.den + y * &self.den)
            .collect();
        CyclotomicNumber::normalized(l, num, &self.den * &rhs.den)
    }
}

impl Sub for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn sub(self, rhs: &CyclotomicNumber) -> CyclotomicNumber {
        self + &(-rhs)
    }
}

impl Neg for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn neg(self) -> CyclotomicNumber {
        CyclotomicNumber {
            conductor: self.conductor,
            num: self.num.iter().map(|c| -c).collect(),
            den: self.den.clone(),
        }
    }
}

impl Mul for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn mul(self, rhs: &CyclotomicNumber) -> CyclotomicNumber {
        if self.is_zero() || rhs.is_zero() {
            return CyclotomicNumber::zero();
        }
        let (l, a, b) = self.common(rhs);
        let mut prod = vec![BigInt::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        let num = reduce_mod_phi(prod, l);
        CyclotomicNumber::normalized(l, num, &self.den * &rhs.den)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for CyclotomicNumber {
            type Output = CyclotomicNumber;
            fn $m(self, rhs: CyclotomicNumber) -> CyclotomicNumber {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn neg(self) -> CyclotomicNumber {
        -&self
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum WireInt {
    Small(i64),
    Big(String),
}

impl From<&BigInt> for WireInt {
    fn from(x: &BigInt) -> Self {
        match x.to_i64() {
            Some(v) => WireInt::Small(v),
            None => WireInt::Big(x.to_string()),
        }
    }
}

impl WireInt {
    fn to_bigint(&self) -> std::result::Result<BigInt, String> {
        match self {
            WireInt::Small(v) => Ok(BigInt::from(*v)),
            WireInt::Big(s) => s.parse().map_err(|_| format!("bad integer {s:?}")),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct Wire {
    conductor: u64,
    coeffs: Vec<(WireInt, WireInt)>,
}

impl Serialize for CyclotomicNumber {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let coeffs = self
            .coeffs()
            .iter()
            .map(|c| (WireInt::from(c.numer()), WireInt::from(c.denom())))
            .collect();
        Wire {
            conductor: self.conductor,
            coeffs,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CyclotomicNumber {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let wire = Wire::deserialize(d)?;
        let mut coeffs = Vec::with_capacity(wire.coeffs.len());
        for (n, m) in &wire.coeffs {
            let n = n.to_bigint().map_err(D::Error::custom)?;
            let m = m.to_bigint().map_err(D::Error::custom)?;
            if m.is_zero() {
                return Err(D::Error::custom("zero denominator"));
            }
            coeffs.push(BigRational::new(n, m));
        }
        CyclotomicNumber::from_coeffs(wire.conductor, &coeffs).map_err(D::Error::custom)
    }
}
