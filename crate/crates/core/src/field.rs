//! The scalar abstraction shared by the numeric and exact backends.

use std::f64::consts::PI;
use std::fmt::Debug;
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cyclo::CyclotomicNumber;

pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Comparison tolerance: `WRT_TOLERANCE` if set to a positive float, else 1e-9.
pub fn default_tolerance() -> f64 {
    static TOL: OnceLock<f64> = OnceLock::new();
    *TOL.get_or_init(|| {
        std::env::var("WRT_TOLERANCE")
            .ok()
            .and_then(|s| s.trim().parse::<f64>().ok())
            .filter(|t| t.is_finite() && *t > 0.0)
            .unwrap_or(DEFAULT_TOLERANCE)
    })
}

/// Reduce `num/den` to `(k, n)` with `n > 0`, `0 <= k < n`, `gcd(k, n) = 1`.
pub fn reduce_fraction(num: i128, den: i128) -> (i128, i128) {
    assert!(den != 0, "root of unity with zero denominator");
    let (mut num, mut den) = if den < 0 { (-num, -den) } else { (num, den) };
    num = num.rem_euclid(den);
    let g = gcd_i128(num, den);
    num /= g;
    den /= g;
    (num, den)
}

fn gcd_i128(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Field operations needed by the representation and invariant code.
pub trait Scalar: Clone + Debug + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_ratio(num: i64, den: i64) -> Self;
    /// exp(2πi · num/den).
    fn root_of_unity(num: i128, den: i128) -> Self;
    /// Σ coeff · exp(2πi · exp/n) over `terms = [(exp, coeff)]`.
    fn root_sum(n: i128, terms: &[(i128, i64)]) -> Self;
    /// Positive square root of a non-negative integer.
    fn sqrt_int(n: u64) -> Self;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negated(&self) -> Self;
    fn conj(&self) -> Self;
    fn scale(&self, num: i64, den: i64) -> Self;
    fn to_complex(&self) -> Complex64;
    /// `{re, im}` for floats, the canonical cyclotomic object for exact values.
    fn to_json(&self) -> serde_json::Value;

    fn i() -> Self {
        Self::root_of_unity(1, 4)
    }

    /// i^k for any integer k.
    fn i_pow(k: i64) -> Self {
        Self::root_of_unity(k as i128, 4)
    }

    fn distance(&self, other: &Self) -> f64 {
        (self.to_complex() - other.to_complex()).norm()
    }
}

impl Scalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }

    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Complex64::new(num as f64 / den as f64, 0.0)
    }

    fn root_of_unity(num: i128, den: i128) -> Self {
        let (k, n) = reduce_fraction(num, den);
        Complex64::from_polar(1.0, 2.0 * PI * (k as f64) / (n as f64))
    }

    fn root_sum(n: i128, terms: &[(i128, i64)]) -> Self {
        terms.iter().fold(Self::zero(), |acc, &(e, c)| {
            acc + Self::root_of_unity(e, n) * (c as f64)
        })
    }

    fn sqrt_int(n: u64) -> Self {
        Complex64::new((n as f64).sqrt(), 0.0)
    }

    fn plus(&self, other: &Self) -> Self {
        self + other
    }

    fn minus(&self, other: &Self) -> Self {
        self - other
    }

    fn times(&self, other: &Self) -> Self {
        self * other
    }

    fn negated(&self) -> Self {
        -self
    }

    fn conj(&self) -> Self {
        Complex64::conj(self)
    }

    fn scale(&self, num: i64, den: i64) -> Self {
        self * (num as f64 / den as f64)
    }

    fn to_complex(&self) -> Complex64 {
        *self
    }

    fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "re": self.re, "im": self.im })
    }
}

impl Scalar for CyclotomicNumber {
    fn zero() -> Self {
        CyclotomicNumber::zero()
    }

    fn one() -> Self {
        CyclotomicNumber::one()
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        CyclotomicNumber::from_ratio(num, den)
    }

    fn root_of_unity(num: i128, den: i128) -> Self {
        CyclotomicNumber::e_frac(num, den)
    }

    fn root_sum(n: i128, terms: &[(i128, i64)]) -> Self {
        CyclotomicNumber::root_sum(n, terms)
    }

    fn sqrt_int(n: u64) -> Self {
        CyclotomicNumber::sqrt_exact(n)
    }

    fn plus(&self, other: &Self) -> Self {
        self + other
    }

    fn minus(&self, other: &Self) -> Self {
        self - other
    }

    fn times(&self, other: &Self) -> Self {
        self * other
    }

    fn negated(&self) -> Self {
        -self
    }

    fn conj(&self) -> Self {
        CyclotomicNumber::conj(self)
    }

    fn scale(&self, num: i64, den: i64) -> Self {
        self * &CyclotomicNumber::from_ratio(num, den)
    }

    fn to_complex(&self) -> Complex64 {
        self.embed_complex()
    }

    fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("cyclotomic values serialize")
    }
}

/// A complex number paired with the tolerance used to compare it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexApprox {
    pub re: f64,
    pub im: f64,
    #[serde(skip, default = "default_tolerance")]
    pub tolerance: f64,
}

impl ComplexApprox {
    pub fn new(re: f64, im: f64) -> Self {
        Self::with_tolerance(re, im, default_tolerance())
    }

    pub fn with_tolerance(re: f64, im: f64, tolerance: f64) -> Self {
        assert!(re.is_finite() && im.is_finite(), "non-finite complex value");
        assert!(tolerance > 0.0, "tolerance must be positive");
        ComplexApprox { re, im, tolerance }
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    pub fn approx_eq(&self, other: &ComplexApprox) -> bool {
        (self.value() - other.value()).norm() <= self.tolerance.max(other.tolerance)
    }
}

impl From<Complex64> for ComplexApprox {
    fn from(z: Complex64) -> Self {
        ComplexApprox::new(z.re, z.im)
    }
}
