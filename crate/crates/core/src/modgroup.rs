//! SL(2, Z), continued fractions and the linking data of their plumbings.

use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An integer matrix (a b; c d) with ad - bc = 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Sl2 {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl Sl2 {
    pub const IDENTITY: Sl2 = Sl2 {
        a: 1,
        b: 0,
        c: 0,
        d: 1,
    };
    pub const S: Sl2 = Sl2 {
        a: 0,
        b: -1,
        c: 1,
        d: 0,
    };

    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        if a as i128 * d as i128 - b as i128 * c as i128 != 1 {
            return Err(Error::NotUnimodular { a, b, c, d });
        }
        Ok(Sl2 { a, b, c, d })
    }

    /// T^m = (1 m; 0 1).
    pub fn t_pow(m: i64) -> Self {
        Sl2 {
            a: 1,
            b: m,
            c: 0,
            d: 1,
        }
    }

    pub fn checked_mul(&self, rhs: &Sl2) -> Result<Sl2> {
        let f = |x: i64, y: i64, z: i64, w: i64| -> Result<i64> {
            let v = x as i128 * y as i128 + z as i128 * w as i128;
            i64::try_from(v).map_err(|_| Error::Overflow("SL(2,Z) product"))
        };
        Ok(Sl2 {
            a: f(self.a, rhs.a, self.b, rhs.c)?,
            b: f(self.a, rhs.b, self.b, rhs.d)?,
            c: f(self.c, rhs.a, self.d, rhs.c)?,
            d: f(self.c, rhs.b, self.d, rhs.d)?,
        })
    }

    pub fn trace(&self) -> i64 {
        self.a + self.d
    }
}

impl Mul for Sl2 {
    type Output = Sl2;
    fn mul(self, rhs: Sl2) -> Sl2 {
        self.checked_mul(&rhs).expect("SL(2,Z) product overflow")
    }
}

impl fmt::Display for Sl2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}; {}, {})", self.a, self.b, self.c, self.d)
    }
}

/// The partial product T^{m_i} S ⋯ T^{m_1} S.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Convergent {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl Convergent {
    pub fn as_matrix(&self) -> Sl2 {
        Sl2 {
            a: self.a,
            b: self.b,
            c: self.c,
            d: self.d,
        }
    }
}

/// A finite sequence (m_1, …, m_t) with its convergents 0..=t.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "Vec<i64>", try_from = "Vec<i64>")]
pub struct ContinuedFraction {
    entries: Vec<i64>,
    convergents: Vec<Convergent>,
}

impl ContinuedFraction {
    pub fn new(entries: Vec<i64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptyContinuedFraction);
        }
        let mut convergents = Vec::with_capacity(entries.len() + 1);
        let mut prev = Convergent {
            a: 1,
            b: 0,
            c: 0,
            d: 1,
        };
        convergents.push(prev);
        for &m in &entries {
            let step = |x: i64, y: i64| -> Result<i64> {
                let v = m as i128 * x as i128 - y as i128;
                i64::try_from(v).map_err(|_| Error::Overflow("convergent recurrence"))
            };
            let next = Convergent {
                a: step(prev.a, prev.c)?,
                b: step(prev.b, prev.d)?,
                c: prev.a,
                d: prev.b,
            };
            convergents.push(next);
            prev = next;
        }
        Ok(ContinuedFraction {
            entries,
            convergents,
        })
    }

    pub fn entries(&self) -> &[i64] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Convergent i for 0 <= i <= t; convergent 0 is the identity.
    pub fn convergent(&self, i: usize) -> Convergent {
        self.convergents[i]
    }

    pub fn convergents(&self) -> &[Convergent] {
        &self.convergents
    }

    pub fn matrix(&self) -> Sl2 {
        self.convergents[self.len()].as_matrix()
    }

    /// The product computed by multiplying 2×2 matrices one factor at a time.
    pub fn product_direct(&self) -> Result<Sl2> {
        self.entries.iter().try_fold(Sl2::IDENTITY, |acc, &m| {
            Sl2::t_pow(m).checked_mul(&Sl2::S)?.checked_mul(&acc)
        })
    }

    /// m_t - 1/(m_{t-1} - … - 1/m_1), or `None` when it is infinite.
    pub fn nested_value(&self) -> Option<BigRational> {
        let mut value: Option<BigRational> = None;
        for (i, &m) in self.entries.iter().enumerate() {
            let m = BigRational::from_integer(BigInt::from(m));
            value = match value {
                _ if i == 0 => Some(m),
                None => Some(m),
                Some(x) if x.is_zero() => None,
                Some(x) => Some(m - x.recip()),
            };
        }
        value
    }

    /// Entries with all a_1, …, a_t nonzero.
    pub fn is_nondegenerate(&self) -> bool {
        self.convergents[1..].iter().all(|c| c.a != 0)
    }
}

impl fmt::Display for ContinuedFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(|m| m.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

impl From<ContinuedFraction> for Vec<i64> {
    fn from(cf: ContinuedFraction) -> Vec<i64> {
        cf.entries
    }
}

impl TryFrom<Vec<i64>> for ContinuedFraction {
    type Error = Error;
    fn try_from(v: Vec<i64>) -> Result<Self> {
        ContinuedFraction::new(v)
    }
}

/// Build the convergents and the product for a list of entries.
pub fn cf_to_matrix(entries: &[i64]) -> Result<(ContinuedFraction, Sl2)> {
    let cf = ContinuedFraction::new(entries.to_vec())?;
    let u = cf.matrix();
    debug_assert_eq!(Ok(u), cf.product_direct());
    Ok((cf, u))
}

// outermost-first expansion of |x| > 1 with all entries >= 2 (or <= -2); reversed on return
fn expand_beyond_one(mut num: i64, mut den: i64, positive: bool) -> Vec<i64> {
    let mut out = Vec::new();
    loop {
        let m = if positive {
            Integer::div_ceil(&num, &den)
        } else {
            Integer::div_floor(&num, &den)
        };
        out.push(m);
        if m * den == num {
            break;
        }
        let next_den = m * den - num;
        (num, den) = if next_den < 0 {
            (-den, -next_den)
        } else {
            (den, next_den)
        };
    }
    out.reverse();
    out
}

/// Expansion of num/den in the normal form used for plumbings:
/// all entries >= 2 above 1, all <= -2 below -1, and a trailing 0 appended
/// to an expansion of -den/num when |num/den| < 1.
pub fn cf_expand(num: i64, den: i64) -> Result<ContinuedFraction> {
    if den == 0 {
        return Err(Error::NoExpansion { num, den });
    }
    let g = num.gcd(&den);
    let (mut num, mut den) = (num / g.max(1), den / g.max(1));
    if den < 0 {
        num = -num;
        den = -den;
    }
    let entries = if num == 0 {
        vec![0]
    } else if num.abs() == den {
        return Err(Error::NoExpansion { num, den });
    } else if num > den {
        expand_beyond_one(num, den, true)
    } else if num < -den {
        expand_beyond_one(num, den, false)
    } else {
        // |x| < 1: x = 0 - 1/y with y = -den/num
        let (yn, yd) = if num > 0 { (-den, num) } else { (den, -num) };
        let mut v = expand_beyond_one(yn, yd, num < 0);
        v.push(0);
        v
    };
    ContinuedFraction::new(entries)
}

/// Continued fraction and matrix U = (q b; p d) presenting L(p, q).
///
/// Expects normalized input: p >= 2 with -p < q < 0 and gcd(p, q) = 1, or (1, 0).
pub fn cf_for_lens(p: i64, q: i64) -> Result<(ContinuedFraction, Sl2)> {
    if p == 1 && q == 0 {
        let cf = ContinuedFraction::new(vec![0])?;
        return Ok((cf, Sl2::S));
    }
    if p < 2 || q <= -p || q >= 0 || p.gcd(&q) != 1 {
        return Err(Error::InvalidLens { p, q });
    }
    let mut entries = expand_beyond_one(p, -q, true);
    entries.push(0);
    let (cf, u) = cf_to_matrix(&entries)?;
    debug_assert_eq!((u.a, u.c), (q, p));
    Ok((cf, u))
}

/// Linking matrix of the linear plumbing on m_1, …, m_{t-1} and derived data.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkingData {
    pub framings: Vec<i64>,
    pub matrix: Vec<Vec<i64>>,
    pub trace: i64,
    pub signature: i64,
    pub weight: i64,
}

/// Linking data of the chain given by all entries except the last.
pub fn linking_data(cf: &ContinuedFraction) -> LinkingData {
    let framings = cf.entries()[..cf.len() - 1].to_vec();
    let n = framings.len();
    let mut matrix = vec![vec![0i64; n]; n];
    for (i, &m) in framings.iter().enumerate() {
        matrix[i][i] = m;
        if i + 1 < n {
            matrix[i][i + 1] = 1;
            matrix[i + 1][i] = 1;
        }
    }
    let trace = framings.iter().sum();
    let signature = tridiagonal_signature(&framings);
    let weight = (2..=cf.len())
        .map(|i| (cf.convergent(i - 2).a * cf.convergent(i - 1).a).signum())
        .sum();
    LinkingData {
        framings,
        matrix,
        trace,
        signature,
        weight,
    }
}

// signature from the leading principal minors of the tridiagonal matrix
fn tridiagonal_signature(diag: &[i64]) -> i64 {
    let n = diag.len();
    if n == 0 {
        return 0;
    }
    let mut minors: Vec<BigInt> = vec![BigInt::one()];
    let mut prev = BigInt::zero();
    for &m in diag {
        let cur = minors.last().unwrap().clone();
        let next = BigInt::from(m) * &cur - &prev;
        prev = cur;
        minors.push(next);
    }
    let singular = minors[n].is_zero();
    let considered = if singular { &minors[..n] } else { &minors[..] };
    // an interior zero minor sits between minors of opposite sign, so any sign counts once
    let mut negatives = 0i64;
    let mut last_positive = true;
    for d in &considered[1..] {
        let positive = if d.is_zero() {
            !last_positive
        } else {
            d > &BigInt::zero()
        };
        if positive != last_positive {
            negatives += 1;
        }
        last_positive = positive;
    }
    let rank = if singular { n as i64 - 1 } else { n as i64 };
    rank - 2 * negatives
}
