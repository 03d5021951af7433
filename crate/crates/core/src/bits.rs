//! Information quantities measured in bits.
//!
//! PIN-model quantities are exact rationals; anything derived from a
//! logarithm is a binary64 approximation. Arithmetic promotes to the
//! approximate form as soon as one operand is approximate, and comparisons
//! involving an approximate operand use [`TOLERANCE`].

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Absolute comparison tolerance for binary64 quantities.
pub const TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug)]
pub enum Bits {
    Exact(BigRational),
    Approx(f64),
}

impl Bits {
    pub fn zero() -> Self {
        Bits::Exact(BigRational::zero())
    }

    pub fn from_int(n: i64) -> Self {
        Bits::Exact(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Bits::Exact(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Bits::Exact(_))
    }

    pub fn as_exact(&self) -> Option<&BigRational> {
        match self {
            Bits::Exact(q) => Some(q),
            Bits::Approx(_) => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Bits::Exact(q) => rational_to_f64(q),
            Bits::Approx(x) => *x,
        }
    }

    /// The exact rational value of this quantity. Approximate values convert
    /// to the dyadic rational they represent.
    pub fn to_rational(&self) -> BigRational {
        match self {
            Bits::Exact(q) => q.clone(),
            Bits::Approx(x) => BigRational::from_float(*x).unwrap_or_else(BigRational::zero),
        }
    }

    /// Three-way comparison; exact when both sides are exact, otherwise values
    /// within [`TOLERANCE`] compare equal.
    pub fn cmp_tol(&self, other: &Bits) -> Ordering {
        self.cmp_with(other, TOLERANCE)
    }

    pub fn cmp_with(&self, other: &Bits, tol: f64) -> Ordering {
        match (self, other) {
            (Bits::Exact(a), Bits::Exact(b)) => a.cmp(b),
            _ => {
                let d = self.to_f64() - other.to_f64();
                if d.abs() <= tol {
                    Ordering::Equal
                } else if d < 0.0 {
                    Ordering::Less
                } else {
                    Ordering::Greater
                }
            }
        }
    }

    pub fn approx_eq(&self, other: &Bits) -> bool {
        self.cmp_tol(other) == Ordering::Equal
    }

    pub fn is_negative_tol(&self) -> bool {
        self.cmp_tol(&Bits::zero()) == Ordering::Less
    }

    /// Reduces a slice of quantities with `+`.
    pub fn sum<'a, I: IntoIterator<Item = &'a Bits>>(items: I) -> Bits {
        items.into_iter().fold(Bits::zero(), |acc, x| &acc + x)
    }

    pub fn div_int(&self, d: i64) -> Bits {
        self / &Bits::from_int(d)
    }

    /// Human-readable rendering: exact values show `num/den` alongside a
    /// decimal, approximate values a 9-place decimal.
    pub fn render(&self) -> String {
        match self {
            Bits::Exact(q) => render_rational(q),
            Bits::Approx(x) => format!("{x:.9}"),
        }
    }
}

/// `"5 (= 5/1)"` for integers, `"3/2 (= 1.500000)"` otherwise.
pub fn render_rational(q: &BigRational) -> String {
    if q.is_integer() {
        format!("{} (= {}/1)", q.numer(), q.numer())
    } else {
        format!("{}/{} (= {:.6})", q.numer(), q.denom(), rational_to_f64(q))
    }
}

/// Canonical `num/den` string; the denominator is always present.
pub fn rational_string(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::InvalidArgument(format!("not a rational: {s:?}"));
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => {
            let n: BigInt = s.parse().map_err(|_| bad())?;
            Ok(BigRational::from_integer(n))
        }
    }
}

pub fn rational_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        // Very large numerators/denominators: scale through the ratio of magnitudes.
        let n = q.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = q.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

/// `-p log2 p` summed over a distribution; zero-probability entries contribute nothing.
pub fn shannon_entropy<I: IntoIterator<Item = f64>>(probs: I) -> f64 {
    let h: f64 = probs
        .into_iter()
        .filter(|&p| p > 0.0)
        .map(|p| -p * p.log2())
        .sum();
    if h == 0.0 {
        0.0
    } else {
        h
    }
}

/// Binary entropy function.
pub fn binary_entropy(p: f64) -> f64 {
    shannon_entropy([p, 1.0 - p])
}

fn promote(a: &Bits, b: &Bits, exact: impl Fn(&BigRational, &BigRational) -> BigRational, approx: impl Fn(f64, f64) -> f64) -> Bits {
    match (a, b) {
        (Bits::Exact(x), Bits::Exact(y)) => Bits::Exact(exact(x, y)),
        _ => Bits::Approx(approx(a.to_f64(), b.to_f64())),
    }
}

impl Add for &Bits {
    type Output = Bits;
    fn add(self, rhs: &Bits) -> Bits {
        promote(self, rhs, |x, y| x + y, |x, y| x + y)
    }
}

impl Sub for &Bits {
    type Output = Bits;
    fn sub(self, rhs: &Bits) -> Bits {
        promote(self, rhs, |x, y| x - y, |x, y| x - y)
    }
}

impl Mul for &Bits {
    type Output = Bits;
    fn mul(self, rhs: &Bits) -> Bits {
        promote(self, rhs, |x, y| x * y, |x, y| x * y)
    }
}

impl Div for &Bits {
    type Output = Bits;
    fn div(self, rhs: &Bits) -> Bits {
        promote(self, rhs, |x, y| x / y, |x, y| x / y)
    }
}

impl Add for Bits {
    type Output = Bits;
    fn add(self, rhs: Bits) -> Bits {
        &self + &rhs
    }
}

impl Sub for Bits {
    type Output = Bits;
    fn sub(self, rhs: Bits) -> Bits {
        &self - &rhs
    }
}

impl Neg for Bits {
    type Output = Bits;
    fn neg(self) -> Bits {
        match self {
            Bits::Exact(q) => Bits::Exact(-q),
            Bits::Approx(x) => Bits::Approx(-x),
        }
    }
}

impl PartialEq for Bits {
    fn eq(&self, other: &Bits) -> bool {
        self.approx_eq(other)
    }
}

impl From<f64> for Bits {
    fn from(x: f64) -> Self {
        Bits::Approx(x)
    }
}

impl From<BigRational> for Bits {
    fn from(q: BigRational) -> Self {
        Bits::Exact(q)
    }
}

impl fmt::Display for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Exact values serialize as `"num/den"` strings, approximate ones as JSON numbers.
impl Serialize for Bits {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Bits::Exact(q) => serializer.serialize_str(&rational_string(q)),
            Bits::Approx(x) => serializer.serialize_f64(*x),
        }
    }
}
