use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Relative tolerance used for float-mode comparisons unless overridden.
pub const DEFAULT_REL_TOL: f64 = 1e-9;

/// Numeric mode of a computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NumericMode {
    Exact,
    Float,
}

impl fmt::Display for NumericMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NumericMode::Exact => f.write_str("exact"),
            NumericMode::Float => f.write_str("float"),
        }
    }
}

/// A scalar produced by forest weights and kernel evaluation.
///
/// Exact values are arbitrary-precision rationals and never round. Any
/// operation that mixes an exact and a float operand yields a float.
#[derive(Debug, Clone, PartialEq)]
pub enum KernelValue {
    Exact(BigRational),
    Float(f64),
}

impl KernelValue {
    pub fn zero() -> Self {
        KernelValue::Exact(BigRational::zero())
    }

    pub fn one() -> Self {
        KernelValue::Exact(BigRational::one())
    }

    pub fn integer(v: i64) -> Self {
        KernelValue::Exact(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        KernelValue::Exact(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn mode(&self) -> NumericMode {
        match self {
            KernelValue::Exact(_) => NumericMode::Exact,
            KernelValue::Float(_) => NumericMode::Float,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, KernelValue::Exact(_))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            KernelValue::Exact(r) => r.is_zero(),
            KernelValue::Float(x) => *x == 0.0,
        }
    }

    pub fn as_exact(&self) -> Option<&BigRational> {
        match self {
            KernelValue::Exact(r) => Some(r),
            KernelValue::Float(_) => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            KernelValue::Exact(r) => rational_to_f64(r),
            KernelValue::Float(x) => *x,
        }
    }

    pub fn to_float(&self) -> Self {
        KernelValue::Float(self.to_f64())
    }

    pub fn mul(&self, other: &Self) -> Self {
        match (self, other) {
            (KernelValue::Exact(a), KernelValue::Exact(b)) => KernelValue::Exact(a * b),
            _ => KernelValue::Float(self.to_f64() * other.to_f64()),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        match (self, other) {
            (KernelValue::Exact(a), KernelValue::Exact(b)) => KernelValue::Exact(a + b),
            _ => KernelValue::Float(self.to_f64() + other.to_f64()),
        }
    }

    pub fn pow(&self, exp: u32) -> Self {
        match self {
            KernelValue::Exact(r) => KernelValue::Exact(num_traits::pow(r.clone(), exp as usize)),
            KernelValue::Float(x) => KernelValue::Float(x.powi(exp as i32)),
        }
    }

    /// Exact equality when both sides are exact, relative tolerance otherwise.
    pub fn approx_eq(&self, other: &Self, rel_tol: f64) -> bool {
        match (self, other) {
            (KernelValue::Exact(a), KernelValue::Exact(b)) => a == b,
            _ => floats_close(self.to_f64(), other.to_f64(), rel_tol),
        }
    }

    /// Parses `"p/q"`, `"p"`, or a decimal literal such as `"0.25"` (as an
    /// exact rational).
    pub fn parse_rational(s: &str) -> Result<Self> {
        parse_rational(s).map(KernelValue::Exact)
    }
}

impl Default for KernelValue {
    fn default() -> Self {
        KernelValue::zero()
    }
}

impl fmt::Display for KernelValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KernelValue::Exact(r) => write!(f, "{r}"),
            KernelValue::Float(x) => write!(f, "{x}"),
        }
    }
}

impl From<BigRational> for KernelValue {
    fn from(r: BigRational) -> Self {
        KernelValue::Exact(r)
    }
}

impl From<BigInt> for KernelValue {
    fn from(i: BigInt) -> Self {
        KernelValue::Exact(BigRational::from_integer(i))
    }
}

impl From<f64> for KernelValue {
    fn from(x: f64) -> Self {
        KernelValue::Float(x)
    }
}

impl FromStr for KernelValue {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        KernelValue::parse_rational(s)
    }
}

pub fn floats_close(a: f64, b: f64, rel_tol: f64) -> bool {
    if a == b {
        return true;
    }
    let scale = a.abs().max(b.abs());
    (a - b).abs() <= rel_tol * scale
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid rational literal `{s}`"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(Error::Parse(format!("zero denominator in `{s}`")));
        }
        return Ok(BigRational::new(p, q));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = int.starts_with('-');
        let int_part: BigInt = match int {
            "" | "-" | "+" => BigInt::zero(),
            _ => int.parse().map_err(|_| bad())?,
        };
        let frac_part: BigInt = frac.parse().map_err(|_| bad())?;
        let den = num_traits::pow(BigInt::from(10), frac.len());
        let mut num = int_part.abs() * &den + frac_part;
        if negative {
            num = -num;
        }
        return Ok(BigRational::new(num, den));
    }
    let p: BigInt = s.parse().map_err(|_| bad())?;
    Ok(BigRational::from_integer(p))
}

pub(crate) fn rational_to_f64(r: &BigRational) -> f64 {
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    r.to_f64().unwrap_or(f64::NAN)
}

/// Ring operations by reference, used by the generic recursion engine.
pub(crate) trait Scalar: Clone + Zero + One {
    fn mul_ref(&self, other: &Self) -> Self;
    fn add_ref(&mut self, other: &Self);
    fn close_to(&self, other: &Self) -> bool;
}

macro_rules! exact_scalar {
    ($t:ty) => {
        impl Scalar for $t {
            fn mul_ref(&self, other: &Self) -> Self {
                self * other
            }
            fn add_ref(&mut self, other: &Self) {
                *self += other;
            }
            fn close_to(&self, other: &Self) -> bool {
                self == other
            }
        }
    };
}

exact_scalar!(BigInt);
exact_scalar!(BigRational);

impl Scalar for f64 {
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn add_ref(&mut self, other: &Self) {
        *self += other;
    }
    fn close_to(&self, other: &Self) -> bool {
        floats_close(*self, *other, DEFAULT_REL_TOL)
    }
}
