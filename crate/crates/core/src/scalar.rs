//! Scalar backends.
//!
//! Two number types carry every computation in the crate: [`Rational`], an
//! exact arbitrary-precision fraction kept in lowest terms, and `f64`. Generic
//! code is written against the [`Field`] trait, so a matrix, sample set or
//! polynomial is always built from a single backend. The dynamically tagged
//! [`Scalar`] is used at the edges (CLI input, JSON output) where the backend
//! is only known at runtime; its arithmetic refuses to mix backends.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScalarError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("division by zero")]
    DivisionByZero,
    #[error("backend mismatch: {left} and {right} cannot be combined")]
    BackendMismatch { left: Backend, right: Backend },
    #[error("cannot parse {input:?} as a number")]
    Parse { input: String },
    #[error("{value} has no exact rational representation")]
    NotRepresentable { value: f64 },
}

/// Which arithmetic a value lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Exact,
    Float,
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Backend::Exact => "exact",
            Backend::Float => "float",
        })
    }
}

impl FromStr for Backend {
    type Err = ScalarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exact" => Ok(Backend::Exact),
            "float" => Ok(Backend::Float),
            _ => Err(ScalarError::Parse { input: s.to_string() }),
        }
    }
}

/// Exact fraction in canonical form: positive denominator, coprime parts.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(numerator: impl Into<BigInt>, denominator: impl Into<BigInt>) -> Result<Self, ScalarError> {
        let den = denominator.into();
        if den.is_zero() {
            return Err(ScalarError::ZeroDenominator);
        }
        Ok(Rational(BigRational::new(numerator.into(), den)))
    }

    pub fn integer(value: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(value.into()))
    }

    pub fn numerator(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denominator(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn checked_div(&self, rhs: &Rational) -> Result<Rational, ScalarError> {
        if rhs.0.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Rational(&self.0 / &rhs.0))
    }

    pub fn pow(&self, exp: u32) -> Rational {
        Rational(num_traits::pow(self.0.clone(), exp as usize))
    }

    /// Nearest `f64`; magnitudes beyond the float range become ±infinity.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or_else(|| if self.0.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY })
    }

    /// Exact value of a finite float (every finite `f64` is a dyadic rational).
    pub fn from_f64(value: f64) -> Result<Self, ScalarError> {
        BigRational::from_float(value).map(Rational).ok_or(ScalarError::NotRepresentable { value })
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

/// Accepts `p`, `p/q` and finite decimals such as `-0.96` or `1.5e-3`,
/// all converted exactly.
impl FromStr for Rational {
    type Err = ScalarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let err = || ScalarError::Parse { input: s.to_string() };
        if let Some((num, den)) = s.split_once('/') {
            let num: BigInt = num.trim().parse().map_err(|_| err())?;
            let den: BigInt = den.trim().parse().map_err(|_| err())?;
            return Rational::new(num, den);
        }
        let (mantissa, exponent) = match s.find(['e', 'E']) {
            Some(pos) => (&s[..pos], s[pos + 1..].parse::<i32>().map_err(|_| err())?),
            None => (s, 0),
        };
        let (negative, digits) = match mantissa.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
        };
        let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(err());
        }
        if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
            return Err(err());
        }
        let all_digits = format!("{int_part}{frac_part}");
        let mut value: BigInt = all_digits.parse().map_err(|_| err())?;
        if negative {
            value = -value;
        }
        let scale = exponent - frac_part.len() as i32;
        let ten = BigInt::from(10u32);
        let ratio = if scale >= 0 {
            BigRational::from_integer(value * num_traits::pow(ten, scale as usize))
        } else {
            BigRational::new(value, num_traits::pow(ten, (-scale) as usize))
        };
        Ok(Rational(ratio))
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! rational_binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0 $op rhs.0)
            }
        }
        impl<'a> $trait<&'a Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational(&self.0 $op &rhs.0)
            }
        }
    };
}

rational_binop!(Add, add, +);
rational_binop!(Sub, sub, -);
rational_binop!(Mul, mul, *);
// Panics on a zero divisor, like integer division; use `checked_div` for input.
rational_binop!(Div, div, /);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl From<i64> for Rational {
    fn from(value: i64) -> Self {
        Rational::integer(value)
    }
}

/// Operations shared by both backends.
///
/// `EXACT` selects the exact code paths: zero tests are structural, pivots
/// are the first nonzero entry, and tolerances are ignored.
pub trait Field:
    Clone
    + PartialEq
    + PartialOrd
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const EXACT: bool;
    const BACKEND: Backend;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(value: i64) -> Self;
    fn from_rational(value: &Rational) -> Self;
    fn is_zero(&self) -> bool;
    fn abs(&self) -> Self;
    fn to_f64(&self) -> f64;

    /// Equality with a relative tolerance; exact backends compare structurally.
    fn close_to(&self, other: &Self, rel_tol: f64) -> bool {
        if Self::EXACT {
            return self == other;
        }
        let (a, b) = (self.to_f64(), other.to_f64());
        (a - b).abs() <= rel_tol * a.abs().max(b.abs()).max(1.0)
    }

    fn powi(&self, exp: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..exp {
            acc = acc * self.clone();
        }
        acc
    }

    /// `c_0 x^n + ... + c_n` by Horner's rule, coefficients descending.
    fn horner(coefficients: &[Self], x: &Self) -> Self {
        coefficients.iter().fold(Self::zero(), |acc, c| acc * x.clone() + c.clone())
    }
}

impl Field for Rational {
    const EXACT: bool = true;
    const BACKEND: Backend = Backend::Exact;

    fn zero() -> Self {
        Rational(BigRational::zero())
    }
    fn one() -> Self {
        Rational(BigRational::one())
    }
    fn from_i64(value: i64) -> Self {
        Rational::integer(value)
    }
    fn from_rational(value: &Rational) -> Self {
        value.clone()
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
    fn abs(&self) -> Self {
        Rational(self.0.abs())
    }
    fn to_f64(&self) -> f64 {
        Rational::to_f64(self)
    }
    fn powi(&self, exp: u32) -> Self {
        self.pow(exp)
    }

    // Integer Horner over a common denominator; one reduction at the end.
    fn horner(coefficients: &[Self], x: &Self) -> Self {
        let lcm = coefficients.iter().fold(BigInt::one(), |l, c| l.lcm(c.denominator()));
        let (m, d) = (x.numerator(), x.denominator());
        let mut d_pow = BigInt::one();
        let mut acc = BigInt::zero();
        for c in coefficients {
            let scaled = c.numerator() * (&lcm / c.denominator());
            acc = acc * m + scaled * &d_pow;
            d_pow *= d;
        }
        // d_pow = d^(n+1); the sum carries d^n.
        Rational(BigRational::new(acc * d, lcm * d_pow))
    }
}

impl Field for f64 {
    const EXACT: bool = false;
    const BACKEND: Backend = Backend::Float;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_i64(value: i64) -> Self {
        value as f64
    }
    fn from_rational(value: &Rational) -> Self {
        value.to_f64()
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn powi(&self, exp: u32) -> Self {
        f64::powi(*self, exp as i32)
    }
}

/// Shortest decimal that parses back to the same `f64`.
pub fn format_f64(value: f64) -> String {
    format!("{value:?}")
}

/// A value whose backend is decided at runtime.
#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Exact(Rational),
    Float(f64),
}

impl Scalar {
    pub fn backend(&self) -> Backend {
        match self {
            Scalar::Exact(_) => Backend::Exact,
            Scalar::Float(_) => Backend::Float,
        }
    }

    /// Reads `text` in the requested backend. Decimal input on the exact
    /// backend is taken at face value (`0.88` is `22/25`).
    pub fn parse(text: &str, backend: Backend) -> Result<Scalar, ScalarError> {
        match backend {
            Backend::Exact => text.parse().map(Scalar::Exact),
            Backend::Float => {
                let trimmed = text.trim();
                if trimmed.contains('/') {
                    let r: Rational = trimmed.parse()?;
                    Ok(Scalar::Float(r.to_f64()))
                } else {
                    trimmed
                        .parse::<f64>()
                        .map(Scalar::Float)
                        .map_err(|_| ScalarError::Parse { input: trimmed.to_string() })
                }
            }
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(r) => r.to_f64(),
            Scalar::Float(x) => *x,
        }
    }

    fn pair<'a>(&'a self, rhs: &'a Scalar) -> Result<Pair<'a>, ScalarError> {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Ok(Pair::Exact(a, b)),
            (Scalar::Float(a), Scalar::Float(b)) => Ok(Pair::Float(*a, *b)),
            _ => Err(ScalarError::BackendMismatch { left: self.backend(), right: rhs.backend() }),
        }
    }

    pub fn checked_add(&self, rhs: &Scalar) -> Result<Scalar, ScalarError> {
        Ok(match self.pair(rhs)? {
            Pair::Exact(a, b) => Scalar::Exact(a + b),
            Pair::Float(a, b) => Scalar::Float(a + b),
        })
    }

    pub fn checked_sub(&self, rhs: &Scalar) -> Result<Scalar, ScalarError> {
        Ok(match self.pair(rhs)? {
            Pair::Exact(a, b) => Scalar::Exact(a - b),
            Pair::Float(a, b) => Scalar::Float(a - b),
        })
    }

    pub fn checked_mul(&self, rhs: &Scalar) -> Result<Scalar, ScalarError> {
        Ok(match self.pair(rhs)? {
            Pair::Exact(a, b) => Scalar::Exact(a * b),
            Pair::Float(a, b) => Scalar::Float(a * b),
        })
    }

    pub fn checked_div(&self, rhs: &Scalar) -> Result<Scalar, ScalarError> {
        match self.pair(rhs)? {
            Pair::Exact(a, b) => a.checked_div(b).map(Scalar::Exact),
            Pair::Float(_, 0.0) => Err(ScalarError::DivisionByZero),
            Pair::Float(a, b) => Ok(Scalar::Float(a / b)),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Exact(a) => Scalar::Exact(-a.clone()),
            Scalar::Float(a) => Scalar::Float(-a),
        }
    }

    /// `None` for NaN operands.
    pub fn checked_cmp(&self, rhs: &Scalar) -> Result<Option<Ordering>, ScalarError> {
        Ok(match self.pair(rhs)? {
            Pair::Exact(a, b) => Some(a.cmp(b)),
            Pair::Float(a, b) => a.partial_cmp(&b),
        })
    }
}

enum Pair<'a> {
    Exact(&'a Rational, &'a Rational),
    Float(f64, f64),
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(r) => r.fmt(f),
            Scalar::Float(x) => f.write_str(&format_f64(*x)),
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl From<Rational> for Scalar {
    fn from(value: Rational) -> Self {
        Scalar::Exact(value)
    }
}

impl From<f64> for Scalar {
    fn from(value: f64) -> Self {
        Scalar::Float(value)
    }
}

/// Serde helpers that write floats as strings.
pub mod serde_f64 {
    use serde::Serializer;

    pub fn serialize<S: Serializer>(value: &f64, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&super::format_f64(*value))
    }

    pub mod option {
        use serde::Serializer;

        pub fn serialize<S: Serializer>(value: &Option<f64>, serializer: S) -> Result<S::Ok, S::Error> {
            match value {
                Some(v) => serializer.serialize_str(&super::super::format_f64(*v)),
                None => serializer.serialize_none(),
            }
        }
    }

    pub mod vec_option {
        use serde::ser::SerializeSeq;
        use serde::Serializer;

        pub fn serialize<S: Serializer>(values: &[Option<f64>], serializer: S) -> Result<S::Ok, S::Error> {
            let mut seq = serializer.serialize_seq(Some(values.len()))?;
            for v in values {
                seq.serialize_element(&v.map(super::super::format_f64))?;
            }
            seq.end()
        }
    }
}

/// Convenience constructor for literals in tests and fixtures.
pub fn q(num: i64, den: i64) -> Rational {
    Rational::new(num, den).expect("nonzero denominator")
}
