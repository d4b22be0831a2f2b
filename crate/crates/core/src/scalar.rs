//! Scalar fields the library computes over.
//!
//! Every algorithm is generic over [`Scalar`]. Two carriers are provided:
//! [`Rational`] (arbitrary-precision, exact, always in lowest terms) and
//! `f64`. The carrier decides pivoting policy, determinant algorithm and
//! text encoding.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{self, Matrix};

pub type Rational = BigRational;

/// Relative pivot threshold for float-mode rank decisions.
pub const FLOAT_PIVOT_TOLERANCE: f64 = 1e-10;

/// Absolute tolerance for float-mode point deduplication.
pub const FLOAT_DEDUP_TOLERANCE: f64 = 1e-12;

/// Largest decimal exponent accepted when parsing exact rationals.
const MAX_DECIMAL_EXPONENT: i64 = 4096;

/// Extra binary digits used when rounding an irrational square root upward.
const SQRT_UPPER_BITS: u64 = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Float,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Exact => f.write_str("exact"),
            Mode::Float => f.write_str("float"),
        }
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "exact" => Ok(Mode::Exact),
            "float" => Ok(Mode::Float),
            other => Err(Error::Parse(format!("unknown mode '{other}'"))),
        }
    }
}

pub trait Scalar:
    Clone
    + fmt::Debug
    + PartialEq
    + PartialOrd
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Send
    + Sync
    + 'static
{
    const MODE: Mode;

    fn from_i64(v: i64) -> Self;

    /// Exact conversion for rationals; `None` for non-finite input.
    fn from_f64(v: f64) -> Option<Self>;

    fn magnitude(&self) -> Self;

    fn to_f64(&self) -> f64;

    /// Natural log of the absolute value, without overflow for huge or tiny
    /// rationals. `-inf` for zero.
    fn ln_abs(&self) -> f64;

    /// Square root when it is representable in the field.
    fn sqrt_exact(&self) -> Option<Self>;

    /// A value `>= sqrt(self)`; exact whenever [`Scalar::sqrt_exact`] succeeds.
    fn sqrt_upper(&self) -> Self;

    /// Pivot rejection: exact zero for rationals, relative threshold for floats.
    fn is_negligible(&self, reference: &Self) -> bool;

    /// Point identity used for deduplication.
    fn approx_eq(&self, other: &Self) -> bool;

    fn to_text(&self) -> String;

    fn parse_text(s: &str) -> Result<Self>;

    fn determinant(m: &Matrix<Self>) -> Self;

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num) / Self::from_i64(den)
    }

    fn signum_i8(&self) -> i8 {
        if self.is_zero() {
            0
        } else if *self > Self::zero() {
            1
        } else {
            -1
        }
    }

    /// Storage size in bits; constant for fixed-width scalars.
    fn bit_size(&self) -> u64 {
        64
    }

    /// Whether pivots are chosen by largest magnitude rather than first nonzero.
    fn pivot_by_magnitude() -> bool {
        Self::MODE == Mode::Float
    }
}

pub fn powi<S: Scalar>(base: &S, exp: u64) -> S {
    num_traits::pow(base.clone(), exp as usize)
}

fn ln_bigint(v: &BigInt) -> f64 {
    let bits = v.bits();
    if bits <= 1000 {
        return v.abs().to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top: BigInt = v.abs() >> shift;
    top.to_f64().unwrap_or(f64::INFINITY).ln() + shift as f64 * std::f64::consts::LN_2
}

fn parse_bigint(s: &str) -> Result<BigInt> {
    let digits = s.strip_prefix(['+', '-']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Parse(format!("invalid integer '{s}'")));
    }
    BigInt::from_str(s).map_err(|e| Error::Parse(format!("invalid integer '{s}': {e}")))
}

fn parse_decimal(s: &str) -> Result<Rational> {
    let bad = || Error::Parse(format!("invalid number '{s}'"));
    let (negative, body) = match s.as_bytes().first() {
        Some(b'-') => (true, &s[1..]),
        Some(b'+') => (false, &s[1..]),
        _ => (false, s),
    };
    let (mantissa, exponent) = match body.find(['e', 'E']) {
        Some(pos) => {
            let exp_text = &body[pos + 1..];
            let exp_digits = exp_text.strip_prefix(['+', '-']).unwrap_or(exp_text);
            if exp_digits.is_empty() || exp_digits.len() > 6 || !exp_digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            let exp: i64 = exp_text.parse().map_err(|_| bad())?;
            (&body[..pos], exp)
        }
        None => (body, 0),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mantissa, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let scale = exponent - frac_part.len() as i64;
    if scale.abs() > MAX_DECIMAL_EXPONENT {
        return Err(Error::Parse(format!("exponent out of range in '{s}'")));
    }
    let digits = format!("{int_part}{frac_part}");
    let mut value = BigInt::from_str(&digits).map_err(|_| bad())?;
    if negative {
        value = -value;
    }
    let ten = BigInt::from(10u32);
    let power = num_traits::pow(ten, scale.unsigned_abs() as usize);
    Ok(if scale >= 0 {
        Rational::from_integer(value * power)
    } else {
        Rational::new(value, power)
    })
}

impl Scalar for Rational {
    fn bit_size(&self) -> u64 {
        self.numer().bits() + self.denom().bits()
    }

    const MODE: Mode = Mode::Exact;

    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }

    fn from_f64(v: f64) -> Option<Self> {
        Rational::from_float(v)
    }

    fn magnitude(&self) -> Self {
        self.abs()
    }

    fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let direct = ToPrimitive::to_f64(self).unwrap_or(f64::NAN);
        if direct.is_finite() && direct != 0.0 {
            return direct;
        }
        let sign = if self.is_negative() { -1.0 } else { 1.0 };
        sign * self.ln_abs().exp()
    }

    fn ln_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        ln_bigint(self.numer()) - ln_bigint(self.denom())
    }

    fn sqrt_exact(&self) -> Option<Self> {
        if self.is_negative() {
            return None;
        }
        let num = self.numer().sqrt();
        let den = self.denom().sqrt();
        (&num * &num == *self.numer() && &den * &den == *self.denom()).then(|| Rational::new(num, den))
    }

    fn sqrt_upper(&self) -> Self {
        if let Some(root) = self.sqrt_exact() {
            return root;
        }
        // sqrt(a/b) = sqrt(a*b)/b, evaluated on a 2^-SQRT_UPPER_BITS grid and rounded up.
        let scaled: BigInt = (self.numer() * self.denom()) << (2 * SQRT_UPPER_BITS);
        let mut root = scaled.sqrt();
        if &root * &root < scaled {
            root += 1;
        }
        Rational::new(root, self.denom() << SQRT_UPPER_BITS)
    }

    fn is_negligible(&self, _reference: &Self) -> bool {
        self.is_zero()
    }

    fn approx_eq(&self, other: &Self) -> bool {
        self == other
    }

    fn to_text(&self) -> String {
        if self.denom().is_one() {
            self.numer().to_string()
        } else {
            format!("{}/{}", self.numer(), self.denom())
        }
    }

    fn parse_text(s: &str) -> Result<Self> {
        let s = s.trim();
        match s.split_once('/') {
            Some((num, den)) => {
                let num = parse_bigint(num.trim())?;
                let den = parse_bigint(den.trim())?;
                if den.sign() == Sign::NoSign {
                    return Err(Error::Parse(format!("zero denominator in '{s}'")));
                }
                Ok(Rational::new(num, den))
            }
            None => parse_decimal(s),
        }
    }

    fn determinant(m: &Matrix<Self>) -> Self {
        matrix::bareiss_determinant(m)
    }
}

impl Scalar for f64 {
    const MODE: Mode = Mode::Float;

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn from_f64(v: f64) -> Option<Self> {
        v.is_finite().then_some(v)
    }

    fn magnitude(&self) -> Self {
        self.abs()
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn ln_abs(&self) -> f64 {
        self.abs().ln()
    }

    fn sqrt_exact(&self) -> Option<Self> {
        (*self >= 0.0).then(|| self.sqrt())
    }

    fn sqrt_upper(&self) -> Self {
        self.max(0.0).sqrt()
    }

    fn is_negligible(&self, reference: &Self) -> bool {
        self.abs() <= FLOAT_PIVOT_TOLERANCE * reference.abs()
    }

    fn approx_eq(&self, other: &Self) -> bool {
        (self - other).abs() < FLOAT_DEDUP_TOLERANCE
    }

    fn to_text(&self) -> String {
        format!("{self:.16e}")
    }

    fn parse_text(s: &str) -> Result<Self> {
        let s = s.trim();
        let value = match s.split_once('/') {
            Some((num, den)) => {
                let num: f64 = parse_float(num.trim())?;
                let den: f64 = parse_float(den.trim())?;
                if den == 0.0 {
                    return Err(Error::Parse(format!("zero denominator in '{s}'")));
                }
                num / den
            }
            None => parse_float(s)?,
        };
        if value.is_finite() {
            Ok(value)
        } else {
            Err(Error::Parse(format!("non-finite number '{s}'")))
        }
    }

    fn determinant(m: &Matrix<Self>) -> Self {
        matrix::lu_determinant(m)
    }
}

fn parse_float(s: &str) -> Result<f64> {
    // Restrict to plain decimal syntax; Rust's parser also accepts "inf"/"nan".
    if s.is_empty()
        || !s
            .bytes()
            .all(|b| b.is_ascii_digit() || matches!(b, b'+' | b'-' | b'.' | b'e' | b'E'))
    {
        return Err(Error::Parse(format!("invalid number '{s}'")));
    }
    s.parse::<f64>()
        .map_err(|e| Error::Parse(format!("invalid number '{s}': {e}")))
}

pub fn parse_point<S: Scalar>(coords: &[&str]) -> Result<Vec<S>> {
    coords.iter().map(|c| S::parse_text(c)).collect()
}

pub fn squared_norm<S: Scalar>(v: &[S]) -> S {
    v.iter().fold(S::zero(), |acc, x| acc + x.clone() * x.clone())
}

pub fn squared_distance<S: Scalar>(a: &[S], b: &[S]) -> S {
    a.iter().zip(b).fold(S::zero(), |acc, (x, y)| {
        let diff = x.clone() - y.clone();
        acc + diff.clone() * diff
    })
}

pub fn points_equal<S: Scalar>(a: &[S], b: &[S]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.approx_eq(y))
}
