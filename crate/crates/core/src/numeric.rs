//! Scalar abstraction over `f64` and exact rationals, plus closed intervals.
//!
//! Geometric routines are generic over [`Scalar`]. With [`Exact`] every
//! comparison is sharp; with `f64` containment checks allow an absolute slack
//! of `1e-9`.

use std::cmp::Ordering;
use std::fmt::{self, Debug, Display};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exact rational scalar.
pub type Exact = BigRational;

pub trait Scalar:
    Clone + PartialOrd + Debug + Display + Num + Signed + Send + Sync + 'static
{
    /// Absolute tolerance used by containment and covering checks.
    fn slack() -> Self;
    fn to_f64(&self) -> f64;
    fn from_f64(x: f64) -> Option<Self>;
    fn from_ratio(num: i64, den: i64) -> Self;
    /// Parses decimal (`0.45`, `1e-3`) or fraction (`20/9`) text.
    fn parse_text(s: &str) -> Result<Self>;
    fn is_exact() -> bool;
}

impl Scalar for f64 {
    fn slack() -> Self {
        1e-9
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn from_f64(x: f64) -> Option<Self> {
        x.is_finite().then_some(x)
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }
    fn parse_text(s: &str) -> Result<Self> {
        ToPrimitive::to_f64(&parse_rational(s)?)
            .filter(|x| x.is_finite())
            .ok_or_else(|| Error::Parse(format!("number out of range: {s}")))
    }
    fn is_exact() -> bool {
        false
    }
}

impl Scalar for Exact {
    fn slack() -> Self {
        Exact::zero()
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn from_f64(x: f64) -> Option<Self> {
        <BigRational as FromPrimitive>::from_f64(x)
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }
    fn parse_text(s: &str) -> Result<Self> {
        parse_rational(s)
    }
    fn is_exact() -> bool {
        true
    }
}

/// Parses `a/b`, an integer, or a decimal with optional exponent into an
/// exact rational. Decimal text is converted digit by digit, so `0.45` is
/// exactly `9/20`.
pub fn parse_rational(text: &str) -> Result<Exact> {
    let s = text.trim();
    let bad = || Error::Parse(format!("not a number: {text:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = s.split_once('/') {
        let n = parse_rational(n)?;
        let d = parse_rational(d)?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator: {text:?}")));
        }
        return Ok(n / d);
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let e: i32 = s[pos + 1..].parse().map_err(|_| bad())?;
            (&s[..pos], e)
        }
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part
        .chars()
        .chain(frac_part.chars())
        .all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let all: String = format!("{int_part}{frac_part}");
    let numer = BigInt::parse_bytes(all.as_bytes(), 10).ok_or_else(bad)?;
    let scale = exponent - frac_part.len() as i32;
    if scale.unsigned_abs() > 4096 {
        return Err(Error::Parse(format!("exponent out of range: {text:?}")));
    }
    let ten = BigInt::from(10);
    let mut value = BigRational::from_integer(numer);
    let factor = BigRational::from_integer(num_traits::pow(ten, scale.unsigned_abs() as usize));
    if scale >= 0 {
        value *= factor;
    } else {
        value /= factor;
    }
    Ok(if negative { -value } else { value })
}

/// Closed interval `[lo, hi]` with `lo <= hi`.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
pub struct Interval<T> {
    pub lo: T,
    pub hi: T,
}

impl<T: Scalar> Interval<T> {
    pub fn new(lo: T, hi: T) -> Result<Self> {
        if lo > hi {
            return Err(Error::Domain(format!("interval [{lo}, {hi}] has lo > hi")));
        }
        Ok(Self { lo, hi })
    }

    /// Builds the interval spanned by two points in either order.
    pub fn spanning(a: T, b: T) -> Self {
        if a <= b {
            Self { lo: a, hi: b }
        } else {
            Self { lo: b, hi: a }
        }
    }

    pub fn len(&self) -> T {
        self.hi.clone() - self.lo.clone()
    }

    pub fn midpoint(&self) -> T {
        (self.lo.clone() + self.hi.clone()) / (T::one() + T::one())
    }

    pub fn contains(&self, x: &T) -> bool {
        let s = T::slack();
        *x >= self.lo.clone() - s.clone() && *x <= self.hi.clone() + s
    }

    /// `self ⊆ other`, up to the scalar slack.
    pub fn is_subset_of(&self, other: &Self) -> bool {
        let s = T::slack();
        self.lo >= other.lo.clone() - s.clone() && self.hi <= other.hi.clone() + s
    }

    pub fn intersect(&self, other: &Self) -> Option<Self> {
        let lo = max_of(&self.lo, &other.lo);
        let hi = min_of(&self.hi, &other.hi);
        (lo <= hi).then_some(Self { lo, hi })
    }

    pub fn hull(&self, other: &Self) -> Self {
        Self {
            lo: min_of(&self.lo, &other.lo),
            hi: max_of(&self.hi, &other.hi),
        }
    }

    /// Distance between the two sets; zero when they meet.
    pub fn distance(&self, other: &Self) -> T {
        if self.hi < other.lo {
            other.lo.clone() - self.hi.clone()
        } else if other.hi < self.lo {
            self.lo.clone() - other.hi.clone()
        } else {
            T::zero()
        }
    }

    pub fn to_f64(&self) -> Interval<f64> {
        Interval {
            lo: self.lo.to_f64(),
            hi: self.hi.to_f64(),
        }
    }
}

impl<T: Display> Display for Interval<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

impl<T: Debug> Debug for Interval<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:?}, {:?}]", self.lo, self.hi)
    }
}

pub(crate) fn min_of<T: Scalar>(a: &T, b: &T) -> T {
    match a.partial_cmp(b) {
        Some(Ordering::Greater) => b.clone(),
        _ => a.clone(),
    }
}

pub(crate) fn max_of<T: Scalar>(a: &T, b: &T) -> T {
    match a.partial_cmp(b) {
        Some(Ordering::Less) => b.clone(),
        _ => a.clone(),
    }
}

/// Natural logarithm of a positive exact rational that may be far outside the
/// `f64` range.
pub fn ln_exact(x: &Exact) -> f64 {
    fn ln_int(n: &BigInt) -> f64 {
        let bits = n.bits();
        if bits < 1000 {
            return n.to_f64().unwrap_or(f64::NAN).ln();
        }
        let shift = bits - 64;
        let top: BigInt = n >> shift;
        top.to_f64().unwrap_or(f64::NAN).ln() + shift as f64 * std::f64::consts::LN_2
    }
    ln_int(x.numer()) - ln_int(x.denom())
}
