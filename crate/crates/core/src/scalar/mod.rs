//! Scalar carriers: a `Real` abstraction over `f64` and the arbitrary-precision [`BigReal`].

mod bigreal;
mod complex;
mod context;

pub use bigreal::BigReal;
pub use complex::Complex;
pub use context::{PrecisionContext, PrecisionError};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Float, Signed, ToPrimitive, Zero};
use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse {0:?} as a real number")]
pub struct ParseRealError(pub String);

/// Real scalar with a precision fixed at construction time.
///
/// Binary operations on operands of different precision run at the larger one.
pub trait Real:
    Clone
    + Debug
    + Display
    + PartialEq
    + PartialOrd
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + for<'a> Div<&'a Self, Output = Self>
{
    /// Largest number of decimal digits the type can carry, if bounded.
    const MAX_DIGITS: Option<u32>;

    fn from_i64(n: i64, ctx: &PrecisionContext) -> Self;
    fn from_f64(x: f64, ctx: &PrecisionContext) -> Self;
    fn from_bigint(n: &BigInt, ctx: &PrecisionContext) -> Self;
    fn parse_decimal(s: &str, ctx: &PrecisionContext) -> Result<Self, ParseRealError>;
    fn pi(ctx: &PrecisionContext) -> Self;

    fn sqrt(&self) -> Self;
    fn exp(&self) -> Self;
    fn ln(&self) -> Self;
    fn abs(&self) -> Self;
    fn floor(&self) -> Self;

    fn is_finite(&self) -> bool;
    fn is_zero(&self) -> bool;
    fn is_negative(&self) -> bool;
    fn to_f64(&self) -> f64;
    /// `log10(|self|)` to roughly double precision, valid beyond the `f64` exponent range.
    fn log10_approx(&self) -> f64;
    /// Mantissa width in bits.
    fn precision_bits(&self) -> usize;
    /// Same value carried at (at least) `bits` of mantissa.
    fn with_bits(&self, bits: usize) -> Self;
    /// Exact integer value of `floor(self)`; `None` for non-finite values.
    fn floor_bigint(&self) -> Option<BigInt>;

    fn zero(ctx: &PrecisionContext) -> Self {
        Self::from_i64(0, ctx)
    }

    fn one(ctx: &PrecisionContext) -> Self {
        Self::from_i64(1, ctx)
    }

    fn from_rational(r: &BigRational, ctx: &PrecisionContext) -> Self {
        Self::from_bigint(r.numer(), ctx) / Self::from_bigint(r.denom(), ctx)
    }

    /// `10^k` at context precision.
    fn pow10(k: i32, ctx: &PrecisionContext) -> Self {
        let ten = BigInt::from(10u8).pow(k.unsigned_abs());
        let t = Self::from_bigint(&ten, ctx);
        if k >= 0 {
            t
        } else {
            Self::one(ctx) / t
        }
    }

    /// Decimal digits effectively available for a context.
    fn effective_digits(ctx: &PrecisionContext) -> u32 {
        match Self::MAX_DIGITS {
            Some(m) => ctx.digits().min(m),
            None => ctx.digits(),
        }
    }

    /// Relative spacing of representable values around 1.
    fn unit_roundoff(&self) -> f64 {
        2f64.powi(-(self.precision_bits().min(1000) as i32) + 1)
    }

    fn powi(&self, n: u32) -> Self {
        let mut base = self.clone();
        let mut acc: Option<Self> = None;
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = Some(match acc {
                    Some(a) => a * &base,
                    None => base.clone(),
                });
            }
            e >>= 1;
            if e > 0 {
                base = base.clone() * &base;
            }
        }
        acc.unwrap_or_else(|| Self::from_f64(1.0, &PrecisionContext::default()))
    }

    fn round_bigint(&self) -> Option<BigInt> {
        (self.clone() + &Self::from_f64(0.5, &PrecisionContext::default())).floor_bigint()
    }

    fn max_ref<'a>(&'a self, other: &'a Self) -> &'a Self {
        if other > self {
            other
        } else {
            self
        }
    }

    /// Decimal rendering with `sig` significant digits, fixed-point when the magnitude allows.
    fn to_decimal_string(&self, sig: u32) -> String {
        if !self.is_finite() {
            return format!("{}", self.to_f64());
        }
        if self.is_zero() {
            return "0".to_string();
        }
        let sig = sig.max(1);
        let neg = self.is_negative();
        let a = self.abs();
        let ctx = PrecisionContext::for_bits(a.precision_bits());
        let mut e10 = a.log10_approx().floor() as i32;
        let mut n = BigInt::zero();
        for _ in 0..3 {
            let k = sig as i32 - 1 - e10;
            let scaled = a.clone() * &Self::pow10(k, &ctx);
            n = scaled.round_bigint().unwrap_or_default();
            let len = n.to_string().len() as i32;
            if len == sig as i32 + 1 {
                e10 += 1;
            } else if len == sig as i32 - 1 {
                e10 -= 1;
            } else {
                break;
            }
        }
        let k = sig as i32 - 1 - e10;
        let digits = n.abs().to_string();
        let body = if (-8..=40).contains(&e10) {
            if k <= 0 {
                format!("{}{}", digits, "0".repeat((-k) as usize))
            } else if (digits.len() as i32) > k {
                let split = digits.len() - k as usize;
                format!("{}.{}", &digits[..split], &digits[split..])
            } else {
                format!("0.{}{}", "0".repeat(k as usize - digits.len()), digits)
            }
        } else {
            let (head, tail) = digits.split_at(1);
            if tail.is_empty() {
                format!("{head}e{e10}")
            } else {
                format!("{head}.{tail}e{e10}")
            }
        };
        if neg {
            format!("-{body}")
        } else {
            body
        }
    }
}

impl Real for f64 {
    const MAX_DIGITS: Option<u32> = Some(15);

    fn from_i64(n: i64, _: &PrecisionContext) -> Self {
        n as f64
    }
    fn from_f64(x: f64, _: &PrecisionContext) -> Self {
        x
    }
    fn from_bigint(n: &BigInt, _: &PrecisionContext) -> Self {
        n.to_f64().unwrap_or(f64::NAN)
    }
    fn from_rational(r: &BigRational, _: &PrecisionContext) -> Self {
        r.to_f64().unwrap_or(f64::NAN)
    }
    fn parse_decimal(s: &str, _: &PrecisionContext) -> Result<Self, ParseRealError> {
        s.trim()
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| ParseRealError(s.to_string()))
    }
    fn pi(_: &PrecisionContext) -> Self {
        std::f64::consts::PI
    }
    fn sqrt(&self) -> Self {
        Float::sqrt(*self)
    }
    fn exp(&self) -> Self {
        Float::exp(*self)
    }
    fn ln(&self) -> Self {
        Float::ln(*self)
    }
    fn abs(&self) -> Self {
        Float::abs(*self)
    }
    fn floor(&self) -> Self {
        Float::floor(*self)
    }
    fn is_finite(&self) -> bool {
        Float::is_finite(*self)
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn is_negative(&self) -> bool {
        *self < 0.0
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn log10_approx(&self) -> f64 {
        Float::abs(*self).log10()
    }
    fn precision_bits(&self) -> usize {
        53
    }
    fn with_bits(&self, _: usize) -> Self {
        *self
    }
    fn floor_bigint(&self) -> Option<BigInt> {
        if !Float::is_finite(*self) {
            return None;
        }
        num_bigint::ToBigInt::to_bigint(&Float::floor(*self))
    }
    fn round_bigint(&self) -> Option<BigInt> {
        (self + 0.5).floor_bigint()
    }
}
