use super::ExactError;
use num_bigint::{BigInt, ToBigInt};
use num_integer::{Integer, Roots};
use num_rational::{BigRational, Ratio};
use num_traits::{FromPrimitive, Signed, ToPrimitive, Zero};
use std::fmt::{self, Debug, Display};
use std::hash::Hash;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use crate::scalar::{PrecisionContext, Real};

/// Exact rational scalar usable as the base of a quadratic field.
pub trait Rational:
    Clone
    + Debug
    + Display
    + Eq
    + Ord
    + Hash
    + Signed
    + Send
    + Sync
    + 'static
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + for<'a> Div<&'a Self, Output = Self>
{
    fn from_int(n: i64) -> Self;
    fn to_big(&self) -> BigRational;
    fn from_big(r: &BigRational) -> Option<Self>;
    /// Square root when it is itself rational.
    fn sqrt_exact(&self) -> Option<Self>;
}

impl<I> Rational for Ratio<I>
where
    I: Integer + Clone + Debug + Display + Hash + Signed + Roots + FromPrimitive + ToPrimitive + ToBigInt + Send + Sync + 'static,
    for<'a> Ratio<I>: Add<&'a Ratio<I>, Output = Ratio<I>>
        + Sub<&'a Ratio<I>, Output = Ratio<I>>
        + Mul<&'a Ratio<I>, Output = Ratio<I>>
        + Div<&'a Ratio<I>, Output = Ratio<I>>,
{
    fn from_int(n: i64) -> Self {
        Ratio::from_integer(I::from_i64(n).expect("integer fits"))
    }

    fn to_big(&self) -> BigRational {
        BigRational::new(self.numer().to_bigint().unwrap(), self.denom().to_bigint().unwrap())
    }

    fn from_big(r: &BigRational) -> Option<Self> {
        let n = I::from_i128(r.numer().to_i128()?)?;
        let d = I::from_i128(r.denom().to_i128()?)?;
        Some(Ratio::new(n, d))
    }

    fn sqrt_exact(&self) -> Option<Self> {
        if self.is_negative() {
            return None;
        }
        let n = self.numer().sqrt();
        let d = self.denom().sqrt();
        if n.clone() * n.clone() == *self.numer() && d.clone() * d.clone() == *self.denom() {
            Some(Ratio::new(n, d))
        } else {
            None
        }
    }
}

/// `p + q sqrt(d)` in the field tagged by the squarefree integer `d`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldElement<R> {
    p: R,
    q: R,
    d: i64,
}

pub fn parse_rational<R: Rational>(s: &str) -> Option<R> {
    let s = s.trim();
    let r = match s.split_once('/') {
        Some((a, b)) => {
            let a = BigInt::from_str(a.trim()).ok()?;
            let b = BigInt::from_str(b.trim()).ok()?;
            if b.is_zero() {
                return None;
            }
            BigRational::new(a, b)
        }
        None => BigRational::from_integer(BigInt::from_str(s).ok()?),
    };
    R::from_big(&r)
}

impl<R: Rational> FieldElement<R> {
    pub fn new(p: R, q: R, d: i64) -> Self {
        Self { p, q, d }
    }

    pub fn from_rational(p: R, d: i64) -> Self {
        Self { p, q: R::zero(), d }
    }

    pub fn from_int(n: i64, d: i64) -> Self {
        Self::from_rational(R::from_int(n), d)
    }

    /// `a + b sqrt(d)` from integers.
    pub fn from_ints(a: i64, b: i64, d: i64) -> Self {
        Self::new(R::from_int(a), R::from_int(b), d)
    }

    pub fn zero(d: i64) -> Self {
        Self::from_int(0, d)
    }

    pub fn one(d: i64) -> Self {
        Self::from_int(1, d)
    }

    pub fn sqrt_d(d: i64) -> Self {
        Self::new(R::zero(), R::one(), d)
    }

    pub fn p(&self) -> &R {
        &self.p
    }

    pub fn q(&self) -> &R {
        &self.q
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.p.is_one() && self.q.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.q.is_zero()
    }

    /// Either the rational or the irrational part vanishes.
    pub fn is_pure(&self) -> bool {
        self.p.is_zero() || self.q.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.p.clone(), -self.q.clone(), self.d)
    }

    /// `p^2 - d q^2`.
    pub fn norm(&self) -> R {
        self.p.clone() * &self.p - R::from_int(self.d) * &self.q * &self.q
    }

    pub fn trace(&self) -> R {
        self.p.clone() + &self.p
    }

    fn check(&self, o: &Self) -> Result<(), ExactError> {
        if self.d == o.d {
            Ok(())
        } else {
            Err(ExactError::FieldMismatch { left: self.d, right: o.d })
        }
    }

    pub fn try_add(&self, o: &Self) -> Result<Self, ExactError> {
        self.check(o)?;
        Ok(Self::new(self.p.clone() + &o.p, self.q.clone() + &o.q, self.d))
    }

    pub fn try_sub(&self, o: &Self) -> Result<Self, ExactError> {
        self.check(o)?;
        Ok(Self::new(self.p.clone() - &o.p, self.q.clone() - &o.q, self.d))
    }

    pub fn try_mul(&self, o: &Self) -> Result<Self, ExactError> {
        self.check(o)?;
        let d = R::from_int(self.d);
        let p = self.p.clone() * &o.p + d * &self.q * &o.q;
        let q = self.p.clone() * &o.q + self.q.clone() * &o.p;
        Ok(Self::new(p, q, self.d))
    }

    pub fn inv(&self) -> Result<Self, ExactError> {
        let n = self.norm();
        if n.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        Ok(Self::new(self.p.clone() / &n, -(self.q.clone() / &n), self.d))
    }

    pub fn try_div(&self, o: &Self) -> Result<Self, ExactError> {
        self.check(o)?;
        self.try_mul(&o.inv()?)
    }

    pub fn scale(&self, k: &R) -> Self {
        Self::new(self.p.clone() * k, self.q.clone() * k, self.d)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(self.d);
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Square root inside the field, when one exists.
    pub fn sqrt(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(self.clone());
        }
        let d = R::from_int(self.d);
        if self.q.is_zero() {
            if let Some(r) = self.p.sqrt_exact() {
                return Some(Self::from_rational(r, self.d));
            }
            return (self.p.clone() / &d).sqrt_exact().map(|b| Self::new(R::zero(), b, self.d));
        }
        let n = self.norm().sqrt_exact()?;
        let two = R::from_int(2);
        for cand in [(self.p.clone() + &n) / &two, (self.p.clone() - &n) / &two] {
            if let Some(a) = cand.sqrt_exact() {
                if a.is_zero() {
                    continue;
                }
                let b = self.q.clone() / &(a.clone() * &two);
                let root = Self::new(a, b, self.d);
                if &(&root * &root) == self {
                    return Some(root);
                }
            }
        }
        None
    }

    /// Rational part positive, or zero with positive irrational part.
    pub fn is_positive_normalized(&self) -> bool {
        self.p.is_positive() || (self.p.is_zero() && self.q.is_positive())
    }

    pub fn to_real<T: Real>(&self, ctx: &PrecisionContext) -> T {
        let p = T::from_rational(&self.p.to_big(), ctx);
        if self.q.is_zero() {
            return p;
        }
        let root = T::from_i64(self.d, ctx).sqrt();
        p + T::from_rational(&self.q.to_big(), ctx) * root
    }

    pub fn to_f64(&self) -> f64 {
        let p = self.p.to_big().to_f64().unwrap_or(f64::NAN);
        let q = self.q.to_big().to_f64().unwrap_or(f64::NAN);
        p + q * (self.d as f64).sqrt()
    }

    pub fn map_base<S: Rational>(&self) -> Option<FieldElement<S>> {
        Some(FieldElement::new(S::from_big(&self.p.to_big())?, S::from_big(&self.q.to_big())?, self.d))
    }

    /// Parses the canonical text form, e.g. `-405 - 180*sqrt(5)`, `2/3`, `-sqrt(5)`.
    pub fn parse(s: &str, d: i64) -> Result<Self, ExactError> {
        let err = || ExactError::Parse(s.to_string());
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(err());
        }
        let mut terms = Vec::new();
        let mut start = 0;
        let bytes = compact.as_bytes();
        let mut depth = 0;
        for (i, &c) in bytes.iter().enumerate() {
            match c {
                b'(' => depth += 1,
                b')' => depth -= 1,
                b'+' | b'-' if i > 0 && depth == 0 && bytes[i - 1] != b'(' => {
                    terms.push(&compact[start..i]);
                    start = i;
                }
                _ => {}
            }
        }
        terms.push(&compact[start..]);
        let mut out = Self::zero(d);
        for t in terms {
            let (neg, body) = match t.strip_prefix('-') {
                Some(b) => (true, b),
                None => (false, t.strip_prefix('+').unwrap_or(t)),
            };
            let term = if let Some(pos) = body.find("sqrt(") {
                let inner = body[pos + 5..].strip_suffix(')').ok_or_else(err)?;
                let tag: i64 = inner.parse().map_err(|_| err())?;
                if tag != d {
                    return Err(ExactError::FieldMismatch { left: d, right: tag });
                }
                let coef = &body[..pos];
                let c = if coef.is_empty() {
                    R::one()
                } else {
                    parse_rational::<R>(coef.strip_suffix('*').ok_or_else(err)?).ok_or_else(err)?
                };
                Self::new(R::zero(), c, d)
            } else {
                Self::from_rational(parse_rational::<R>(body).ok_or_else(err)?, d)
            };
            out = if neg { out - term } else { out + term };
        }
        Ok(out)
    }
}

fn fmt_sqrt_term<R: Rational>(q: &R, d: i64) -> String {
    if q.is_one() {
        format!("sqrt({d})")
    } else {
        format!("{q}*sqrt({d})")
    }
}

impl<R: Rational> Display for FieldElement<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q.is_zero() {
            return write!(f, "{}", self.p);
        }
        let mag = self.q.abs();
        let term = fmt_sqrt_term(&mag, self.d);
        if self.p.is_zero() {
            if self.q.is_negative() {
                write!(f, "-{term}")
            } else {
                write!(f, "{term}")
            }
        } else if self.q.is_negative() {
            write!(f, "{} - {term}", self.p)
        } else {
            write!(f, "{} + {term}", self.p)
        }
    }
}

impl<R: Rational> Debug for FieldElement<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

macro_rules! field_op {
    ($tr:ident, $m:ident, $try:ident) => {
        impl<'a, 'b, R: Rational> $tr<&'b FieldElement<R>> for &'a FieldElement<R> {
            type Output = FieldElement<R>;
            fn $m(self, o: &'b FieldElement<R>) -> FieldElement<R> {
                self.$try(o).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl<R: Rational> $tr for FieldElement<R> {
            type Output = FieldElement<R>;
            fn $m(self, o: FieldElement<R>) -> FieldElement<R> {
                (&self).$m(&o)
            }
        }
        impl<'b, R: Rational> $tr<&'b FieldElement<R>> for FieldElement<R> {
            type Output = FieldElement<R>;
            fn $m(self, o: &'b FieldElement<R>) -> FieldElement<R> {
                (&self).$m(o)
            }
        }
    };
}

field_op!(Add, add, try_add);
field_op!(Sub, sub, try_sub);
field_op!(Mul, mul, try_mul);
field_op!(Div, div, try_div);

impl<R: Rational> Neg for FieldElement<R> {
    type Output = FieldElement<R>;
    fn neg(self) -> FieldElement<R> {
        FieldElement::new(-self.p, -self.q, self.d)
    }
}

impl<R: Rational> Neg for &FieldElement<R> {
    type Output = FieldElement<R>;
    fn neg(self) -> FieldElement<R> {
        FieldElement::new(-self.p.clone(), -self.q.clone(), self.d)
    }
}
