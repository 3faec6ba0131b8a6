use super::{PrecisionContext, Real};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Complex number over a [`Real`] carrier.
#[derive(Clone, Debug, PartialEq)]
pub struct Complex<T> {
    pub re: T,
    pub im: T,
}

impl<T: Real> Complex<T> {
    pub fn new(re: T, im: T) -> Self {
        Self { re, im }
    }

    pub fn zero(ctx: &PrecisionContext) -> Self {
        Self::new(T::zero(ctx), T::zero(ctx))
    }

    pub fn from_real(re: T, ctx: &PrecisionContext) -> Self {
        Self::new(re, T::zero(ctx))
    }

    pub fn from_imag(im: T, ctx: &PrecisionContext) -> Self {
        Self::new(T::zero(ctx), im)
    }

    pub fn i(ctx: &PrecisionContext) -> Self {
        Self::new(T::zero(ctx), T::one(ctx))
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }

    /// Multiplication by the imaginary unit.
    pub fn mul_i(&self) -> Self {
        Self::new(-self.im.clone(), self.re.clone())
    }

    pub fn scale(&self, k: &T) -> Self {
        Self::new(self.re.clone() * k, self.im.clone() * k)
    }

    pub fn norm_sqr(&self) -> T {
        self.re.clone() * &self.re + self.im.clone() * &self.im
    }

    pub fn abs(&self) -> T {
        self.norm_sqr().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    /// Principal square root (non-negative real part, branch cut on the negative axis).
    pub fn sqrt(&self) -> Self {
        if self.re.is_zero() && self.im.is_zero() {
            return self.clone();
        }
        let half = T::from_f64(0.5, &PrecisionContext::for_bits(self.re.precision_bits()));
        let r = self.abs();
        let a = ((r.clone() + &self.re) * &half).sqrt();
        let b = ((r - &self.re) * &half).sqrt();
        if self.im.is_negative() {
            Self::new(a, -b)
        } else {
            Self::new(a, b)
        }
    }

    pub fn powi(&self, n: u32) -> Self {
        let mut acc: Option<Self> = None;
        for _ in 0..n {
            acc = Some(match acc {
                Some(a) => a * self,
                None => self.clone(),
            });
        }
        acc.unwrap_or_else(|| {
            let c = PrecisionContext::for_bits(self.re.precision_bits());
            Self::from_real(T::one(&c), &c)
        })
    }
}

impl<T: Real> fmt::Display for Complex<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(20) as u32;
        let im = self.im.to_decimal_string(digits);
        if self.im.is_negative() {
            write!(f, "{} - {}i", self.re.to_decimal_string(digits), &im[1..])
        } else {
            write!(f, "{} + {}i", self.re.to_decimal_string(digits), im)
        }
    }
}

impl<T: Real> Add for Complex<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.re + o.re, self.im + o.im)
    }
}

impl<'a, T: Real> Add<&'a Complex<T>> for Complex<T> {
    type Output = Self;
    fn add(self, o: &'a Complex<T>) -> Self {
        Self::new(self.re + &o.re, self.im + &o.im)
    }
}

impl<T: Real> Sub for Complex<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.re - o.re, self.im - o.im)
    }
}

impl<'a, T: Real> Sub<&'a Complex<T>> for Complex<T> {
    type Output = Self;
    fn sub(self, o: &'a Complex<T>) -> Self {
        Self::new(self.re - &o.re, self.im - &o.im)
    }
}

impl<'a, T: Real> Mul<&'a Complex<T>> for Complex<T> {
    type Output = Self;
    fn mul(self, o: &'a Complex<T>) -> Self {
        let re = self.re.clone() * &o.re - self.im.clone() * &o.im;
        let im = self.re * &o.im + self.im * &o.re;
        Self::new(re, im)
    }
}

impl<T: Real> Mul for Complex<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        self * &o
    }
}

impl<'a, T: Real> Div<&'a Complex<T>> for Complex<T> {
    type Output = Self;
    fn div(self, o: &'a Complex<T>) -> Self {
        let den = o.norm_sqr();
        let re = (self.re.clone() * &o.re + self.im.clone() * &o.im) / &den;
        let im = (self.im * &o.re - self.re * &o.im) / &den;
        Self::new(re, im)
    }
}

impl<T: Real> Div for Complex<T> {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        self / &o
    }
}

impl<T: Real> Neg for Complex<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.re, -self.im)
    }
}
