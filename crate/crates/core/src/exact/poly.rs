use super::{ExactError, FieldElement, Rational};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Dense polynomial over `Q(sqrt d)`, lowest degree first, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly<R> {
    coeffs: Vec<FieldElement<R>>,
    d: i64,
}

impl<R: Rational> Poly<R> {
    pub fn new(mut coeffs: Vec<FieldElement<R>>, d: i64) -> Self {
        assert!(coeffs.iter().all(|c| c.d() == d), "coefficient from another field");
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs, d }
    }

    pub fn zero(d: i64) -> Self {
        Self { coeffs: Vec::new(), d }
    }

    pub fn constant(c: FieldElement<R>) -> Self {
        let d = c.d();
        Self::new(vec![c], d)
    }

    pub fn one(d: i64) -> Self {
        Self::constant(FieldElement::one(d))
    }

    pub fn x(d: i64) -> Self {
        Self::new(vec![FieldElement::zero(d), FieldElement::one(d)], d)
    }

    /// `x - r`.
    pub fn linear_root(r: &FieldElement<R>) -> Self {
        Self::new(vec![-r, FieldElement::one(r.d())], r.d())
    }

    /// `prod (x - r)` over the given roots.
    pub fn from_roots(roots: &[FieldElement<R>], d: i64) -> Self {
        roots.iter().fold(Self::one(d), |acc, r| &acc * &Self::linear_root(r))
    }

    pub fn from_ints(c: &[i64], d: i64) -> Self {
        Self::new(c.iter().map(|&v| FieldElement::from_int(v, d)).collect(), d)
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn coeffs(&self) -> &[FieldElement<R>] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> FieldElement<R> {
        self.coeffs.get(k).cloned().unwrap_or_else(|| FieldElement::zero(self.d))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> FieldElement<R> {
        self.coeffs.last().cloned().unwrap_or_else(|| FieldElement::zero(self.d))
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    fn check(&self, o: &Self) -> Result<(), ExactError> {
        if self.d == o.d {
            Ok(())
        } else {
            Err(ExactError::FieldMismatch { left: self.d, right: o.d })
        }
    }

    pub fn scale(&self, k: &FieldElement<R>) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect(), self.d)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.leading().inv().expect("nonzero leading coefficient"))
    }

    pub fn try_add(&self, o: &Self) -> Result<Self, ExactError> {
        self.check(o)?;
        let n = self.coeffs.len().max(o.coeffs.len());
        Ok(Self::new((0..n).map(|k| self.coeff(k) + o.coeff(k)).collect(), self.d))
    }

    pub fn try_sub(&self, o: &Self) -> Result<Self, ExactError> {
        self.check(o)?;
        let n = self.coeffs.len().max(o.coeffs.len());
        Ok(Self::new((0..n).map(|k| self.coeff(k) - o.coeff(k)).collect(), self.d))
    }

    pub fn try_mul(&self, o: &Self) -> Result<Self, ExactError> {
        self.check(o)?;
        if self.is_zero() || o.is_zero() {
            return Ok(Self::zero(self.d));
        }
        let mut out = vec![FieldElement::zero(self.d); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Ok(Self::new(out, self.d))
    }

    /// Quotient and remainder with `deg r < deg divisor`.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self), ExactError> {
        self.check(divisor)?;
        let dd = divisor.degree().ok_or(ExactError::DivisionByZero)?;
        let lead_inv = divisor.leading().inv()?;
        let mut rem = self.coeffs.clone();
        let n = self.coeffs.len();
        if n <= dd {
            return Ok((Self::zero(self.d), self.clone()));
        }
        let mut quot = vec![FieldElement::zero(self.d); n - dd];
        for k in (0..n - dd).rev() {
            let c = &rem[k + dd] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (j, b) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = &rem[k + j] - &(&c * b);
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        Ok((Self::new(quot, self.d), Self::new(rem, self.d)))
    }

    /// Exact quotient; fails when the division leaves a remainder.
    pub fn div_exact(&self, divisor: &Self) -> Result<Self, ExactError> {
        let (q, r) = self.div_rem(divisor)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(ExactError::Inexact)
        }
    }

    /// Monic greatest common divisor (zero only when both inputs are zero).
    pub fn gcd(&self, o: &Self) -> Result<Self, ExactError> {
        self.check(o)?;
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let r = a.div_rem(&b)?.1;
            a = b;
            b = r.monic();
        }
        Ok(a.monic())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.scale(&R::from_int(k as i64)))
                .collect(),
            self.d,
        )
    }

    pub fn eval(&self, x: &FieldElement<R>) -> FieldElement<R> {
        self.coeffs.iter().rev().fold(FieldElement::zero(self.d), |acc, c| &(&acc * x) + c)
    }

    /// `self(other(x))`.
    pub fn compose(&self, other: &Self) -> Result<Self, ExactError> {
        self.check(other)?;
        let mut acc = Self::zero(self.d);
        for c in self.coeffs.iter().rev() {
            acc = acc.try_mul(other)?.try_add(&Self::constant(c.clone()))?;
        }
        Ok(acc)
    }

    /// `self(c x)`.
    pub fn scale_var(&self, c: &FieldElement<R>) -> Self {
        let mut pw = FieldElement::one(self.d);
        let mut out = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            out.push(a * &pw);
            pw = &pw * c;
        }
        Self::new(out, self.d)
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::one(self.d), |acc, _| &acc * self)
    }

    pub fn to_canonical_string(&self) -> String {
        let items: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        format!("[{}]", items.join(", "))
    }
}

impl<R: Rational> fmt::Display for Poly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let mono = match k {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{k}"),
            };
            if k > 0 && c.is_one() {
                f.write_str(&mono)?;
            } else if k == 0 {
                write!(f, "({c})")?;
            } else {
                write!(f, "({c})*{mono}")?;
            }
        }
        Ok(())
    }
}

impl<R: Rational> fmt::Debug for Poly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly{}", self.to_canonical_string())
    }
}

macro_rules! poly_op {
    ($tr:ident, $m:ident, $try:ident) => {
        impl<'a, 'b, R: Rational> $tr<&'b Poly<R>> for &'a Poly<R> {
            type Output = Poly<R>;
            fn $m(self, o: &'b Poly<R>) -> Poly<R> {
                self.$try(o).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl<R: Rational> $tr for Poly<R> {
            type Output = Poly<R>;
            fn $m(self, o: Poly<R>) -> Poly<R> {
                (&self).$m(&o)
            }
        }
    };
}

poly_op!(Add, add, try_add);
poly_op!(Sub, sub, try_sub);
poly_op!(Mul, mul, try_mul);

impl<R: Rational> Neg for &Poly<R> {
    type Output = Poly<R>;
    fn neg(self) -> Poly<R> {
        Poly::new(self.coeffs.iter().map(|c| -c).collect(), self.d)
    }
}

impl<R: Rational> Neg for Poly<R> {
    type Output = Poly<R>;
    fn neg(self) -> Poly<R> {
        -&self
    }
}

/// Square-free decomposition of a monic polynomial: pairs `(a_i, i)` with `f = prod a_i^i`.
pub fn square_free_decomposition<R: Rational>(f: &Poly<R>) -> Result<Vec<(Poly<R>, usize)>, ExactError> {
    let f = f.monic();
    let mut out = Vec::new();
    if f.degree().unwrap_or(0) == 0 {
        return Ok(out);
    }
    let fp = f.derivative();
    let a0 = f.gcd(&fp)?;
    let mut b = f.div_exact(&a0)?;
    let c = fp.div_exact(&a0)?;
    let mut dpoly = c.try_sub(&b.derivative())?;
    let mut i = 1;
    while b.degree().unwrap_or(0) > 0 {
        let a = b.gcd(&dpoly)?;
        b = b.div_exact(&a)?;
        let c = dpoly.div_exact(&a)?;
        dpoly = c.try_sub(&b.derivative())?;
        if a.degree().unwrap_or(0) > 0 {
            out.push((a, i));
        }
        i += 1;
    }
    Ok(out)
}

/// Square root of a polynomial when it is a perfect square over the field.
pub fn poly_sqrt<R: Rational>(p: &Poly<R>) -> Result<Option<Poly<R>>, ExactError> {
    if p.is_zero() {
        return Ok(Some(p.clone()));
    }
    let lead_root = match p.leading().sqrt() {
        Some(r) => r,
        None => return Ok(None),
    };
    let mut root = Poly::constant(lead_root);
    for (a, mult) in square_free_decomposition(p)? {
        if mult % 2 == 1 {
            return Ok(None);
        }
        root = root.try_mul(&a.pow((mult / 2) as u32))?;
    }
    Ok(Some(root))
}
