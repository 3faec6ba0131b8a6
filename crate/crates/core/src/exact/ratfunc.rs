use super::poly::poly_sqrt;
use super::{ExactError, FieldElement, Poly, Rational};
use std::fmt;

/// Reduced rational function with monic denominator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc<R> {
    num: Poly<R>,
    den: Poly<R>,
}

impl<R: Rational> RatFunc<R> {
    pub fn new(num: Poly<R>, den: Poly<R>) -> Result<Self, ExactError> {
        if num.d() != den.d() {
            return Err(ExactError::FieldMismatch { left: num.d(), right: den.d() });
        }
        if den.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self { den: Poly::one(num.d()), num });
        }
        let g = num.gcd(&den)?;
        let num = num.div_exact(&g)?;
        let den = den.div_exact(&g)?;
        let lead = den.leading().inv()?;
        Ok(Self { num: num.scale(&lead), den: den.scale(&lead) })
    }

    pub fn from_poly(p: Poly<R>) -> Self {
        let d = p.d();
        Self { num: p, den: Poly::one(d) }
    }

    pub fn constant(c: FieldElement<R>) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn x(d: i64) -> Self {
        Self::from_poly(Poly::x(d))
    }

    pub fn num(&self) -> &Poly<R> {
        &self.num
    }

    pub fn den(&self) -> &Poly<R> {
        &self.den
    }

    pub fn d(&self) -> i64 {
        self.num.d()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The constant value, when the function is constant.
    pub fn as_constant(&self) -> Option<FieldElement<R>> {
        (self.den.is_constant() && self.num.is_constant()).then(|| self.num.coeff(0))
    }

    pub fn try_add(&self, o: &Self) -> Result<Self, ExactError> {
        let n = self.num.try_mul(&o.den)?.try_add(&o.num.try_mul(&self.den)?)?;
        Self::new(n, self.den.try_mul(&o.den)?)
    }

    pub fn try_sub(&self, o: &Self) -> Result<Self, ExactError> {
        let n = self.num.try_mul(&o.den)?.try_sub(&o.num.try_mul(&self.den)?)?;
        Self::new(n, self.den.try_mul(&o.den)?)
    }

    pub fn try_mul(&self, o: &Self) -> Result<Self, ExactError> {
        Self::new(self.num.try_mul(&o.num)?, self.den.try_mul(&o.den)?)
    }

    pub fn try_div(&self, o: &Self) -> Result<Self, ExactError> {
        if o.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        Self::new(self.num.try_mul(&o.den)?, self.den.try_mul(&o.num)?)
    }

    pub fn scale(&self, k: &FieldElement<R>) -> Self {
        Self::new(self.num.scale(k), self.den.clone()).expect("nonzero denominator")
    }

    pub fn pow(&self, n: u32) -> Self {
        Self { num: self.num.pow(n), den: self.den.pow(n) }
    }

    pub fn derivative(&self) -> Self {
        let n = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        Self::new(n, self.den.pow(2)).expect("nonzero denominator")
    }

    pub fn eval(&self, x: &FieldElement<R>) -> Result<FieldElement<R>, ExactError> {
        self.num.eval(x).try_div(&self.den.eval(x))
    }

    /// `self(c x)`.
    pub fn scale_var(&self, c: &FieldElement<R>) -> Self {
        Self::new(self.num.scale_var(c), self.den.scale_var(c)).expect("nonzero denominator")
    }

    /// Every coefficient after dividing by the numerator's leading coefficient.
    pub fn normalized_coefficients(&self) -> Vec<FieldElement<R>> {
        let lead = self.num.leading();
        if lead.is_zero() {
            return Vec::new();
        }
        let inv = lead.inv().expect("nonzero");
        self.num.coeffs().iter().chain(self.den.coeffs()).map(|c| c * &inv).collect()
    }
}

impl<R: Rational> fmt::Display for RatFunc<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_constant() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl<R: Rational> fmt::Debug for RatFunc<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFunc({:?} / {:?})", self.num, self.den)
    }
}

/// `S` with `S^2 = F` when `F` is a square of a rational function; the leading
/// coefficient of the numerator of `S` has positive rational part.
pub fn exact_sqrt_ratfunc<R: Rational>(f: &RatFunc<R>) -> Result<Option<RatFunc<R>>, ExactError> {
    if f.is_zero() {
        return Ok(Some(f.clone()));
    }
    let (n, d) = match (poly_sqrt(f.num())?, poly_sqrt(f.den())?) {
        (Some(n), Some(d)) => (n, d),
        _ => return Ok(None),
    };
    let s = RatFunc::new(n, d)?;
    let lead = s.num().leading();
    Ok(Some(if lead.is_positive_normalized() { s } else { s.scale(&-FieldElement::one(lead.d())) }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type P = Poly<BigRational>;
    type RF = RatFunc<BigRational>;

    #[test]
    fn canonical_form_reduces() {
        let num = P::from_ints(&[-1, 0, 1], 5);
        let den = P::from_ints(&[-2, 2], 5);
        let r = RF::new(num, den).unwrap();
        assert_eq!(r.den(), &P::one(5));
        assert_eq!(r.num(), &P::from_ints(&[1, 1], 5).scale(&FieldElement::new(
            BigRational::new(1.into(), 2.into()),
            BigRational::from_integer(0.into()),
            5
        )));
    }

    #[test]
    fn zero_denominator_rejected() {
        assert_eq!(RF::new(P::one(5), P::zero(5)), Err(ExactError::DivisionByZero));
    }

    #[test]
    fn sqrt_examples() {
        let x = RF::x(5);
        assert_eq!(exact_sqrt_ratfunc(&x.pow(2)).unwrap().unwrap(), x);
        let f = RF::new(P::from_ints(&[1, 2, 1], 5), P::from_ints(&[0, 0, 1], 5)).unwrap();
        let s = exact_sqrt_ratfunc(&f).unwrap().unwrap();
        assert_eq!(s, RF::new(P::from_ints(&[1, 1], 5), P::x(5)).unwrap());
        assert!(exact_sqrt_ratfunc(&x).unwrap().is_none());
    }

    #[test]
    fn quotient_rule() {
        let f = RF::new(P::one(5), P::x(5)).unwrap();
        let expect = RF::new(P::from_ints(&[-1], 5), P::from_ints(&[0, 0, 1], 5)).unwrap();
        assert_eq!(f.derivative(), expect);
    }
}
