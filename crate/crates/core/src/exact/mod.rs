//! Exact arithmetic in `Q(sqrt d)`, polynomials and rational functions over it, and the
//! symbolic checks certifying a cover of `Y^2 = X^3 - X`.

mod field;
mod poly;
mod ratfunc;

pub use field::{parse_rational, FieldElement, Rational};
pub use poly::{poly_sqrt, square_free_decomposition, Poly};
pub use ratfunc::{exact_sqrt_ratfunc, RatFunc};

use num_rational::BigRational;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("elements of Q(sqrt {left}) and Q(sqrt {right}) cannot be combined")]
    FieldMismatch { left: i64, right: i64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("division leaves a remainder")]
    Inexact,
    #[error("cannot parse {0:?}")]
    Parse(String),
}

/// `x(x-1)(x-k)(x-2k+1)(x-2k)` over the field of `k`.
pub fn family_quintic_exact<R: Rational>(kappa: &FieldElement<R>) -> Poly<R> {
    let d = kappa.d();
    let one = FieldElement::one(d);
    let two_k = kappa + kappa;
    Poly::from_roots(&[FieldElement::zero(d), one.clone(), kappa.clone(), &two_k - &one, two_k], d)
}

/// Checks `h1^2 * q / twist = g^3 - g` exactly, i.e. that `(g(x), h1(x) y)` lies on
/// `Y^2 = X^3 - X` whenever `twist * y^2 = q(x)`.
pub fn verify_cover_identity<R: Rational>(
    g: &RatFunc<R>,
    h1: &RatFunc<R>,
    q: &Poly<R>,
    twist: &FieldElement<R>,
) -> Result<bool, ExactError> {
    let lhs = h1.pow(2).try_mul(&RatFunc::from_poly(q.clone()))?.try_div(&RatFunc::constant(twist.clone()))?;
    let rhs = g.pow(3).try_sub(g)?;
    Ok(lhs == rhs)
}

/// `g'/h1` when it is constant: the pullback of `dX/Y` is then a constant multiple of `dx/y`.
pub fn pullback_constant<R: Rational>(g: &RatFunc<R>, h1: &RatFunc<R>) -> Result<Option<FieldElement<R>>, ExactError> {
    if h1.is_zero() {
        return Err(ExactError::DivisionByZero);
    }
    Ok(g.derivative().try_div(h1)?.as_constant())
}

/// `(1 + sqrt 5) / 2`.
pub fn golden_ratio<R: Rational>() -> FieldElement<R> {
    let half = R::one() / &R::from_int(2);
    FieldElement::new(half.clone(), half, 5)
}

/// Smallest `|k| <= 6` such that substituting `x -> ε^(6k) x` and dividing by the leading
/// numerator coefficient leaves every coefficient purely rational or purely irrational.
pub fn homogeneity_exponent<R: Rational>(g: &RatFunc<R>) -> Option<i32> {
    let pure = |r: &RatFunc<R>| r.normalized_coefficients().iter().all(|c| c.is_pure());
    if pure(g) {
        return Some(0);
    }
    if g.d() != 5 {
        return None;
    }
    let e6 = golden_ratio::<R>().pow(6);
    let e6_inv = e6.inv().expect("unit");
    let (mut up, mut down) = (e6.clone(), e6_inv.clone());
    for k in 1..=6 {
        if pure(&g.scale_var(&up)) {
            return Some(k);
        }
        if pure(&g.scale_var(&down)) {
            return Some(-k);
        }
        up = &up * &e6;
        down = &down * &e6_inv;
    }
    None
}

pub fn check_homogeneity<R: Rational>(g: &RatFunc<R>) -> bool {
    homogeneity_exponent(g).is_some()
}

pub type QuadraticNumber = FieldElement<BigRational>;
pub type QPoly = Poly<BigRational>;
pub type QRatFunc = RatFunc<BigRational>;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_cover() {
        let g = QRatFunc::x(5);
        let h1 = QRatFunc::constant(QuadraticNumber::one(5));
        let q = QPoly::from_ints(&[0, -1, 0, 1], 5);
        assert!(verify_cover_identity(&g, &h1, &q, &QuadraticNumber::one(5)).unwrap());
        assert_eq!(pullback_constant(&g, &h1).unwrap(), Some(QuadraticNumber::one(5)));
        let g2 = QRatFunc::from_poly(QPoly::x(5).pow(2));
        assert_eq!(pullback_constant(&g2, &h1).unwrap(), None);
    }

    #[test]
    fn homogeneity_examples() {
        let x = QPoly::x(5);
        let g = QRatFunc::new(x.clone(), &x - &QPoly::one(5)).unwrap();
        assert!(check_homogeneity(&g));
        let mixed = QRatFunc::from_poly(&x + &QPoly::constant(QuadraticNumber::from_ints(1, 1, 5)));
        assert!(!check_homogeneity(&mixed));
    }

    #[test]
    fn quintic_x4_coefficient() {
        let k = QuadraticNumber::from_ints(81, 36, 5);
        let q = family_quintic_exact(&k);
        assert_eq!(q.degree(), Some(5));
        assert_eq!(q.coeff(4), -k.scale(&BigRational::from_integer(5.into())));
        assert_eq!(q.coeff(4), QuadraticNumber::from_ints(-405, -180, 5));
    }
}
