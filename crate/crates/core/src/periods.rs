//! Period integrals of `y^2 = x(x-1)(x-s)(x-2s+1)(x-2s)` and of `y^2 = x^3 - x`.

use crate::quadrature::{integrate_inv_sqrt_abs, integrate_signed_sqrt, FactoredPolynomial, QuadratureError};
use crate::scalar::{Complex, PrecisionContext, Real};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PeriodError {
    #[error("parameter out of range: {0}")]
    Domain(String),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
}

/// The quintic `x(x-1)(x-s)(x-2s+1)(x-2s)` in factored form.
pub fn family_quintic<T: Real>(s: &T, ctx: &PrecisionContext) -> Result<FactoredPolynomial<T>, PeriodError> {
    let one = T::one(ctx);
    if !(s > &one) || !s.is_finite() {
        return Err(PeriodError::Domain(format!("s must exceed 1, got {s}")));
    }
    let two_s = s.clone() + s;
    let roots = vec![T::zero(ctx), one.clone(), s.clone(), two_s.clone() - &one, two_s];
    Ok(FactoredPolynomial::monic(roots, ctx))
}

/// `∫_0^1 dx / sqrt|q_s(x)|`.
pub fn pi1<T: Real>(s: &T, ctx: &PrecisionContext) -> Result<T, PeriodError> {
    let q = family_quintic(s, ctx)?;
    let (r, _) = integrate_inv_sqrt_abs(&q, &q.roots[0], &q.roots[1], ctx)?;
    Ok(r.value.abs())
}

/// `∫_s^{2s-1} dx / sqrt|q_s(x)|`.
pub fn pi3<T: Real>(s: &T, ctx: &PrecisionContext) -> Result<T, PeriodError> {
    let q = family_quintic(s, ctx)?;
    let (r, _) = integrate_inv_sqrt_abs(&q, &q.roots[2], &q.roots[3], ctx)?;
    Ok(r.value.abs())
}

/// The ratio `pi3(s) / pi1(s)`.
pub fn rho<T: Real>(s: &T, ctx: &PrecisionContext) -> Result<T, PeriodError> {
    Ok(pi3(s, ctx)? / pi1(s, ctx)?)
}

/// Five finite real branch points in increasing order.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchPoints<T> {
    r: [T; 5],
}

impl<T: Real> BranchPoints<T> {
    pub fn new(r: [T; 5]) -> Result<Self, PeriodError> {
        if r.iter().any(|x| !x.is_finite()) || r.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(PeriodError::Domain("branch points must be finite and strictly increasing".into()));
        }
        Ok(Self { r })
    }

    pub fn from_parameter(s: &T, ctx: &PrecisionContext) -> Result<Self, PeriodError> {
        let q = family_quintic(s, ctx)?;
        let r: [T; 5] = q.roots.try_into().expect("five roots");
        Self::new(r)
    }

    pub fn points(&self) -> &[T; 5] {
        &self.r
    }

    /// Whether `r1 + r5 = r2 + r4 = 2 r3` to working precision.
    pub fn symmetric_form(&self, ctx: &PrecisionContext) -> bool {
        let r = &self.r;
        let two = T::from_i64(2, ctx);
        let a = r[0].clone() + &r[4];
        let b = r[1].clone() + &r[3];
        let c = r[2].clone() * &two;
        let scale = r.iter().map(|x| x.abs().to_f64()).fold(1.0, f64::max);
        let tol = 10f64.powi(-(T::effective_digits(ctx) as i32) + 2) * scale;
        (a.clone() - &b).abs().to_f64() <= tol && (a - &c).abs().to_f64() <= tol
    }

    pub fn quintic(&self, ctx: &PrecisionContext) -> FactoredPolynomial<T> {
        FactoredPolynomial::monic(self.r.to_vec(), ctx)
    }

    pub fn scaled(&self, lambda: &T) -> Result<Self, PeriodError> {
        Self::new(self.r.clone().map(|x| x * lambda))
    }
}

/// The four periods `I_j = 2 ∫_{r_j}^{r_{j+1}} dx / sqrt(q(x))`.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodVector<T> {
    pub i: [Complex<T>; 4],
}

impl<T: Real> PeriodVector<T> {
    /// Expected multipliers `m_j` (as `(re, im)`) with `I_j = K m_j ϖ`.
    pub const MULTIPLIERS: [(i64, i64); 4] = [(1, 0), (0, 3), (3, 0), (0, 1)];

    pub fn multiplier(j: usize, ctx: &PrecisionContext) -> Complex<T> {
        let (a, b) = Self::MULTIPLIERS[j];
        Complex::new(T::from_i64(a, ctx), T::from_i64(b, ctx))
    }

    /// `|I_j - K m_j ϖ|` for every `j`, with `K = I_1 / ϖ`.
    pub fn homothety_residuals(&self, ctx: &PrecisionContext) -> [T; 4] {
        std::array::from_fn(|j| (self.i[j].clone() - Self::multiplier(j, ctx) * &self.i[0]).abs())
    }
}

/// Periods between consecutive roots of a factored quintic.
pub fn period_vector_of<T: Real>(q: &FactoredPolynomial<T>, ctx: &PrecisionContext) -> Result<PeriodVector<T>, PeriodError> {
    if q.roots.len() != 5 {
        return Err(PeriodError::Domain(format!("expected five roots, got {}", q.roots.len())));
    }
    let mut out = Vec::with_capacity(4);
    for j in 0..4 {
        out.push(integrate_signed_sqrt(q, &q.roots[j], &q.roots[j + 1], ctx)?.value);
    }
    Ok(PeriodVector { i: out.try_into().expect("four periods") })
}

pub fn period_vector<T: Real>(bp: &BranchPoints<T>, ctx: &PrecisionContext) -> Result<PeriodVector<T>, PeriodError> {
    period_vector_of(&bp.quintic(ctx), ctx)
}

/// The real period `ϖ = 2 ∫_0^1 dx / sqrt(x - x^3)` of `y^2 = x^3 - x`.
pub fn elliptic_real_period<T: Real>(ctx: &PrecisionContext) -> Result<T, PeriodError> {
    let one = T::one(ctx);
    let q = FactoredPolynomial::new(-one.clone(), vec![-one.clone(), T::zero(ctx), one]);
    let (r, _) = integrate_inv_sqrt_abs(&q, &q.roots[1], &q.roots[2], ctx)?;
    Ok(r.value * T::from_i64(2, ctx))
}
