//! The square lattice of `Y^2 = X^3 - X`, Weierstrass `℘`, and the Abel map of a
//! genus-2 curve `c y^2 = q(x)` along the real axis.

use crate::periods::{elliptic_real_period, PeriodError, PeriodVector};
use crate::quadrature::{integrate_inv_sqrt_abs, tanh_sinh_with, Abscissa, FactoredPolynomial, QuadratureConfig, QuadratureError};
use crate::scalar::{Complex, PrecisionContext, Real};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EllipticError {
    #[error("argument lies on a lattice point")]
    Pole,
    #[error("invalid input: {0}")]
    Domain(String),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error(transparent)]
    Period(#[from] PeriodError),
}

/// `2π / agm(1, sqrt 2)`, the real period of `Y^2 = X^3 - X` by the arithmetic-geometric mean.
pub fn agm_real_period<T: Real>(ctx: &PrecisionContext) -> T {
    let two = T::from_i64(2, ctx);
    let mut a = T::one(ctx);
    let mut b = two.clone().sqrt();
    let tol = T::pow10(-(T::effective_digits(ctx) as i32) - ctx.guard_digits() as i32 / 2, ctx);
    for _ in 0..200 {
        let next = (a.clone() + &b) / &two;
        b = (a * &b).sqrt();
        a = next;
        if (a.clone() - &b).abs() < tol {
            break;
        }
    }
    T::pi(ctx) * &two / a
}

/// `ω Z[i]`; with `ω = ϖ` this is the period lattice of `dX/Y` on `Y^2 = X^3 - X`.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareLattice<T> {
    omega: T,
    /// Invariant `g2` of the half-scale lattice `(ω/2) Z[i]`; equal to 4 when `ω = ϖ`.
    g2: T,
}

impl<T: Real> SquareLattice<T> {
    pub fn new(omega: T, ctx: &PrecisionContext) -> Result<Self, EllipticError> {
        if omega.is_negative() || omega.is_zero() || !omega.is_finite() {
            return Err(EllipticError::Domain(format!("omega must be positive, got {omega}")));
        }
        let ratio = agm_real_period::<T>(ctx) / &omega;
        let g2 = ratio.powi(4) * T::from_i64(4, ctx);
        Ok(Self { omega, g2 })
    }

    pub fn g2(&self) -> &T {
        &self.g2
    }

    /// The lattice of `Y^2 = X^3 - X` itself, with `ϖ = 5.2441151...`.
    pub fn of_curve(ctx: &PrecisionContext) -> Result<Self, EllipticError> {
        Self::new(elliptic_real_period(ctx)?, ctx)
    }

    pub fn omega(&self) -> &T {
        &self.omega
    }

    /// `m ϖ + n ϖ i`.
    pub fn point(&self, m: i64, n: i64, ctx: &PrecisionContext) -> Complex<T> {
        Complex::new(self.omega.clone() * T::from_i64(m, ctx), self.omega.clone() * T::from_i64(n, ctx))
    }

    /// Real coordinates of `z` in the basis `ϖ, ϖi`.
    pub fn coordinates(&self, z: &Complex<T>) -> (T, T) {
        (z.re.clone() / &self.omega, z.im.clone() / &self.omega)
    }
}

/// A point of `Y^2 = X^3 - X`, possibly the point at infinity.
#[derive(Debug, Clone, PartialEq)]
pub struct EllipticPoint<T> {
    pub x: Complex<T>,
    pub y: Complex<T>,
    pub at_infinity: bool,
}

impl<T: Real> EllipticPoint<T> {
    pub fn infinity(ctx: &PrecisionContext) -> Self {
        Self { x: Complex::zero(ctx), y: Complex::zero(ctx), at_infinity: true }
    }

    /// `|Y^2 - (X^3 - X)|`; zero at infinity.
    pub fn residual(&self, ctx: &PrecisionContext) -> T {
        if self.at_infinity {
            return T::zero(ctx);
        }
        let x3 = self.x.clone() * &self.x * &self.x;
        (self.y.clone() * &self.y - (x3 - &self.x)).abs()
    }
}

fn mod_positive<T: Real>(v: &T, m: &T) -> T {
    let r = v.clone() - (v.clone() / m).floor() * m;
    if r >= *m || r.is_negative() {
        r.clone() - (r / m).floor() * m
    } else {
        r
    }
}

/// Representative of `z` modulo `ϖ Z[i]` with both parts in `[0, ϖ)`.
pub fn reduce_mod_lattice<T: Real>(z: &Complex<T>, l: &SquareLattice<T>) -> Complex<T> {
    Complex::new(mod_positive(&z.re, &l.omega), mod_positive(&z.im, &l.omega))
}

fn centered<T: Real>(v: T, m: &T, ctx: &PrecisionContext) -> T {
    if v.clone() * T::from_i64(2, ctx) > *m {
        v - m
    } else {
        v
    }
}

/// Laurent coefficients `c_k` of `℘(u) = u^-2 + sum c_k u^(2k-2)` for invariants `g2`, `g3 = 0`.
fn laurent_coefficients<T: Real>(g2: &T, count: usize, ctx: &PrecisionContext) -> Vec<T> {
    let mut c = vec![T::zero(ctx); count.max(4)];
    c[2] = g2.clone() / T::from_i64(20, ctx);
    for k in 4..c.len() {
        let mut s = T::zero(ctx);
        for m in 2..=k - 2 {
            if !c[m].is_zero() && !c[k - m].is_zero() {
                s = s + c[m].clone() * &c[k - m];
            }
        }
        c[k] = s * T::from_i64(3, ctx) / T::from_i64(((2 * k + 1) * (k - 3)) as i64, ctx);
    }
    c
}

/// `℘` and `℘'` of the lattice `(ω/2) Z[i]` near the origin.
fn series_at_origin<T: Real>(u: &Complex<T>, l: &SquareLattice<T>, ctx: &PrecisionContext) -> (Complex<T>, Complex<T>) {
    let digits = (T::effective_digits(ctx) + ctx.guard_digits()) as f64;
    let radius = l.omega.to_f64() / 2.0;
    let ratio = (u.abs().to_f64() / radius).max(1e-300);
    // Nonzero terms advance by u^4.
    let per_term = -4.0 * ratio.log10();
    let count = (2.0 * (digits / per_term).ceil() + 6.0) as usize;
    let c = laurent_coefficients::<T>(&l.g2, count, ctx);
    let one = Complex::from_real(T::one(ctx), ctx);
    let u2 = u.clone() * u;
    let inv_u = one / u.clone();
    let inv_u2 = inv_u.clone() * &inv_u;
    let mut p = inv_u2.clone();
    let mut dp = -(inv_u2 * &inv_u).scale(&T::from_i64(2, ctx));
    // u^(2k-2) and u^(2k-3), starting at k = 2.
    let mut pw = u2.clone();
    let mut pw_d = u.clone();
    for (k, ck) in c.iter().enumerate().skip(2) {
        if !ck.is_zero() {
            p = p + pw.clone().scale(ck);
            dp = dp + pw_d.clone().scale(&(ck.clone() * T::from_i64(2 * k as i64 - 2, ctx)));
        }
        pw = pw * &u2;
        pw_d = pw_d * &u2;
    }
    (p, dp)
}

/// Duplication on `y^2 = 4x^3 - g2 x`.
fn double<T: Real>(x: &Complex<T>, y: &Complex<T>, g2: &T, ctx: &PrecisionContext) -> (Complex<T>, Complex<T>) {
    let t = |n: i64| T::from_i64(n, ctx);
    let m = (x.clone() * x).scale(&t(6)) - Complex::from_real(g2.clone() / t(2), ctx);
    let m = m / y.clone();
    let x3 = (m.clone() * &m).scale(&(T::one(ctx) / t(4))) - x.clone().scale(&t(2));
    let y3 = m * (x.clone() - &x3) - y;
    (x3, y3)
}

/// `(℘(z), ℘'(z))` normalized so that `℘` has period lattice `ω Z[i]` and
/// `℘'^2 = 4℘^3 - g2 ℘`. For the curve lattice (`g2 = 4`) it takes the values
/// `1, -1, 0` at `ϖ/2, ϖi/2, ϖ(1+i)/2`.
///
/// Concretely this is `(P(z/2), P'(z/2))` for the Weierstrass function `P` of `(ω/2) Z[i]`,
/// so that `dX/Y = dz` for `(X, Y) = (℘, ℘'/2)` on `Y^2 = X^3 - X`.
pub fn weierstrass_p<T: Real>(
    z: &Complex<T>,
    l: &SquareLattice<T>,
    ctx: &PrecisionContext,
) -> Result<(Complex<T>, Complex<T>), EllipticError> {
    if !z.is_finite() {
        return Err(EllipticError::Domain("argument not finite".into()));
    }
    let r = reduce_mod_lattice(z, l);
    let c = Complex::new(centered(r.re, &l.omega, ctx), centered(r.im, &l.omega, ctx));
    let tiny = T::pow10(-(T::effective_digits(ctx) as i32), ctx) * &l.omega;
    if c.abs() < tiny {
        return Err(EllipticError::Pole);
    }
    let two = T::from_i64(2, ctx);
    let mut u = c.scale(&(T::one(ctx) / &two));
    let mut halvings = 0;
    let small = l.omega.to_f64() / 16.0;
    while u.abs().to_f64() > small {
        u = u.scale(&(T::one(ctx) / &two));
        halvings += 1;
    }
    let (mut x, mut y) = series_at_origin(&u, l, ctx);
    for _ in 0..halvings {
        (x, y) = double(&x, &y, &l.g2, ctx);
    }
    Ok((x, y))
}

/// `(℘(z), ℘'(z)/2)` on `Y^2 = X^3 - X`; lattice points map to infinity.
pub fn uniformize<T: Real>(z: &Complex<T>, l: &SquareLattice<T>, ctx: &PrecisionContext) -> Result<EllipticPoint<T>, EllipticError> {
    match weierstrass_p(z, l, ctx) {
        Ok((x, dp)) => Ok(EllipticPoint { x, y: dp.scale(&(T::one(ctx) / T::from_i64(2, ctx))), at_infinity: false }),
        Err(EllipticError::Pole) => Ok(EllipticPoint::infinity(ctx)),
        Err(e) => Err(e),
    }
}

/// `K = I_1 / ϖ`: the lattice of the curve is `K ϖ Z[i]` and `z_E = z_C / K`.
pub fn homothety_constant<T: Real>(pv: &PeriodVector<T>, l: &SquareLattice<T>) -> Complex<T> {
    Complex::new(pv.i[0].re.clone() / &l.omega, pv.i[0].im.clone() / &l.omega)
}

/// `-(1/sqrt 5) x(x-1)(x-k)(x-2k+1)(x-2k)`, the right side of `y^2 = q(x) / (-sqrt 5)`.
pub fn twisted_quintic<T: Real>(kappa: &T, ctx: &PrecisionContext) -> Result<FactoredPolynomial<T>, EllipticError> {
    let one = T::one(ctx);
    if !(kappa > &one) {
        return Err(EllipticError::Domain(format!("kappa must exceed 1, got {kappa}")));
    }
    let two_k = kappa.clone() * T::from_i64(2, ctx);
    let lead = -(one.clone() / T::from_i64(5, ctx).sqrt());
    Ok(FactoredPolynomial::new(
        lead,
        vec![T::zero(ctx), one.clone(), kappa.clone(), two_k.clone() - &one, two_k],
    ))
}

/// Value of the Abel map, flagged when the endpoint is a branch point.
#[derive(Debug, Clone, PartialEq)]
pub struct AbelValue<T> {
    pub z: Complex<T>,
    pub at_branch_point: bool,
}

/// `x -> ∫_{-∞}^x dx / sqrt(p(x))` along the real axis for an odd-degree `p` with
/// real roots, with segment integrals cached. Where `p < 0` the integrand is taken as
/// `i / sqrt|p|`, the convention of the period integrals.
#[derive(Debug, Clone)]
pub struct AbelMap<T> {
    p: FactoredPolynomial<T>,
    /// `∫_{-∞}^{r_j}` for each sorted root.
    to_root: Vec<Complex<T>>,
    ctx: PrecisionContext,
}

fn phase<T: Real>(v: T, sign: i8, ctx: &PrecisionContext) -> Complex<T> {
    if sign < 0 {
        Complex::from_imag(v, ctx)
    } else {
        Complex::from_real(v, ctx)
    }
}

impl<T: Real> AbelMap<T> {
    pub fn new(p: FactoredPolynomial<T>, ctx: &PrecisionContext) -> Result<Self, EllipticError> {
        let mut p = p;
        if p.roots.len().is_multiple_of(2) || p.roots.len() < 3 {
            return Err(EllipticError::Domain(format!("need odd degree >= 3, got {}", p.roots.len())));
        }
        p.roots.sort_by(|a, b| a.partial_cmp(b).expect("finite roots"));
        if p.roots.windows(2).any(|w| w[0] == w[1]) {
            return Err(EllipticError::Domain("repeated root".into()));
        }
        let mut map = Self { p, to_root: Vec::new(), ctx: *ctx };
        let first = map.p.roots[0].clone();
        let mut acc = map.tail(&first)?;
        map.to_root.push(acc.clone());
        for j in 0..map.p.roots.len() - 1 {
            let (a, b) = (map.p.roots[j].clone(), map.p.roots[j + 1].clone());
            let (r, sign) = integrate_inv_sqrt_abs(&map.p, &a, &b, ctx)?;
            acc = acc + phase(r.value, sign, ctx);
            map.to_root.push(acc.clone());
        }
        Ok(map)
    }

    /// Abel map of `y^2 = q(x) / (-sqrt 5)` with `q` the κ-form quintic.
    pub fn twisted(kappa: &T, ctx: &PrecisionContext) -> Result<Self, EllipticError> {
        Self::new(twisted_quintic(kappa, ctx)?, ctx)
    }

    pub fn polynomial(&self) -> &FactoredPolynomial<T> {
        &self.p
    }

    /// `∫_{-∞}^{a}` for `a <= r_1`, via `x = a - (1 - v)/v`.
    fn tail(&self, a: &T) -> Result<Complex<T>, EllipticError> {
        let ctx = &self.ctx;
        let n = self.p.roots.len();
        let lead = self.p.lead.abs();
        let shifted: Vec<T> = self.p.roots.iter().map(|r| r.clone() - a).collect();
        let zero = T::zero(ctx);
        let one = T::one(ctx);
        let res = tanh_sinh_with(
            |node: &Abscissa<T>| {
                let v = &node.x;
                let mut prod = lead.clone();
                for s in &shifted {
                    prod = prod * (s.clone() * v + &node.from_b);
                }
                let root_v = v.clone().sqrt();
                if n >= 4 {
                    root_v.powi(n as u32 - 4) / prod.sqrt()
                } else {
                    one.clone() / (root_v * prod.sqrt())
                }
            },
            &zero,
            &one,
            ctx,
            &QuadratureConfig::default(),
        )?;
        let below = a.clone() - &one;
        Ok(phase(res.value, self.p.sign_at(&below), ctx))
    }

    /// `branch * ∫_{-∞}^{x}`, `branch` being `1` or `-1`.
    pub fn eval(&self, x: &T, branch: i8) -> Result<AbelValue<T>, EllipticError> {
        if branch != 1 && branch != -1 {
            return Err(EllipticError::Domain(format!("branch must be 1 or -1, got {branch}")));
        }
        if !x.is_finite() {
            return Err(EllipticError::Domain("endpoint not finite".into()));
        }
        let ctx = &self.ctx;
        let roots = &self.p.roots;
        let at_branch_point = roots.iter().any(|r| r == x);
        let k = roots.iter().filter(|r| *r <= x).count();
        let z = if k == 0 {
            self.tail(x)?
        } else if roots[k - 1] == *x {
            self.to_root[k - 1].clone()
        } else {
            let (r, sign) = integrate_inv_sqrt_abs(&self.p, &roots[k - 1], x, ctx)?;
            self.to_root[k - 1].clone() + phase(r.value, sign, ctx)
        };
        let z = if branch < 0 { -z } else { z };
        Ok(AbelValue { z, at_branch_point })
    }
}

/// `branch * ∫_{-∞}^{x} dx / sqrt(q(x) / (-sqrt 5))` for the κ-form quintic `q`.
pub fn abel_map_c<T: Real>(x: &T, branch: i8, kappa: &T, ctx: &PrecisionContext) -> Result<AbelValue<T>, EllipticError> {
    AbelMap::twisted(kappa, ctx)?.eval(x, branch)
}
