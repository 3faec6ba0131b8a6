//! Tanh-sinh quadrature at arbitrary precision.

use crate::scalar::{Complex, PrecisionContext, Real};
use std::any::{Any, TypeId};
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadratureError {
    #[error("no convergence after {levels} levels (estimated error {est_error:e})")]
    NoConvergence { levels: u32, est_error: f64 },
    #[error("invalid interval: {0}")]
    Domain(String),
    #[error("integrand is not finite at x = {x}")]
    Evaluation { x: f64 },
    #[error("integrand changes sign inside the interval (root at {root})")]
    Sign { root: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadratureConfig {
    pub max_level: u32,
    pub min_level: u32,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self { max_level: 12, min_level: 2 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureResult<V, T = V> {
    pub value: V,
    pub est_error: T,
    pub levels_used: u32,
}

/// An interior node together with its exact distances to both endpoints.
#[derive(Debug, Clone)]
pub struct Abscissa<T> {
    pub x: T,
    pub from_a: T,
    pub from_b: T,
}

#[derive(Debug, Clone)]
struct Node<T> {
    /// `1 - tanh(u)`: distance from the node to the nearer endpoint of [-1, 1].
    near: T,
    /// `1 + tanh(u)`.
    far: T,
    weight: T,
    center: bool,
}

type NodeKey = (TypeId, usize, u32, u32);

fn node_cache() -> &'static Mutex<HashMap<NodeKey, Arc<dyn Any + Send + Sync>>> {
    static CACHE: OnceLock<Mutex<HashMap<NodeKey, Arc<dyn Any + Send + Sync>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn nodes<T: Real>(level: u32, ctx: &PrecisionContext, cutoff_digits: u32) -> Arc<Vec<Node<T>>> {
    let key = (TypeId::of::<T>(), ctx.bits(), cutoff_digits, level);
    if let Some(hit) = node_cache().lock().unwrap().get(&key) {
        return hit.clone().downcast::<Vec<Node<T>>>().expect("node table type");
    }
    let built = Arc::new(build_nodes::<T>(level, ctx, cutoff_digits));
    node_cache().lock().unwrap().insert(key, built.clone());
    built
}

fn build_nodes<T: Real>(level: u32, ctx: &PrecisionContext, cutoff_digits: u32) -> Vec<Node<T>> {
    let one = T::one(ctx);
    let two = T::from_i64(2, ctx);
    let half_pi = T::pi(ctx) / &two;
    let h = T::one(ctx) / T::from_i64(1i64 << level, ctx);
    let cutoff = -(2.0 * cutoff_digits as f64);
    let mut out = Vec::new();
    let (mut k, step) = if level == 0 { (0i64, 1i64) } else { (1, 2) };
    if level == 0 {
        out.push(Node { near: one.clone(), far: one.clone(), weight: half_pi.clone(), center: true });
        k = 1;
    }
    loop {
        let t = h.clone() * T::from_i64(k, ctx);
        let et = t.exp();
        let inv = one.clone() / &et;
        let sinh = (et.clone() - &inv) / &two;
        let cosh = (et + &inv) / &two;
        let u = half_pi.clone() * &sinh;
        let e = (-(u * &two)).exp();
        let denom = one.clone() + &e;
        let near = e.clone() * &two / &denom;
        let weight = half_pi.clone() * &cosh * &e * T::from_i64(4, ctx) / (denom.clone() * &denom);
        if near.is_zero() || near.log10_approx() < cutoff {
            break;
        }
        let far = two.clone() - &near;
        out.push(Node { near, far, weight, center: false });
        k += step;
    }
    out
}

/// Integrates `f` over `(a, b)`, handing the integrand each node together with its
/// distances to both endpoints so that factors vanishing there stay accurate.
pub fn tanh_sinh_with<T, F>(
    mut f: F,
    a: &T,
    b: &T,
    ctx: &PrecisionContext,
    cfg: &QuadratureConfig,
) -> Result<QuadratureResult<T>, QuadratureError>
where
    T: Real,
    F: FnMut(&Abscissa<T>) -> T,
{
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(QuadratureError::Domain(format!("need a < b, got a = {a}, b = {b}")));
    }
    let digits = T::effective_digits(ctx);
    let cutoff = digits + ctx.guard_digits();
    let two = T::from_i64(2, ctx);
    let half = (b.clone() - a) / &two;
    let tol = 10f64.powi(-(digits as i32) + 5);
    let mut acc = T::zero(ctx);
    let mut mass = T::zero(ctx);
    let mut prev: Option<T> = None;
    let mut last_err = f64::INFINITY;
    let mut eval = |p: Abscissa<T>| -> Result<T, QuadratureError> {
        let v = f(&p);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(QuadratureError::Evaluation { x: p.x.to_f64() })
        }
    };
    for level in 0..=cfg.max_level {
        for node in nodes::<T>(level, ctx, cutoff).iter() {
            if node.center {
                let v = eval(Abscissa { x: a.clone() + &half, from_a: half.clone(), from_b: half.clone() })?;
                mass = mass + v.abs() * &node.weight;
                acc = acc + v * &node.weight;
                continue;
            }
            let near = half.clone() * &node.near;
            let far = half.clone() * &node.far;
            let right = eval(Abscissa { x: b.clone() - &near, from_a: far.clone(), from_b: near.clone() })?;
            let left = eval(Abscissa { x: a.clone() + &near, from_a: near, from_b: far })?;
            mass = mass + (right.abs() + left.abs()) * &node.weight;
            acc = acc + (right + left) * &node.weight;
        }
        let h = T::one(ctx) / T::from_i64(1i64 << level, ctx);
        let s = acc.clone() * &h * &half;
        if let Some(p) = prev.take() {
            let err = (s.clone() - &p).abs();
            let scale = s.abs().to_f64().max(1e-5 * (mass.clone() * &h * &half).abs().to_f64());
            last_err = err.to_f64();
            if level >= cfg.min_level && last_err <= tol * scale {
                return Ok(QuadratureResult { value: s, est_error: err, levels_used: level + 1 });
            }
        }
        prev = Some(s);
    }
    Err(QuadratureError::NoConvergence { levels: cfg.max_level + 1, est_error: last_err })
}

/// Integrates a plain integrand `f(x)` over `(a, b)`.
///
/// Abscissae are formed with doubled mantissa so that `x - a` and `b - x` remain
/// accurate near the endpoints; `f` is never evaluated at `a` or `b`.
pub fn tanh_sinh_integrate<T, F>(
    f: F,
    a: &T,
    b: &T,
    ctx: &PrecisionContext,
) -> Result<QuadratureResult<T>, QuadratureError>
where
    T: Real,
    F: Fn(&T) -> T,
{
    let wide = ctx.bits() * 2;
    let aw = a.with_bits(wide);
    let bw = b.with_bits(wide);
    tanh_sinh_with(
        |p: &Abscissa<T>| {
            let x = if p.from_a < p.from_b { aw.clone() + &p.from_a } else { bw.clone() - &p.from_b };
            if x <= aw || x >= bw {
                return T::zero(ctx);
            }
            f(&x)
        },
        a,
        b,
        ctx,
        &QuadratureConfig::default(),
    )
}

/// Real polynomial stored as `lead * prod (x - r_j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FactoredPolynomial<T> {
    pub lead: T,
    pub roots: Vec<T>,
}

impl<T: Real> FactoredPolynomial<T> {
    pub fn new(lead: T, roots: Vec<T>) -> Self {
        Self { lead, roots }
    }

    pub fn monic(roots: Vec<T>, ctx: &PrecisionContext) -> Self {
        Self { lead: T::one(ctx), roots }
    }

    pub fn eval(&self, x: &T) -> T {
        self.roots.iter().fold(self.lead.clone(), |acc, r| acc * (x.clone() - r))
    }

    /// Sign of the polynomial at `x` from the factor signs alone.
    pub fn sign_at(&self, x: &T) -> i8 {
        let mut s: i8 = if self.lead.is_negative() { -1 } else { 1 };
        for r in &self.roots {
            if x == r {
                return 0;
            }
            if x < r {
                s = -s;
            }
        }
        if self.lead.is_zero() {
            0
        } else {
            s
        }
    }
}

/// `∫_a^b dx / sqrt|q(x)|` together with the sign of `q` on the interval.
pub fn integrate_inv_sqrt_abs<T: Real>(
    q: &FactoredPolynomial<T>,
    a: &T,
    b: &T,
    ctx: &PrecisionContext,
) -> Result<(QuadratureResult<T>, i8), QuadratureError> {
    if !(a < b) {
        return Err(QuadratureError::Domain(format!("need a < b, got a = {a}, b = {b}")));
    }
    if let Some(r) = q.roots.iter().find(|r| *r > a && *r < b) {
        return Err(QuadratureError::Sign { root: r.to_f64() });
    }
    let two = T::from_i64(2, ctx);
    let mid = (a.clone() + b) / &two;
    let sign = q.sign_at(&mid);
    let lead = q.lead.abs();
    let res = tanh_sinh_with(
        |p: &Abscissa<T>| {
            let mut prod = lead.clone();
            for r in &q.roots {
                let d = if r == a {
                    p.from_a.clone()
                } else if r == b {
                    p.from_b.clone()
                } else {
                    (p.x.clone() - r).abs()
                };
                prod = prod * d;
            }
            T::one(ctx) / prod.sqrt()
        },
        a,
        b,
        ctx,
        &QuadratureConfig::default(),
    )?;
    Ok((res, sign))
}

/// `2 ∫_a^b dx / sqrt(q(x))` with the principal branch: purely imaginary where `q < 0`.
pub fn integrate_signed_sqrt<T: Real>(
    q: &FactoredPolynomial<T>,
    a: &T,
    b: &T,
    ctx: &PrecisionContext,
) -> Result<QuadratureResult<Complex<T>, T>, QuadratureError> {
    let (res, sign) = integrate_inv_sqrt_abs(q, a, b, ctx)?;
    let two = T::from_i64(2, ctx);
    let v = res.value * &two;
    let value = if sign < 0 { Complex::from_imag(v, ctx) } else { Complex::from_real(v, ctx) };
    Ok(QuadratureResult { value, est_error: res.est_error * &two, levels_used: res.levels_used })
}
