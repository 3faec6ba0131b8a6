//! Newton iteration with a forward-difference derivative for `rho(s) = target`.

use crate::periods::{rho, PeriodError};
use crate::scalar::{PrecisionContext, Real};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("no convergence after {iterations} iterations (last iterate {last}, residual {residual:e})")]
    NoConvergence { iterations: usize, last: String, residual: f64 },
    #[error("iterate {0} left the domain s > 1")]
    Domain(String),
    #[error("finite-difference derivative vanished at s = {0}")]
    DerivativeVanished(String),
    #[error(transparent)]
    Period(#[from] PeriodError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct NewtonConfig<T> {
    pub seed: T,
    pub target: T,
    pub fd_epsilon: T,
    pub tol: T,
    pub max_iter: usize,
}

impl<T: Real> NewtonConfig<T> {
    /// Defaults: `ε = 10^-min(10, digits/3)`, `tol = 10^(-digits+10)`, 40 iterations.
    pub fn new(seed: T, target: T, ctx: &PrecisionContext) -> Self {
        let digits = T::effective_digits(ctx) as i32;
        Self {
            seed,
            target,
            fd_epsilon: T::pow10(-(10.min(digits / 3)), ctx),
            tol: T::pow10(-digits + 10, ctx),
            max_iter: 40,
        }
    }

    pub fn validate(&self) -> Result<(), SolveError> {
        if !(self.fd_epsilon.to_f64() > 0.0) || !(self.tol.to_f64() > 0.0) {
            return Err(SolveError::Config("fd_epsilon and tol must be positive".into()));
        }
        if self.max_iter == 0 {
            return Err(SolveError::Config("max_iter must be at least 1".into()));
        }
        Ok(())
    }
}

/// Iterates `s_0, s_1, ...` and residuals `f(s_n) - target`.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveTrace<T> {
    pub iterates: Vec<T>,
    pub residuals: Vec<T>,
    pub converged: bool,
}

/// Newton iteration on an arbitrary scalar function.
pub fn newton_solve<T, F>(mut f: F, cfg: &NewtonConfig<T>, ctx: &PrecisionContext) -> Result<(T, SolveTrace<T>), SolveError>
where
    T: Real,
    F: FnMut(&T) -> Result<T, SolveError>,
{
    cfg.validate()?;
    let one = T::one(ctx);
    let mut trace = SolveTrace { iterates: Vec::new(), residuals: Vec::new(), converged: false };
    let mut s = cfg.seed.clone();
    loop {
        if !(s > one) || !s.is_finite() {
            return Err(SolveError::Domain(s.to_decimal_string(20)));
        }
        let r = f(&s)? - &cfg.target;
        trace.iterates.push(s.clone());
        trace.residuals.push(r.clone());
        if r.abs() < cfg.tol {
            trace.converged = true;
            return Ok((s, trace));
        }
        if trace.iterates.len() > cfg.max_iter {
            return Err(SolveError::NoConvergence {
                iterations: cfg.max_iter,
                last: s.to_decimal_string(20),
                residual: r.to_f64(),
            });
        }
        let shifted = s.clone() + &cfg.fd_epsilon;
        let slope = (f(&shifted)? - &cfg.target - &r) / &cfg.fd_epsilon;
        if slope.is_zero() || !slope.is_finite() {
            return Err(SolveError::DerivativeVanished(s.to_decimal_string(20)));
        }
        s = s - r / slope;
    }
}

/// Solves `rho(s) = target` from the configured seed.
pub fn find_kappa<T: Real>(cfg: &NewtonConfig<T>, ctx: &PrecisionContext) -> Result<(T, SolveTrace<T>), SolveError> {
    newton_solve(|s| Ok(rho(s, ctx)?), cfg, ctx)
}

/// Reruns the solve at each digit count of `schedule`, seeding each run with the previous root.
pub fn refine_at_precision<T: Real>(
    s_coarse: &T,
    target: &T,
    schedule: &[u32],
    guard: u32,
) -> Result<T, SolveError> {
    if schedule.is_empty() {
        return Err(SolveError::Config("empty precision schedule".into()));
    }
    let mut s = s_coarse.clone();
    for &digits in schedule {
        let ctx = PrecisionContext::with_guard(digits, guard).map_err(|e| SolveError::Config(e.to_string()))?;
        let seed = s.with_bits(ctx.bits());
        let tgt = target.with_bits(ctx.bits());
        let cfg = NewtonConfig::new(seed, tgt, &ctx);
        s = find_kappa(&cfg, &ctx)?.0;
    }
    Ok(s)
}
