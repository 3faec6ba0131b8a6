//! Recognition of exact algebraic numbers from decimal approximations.

mod cf;
mod lll;

pub use cf::{
    cf_expand, cf_expand_with_uncertainty, cf_of_rational, detect_rational, detect_rational_with, ContinuedFraction,
    DEFAULT_GIANT_FACTOR,
};
pub use lll::{default_delta, determinant, is_lll_reduced, lll_reduce, lll_reduce_with_transform, norm_sqr};

use crate::exact::{FieldElement, QuadraticNumber};
use crate::scalar::{PrecisionContext, Real};
use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RecognizeError {
    #[error("basis rows are linearly dependent")]
    RankDeficient,
    #[error("delta must lie strictly between 1/4 and 1")]
    InvalidDelta,
    #[error("bad lattice dimensions: {0}")]
    Dimension(String),
}

/// `p + q sqrt(d)` with `d` squarefree and greater than one.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadraticSurd {
    pub p: BigRational,
    pub q: BigRational,
    pub d: i64,
}

impl QuadraticSurd {
    pub fn to_field(&self) -> QuadraticNumber {
        FieldElement::new(self.p.clone(), self.q.clone(), self.d)
    }

    pub fn from_field(x: &QuadraticNumber) -> Self {
        Self { p: x.p().clone(), q: x.q().clone(), d: x.d() }
    }

    /// Coefficients `[p^2 - q^2 d, -2p, 1]` of the monic quadratic it satisfies.
    pub fn quadratic(&self) -> [BigRational; 3] {
        let d = BigRational::from_integer(self.d.into());
        [&self.p * &self.p - &self.q * &self.q * d, -(&self.p + &self.p), BigRational::one()]
    }

    pub fn value<T: Real>(&self, ctx: &PrecisionContext) -> T {
        self.to_field().to_real(ctx)
    }
}

impl fmt::Display for QuadraticSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_field())
    }
}

/// Squarefree decomposition `n = s^2 * d` for `n > 0`, by trial division.
fn square_part(n: u128) -> (u128, u128) {
    let (mut n, mut s) = (n, 1u128);
    let mut d = 1u128;
    let mut p = 2u128;
    while p * p <= n && p <= 1_000_000 {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        s *= p.pow(e / 2);
        if e % 2 == 1 {
            d *= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    let r = n.sqrt();
    if r * r == n {
        s *= r;
    } else {
        d *= n;
    }
    (s, d)
}

pub fn is_squarefree(d: i64) -> bool {
    d > 0 && square_part(d as u128).0 == 1
}

fn mobius_matrix(terms: &[BigInt]) -> [BigInt; 4] {
    let mut m = [BigInt::one(), BigInt::zero(), BigInt::zero(), BigInt::one()];
    for a in terms {
        m = [a * &m[0] + &m[1], m[0].clone(), a * &m[2] + &m[3], m[2].clone()];
    }
    m
}

fn is_periodic(run: &[BigInt], period: usize) -> bool {
    (0..run.len() - period).all(|i| run[i] == run[i + period])
}

/// Eventually periodic expansion read off the reliable terms, solved exactly.
///
/// The last considered term is discounted as possibly corrupt. The shortest period is
/// preferred, then the shortest preperiod; at least two full periods and six terms
/// must be visible.
pub fn detect_quadratic(cf: &ContinuedFraction) -> Option<QuadraticSurd> {
    if cf.terminated {
        return None;
    }
    let considered = &cf.terms[..cf.terms.len().min(cf.reliable + 1)];
    if considered.len() < 8 {
        return None;
    }
    let body = &considered[..considered.len() - 1];
    for period in 1..=body.len() / 2 {
        for pre in 0..body.len() {
            let run = &body[pre..];
            if run.len() < (2 * period).max(6) {
                break;
            }
            if run[..period].iter().any(|a| !a.is_positive()) || !is_periodic(run, period) {
                continue;
            }
            if let Some(s) = solve_periodic(&body[..pre], &run[..period]) {
                return Some(s);
            }
        }
    }
    None
}

fn solve_periodic(prefix: &[BigInt], period: &[BigInt]) -> Option<QuadraticSurd> {
    let [p, p1, q, q1] = mobius_matrix(period);
    let disc: BigInt = (&q1 - &p).pow(2) + BigInt::from(4) * &q * &p1;
    let (s, d) = square_part(disc.to_u128()?);
    let d = i64::try_from(d).ok()?;
    if d == 1 {
        return None;
    }
    let two_q = BigInt::from(2) * &q;
    let y = FieldElement::new(
        BigRational::new(&p - &q1, two_q.clone()),
        BigRational::new(BigInt::from(s), two_q),
        d,
    );
    let [a, a1, b, b1] = mobius_matrix(prefix);
    let lift = |n: &BigInt| QuadraticNumber::from_rational(BigRational::from_integer(n.clone()), d);
    let num = &(&lift(&a) * &y) + &lift(&a1);
    let den = &(&lift(&b) * &y) + &lift(&b1);
    let x = num.try_div(&den).ok()?;
    Some(QuadraticSurd::from_field(&x))
}

/// Primitive integer polynomial with positive leading coefficient, lowest degree first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntegerPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntegerPolynomial {
    /// Normalizes to primitive form; `None` for constants.
    pub fn new(mut coeffs: Vec<BigInt>) -> Option<Self> {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        if coeffs.len() < 2 {
            return None;
        }
        let content = coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
        let sign = if coeffs.last()?.is_negative() { -BigInt::one() } else { BigInt::one() };
        let k = content * sign;
        Some(Self { coeffs: coeffs.iter().map(|c| c / &k).collect() })
    }

    pub fn from_i64(c: &[i64]) -> Option<Self> {
        Self::new(c.iter().map(|&v| BigInt::from(v)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Largest absolute coefficient.
    pub fn height(&self) -> BigInt {
        self.coeffs.iter().map(|c| c.abs()).max().unwrap_or_default()
    }

    pub fn eval<T: Real>(&self, x: &T, ctx: &PrecisionContext) -> T {
        self.coeffs.iter().rev().fold(T::zero(ctx), |acc, c| acc * x + &T::from_bigint(c, ctx))
    }

    /// Exact evaluation at a rational point.
    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        self.coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + BigRational::from_integer(c.clone()))
    }
}

impl fmt::Display for IntegerPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            }
            first = false;
            let mono = match k {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{k}"),
            };
            if k == 0 {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                f.write_str(&mono)?;
            } else {
                write!(f, "{mag}*{mono}")?;
            }
        }
        Ok(())
    }
}

/// Digit budget `(d+1)(n+1)` for a degree-`n` relation with `d`-digit coefficients.
pub fn required_digits(n: u32, d: u32) -> u32 {
    (d + 1) * (n + 1)
}

/// Whether `digits` meets the budget for a relation shaped like `p`.
pub fn precision_sufficient(p: &IntegerPolynomial, digits: u32) -> bool {
    let d = p.height().to_string().len() as u32;
    digits >= required_digits(p.degree() as u32, d)
}

fn log10_abs<T: Real>(x: &T) -> f64 {
    if x.is_zero() {
        f64::NEG_INFINITY
    } else {
        x.log10_approx()
    }
}

/// Power of ten scaling the lattice: three quarters of the digits left after `mag`,
/// leaving the rest to validate candidate relations.
fn lattice_exponent(digits: u32, mag: f64) -> i32 {
    (0.75 * (digits as f64 - mag)).floor() as i32 - 3
}

/// `|value| < 10^(-digits/2)` and `|value| <= 10^(5-digits) * max(1, scale)`.
fn residual_ok(value_log: f64, scale_log: f64, digits: u32) -> bool {
    let d = digits as f64;
    value_log < -d / 2.0 && value_log <= 5.0 - d + scale_log.max(0.0)
}

fn scaled_round<T: Real>(x: &T, n: &T) -> BigInt {
    (x.clone() * n).round_bigint().expect("finite")
}

fn sort_by_norm(rows: &mut [Vec<BigInt>]) {
    rows.sort_by_key(|r| norm_sqr(r));
}

/// Integer polynomial of degree at most `max_deg` vanishing at `r`, found by lattice
/// reduction on powers of `r` scaled by a power of ten. Degrees are tried in
/// increasing order; `None` when no short relation passes the residual test.
pub fn min_poly<T: Real>(r: &T, max_deg: u32, ctx: &PrecisionContext) -> Option<IntegerPolynomial> {
    if !r.is_finite() || max_deg == 0 {
        return None;
    }
    let digits = T::effective_digits(ctx);
    let mag = log10_abs(r).max(0.0);
    let one = T::one(ctx);
    for n in 1..=max_deg as usize {
        let scale_exp = lattice_exponent(digits, n as f64 * mag);
        if scale_exp < 4 {
            break;
        }
        let big_n = T::pow10(scale_exp, ctx);
        let mut powers = vec![one.clone()];
        for k in 1..=n {
            powers.push(powers[k - 1].clone() * r);
        }
        let basis: Vec<Vec<BigInt>> = (0..=n)
            .map(|i| {
                let mut row = vec![BigInt::zero(); n + 2];
                row[i] = BigInt::one();
                row[n + 1] = scaled_round(&powers[i], &big_n);
                row
            })
            .collect();
        let mut reduced = match lll_reduce(&basis, &default_delta()) {
            Ok(b) => b,
            Err(_) => continue,
        };
        sort_by_norm(&mut reduced);
        for row in reduced {
            let Some(p) = IntegerPolynomial::new(row[..=n].to_vec()) else { continue };
            let scale = p
                .coeffs()
                .iter()
                .zip(&powers)
                .fold(T::zero(ctx), |acc, (c, x)| acc + &(T::from_bigint(&c.abs(), ctx) * &x.abs()));
            if residual_ok(log10_abs(&p.eval(r, ctx)), log10_abs(&scale), digits) {
                return Some(p);
            }
        }
    }
    None
}

/// `(p, q)` with `r = p + q sqrt(d)`, from an integer relation `A r + B + C sqrt(d) = 0`.
pub fn recognize_in_field<T: Real>(r: &T, d: i64, ctx: &PrecisionContext) -> Option<QuadraticNumber> {
    if !r.is_finite() || !is_squarefree(d) || d == 1 {
        return None;
    }
    let digits = T::effective_digits(ctx);
    let sd = T::from_i64(d, ctx).sqrt();
    let mag = log10_abs(r).max(sd.log10_approx()).max(0.0);
    let scale_exp = lattice_exponent(digits, mag);
    if scale_exp < 4 {
        return None;
    }
    let big_n = T::pow10(scale_exp, ctx);
    let one = T::one(ctx);
    let basis = vec![
        vec![BigInt::one(), BigInt::zero(), BigInt::zero(), scaled_round(r, &big_n)],
        vec![BigInt::zero(), BigInt::one(), BigInt::zero(), scaled_round(&one, &big_n)],
        vec![BigInt::zero(), BigInt::zero(), BigInt::one(), scaled_round(&sd, &big_n)],
    ];
    let mut reduced = lll_reduce(&basis, &default_delta()).ok()?;
    sort_by_norm(&mut reduced);
    for row in reduced {
        let (a, b, c) = (&row[0], &row[1], &row[2]);
        if a.is_zero() {
            continue;
        }
        let value = T::from_bigint(a, ctx) * r + &T::from_bigint(b, ctx) + &(T::from_bigint(c, ctx) * &sd);
        let scale = (T::from_bigint(a, ctx) * r).abs() + &T::from_bigint(&b.abs(), ctx) + &(T::from_bigint(&c.abs(), ctx) * &sd);
        if residual_ok(log10_abs(&value), log10_abs(&scale), digits) {
            let p = BigRational::new(-b.clone(), a.clone());
            let q = BigRational::new(-c.clone(), a.clone());
            return Some(FieldElement::new(p, q, d));
        }
    }
    None
}

#[cfg(test)]
mod tests;
