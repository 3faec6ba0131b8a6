use crate::scalar::{PrecisionContext, Real};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use std::fmt;

/// Simple continued fraction `[a0; a1, a2, ...]` with reliability bookkeeping.
///
/// `reliable` counts the leading terms that are determined by the input despite its
/// uncertainty. `terminated` means the input was indistinguishable from the last convergent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContinuedFraction {
    pub terms: Vec<BigInt>,
    pub reliable: usize,
    pub terminated: bool,
    pub precision_exhausted: bool,
}

impl ContinuedFraction {
    /// Literal term list, every term trusted.
    pub fn from_terms<I: Into<BigInt>>(terms: impl IntoIterator<Item = I>) -> Self {
        let terms: Vec<BigInt> = terms.into_iter().map(Into::into).collect();
        let reliable = terms.len();
        Self { terms, reliable, terminated: false, precision_exhausted: false }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// All convergents `p_n / q_n`, unreduced as produced by the recurrence.
    pub fn convergents(&self) -> Vec<(BigInt, BigInt)> {
        let (mut p0, mut q0) = (BigInt::one(), BigInt::zero());
        let (mut p1, mut q1) = (BigInt::zero(), BigInt::one());
        let mut out = Vec::with_capacity(self.terms.len());
        for a in &self.terms {
            let p = a * &p0 + &p1;
            let q = a * &q0 + &q1;
            p1 = std::mem::replace(&mut p0, p.clone());
            q1 = std::mem::replace(&mut q0, q.clone());
            out.push((p, q));
        }
        out
    }

    /// Value of the first `n` terms.
    pub fn convergent(&self, n: usize) -> Option<BigRational> {
        if n == 0 || n > self.terms.len() {
            return None;
        }
        let truncated = Self::from_terms(self.terms[..n].iter().cloned());
        let (p, q) = truncated.convergents().pop()?;
        Some(BigRational::new(p, q))
    }

    pub fn value(&self) -> Option<BigRational> {
        self.convergent(self.terms.len())
    }
}

impl fmt::Display for ContinuedFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut it = self.terms.iter();
        match it.next() {
            None => f.write_str("[]"),
            Some(a0) => {
                write!(f, "[{a0}")?;
                for (k, a) in it.enumerate() {
                    f.write_str(if k == 0 { "; " } else { ", " })?;
                    write!(f, "{a}")?;
                }
                f.write_str("]")
            }
        }
    }
}

/// Exact expansion of a rational number.
pub fn cf_of_rational(r: &BigRational) -> ContinuedFraction {
    let mut terms = Vec::new();
    let (mut n, mut d) = (r.numer().clone(), r.denom().clone());
    while !d.is_zero() {
        let (a, rem) = n.div_mod_floor(&d);
        terms.push(a);
        n = std::mem::replace(&mut d, rem);
    }
    let reliable = terms.len();
    ContinuedFraction { terms, reliable, terminated: true, precision_exhausted: false }
}

/// `log10(10^a + 10^b)`.
fn log_add(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    if hi == f64::NEG_INFINITY {
        return hi;
    }
    hi + (1.0 + 10f64.powf(lo - hi)).log10()
}

fn log10_abs<T: Real>(x: &T) -> f64 {
    if x.is_zero() {
        f64::NEG_INFINITY
    } else {
        x.log10_approx()
    }
}

/// Expansion of `r` assuming a relative uncertainty of one unit in the last
/// effective digit of the context.
pub fn cf_expand<T: Real>(r: &T, max_terms: usize, ctx: &PrecisionContext) -> ContinuedFraction {
    let err = log10_abs(r) - T::effective_digits(ctx) as f64;
    cf_expand_with_uncertainty(r, err, max_terms, ctx)
}

/// Expansion of `r` known to within `10^log10_abs_err`.
///
/// The error bound is propagated through each reciprocal step together with the
/// rounding error of the working precision; expansion stops after the first term the
/// bound no longer determines.
pub fn cf_expand_with_uncertainty<T: Real>(
    r: &T,
    log10_abs_err: f64,
    max_terms: usize,
    ctx: &PrecisionContext,
) -> ContinuedFraction {
    let mut cf = ContinuedFraction { terms: Vec::new(), reliable: 0, terminated: false, precision_exhausted: false };
    if !r.is_finite() || max_terms == 0 {
        cf.precision_exhausted = true;
        return cf;
    }
    let log_u = -(T::effective_digits(ctx) as f64);
    let one = T::one(ctx);
    let half_log = 0.5f64.log10();
    let exact_log = -(T::effective_digits(ctx) as f64 / 4.0).max(3.0);
    let mut x = r.clone();
    let mut le = log10_abs_err;
    while cf.terms.len() < max_terms {
        let a = x.floor();
        let f = x.clone() - &a;
        let a_int = a.floor_bigint().expect("finite");
        let lf = log10_abs(&f);
        let l1f = log10_abs(&(one.clone() - &f));
        if lf.min(l1f) <= le {
            if le < exact_log {
                cf.terms.push(if lf <= l1f { a_int } else { a_int + 1 });
                cf.reliable = cf.terms.len();
                cf.terminated = true;
            } else if le < half_log {
                cf.terms.push(if lf <= l1f { a_int } else { a_int + 1 });
                cf.precision_exhausted = true;
            } else {
                if le < log10_abs(&x) || cf.terms.is_empty() {
                    cf.terms.push(a_int);
                }
                cf.precision_exhausted = true;
            }
            break;
        }
        cf.terms.push(a_int);
        cf.reliable = cf.terms.len();
        if cf.terms.len() == max_terms {
            break;
        }
        x = one.clone() / &f;
        let spread = 1.0 - 10f64.powf(le - lf);
        let propagated = le - 2.0 * lf - spread.log10();
        le = log_add(propagated, log10_abs(&x) + log_u);
    }
    cf
}

/// Giant-term threshold used by [`detect_rational`].
pub const DEFAULT_GIANT_FACTOR: f64 = 1e5;

fn median(terms: &[BigInt]) -> f64 {
    if terms.is_empty() {
        return 1.0;
    }
    let mut v: Vec<f64> = terms.iter().map(|t| t.to_f64().unwrap_or(f64::INFINITY)).collect();
    v.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        (v[m - 1] + v[m]) / 2.0
    }
}

/// Convergent before the first giant term, or the full value of a terminated expansion.
pub fn detect_rational(cf: &ContinuedFraction) -> Option<BigRational> {
    detect_rational_with(cf, DEFAULT_GIANT_FACTOR)
}

pub fn detect_rational_with(cf: &ContinuedFraction, factor: f64) -> Option<BigRational> {
    if cf.terms.is_empty() {
        return None;
    }
    for k in 1..cf.terms.len() {
        let t = cf.terms[k].to_f64().unwrap_or(f64::INFINITY);
        if t > factor * median(&cf.terms[1..k]) {
            return (k <= cf.reliable).then(|| cf.convergent(k)).flatten();
        }
    }
    if cf.terminated {
        return cf.value();
    }
    None
}
