//! Numerical reconstruction of the degree-5 cover: sample `g(x) = ℘(z_C(x) / K)`, fit
//! the rational function `g`, recognize its coefficients in `Q(sqrt 5)`, and derive `h`
//! exactly.

use crate::elliptic::{weierstrass_p, AbelMap, EllipticError, SquareLattice};
use crate::exact::{
    exact_sqrt_ratfunc, family_quintic_exact, homogeneity_exponent, pullback_constant, verify_cover_identity, ExactError,
    QPoly, QRatFunc, QuadraticNumber,
};
use crate::periods::{period_vector_of, PeriodError};
use crate::recognize::{
    cf_expand_with_uncertainty, detect_quadratic, min_poly, recognize_in_field, IntegerPolynomial, QuadraticSurd,
};
use crate::scalar::{Complex, PrecisionContext, Real};
use crate::solver::{find_kappa, NewtonConfig, SolveError};
use num_bigint::BigInt;
use num_rational::BigRational;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MapFitError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("missing coefficient {0}")]
    Missing(&'static str),
    #[error("need at least {need} samples, got {got}")]
    TooFewSamples { got: usize, need: usize },
    #[error("linear system is singular")]
    SingularSystem,
    #[error("held-out residual {residual:e} exceeds tolerance")]
    BadResidual { residual: f64 },
    #[error("could not recognize {0} in Q(sqrt 5)")]
    RecognitionFailure(String),
    #[error("-sqrt(5) (g^3 - g) / q is not a square")]
    NotAPerfectSquare,
    #[error("unexpected shape: {0}")]
    Shape(String),
    #[error("sample x = {0} is too close to a pole of g")]
    PoleProximity(String),
    #[error(transparent)]
    Elliptic(#[from] EllipticError),
    #[error(transparent)]
    Period(#[from] PeriodError),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

const FIELD: i64 = 5;
const A_NAMES: [&str; 5] = ["a0", "a1", "a2", "a3", "a4"];
const B_NAMES: [&str; 3] = ["b0", "b1", "b2"];
const C_NAMES: [&str; 6] = ["c0", "c1", "c2", "c3", "c4", "c5"];

/// `g = (x^5 + a4 x^4 + ... + a0) / (b2 x^2 + b1 x + b0)` and
/// `h1 = (x^6 + c5 x^5 + ... + c0) / (d x^2 (x - 2κ)^2)`, indices lowest first.
#[derive(Debug, Clone, PartialEq)]
pub struct MapCoefficients {
    pub kappa: QuadraticNumber,
    pub a: [QuadraticNumber; 5],
    pub b: [QuadraticNumber; 3],
    pub c: [QuadraticNumber; 6],
    pub d: QuadraticNumber,
}

impl MapCoefficients {
    /// The exact degree-5 cover shipped with the crate.
    pub fn builtin() -> Self {
        Self::parse(include_str!("../data/cover5.txt")).expect("bundled coefficients parse")
    }

    /// Reads `name = value` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, MapFitError> {
        let mut values = std::collections::HashMap::new();
        for (k, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| MapFitError::Parse { line: k + 1, message };
            let (name, value) = line.split_once('=').ok_or_else(|| err(format!("expected `name = value`, got {line:?}")))?;
            let name = name.trim();
            if name == "field" {
                if value.trim() != FIELD.to_string() {
                    return Err(err(format!("only Q(sqrt {FIELD}) is supported")));
                }
                continue;
            }
            let v = QuadraticNumber::parse(value, FIELD).map_err(|e| err(e.to_string()))?;
            if values.insert(name.to_string(), v).is_some() {
                return Err(err(format!("duplicate {name}")));
            }
        }
        let mut take = |n: &'static str| values.remove(n).ok_or(MapFitError::Missing(n));
        let kappa = take("kappa")?;
        let a = [take("a0")?, take("a1")?, take("a2")?, take("a3")?, take("a4")?];
        let b = [take("b0")?, take("b1")?, take("b2")?];
        let c = [take("c0")?, take("c1")?, take("c2")?, take("c3")?, take("c4")?, take("c5")?];
        let d = take("d")?;
        if let Some(extra) = values.keys().next() {
            return Err(MapFitError::Parse { line: 0, message: format!("unknown coefficient {extra}") });
        }
        Ok(Self { kappa, a, b, c, d })
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("field = {FIELD}\nkappa = {}\n", self.kappa);
        for (n, v) in A_NAMES.iter().zip(&self.a).rev() {
            out += &format!("{n} = {v}\n");
        }
        for (n, v) in B_NAMES.iter().zip(&self.b).rev() {
            out += &format!("{n} = {v}\n");
        }
        for (n, v) in C_NAMES.iter().zip(&self.c).rev() {
            out += &format!("{n} = {v}\n");
        }
        out + &format!("d = {}\n", self.d)
    }

    /// Named coefficients in display order.
    pub fn named(&self) -> Vec<(&'static str, &QuadraticNumber)> {
        let mut out: Vec<(&'static str, &QuadraticNumber)> = Vec::new();
        out.extend(A_NAMES.iter().copied().zip(&self.a).rev());
        out.extend(B_NAMES.iter().copied().zip(&self.b).rev());
        out.extend(C_NAMES.iter().copied().zip(&self.c).rev());
        out.push(("d", &self.d));
        out
    }

    pub fn g(&self) -> Result<QRatFunc, MapFitError> {
        g_from(&self.a, &self.b)
    }

    pub fn h1(&self) -> Result<QRatFunc, MapFitError> {
        let mut num: Vec<QuadraticNumber> = self.c.to_vec();
        num.push(QuadraticNumber::one(FIELD));
        let two_k = &self.kappa + &self.kappa;
        let shape = QPoly::from_roots(&[QuadraticNumber::zero(FIELD), QuadraticNumber::zero(FIELD), two_k.clone(), two_k], FIELD);
        Ok(QRatFunc::new(QPoly::new(num, FIELD), shape.scale(&self.d))?)
    }

    /// `x(x-1)(x-κ)(x-2κ+1)(x-2κ)`.
    pub fn quintic(&self) -> QPoly {
        family_quintic_exact(&self.kappa)
    }

    /// `h1^2 q / (-sqrt 5) = g^3 - g`.
    pub fn verify(&self) -> Result<bool, MapFitError> {
        Ok(verify_cover_identity(&self.g()?, &self.h1()?, &self.quintic(), &twist())?)
    }

    /// `g' / h1`, constant for a genuine cover.
    pub fn pullback(&self) -> Result<Option<QuadraticNumber>, MapFitError> {
        Ok(pullback_constant(&self.g()?, &self.h1()?)?)
    }
}

impl fmt::Display for MapCoefficients {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// `-sqrt 5`.
pub fn twist() -> QuadraticNumber {
    -QuadraticNumber::sqrt_d(FIELD)
}

fn g_from(a: &[QuadraticNumber; 5], b: &[QuadraticNumber; 3]) -> Result<QRatFunc, MapFitError> {
    let mut num: Vec<QuadraticNumber> = a.to_vec();
    num.push(QuadraticNumber::one(FIELD));
    Ok(QRatFunc::new(QPoly::new(num, FIELD), QPoly::new(b.to_vec(), FIELD))?)
}

/// A sample `(x, g(x))` of the cover.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplePoint<T> {
    pub x: T,
    pub value: Complex<T>,
}

/// How the curve lattice `K ϖ Z[i]` is matched with `ϖ Z[i]`: `z_E = z_C / K` or `z_C / (K i)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    Direct,
    Rotated,
}

impl Orientation {
    pub const ALL: [Orientation; 2] = [Orientation::Direct, Orientation::Rotated];
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Orientation::Direct => "K = I1/w",
            Orientation::Rotated => "K = i I1/w",
        })
    }
}

/// Evaluates `x -> ℘(z_C(x) / K)` on the twisted curve of a given κ.
#[derive(Debug, Clone)]
pub struct MapSampler<T> {
    abel: AbelMap<T>,
    lattice: SquareLattice<T>,
    k: Complex<T>,
    ctx: PrecisionContext,
}

impl<T: Real> MapSampler<T> {
    pub fn new(kappa: &T, ctx: &PrecisionContext) -> Result<Self, MapFitError> {
        let abel = AbelMap::twisted(kappa, ctx)?;
        let lattice = SquareLattice::of_curve(ctx)?;
        let pv = period_vector_of(abel.polynomial(), ctx)?;
        let k = crate::elliptic::homothety_constant(&pv, &lattice);
        Ok(Self { abel, lattice, k, ctx: *ctx })
    }

    pub fn homothety(&self) -> &Complex<T> {
        &self.k
    }

    pub fn sample(&self, x: &T, branch: i8, orientation: Orientation) -> Result<SamplePoint<T>, MapFitError> {
        let zc = self.abel.eval(x, branch)?.z;
        let k = match orientation {
            Orientation::Direct => self.k.clone(),
            Orientation::Rotated => self.k.mul_i(),
        };
        let (p, _) = weierstrass_p(&(zc / k), &self.lattice, &self.ctx).map_err(|e| match e {
            EllipticError::Pole => MapFitError::PoleProximity(x.to_decimal_string(20)),
            other => other.into(),
        })?;
        Ok(SamplePoint { x: x.clone(), value: p })
    }
}

/// `g(x)` at each `x` through the Abel map, the homothety and `℘`.
pub fn sample_map<T: Real>(
    xs: &[T],
    kappa: &T,
    orientation: Orientation,
    ctx: &PrecisionContext,
) -> Result<Vec<SamplePoint<T>>, MapFitError> {
    let s = MapSampler::new(kappa, ctx)?;
    xs.iter().map(|x| s.sample(x, 1, orientation)).collect()
}

/// Twelve integers `floor(2κ) + 2 + 16k` to the right of every branch point.
pub fn default_sample_xs<T: Real>(kappa: &T, ctx: &PrecisionContext) -> Vec<T> {
    let base = (kappa.clone() * T::from_i64(2, ctx)).floor() + T::from_i64(2, ctx);
    (0..12).map(|k| base.clone() + T::from_i64(16 * k, ctx)).collect()
}

/// Numeric `g`: `a` and `b` lowest degree first, with the held-out residual.
#[derive(Debug, Clone, PartialEq)]
pub struct GFit<T> {
    pub a: [T; 5],
    pub b: [T; 3],
    pub held_out_residual: T,
}

impl<T: Real> GFit<T> {
    /// `x^5 + sum a_i x^i - X (b2 x^2 + b1 x + b0)` relative to `|x|^5`.
    pub fn relative_residual(&self, s: &SamplePoint<T>, ctx: &PrecisionContext) -> T {
        let x = &s.x;
        let num = self.a.iter().rev().fold(T::one(ctx), |acc, c| acc * x + c);
        let den = self.b.iter().rev().fold(T::zero(ctx), |acc, c| acc * x + c);
        let r = Complex::from_real(num, ctx) - s.value.clone() * Complex::from_real(den, ctx);
        r.abs() / x.abs().powi(5).max_ref(&T::one(ctx))
    }
}

/// Solves `A u = rhs` by Gaussian elimination with partial pivoting.
fn solve_linear<T: Real>(mut a: Vec<Vec<T>>, mut rhs: Vec<T>, ctx: &PrecisionContext) -> Result<Vec<T>, MapFitError> {
    let n = rhs.len();
    let tiny = T::pow10(-(T::effective_digits(ctx) as i32) * 2, ctx);
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).expect("finite"))
            .expect("nonempty");
        if a[piv][col].abs() <= tiny {
            return Err(MapFitError::SingularSystem);
        }
        a.swap(col, piv);
        rhs.swap(col, piv);
        for r in col + 1..n {
            let f = a[r][col].clone() / &a[col][col];
            if f.is_zero() {
                continue;
            }
            for c in col..n {
                let t = f.clone() * &a[col][c];
                a[r][c] = a[r][c].clone() - t;
            }
            let t = f * &rhs[col];
            rhs[r] = rhs[r].clone() - t;
        }
    }
    let mut u = vec![T::zero(ctx); n];
    for r in (0..n).rev() {
        let mut s = rhs[r].clone();
        for c in r + 1..n {
            s = s - a[r][c].clone() * &u[c];
        }
        u[r] = s / &a[r][r];
    }
    Ok(u)
}

/// Fits `g = (x^5 + a4 x^4 + ... + a0) / (b2 x^2 + b1 x + b0)` through the first eight
/// samples and checks the rest.
pub fn fit_g<T: Real>(samples: &[SamplePoint<T>], ctx: &PrecisionContext) -> Result<GFit<T>, MapFitError> {
    const UNKNOWNS: usize = 8;
    if samples.len() <= UNKNOWNS {
        return Err(MapFitError::TooFewSamples { got: samples.len(), need: UNKNOWNS + 1 });
    }
    let (fit, held) = samples.split_at(UNKNOWNS);
    let mut rows = Vec::with_capacity(UNKNOWNS);
    let mut rhs = Vec::with_capacity(UNKNOWNS);
    for s in fit {
        let x = &s.x;
        let xv = s.value.re.clone();
        let mut pw = vec![T::one(ctx)];
        for k in 1..=5 {
            pw.push(pw[k - 1].clone() * x);
        }
        let mut row: Vec<T> = pw[..5].to_vec();
        for p in &pw[..3] {
            row.push(-(xv.clone() * p));
        }
        rows.push(row);
        rhs.push(-pw[5].clone());
    }
    // Column equilibration.
    let scales: Vec<T> = (0..UNKNOWNS)
        .map(|c| rows.iter().map(|r| r[c].abs()).fold(T::zero(ctx), |m, v| if v > m { v } else { m }))
        .collect();
    if scales.iter().any(|s| s.is_zero()) {
        return Err(MapFitError::SingularSystem);
    }
    for r in rows.iter_mut() {
        for (v, s) in r.iter_mut().zip(&scales) {
            *v = v.clone() / s;
        }
    }
    let u = solve_linear(rows, rhs, ctx)?;
    let u: Vec<T> = u.into_iter().zip(&scales).map(|(v, s)| v / s).collect();
    let mut out = GFit {
        a: std::array::from_fn(|i| u[i].clone()),
        b: std::array::from_fn(|i| u[5 + i].clone()),
        held_out_residual: T::zero(ctx),
    };
    let worst = held
        .iter()
        .map(|s| out.relative_residual(s, ctx))
        .fold(T::zero(ctx), |m, v| if v > m { v } else { m });
    let digits = T::effective_digits(ctx) as i32;
    if worst > T::pow10(-digits / 2, ctx) {
        return Err(MapFitError::BadResidual { residual: worst.to_f64() });
    }
    out.held_out_residual = worst;
    Ok(out)
}

/// Exact `a`, `b` from a numeric fit trusted to `trusted_digits` relative to the
/// largest coefficient of each group.
pub fn algebraize_g<T: Real>(
    fit: &GFit<T>,
    trusted_digits: u32,
    ctx: &PrecisionContext,
) -> Result<([QuadraticNumber; 5], [QuadraticNumber; 3]), MapFitError> {
    let rctx = ctx.with_digits(trusted_digits).map_err(|e| MapFitError::Shape(e.to_string()))?;
    let one = |name: &str, v: &T, group_max: &T| -> Result<QuadraticNumber, MapFitError> {
        let zero_tol = T::pow10(-(trusted_digits as i32) / 2, ctx) * group_max;
        if v.abs() <= zero_tol {
            return Ok(QuadraticNumber::zero(FIELD));
        }
        recognize_in_field(v, FIELD, &rctx).ok_or_else(|| MapFitError::RecognitionFailure(name.to_string()))
    };
    let max_of = |vs: &[T]| vs.iter().map(|v| v.abs()).fold(T::zero(ctx), |m, v| if v > m { v } else { m });
    let amax = max_of(&fit.a);
    let bmax = max_of(&fit.b);
    let mut a = Vec::with_capacity(5);
    for (n, v) in A_NAMES.iter().zip(&fit.a) {
        a.push(one(n, v, &amax)?);
    }
    let mut b = Vec::with_capacity(3);
    for (n, v) in B_NAMES.iter().zip(&fit.b) {
        b.push(one(n, v, &bmax)?);
    }
    Ok((a.try_into().expect("five"), b.try_into().expect("three")))
}

/// `h1 = sqrt(-sqrt5 (g^3 - g) / q)` in the normalized form
/// `(x^6 + c5 x^5 + ... + c0) / (d x^2 (x - 2κ)^2)` with `d` of positive rational part.
pub fn derive_h(g: &QRatFunc, kappa: &QuadraticNumber) -> Result<([QuadraticNumber; 6], QuadraticNumber), MapFitError> {
    let q = family_quintic_exact(kappa);
    let f = g.pow(3).try_sub(g)?.try_mul(&QRatFunc::constant(twist()))?.try_div(&QRatFunc::from_poly(q))?;
    let h1 = exact_sqrt_ratfunc(&f)?.ok_or(MapFitError::NotAPerfectSquare)?;
    let num = h1.num();
    if num.degree() != Some(6) {
        return Err(MapFitError::Shape(format!("numerator of h has degree {:?}", num.degree())));
    }
    let two_k = kappa + kappa;
    let zero = QuadraticNumber::zero(kappa.d());
    let expected_den = QPoly::from_roots(&[zero.clone(), zero, two_k.clone(), two_k], kappa.d());
    if h1.den() != &expected_den {
        return Err(MapFitError::Shape(format!("denominator of h is {}", h1.den())));
    }
    let lead = num.leading();
    let mut d = lead.inv()?;
    let monic = num.scale(&d);
    // h and -h give the same cover up to y -> -y.
    if !d.is_positive_normalized() {
        d = -d;
    }
    let c: [QuadraticNumber; 6] = std::array::from_fn(|i| monic.coeff(i));
    Ok((c, d))
}

/// Result of fitting, recognizing and certifying the cover for a given exact κ.
#[derive(Debug, Clone, PartialEq)]
pub struct MapFit {
    pub coefficients: MapCoefficients,
    pub orientation: Orientation,
    pub held_out_residual: f64,
    pub identity_holds: bool,
    pub pullback: QuadraticNumber,
    pub homogeneity: Option<i32>,
}

/// Samples, fits and certifies the cover over `Q(sqrt 5)` for the exact `kappa`,
/// trying both lattice orientations.
pub fn fit_cover<T: Real>(kappa: &QuadraticNumber, ctx: &PrecisionContext) -> Result<MapFit, MapFitError> {
    let k_num: T = kappa.to_real(ctx);
    let sampler = MapSampler::new(&k_num, ctx)?;
    let xs = default_sample_xs(&k_num, ctx);
    let trusted = T::effective_digits(ctx).saturating_sub(25).max(20);
    let mut last_err = None;
    for orientation in Orientation::ALL {
        let attempt = (|| -> Result<MapFit, MapFitError> {
            let samples: Vec<SamplePoint<T>> =
                xs.iter().map(|x| sampler.sample(x, 1, orientation)).collect::<Result<_, _>>()?;
            let fit = fit_g(&samples, ctx)?;
            let (a, b) = algebraize_g(&fit, trusted, ctx)?;
            let g = g_from(&a, &b)?;
            let (c, d) = derive_h(&g, kappa)?;
            let coefficients = MapCoefficients { kappa: kappa.clone(), a, b, c, d };
            let identity_holds = coefficients.verify()?;
            if !identity_holds {
                return Err(MapFitError::Shape("cover identity fails".into()));
            }
            let pullback = coefficients.pullback()?.ok_or_else(|| MapFitError::Shape("g'/h is not constant".into()))?;
            Ok(MapFit {
                homogeneity: homogeneity_exponent(&g),
                coefficients,
                orientation,
                held_out_residual: fit.held_out_residual.to_f64(),
                identity_holds,
                pullback,
            })
        })();
        match attempt {
            Ok(f) => return Ok(f),
            Err(e) => last_err = Some(e),
        }
    }
    Err(last_err.expect("two attempts"))
}

/// Pipeline stage named in failures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Solve,
    Recognize,
    Fit,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stage::Solve => "solve",
            Stage::Recognize => "recognize",
            Stage::Fit => "fit",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PipelineError {
    #[error("stage solve: {0}")]
    Solve(#[from] SolveError),
    #[error("stage recognize: {0}")]
    Recognize(String),
    #[error("stage fit: {0}")]
    Fit(#[from] MapFitError),
}

impl PipelineError {
    pub fn stage(&self) -> Stage {
        match self {
            PipelineError::Solve(_) => Stage::Solve,
            PipelineError::Recognize(_) => Stage::Recognize,
            PipelineError::Fit(_) => Stage::Fit,
        }
    }
}

/// Settings of [`end_to_end`].
#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    /// Ratio `π3/π1` to solve for.
    pub target: i64,
    pub seed: String,
    /// Digits for the Newton solve.
    pub solve_digits: u32,
    /// Digits for sampling and fitting the map.
    pub fit_digits: u32,
    pub max_iter: usize,
    pub max_degree: u32,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self { target: 3, seed: "2".into(), solve_digits: 60, fit_digits: 80, max_iter: 40, max_degree: 4 }
    }
}

/// Everything checked by [`end_to_end`].
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub target: i64,
    pub kappa_decimal: String,
    pub solver_iterations: usize,
    pub solver_residual: f64,
    pub kappa_min_poly: IntegerPolynomial,
    pub kappa_exact: Option<QuadraticSurd>,
    pub map: Option<MapFit>,
    pub notes: Vec<String>,
}

impl Certificate {
    pub fn all_green(&self) -> bool {
        self.map.as_ref().is_none_or(|m| m.identity_holds)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        s += &format!("target ratio pi3/pi1 = {}\n", self.target);
        s += &format!("kappa ~ {}\n", self.kappa_decimal);
        s += &format!("newton iterations = {}, final residual = {:e}\n", self.solver_iterations, self.solver_residual);
        s += &format!("kappa minimal polynomial: {}\n", self.kappa_min_poly);
        if let Some(k) = &self.kappa_exact {
            s += &format!("kappa = {k}\n");
        }
        if let Some(m) = &self.map {
            s += &format!("orientation: {}\n", m.orientation);
            s += &format!("held-out fit residual = {:e}\n", m.held_out_residual);
            s += &m.coefficients.to_text();
            s += &format!(
                "identity h^2 q / (-sqrt(5)) = g^3 - g: {}\n",
                if m.identity_holds { "verified" } else { "FAILED" }
            );
            s += &format!("pullback g'/h = {}\n", m.pullback);
            match m.homogeneity {
                Some(k) => s += &format!("homogeneity: x -> eps^{} x gives pure coefficients\n", 6 * k),
                None => s += "homogeneity: none found\n",
            }
        }
        for n in &self.notes {
            s += &format!("note: {n}\n");
        }
        s
    }
}

/// Solve for κ, recognize it, and (over `Q(sqrt 5)`) reconstruct and certify the cover.
pub fn end_to_end<T: Real>(cfg: &PipelineConfig) -> Result<Certificate, PipelineError> {
    let sctx = PrecisionContext::new(cfg.solve_digits).map_err(|e| SolveError::Config(e.to_string()))?;
    let seed = T::parse_decimal(&cfg.seed, &sctx).map_err(|e| SolveError::Config(e.to_string()))?;
    let mut ncfg = NewtonConfig::new(seed, T::from_i64(cfg.target, &sctx), &sctx);
    ncfg.max_iter = cfg.max_iter;
    let (kappa, trace) = find_kappa(&ncfg, &sctx)?;
    let digits = T::effective_digits(&sctx);
    let trusted = digits.saturating_sub(12).max(15);
    let mut notes = Vec::new();

    let uncertainty = kappa.log10_approx() - trusted as f64;
    let cf = cf_expand_with_uncertainty(&kappa, uncertainty, 200, &sctx);
    let rctx = sctx.with_digits(trusted).map_err(|e| PipelineError::Recognize(e.to_string()))?;
    let surd = detect_quadratic(&cf);
    let min_poly = match &surd {
        Some(s) => quadratic_min_poly(s),
        None => min_poly(&kappa, cfg.max_degree, &rctx),
    }
    .ok_or_else(|| PipelineError::Recognize(format!("no relation of degree <= {} for {}", cfg.max_degree, kappa)))?;

    let map = match &surd {
        Some(s) if s.d == FIELD => {
            let fctx = PrecisionContext::new(cfg.fit_digits).map_err(|e| MapFitError::Shape(e.to_string()))?;
            Some(fit_cover::<T>(&s.to_field(), &fctx)?)
        }
        Some(s) => {
            notes.push(format!("kappa lies in Q(sqrt {}), map fit runs only over Q(sqrt 5)", s.d));
            None
        }
        None => {
            notes.push(format!("kappa has degree {}; map fit skipped", min_poly.degree()));
            None
        }
    };
    Ok(Certificate {
        target: cfg.target,
        kappa_decimal: kappa.to_decimal_string(digits.min(40)),
        solver_iterations: trace.iterates.len(),
        solver_residual: trace.residuals.last().map_or(f64::NAN, |r| r.to_f64()),
        kappa_min_poly: min_poly,
        kappa_exact: surd,
        map,
        notes,
    })
}

/// Primitive integer polynomial of a quadratic surd.
pub fn quadratic_min_poly(s: &QuadraticSurd) -> Option<IntegerPolynomial> {
    let [c0, c1, c2] = s.quadratic();
    let den = c0.denom() * c1.denom() / num_integer::Integer::gcd(c0.denom(), c1.denom());
    let scale = BigRational::from_integer(den);
    let ints: Vec<BigInt> = [c0, c1, c2].iter().map(|c| (c * &scale).to_integer()).collect();
    IntegerPolynomial::new(ints)
}

/// `g(x)` at an exact point, `None` at a pole.
pub fn eval_g(coeffs: &MapCoefficients, x: &QuadraticNumber) -> Option<QuadraticNumber> {
    let g = coeffs.g().ok()?;
    let den = g.den().eval(x);
    if den.is_zero() {
        return None;
    }
    g.num().eval(x).try_div(&den).ok()
}

#[cfg(test)]
mod tests;
