use crate::{exit, Cli, Command, Precision, MIN_DIGITS};
use origami::elliptic::EllipticError;
use origami::exact::{homogeneity_exponent, QuadraticNumber};
use origami::mapfit::{end_to_end, fit_cover, MapCoefficients, MapFit, MapFitError, PipelineConfig, PipelineError};
use origami::monodromy::{enumerate_classes, ClassQuery, Convention, CycleType, MonodromyError};
use origami::periods::{family_quintic, period_vector_of, PeriodVector};
use origami::recognize::{
    cf_expand, cf_expand_with_uncertainty, detect_quadratic, detect_rational, min_poly, recognize_in_field,
    required_digits,
};
use origami::solver::{find_kappa, NewtonConfig, SolveError};
use origami::{BigReal, PrecisionContext, Real};
use serde_json::{json, Value};
use std::fmt::Write as _;

pub struct Report {
    pub text: String,
    pub json: Value,
    pub code: u8,
}

impl Report {
    pub fn render(&self, as_json: bool) -> String {
        if as_json {
            let mut v = self.json.clone();
            v["exit_code"] = json!(self.code);
            format!("{}\n", serde_json::to_string_pretty(&v).expect("serializable"))
        } else {
            self.text.clone()
        }
    }
}

pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    fn new(code: u8, message: impl ToString) -> Self {
        Self { code, message: message.to_string() }
    }
}

type Outcome = Result<Report, Failure>;

pub fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::FindKappa { seed, target, precision, epsilon, max_iter } => {
            cmd_find_kappa(seed, *target, precision, epsilon.as_deref(), *max_iter)
        }
        Command::Recognize { value, max_deg, field, precision } => cmd_recognize(value, *max_deg, *field, precision),
        Command::Verify { builtin, coefficients } => cmd_verify(*builtin, coefficients.as_deref()),
        Command::FitMap { kappa, digits, output } => cmd_fit_map(kappa, *digits, output.as_deref()),
        Command::Pipeline { seed, target, solve_digits, fit_digits } => {
            cmd_pipeline(seed, *target, *solve_digits, *fit_digits)
        }
        Command::CountClasses { n, commutator, transitive, convention, list } => {
            cmd_count_classes(*n, commutator.as_deref(), *transitive, convention, *list)
        }
        Command::Periods { kappa, precision } => cmd_periods(kappa, precision),
    }
}

fn context(digits: u32) -> Result<PrecisionContext, Failure> {
    if digits < MIN_DIGITS {
        return Err(Failure::new(exit::USAGE, format!("--digits must be at least {MIN_DIGITS}, got {digits}")));
    }
    PrecisionContext::new(digits).map_err(|e| Failure::new(exit::USAGE, e))
}

fn parse_real(s: &str, what: &str, ctx: &PrecisionContext) -> Result<BigReal, Failure> {
    let v = BigReal::parse_decimal(s, ctx).map_err(|e| Failure::new(exit::USAGE, format!("{what}: {e}")))?;
    if !v.is_finite() {
        return Err(Failure::new(exit::USAGE, format!("{what} must be finite")));
    }
    Ok(v)
}

/// `x` rounded to `decimals` places after the point.
fn fixed(x: &BigReal, decimals: i32) -> String {
    let int_digits = if x.is_zero() { 1 } else { x.log10_approx().floor() as i32 + 1 };
    x.to_decimal_string((int_digits + decimals).max(1) as u32)
}

fn solve_failure(e: SolveError) -> Failure {
    let code = match &e {
        SolveError::Config(_) => exit::USAGE,
        SolveError::Period(_) => exit::QUADRATURE,
        _ => exit::SOLVER,
    };
    Failure::new(code, e)
}

fn fit_failure(e: MapFitError) -> Failure {
    let code = match &e {
        MapFitError::RecognitionFailure(_) => exit::RECOGNITION,
        MapFitError::NotAPerfectSquare | MapFitError::Shape(_) | MapFitError::Exact(_) => exit::VERIFICATION,
        MapFitError::Period(_) | MapFitError::Elliptic(EllipticError::Quadrature(_) | EllipticError::Period(_)) => {
            exit::QUADRATURE
        }
        MapFitError::Parse { .. } | MapFitError::Missing(_) => exit::USAGE,
        _ => exit::FIT,
    };
    Failure::new(code, e)
}

fn cmd_find_kappa(seed: &str, target: i64, p: &Precision, epsilon: Option<&str>, max_iter: usize) -> Outcome {
    let ctx = context(p.digits)?;
    let seed = parse_real(seed, "--seed", &ctx)?;
    let mut cfg = NewtonConfig::new(seed, BigReal::from_i64(target, &ctx), &ctx);
    if let Some(e) = epsilon {
        cfg.fd_epsilon = parse_real(e, "--epsilon", &ctx)?;
    }
    cfg.max_iter = max_iter;
    let (kappa, trace) = find_kappa(&cfg, &ctx).map_err(solve_failure)?;
    let digits = p.digits.saturating_sub(8).max(10);
    let mut text = format!("target pi3/pi1 = {target}, {} digits\n", p.digits);
    for (k, (s, r)) in trace.iterates.iter().zip(&trace.residuals).enumerate() {
        let _ = writeln!(text, "s_{k} = {:<14} residual {:.3e}", fixed(s, 4), r.to_f64());
    }
    let kappa_s = kappa.to_decimal_string(digits);
    let _ = writeln!(text, "kappa = {kappa_s}");
    let json = json!({
        "command": "find-kappa",
        "target": target,
        "digits": p.digits,
        "converged": trace.converged,
        "iterates": trace.iterates.iter().map(|s| s.to_decimal_string(digits)).collect::<Vec<_>>(),
        "residuals": trace.residuals.iter().map(|r| r.to_f64()).collect::<Vec<_>>(),
        "kappa": kappa_s,
    });
    Ok(Report { text, json, code: exit::OK })
}

/// Significant digits of a decimal literal.
fn significant_digits(s: &str) -> u32 {
    let mantissa = s.trim().trim_start_matches(['+', '-']).split(['e', 'E']).next().unwrap_or("");
    let digits: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
    digits.trim_start_matches('0').len().max(1) as u32
}

fn cmd_recognize(value: &str, max_deg: u32, field: Option<i64>, p: &Precision) -> Outcome {
    let sig = significant_digits(value);
    let ctx = context(p.digits.max(sig + 10))?;
    let x = parse_real(value, "value", &ctx)?;
    // Lattice searches only trust the printed digits.
    let sig_ctx = PrecisionContext::new(sig).ok();
    // Half a unit in the last printed digit.
    let log_err = if x.is_zero() { -(sig as f64) } else { x.log10_approx().floor() + 1.0 - sig as f64 + 0.5f64.log10() };
    let exact_cf = cf_expand(&x, 60, &ctx);
    let honest_cf = cf_expand_with_uncertainty(&x, log_err, 60, &ctx);
    let mut text = format!("value {value} ({sig} significant digits)\n");
    let _ = writeln!(text, "continued fraction of the decimal: {exact_cf}");
    let _ = writeln!(
        text,
        "terms determined by the value: {} of {}{}",
        honest_cf.reliable,
        honest_cf.len(),
        if honest_cf.precision_exhausted { " (precision exhausted)" } else { "" }
    );
    let mut found = Vec::new();
    // A candidate with q^2 beyond the printed digits is just the literal itself.
    let rational = detect_rational(&exact_cf).filter(|r| r.denom().to_string().len() as u32 * 2 <= sig + 1);
    if let Some(r) = &rational {
        let _ = writeln!(text, "rational: {r}");
        found.push("rational");
    }
    let surd = detect_quadratic(&honest_cf);
    if let Some(s) = &surd {
        let _ = writeln!(text, "quadratic irrational: {s}");
        found.push("quadratic");
    }
    let poly = sig_ctx.as_ref().and_then(|c| min_poly(&x, max_deg, c));
    if let Some(pl) = &poly {
        let height_digits = pl.height().to_string().len() as u32;
        let need = required_digits(pl.degree() as u32, height_digits);
        let _ = writeln!(text, "minimal polynomial: {pl}");
        let _ = writeln!(
            text,
            "  degree {} with {}-digit coefficients needs about {need} digits; {sig} available{}",
            pl.degree(),
            height_digits,
            if need < sig { "" } else { " (insufficient: treat as a guess)" }
        );
        found.push("polynomial");
    }
    let in_field = match field {
        Some(d) => {
            let r = sig_ctx.as_ref().and_then(|c| recognize_in_field(&x, d, c));
            if let Some(q) = &r {
                let _ = writeln!(text, "in Q(sqrt {d}): {q}");
                found.push("field");
            }
            r
        }
        None => None,
    };
    if sig_ctx.is_none() {
        let _ = writeln!(text, "lattice searches skipped: fewer than {} significant digits", PrecisionContext::MIN_DIGITS);
    }
    if found.is_empty() {
        let _ = writeln!(text, "no recognition: nothing passes the thresholds at {sig} digits");
    }
    let json = json!({
        "command": "recognize",
        "value": value,
        "significant_digits": sig,
        "continued_fraction": exact_cf.terms.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
        "reliable_terms": honest_cf.reliable,
        "rational": rational.map(|r| r.to_string()),
        "quadratic": surd.map(|s| s.to_string()),
        "min_poly": poly.map(|pl| pl.to_string()),
        "field": field,
        "in_field": in_field.map(|q| q.to_string()),
        "recognized": !found.is_empty(),
    });
    Ok(Report { text, json, code: exit::OK })
}

fn cmd_verify(builtin: bool, path: Option<&std::path::Path>) -> Outcome {
    let (coeffs, source) = match (builtin, path) {
        (true, _) => (MapCoefficients::builtin(), "builtin".to_string()),
        (false, Some(p)) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| Failure::new(exit::USAGE, format!("{}: {e}", p.display())))?;
            (MapCoefficients::parse(&text).map_err(fit_failure)?, p.display().to_string())
        }
        (false, None) => return Err(Failure::new(exit::USAGE, "pass --builtin or --coefficients FILE")),
    };
    let identity = coeffs.verify().map_err(fit_failure)?;
    let pullback = coeffs.pullback().map_err(fit_failure)?;
    let homogeneity = coeffs.g().ok().and_then(|g| homogeneity_exponent(&g));
    let pass = |b: bool| if b { "PASS" } else { "FAIL" };
    let mut text = format!("coefficients: {source}\n");
    let _ = writeln!(text, "h^2 q / (-sqrt(5)) = g^3 - g: {}", pass(identity));
    match &pullback {
        Some(c) => {
            let _ = writeln!(text, "g'/h is constant: PASS ({c})");
        }
        None => {
            let _ = writeln!(text, "g'/h is constant: FAIL");
        }
    }
    if let Some(k) = homogeneity {
        let _ = writeln!(text, "x -> eps^{} x leaves every coefficient pure", 6 * k);
    }
    let ok = identity && pullback.is_some();
    let json = json!({
        "command": "verify",
        "source": source,
        "identity": identity,
        "pullback_constant": pullback.map(|c| c.to_string()),
        "homogeneity_exponent": homogeneity.map(|k| 6 * k),
        "passed": ok,
    });
    Ok(Report { text, json, code: if ok { exit::OK } else { exit::VERIFICATION } })
}

fn map_fit_json(m: &MapFit) -> Value {
    let coeffs: serde_json::Map<String, Value> =
        m.coefficients.named().into_iter().map(|(n, v)| (n.to_string(), json!(v.to_string()))).collect();
    json!({
        "kappa": m.coefficients.kappa.to_string(),
        "orientation": m.orientation.to_string(),
        "held_out_residual": m.held_out_residual,
        "coefficients": coeffs,
        "identity": m.identity_holds,
        "pullback_constant": m.pullback.to_string(),
        "homogeneity_exponent": m.homogeneity.map(|k| 6 * k),
    })
}

fn cmd_fit_map(kappa: &str, digits: u32, output: Option<&std::path::Path>) -> Outcome {
    let ctx = context(digits)?;
    let k = QuadraticNumber::parse(kappa, 5).map_err(|e| Failure::new(exit::USAGE, format!("--kappa: {e}")))?;
    let fit = fit_cover::<BigReal>(&k, &ctx).map_err(fit_failure)?;
    let mut text = format!("kappa = {}\norientation: {}\n", fit.coefficients.kappa, fit.orientation);
    let _ = writeln!(text, "held-out residual = {:e}", fit.held_out_residual);
    text += &fit.coefficients.to_text();
    let _ = writeln!(text, "identity: {}", if fit.identity_holds { "PASS" } else { "FAIL" });
    let _ = writeln!(text, "pullback g'/h = {}", fit.pullback);
    if let Some(p) = output {
        std::fs::write(p, fit.coefficients.to_text())
            .map_err(|e| Failure::new(exit::USAGE, format!("{}: {e}", p.display())))?;
    }
    let mut json = map_fit_json(&fit);
    json["command"] = json!("fit-map");
    Ok(Report { text, json, code: exit::OK })
}

fn cmd_pipeline(seed: &str, target: i64, solve_digits: u32, fit_digits: u32) -> Outcome {
    context(solve_digits)?;
    context(fit_digits)?;
    let cfg = PipelineConfig { target, seed: seed.to_string(), solve_digits, fit_digits, ..PipelineConfig::default() };
    let cert = end_to_end::<BigReal>(&cfg).map_err(|e| match e {
        PipelineError::Solve(s) => solve_failure(s),
        PipelineError::Recognize(m) => Failure::new(exit::RECOGNITION, format!("stage recognize: {m}")),
        PipelineError::Fit(f) => {
            let fail = fit_failure(f);
            Failure::new(fail.code, format!("stage fit: {}", fail.message))
        }
    })?;
    let json = json!({
        "command": "pipeline",
        "target": cert.target,
        "kappa": cert.kappa_decimal,
        "solver_iterations": cert.solver_iterations,
        "solver_residual": cert.solver_residual,
        "kappa_min_poly": cert.kappa_min_poly.to_string(),
        "kappa_exact": cert.kappa_exact.as_ref().map(|s| s.to_string()),
        "map": cert.map.as_ref().map(map_fit_json),
        "notes": cert.notes,
    });
    let code = if cert.all_green() { exit::OK } else { exit::VERIFICATION };
    Ok(Report { text: cert.to_text(), json, code })
}

fn cmd_count_classes(n: usize, commutator: Option<&str>, transitive: bool, convention: &str, list: bool) -> Outcome {
    let convention = match convention {
        "inverse-first" => Convention::InverseFirst,
        "inverse-last" => Convention::InverseLast,
        other => return Err(Failure::new(exit::USAGE, format!("unknown convention {other:?}"))),
    };
    let ct = commutator
        .map(|s| s.parse::<CycleType>())
        .transpose()
        .map_err(|e| Failure::new(exit::USAGE, e))?;
    let q = ClassQuery { n, commutator: ct.clone(), transitive, convention };
    let classes = enumerate_classes(&q).map_err(|e| match e {
        MonodromyError::TooLarge(_) => Failure::new(exit::USAGE, e),
        other => Failure::new(exit::USAGE, other),
    })?;
    let filter = format!(
        "n = {n}, commutator {}, {}",
        ct.as_ref().map_or("any".to_string(), |c| c.to_string()),
        if transitive { "transitive" } else { "any orbit structure" }
    );
    let mut text = format!("{filter}\nclasses: {}\n", classes.len());
    if list {
        for c in &classes {
            let _ = writeln!(text, "  {c}");
        }
    }
    let json = json!({
        "command": "count-classes",
        "n": n,
        "commutator": ct.map(|c| c.to_string()),
        "transitive": transitive,
        "count": classes.len(),
        "classes": if list {
            Some(classes.iter().map(|c| json!({"sigma": c.sigma.images(), "tau": c.tau.images()})).collect::<Vec<_>>())
        } else {
            None
        },
    });
    Ok(Report { text, json, code: exit::OK })
}

fn cmd_periods(kappa: &str, p: &Precision) -> Outcome {
    let ctx = context(p.digits)?;
    let s = match QuadraticNumber::parse(kappa, 5) {
        Ok(q) if kappa.contains("sqrt") => q.to_real::<BigReal>(&ctx),
        _ => parse_real(kappa, "--kappa", &ctx)?,
    };
    let q = family_quintic(&s, &ctx).map_err(|e| Failure::new(exit::USAGE, e))?;
    let pv = period_vector_of(&q, &ctx).map_err(|e| Failure::new(exit::QUADRATURE, e))?;
    let shown = p.digits.saturating_sub(5).max(10);
    let c = |z: &origami::Complex<BigReal>| format!("{} + {} i", z.re.to_decimal_string(shown), z.im.to_decimal_string(shown));
    let r3 = pv.i[2].clone() / pv.i[0].clone();
    let r4 = pv.i[3].clone() / pv.i[0].clone();
    let res = pv.homothety_residuals(&ctx);
    let mut text = String::new();
    for (j, z) in pv.i.iter().enumerate() {
        let _ = writeln!(text, "I{} = {}", j + 1, c(z));
    }
    let _ = writeln!(text, "I3/I1 = {}", c(&r3));
    let _ = writeln!(text, "I4/I1 = {}", c(&r4));
    for (j, r) in res.iter().enumerate() {
        let (a, b) = PeriodVector::<BigReal>::MULTIPLIERS[j];
        let _ = writeln!(text, "|I{} - ({a} + {b} i) I1| = {:.3e}", j + 1, r.to_f64());
    }
    let json = json!({
        "command": "periods",
        "kappa": kappa,
        "digits": p.digits,
        "periods": pv.i.iter().map(|z| json!([z.re.to_decimal_string(shown), z.im.to_decimal_string(shown)])).collect::<Vec<_>>(),
        "ratio_i3_i1": [r3.re.to_decimal_string(shown), r3.im.to_decimal_string(shown)],
        "ratio_i4_i1": [r4.re.to_decimal_string(shown), r4.im.to_decimal_string(shown)],
        "homothety_residuals": res.iter().map(|r| r.to_f64()).collect::<Vec<_>>(),
    });
    Ok(Report { text, json, code: exit::OK })
}
