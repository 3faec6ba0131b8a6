use super::*;
use crate::scalar::BigReal;

type Q = QuadraticNumber;

/// `(a + b sqrt5)` as an i128 pair.
fn mul5(x: (i128, i128), y: (i128, i128)) -> (i128, i128) {
    (x.0 * y.0 + 5 * x.1 * y.1, x.0 * y.1 + x.1 * y.0)
}

/// `eps^(6k)` by repeated multiplication with `9 + 4 sqrt5`.
fn eps6(k: u32) -> (i128, i128) {
    (0..k).fold((1, 0), |acc, _| mul5(acc, (9, 4)))
}

fn q_of(x: (i128, i128)) -> Q {
    let r = |v: i128| BigRational::from_integer(BigInt::from(v));
    Q::new(r(x.0), r(x.1), 5)
}

fn paper_coefficients() -> MapCoefficients {
    let m = |c: i128, k: u32| q_of({
        let e = eps6(k);
        (c * e.0, c * e.1)
    });
    let rt5 = |c: i128, k: u32| q_of(mul5((0, c), eps6(k)));
    MapCoefficients {
        kappa: Q::from_ints(81, 36, 5),
        a: [m(-324, 5), m(1980, 4), m(-3240, 3), m(660, 2), m(-45, 1)],
        b: [Q::zero(5), rt5(1800, 4), rt5(-100, 3)],
        c: [m(-1944, 6), m(216, 5), m(18780, 4), m(-7920, 3), m(1030, 2), m(-54, 1)],
        d: q_of(mul5((0, 1000), (219602, 98209))),
    }
}

#[test]
fn builtin_matches_factored_forms() {
    assert_eq!(eps6(2), (161, 72));
    assert_eq!(eps6(6), (16692641, 7465176));
    assert_eq!(MapCoefficients::builtin(), paper_coefficients());
}

#[test]
fn builtin_is_a_cover() {
    let m = MapCoefficients::builtin();
    assert!(m.verify().unwrap());
    assert_eq!(m.pullback().unwrap(), Some(Q::from_ints(-1140, -510, 5)));
    assert!(homogeneity_exponent(&m.g().unwrap()).is_some());
}

#[test]
fn perturbed_coefficient_fails() {
    let mut m = MapCoefficients::builtin();
    m.a[2] = &m.a[2] + &Q::one(5);
    assert!(!m.verify().unwrap());
}

#[test]
fn text_round_trip_and_errors() {
    let m = MapCoefficients::builtin();
    assert_eq!(MapCoefficients::parse(&m.to_text()).unwrap(), m);
    let missing = m.to_text().replace("c3 =", "# c3 =");
    assert_eq!(MapCoefficients::parse(&missing), Err(MapFitError::Missing("c3")));
    let wrong_field = m.to_text().replace("field = 5", "field = 7");
    assert!(matches!(MapCoefficients::parse(&wrong_field), Err(MapFitError::Parse { line: 1, .. })));
    let dup = format!("{}a4 = 1\n", m.to_text());
    assert!(matches!(MapCoefficients::parse(&dup), Err(MapFitError::Parse { .. })));
    assert!(matches!(MapCoefficients::parse("kappa = 1 +"), Err(MapFitError::Parse { line: 1, .. })));
}

#[test]
fn derive_h_recovers_builtin() {
    let m = MapCoefficients::builtin();
    let (c, d) = derive_h(&m.g().unwrap(), &m.kappa).unwrap();
    assert_eq!(c, m.c);
    assert_eq!(d, m.d);
}

#[test]
fn derive_h_rejects_non_square() {
    let mut m = MapCoefficients::builtin();
    m.a[0] = &m.a[0] + &Q::one(5);
    assert_eq!(derive_h(&m.g().unwrap(), &m.kappa), Err(MapFitError::NotAPerfectSquare));
}

fn exact_samples(m: &MapCoefficients, xs: &[i64], ctx: &PrecisionContext) -> Vec<SamplePoint<BigReal>> {
    xs.iter()
        .map(|&x| {
            let v = eval_g(m, &Q::from_int(x, 5)).unwrap();
            SamplePoint { x: BigReal::from_i64(x, ctx), value: Complex::from_real(v.to_real(ctx), ctx) }
        })
        .collect()
}

#[test]
fn fit_recovers_exact_g() {
    let ctx = PrecisionContext::new(60).unwrap();
    let m = MapCoefficients::builtin();
    let xs: Vec<i64> = (0..12).map(|k| 325 + 16 * k).collect();
    let fit = fit_g(&exact_samples(&m, &xs, &ctx), &ctx).unwrap();
    assert!(fit.held_out_residual.to_f64() < 1e-40);
    let (a, b) = algebraize_g(&fit, 40, &ctx).unwrap();
    assert_eq!(a, m.a);
    assert_eq!(b, m.b);
}

#[test]
fn fit_needs_nine_samples() {
    let ctx = PrecisionContext::new(40).unwrap();
    let m = MapCoefficients::builtin();
    let s = exact_samples(&m, &[325, 341, 357, 373, 389, 405, 421, 437], &ctx);
    assert_eq!(fit_g(&s, &ctx), Err(MapFitError::TooFewSamples { got: 8, need: 9 }));
    assert!(matches!(fit_g(&s[..7], &ctx), Err(MapFitError::TooFewSamples { got: 7, .. })));
}

#[test]
fn fit_detects_wrong_model() {
    let ctx = PrecisionContext::new(40).unwrap();
    let s: Vec<SamplePoint<BigReal>> = (1..=12)
        .map(|k| {
            let x = BigReal::from_i64(k, &ctx);
            SamplePoint { value: Complex::from_real(x.exp(), &ctx), x }
        })
        .collect();
    assert!(matches!(fit_g(&s, &ctx), Err(MapFitError::BadResidual { .. })));
}

#[test]
fn fit_detects_singular_system() {
    let ctx = PrecisionContext::new(40).unwrap();
    let m = MapCoefficients::builtin();
    let s = exact_samples(&m, &[325; 10], &ctx);
    assert_eq!(fit_g(&s, &ctx), Err(MapFitError::SingularSystem));
}

#[test]
fn sampler_hits_known_values() {
    let ctx = PrecisionContext::new(40).unwrap();
    let kappa: BigReal = Q::from_ints(81, 36, 5).to_real(&ctx);
    let s = MapSampler::new(&kappa, &ctx).unwrap();
    let tol = BigReal::pow10(-25, &ctx);
    // g(1) = -1 and g(κ) = 0 on the exact cover.
    let at_one = s.sample(&BigReal::one(&ctx), 1, Orientation::Rotated).unwrap();
    assert!((at_one.value.clone() + Complex::from_real(BigReal::one(&ctx), &ctx)).abs() < tol);
    let at_k = s.sample(&kappa, 1, Orientation::Rotated).unwrap();
    assert!(at_k.value.abs() < tol);
    let x = BigReal::from_i64(400, &ctx);
    let up = s.sample(&x, 1, Orientation::Rotated).unwrap();
    let down = s.sample(&x, -1, Orientation::Rotated).unwrap();
    assert!((up.value.clone() - down.value).abs() < tol);
    let exact = eval_g(&MapCoefficients::builtin(), &Q::from_int(400, 5)).unwrap().to_real::<BigReal>(&ctx);
    assert!((up.value - Complex::from_real(exact, &ctx)).abs() < tol);
}

#[test]
fn direct_orientation_gives_negated_map() {
    let ctx = PrecisionContext::new(40).unwrap();
    let kappa: BigReal = Q::from_ints(81, 36, 5).to_real(&ctx);
    let s = MapSampler::new(&kappa, &ctx).unwrap();
    let x = BigReal::from_i64(-3, &ctx);
    let d = s.sample(&x, 1, Orientation::Direct).unwrap().value;
    let r = s.sample(&x, 1, Orientation::Rotated).unwrap().value;
    assert!((d + r).abs() < BigReal::pow10(-25, &ctx));
}

#[test]
fn quadratic_min_poly_of_kappa() {
    let s = QuadraticSurd::from_field(&Q::from_ints(81, 36, 5));
    assert_eq!(quadratic_min_poly(&s).unwrap().to_string(), "x^2 - 162*x + 81");
}

#[test]
fn full_fit_reproduces_builtin() {
    let ctx = PrecisionContext::new(80).unwrap();
    let fit = fit_cover::<BigReal>(&Q::from_ints(81, 36, 5), &ctx).unwrap();
    assert_eq!(fit.coefficients, MapCoefficients::builtin());
    assert_eq!(fit.orientation, Orientation::Rotated);
    assert!(fit.identity_holds);
    assert_eq!(fit.pullback, Q::from_ints(-1140, -510, 5));
}

#[test]
fn end_to_end_certifies_cover() {
    let cert = end_to_end::<BigReal>(&PipelineConfig::default()).unwrap();
    assert!(cert.kappa_decimal.starts_with("161.498447189992429070"));
    assert_eq!(cert.kappa_min_poly.to_string(), "x^2 - 162*x + 81");
    assert_eq!(cert.kappa_exact.as_ref().unwrap().to_field(), Q::from_ints(81, 36, 5));
    let map = cert.map.as_ref().unwrap();
    assert_eq!(map.coefficients, MapCoefficients::builtin());
    assert!(cert.all_green());
    assert!(cert.to_text().contains("verified"));
}

#[test]
fn end_to_end_quartic_target_skips_fit() {
    let cfg = PipelineConfig { target: 4, seed: "3000".into(), ..PipelineConfig::default() };
    let cert = end_to_end::<BigReal>(&cfg).unwrap();
    assert_eq!(cert.kappa_min_poly.to_string(), "x^4 - 3728*x^3 + 7048*x^2 - 5184*x + 1296");
    assert!(cert.kappa_exact.is_none());
    assert!(cert.map.is_none());
}
