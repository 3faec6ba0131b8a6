use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use origami::elliptic::{weierstrass_p, SquareLattice};
use origami::exact::{square_free_decomposition, QPoly, QuadraticNumber};
use origami::monodromy::{canonicalize, commutator_with, Convention, Permutation};
use origami::quadrature::{tanh_sinh_integrate, tanh_sinh_with, Abscissa, QuadratureConfig};
use origami::recognize::{
    cf_expand, cf_of_rational, default_delta, detect_quadratic, detect_rational, determinant, is_lll_reduced,
    lll_reduce_with_transform, min_poly, norm_sqr, QuadraticSurd,
};
use origami::{BigReal, Complex, PrecisionContext, Real};
use proptest::prelude::*;

fn ctx(d: u32) -> PrecisionContext {
    PrecisionContext::new(d).unwrap()
}

fn rat(a: i64, b: i64) -> BigRational {
    BigRational::new(a.into(), b.into())
}

/// `∫_a^b sum c_k x^k` from the antiderivative.
fn poly_integral(c: &[f64], a: f64, b: f64) -> f64 {
    c.iter().enumerate().map(|(k, ck)| ck * (b.powi(k as i32 + 1) - a.powi(k as i32 + 1)) / (k as f64 + 1.0)).sum()
}

fn poly_eval(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, ck| acc * x + ck)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn quadrature_is_linear(
        f in prop::collection::vec(-5.0f64..5.0, 1..6),
        g in prop::collection::vec(-5.0f64..5.0, 1..6),
        alpha in -3.0f64..3.0,
        beta in -3.0f64..3.0,
        a in -2.0f64..0.0,
        w in 0.5f64..3.0,
    ) {
        let c = ctx(15);
        let b = a + w;
        let q = |h: &dyn Fn(f64) -> f64| tanh_sinh_integrate(|x: &f64| h(*x), &a, &b, &c).unwrap().value;
        let lhs = q(&|x| alpha * poly_eval(&f, x) + beta * poly_eval(&g, x));
        let rhs = alpha * q(&|x| poly_eval(&f, x)) + beta * q(&|x| poly_eval(&g, x));
        let exact = alpha * poly_integral(&f, a, b) + beta * poly_integral(&g, a, b);
        let scale = 1.0 + exact.abs();
        prop_assert!((lhs - rhs).abs() < 1e-11 * scale);
        prop_assert!((lhs - exact).abs() < 1e-11 * scale);
    }

    #[test]
    fn quadrature_is_additive(
        f in prop::collection::vec(-5.0f64..5.0, 1..6),
        a in -2.0f64..0.0,
        w1 in 0.2f64..2.0,
        w2 in 0.2f64..2.0,
    ) {
        let c = ctx(15);
        let (m, b) = (a + w1, a + w1 + w2);
        let q = |lo: f64, hi: f64| {
            tanh_sinh_with(|p: &Abscissa<f64>| poly_eval(&f, p.x) / p.from_a.sqrt(), &lo, &hi, &c, &QuadratureConfig::default())
                .unwrap()
                .value
        };
        let whole = tanh_sinh_integrate(|x: &f64| poly_eval(&f, *x), &a, &b, &c).unwrap().value;
        let parts = tanh_sinh_integrate(|x: &f64| poly_eval(&f, *x), &a, &m, &c).unwrap().value
            + tanh_sinh_integrate(|x: &f64| poly_eval(&f, *x), &m, &b, &c).unwrap().value;
        prop_assert!((whole - parts).abs() < 1e-11 * (1.0 + whole.abs()));
        // Endpoint singularity: only a finiteness check, the two sides weight differently.
        prop_assert!(q(a, b).is_finite());
    }
}

#[test]
fn quadrature_pi_battery() {
    let c = ctx(50);
    let pi = BigReal::pi(&c);
    let one = BigReal::one(&c);
    let zero = BigReal::zero(&c);
    let four = BigReal::from_i64(4, &c);
    let tol = |v: &BigReal, expect: &BigReal| (v.clone() - expect).abs().log10_approx() < -45.0;
    let arctan = tanh_sinh_integrate(|x: &BigReal| four.clone() / (BigReal::one(&c) + x.clone() * x), &zero, &one, &c).unwrap();
    assert!(tol(&arctan.value, &pi));
    let circle = tanh_sinh_integrate(|x: &BigReal| (BigReal::one(&c) - x.clone() * x).sqrt(), &zero, &one, &c).unwrap();
    assert!(tol(&(circle.value * &four), &pi));
    let minus_one = -one.clone();
    let arcsin = tanh_sinh_with(
        |p: &Abscissa<BigReal>| BigReal::one(&c) / (p.from_a.clone() * &p.from_b).sqrt(),
        &minus_one,
        &one,
        &c,
        &QuadratureConfig::default(),
    )
    .unwrap();
    assert!(tol(&arcsin.value, &pi));
    let beta = tanh_sinh_with(
        |p: &Abscissa<BigReal>| BigReal::one(&c) / (p.from_a.clone() * &p.from_b).sqrt(),
        &zero,
        &one,
        &c,
        &QuadratureConfig::default(),
    )
    .unwrap();
    assert!(tol(&beta.value, &pi));
    let gauss = tanh_sinh_integrate(
        |x: &BigReal| {
            let t = x.clone() / (BigReal::one(&c) - x);
            (-(t.clone() * &t)).exp() / ((BigReal::one(&c) - x) * &(BigReal::one(&c) - x))
        },
        &zero,
        &one,
        &c,
    )
    .unwrap();
    let half_sqrt_pi = pi.sqrt() / BigReal::from_i64(2, &c);
    assert!(tol(&gauss.value, &half_sqrt_pi));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn cf_rational_round_trip(a in -10_000i64..=10_000, b in 1i64..=10_000) {
        let r = rat(a, b);
        let cf = cf_of_rational(&r);
        prop_assert_eq!(cf.value(), Some(r.clone()));
        let c = ctx(40);
        let x = BigReal::from_rational(&r, &c);
        prop_assert_eq!(detect_rational(&cf_expand(&x, 60, &c)), Some(r));
    }

    #[test]
    fn surd_round_trip(
        a in -9i64..=9,
        b in 1i64..=2,
        c0 in (1i64..=3, any::<bool>()),
        e in 1i64..=2,
        d in prop::sample::select(vec![2i64, 3, 5, 7, 11]),
    ) {
        let q = if c0.1 { c0.0 } else { -c0.0 };
        let s = QuadraticSurd { p: rat(a, b), q: rat(q, e), d };
        let c = ctx(50);
        let x: BigReal = s.value(&c);
        let cf = cf_expand(&x, 40, &c);
        prop_assert_eq!(detect_quadratic(&cf), Some(s));
    }
}

/// Shortest nonzero `sum c_i b_i` with every `|c_i| <= 8`.
fn box_shortest(b: &[Vec<BigInt>]) -> BigInt {
    let n = b.len();
    let mut best: Option<BigInt> = None;
    let mut coef = vec![-8i64; n];
    loop {
        if coef.iter().any(|&c| c != 0) {
            let v: Vec<BigInt> = (0..b[0].len())
                .map(|j| (0..n).map(|i| BigInt::from(coef[i]) * &b[i][j]).sum())
                .collect();
            let nn = norm_sqr(&v);
            if best.as_ref().is_none_or(|m| nn < *m) {
                best = Some(nn);
            }
        }
        let mut k = 0;
        loop {
            if k == n {
                return best.unwrap();
            }
            coef[k] += 1;
            if coef[k] <= 8 {
                break;
            }
            coef[k] = -8;
            k += 1;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn lll_bound_and_unimodularity(entries in prop::collection::vec(-30i64..=30, 9)) {
        let b: Vec<Vec<BigInt>> = entries.chunks(3).map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect();
        prop_assume!(!determinant(&b).is_zero());
        let delta = default_delta();
        let (red, h) = lll_reduce_with_transform(&b, &delta).unwrap();
        prop_assert!(is_lll_reduced(&red, &delta));
        prop_assert!(determinant(&h).abs().is_one());
        let lambda = box_shortest(&b);
        // |b1|^2 <= 2^(n-1) λ1^2 and λ1 <= the box minimum.
        prop_assert!(norm_sqr(&red[0]) <= lambda * BigInt::from(4));
    }
}

/// A real root of the integer polynomial by bisection, if it changes sign on the grid.
fn bisect_root(coeffs: &[i64], c: &PrecisionContext) -> Option<BigReal> {
    let eval = |x: &BigReal| coeffs.iter().rev().fold(BigReal::zero(c), |acc, k| acc * x + &BigReal::from_i64(*k, c));
    let mut lo = None;
    for k in -20..20 {
        let (a, b) = (BigReal::from_i64(k, c), BigReal::from_i64(k + 1, c));
        if eval(&a).is_zero() {
            return None;
        }
        if eval(&a).is_negative() != eval(&b).is_negative() {
            lo = Some((a, b));
            break;
        }
    }
    let (mut a, mut b) = lo?;
    let neg_a = eval(&a).is_negative();
    let two = BigReal::from_i64(2, c);
    for _ in 0..(c.working_digits() as f64 * 3.33) as usize {
        let m = (a.clone() + &b) / &two;
        if eval(&m).is_negative() == neg_a {
            a = m;
        } else {
            b = m;
        }
    }
    Some(a)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn min_poly_divides_generator(coeffs in prop::collection::vec(-9i64..=9, 1..=4), lead in 1i64..=3) {
        let mut p = coeffs.clone();
        p.push(lead);
        let c = ctx(60);
        let root = bisect_root(&p, &c);
        prop_assume!(root.is_some());
        let root = root.unwrap();
        let found = min_poly(&root, 4, &c);
        prop_assert!(found.is_some());
        let found = found.unwrap();
        let to_q = |v: &[BigInt]| QPoly::new(v.iter().map(|k| QuadraticNumber::from_rational(BigRational::from_integer(k.clone()), 5)).collect(), 5);
        let gen = to_q(&p.iter().map(|&v| BigInt::from(v)).collect::<Vec<_>>());
        let (_, rem) = gen.div_rem(&to_q(found.coeffs())).unwrap();
        prop_assert!(rem.is_zero(), "{} does not divide {:?}", found, p);
        let content = found.coeffs().iter().fold(BigInt::zero(), |g, k| num_integer::Integer::gcd(&g, k));
        prop_assert!(content.is_one());
        prop_assert!(found.eval(&root, &c).abs().log10_approx() < -40.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn weierstrass_ode(re in -6.0f64..6.0, im in -6.0f64..6.0) {
        let c = ctx(30);
        prop_assume!(re.hypot(im) > 1e-3);
        let l = SquareLattice::<BigReal>::of_curve(&c).unwrap();
        let z = Complex::new(BigReal::from_f64(re, &c), BigReal::from_f64(im, &c));
        match weierstrass_p(&z, &l, &c) {
            Ok((p, dp)) => {
                let rhs = (p.clone() * &p * &p).scale(&BigReal::from_i64(4, &c)) - p.scale(l.g2());
                let lhs = dp.clone() * &dp;
                let scale = BigReal::one(&c) + lhs.abs();
                prop_assert!(((lhs - rhs).abs() / scale).log10_approx() < -22.0);
            }
            Err(e) => prop_assert!(false, "{e}"),
        }
    }
}

fn q5() -> impl Strategy<Value = QuadraticNumber> {
    (-20i64..=20, 1i64..=6, -20i64..=20, 1i64..=6)
        .prop_map(|(a, b, c, d)| QuadraticNumber::new(rat(a, b), rat(c, d), 5))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn field_axioms(x in q5(), y in q5(), z in q5()) {
        prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!(&x - &x, QuadraticNumber::zero(5));
        prop_assert_eq!((&x * &y).conj(), &x.conj() * &y.conj());
        prop_assert_eq!((&x * &y).norm(), x.norm() * y.norm());
        if !x.is_zero() {
            prop_assert_eq!(&x * &x.inv().unwrap(), QuadraticNumber::one(5));
            prop_assert_eq!(y.try_div(&x).unwrap().try_mul(&x).unwrap(), y.clone());
        }
        let back = QuadraticNumber::parse(&x.to_string(), 5).unwrap();
        prop_assert_eq!(back, x);
    }

    #[test]
    fn yun_reconstructs(roots in prop::collection::vec((-6i64..=6, 1usize..=3), 1..4)) {
        let mut p = QPoly::one(5);
        for (r, m) in &roots {
            p = &p * &QPoly::linear_root(&QuadraticNumber::from_int(*r, 5)).pow(*m as u32);
        }
        let parts = square_free_decomposition(&p).unwrap();
        let mut back = QPoly::one(5);
        for (f, m) in &parts {
            prop_assert!(f.gcd(&f.derivative()).unwrap().degree() == Some(0));
            back = &back * &f.pow(*m as u32);
        }
        prop_assert_eq!(back.monic(), p.monic());
    }

    #[test]
    fn canonical_pairs(
        v in Just((1..=5).collect::<Vec<usize>>()).prop_shuffle(),
        w in Just((1..=5).collect::<Vec<usize>>()).prop_shuffle(),
    ) {
        let s = (v, w);
        let (a, b) = (Permutation::from_images(&s.0).unwrap(), Permutation::from_images(&s.1).unwrap());
        let (ca, cb) = canonicalize(&a, &b).unwrap();
        prop_assert_eq!(canonicalize(&ca, &cb).unwrap(), (ca, cb));
        let c1 = commutator_with(&a, &b, Convention::InverseFirst).unwrap();
        let c2 = commutator_with(&a, &b, Convention::InverseLast).unwrap();
        prop_assert_eq!(c1.cycle_type(), c2.cycle_type());
    }
}
