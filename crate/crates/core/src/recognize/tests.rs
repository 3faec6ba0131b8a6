use super::*;
use crate::scalar::BigReal;

fn ctx(d: u32) -> PrecisionContext {
    PrecisionContext::new(d).unwrap()
}

fn big(s: &str, c: &PrecisionContext) -> BigReal {
    BigReal::parse_decimal(s, c).unwrap()
}

fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

fn rat(a: i64, b: i64) -> BigRational {
    BigRational::new(a.into(), b.into())
}

#[test]
fn cf_of_truncated_decimal_ends_in_giant_term() {
    let c = ctx(30);
    let cf = cf_expand(&big("1.88372093", &c), 20, &c);
    assert_eq!(cf.terms, ints(&[1, 1, 7, 1, 1, 2, 2325581]));
    assert_eq!(cf.to_string(), "[1; 1, 7, 1, 1, 2, 2325581]");
    assert_eq!(detect_rational(&cf), Some(rat(81, 43)));
}

#[test]
fn uncertain_input_stops_at_ambiguous_term() {
    let c = ctx(30);
    let cf = cf_expand_with_uncertainty(&big("1.88372093", &c), (0.5e-8f64).log10(), 20, &c);
    assert_eq!(cf.terms, ints(&[1, 1, 7, 1, 1, 2]));
    assert_eq!(cf.reliable, 5);
    assert!(cf.precision_exhausted && !cf.terminated);
}

#[test]
fn near_surd_expansion_and_discounted_tail() {
    let c = ctx(30);
    let cf = cf_expand(&big("64.8997487421324", &c), 13, &c);
    assert_eq!(&cf.terms[..], &ints(&[64, 1, 8, 1, 38, 1, 8, 1, 38, 1, 8, 1, 42])[..]);
    let literal = ContinuedFraction::from_terms(ints(&[64, 1, 8, 1, 38, 1, 8, 1, 38, 1, 8, 1, 42]));
    let s = detect_quadratic(&literal).unwrap();
    assert_eq!(s.to_field(), QuadraticNumber::from_ints(45, 6, 11));
    assert_eq!(detect_rational(&ContinuedFraction::from_terms(ints(&[64, 1, 8, 1, 38, 1, 8]))), None);
}

#[test]
fn kappa_expansion() {
    let c = ctx(30);
    let cf = cf_expand_with_uncertainty(&big("161.49844718999242907073", &c), -20.0, 40, &c);
    assert_eq!(cf.terms, ints(&[161, 2, 160, 2, 160, 2, 160, 2, 160]));
    assert!(cf.precision_exhausted);
    let as_exact = cf_expand(&big("161.49844718999242907073", &c), 11, &c);
    assert_eq!(as_exact.terms, ints(&[161, 2, 160, 2, 160, 2, 160, 2, 160, 2, 7]));
    let s = detect_quadratic(&cf).unwrap();
    assert_eq!(s.to_field(), QuadraticNumber::from_ints(81, 36, 5));
    let literal = ContinuedFraction::from_terms(ints(&[161, 2, 160, 2, 160, 2, 160, 2, 160]));
    assert_eq!(detect_quadratic(&literal).unwrap().to_field(), QuadraticNumber::from_ints(81, 36, 5));
}

#[test]
fn sqrt43_period_not_visible_at_twelve_digits() {
    let c = ctx(30);
    let r = BigReal::from_i64(43, &c).sqrt();
    let cf = cf_expand_with_uncertainty(&r, 0.82 - 12.0, 40, &c);
    assert!(cf.precision_exhausted);
    assert_eq!(detect_quadratic(&cf), None);
    let full = cf_expand(&r, 40, &c);
    assert_eq!(detect_quadratic(&full).unwrap().to_field(), QuadraticNumber::from_ints(0, 1, 43));
}

#[test]
fn rational_round_trip_at_thirty_digits() {
    let c = ctx(30);
    let third = BigReal::from_i64(1, &c) / BigReal::from_i64(3, &c);
    let cf = cf_expand(&third, 20, &c);
    assert_eq!(detect_rational(&cf), Some(rat(1, 3)));
    assert_eq!(cf_of_rational(&rat(-7, 3)).terms, ints(&[-3, 1, 2]));
}

#[test]
fn convergents_follow_recurrence() {
    let cf = ContinuedFraction::from_terms(ints(&[1, 2, 2, 2]));
    let cv = cf.convergents();
    let expect: Vec<(BigInt, BigInt)> =
        [(1, 1), (3, 2), (7, 5), (17, 12)].iter().map(|&(p, q)| (BigInt::from(p), BigInt::from(q))).collect();
    assert_eq!(cv, expect);
}

#[test]
fn giant_threshold_is_configurable() {
    let cf = ContinuedFraction::from_terms(ints(&[0, 3, 500]));
    assert_eq!(detect_rational(&cf), None);
    assert_eq!(detect_rational_with(&cf, 100.0), Some(rat(1, 3)));
}

#[test]
fn required_digit_budget() {
    assert_eq!(required_digits(2, 2), 9);
    assert_eq!(required_digits(1, 1), 4);
    assert_eq!(required_digits(4, 10), 55);
}

#[test]
fn lll_identity_is_fixed() {
    let id: Vec<Vec<BigInt>> = (0..3).map(|i| (0..3).map(|j| BigInt::from((i == j) as i64)).collect()).collect();
    assert_eq!(lll_reduce(&id, &default_delta()).unwrap(), id);
}

#[test]
fn lll_skewed_basis() {
    let k = 1_000_000;
    let b = vec![ints(&[1, 0, 0]), ints(&[0, 1, 0]), ints(&[k, k, 1])];
    let (red, h) = lll_reduce_with_transform(&b, &default_delta()).unwrap();
    let max_in = b.iter().map(|r| norm_sqr(r)).max().unwrap();
    let max_out = red.iter().map(|r| norm_sqr(r)).max().unwrap();
    assert!(max_out <= max_in);
    assert!(determinant(&h).abs().is_one());
    assert!(is_lll_reduced(&red, &default_delta()));
}

#[test]
fn lll_rejects_bad_input() {
    let dep = vec![ints(&[1, 2]), ints(&[2, 4])];
    assert_eq!(lll_reduce(&dep, &default_delta()), Err(RecognizeError::RankDeficient));
    assert_eq!(lll_reduce(&[ints(&[1, 0])], &rat(1, 5)), Err(RecognizeError::InvalidDelta));
}

/// Monic quadratic with roots `p +- q sqrt(d)`, expanded directly.
fn quadratic_oracle(p: i64, q: i64, d: i64) -> IntegerPolynomial {
    IntegerPolynomial::from_i64(&[p * p - q * q * d, -2 * p, 1]).unwrap()
}

#[test]
fn min_poly_kappa() {
    let c = ctx(25);
    let k = big("161.4984471899924290707302520743", &c);
    let p = min_poly(&k, 2, &c).unwrap();
    assert_eq!(p, quadratic_oracle(81, 36, 5));
    assert_eq!(p.to_string(), "x^2 - 162*x + 81");
    assert!(precision_sufficient(&p, 25));
}

#[test]
fn min_poly_45_6_sqrt11() {
    let c = ctx(20);
    let r = big("64.899748742132399095", &c);
    assert_eq!(min_poly(&r, 2, &c).unwrap(), quadratic_oracle(45, 6, 11));
}

#[test]
fn field_recognition() {
    let c = ctx(60);
    let a4 = QuadraticNumber::from_ints(-405, -180, 5);
    let r: BigReal = a4.to_real(&c);
    assert!(r.to_decimal_string(14).starts_with("-807.49223594996"));
    assert_eq!(recognize_in_field(&r, 5, &c), Some(a4));
    assert_eq!(recognize_in_field(&BigReal::zero(&c), 7, &c), Some(QuadraticNumber::zero(7)));
    let two_thirds = BigReal::from_i64(2, &c) / BigReal::from_i64(3, &c);
    assert_eq!(
        recognize_in_field(&two_thirds, 5, &c),
        Some(QuadraticNumber::from_rational(rat(2, 3), 5))
    );
    assert_eq!(recognize_in_field(&two_thirds, 4, &c), None);
}

#[test]
fn integer_polynomial_normalizes() {
    let p = IntegerPolynomial::from_i64(&[-4, 0, -2]).unwrap();
    assert_eq!(p.coeffs(), &ints(&[2, 0, 1])[..]);
    assert!(IntegerPolynomial::from_i64(&[3]).is_none());
    assert_eq!(IntegerPolynomial::from_i64(&[1, -1]).unwrap().to_string(), "-x + 1".replace("-x + 1", "x - 1"));
}

fn mul_i128(a: &[i128], b: &[i128]) -> Vec<i128> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Eliminates both radicals of `932 + 352 sqrt7 + 18 sqrt(5355 + 2024 sqrt7)` by squaring:
/// `((x-932)^2 + 352^2*7 - 18^2*5355)^2 = 7 (2*352 (x-932) + 18^2*2024)^2`.
fn kappa_prime_oracle() -> IntegerPolynomial {
    let shift = [-932i128, 1];
    let mut lhs = mul_i128(&shift, &shift);
    lhs[0] += 352 * 352 * 7 - 324 * 5355;
    let lhs = mul_i128(&lhs, &lhs);
    let lin = [2 * 352 * -932 + 324 * 2024, 2 * 352];
    let rhs: Vec<i128> = mul_i128(&lin, &lin).iter().map(|c| 7 * c).collect();
    let diff: Vec<BigInt> = (0..5).map(|k| BigInt::from(lhs[k] - rhs.get(k).copied().unwrap_or(0))).collect();
    IntegerPolynomial::new(diff).unwrap()
}

#[test]
fn min_poly_quartic_nested_radical() {
    let c = ctx(60);
    let s7 = BigReal::from_i64(7, &c).sqrt();
    let inner = BigReal::from_i64(5355, &c) + &(BigReal::from_i64(2024, &c) * &s7);
    let k = BigReal::from_i64(932, &c) + &(BigReal::from_i64(352, &c) * &s7) + &(BigReal::from_i64(18, &c) * &inner.sqrt());
    assert!(k.to_decimal_string(13) == "3726.108855886");
    let p = min_poly(&k, 4, &c).unwrap();
    assert_eq!(p, kappa_prime_oracle());
    assert_eq!(p.to_string(), "x^4 - 3728*x^3 + 7048*x^2 - 5184*x + 1296");
    assert!(min_poly(&k, 3, &c).is_none());
}
