use super::{ParseRealError, PrecisionContext, Real};
use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign};
use num_bigint::{BigInt, BigUint, Sign as BigSign};
use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

const RM: RoundingMode = RoundingMode::ToEven;
const WORD: usize = 64;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constant cache"));
}

fn with_consts<R>(f: impl FnOnce(&mut Consts) -> R) -> R {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}

/// Arbitrary-precision binary floating point number.
#[derive(Clone)]
pub struct BigReal(BigFloat);

impl BigReal {
    pub fn from_bigfloat(x: BigFloat) -> Self {
        Self(x)
    }

    pub fn as_bigfloat(&self) -> &BigFloat {
        &self.0
    }

    fn bits_or(&self, fallback: usize) -> usize {
        self.0.mantissa_max_bit_len().unwrap_or(fallback)
    }

    fn joint_bits(&self, other: &Self) -> usize {
        let a = self.0.mantissa_max_bit_len();
        let b = other.0.mantissa_max_bit_len();
        match (a, b) {
            (Some(a), Some(b)) => a.max(b),
            (Some(a), None) | (None, Some(a)) => a,
            (None, None) => WORD,
        }
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident) => {
        impl $tr<BigReal> for BigReal {
            type Output = BigReal;
            fn $m(self, rhs: BigReal) -> BigReal {
                let p = self.joint_bits(&rhs);
                BigReal(self.0.$m(&rhs.0, p, RM))
            }
        }
        impl<'a> $tr<&'a BigReal> for BigReal {
            type Output = BigReal;
            fn $m(self, rhs: &'a BigReal) -> BigReal {
                let p = self.joint_bits(rhs);
                BigReal(self.0.$m(&rhs.0, p, RM))
            }
        }
        impl<'a, 'b> $tr<&'b BigReal> for &'a BigReal {
            type Output = BigReal;
            fn $m(self, rhs: &'b BigReal) -> BigReal {
                let p = self.joint_bits(rhs);
                BigReal(self.0.$m(&rhs.0, p, RM))
            }
        }
        impl<'a> $tr<BigReal> for &'a BigReal {
            type Output = BigReal;
            fn $m(self, rhs: BigReal) -> BigReal {
                let p = self.joint_bits(&rhs);
                BigReal(self.0.$m(&rhs.0, p, RM))
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl Neg for BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        BigReal(BigFloat::neg(&self.0))
    }
}

impl Neg for &BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        BigReal(BigFloat::neg(&self.0))
    }
}

impl PartialEq for BigReal {
    fn eq(&self, other: &Self) -> bool {
        self.0.cmp(&other.0) == Some(0)
    }
}

impl PartialOrd for BigReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.0.cmp(&other.0).map(|c| c.cmp(&0))
    }
}

impl fmt::Display for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = match f.precision() {
            Some(p) => p as u32,
            None => (self.bits_or(WORD) as f64 * std::f64::consts::LOG10_2).floor() as u32,
        };
        f.write_str(&self.to_decimal_string(digits))
    }
}

impl fmt::Debug for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BigReal({})", self.to_decimal_string(24))
    }
}

impl Real for BigReal {
    const MAX_DIGITS: Option<u32> = None;

    fn from_i64(n: i64, ctx: &PrecisionContext) -> Self {
        BigReal(BigFloat::from_i64(n, ctx.bits()))
    }

    fn from_f64(x: f64, ctx: &PrecisionContext) -> Self {
        BigReal(BigFloat::from_f64(x, ctx.bits()))
    }

    fn from_bigint(n: &BigInt, ctx: &PrecisionContext) -> Self {
        let (sign, mag) = n.to_u64_digits();
        if mag.is_empty() {
            return Self::from_i64(0, ctx);
        }
        let s = if sign == BigSign::Minus { Sign::Neg } else { Sign::Pos };
        let e = (mag.len() * WORD) as i32;
        let mut x = BigFloat::from_words(&mag, s, e);
        let p = ctx.bits();
        if x.mantissa_max_bit_len().unwrap_or(0) != p {
            x.set_precision(p, RM).expect("precision change");
        }
        BigReal(x)
    }

    fn parse_decimal(s: &str, ctx: &PrecisionContext) -> Result<Self, ParseRealError> {
        let t = s.trim();
        let ok = !t.is_empty()
            && t.chars().all(|c| c.is_ascii_digit() || matches!(c, '.' | '-' | '+' | 'e' | 'E'))
            && t.chars().any(|c| c.is_ascii_digit());
        if !ok {
            return Err(ParseRealError(s.to_string()));
        }
        let x = with_consts(|cc| BigFloat::parse(t, Radix::Dec, ctx.bits(), RM, cc));
        if x.is_nan() || x.is_inf() {
            return Err(ParseRealError(s.to_string()));
        }
        Ok(BigReal(x))
    }

    fn pi(ctx: &PrecisionContext) -> Self {
        BigReal(with_consts(|cc| cc.pi(ctx.bits(), RM)))
    }

    fn sqrt(&self) -> Self {
        BigReal(self.0.sqrt(self.bits_or(WORD), RM))
    }

    fn exp(&self) -> Self {
        let p = self.bits_or(WORD);
        BigReal(with_consts(|cc| self.0.exp(p, RM, cc)))
    }

    fn ln(&self) -> Self {
        let p = self.bits_or(WORD);
        BigReal(with_consts(|cc| self.0.ln(p, RM, cc)))
    }

    fn abs(&self) -> Self {
        BigReal(self.0.abs())
    }

    fn floor(&self) -> Self {
        BigReal(self.0.floor())
    }

    fn is_finite(&self) -> bool {
        !(self.0.is_nan() || self.0.is_inf())
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    fn is_negative(&self) -> bool {
        !self.0.is_zero() && self.0.is_negative()
    }

    fn to_f64(&self) -> f64 {
        if self.0.is_nan() {
            return f64::NAN;
        }
        if self.0.is_inf() {
            return if self.0.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY };
        }
        match self.0.as_raw_parts() {
            None => 0.0,
            Some((words, _, sign, e, _)) => {
                let top = match words.last() {
                    Some(&w) if w != 0 => w,
                    _ => return 0.0,
                };
                let m = top as f64 / 2f64.powi(64);
                let v = m * 2f64.powi(e.clamp(-1100, 1100));
                if sign == Sign::Neg {
                    -v
                } else {
                    v
                }
            }
        }
    }

    fn log10_approx(&self) -> f64 {
        match self.0.as_raw_parts() {
            Some((words, _, _, e, _)) => match words.last() {
                Some(&w) if w != 0 => {
                    let m = w as f64 / 2f64.powi(64);
                    (m.log2() + e as f64) * std::f64::consts::LOG10_2
                }
                _ => f64::NEG_INFINITY,
            },
            None => f64::INFINITY,
        }
    }

    fn precision_bits(&self) -> usize {
        self.bits_or(WORD)
    }

    fn with_bits(&self, bits: usize) -> Self {
        let mut x = self.0.clone();
        if x.mantissa_max_bit_len().is_some_and(|p| p < bits) {
            x.set_precision(bits, RM).expect("precision change");
        }
        BigReal(x)
    }

    fn floor_bigint(&self) -> Option<BigInt> {
        if !self.is_finite() {
            return None;
        }
        let f = self.0.floor();
        if f.is_zero() {
            return Some(BigInt::from(0));
        }
        let (words, _, sign, e, _) = f.as_raw_parts()?;
        let mag = BigUint::from_slice(
            &words.iter().flat_map(|w| [*w as u32, (*w >> 32) as u32]).collect::<Vec<_>>(),
        );
        let shift = e as i64 - (words.len() * WORD) as i64;
        let mag = if shift >= 0 { mag << shift as usize } else { mag >> (-shift) as usize };
        let s = if sign == Sign::Neg { BigSign::Minus } else { BigSign::Plus };
        Some(BigInt::from_biguint(s, mag))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Num;

    fn ctx(d: u32) -> PrecisionContext {
        PrecisionContext::new(d).unwrap()
    }

    #[test]
    fn bigint_round_trip() {
        let c = ctx(60);
        for s in ["0", "1", "-1", "18446744073709551621", "-340282366920938463463374607431768211457"] {
            let n = BigInt::from_str_radix(s, 10).unwrap();
            assert_eq!(BigReal::from_bigint(&n, &c).floor_bigint().unwrap(), n, "{s}");
        }
    }

    #[test]
    fn floor_of_fractions() {
        let c = ctx(30);
        let x = BigReal::parse_decimal("-2.5", &c).unwrap();
        assert_eq!(x.floor_bigint().unwrap(), BigInt::from(-3));
        let y = BigReal::parse_decimal("12345.75", &c).unwrap();
        assert_eq!(y.floor_bigint().unwrap(), BigInt::from(12345));
        assert_eq!(y.round_bigint().unwrap(), BigInt::from(12346));
    }

    #[test]
    fn decimal_rendering() {
        let c = ctx(40);
        let pi = BigReal::pi(&c);
        assert_eq!(pi.to_decimal_string(30), "3.14159265358979323846264338328");
        let x = BigReal::from_i64(1, &c) / BigReal::from_i64(3, &c);
        assert_eq!(x.to_decimal_string(5), "0.33333");
        let big = BigReal::parse_decimal("-1.25e60", &c).unwrap();
        assert_eq!(big.to_decimal_string(3), "-1.25e60");
    }

    #[test]
    fn mixed_precision_promotes() {
        let lo = BigReal::from_i64(1, &ctx(15));
        let hi = BigReal::from_i64(3, &ctx(100));
        let q = lo / hi;
        assert!(q.precision_bits() >= ctx(100).bits());
    }

    #[test]
    fn to_f64_matches() {
        let c = ctx(30);
        for v in [1.5, -0.001, 161.49844718999242, 1e-200, 6.02e23] {
            let x = BigReal::from_f64(v, &c);
            assert!((x.to_f64() - v).abs() <= v.abs() * 1e-15);
            assert!((x.log10_approx() - v.abs().log10()).abs() < 1e-12);
        }
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(BigReal::parse_decimal("abc", &ctx(20)).is_err());
        assert!(BigReal::parse_decimal("", &ctx(20)).is_err());
    }
}
