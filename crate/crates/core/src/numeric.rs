//! Scalars: the exact [`Rational`] type, the [`Scalar`] abstraction shared by
//! exact and floating-point elimination, and the [`ZeroPolicy`] that decides
//! when an entry counts as zero.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::error::{Error, Result};

/// Exponents beyond this are rejected when parsing decimal literals, so a
/// literal like `1e999999999` cannot allocate an enormous integer.
const MAX_DECIMAL_EXPONENT: i64 = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseRationalError {
    #[error("empty number")]
    Empty,
    #[error("invalid number `{0}`")]
    Invalid(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
    #[error("exponent out of range in `{0}`")]
    ExponentRange(String),
}

/// Exact arbitrary-precision fraction, always in lowest terms with a positive
/// denominator. Zero is `0/1`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn from_integer(v: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(v)))
    }

    /// `numer / denom`, reduced. Fails on a zero denominator.
    pub fn new(numer: i64, denom: i64) -> Result<Self> {
        Self::from_big(BigInt::from(numer), BigInt::from(denom))
    }

    pub fn from_big(numer: BigInt, denom: BigInt) -> Result<Self> {
        if denom.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational(BigRational::new(numer, denom)))
    }

    /// Exact value of a finite float; `None` for NaN or infinities.
    pub fn from_f64(v: f64) -> Option<Self> {
        BigRational::from_float(v).map(Rational)
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn checked_div(&self, rhs: &Rational) -> Result<Rational> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational(&self.0 / &rhs.0))
    }

    /// Parses a literal that may also use decimal or scientific notation
    /// (`-1.25`, `3e-2`, `.5`) in addition to `p`, `-p` and `p/q`. The value
    /// is always exact. The flag reports whether decimal notation was used.
    pub fn parse_literal(s: &str) -> Result<(Rational, bool), ParseRationalError> {
        let t = s.trim();
        if t.contains(['.', 'e', 'E']) {
            parse_decimal(t).map(|r| (r, true))
        } else {
            t.parse().map(|r| (r, false))
        }
    }

    /// Exact decimal expansion if the denominator has only factors 2 and 5.
    pub fn to_terminating_decimal(&self) -> Option<String> {
        if self.is_integer() {
            return Some(self.numer().to_string());
        }
        let mut d = self.denom().clone();
        let two = BigInt::from(2);
        let five = BigInt::from(5);
        let (mut twos, mut fives) = (0u32, 0u32);
        while (&d % &two).is_zero() {
            d /= &two;
            twos += 1;
        }
        while (&d % &five).is_zero() {
            d /= &five;
            fives += 1;
        }
        if !d.is_one() {
            return None;
        }
        let digits = twos.max(fives);
        let scaled =
            self.numer().abs() * num_traits::pow(BigInt::from(10), digits as usize) / self.denom();
        let mut body = scaled.to_string();
        while body.len() <= digits as usize {
            body.insert(0, '0');
        }
        body.insert(body.len() - digits as usize, '.');
        let sign = if self.0.is_negative() { "-" } else { "" };
        Some(format!("{sign}{body}"))
    }
}

fn parse_int(s: &str, whole: &str) -> Result<BigInt, ParseRationalError> {
    let digits = s.strip_prefix('-').unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(ParseRationalError::Invalid(whole.to_string()));
    }
    s.parse::<BigInt>()
        .map_err(|_| ParseRationalError::Invalid(whole.to_string()))
}

fn parse_decimal(s: &str) -> Result<Rational, ParseRationalError> {
    let invalid = || ParseRationalError::Invalid(s.to_string());
    let (negative, body) = match s.as_bytes().first() {
        Some(b'-') => (true, &s[1..]),
        Some(b'+') => (false, &s[1..]),
        Some(_) => (false, s),
        None => return Err(ParseRationalError::Empty),
    };
    let (mantissa, exponent) = match body.find(['e', 'E']) {
        Some(pos) => (&body[..pos], Some(&body[pos + 1..])),
        None => (body, None),
    };
    let (int_part, frac_part) = match mantissa.find('.') {
        Some(pos) => (&mantissa[..pos], &mantissa[pos + 1..]),
        None => (mantissa, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(invalid());
    }
    if !int_part
        .bytes()
        .chain(frac_part.bytes())
        .all(|b| b.is_ascii_digit())
    {
        return Err(invalid());
    }
    let mut exp: i64 = match exponent {
        Some(e) => {
            let digits = e.strip_prefix(['+', '-']).unwrap_or(e);
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(invalid());
            }
            e.parse::<i64>()
                .map_err(|_| ParseRationalError::ExponentRange(s.to_string()))?
        }
        None => 0,
    };
    exp -= frac_part.len() as i64;
    if exp.abs() > MAX_DECIMAL_EXPONENT {
        return Err(ParseRationalError::ExponentRange(s.to_string()));
    }
    let all_digits = format!("{int_part}{frac_part}");
    let mut numer: BigInt = all_digits.parse().map_err(|_| invalid())?;
    if negative {
        numer = -numer;
    }
    let scale = num_traits::pow(BigInt::from(10), exp.unsigned_abs() as usize);
    let value = if exp >= 0 {
        BigRational::from_integer(numer * scale)
    } else {
        BigRational::new(numer, scale)
    };
    Ok(Rational(value))
}

/// Accepts `p`, `-p` and `p/q` with decimal integers; the sign may only
/// appear on the numerator.
impl FromStr for Rational {
    type Err = ParseRationalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t.is_empty() {
            return Err(ParseRationalError::Empty);
        }
        match t.split_once('/') {
            None => Ok(Rational(BigRational::from_integer(parse_int(t, t)?))),
            Some((p, q)) => {
                if q.starts_with('-') {
                    return Err(ParseRationalError::Invalid(t.to_string()));
                }
                let numer = parse_int(p, t)?;
                let denom = parse_int(q, t)?;
                if denom.is_zero() {
                    return Err(ParseRationalError::ZeroDenominator(t.to_string()));
                }
                Ok(Rational(BigRational::new(numer, denom)))
            }
        }
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = if self.0.denom().is_one() {
            self.0.numer().to_string()
        } else {
            format!("{}/{}", self.0.numer(), self.0.denom())
        };
        f.pad(&s)
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl From<i64> for Rational {
    fn from(v: i64) -> Self {
        Rational::from_integer(v)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl<'a> $trait<&'a Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
// Panics on a zero divisor, like integer division. Use `checked_div` or
// `rational_arith` for a fallible variant.
forward_binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn rational_arith(a: &Rational, b: &Rational, op: ArithOp) -> Result<Rational> {
    Ok(match op {
        ArithOp::Add => a + b,
        ArithOp::Sub => a - b,
        ArithOp::Mul => a * b,
        ArithOp::Div => a.checked_div(b)?,
    })
}

/// Field operations needed by the elimination engine, implemented for exact
/// rationals and for `f64`.
pub trait Scalar: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    /// True when arithmetic never rounds.
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn from_rational(r: &Rational) -> Self;

    fn is_exact_zero(&self) -> bool;
    /// `|self|` as a float, used by thresholds and pivot selection reports.
    fn magnitude(&self) -> f64;
    fn cmp_magnitude(&self, other: &Self) -> Ordering;

    fn add_ref(&self, rhs: &Self) -> Self;
    fn sub_ref(&self, rhs: &Self) -> Self;
    fn mul_ref(&self, rhs: &Self) -> Self;
    /// Callers guarantee a nonzero divisor.
    fn div_ref(&self, rhs: &Self) -> Self;
    fn neg_ref(&self) -> Self;

    /// `self -= factor * other`
    fn sub_mul_assign(&mut self, factor: &Self, other: &Self) {
        *self = self.sub_ref(&factor.mul_ref(other));
    }

    /// Lossless text form used by structured output.
    fn to_structured(&self) -> String;
    fn from_structured(s: &str) -> Option<Self>;
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn zero() -> Self {
        Rational::zero()
    }
    fn one() -> Self {
        Rational::one()
    }
    fn from_i64(v: i64) -> Self {
        Rational::from_integer(v)
    }
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn is_exact_zero(&self) -> bool {
        self.is_zero()
    }
    fn magnitude(&self) -> f64 {
        self.to_f64().abs()
    }
    fn cmp_magnitude(&self, other: &Self) -> Ordering {
        self.0.abs().cmp(&other.0.abs())
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn div_ref(&self, rhs: &Self) -> Self {
        self / rhs
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn sub_mul_assign(&mut self, factor: &Self, other: &Self) {
        self.0 -= &factor.0 * &other.0;
    }
    fn to_structured(&self) -> String {
        self.to_string()
    }
    fn from_structured(s: &str) -> Option<Self> {
        s.parse().ok()
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn from_rational(r: &Rational) -> Self {
        r.to_f64()
    }
    fn is_exact_zero(&self) -> bool {
        *self == 0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
    fn cmp_magnitude(&self, other: &Self) -> Ordering {
        self.abs().total_cmp(&other.abs())
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn div_ref(&self, rhs: &Self) -> Self {
        self / rhs
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn sub_mul_assign(&mut self, factor: &Self, other: &Self) {
        *self -= factor * other;
    }
    /// 17 significant digits, enough to round-trip any `f64`. Negative zero prints as zero.
    fn to_structured(&self) -> String {
        let v = if *self == 0.0 { 0.0 } else { *self };
        format!("{v:.16e}")
    }
    fn from_structured(s: &str) -> Option<Self> {
        s.parse().ok()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZeroMode {
    Exact,
    Thresholded,
}

/// Decides whether a scalar counts as zero.
///
/// In thresholded mode an entry `e` of a column segment `s` is zero iff
/// `|e| <= tol_abs + tol_rel * max_i |s_i|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroPolicy {
    pub mode: ZeroMode,
    pub tol_abs: f64,
    pub tol_rel: f64,
}

impl ZeroPolicy {
    pub const DEFAULT_TOL_ABS: f64 = 0.0;
    pub const DEFAULT_TOL_REL: f64 = 1e-10;

    pub const fn exact() -> Self {
        ZeroPolicy {
            mode: ZeroMode::Exact,
            tol_abs: 0.0,
            tol_rel: 0.0,
        }
    }

    pub fn thresholded(tol_abs: f64, tol_rel: f64) -> Result<Self> {
        for (name, v) in [("tol_abs", tol_abs), ("tol_rel", tol_rel)] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidTolerance(format!(
                    "{name} must be finite and nonnegative, got {v}"
                )));
            }
        }
        Ok(ZeroPolicy {
            mode: ZeroMode::Thresholded,
            tol_abs,
            tol_rel,
        })
    }

    pub const fn float_default() -> Self {
        ZeroPolicy {
            mode: ZeroMode::Thresholded,
            tol_abs: Self::DEFAULT_TOL_ABS,
            tol_rel: Self::DEFAULT_TOL_REL,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.mode == ZeroMode::Exact
    }

    /// Zero test against the largest magnitude of `context`. Exact mode
    /// ignores the context.
    pub fn is_zero<T: Scalar>(&self, e: &T, context: &[T]) -> bool {
        match self.mode {
            ZeroMode::Exact => e.is_exact_zero(),
            ZeroMode::Thresholded => {
                let scale = context.iter().map(Scalar::magnitude).fold(0.0, f64::max);
                self.is_zero_scaled(e, scale)
            }
        }
    }

    /// Zero test with a precomputed context scale `max_i |s_i|`.
    pub fn is_zero_scaled<T: Scalar>(&self, e: &T, scale: f64) -> bool {
        match self.mode {
            ZeroMode::Exact => e.is_exact_zero(),
            ZeroMode::Thresholded => {
                e.is_exact_zero() || e.magnitude() <= self.tol_abs + self.tol_rel * scale
            }
        }
    }
}

impl Default for ZeroPolicy {
    fn default() -> Self {
        ZeroPolicy::exact()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn arith_examples() {
        assert_eq!(
            rational_arith(&q("1/3"), &q("1/6"), ArithOp::Add).unwrap(),
            q("1/2")
        );
        assert_eq!(
            rational_arith(&q("7"), &q("-2"), ArithOp::Mul).unwrap(),
            q("-14")
        );
        let z = rational_arith(&q("0"), &q("5/3"), ArithOp::Div).unwrap();
        assert_eq!(z, Rational::zero());
        assert_eq!(z.denom(), &BigInt::from(1));
        assert_eq!(
            rational_arith(&q("1"), &q("0"), ArithOp::Div),
            Err(Error::DivisionByZero)
        );
    }

    #[test]
    fn canonical_form() {
        assert_eq!(q("6/4").to_string(), "3/2");
        assert_eq!(q("-6/4").to_string(), "-3/2");
        assert_eq!(q("0/7").to_string(), "0");
        assert_eq!(q("0/7").denom(), &BigInt::from(1));
        assert_eq!(Rational::new(3, -6).unwrap().to_string(), "-1/2");
    }

    #[test]
    fn parse_grammar() {
        assert!("".parse::<Rational>().is_err());
        assert!("1/0".parse::<Rational>().is_err());
        assert!("1/-2".parse::<Rational>().is_err());
        assert!("+3".parse::<Rational>().is_err());
        assert!("1.5".parse::<Rational>().is_err());
        assert!("a/2".parse::<Rational>().is_err());
        assert_eq!(q(" 12 ").to_string(), "12");
        assert_eq!(
            q("123456789012345678901234567890").to_string(),
            "123456789012345678901234567890"
        );
    }

    #[test]
    fn decimal_literals() {
        assert_eq!(Rational::parse_literal("1.25").unwrap(), (q("5/4"), true));
        assert_eq!(
            Rational::parse_literal("-3e-2").unwrap(),
            (q("-3/100"), true)
        );
        assert_eq!(Rational::parse_literal(".5").unwrap(), (q("1/2"), true));
        assert_eq!(Rational::parse_literal("2E3").unwrap(), (q("2000"), true));
        assert_eq!(Rational::parse_literal("7/3").unwrap(), (q("7/3"), false));
        assert!(Rational::parse_literal("1e99999").is_err());
        assert!(Rational::parse_literal("1.2.3").is_err());
        assert!(Rational::parse_literal("e5").is_err());
        assert!(Rational::parse_literal("nan").is_err());
    }

    #[test]
    fn terminating_decimal() {
        assert_eq!(q("5/4").to_terminating_decimal().unwrap(), "1.25");
        assert_eq!(q("-3/100").to_terminating_decimal().unwrap(), "-0.03");
        assert_eq!(q("7").to_terminating_decimal().unwrap(), "7");
        assert_eq!(q("1/3").to_terminating_decimal(), None);
    }

    #[test]
    fn is_zero_examples() {
        let exact = ZeroPolicy::exact();
        assert!(exact.is_zero(&Rational::zero(), &[]));
        let tiny =
            Rational::from_big(BigInt::from(1), num_traits::pow(BigInt::from(10), 40)).unwrap();
        assert!(!exact.is_zero(&tiny, &[]));

        let thr = ZeroPolicy::thresholded(0.0, 1e-10).unwrap();
        assert!(thr.is_zero(&1e-14, &[1.0, 1e-14]));
        assert!(!thr.is_zero(&1e-9, &[1.0]));
        // Scale invariance.
        assert!(thr.is_zero(&1e-4, &[1e10]));
        assert!(ZeroPolicy::thresholded(-1.0, 0.0).is_err());
        assert!(ZeroPolicy::thresholded(0.0, f64::NAN).is_err());
    }

    #[test]
    fn float_structured_round_trip() {
        for v in [0.1, -1.0 / 3.0, 1e-300, 6.02214076e23, 0.0] {
            let s = v.to_structured();
            assert_eq!(f64::from_structured(&s).unwrap(), v);
        }
    }

    fn arb_rational() -> impl Strategy<Value = Rational> {
        (-1_000_000i64..1_000_000, 1i64..1_000_000).prop_map(|(p, q)| Rational::new(p, q).unwrap())
    }

    proptest! {
        #[test]
        fn field_laws(a in arb_rational(), b in arb_rational(), c in arb_rational()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        }

        #[test]
        fn canonical_after_ops(a in arb_rational(), b in arb_rational()) {
            for r in [&a + &b, &a - &b, &a * &b] {
                prop_assert!(r.denom() > &BigInt::from(0));
                prop_assert_eq!(num_integer::Integer::gcd(r.numer(), r.denom()) == BigInt::from(1) || r.is_zero(), true);
                if r.is_zero() {
                    prop_assert_eq!(r.denom(), &BigInt::from(1));
                }
            }
        }

        #[test]
        fn parse_format_round_trip(a in arb_rational()) {
            prop_assert_eq!(a.to_string().parse::<Rational>().unwrap(), a);
        }

        #[test]
        fn exact_zero_iff_numerator_zero(a in arb_rational()) {
            prop_assert_eq!(ZeroPolicy::exact().is_zero(&a, &[]), a.numer() == &BigInt::from(0));
        }
    }
}
