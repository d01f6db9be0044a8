use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use super::ScalarRing;

/// Arbitrary-precision rational number, always kept in lowest terms with a
/// positive denominator.
///
/// Values whose numerator and denominator fit in `i128` are stored inline
/// and operated on with checked arithmetic; anything larger is promoted to a
/// `BigRational`. Results are demoted again when they fit, so every value has
/// exactly one representation.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Rational(Repr);

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    Small(Ratio<i128>),
    Big(BigRational),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseScalarError {
    #[error("empty scalar")]
    Empty,
    #[error("invalid scalar `{0}`: expected an integer, a decimal, or p/q")]
    Invalid(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

fn small_to_big(r: &Ratio<i128>) -> BigRational {
    BigRational::new_raw(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

impl Rational {
    pub fn new(numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "zero denominator");
        Rational(Repr::Small(Ratio::new(numer.into(), denom.into())))
    }

    pub fn from_integer(n: i64) -> Self {
        Rational(Repr::Small(Ratio::from_integer(n.into())))
    }

    fn from_big(big: BigRational) -> Self {
        match (big.numer().to_i128(), big.denom().to_i128()) {
            (Some(n), Some(d)) if n != i128::MIN => Rational(Repr::Small(Ratio::new_raw(n, d))),
            _ => Rational(Repr::Big(big)),
        }
    }

    fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small(r) => small_to_big(r),
            Repr::Big(b) => b.clone(),
        }
    }

    fn binary(
        self,
        rhs: Rational,
        small: impl FnOnce(&Ratio<i128>, &Ratio<i128>) -> Option<Ratio<i128>>,
        big: impl FnOnce(BigRational, BigRational) -> BigRational,
    ) -> Rational {
        if let (Repr::Small(a), Repr::Small(b)) = (&self.0, &rhs.0) {
            if let Some(r) = small(a, b) {
                if *r.numer() != i128::MIN {
                    return Rational(Repr::Small(r));
                }
            }
        }
        Rational::from_big(big(self.to_big(), rhs.to_big()))
    }

    pub fn numer(&self) -> BigInt {
        match &self.0 {
            Repr::Small(r) => BigInt::from(*r.numer()),
            Repr::Big(b) => b.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match &self.0 {
            Repr::Small(r) => BigInt::from(*r.denom()),
            Repr::Big(b) => b.denom().clone(),
        }
    }

    pub fn is_negative(&self) -> bool {
        match &self.0 {
            Repr::Small(r) => *r.numer() < 0,
            Repr::Big(b) => b.is_negative(),
        }
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    pub fn is_integer(&self) -> bool {
        match &self.0 {
            Repr::Small(r) => r.is_integer(),
            Repr::Big(b) => b.is_integer(),
        }
    }

    /// Nearest double.
    pub fn to_f64(&self) -> f64 {
        self.to_big().to_f64().unwrap_or(f64::NAN)
    }

    pub fn from_f64(value: f64) -> Option<Self> {
        BigRational::from_float(value).map(Rational::from_big)
    }
}

impl Default for Rational {
    fn default() -> Self {
        Rational::from_integer(0)
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small(a), Repr::Small(b)) => a.cmp(b),
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl From<BigRational> for Rational {
    fn from(value: BigRational) -> Self {
        Rational::from_big(value)
    }
}

impl From<i64> for Rational {
    fn from(value: i64) -> Self {
        Rational::from_integer(value)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(r) if *r.denom() == 1 => write!(f, "{}", r.numer()),
            Repr::Small(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Repr::Big(b) if b.is_integer() => write!(f, "{}", b.numer()),
            Repr::Big(b) => write!(f, "{}/{}", b.numer(), b.denom()),
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn parse_int(s: &str) -> Option<BigInt> {
    let digits = s.strip_prefix(['+', '-']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|c| c.is_ascii_digit()) {
        return None;
    }
    s.trim_start_matches('+').parse().ok()
}

impl FromStr for Rational {
    type Err = ParseScalarError;

    /// Accepts `p`, `p/q`, and plain decimals such as `-1.25`.
    fn from_str(raw: &str) -> Result<Self, Self::Err> {
        let s = raw.trim();
        if s.is_empty() {
            return Err(ParseScalarError::Empty);
        }
        let invalid = || ParseScalarError::Invalid(s.to_string());

        if let Some((n, d)) = s.split_once('/') {
            let numer = parse_int(n.trim()).ok_or_else(invalid)?;
            let denom = parse_int(d.trim()).ok_or_else(invalid)?;
            if denom.is_zero() {
                return Err(ParseScalarError::ZeroDenominator(s.to_string()));
            }
            return Ok(Rational::from_big(BigRational::new(numer, denom)));
        }

        if let Some((whole, frac)) = s.split_once('.') {
            if frac.is_empty() || !frac.bytes().all(|c| c.is_ascii_digit()) {
                return Err(invalid());
            }
            let negative = whole.starts_with('-');
            let whole_digits = whole.trim_start_matches(['+', '-']);
            if whole.len() - whole_digits.len() > 1
                || whole_digits.is_empty()
                || !whole_digits.bytes().all(|c| c.is_ascii_digit())
            {
                return Err(invalid());
            }
            let mut numer: BigInt = format!("{whole_digits}{frac}").parse().map_err(|_| invalid())?;
            if negative {
                numer = -numer;
            }
            let denom = num_traits::pow(BigInt::from(10), frac.len());
            return Ok(Rational::from_big(BigRational::new(numer, denom)));
        }

        parse_int(s)
            .map(|n| Rational::from_big(BigRational::from_integer(n)))
            .ok_or_else(invalid)
    }
}

impl Add for Rational {
    type Output = Rational;
    fn add(self, rhs: Rational) -> Rational {
        self.binary(rhs, |a, b| a.checked_add(b), |a, b| a + b)
    }
}

impl Sub for Rational {
    type Output = Rational;
    fn sub(self, rhs: Rational) -> Rational {
        self.binary(rhs, |a, b| a.checked_sub(b), |a, b| a - b)
    }
}

impl Mul for Rational {
    type Output = Rational;
    fn mul(self, rhs: Rational) -> Rational {
        self.binary(rhs, |a, b| a.checked_mul(b), |a, b| a * b)
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        match self.0 {
            // numerators are never i128::MIN, so negation cannot overflow
            Repr::Small(r) => Rational(Repr::Small(Ratio::new_raw(-*r.numer(), *r.denom()))),
            Repr::Big(b) => Rational::from_big(-b),
        }
    }
}

impl ScalarRing for Rational {
    fn zero() -> Self {
        Rational::from_integer(0)
    }

    fn one() -> Self {
        Rational::from_integer(1)
    }

    fn scale_pow2(self, k: i32) -> Self {
        let shift = k.unsigned_abs();
        if shift < 126 {
            let factor = Ratio::from_integer(1i128 << shift);
            let scaled = if k >= 0 {
                self.binary(Rational(Repr::Small(factor)), |a, f| a.checked_mul(f), |a, f| a * f)
            } else {
                self.binary(Rational(Repr::Small(factor)), |a, f| a.checked_div(f), |a, f| a / f)
            };
            return scaled;
        }
        let factor = BigRational::from_integer(BigInt::one() << shift);
        let big = self.to_big();
        Rational::from_big(if k >= 0 { big * factor } else { big / factor })
    }

    fn is_zero(&self) -> bool {
        match &self.0 {
            Repr::Small(r) => r.is_zero(),
            Repr::Big(b) => b.is_zero(),
        }
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
    fn parses_integers_fractions_and_decimals() {
        assert_eq!(q("-2"), Rational::from_integer(-2));
        assert_eq!(q("+7"), Rational::from_integer(7));
        assert_eq!(q("6/-4"), Rational::new(-3, 2));
        assert_eq!(q("1.5"), Rational::new(3, 2));
        assert_eq!(q("-0.25"), Rational::new(-1, 4));
        assert_eq!(q(" 3/7 "), Rational::new(3, 7));
    }

    #[test]
    fn rejects_malformed_input() {
        assert_eq!("".parse::<Rational>(), Err(ParseScalarError::Empty));
        assert!(matches!("1/0".parse::<Rational>(), Err(ParseScalarError::ZeroDenominator(_))));
        for bad in ["abc", "1.", ".5", "1/2/3", "--1", "1e3", "1.2.3", "-"] {
            assert!(bad.parse::<Rational>().is_err(), "{bad} should not parse");
        }
    }

    #[test]
    fn display_is_canonical() {
        assert_eq!(q("4/6").to_string(), "2/3");
        assert_eq!(q("-3/-7").to_string(), "3/7");
        assert_eq!(q("10/5").to_string(), "2");
        assert_eq!(q("2.50").to_string(), "5/2");
        assert_eq!(q("-0").to_string(), "0");
    }

    #[test]
    fn scale_pow2_matches_multiplication() {
        let x = Rational::new(3, 5);
        assert_eq!(x.clone().scale_pow2(3), x.clone() * Rational::from_integer(8));
        assert_eq!(x.clone().scale_pow2(-2), x * Rational::new(1, 4));
    }

    #[test]
    fn overflow_promotes_and_demotes() {
        let big = Rational::from_integer(i64::MAX).scale_pow2(80);
        let back = big.clone().scale_pow2(-80);
        assert_eq!(back, Rational::from_integer(i64::MAX));
        let sq = big.clone() * big.clone();
        assert_eq!((sq.clone() - sq.clone()), Rational::zero());
        assert_eq!((sq.clone() + Rational::one()) - sq, Rational::one());
        assert!(big > Rational::from_integer(i64::MAX));
        assert!(-big.clone() < Rational::from_integer(i64::MIN));
        assert_eq!(big.to_string(), format!("{}", BigInt::from(i64::MAX) << 80));
        let tiny = Rational::new(1, 3).scale_pow2(-200);
        assert_eq!(tiny.clone().scale_pow2(200), Rational::new(1, 3));
        assert!(!tiny.is_negative() && !tiny.is_zero());
    }

    fn arb_rational() -> impl Strategy<Value = Rational> {
        (-10_000i64..10_000, 1i64..10_000).prop_map(|(n, d)| Rational::new(n, d))
    }

    proptest! {
        #[test]
        fn add_then_sub_is_exact(a in arb_rational(), c in arb_rational()) {
            prop_assert_eq!((a.clone() + c.clone()) - c, a);
        }

        #[test]
        fn ring_laws(a in arb_rational(), b in arb_rational(), c in arb_rational()) {
            prop_assert_eq!(a.clone() + b.clone(), b.clone() + a.clone());
            prop_assert_eq!((a.clone() + b.clone()) + c.clone(), a.clone() + (b.clone() + c.clone()));
            prop_assert_eq!(a.clone() * (b.clone() + c.clone()), a.clone() * b.clone() + a * c);
        }

        #[test]
        fn small_and_big_paths_agree(a in arb_rational(), b in arb_rational(), k in 60i32..140) {
            // push one operand through the big representation and back
            let a_big = a.clone().scale_pow2(k);
            prop_assert_eq!((a_big.clone() * b.clone()).scale_pow2(-k), a.clone() * b.clone());
            prop_assert_eq!((a_big + b.clone().scale_pow2(k)).scale_pow2(-k), a + b);
        }

        #[test]
        fn display_parse_round_trip(a in arb_rational()) {
            let back: Rational = a.to_string().parse().unwrap();
            prop_assert_eq!(back.to_string(), a.to_string());
            prop_assert_eq!(back, a);
        }
    }
}
