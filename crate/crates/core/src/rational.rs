//! Exact nonnegative rationals backed by `num-rational`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul};
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{Budget, Error, Result};

/// Arbitrary-precision natural number.
pub type BigNatural = BigUint;

/// A nonnegative rational number, always stored in lowest terms.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExactRational(Ratio<BigUint>);

impl ExactRational {
    pub fn new(numer: impl Into<BigUint>, denom: impl Into<BigUint>) -> Result<Self> {
        let denom = denom.into();
        if denom.is_zero() {
            return Err(Error::domain("zero denominator"));
        }
        Ok(ExactRational(Ratio::new(numer.into(), denom)))
    }

    /// Panicking constructor for literals; `denom` must be nonzero.
    pub fn frac(numer: u64, denom: u64) -> Self {
        Self::new(numer, denom).expect("nonzero denominator")
    }

    pub fn from_integer(n: impl Into<BigUint>) -> Self {
        ExactRational(Ratio::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        ExactRational(Ratio::zero())
    }

    pub fn one() -> Self {
        ExactRational(Ratio::one())
    }

    pub fn numer(&self) -> &BigUint {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigUint {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn ceil(&self) -> BigUint {
        let (q, r) = self.numer().div_rem(self.denom());
        if r.is_zero() {
            q
        } else {
            q + 1u32
        }
    }

    pub fn floor(&self) -> BigUint {
        self.numer() / self.denom()
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::domain("reciprocal of zero"));
        }
        Ok(ExactRational(self.0.recip()))
    }

    /// `self - other`, or `None` when the result would be negative.
    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        if self < other {
            None
        } else {
            Some(ExactRational(&self.0 - &other.0))
        }
    }

    /// Largest of the numerator and denominator bit lengths.
    pub fn bits(&self) -> u64 {
        self.numer().bits().max(self.denom().bits())
    }

    /// `self^exp`, refusing to build a value wider than the bit budget.
    pub fn pow_checked(&self, exp: &BigUint, budget: &Budget) -> Result<Self> {
        if exp.is_zero() {
            return Ok(Self::one());
        }
        if self.is_zero() {
            return Ok(Self::zero());
        }
        let base_bits = self.bits();
        // Exact powers of 1 never grow.
        if base_bits <= 1 && self.numer() == self.denom() {
            return Ok(Self::one());
        }
        let e = exp
            .to_u64()
            .filter(|e| e.saturating_mul(base_bits.saturating_sub(1).max(1)) <= budget.max_bits)
            .ok_or_else(|| {
                Error::budget(format!(
                    "power with exponent {exp} of a {base_bits}-bit rational exceeds {} bits",
                    budget.max_bits
                ))
            })?;
        let e = u32::try_from(e).map_err(|_| Error::budget("exponent does not fit in u32"))?;
        Ok(ExactRational(Ratio::new_raw(
            self.numer().pow(e),
            self.denom().pow(e),
        )))
    }

    /// `self * 2^shift` for a possibly negative shift.
    pub fn mul_pow2(&self, shift: i64, budget: &Budget) -> Result<Self> {
        let width = self.bits().saturating_add(shift.unsigned_abs());
        if width > budget.max_bits {
            return Err(Error::budget(format!(
                "scaling by 2^{shift} exceeds {} bits",
                budget.max_bits
            )));
        }
        let s = shift.unsigned_abs() as usize;
        let (n, d) = if shift >= 0 {
            (self.numer() << s, self.denom().clone())
        } else {
            (self.numer().clone(), self.denom() << s)
        };
        Ok(ExactRational(Ratio::new(n, d)))
    }

    /// Canonical `p/q` rendering used in files (integers render as `p/1`).
    pub fn to_ratio_string(&self) -> String {
        format!("{}/{}", self.numer(), self.denom())
    }
}

impl fmt::Display for ExactRational {
    /// Integers print as plain decimals, everything else as `p/q`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl fmt::Debug for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

impl FromStr for ExactRational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = |what: &str| Error::parse(format!("rational {s:?}"), what.to_string());
        let parse_nat = |t: &str| -> Result<BigUint> {
            if t.is_empty() || !t.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad("expected a nonnegative integer or p/q"));
            }
            t.parse::<BigUint>().map_err(|_| bad("invalid digits"))
        };
        match s.split_once('/') {
            Some((p, q)) => {
                let q = parse_nat(q)?;
                if q.is_zero() {
                    return Err(bad("zero denominator"));
                }
                Ok(ExactRational(Ratio::new(parse_nat(p)?, q)))
            }
            None => Ok(Self::from_integer(parse_nat(s)?)),
        }
    }
}

impl PartialOrd for ExactRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExactRational {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.cmp(&other.0)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl<'a> $trait<&'a ExactRational> for &'a ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: &'a ExactRational) -> ExactRational {
                ExactRational($trait::$method(&self.0, &rhs.0))
            }
        }

        impl $trait for ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: ExactRational) -> ExactRational {
                ExactRational($trait::$method(self.0, rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl From<u64> for ExactRational {
    fn from(n: u64) -> Self {
        Self::from_integer(n)
    }
}

impl From<BigUint> for ExactRational {
    fn from(n: BigUint) -> Self {
        Self::from_integer(n)
    }
}

impl Serialize for ExactRational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_ratio_string())
    }
}

impl<'de> Deserialize<'de> for ExactRational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Serializes a big natural as a decimal string.
pub fn serialize_decimal<S: Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// `ceil(log2(v))`, with `0` for `v <= 1`.
pub fn ceil_log2(v: &BigUint) -> u64 {
    if v <= &BigUint::one() {
        0
    } else {
        (v - 1u32).bits()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_render() {
        let r: ExactRational = "6/8".parse().unwrap();
        assert_eq!(r.to_ratio_string(), "3/4");
        assert_eq!(r.to_string(), "3/4");
        let n: ExactRational = "88".parse().unwrap();
        assert_eq!(n.to_string(), "88");
        assert_eq!(n.to_ratio_string(), "88/1");
    }

    #[test]
    fn malformed_rationals_are_rejected() {
        for s in ["3/0", "", "-1/2", "1.5", "a/b", "1/", "/2"] {
            assert!(
                matches!(s.parse::<ExactRational>(), Err(Error::Parse { .. })),
                "{s}"
            );
        }
    }

    #[test]
    fn ceil_and_floor() {
        let r = ExactRational::frac(16, 3);
        assert_eq!(r.ceil(), BigUint::from(6u32));
        assert_eq!(r.floor(), BigUint::from(5u32));
        assert_eq!(ExactRational::frac(6, 3).ceil(), BigUint::from(2u32));
    }

    #[test]
    fn checked_sub_refuses_negative() {
        let a = ExactRational::frac(1, 4);
        let b = ExactRational::frac(1, 2);
        assert!(a.checked_sub(&b).is_none());
        assert_eq!(b.checked_sub(&a).unwrap(), a);
    }

    #[test]
    fn pow_respects_budget() {
        let half = ExactRational::frac(1, 2);
        let b = Budget::default().with_bits(64);
        assert_eq!(
            half.pow_checked(&BigUint::from(10u32), &b).unwrap(),
            ExactRational::frac(1, 1024)
        );
        assert!(matches!(
            half.pow_checked(&BigUint::from(100u32), &b),
            Err(Error::BudgetExceeded(_))
        ));
        assert_eq!(
            ExactRational::one()
                .pow_checked(&BigUint::from(u64::MAX), &b)
                .unwrap(),
            ExactRational::one()
        );
    }

    #[test]
    fn ceil_log2_values() {
        let c = |v: u32| ceil_log2(&BigUint::from(v));
        assert_eq!(c(0), 0);
        assert_eq!(c(1), 0);
        assert_eq!(c(2), 1);
        assert_eq!(c(3), 2);
        assert_eq!(c(1024), 10);
        assert_eq!(c(1025), 11);
    }
}
