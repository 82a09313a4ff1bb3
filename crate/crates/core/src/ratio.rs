//! Exact non-negative rationals.
//!
//! Every distance and every ball radius in this crate is a [`Ratio`]. There is
//! no floating point anywhere: order-theoretic statements such as
//! `d(x, y) <= r - s` are decided exactly.

use std::fmt;
use std::ops::{Add, Mul};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::Ratio as NumRatio;
use num_traits::{One, ToPrimitive, Zero};

use crate::words::ExtNat;

/// Signed difference of two ratios, used where `r - s` may be negative.
pub type Gap = NumRatio<BigInt>;

/// An exact non-negative rational number, always stored reduced.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ratio(NumRatio<BigUint>);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational literal `{0}`")]
pub struct RatioParseError(pub String);

impl Ratio {
    pub fn new(numer: u64, denom: u64) -> Self {
        assert!(denom != 0, "zero denominator");
        Ratio(NumRatio::new(BigUint::from(numer), BigUint::from(denom)))
    }

    pub fn from_big(numer: BigUint, denom: BigUint) -> Self {
        assert!(!denom.is_zero(), "zero denominator");
        Ratio(NumRatio::new(numer, denom))
    }

    pub fn zero() -> Self {
        Ratio(NumRatio::zero())
    }

    pub fn one() -> Self {
        Ratio(NumRatio::one())
    }

    pub fn integer(n: u64) -> Self {
        Ratio(NumRatio::from_integer(BigUint::from(n)))
    }

    /// `2^-n`.
    pub fn pow2_neg(n: u64) -> Self {
        Ratio(NumRatio::new_raw(BigUint::one(), BigUint::one() << n))
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

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    /// `self - other`, or `None` when the result would be negative.
    pub fn checked_sub(&self, other: &Ratio) -> Option<Ratio> {
        if self < other {
            None
        } else {
            Some(Ratio(&self.0 - &other.0))
        }
    }

    /// `self - other`, clamped at zero.
    pub fn saturating_sub(&self, other: &Ratio) -> Ratio {
        self.checked_sub(other).unwrap_or_else(Ratio::zero)
    }

    /// `self - other` as a signed rational.
    pub fn signed_sub(&self, other: &Ratio) -> Gap {
        self.to_signed() - other.to_signed()
    }

    pub fn to_signed(&self) -> Gap {
        Gap::new(
            BigInt::from_biguint(Sign::Plus, self.numer().clone()),
            BigInt::from_biguint(Sign::Plus, self.denom().clone()),
        )
    }

    pub fn half(&self) -> Ratio {
        Ratio(&self.0 / NumRatio::from_integer(BigUint::from(2u32)))
    }

    /// The exponent `k` when the value is exactly `2^-k`.
    pub fn as_pow2_neg(&self) -> Option<u64> {
        if !self.numer().is_one() {
            return None;
        }
        let d = self.denom();
        let k = d.bits() - 1;
        (*d == BigUint::one() << k).then_some(k)
    }

    /// The exponents `(a, b)` with `a < b` when the value is exactly `2^-a - 2^-b`.
    pub fn as_pow2_difference(&self) -> Option<(u64, u64)> {
        if self.is_zero() {
            return None;
        }
        let b = self.as_dyadic_exponent()?;
        // numerator must be 2^j - 1, giving 2^-(b-j) - 2^-b
        let n_plus_one = self.numer() + BigUint::one();
        let j = n_plus_one.bits() - 1;
        if n_plus_one != BigUint::one() << j || j == 0 {
            return None;
        }
        Some((b - j, b))
    }

    /// `k` such that the denominator is `2^k`, when the value is dyadic.
    pub fn as_dyadic_exponent(&self) -> Option<u64> {
        let d = self.denom();
        let k = d.bits() - 1;
        (*d == BigUint::one() << k).then_some(k)
    }

    pub fn is_dyadic(&self) -> bool {
        self.as_dyadic_exponent().is_some()
    }

    /// Smallest `n >= from` with `coeff * 2^-n <= bound`, or `None` when `bound` is zero.
    pub fn first_power_below(coeff: &Ratio, bound: &Ratio, from: u64) -> Option<u64> {
        if bound.is_zero() {
            return None;
        }
        // coeff * 2^-n <= bound  <=>  coeff <= bound * 2^n
        let mut n = from;
        let mut scaled = bound * &Ratio(NumRatio::from_integer(BigUint::one() << from));
        let two = Ratio::integer(2);
        while *coeff > scaled {
            scaled = &scaled * &two;
            n += 1;
        }
        Some(n)
    }

    pub fn to_f64_lossy(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

/// `2^-e` with the convention `2^-inf = 0`.
pub fn pow2_neg(e: ExtNat) -> Ratio {
    match e {
        ExtNat::Nat(n) => Ratio::pow2_neg(n),
        ExtNat::Infinity => Ratio::zero(),
    }
}

impl<'a> Add<&'a Ratio> for &'a Ratio {
    type Output = Ratio;
    fn add(self, rhs: &'a Ratio) -> Ratio {
        Ratio(&self.0 + &rhs.0)
    }
}

impl Add for Ratio {
    type Output = Ratio;
    fn add(self, rhs: Ratio) -> Ratio {
        Ratio(self.0 + rhs.0)
    }
}

impl<'a> Mul<&'a Ratio> for &'a Ratio {
    type Output = Ratio;
    fn mul(self, rhs: &'a Ratio) -> Ratio {
        Ratio(&self.0 * &rhs.0)
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom().is_one() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl fmt::Debug for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Ratio {
    type Err = RatioParseError;

    /// Accepts `p`, `p/q`, and `2^-k`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || RatioParseError(s.to_string());
        let t = s.trim();
        if let Some(k) = t.strip_prefix("2^-") {
            let k: u64 = k.parse().map_err(|_| err())?;
            return Ok(Ratio::pow2_neg(k));
        }
        let parse_uint = |x: &str| -> Result<BigUint, RatioParseError> {
            if x.is_empty() || !x.bytes().all(|b| b.is_ascii_digit()) {
                return Err(err());
            }
            x.parse().map_err(|_| err())
        };
        match t.split_once('/') {
            None => Ok(Ratio(NumRatio::from_integer(parse_uint(t)?))),
            Some((p, q)) => {
                let q = parse_uint(q)?;
                if q.is_zero() {
                    return Err(err());
                }
                Ok(Ratio(NumRatio::new(parse_uint(p)?, q)))
            }
        }
    }
}

/// Formats a signed gap as `p/q`, `-p/q`, or an integer.
pub fn format_gap(g: &Gap) -> String {
    let (n, d) = (g.numer(), g.denom());
    if d.is_one() {
        n.to_string()
    } else {
        format!("{n}/{d}")
    }
}

pub(crate) fn lcm_u64(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}
