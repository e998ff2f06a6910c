//! Fixed-point decimal reals used wherever a cost is irrational.
//!
//! A [`Real`] stores `mantissa / 10^digits`. All operations truncate toward
//! zero at the last digit, so results are accurate to a few units in the last
//! place; callers that need `n` correct digits work with `n + GUARD_DIGITS`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Extra digits carried internally by compound evaluations.
pub const GUARD_DIGITS: u32 = 10;

fn pow10(digits: u32) -> BigInt {
    BigInt::from(10u32).pow(digits)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Real {
    mantissa: BigInt,
    digits: u32,
}

impl Real {
    pub fn zero(digits: u32) -> Self {
        Self { mantissa: BigInt::zero(), digits }
    }

    pub fn from_int(value: impl Into<BigInt>, digits: u32) -> Self {
        Self { mantissa: value.into() * pow10(digits), digits }
    }

    /// Truncates `value` to `digits` fractional digits.
    pub fn from_ratio(value: &BigRational, digits: u32) -> Self {
        let scaled = value.numer() * pow10(digits);
        Self { mantissa: scaled / value.denom(), digits }
    }

    /// `floor(a^p * 10^digits)`, computed exactly with integer roots.
    pub fn int_pow(base: &BigUint, exponent: Ratio<u64>, digits: u32) -> Self {
        let (num, den) = (*exponent.numer(), *exponent.denom());
        let num = u32::try_from(num).expect("exponent numerator fits in u32");
        let den = u32::try_from(den).expect("exponent denominator fits in u32");
        let powered = base.pow(num) * BigUint::from(10u32).pow(digits * den);
        let root = powered.nth_root(den);
        Self { mantissa: BigInt::from_biguint(Sign::Plus, root), digits }
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mantissa.is_negative()
    }

    /// Re-expresses the value with a different number of digits (truncating).
    pub fn with_digits(&self, digits: u32) -> Self {
        let mantissa = match digits.cmp(&self.digits) {
            Ordering::Equal => self.mantissa.clone(),
            Ordering::Greater => &self.mantissa * pow10(digits - self.digits),
            Ordering::Less => &self.mantissa / pow10(self.digits - digits),
        };
        Self { mantissa, digits }
    }

    fn aligned(&self, other: &Self) -> (BigInt, BigInt, u32) {
        let digits = self.digits.max(other.digits);
        (self.with_digits(digits).mantissa, other.with_digits(digits).mantissa, digits)
    }

    pub fn add(&self, other: &Self) -> Self {
        let (a, b, digits) = self.aligned(other);
        Self { mantissa: a + b, digits }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let (a, b, digits) = self.aligned(other);
        Self { mantissa: a - b, digits }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (a, b, digits) = self.aligned(other);
        Self { mantissa: a * b / pow10(digits), digits }
    }

    pub fn mul_int(&self, factor: &BigInt) -> Self {
        Self { mantissa: &self.mantissa * factor, digits: self.digits }
    }

    /// # Panics
    /// On division by zero.
    pub fn div(&self, other: &Self) -> Self {
        let (a, b, digits) = self.aligned(other);
        assert!(!b.is_zero(), "division by zero");
        Self { mantissa: a * pow10(digits) / b, digits }
    }

    pub fn abs(&self) -> Self {
        Self { mantissa: self.mantissa.abs(), digits: self.digits }
    }

    /// `self^exponent` for a nonnegative value and a positive rational exponent.
    ///
    /// # Panics
    /// If `self` is negative.
    pub fn pow(&self, exponent: Ratio<u64>) -> Self {
        assert!(!self.is_negative(), "fractional power of a negative value");
        let (num, den) = (*exponent.numer(), *exponent.denom());
        let num = u32::try_from(num).expect("exponent numerator fits in u32");
        let den = u32::try_from(den).expect("exponent denominator fits in u32");
        let digits = self.digits;
        // value^num scaled by 10^(digits * num); the root needs 10^(digits * den).
        let powered = self.mantissa.pow(num);
        let rescaled =
            if den >= num { powered * pow10(digits * (den - num)) } else { powered / pow10(digits * (num - den)) };
        Self { mantissa: rescaled.nth_root(den), digits }
    }

    pub fn floor(&self) -> BigInt {
        self.mantissa.div_floor(&pow10(self.digits))
    }

    pub fn to_ratio(&self) -> BigRational {
        BigRational::new(self.mantissa.clone(), pow10(self.digits))
    }

    pub fn to_f64(&self) -> f64 {
        self.to_ratio().to_f64().unwrap_or(f64::NAN)
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Real {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b, _) = self.aligned(other);
        a.cmp(&b)
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let scale = pow10(self.digits);
        let sign = if self.mantissa.is_negative() { "-" } else { "" };
        let magnitude = self.mantissa.abs();
        let (whole, frac) = magnitude.div_rem(&scale);
        if self.digits == 0 {
            return write!(f, "{sign}{whole}");
        }
        let shown = f.precision().map_or(self.digits, |p| (p as u32).min(self.digits));
        let frac = frac / pow10(self.digits - shown);
        if shown == 0 {
            write!(f, "{sign}{whole}")
        } else {
            write!(f, "{sign}{whole}.{frac:0>width$}", width = shown as usize)
        }
    }
}

/// Largest integer `r >= 0` with `r^p <= value`, i.e. `floor(value^(1/p))`.
pub fn floor_inverse_power(value: &BigRational, p: Ratio<u64>) -> BigInt {
    if !value.is_positive() {
        return BigInt::zero();
    }
    // r^(a/b) <= v  <=>  r^a <= v^b
    let a = u32::try_from(*p.numer()).expect("exponent fits");
    let b = u32::try_from(*p.denom()).expect("exponent fits");
    let target = num_traits::pow::Pow::pow(value, b);
    let fits = |r: &BigInt| BigRational::from_integer(r.pow(a)) <= target;
    let mut hi = BigInt::one();
    while fits(&hi) {
        hi *= 2;
    }
    let mut lo = BigInt::zero();
    while &hi - &lo > BigInt::one() {
        let mid: BigInt = (&lo + &hi) / 2;
        if fits(&mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}
