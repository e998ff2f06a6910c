//! Typed budget strings.
//!
//! A budget is one of
//! - an integer: `3`,
//! - `z/s2:<z>/<s>` for `z / s²`,
//! - a plain fraction `a/b`,
//! - a decimal `1.25` (only for `0 < p < 1`),
//! - a basis list `basis:<c>*<b>+...` for `Σ c · b^p` (only for `0 < p < 1`).

use kclust::cost::parse_decimal;
use kclust::{BasisSum, CostValue, DistanceOrder, Error, Result};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

fn bad(text: &str, why: &str) -> Error {
    Error::InvalidBudget(format!("{text:?}: {why}"))
}

fn is_lp_below_one(order: &DistanceOrder) -> bool {
    matches!(order, DistanceOrder::Lp(p) if *p < num_rational::Ratio::one())
}

fn parse_uint(text: &str, whole: &str) -> Result<BigUint> {
    let t = text.trim();
    if t.is_empty() || !t.bytes().all(|b| b.is_ascii_digit()) {
        return Err(bad(whole, "expected a nonnegative integer"));
    }
    t.parse::<BigUint>().map_err(|_| bad(whole, "expected a nonnegative integer"))
}

fn from_rational(value: BigRational, order: &DistanceOrder, text: &str) -> Result<CostValue> {
    if value.is_negative() {
        return Err(bad(text, "budgets are nonnegative"));
    }
    if value.is_integer() {
        return Ok(CostValue::Int(value.to_integer().to_biguint().unwrap_or_default()));
    }
    match order {
        DistanceOrder::LInf if value.denom() == &BigInt::from(2) => {
            Ok(CostValue::HalfInt(value.numer().to_biguint().unwrap_or_default()))
        }
        DistanceOrder::LInf => Err(bad(text, "L∞ costs are half-integers")),
        DistanceOrder::L2 => Ok(CostValue::Rational(value)),
        DistanceOrder::Lp(_) if is_lp_below_one(order) => Ok(CostValue::Rational(value)),
        _ => Err(bad(text, &format!("p = {order} costs are integers"))),
    }
}

/// Parses a budget under the regime of `order`.
pub fn parse_budget(text: &str, order: &DistanceOrder) -> Result<CostValue> {
    let t = text.trim();
    if let Some(rest) = t.strip_prefix("z/s2:") {
        let (z, s) = rest.split_once('/').ok_or_else(|| bad(text, "expected z/s2:<z>/<s>"))?;
        let (z, s) = (parse_uint(z, text)?, parse_uint(s, text)?);
        if s.is_zero() {
            return Err(bad(text, "s must be positive"));
        }
        let value = BigRational::new(BigInt::from(z), BigInt::from(&s * &s));
        return from_rational(value, order, text);
    }
    if let Some(rest) = t.strip_prefix("basis:") {
        let DistanceOrder::Lp(p) = order else {
            return Err(bad(text, "basis lists need 0 < p < 1"));
        };
        if !is_lp_below_one(order) {
            return Err(bad(text, "basis lists need 0 < p < 1"));
        }
        let mut sum = BasisSum::new(*p);
        for term in rest.split('+') {
            let (coeff, base) = match term.split_once('*') {
                Some((c, b)) => (parse_uint(c, text)?, parse_uint(b, text)?),
                None => (BigUint::one(), parse_uint(term, text)?),
            };
            sum.add_term(&base, &coeff);
        }
        return Ok(match sum.as_integer() {
            Some(n) => CostValue::Int(n),
            None => CostValue::Basis(sum),
        });
    }
    if !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit()) {
        return Ok(CostValue::Int(parse_uint(t, text)?));
    }
    if let Some((a, b)) = t.split_once('/') {
        let (a, b) = (parse_uint(a, text)?, parse_uint(b, text)?);
        if b.is_zero() {
            return Err(bad(text, "zero denominator"));
        }
        return from_rational(BigRational::new(a.into(), b.into()), order, text);
    }
    let value = parse_decimal(t).ok_or_else(|| bad(text, "not a budget"))?;
    if !is_lp_below_one(order) && !value.is_integer() {
        return Err(bad(text, "decimal budgets need 0 < p < 1"));
    }
    from_rational(value, order, text)
}

/// Smallest `s` with `denom | s²`.
fn square_root_cover(denom: &BigUint) -> BigUint {
    let mut rest = denom.clone();
    let mut s = BigUint::one();
    let mut prime = 2u64;
    while prime < 1_000_000 && BigUint::from(prime * prime) <= rest {
        let mut exponent = 0u32;
        while (&rest % prime).is_zero() {
            rest /= prime;
            exponent += 1;
        }
        s *= BigUint::from(prime).pow(exponent.div_ceil(2));
        prime += if prime == 2 { 1 } else { 2 };
    }
    s * rest
}

fn z_over_s2(value: &BigRational) -> String {
    let numer = value.numer().to_biguint().unwrap_or_default();
    let denom = value.denom().to_biguint().unwrap_or_default();
    let s = square_root_cover(&denom);
    let z = numer * (&s * &s) / denom;
    format!("z/s2:{z}/{s}")
}

fn terminating_decimal(value: &BigRational) -> Option<String> {
    let mut denom = value.denom().to_biguint()?;
    let (mut twos, mut fives) = (0u32, 0u32);
    while denom.is_even() {
        denom /= 2u32;
        twos += 1;
    }
    while (&denom % 5u32).is_zero() {
        denom /= 5u32;
        fives += 1;
    }
    if !denom.is_one() {
        return None;
    }
    let places = twos.max(fives);
    let scaled = (value * BigRational::from_integer(BigInt::from(10u32).pow(places))).to_integer();
    let digits = scaled.to_biguint()?.to_string();
    let places = places as usize;
    let padded = format!("{digits:0>width$}", width = places + 1);
    let (whole, frac) = padded.split_at(padded.len() - places);
    Some(format!("{whole}.{frac}"))
}

/// Writes a budget in the canonical string form for `order`.
pub fn format_budget(cost: &CostValue, order: &DistanceOrder) -> String {
    if let CostValue::Basis(sum) = cost {
        if sum.as_integer().is_none() {
            let terms: Vec<String> = sum.terms().iter().map(|(base, coeff)| format!("{coeff}*{base}")).collect();
            return format!("basis:{}", terms.join("+"));
        }
    }
    let value = cost.to_ratio().unwrap_or_else(BigRational::zero);
    match order {
        DistanceOrder::L2 => z_over_s2(&value),
        _ if value.is_integer() => value.to_integer().to_string(),
        DistanceOrder::Lp(_) => terminating_decimal(&value).unwrap_or_else(|| value.to_string()),
        _ => value.to_string(),
    }
}

/// `z / s²` as a pair, for reporting.
pub fn z_s_pair(value: &BigRational) -> Option<(u64, u64)> {
    let s = square_root_cover(&value.denom().to_biguint()?);
    let z = value.numer().to_biguint()? * (&s * &s) / value.denom().to_biguint()?;
    Some((z.to_u64()?, s.to_u64()?))
}
