//! Exact structured cluster costs and the candidate cost set.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::metric::DistanceOrder;
use crate::real::{floor_inverse_power, Real, GUARD_DIGITS};

/// Digits used when irrational costs have to be compared numerically.
pub const EVAL_DIGITS: u32 = 50;

/// Absolute tolerance for numeric comparisons of irrational costs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tolerance(BigRational);

impl Tolerance {
    pub fn new(value: BigRational) -> Self {
        Self(value.abs())
    }

    /// `10^-exponent`.
    pub fn pow10(exponent: u32) -> Self {
        Self(BigRational::new(BigInt::one(), BigInt::from(10u32).pow(exponent)))
    }

    /// Parses a plain or scientific decimal such as `1e-12` or `0.001`.
    pub fn parse(text: &str) -> Result<Self> {
        parse_decimal(text).map(Self::new).ok_or_else(|| Error::InvalidBudget(format!("bad tolerance {text:?}")))
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self::pow10(12)
    }
}

/// Parses `[-]digits[.digits][e[-]digits]` exactly.
pub fn parse_decimal(text: &str) -> Option<BigRational> {
    let text = text.trim();
    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(at) => (&text[..at], text[at + 1..].parse::<i32>().ok()?),
        None => (text, 0),
    };
    let (negative, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if whole.is_empty() && frac.is_empty() {
        return None;
    }
    if !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("{whole}{frac}").parse().ok()?;
    let scale = exponent - frac.len() as i32;
    let ten = BigInt::from(10u32);
    let mut value = if scale >= 0 {
        BigRational::from_integer(digits * ten.pow(scale as u32))
    } else {
        BigRational::new(digits, ten.pow((-scale) as u32))
    };
    if negative {
        value = -value;
    }
    Some(value)
}

/// `Σ coeff · base^p` with nonnegative integer coefficients.
///
/// Bases are kept free of perfect `s`-th powers (for `p = r/s`), so equal maps
/// are the only way two sums can be equal and a sum with only base 1 is an
/// integer.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BasisSum {
    exponent: Ratio<u64>,
    terms: BTreeMap<BigUint, BigUint>,
}

impl BasisSum {
    pub fn new(exponent: Ratio<u64>) -> Self {
        Self { exponent, terms: BTreeMap::new() }
    }

    pub fn exponent(&self) -> Ratio<u64> {
        self.exponent
    }

    pub fn terms(&self) -> &BTreeMap<BigUint, BigUint> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds `coeff · base^p`. A zero base contributes nothing.
    pub fn add_term(&mut self, base: &BigUint, coeff: &BigUint) {
        if base.is_zero() || coeff.is_zero() {
            return;
        }
        let (multiplier, reduced) = fold_power(base, self.exponent);
        *self.terms.entry(reduced).or_insert_with(BigUint::zero) += coeff * multiplier;
    }

    pub fn add(&mut self, other: &BasisSum) {
        for (base, coeff) in &other.terms {
            *self.terms.entry(base.clone()).or_insert_with(BigUint::zero) += coeff;
        }
    }

    pub fn scaled(&self, factor: &BigUint) -> Self {
        if factor.is_zero() {
            return Self::new(self.exponent);
        }
        Self { exponent: self.exponent, terms: self.terms.iter().map(|(b, c)| (b.clone(), c * factor)).collect() }
    }

    /// `Some(n)` when the sum has no irrational term.
    pub fn as_integer(&self) -> Option<BigUint> {
        match self.terms.len() {
            0 => Some(BigUint::zero()),
            1 => self.terms.get(&BigUint::one()).cloned(),
            _ => None,
        }
    }

    pub fn eval(&self, digits: u32) -> Real {
        let work = digits + GUARD_DIGITS;
        let mut total = Real::zero(work);
        for (base, coeff) in &self.terms {
            let term = Real::int_pow(base, self.exponent, work);
            total = total.add(&term.mul_int(&BigInt::from(coeff.clone())));
        }
        total.with_digits(digits)
    }

    /// Double-precision approximation.
    pub fn to_f64(&self) -> f64 {
        let exponent = *self.exponent.numer() as f64 / *self.exponent.denom() as f64;
        self.terms
            .iter()
            .map(|(base, coeff)| {
                coeff.to_f64().unwrap_or(f64::INFINITY) * base.to_f64().unwrap_or(f64::INFINITY).powf(exponent)
            })
            .sum()
    }

    /// Removes the termwise minimum of the two sums from both.
    fn cancel_common(&self, other: &BasisSum) -> (BasisSum, BasisSum) {
        let mut left = self.clone();
        let mut right = other.clone();
        for (base, coeff) in &self.terms {
            if let Some(other_coeff) = other.terms.get(base) {
                let common = coeff.min(other_coeff).clone();
                for side in [&mut left, &mut right] {
                    let entry = side.terms.get_mut(base).expect("present");
                    *entry -= &common;
                    if entry.is_zero() {
                        side.terms.remove(base);
                    }
                }
            }
        }
        (left, right)
    }
}

/// Writes `base = b^s · c` with `c` free of `s`-th powers and returns
/// `(b^r, c)`, so that `base^(r/s) = b^r · c^(r/s)`.
fn fold_power(base: &BigUint, exponent: Ratio<u64>) -> (BigUint, BigUint) {
    let r = u32::try_from(*exponent.numer()).expect("exponent fits");
    let s = u32::try_from(*exponent.denom()).expect("exponent fits");
    if s == 1 {
        return (base.pow(r), BigUint::one());
    }
    let mut rest = base.clone();
    let mut outer = BigUint::one();
    let mut inner = BigUint::one();
    let mut prime = 2u32;
    while prime < 10_000 {
        let q = BigUint::from(prime);
        if &q * &q > rest {
            break;
        }
        let mut count = 0u32;
        while (&rest % &q).is_zero() {
            rest /= &q;
            count += 1;
        }
        outer *= q.pow(count / s);
        inner *= q.pow(count % s);
        prime += if prime == 2 { 1 } else { 2 };
    }
    let root = rest.nth_root(s);
    if root.pow(s) == rest {
        outer *= root;
    } else {
        inner *= rest;
    }
    (outer.pow(r), inner)
}

/// An exact cluster cost.
///
/// `Int`, `HalfInt` and `Rational` values compare exactly with each other;
/// `Basis` values are sums of `a^p` terms for a rational `p < 1`.
#[derive(Clone, Debug)]
pub enum CostValue {
    Int(BigUint),
    /// Number of halves.
    HalfInt(BigUint),
    Rational(BigRational),
    Basis(BasisSum),
}

impl CostValue {
    pub fn zero() -> Self {
        CostValue::Int(BigUint::zero())
    }

    pub fn int(value: u64) -> Self {
        CostValue::Int(BigUint::from(value))
    }

    pub fn ratio(numer: i64, denom: i64) -> Self {
        CostValue::Rational(BigRational::new(numer.into(), denom.into()))
    }

    pub fn halves(count: u64) -> Self {
        CostValue::HalfInt(BigUint::from(count))
    }

    /// Builds `Σ coeff · base^p` from `(base, coeff)` pairs.
    pub fn basis(exponent: Ratio<u64>, terms: &[(u64, u64)]) -> Self {
        let mut sum = BasisSum::new(exponent);
        for &(base, coeff) in terms {
            sum.add_term(&BigUint::from(base), &BigUint::from(coeff));
        }
        CostValue::Basis(sum)
    }

    /// The exact value when it is rational.
    pub fn to_ratio(&self) -> Option<BigRational> {
        match self {
            CostValue::Int(n) => Some(BigRational::from_integer(n.clone().into())),
            CostValue::HalfInt(h) => Some(BigRational::new(h.clone().into(), 2.into())),
            CostValue::Rational(r) => Some(r.clone()),
            CostValue::Basis(b) => b.as_integer().map(|n| BigRational::from_integer(n.into())),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            CostValue::Basis(b) => b.is_zero(),
            other => other.to_ratio().is_some_and(|r| r.is_zero()),
        }
    }

    pub fn eval(&self, digits: u32) -> Real {
        match self {
            CostValue::Basis(b) => b.eval(digits),
            other => Real::from_ratio(&other.to_ratio().expect("rational"), digits),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self.to_ratio() {
            Some(r) => r.to_f64().unwrap_or(f64::NAN),
            None => match self {
                CostValue::Basis(b) => b.to_f64(),
                _ => unreachable!("only basis sums are irrational"),
            },
        }
    }

    /// Exact comparison when both sides are rational or structurally equal.
    pub fn exact_cmp(&self, other: &CostValue) -> Option<Ordering> {
        if let (Some(a), Some(b)) = (self.to_ratio(), other.to_ratio()) {
            return Some(a.cmp(&b));
        }
        if let (CostValue::Basis(a), CostValue::Basis(b)) = (self, other) {
            if a.exponent == b.exponent {
                let (left, right) = a.cancel_common(b);
                match (left.is_zero(), right.is_zero()) {
                    (true, true) => return Some(Ordering::Equal),
                    (true, false) => return Some(Ordering::Less),
                    (false, true) => return Some(Ordering::Greater),
                    _ => {}
                }
                if let (Some(x), Some(y)) = (left.as_integer(), right.as_integer()) {
                    return Some(x.cmp(&y));
                }
            }
        }
        None
    }

    /// `self <= other`, exact when possible and numeric with `tol` otherwise.
    pub fn le(&self, other: &CostValue, tol: &Tolerance) -> bool {
        cost_le(self, other, tol)
    }

    pub fn checked_add(&self, other: &CostValue) -> Result<CostValue> {
        use CostValue::*;
        Ok(match (self, other) {
            (Int(a), Int(b)) => Int(a + b),
            (HalfInt(a), HalfInt(b)) => HalfInt(a + b),
            (HalfInt(h), Int(n)) | (Int(n), HalfInt(h)) => HalfInt(h + n * 2u32),
            (Basis(a), Basis(b)) => {
                if a.exponent != b.exponent {
                    return Err(Error::IncompatibleCosts(format!("basis exponents {} and {}", a.exponent, b.exponent)));
                }
                let mut sum = a.clone();
                sum.add(b);
                Basis(sum)
            }
            (Basis(b), other) | (other, Basis(b)) => match other {
                Int(n) => {
                    let mut sum = b.clone();
                    sum.add_term(&BigUint::one(), n);
                    Basis(sum)
                }
                _ if other.is_zero() => Basis(b.clone()),
                _ => return Err(Error::IncompatibleCosts(format!("cannot add {other} to a basis sum"))),
            },
            (a, b) => Rational(a.to_ratio().expect("rational") + b.to_ratio().expect("rational")),
        })
    }

    /// `self · factor`.
    pub fn scaled(&self, factor: &BigUint) -> CostValue {
        match self {
            CostValue::Int(n) => CostValue::Int(n * factor),
            CostValue::HalfInt(h) => CostValue::HalfInt(h * factor),
            CostValue::Rational(r) => CostValue::Rational(r * BigRational::from_integer(factor.clone().into())),
            CostValue::Basis(b) => CostValue::Basis(b.scaled(factor)),
        }
    }

    /// Sums costs, starting from exact zero.
    pub fn sum<'a>(items: impl IntoIterator<Item = &'a CostValue>) -> Result<CostValue> {
        items.into_iter().try_fold(CostValue::zero(), |acc, c| acc.checked_add(c))
    }

    /// `floor(self)`, exact for rational values.
    pub fn floor(&self, tol: &Tolerance) -> BigInt {
        match self.to_ratio() {
            Some(r) => r.floor().to_integer(),
            None => {
                let slack = Real::from_ratio(tol.value(), EVAL_DIGITS);
                self.eval(EVAL_DIGITS).add(&slack).floor()
            }
        }
    }
}

impl PartialEq for CostValue {
    fn eq(&self, other: &Self) -> bool {
        self.exact_cmp(other) == Some(Ordering::Equal)
    }
}

impl fmt::Display for CostValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CostValue::Int(n) => write!(f, "{n}"),
            CostValue::HalfInt(h) => {
                if h.is_even() {
                    write!(f, "{}", h / 2u32)
                } else {
                    write!(f, "{h}/2")
                }
            }
            CostValue::Rational(r) => write!(f, "{r}"),
            CostValue::Basis(b) => {
                if b.is_zero() {
                    return write!(f, "0");
                }
                let mut first = true;
                for (base, coeff) in &b.terms {
                    if !first {
                        write!(f, " + ")?;
                    }
                    first = false;
                    match (base.is_one(), coeff.is_one()) {
                        (true, _) => write!(f, "{coeff}")?,
                        (false, true) => write!(f, "{base}^({})", b.exponent)?,
                        (false, false) => write!(f, "{coeff}*{base}^({})", b.exponent)?,
                    }
                }
                Ok(())
            }
        }
    }
}

/// High-precision numeric value of a cost.
///
/// # Panics
/// If `digits < 15`.
pub fn cost_eval(cost: &CostValue, digits: u32) -> Real {
    assert!(digits >= 15, "cost_eval needs at least 15 digits");
    cost.eval(digits)
}

/// `a <= b`: exact for rational regimes; otherwise `a <= b + tol` numerically.
pub fn cost_le(a: &CostValue, b: &CostValue, tol: &Tolerance) -> bool {
    if let Some(order) = a.exact_cmp(b) {
        return order != Ordering::Greater;
    }
    if let Some(order) = separated(a, b, tol.value().to_f64().unwrap_or(f64::INFINITY)) {
        return order == Ordering::Less;
    }
    let slack = Real::from_ratio(tol.value(), EVAL_DIGITS);
    a.eval(EVAL_DIGITS) <= b.eval(EVAL_DIGITS).add(&slack)
}

/// Total order used for sorting: exact where possible, numeric otherwise.
pub fn cost_cmp(a: &CostValue, b: &CostValue) -> Ordering {
    a.exact_cmp(b).or_else(|| separated(a, b, 0.0)).unwrap_or_else(|| a.eval(EVAL_DIGITS).cmp(&b.eval(EVAL_DIGITS)))
}

/// Decides the order from double-precision values when they are further
/// apart than both rounding error and `slack`.
fn separated(a: &CostValue, b: &CostValue, slack: f64) -> Option<Ordering> {
    let (x, y) = (a.to_f64(), b.to_f64());
    if !x.is_finite() || !y.is_finite() {
        return None;
    }
    let margin = (1e-6 * x.abs().max(y.abs()).max(1.0)).max(2.0 * slack);
    if (x - y).abs() > margin {
        x.partial_cmp(&y)
    } else {
        None
    }
}

/// The candidate optimal cluster costs not exceeding a budget, ascending.
#[derive(Clone, Debug)]
pub struct CostSet {
    order: DistanceOrder,
    budget: CostValue,
    members: Vec<CostValue>,
}

impl CostSet {
    pub fn order(&self) -> &DistanceOrder {
        &self.order
    }

    pub fn budget(&self) -> &CostValue {
        &self.budget
    }

    pub fn members(&self) -> &[CostValue] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Membership: exact for rational regimes, within `tol` for basis sums.
    pub fn contains(&self, cost: &CostValue, tol: &Tolerance) -> bool {
        self.members
            .iter()
            .any(|m| m == cost || (m.exact_cmp(cost).is_none() && cost_le(m, cost, tol) && cost_le(cost, m, tol)))
    }
}

/// Enumerates every cost an optimal cluster can have without exceeding `budget`.
///
/// `n` (the number of input vectors) bounds the mean denominators for the
/// squared Euclidean regime and is required there.
pub fn enumerate_cost_set(
    order: &DistanceOrder,
    budget: &CostValue,
    n: Option<usize>,
    tol: &Tolerance,
) -> Result<CostSet> {
    let ceiling = budget.floor(tol);
    if ceiling.is_negative() {
        return Err(Error::InvalidBudget(format!("negative budget {budget}")));
    }
    let ceiling_u =
        ceiling.to_u64().ok_or_else(|| Error::InvalidBudget(format!("budget {budget} is too large to enumerate")))?;
    let mut members: Vec<CostValue> = match order {
        DistanceOrder::L0 => (0..=ceiling_u).map(CostValue::int).collect(),
        DistanceOrder::Lp(p) if p.is_one() => (0..=ceiling_u).map(CostValue::int).collect(),
        DistanceOrder::Lp(p) => basis_combinations(*p, budget, ceiling_u, tol)?,
        DistanceOrder::L2 => {
            let n = n.ok_or_else(|| Error::InvalidInstance("the squared Euclidean cost set needs n".into()))?;
            if n == 0 {
                return Err(Error::InvalidInstance("n must be positive".into()));
            }
            let bound = budget
                .to_ratio()
                .ok_or_else(|| Error::InvalidBudget(format!("squared Euclidean budget {budget} must be rational")))?;
            let mut values = std::collections::BTreeSet::new();
            for s in 1..=n as u64 {
                let square = BigInt::from(s * s);
                let top = (&bound * BigRational::from_integer(square.clone())).floor().to_integer();
                let mut z = BigInt::zero();
                while z <= top {
                    values.insert(BigRational::new(z.clone(), square.clone()));
                    z += 1;
                }
            }
            values.into_iter().map(CostValue::Rational).collect()
        }
        DistanceOrder::LInf => {
            let top = match budget.to_ratio() {
                Some(r) => (r * BigRational::from_integer(2.into())).floor().to_integer(),
                None => budget.eval(EVAL_DIGITS).mul_int(&2.into()).floor(),
            };
            let top = top.to_u64().unwrap_or(0);
            (0..=top).map(CostValue::halves).collect()
        }
    };
    members.sort_by(cost_cmp);
    Ok(CostSet { order: order.clone(), budget: budget.clone(), members })
}

/// All `Σ a_b · b^p` over bases `1..=ceil(D^(1/p))` with `Σ a_b <= floor(D)`
/// that evaluate to at most `D`.
fn basis_combinations(
    p: Ratio<u64>,
    budget: &CostValue,
    max_coeff_sum: u64,
    tol: &Tolerance,
) -> Result<Vec<CostValue>> {
    let budget_ratio = match budget.to_ratio() {
        Some(r) => r,
        None => budget.eval(EVAL_DIGITS).to_ratio() + tol.value(),
    };
    let mut top = floor_inverse_power(&budget_ratio, p);
    // ceil: bump when top^p < D
    let top_value = Real::int_pow(&top.to_biguint().unwrap_or_default(), p, EVAL_DIGITS);
    if top_value.to_ratio() < budget_ratio {
        top += 1;
    }
    let top = top.to_u64().unwrap_or(0).max(1);
    let values: Vec<f64> = (1..=top).map(|a| Real::int_pow(&BigUint::from(a), p, 20).to_f64()).collect();
    let limit = budget.to_f64() + 1e-9;
    let mut found: Vec<BasisSum> = Vec::new();
    let mut current: Vec<u64> = Vec::new();
    enumerate_multisets(&values, 0, max_coeff_sum, 0.0, limit, &mut current, &mut |picked| {
        let mut sum = BasisSum::new(p);
        for &index in picked {
            sum.add_term(&BigUint::from(index as u64 + 1), &BigUint::one());
        }
        found.push(sum);
    });
    let mut members: Vec<CostValue> = Vec::new();
    for sum in found {
        let value = CostValue::Basis(sum);
        if cost_le(&value, budget, tol) && !members.contains(&value) {
            members.push(value);
        }
    }
    Ok(members)
}

fn enumerate_multisets(
    values: &[f64],
    start: usize,
    remaining: u64,
    partial: f64,
    limit: f64,
    current: &mut Vec<u64>,
    emit: &mut dyn FnMut(&[usize]),
) {
    let picked: Vec<usize> = current.iter().map(|&i| i as usize).collect();
    emit(&picked);
    if remaining == 0 {
        return;
    }
    for index in start..values.len() {
        let next = partial + values[index];
        if next > limit {
            break;
        }
        current.push(index as u64);
        enumerate_multisets(values, index, remaining - 1, next, limit, current, emit);
        current.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn half() -> Ratio<u64> {
        Ratio::new(1, 2)
    }

    #[test]
    fn eval_examples() {
        assert_eq!(cost_eval(&CostValue::int(3), 20).to_string(), "3.00000000000000000000");
        assert_eq!(format!("{:.2}", cost_eval(&CostValue::ratio(9, 4), 20)), "2.25");
        let b = CostValue::basis(half(), &[(1, 1), (3, 1)]);
        // 1 + sqrt(3) computed independently via f64.
        assert!((b.to_f64() - (1.0 + 3f64.sqrt())).abs() < 1e-12);
        assert_eq!(format!("{:.7}", cost_eval(&b, 30)), "2.7320508");
    }

    #[test]
    fn le_examples() {
        let tol = Tolerance::default();
        assert!(cost_le(&CostValue::int(2), &CostValue::int(3), &tol));
        assert!(!cost_le(&CostValue::ratio(5, 4), &CostValue::int(1), &tol));
        let sqrt2 = CostValue::basis(half(), &[(2, 1)]);
        let two = CostValue::basis(half(), &[(1, 2)]);
        assert!(cost_le(&sqrt2, &two, &tol));
        assert!(!cost_le(&two, &sqrt2, &tol));
    }

    #[test]
    fn perfect_powers_fold_into_integers() {
        let b = CostValue::basis(half(), &[(4, 1), (9, 1)]);
        assert_eq!(b, CostValue::int(5));
        let c = CostValue::basis(half(), &[(8, 1)]);
        // sqrt(8) = 2 sqrt(2)
        assert_eq!(c, CostValue::basis(half(), &[(2, 2)]));
        let cube = CostValue::basis(Ratio::new(2, 3), &[(8, 1)]);
        assert_eq!(cube, CostValue::int(4));
    }

    #[test]
    fn structural_cancellation_is_exact() {
        let a = CostValue::basis(half(), &[(1, 1), (3, 1)]);
        let b = CostValue::basis(half(), &[(1, 2), (3, 1)]);
        assert_eq!(a.exact_cmp(&b), Some(Ordering::Less));
        assert_eq!(a.exact_cmp(&CostValue::basis(half(), &[(2, 1)])), None);
    }

    #[test]
    fn mixed_rational_addition() {
        let sum = CostValue::halves(3).checked_add(&CostValue::int(1)).unwrap();
        assert_eq!(sum, CostValue::ratio(5, 2));
        let r = CostValue::ratio(2, 3).checked_add(&CostValue::int(1)).unwrap();
        assert_eq!(r, CostValue::ratio(5, 3));
        assert!(CostValue::basis(half(), &[(2, 1)]).checked_add(&CostValue::ratio(1, 3)).is_err());
    }

    #[test]
    fn parse_decimal_forms() {
        assert_eq!(parse_decimal("1e-12"), Some(BigRational::new(1.into(), BigInt::from(10u64.pow(12)))));
        assert_eq!(parse_decimal("2.25"), Some(BigRational::new(9.into(), 4.into())));
        assert_eq!(parse_decimal("-3"), Some(BigRational::from_integer((-3).into())));
        assert_eq!(parse_decimal("abc"), None);
        assert_eq!(parse_decimal("."), None);
    }

    #[test]
    fn cost_set_examples() {
        let tol = Tolerance::default();
        let p1 = DistanceOrder::Lp(Ratio::new(1, 1));
        let set = enumerate_cost_set(&p1, &CostValue::int(3), None, &tol).unwrap();
        assert_eq!(set.members(), &[0, 1, 2, 3].map(CostValue::int));

        let half_order = DistanceOrder::Lp(half());
        let set = enumerate_cost_set(&half_order, &CostValue::int(1), None, &tol).unwrap();
        assert_eq!(set.members(), &[CostValue::zero(), CostValue::int(1)]);

        let set = enumerate_cost_set(&DistanceOrder::L2, &CostValue::int(1), Some(2), &tol).unwrap();
        let expected = [(0, 1), (1, 4), (1, 2), (3, 4), (1, 1)].map(|(a, b)| CostValue::ratio(a, b));
        assert_eq!(set.members(), &expected);

        let set = enumerate_cost_set(&DistanceOrder::LInf, &CostValue::ratio(3, 2), None, &tol).unwrap();
        assert_eq!(set.members(), &[0, 1, 2, 3].map(CostValue::halves));

        assert!(enumerate_cost_set(&DistanceOrder::L2, &CostValue::int(1), None, &tol).is_err());
    }
}
