//! Distance orders and exact distance evaluation.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, Zero};

use crate::cost::{BasisSum, CostValue};
use crate::data::{Centroid, DataPoint};
use crate::error::{Error, Result};

/// Which Minkowski-type distance is active.
///
/// All variants measure `Σ |x[i] - y[i]|^p` without the outer root; `L0`
/// counts differing coordinates and `LInf` takes the largest gap.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum DistanceOrder {
    /// `0 < p <= 1`, stored reduced.
    Lp(Ratio<u64>),
    /// Squared Euclidean.
    L2,
    LInf,
    L0,
}

impl DistanceOrder {
    pub fn lp(numer: u64, denom: u64) -> Result<Self> {
        if denom == 0 || numer == 0 || numer > denom {
            return Err(Error::InvalidOrder(format!("p = {numer}/{denom} is not in (0, 1]")));
        }
        Ok(DistanceOrder::Lp(Ratio::new(numer, denom)))
    }

    pub fn l1() -> Self {
        DistanceOrder::Lp(Ratio::from_integer(1))
    }

    pub fn is_l1(&self) -> bool {
        matches!(self, DistanceOrder::Lp(p) if p.is_one())
    }
}

impl fmt::Display for DistanceOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DistanceOrder::Lp(p) => write!(f, "{p}"),
            DistanceOrder::L2 => write!(f, "2"),
            DistanceOrder::LInf => write!(f, "inf"),
            DistanceOrder::L0 => write!(f, "0"),
        }
    }
}

impl FromStr for DistanceOrder {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        match text.trim() {
            "0" => Ok(DistanceOrder::L0),
            "2" => Ok(DistanceOrder::L2),
            "inf" | "Inf" | "INF" => Ok(DistanceOrder::LInf),
            other => {
                let (n, d) = other.split_once('/').unwrap_or((other, "1"));
                let parse = |s: &str| {
                    s.trim().parse::<u64>().map_err(|_| Error::InvalidOrder(format!("cannot parse p = {text:?}")))
                };
                DistanceOrder::lp(parse(n)?, parse(d)?)
            }
        }
    }
}

/// Borrowed view of anything with coordinates.
#[derive(Clone, Copy, Debug)]
pub enum Vector<'a> {
    Point(&'a DataPoint),
    Centroid(&'a Centroid),
}

impl<'a> From<&'a DataPoint> for Vector<'a> {
    fn from(p: &'a DataPoint) -> Self {
        Vector::Point(p)
    }
}

impl<'a> From<&'a Centroid> for Vector<'a> {
    fn from(c: &'a Centroid) -> Self {
        Vector::Centroid(c)
    }
}

impl Vector<'_> {
    fn dim(&self) -> usize {
        match self {
            Vector::Point(p) => p.dim(),
            Vector::Centroid(c) => c.dim(),
        }
    }
}

enum Gap {
    Int(BigInt),
    Ratio(BigRational),
}

impl Gap {
    fn is_zero(&self) -> bool {
        match self {
            Gap::Int(g) => g.is_zero(),
            Gap::Ratio(g) => g.is_zero(),
        }
    }

    fn into_ratio(self) -> BigRational {
        match self {
            Gap::Int(g) => BigRational::from_integer(g),
            Gap::Ratio(g) => g,
        }
    }
}

fn int_rational_gap(a: &BigInt, b: &BigRational) -> Gap {
    if b.is_integer() {
        Gap::Int((a - b.numer()).abs())
    } else {
        // gcd(a*den - num, den) = gcd(num, den) = 1, so this is already reduced.
        Gap::Ratio(BigRational::new_raw((a * b.denom() - b.numer()).abs(), b.denom().clone()))
    }
}

fn gap(x: Vector<'_>, y: Vector<'_>, i: usize) -> Gap {
    match (x, y) {
        (Vector::Point(a), Vector::Point(b)) => Gap::Int((&a.coords()[i] - &b.coords()[i]).abs()),
        (Vector::Point(a), Vector::Centroid(c)) | (Vector::Centroid(c), Vector::Point(a)) => {
            int_rational_gap(&a.coords()[i], &c.coords()[i])
        }
        (Vector::Centroid(a), Vector::Centroid(b)) => {
            let (a, b) = (&a.coords()[i], &b.coords()[i]);
            if a.is_integer() && b.is_integer() {
                Gap::Int((a.numer() - b.numer()).abs())
            } else {
                Gap::Ratio((a - b).abs())
            }
        }
    }
}

/// `dist_p(x, y)` as an exact structured cost.
///
/// For `0 < p < 1` every coordinate gap must be an integer; the result is a
/// [`BasisSum`] over the gaps.
pub fn dist<'a, 'b>(order: &DistanceOrder, x: impl Into<Vector<'a>>, y: impl Into<Vector<'b>>) -> Result<CostValue> {
    let (x, y) = (x.into(), y.into());
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch { expected: x.dim(), found: y.dim() });
    }
    let gaps = (0..x.dim()).map(|i| gap(x, y, i));
    Ok(match order {
        DistanceOrder::L0 => CostValue::Int(BigUint::from(gaps.filter(|g| !g.is_zero()).count())),
        DistanceOrder::Lp(p) if p.is_one() => {
            let mut int_sum = BigInt::zero();
            let mut ratio_sum: Option<BigRational> = None;
            for g in gaps {
                match g {
                    Gap::Int(v) => int_sum += v,
                    Gap::Ratio(v) => *ratio_sum.get_or_insert_with(BigRational::zero) += v,
                }
            }
            match ratio_sum {
                None => CostValue::Int(int_sum.magnitude().clone()),
                Some(r) => CostValue::Rational(r + BigRational::from_integer(int_sum)),
            }
        }
        DistanceOrder::Lp(p) => {
            let mut sum = BasisSum::new(*p);
            let one = BigUint::one();
            for g in gaps {
                match g {
                    Gap::Int(v) => sum.add_term(v.magnitude(), &one),
                    Gap::Ratio(_) => {
                        return Err(Error::Unsupported("fractional-p distances need integral coordinates".into()))
                    }
                }
            }
            CostValue::Basis(sum)
        }
        DistanceOrder::L2 => {
            let mut int_sum = BigInt::zero();
            let mut ratio_sum = BigRational::zero();
            for g in gaps {
                match g {
                    Gap::Int(v) => int_sum += &v * &v,
                    Gap::Ratio(v) => ratio_sum += &v * &v,
                }
            }
            CostValue::Rational(ratio_sum + BigRational::from_integer(int_sum))
        }
        DistanceOrder::LInf => {
            let largest = gaps.map(Gap::into_ratio).max().unwrap_or_else(BigRational::zero);
            let doubled = &largest * BigRational::from_integer(2.into());
            if doubled.is_integer() {
                CostValue::HalfInt(doubled.to_integer().magnitude().clone())
            } else {
                CostValue::Rational(largest)
            }
        }
    })
}

/// The constant `α` such that a composite cluster of `s` initial clusters
/// costs at least `α (s - 1)`.
pub fn alpha_for(order: &DistanceOrder) -> BigRational {
    match order {
        DistanceOrder::Lp(_) | DistanceOrder::L0 => BigRational::one(),
        DistanceOrder::LInf => BigRational::new(1.into(), 2.into()),
        DistanceOrder::L2 => BigRational::new(1.into(), 4.into()),
    }
}
