//! Input vectors, datasets and their decomposition into initial clusters.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// An integer input vector.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DataPoint(Vec<BigInt>);

impl DataPoint {
    pub fn new(coords: Vec<BigInt>) -> Self {
        Self(coords)
    }

    pub fn from_i64(coords: &[i64]) -> Self {
        Self(coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn to_centroid(&self) -> Centroid {
        Centroid::new(self.0.iter().cloned().map(BigRational::from_integer).collect())
    }
}

impl fmt::Display for DataPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// A candidate cluster center with exact rational coordinates.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Centroid(Vec<BigRational>);

impl Centroid {
    pub fn new(coords: Vec<BigRational>) -> Self {
        Self(coords)
    }

    pub fn from_i64(coords: &[i64]) -> Self {
        Self(coords.iter().map(|&c| BigRational::from_integer(c.into())).collect())
    }

    /// Builds a centroid from `(numerator, denominator)` pairs.
    pub fn from_ratios(coords: &[(i64, i64)]) -> Self {
        Self(coords.iter().map(|&(n, d)| BigRational::new(n.into(), d.into())).collect())
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|c| c.is_integer())
    }

    pub fn is_half_integral(&self) -> bool {
        let two = BigRational::from_integer(2.into());
        self.0.iter().all(|c| (c * &two).is_integer())
    }

    /// Every coordinate can be written as `y / denominator`.
    pub fn has_denominator(&self, denominator: &BigInt) -> bool {
        self.0.iter().all(|c| (denominator % c.denom()).is_zero())
    }

    /// The integral point, when every coordinate is an integer.
    pub fn to_point(&self) -> Option<DataPoint> {
        self.is_integral().then(|| DataPoint(self.0.iter().map(|c| c.to_integer()).collect()))
    }
}

impl fmt::Display for Centroid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// A multiset of integer vectors stored as distinct points with multiplicities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dataset {
    dimension: usize,
    points: Vec<DataPoint>,
    multiplicities: Vec<BigUint>,
}

impl Dataset {
    /// A dataset where every listed point has multiplicity one (duplicates allowed).
    pub fn new(dimension: usize, points: Vec<DataPoint>) -> Result<Self> {
        let multiplicities = vec![BigUint::one(); points.len()];
        Self::with_multiplicities(dimension, points, multiplicities)
    }

    pub fn with_multiplicities(dimension: usize, points: Vec<DataPoint>, multiplicities: Vec<BigUint>) -> Result<Self> {
        if points.len() != multiplicities.len() {
            return Err(Error::InvalidInstance(format!(
                "{} points but {} multiplicities",
                points.len(),
                multiplicities.len()
            )));
        }
        for p in &points {
            if p.dim() != dimension {
                return Err(Error::DimensionMismatch { expected: dimension, found: p.dim() });
            }
        }
        if multiplicities.iter().any(|m| m.is_zero()) {
            return Err(Error::InvalidInstance("multiplicities must be positive".into()));
        }
        Ok(Self { dimension, points, multiplicities })
    }

    pub fn from_rows(rows: &[&[i64]]) -> Result<Self> {
        let dimension = rows.first().map_or(0, |r| r.len());
        Self::new(dimension, rows.iter().map(|r| DataPoint::from_i64(r)).collect())
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn points(&self) -> &[DataPoint] {
        &self.points
    }

    pub fn multiplicities(&self) -> &[BigUint] {
        &self.multiplicities
    }

    /// Total multiplicity `n`.
    pub fn len(&self) -> BigUint {
        self.multiplicities.iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// A maximal group of identical input vectors.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct InitialCluster {
    pub representative: DataPoint,
    pub size: BigUint,
}

/// Groups equal vectors; the result is sorted lexicographically by representative.
pub fn regularize(dataset: &Dataset) -> Vec<InitialCluster> {
    let mut groups: BTreeMap<&DataPoint, BigUint> = BTreeMap::new();
    for (point, count) in dataset.points.iter().zip(&dataset.multiplicities) {
        *groups.entry(point).or_insert_with(BigUint::zero) += count;
    }
    groups.into_iter().map(|(point, size)| InitialCluster { representative: point.clone(), size }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn groups_duplicates() {
        let ds = Dataset::from_rows(&[&[1, 1], &[0, 0], &[0, 0]]).unwrap();
        let initial = regularize(&ds);
        assert_eq!(
            initial,
            vec![
                InitialCluster { representative: DataPoint::from_i64(&[0, 0]), size: 2u32.into() },
                InitialCluster { representative: DataPoint::from_i64(&[1, 1]), size: 1u32.into() },
            ]
        );
    }

    #[test]
    fn distinct_points_are_singletons_and_empty_is_empty() {
        let ds = Dataset::from_rows(&[&[0], &[1], &[2], &[3], &[4]]).unwrap();
        let initial = regularize(&ds);
        assert_eq!(initial.len(), 5);
        assert!(initial.iter().all(|c| c.size == BigUint::one()));
        let empty = Dataset::new(2, vec![]).unwrap();
        assert!(regularize(&empty).is_empty());
    }

    #[test]
    fn rejects_ragged_rows() {
        let err = Dataset::new(2, vec![DataPoint::from_i64(&[1, 2]), DataPoint::from_i64(&[1])]);
        assert_eq!(err, Err(Error::DimensionMismatch { expected: 2, found: 1 }));
    }

    proptest! {
        #[test]
        fn regularize_partitions_the_multiset(rows in prop::collection::vec(prop::collection::vec(-2i64..3, 2), 0..12)) {
            let points: Vec<DataPoint> = rows.iter().map(|r| DataPoint::from_i64(r)).collect();
            let ds = Dataset::new(2, points.clone()).unwrap();
            let initial = regularize(&ds);
            let mut rebuilt = Vec::new();
            for c in &initial {
                let copies: usize = c.size.clone().try_into().unwrap();
                rebuilt.extend(std::iter::repeat_n(c.representative.clone(), copies));
            }
            let mut expected = points;
            expected.sort();
            prop_assert_eq!(rebuilt, expected);
            for pair in initial.windows(2) {
                prop_assert!(pair[0].representative < pair[1].representative);
            }
        }
    }
}
