//! Optimal centroids and exact costs of a fixed weighted cluster.

pub mod simplex;

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::{BigRational, Ratio};
use num_traits::{One, ToPrimitive, Zero};

use crate::cost::{cost_cmp, BasisSum, CostValue};
use crate::data::{Centroid, DataPoint};
use crate::error::{check_cap, Error, Result};
use crate::metric::{dist, DistanceOrder};
use crate::real::{Real, GUARD_DIGITS};

/// A nonempty cluster of points with positive integer weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedCluster {
    points: Vec<DataPoint>,
    weights: Vec<BigUint>,
}

impl WeightedCluster {
    pub fn new(points: Vec<DataPoint>, weights: Vec<BigUint>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidInstance("a cluster needs at least one point".into()));
        }
        if points.len() != weights.len() {
            return Err(Error::InvalidInstance(format!("{} points but {} weights", points.len(), weights.len())));
        }
        if weights.iter().any(Zero::is_zero) {
            return Err(Error::InvalidInstance("weights must be positive".into()));
        }
        let dim = points[0].dim();
        if let Some(bad) = points.iter().find(|p| p.dim() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, found: bad.dim() });
        }
        Ok(Self { points, weights })
    }

    pub fn unit(points: Vec<DataPoint>) -> Result<Self> {
        let weights = vec![BigUint::one(); points.len()];
        Self::new(points, weights)
    }

    pub fn from_rows(rows: &[&[i64]], weights: &[u64]) -> Result<Self> {
        Self::new(
            rows.iter().map(|r| DataPoint::from_i64(r)).collect(),
            weights.iter().map(|&w| BigUint::from(w)).collect(),
        )
    }

    pub fn points(&self) -> &[DataPoint] {
        &self.points
    }

    pub fn weights(&self) -> &[BigUint] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.points[0].dim()
    }

    pub fn total_weight(&self) -> BigUint {
        self.weights.iter().sum()
    }

    fn column(&self, i: usize) -> impl Iterator<Item = (&BigInt, &BigUint)> {
        self.points.iter().map(move |p| &p.coords()[i]).zip(&self.weights)
    }

    /// Distinct values of coordinate `i` with their total weights, ascending.
    fn column_weights(&self, i: usize) -> BTreeMap<&BigInt, BigUint> {
        let mut counts = BTreeMap::new();
        for (value, w) in self.column(i) {
            *counts.entry(value).or_insert_with(BigUint::zero) += w;
        }
        counts
    }
}

/// `Σ w(x) · dist(x, c)` over the cluster.
pub fn cluster_cost(order: &DistanceOrder, cluster: &WeightedCluster, centroid: &Centroid) -> Result<CostValue> {
    let mut total = CostValue::zero();
    for (x, w) in cluster.points.iter().zip(&cluster.weights) {
        total = total.checked_add(&dist(order, x, centroid)?.scaled(w))?;
    }
    Ok(total)
}

/// Per coordinate the lowest weighted median; exact integer cost.
pub fn centroid_l1(cluster: &WeightedCluster) -> (Centroid, CostValue) {
    let total = cluster.total_weight();
    let coords: Vec<BigRational> = (0..cluster.dim())
        .map(|i| {
            let mut seen = BigUint::zero();
            for (value, w) in cluster.column_weights(i) {
                seen += w;
                if &seen * 2u32 >= total {
                    return BigRational::from_integer(value.clone());
                }
            }
            unreachable!("the cumulative weight reaches the total")
        })
        .collect();
    finish(&DistanceOrder::l1(), cluster, Centroid::new(coords))
}

/// Per coordinate the present value minimising `Σ w |x - v|^p`, ties to the
/// lowest value.
///
/// # Panics
/// If `p` is not in `(0, 1)`.
pub fn centroid_lp01(cluster: &WeightedCluster, p: Ratio<u64>) -> (Centroid, CostValue) {
    assert!(!p.is_zero() && p < Ratio::one(), "p must lie strictly between 0 and 1");
    let mut coords = Vec::with_capacity(cluster.dim());
    let mut total = BasisSum::new(p);
    for i in 0..cluster.dim() {
        let column = cluster.column_weights(i);
        let mut best: Option<(&BigInt, CostValue)> = None;
        for &v in column.keys() {
            let mut sum = BasisSum::new(p);
            for (&x, w) in &column {
                sum.add_term((x - v).magnitude(), w);
            }
            let cost = CostValue::Basis(sum);
            if best.as_ref().is_none_or(|(_, b)| cost_cmp(&cost, b).is_lt()) {
                best = Some((v, cost));
            }
        }
        let (value, cost) = best.expect("clusters are nonempty");
        coords.push(BigRational::from_integer(value.clone()));
        if let CostValue::Basis(b) = cost {
            total.add(&b);
        }
    }
    (Centroid::new(coords), CostValue::Basis(total))
}

/// Exact weighted mean; exact rational cost.
pub fn centroid_l2(cluster: &WeightedCluster) -> (Centroid, CostValue) {
    let total = BigInt::from(cluster.total_weight());
    let coords = (0..cluster.dim())
        .map(|i| {
            let sum: BigInt = cluster.column(i).map(|(x, w)| x * BigInt::from(w.clone())).sum();
            BigRational::new(sum, total.clone())
        })
        .collect();
    finish(&DistanceOrder::L2, cluster, Centroid::new(coords))
}

/// Per coordinate the weighted mode, ties to the lowest value.
pub fn centroid_l0(cluster: &WeightedCluster) -> (Centroid, CostValue) {
    let coords = (0..cluster.dim())
        .map(|i| {
            let mut best: Option<(&BigInt, BigUint)> = None;
            for (value, w) in cluster.column_weights(i) {
                if best.as_ref().is_none_or(|(_, b)| w > *b) {
                    best = Some((value, w));
                }
            }
            BigRational::from_integer(best.expect("clusters are nonempty").0.clone())
        })
        .collect();
    finish(&DistanceOrder::L0, cluster, Centroid::new(coords))
}

/// Exact optimum of `min Σ w_i r_i` with `|x_i[j] - c_j| <= r_i`.
///
/// Boxes of radius `r_i` around the points share a common point exactly when
/// they intersect pairwise, so the program is solved in the equivalent form
/// `r_i + r_k >= dist_∞(x_i, x_k)`, `r >= 0`, through its packing dual. The
/// centroid is the lower corner of the intersection of the optimal boxes.
pub fn centroid_linf_lp(cluster: &WeightedCluster) -> (Centroid, CostValue) {
    let n = cluster.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |k| (i, k))).collect();
    let mut a = vec![vec![BigRational::zero(); pairs.len()]; n];
    let mut c = Vec::with_capacity(pairs.len());
    for (col, &(i, k)) in pairs.iter().enumerate() {
        a[i][col] = BigRational::one();
        a[k][col] = BigRational::one();
        let gap = dist(&DistanceOrder::LInf, &cluster.points[i], &cluster.points[k])
            .expect("equal dimensions")
            .to_ratio()
            .expect("integer points have rational distance");
        c.push(gap);
    }
    let b: Vec<BigRational> = cluster.weights.iter().map(|w| BigRational::from_integer(w.clone().into())).collect();
    let solution = simplex::maximize(&a, &b, &c).expect("the packing program is bounded");
    let radii = solution.dual;
    let coords = (0..cluster.dim())
        .map(|j| {
            cluster
                .points
                .iter()
                .zip(&radii)
                .map(|(x, r)| BigRational::from_integer(x.coords()[j].clone()) - r)
                .max()
                .expect("clusters are nonempty")
        })
        .collect();
    let (centroid, cost) = finish(&DistanceOrder::LInf, cluster, Centroid::new(coords));
    debug_assert_eq!(cost.to_ratio(), Some(solution.value));
    (centroid, cost)
}

/// Twice the optimum of `min Σ w_i r_i` with `r_i + r_k >= d_ik`, `r >= 0`.
///
/// Splitting `r` into row and column copies gives a transportation problem
/// with supplies and demands `w` and profit `d_ik` off the diagonal, solved by
/// successive shortest paths. `d` must be symmetric and nonnegative.
pub fn pairwise_cover_doubled(w: &[i128], d: &[Vec<i128>]) -> i128 {
    let n = w.len();
    if n < 2 {
        return 0;
    }
    let profit = |i: usize, k: usize| if i == k { 0 } else { d[i][k] };
    let total: i128 = w.iter().sum();
    let mut flow = vec![vec![0i128; n]; n];
    let (mut supplied, mut received) = (vec![0i128; n], vec![0i128; n]);
    // rows 0..n, columns n..2n, sink 2n, source 2n + 1
    let (sink, source, size) = (2 * n, 2 * n + 1, 2 * n + 2);
    let mut pot = vec![0i128; size];
    for k in 0..n {
        pot[n + k] = -(0..n).map(|i| profit(i, k)).max().unwrap_or(0);
    }
    pot[sink] = pot[n..2 * n].iter().copied().min().unwrap_or(0);
    let mut sent = 0i128;
    while sent < total {
        let mut dist = vec![i128::MAX; size];
        let mut prev = vec![usize::MAX; size];
        let mut done = vec![false; size];
        dist[source] = 0;
        while let Some(u) = (0..size).filter(|&u| !done[u] && dist[u] < i128::MAX).min_by_key(|&u| dist[u]) {
            done[u] = true;
            let mut relax = |v: usize, cost: i128| {
                let candidate = dist[u] + cost + pot[u] - pot[v];
                if candidate < dist[v] {
                    dist[v] = candidate;
                    prev[v] = u;
                }
            };
            if u == source {
                for i in (0..n).filter(|&i| supplied[i] < w[i]) {
                    relax(i, 0);
                }
            } else if u < n {
                for k in 0..n {
                    relax(n + k, -profit(u, k));
                }
            } else if u < 2 * n {
                let k = u - n;
                for i in (0..n).filter(|&i| flow[i][k] > 0) {
                    relax(i, profit(i, k));
                }
                if received[k] < w[k] {
                    relax(sink, 0);
                }
            }
        }
        assert!(dist[sink] < i128::MAX, "the transportation problem is balanced");
        let mut path = Vec::new();
        let mut v = sink;
        while v != source {
            path.push((prev[v], v));
            v = prev[v];
        }
        let mut amount = total - sent;
        for &(u, v) in &path {
            if u == source {
                amount = amount.min(w[v] - supplied[v]);
            } else if v == sink {
                amount = amount.min(w[u - n] - received[u - n]);
            } else if u >= n {
                amount = amount.min(flow[v][u - n]);
            }
        }
        for &(u, v) in &path {
            if u == source {
                supplied[v] += amount;
            } else if v == sink {
                received[u - n] += amount;
            } else if u < n {
                flow[u][v - n] += amount;
            } else {
                flow[v][u - n] -= amount;
            }
        }
        sent += amount;
        for u in 0..size {
            if dist[u] < i128::MAX {
                pot[u] += dist[u];
            }
        }
    }
    (0..n).flat_map(|i| (0..n).map(move |k| (i, k))).map(|(i, k)| flow[i][k] * profit(i, k)).sum()
}

/// Exhaustive search over half-integral points of the cluster's bounding box.
pub fn centroid_linf_grid(cluster: &WeightedCluster, cap: u128) -> Result<(Centroid, CostValue)> {
    let dim = cluster.dim();
    let mut lows = Vec::with_capacity(dim);
    let mut steps = Vec::with_capacity(dim);
    let mut size: u128 = 1;
    for i in 0..dim {
        let lo = cluster.column(i).map(|(x, _)| x).min().expect("nonempty").clone();
        let hi = cluster.column(i).map(|(x, _)| x).max().expect("nonempty").clone();
        let count = ((hi - &lo) * 2u32 + 1u32).to_u128().unwrap_or(u128::MAX);
        size = size.saturating_mul(count);
        lows.push(BigRational::from_integer(lo));
        steps.push(count);
    }
    check_cap("half-integral grid", size, cap)?;
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let mut offsets = vec![0u128; dim];
    let mut best: Option<(Centroid, CostValue)> = None;
    loop {
        let coords = (0..dim).map(|i| &lows[i] + &half * BigRational::from_integer(BigInt::from(offsets[i]))).collect();
        let centroid = Centroid::new(coords);
        let cost = cluster_cost(&DistanceOrder::LInf, cluster, &centroid)?;
        if best.as_ref().is_none_or(|(_, b)| cost_cmp(&cost, b).is_lt()) {
            best = Some((centroid, cost));
        }
        let Some(i) = (0..dim).rev().find(|&i| offsets[i] + 1 < steps[i]) else {
            break;
        };
        offsets[i] += 1;
        offsets[i + 1..].iter_mut().for_each(|o| *o = 0);
    }
    Ok(best.expect("the grid contains at least one point"))
}

/// Optimal centroid value and cost contribution of a coordinate holding `a`
/// zeros and `b` ones under `Σ |x - c|^p` with `p > 1`.
pub fn binary_coordinate_cost(a: u64, b: u64, p: Ratio<u64>, digits: u32) -> Result<(Real, Real)> {
    if p <= Ratio::one() {
        return Err(Error::InvalidOrder(format!("the binary coordinate formula needs p > 1, got {p}")));
    }
    if a + b == 0 {
        return Err(Error::InvalidInstance("the coordinate needs at least one entry".into()));
    }
    let work = digits + GUARD_DIGITS;
    let q = p - Ratio::one();
    let inverse = q.recip();
    let wa = Real::int_pow(&BigUint::from(a), inverse, work);
    let wb = Real::int_pow(&BigUint::from(b), inverse, work);
    let denom = wa.add(&wb);
    let centroid = wb.div(&denom);
    let contribution = Real::from_int(a * b, work).div(&denom.pow(q));
    Ok((centroid.with_digits(digits), contribution.with_digits(digits)))
}

/// The optimal centroid and cost under the active distance.
pub fn optimal_centroid(order: &DistanceOrder, cluster: &WeightedCluster) -> (Centroid, CostValue) {
    match order {
        DistanceOrder::L0 => centroid_l0(cluster),
        DistanceOrder::Lp(p) if p.is_one() => centroid_l1(cluster),
        DistanceOrder::Lp(p) => centroid_lp01(cluster, *p),
        DistanceOrder::L2 => centroid_l2(cluster),
        DistanceOrder::LInf => centroid_linf_lp(cluster),
    }
}

fn finish(order: &DistanceOrder, cluster: &WeightedCluster, centroid: Centroid) -> (Centroid, CostValue) {
    let cost = cluster_cost(order, cluster, &centroid).expect("centroid matches the cluster");
    (centroid, cost)
}

#[cfg(test)]
mod tests;
