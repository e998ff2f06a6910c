//! Cluster Selection: choose one weighted vector per group so that the
//! resulting cluster costs at most `D`.

use std::collections::{BTreeSet, HashSet};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::centroids::{optimal_centroid, WeightedCluster};
use crate::cost::{cost_cmp, cost_le, CostValue, Tolerance};
use crate::data::{Centroid, DataPoint};
use crate::error::{check_cap, Error, Result};
use crate::hypergraph::{build_difference_hypergraph, candidate_coordinate_sets, CandidateMode, PatternCaps};
use crate::metric::{dist, DistanceOrder};
use crate::real::floor_inverse_power;

/// `t` disjoint groups of weighted vectors with a budget.
#[derive(Clone, Debug, PartialEq)]
pub struct SelectionInstance {
    order: DistanceOrder,
    dimension: usize,
    groups: Vec<Vec<DataPoint>>,
    weights: Vec<Vec<BigUint>>,
    budget: CostValue,
}

impl SelectionInstance {
    pub fn new(
        order: DistanceOrder,
        dimension: usize,
        groups: Vec<Vec<DataPoint>>,
        weights: Vec<Vec<BigUint>>,
        budget: CostValue,
    ) -> Result<Self> {
        if groups.is_empty() {
            return Err(Error::InvalidInstance("at least one group is required".into()));
        }
        if groups.len() != weights.len() {
            return Err(Error::InvalidInstance("one weight list per group is required".into()));
        }
        for (g, (points, ws)) in groups.iter().zip(&weights).enumerate() {
            if points.is_empty() {
                return Err(Error::InvalidInstance(format!("group {} is empty", g + 1)));
            }
            if points.len() != ws.len() {
                return Err(Error::InvalidInstance(format!("group {} has mismatched weights", g + 1)));
            }
            if ws.iter().any(Zero::is_zero) {
                return Err(Error::InvalidInstance("weights must be positive".into()));
            }
            if let Some(p) = points.iter().find(|p| p.dim() != dimension) {
                return Err(Error::DimensionMismatch { expected: dimension, found: p.dim() });
            }
        }
        Ok(Self { order, dimension, groups, weights, budget })
    }

    /// Unit weights; the dimension is taken from the first vector.
    pub fn unit(order: DistanceOrder, groups: Vec<Vec<DataPoint>>, budget: CostValue) -> Result<Self> {
        let dimension = groups.first().and_then(|g| g.first()).map_or(0, DataPoint::dim);
        let weights = groups.iter().map(|g| vec![BigUint::one(); g.len()]).collect();
        Self::new(order, dimension, groups, weights, budget)
    }

    pub fn order(&self) -> &DistanceOrder {
        &self.order
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn groups(&self) -> &[Vec<DataPoint>] {
        &self.groups
    }

    pub fn weights(&self) -> &[Vec<BigUint>] {
        &self.weights
    }

    pub fn budget(&self) -> &CostValue {
        &self.budget
    }

    /// Number of groups `t`.
    pub fn t(&self) -> usize {
        self.groups.len()
    }

    /// Total number of vectors `m`.
    pub fn m(&self) -> usize {
        self.groups.iter().map(Vec::len).sum()
    }

    pub fn with_budget(&self, budget: CostValue) -> Self {
        Self { budget, ..self.clone() }
    }

    /// `(group, index, vector, weight)` for every input vector.
    pub fn vectors(&self) -> impl Iterator<Item = (usize, usize, &DataPoint, &BigUint)> {
        self.groups
            .iter()
            .zip(&self.weights)
            .enumerate()
            .flat_map(|(g, (points, ws))| points.iter().zip(ws).enumerate().map(move |(i, (x, w))| (g, i, x, w)))
    }

    /// The weighted cluster formed by one index per group.
    pub fn cluster(&self, chosen: &[usize]) -> Result<WeightedCluster> {
        if chosen.len() != self.t() {
            return Err(Error::InvalidInstance("one index per group is required".into()));
        }
        let points = chosen.iter().enumerate().map(|(g, &i)| self.groups[g][i].clone()).collect();
        let weights = chosen.iter().enumerate().map(|(g, &i)| self.weights[g][i].clone()).collect();
        WeightedCluster::new(points, weights)
    }

    fn all_distinct(&self) -> bool {
        let mut seen = HashSet::new();
        self.vectors().all(|(_, _, x, _)| seen.insert(x))
    }
}

/// One vector per group together with the optimal centroid of the cluster.
#[derive(Clone, Debug, PartialEq)]
pub struct Selection {
    pub chosen: Vec<usize>,
    pub centroid: Centroid,
    pub cost: CostValue,
}

/// Enumeration counters reported by the solvers.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SelectionStats {
    pub centroids_tried: u64,
    pub search_nodes: u64,
    pub coordinate_sets: u64,
    pub tuples_tried: u64,
    pub entered_phase_two: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SelectionResult {
    pub decision: bool,
    /// The witness on yes; [`select_bruteforce`] also reports its optimum on no.
    pub witness: Option<Selection>,
    pub stats: SelectionStats,
}

/// Limits on enumeration sizes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SelectCaps {
    /// Largest number of tuples for the brute-force oracle.
    pub tuples: u128,
    /// Largest number of centroid-search nodes per call.
    pub search_nodes: u128,
    pub patterns: PatternCaps,
}

impl Default for SelectCaps {
    fn default() -> Self {
        Self { tuples: 1_000_000, search_nodes: 50_000_000, patterns: PatternCaps::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct SelectConfig {
    pub tol: Tolerance,
    pub caps: SelectCaps,
    /// Candidate coordinate sets for `p ∈ (0, 1]`; `None` picks exhaustive
    /// when at most 20 coordinates are active and quarter-covered patterns
    /// otherwise.
    pub mode: Option<CandidateMode>,
}

/// Cheapest vector per group for a fixed centroid (lowest index on ties).
pub fn select_fixed_centroid(inst: &SelectionInstance, c: &Centroid, cfg: &SelectConfig) -> Result<SelectionResult> {
    let mut stats = SelectionStats { centroids_tried: 1, ..Default::default() };
    let accepted = greedy(inst, c, &cfg.tol)?;
    let witness = accepted.map(|chosen| finish(inst, chosen)).transpose()?;
    stats.tuples_tried = 1;
    Ok(SelectionResult { decision: witness.is_some(), witness, stats })
}

/// The greedy tuple for `c` when its total is within budget.
fn greedy(inst: &SelectionInstance, c: &Centroid, tol: &Tolerance) -> Result<Option<Vec<usize>>> {
    if c.dim() != inst.dimension {
        return Err(Error::DimensionMismatch { expected: inst.dimension, found: c.dim() });
    }
    let mut total = CostValue::zero();
    let mut chosen = Vec::with_capacity(inst.t());
    for (points, ws) in inst.groups.iter().zip(&inst.weights) {
        let mut best: Option<(usize, CostValue)> = None;
        for (i, (x, w)) in points.iter().zip(ws).enumerate() {
            let cost = dist(&inst.order, x, c)?.scaled(w);
            if best.as_ref().is_none_or(|(_, b)| cost_cmp(&cost, b).is_lt()) {
                best = Some((i, cost));
            }
        }
        let (i, cost) = best.expect("groups are nonempty");
        total = total.checked_add(&cost)?;
        chosen.push(i);
    }
    Ok(cost_le(&total, &inst.budget, tol).then_some(chosen))
}

fn finish(inst: &SelectionInstance, chosen: Vec<usize>) -> Result<Selection> {
    let cluster = inst.cluster(&chosen)?;
    let (centroid, cost) = optimal_centroid(&inst.order, &cluster);
    Ok(Selection { chosen, centroid, cost })
}

/// Exhaustive search over all tuples with exact optimal centroids.
pub fn select_bruteforce(inst: &SelectionInstance, cfg: &SelectConfig) -> Result<SelectionResult> {
    let size = inst.groups.iter().try_fold(1u128, |acc, g| acc.checked_mul(g.len() as u128)).unwrap_or(u128::MAX);
    check_cap("selection tuples", size, cfg.caps.tuples)?;
    let mut stats = SelectionStats::default();
    let mut chosen = vec![0usize; inst.t()];
    let mut best: Option<Selection> = None;
    loop {
        stats.tuples_tried += 1;
        let candidate = finish(inst, chosen.clone())?;
        if best.as_ref().is_none_or(|b| cost_cmp(&candidate.cost, &b.cost).is_lt()) {
            best = Some(candidate);
        }
        let Some(g) = (0..inst.t()).rev().find(|&g| chosen[g] + 1 < inst.groups[g].len()) else {
            break;
        };
        chosen[g] += 1;
        chosen[g + 1..].iter_mut().for_each(|i| *i = 0);
    }
    let best = best.expect("at least one tuple exists");
    let decision = cost_le(&best.cost, &inst.budget, &cfg.tol);
    Ok(SelectionResult { decision, witness: Some(best), stats })
}

/// Depth-first search over centroids whose `i`-th coordinate ranges over
/// `values[i]`, pruned by the cost of the coordinates fixed so far.
struct CentroidSearch<'a> {
    inst: &'a SelectionInstance,
    cfg: &'a SelectConfig,
    /// `coords[g][i][j]` is coordinate `j` of vector `i` in group `g`.
    coords: Vec<Vec<Vec<f64>>>,
    weights: Vec<Vec<f64>>,
    budget: f64,
    tested: HashSet<Centroid>,
    stats: SelectionStats,
    found: Option<Vec<usize>>,
}

impl<'a> CentroidSearch<'a> {
    fn new(inst: &'a SelectionInstance, cfg: &'a SelectConfig) -> Self {
        let coords = inst
            .groups
            .iter()
            .map(|g| g.iter().map(|x| x.coords().iter().map(|v| v.to_f64().unwrap_or(f64::NAN)).collect()).collect())
            .collect();
        let weights =
            inst.weights.iter().map(|ws| ws.iter().map(|w| w.to_f64().unwrap_or(f64::INFINITY)).collect()).collect();
        let budget = inst.budget.to_f64();
        Self {
            inst,
            cfg,
            coords,
            weights,
            budget,
            tested: HashSet::new(),
            stats: SelectionStats::default(),
            found: None,
        }
    }

    fn term(&self, gap: f64) -> f64 {
        match &self.inst.order {
            DistanceOrder::L0 => f64::from(u8::from(gap != 0.0)),
            DistanceOrder::Lp(p) => gap.abs().powf(*p.numer() as f64 / *p.denom() as f64),
            DistanceOrder::L2 => gap * gap,
            DistanceOrder::LInf => gap.abs(),
        }
    }

    fn combine(&self, partial: f64, term: f64) -> f64 {
        match self.inst.order {
            DistanceOrder::LInf => partial.max(term),
            _ => partial + term,
        }
    }

    fn exceeds_budget(&self, bound: f64) -> bool {
        bound > self.budget + 1e-7 * self.budget.abs().max(1.0)
    }

    /// Runs the search; returns true once a passing centroid is found.
    fn run(&mut self, values: &[Vec<BigRational>]) -> Result<bool> {
        if values.iter().any(Vec::is_empty) || values.len() != self.inst.dimension {
            return Ok(false);
        }
        let partial: Vec<Vec<f64>> = self.coords.iter().map(|g| vec![0.0; g.len()]).collect();
        let mut prefix = Vec::with_capacity(values.len());
        self.descend(values, &mut prefix, &partial)
    }

    fn descend(
        &mut self,
        values: &[Vec<BigRational>],
        prefix: &mut Vec<BigRational>,
        partial: &[Vec<f64>],
    ) -> Result<bool> {
        self.stats.search_nodes += 1;
        if u128::from(self.stats.search_nodes) > self.cfg.caps.search_nodes {
            return Err(Error::CapExceeded {
                what: "centroid search nodes",
                size: u128::from(self.stats.search_nodes),
                cap: self.cfg.caps.search_nodes,
            });
        }
        let j = prefix.len();
        if j == values.len() {
            let centroid = Centroid::new(prefix.clone());
            if !self.tested.insert(centroid.clone()) {
                return Ok(false);
            }
            self.stats.centroids_tried += 1;
            if let Some(chosen) = greedy(self.inst, &centroid, &self.cfg.tol)? {
                self.found = Some(chosen);
                return Ok(true);
            }
            return Ok(false);
        }
        for v in &values[j] {
            let vf = v.to_f64().unwrap_or(f64::NAN);
            let mut next = Vec::with_capacity(partial.len());
            let mut bound = 0.0;
            for (g, group) in self.coords.iter().enumerate() {
                let row: Vec<f64> =
                    group.iter().zip(&partial[g]).map(|(x, &acc)| self.combine(acc, self.term(x[j] - vf))).collect();
                bound += row.iter().zip(&self.weights[g]).map(|(d, w)| d * w).fold(f64::INFINITY, f64::min);
                next.push(row);
            }
            if self.exceeds_budget(bound) {
                continue;
            }
            prefix.push(v.clone());
            let hit = self.descend(values, prefix, &next)?;
            prefix.pop();
            if hit {
                return Ok(true);
            }
        }
        Ok(false)
    }

    fn into_result(self) -> Result<SelectionResult> {
        let witness = self.found.map(|chosen| finish(self.inst, chosen)).transpose()?;
        Ok(SelectionResult { decision: witness.is_some(), witness, stats: self.stats })
    }
}

/// Distinct values of coordinate `j` over all input vectors.
fn present_values(inst: &SelectionInstance, j: usize) -> BTreeSet<BigInt> {
    inst.vectors().map(|(_, _, x, _)| x.coords()[j].clone()).collect()
}

fn coordinate_box(inst: &SelectionInstance, j: usize) -> (BigInt, BigInt) {
    let values = present_values(inst, j);
    (values.first().cloned().unwrap_or_default(), values.last().cloned().unwrap_or_default())
}

fn integer(v: &BigInt) -> BigRational {
    BigRational::from_integer(v.clone())
}

/// Rational upper bound on the budget, exact unless the budget is irrational.
fn budget_ratio(inst: &SelectionInstance, tol: &Tolerance) -> BigRational {
    inst.budget.to_ratio().unwrap_or_else(|| inst.budget.eval(crate::cost::EVAL_DIGITS).to_ratio() + tol.value())
}

/// Cluster Selection for `p ∈ (0, 1]`: every input vector as a centroid
/// first, then per pivot of the first group the centroids that differ from it
/// on a candidate coordinate set.
pub fn select_lp01(inst: &SelectionInstance, cfg: &SelectConfig) -> Result<SelectionResult> {
    let DistanceOrder::Lp(p) = inst.order.clone() else {
        return Err(Error::Unsupported(format!("select_lp01 needs p in (0, 1], got {}", inst.order)));
    };
    let mut search = CentroidSearch::new(inst, cfg);
    for (_, _, x, _) in inst.vectors() {
        let values: Vec<Vec<BigRational>> = x.coords().iter().map(|v| vec![integer(v)]).collect();
        if search.run(&values)? {
            return search.into_result();
        }
    }
    search.stats.entered_phase_two = true;
    let budget = budget_ratio(inst, &cfg.tol);
    let limit = budget.floor().to_integer();
    let Some(limit_u) = limit.to_u64() else {
        return Err(Error::InvalidBudget(format!("budget {} is too large", inst.budget)));
    };
    let active: BTreeSet<usize> = (0..inst.dimension).filter(|&j| present_values(inst, j).len() > 1).collect();
    let mode = cfg.mode.unwrap_or(if active.len() <= 20 { CandidateMode::Exhaustive } else { CandidateMode::Paper });
    let present: Vec<BTreeSet<BigInt>> = (0..inst.dimension).map(|j| present_values(inst, j)).collect();
    for (x1, w1) in inst.groups[0].iter().zip(&inst.weights[0]) {
        // A centroid differing from x1 costs x1 at least w(x1).
        if BigInt::from(w1.clone()) > limit {
            continue;
        }
        let radius_bound = &budget / BigRational::from_integer(BigInt::from(w1.clone()));
        let radius = floor_inverse_power(&radius_bound, p);
        let host = build_difference_hypergraph(x1, inst, &inst.budget, &cfg.tol)?;
        let sets = candidate_coordinate_sets(&host, limit_u, mode, &cfg.caps.patterns)?;
        search.stats.coordinate_sets += sets.len() as u64;
        for set in sets.iter().filter(|s| !s.is_empty()) {
            let values: Vec<Vec<BigRational>> = (0..inst.dimension)
                .map(|j| {
                    let pivot = &x1.coords()[j];
                    if set.binary_search(&j).is_err() {
                        return vec![integer(pivot)];
                    }
                    present[j].iter().filter(|v| *v != pivot && (*v - pivot).abs() <= radius).map(integer).collect()
                })
                .collect();
            if search.run(&values)? {
                return search.into_result();
            }
        }
    }
    search.into_result()
}

/// Cluster Selection under squared Euclidean distance.
///
/// Requires pairwise distinct input vectors.
pub fn select_l2(inst: &SelectionInstance, cfg: &SelectConfig) -> Result<SelectionResult> {
    if inst.order != DistanceOrder::L2 {
        return Err(Error::Unsupported(format!("select_l2 needs p = 2, got {}", inst.order)));
    }
    let budget = inst
        .budget
        .to_ratio()
        .ok_or_else(|| Error::InvalidBudget(format!("budget {} must be rational", inst.budget)))?;
    if !inst.all_distinct() {
        return Err(Error::InvalidInstance("select_l2 needs pairwise distinct vectors".into()));
    }
    let mut search = CentroidSearch::new(inst, cfg);
    let t = inst.t();
    let four_d = (&budget * BigRational::from_integer(4.into())).floor().to_integer();
    if BigInt::from(t) > &four_d + 1 {
        return search.into_result();
    }
    let light = four_d.to_u64().unwrap_or(u64::MAX);
    let numerator_bound = &four_d * &four_d * BigInt::from(t - 1);
    let boxes: Vec<(BigInt, BigInt)> = (0..inst.dimension).map(|j| coordinate_box(inst, j)).collect();
    for (gs, _, xs, ws) in inst.vectors() {
        let heavy = ws.to_u64().unwrap_or(u64::MAX);
        for total in achievable_weights(inst, gs, heavy.min(light)) {
            let total = total + BigUint::from(heavy);
            let w_int = BigInt::from(total.clone());
            // w* · ‖x* − c‖² ≤ D bounds every coordinate of the centroid.
            let ball = (&budget * BigRational::from_integer(&w_int * &w_int)
                / BigRational::from_integer(BigInt::from(ws.clone())))
            .floor()
            .to_integer();
            let radius = ball.sqrt();
            let spread = radius.min(numerator_bound.clone());
            let values: Vec<Vec<BigRational>> = (0..inst.dimension)
                .map(|j| {
                    let center = &w_int * &xs.coords()[j];
                    let lo = (&center - &spread).max(&boxes[j].0 * &w_int);
                    let hi = (&center + &spread).min(&boxes[j].1 * &w_int);
                    let mut out = Vec::new();
                    let mut y = lo;
                    while y <= hi {
                        out.push(BigRational::new(y.clone(), w_int.clone()));
                        y += 1;
                    }
                    out
                })
                .collect();
            if search.run(&values)? {
                return search.into_result();
            }
        }
    }
    search.into_result()
}

/// Totals of one weight per group other than `skip`, each weight at most `cap`.
fn achievable_weights(inst: &SelectionInstance, skip: usize, cap: u64) -> BTreeSet<u64> {
    let mut sums = BTreeSet::from([0u64]);
    for (g, ws) in inst.weights.iter().enumerate() {
        if g == skip {
            continue;
        }
        let options: BTreeSet<u64> = ws.iter().filter_map(|w| w.to_u64()).filter(|&w| w <= cap).collect();
        sums = sums.iter().flat_map(|s| options.iter().map(move |w| s + w)).collect();
        if sums.is_empty() {
            break;
        }
    }
    sums
}

/// Cluster Selection under `dist_∞` over half-integral centroids near each
/// vector of the first group.
pub fn select_linf(inst: &SelectionInstance, cfg: &SelectConfig) -> Result<SelectionResult> {
    if inst.order != DistanceOrder::LInf {
        return Err(Error::Unsupported(format!("select_linf needs p = inf, got {}", inst.order)));
    }
    let budget = budget_ratio(inst, &cfg.tol);
    let boxes: Vec<(BigInt, BigInt)> = (0..inst.dimension).map(|j| coordinate_box(inst, j)).collect();
    let two = BigInt::from(2);
    let mut search = CentroidSearch::new(inst, cfg);
    for (x1, w1) in inst.groups[0].iter().zip(&inst.weights[0]) {
        // w(x1) · ‖x1 − c‖∞ ≤ D, in halves.
        let reach = (&budget * BigRational::from_integer(two.clone())
            / BigRational::from_integer(BigInt::from(w1.clone())))
        .floor()
        .to_integer();
        let values: Vec<Vec<BigRational>> = (0..inst.dimension)
            .map(|j| {
                let center = &x1.coords()[j] * &two;
                let lo = (&center - &reach).max(&boxes[j].0 * &two);
                let hi = (&center + &reach).min(&boxes[j].1 * &two);
                let mut out = Vec::new();
                let mut h = lo;
                while h <= hi {
                    out.push(BigRational::new(h.clone(), two.clone()));
                    h += 1;
                }
                out
            })
            .collect();
        if search.run(&values)? {
            return search.into_result();
        }
    }
    search.into_result()
}

/// Cluster Selection under Hamming distance over centroids built from
/// present values.
pub fn select_l0(inst: &SelectionInstance, cfg: &SelectConfig) -> Result<SelectionResult> {
    if inst.order != DistanceOrder::L0 {
        return Err(Error::Unsupported(format!("select_l0 needs p = 0, got {}", inst.order)));
    }
    let values: Vec<Vec<BigRational>> =
        (0..inst.dimension).map(|j| present_values(inst, j).iter().map(integer).collect()).collect();
    let mut search = CentroidSearch::new(inst, cfg);
    search.run(&values)?;
    search.into_result()
}

/// Dispatches to the solver for the instance's distance.
pub fn select(inst: &SelectionInstance, cfg: &SelectConfig) -> Result<SelectionResult> {
    match inst.order {
        DistanceOrder::Lp(_) => select_lp01(inst, cfg),
        DistanceOrder::L2 => select_l2(inst, cfg),
        DistanceOrder::LInf => select_linf(inst, cfg),
        DistanceOrder::L0 => select_l0(inst, cfg),
    }
}
