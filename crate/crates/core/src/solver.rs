//! k-Clustering: the color-coding reduction to Cluster Selection and a
//! brute-force oracle over regular clusterings.

use std::collections::{BTreeMap, HashMap};
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::centroids::{optimal_centroid, pairwise_cover_doubled, WeightedCluster};
use crate::cost::{cost_cmp, cost_le, enumerate_cost_set, CostSet, CostValue, Tolerance, EVAL_DIGITS};
use crate::data::{regularize, Centroid, Dataset, InitialCluster};
use crate::error::{check_cap, Error, Result};
use crate::metric::{alpha_for, DistanceOrder};
use crate::selection::{select, SelectConfig, Selection, SelectionInstance};

/// A k-Clustering instance.
#[derive(Clone, Debug, PartialEq)]
pub struct ClusteringInstance {
    dataset: Dataset,
    k: usize,
    budget: CostValue,
    order: DistanceOrder,
}

impl ClusteringInstance {
    pub fn new(dataset: Dataset, k: usize, budget: CostValue, order: DistanceOrder) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidInstance("k must be positive".into()));
        }
        Ok(Self { dataset, k, budget, order })
    }

    pub fn dataset(&self) -> &Dataset {
        &self.dataset
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn budget(&self) -> &CostValue {
        &self.budget
    }

    pub fn order(&self) -> &DistanceOrder {
        &self.order
    }

    pub fn with_budget(&self, budget: CostValue) -> Self {
        Self { budget, ..self.clone() }
    }
}

/// A partition of the dataset with optimal centroids and exact costs.
#[derive(Clone, Debug, PartialEq)]
pub struct Clustering {
    pub clusters: Vec<WeightedCluster>,
    pub centroids: Vec<Centroid>,
    pub costs: Vec<CostValue>,
    pub total_cost: CostValue,
}

impl Clustering {
    /// Builds the clustering whose clusters are unions of the listed initial clusters.
    pub fn from_groups(order: &DistanceOrder, initial: &[InitialCluster], groups: &[Vec<usize>]) -> Result<Self> {
        let mut clusters = Vec::with_capacity(groups.len());
        let mut centroids = Vec::with_capacity(groups.len());
        let mut costs = Vec::with_capacity(groups.len());
        for group in groups {
            let cluster = WeightedCluster::new(
                group.iter().map(|&i| initial[i].representative.clone()).collect(),
                group.iter().map(|&i| initial[i].size.clone()).collect(),
            )?;
            let (centroid, cost) = optimal_centroid(order, &cluster);
            clusters.push(cluster);
            centroids.push(centroid);
            costs.push(cost);
        }
        let total_cost = CostValue::sum(&costs)?;
        Ok(Self { clusters, centroids, costs, total_cost })
    }

    pub fn len(&self) -> usize {
        self.clusters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clusters.is_empty()
    }
}

/// Families of pairwise disjoint color sets, each of size at least two.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ColorPartition {
    parts: Vec<Vec<usize>>,
}

impl ColorPartition {
    pub fn new(mut parts: Vec<Vec<usize>>) -> Result<Self> {
        for part in &mut parts {
            part.sort_unstable();
            if part.len() < 2 {
                return Err(Error::InvalidInstance("every color part needs at least two colors".into()));
            }
        }
        parts.sort();
        let mut all: Vec<usize> = parts.iter().flatten().copied().collect();
        all.sort_unstable();
        if all.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidInstance("color parts must be disjoint".into()));
        }
        Ok(Self { parts })
    }

    pub fn parts(&self) -> &[Vec<usize>] {
        &self.parts
    }
}

/// How colorings are drawn.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IterationPolicy {
    /// `min(⌈e^T⌉, caps.max_iterations)` seeded random colorings.
    Auto,
    /// A fixed number of seeded random colorings.
    Iterations(u64),
    /// Every coloring up to renaming of colors; exact.
    Exhaustive,
}

/// How the least feasible cost of a color part is located in `𝒟`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MinCostSearch {
    Ascending,
    /// Binary search, relying on monotonicity of selection in the budget.
    Bisection,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolveCaps {
    pub max_iterations: u64,
    /// Largest number of colorings for the exhaustive policy.
    pub colorings: u128,
    /// Largest number of colors `T`.
    pub colors: u64,
    /// Largest number of color partitions examined per coloring.
    pub partitions: u128,
}

impl Default for SolveCaps {
    fn default() -> Self {
        Self { max_iterations: 100_000, colorings: 1_000_000, colors: 10_000, partitions: 1_000_000 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveConfig {
    pub seed: u64,
    pub policy: IterationPolicy,
    pub caps: SolveCaps,
    pub tol: Tolerance,
    pub select: SelectConfig,
    pub min_search: MinCostSearch,
    pub jobs: usize,
}

impl Default for SolveConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            policy: IterationPolicy::Auto,
            caps: SolveCaps::default(),
            tol: Tolerance::default(),
            select: SelectConfig::default(),
            min_search: MinCostSearch::Ascending,
            jobs: 1,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SolveStats {
    pub colors: u64,
    pub planned_iterations: u64,
    pub iterations: u64,
    pub partitions_tried: u64,
    pub selection_calls: u64,
    /// Probability that one of the planned colorings separates a fixed
    /// solution; 1 for the exhaustive policy.
    pub confidence: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveOutcome {
    pub decision: bool,
    pub clustering: Option<Clustering>,
    pub stats: SolveStats,
}

/// `|𝓘| - Σ|P| + |𝒫|`.
pub fn cluster_count(num_initial: usize, part: &ColorPartition) -> usize {
    let merged: usize = part.parts.iter().map(Vec::len).sum();
    num_initial + part.parts.len() - merged
}

/// Every family of disjoint subsets of `used` with all parts of size at least
/// two, in canonical order.
pub fn enumerate_color_partitions(colors: usize, used: &[usize]) -> Result<Vec<ColorPartition>> {
    if colors == 0 {
        return Err(Error::InvalidInstance("at least one color is required".into()));
    }
    let mut used: Vec<usize> = used.to_vec();
    used.sort_unstable();
    used.dedup();
    if used.iter().any(|&c| c >= colors) {
        return Err(Error::InvalidInstance(format!("colors must lie in 0..{colors}")));
    }
    let mut out = Vec::new();
    families(&used, None, &mut |parts| {
        out.push(ColorPartition { parts: parts.to_vec() });
        true
    });
    out.sort();
    Ok(out)
}

/// Visits families over `colors`; with `excess`, only those with
/// `Σ(|P| - 1) = excess`. Stops when `visit` returns false.
fn families(colors: &[usize], excess: Option<usize>, visit: &mut dyn FnMut(&[Vec<usize>]) -> bool) {
    let mut parts: Vec<Vec<usize>> = Vec::new();
    families_from(colors, 0, excess, &mut parts, visit);
}

fn families_from(
    colors: &[usize],
    index: usize,
    excess: Option<usize>,
    parts: &mut Vec<Vec<usize>>,
    visit: &mut dyn FnMut(&[Vec<usize>]) -> bool,
) -> bool {
    let current: usize = parts.iter().map(|p| p.len() - 1).sum();
    let open_singletons = parts.iter().filter(|p| p.len() == 1).count();
    if let Some(target) = excess {
        // Each open singleton still needs a partner, which adds excess.
        if current + open_singletons > target {
            return true;
        }
        if current + (colors.len() - index) < target + open_singletons.saturating_sub(colors.len() - index) {
            return true;
        }
    }
    if index == colors.len() {
        if open_singletons > 0 || excess.is_some_and(|t| t != current) {
            return true;
        }
        return visit(parts);
    }
    let color = colors[index];
    // Leave the color out.
    if !families_from(colors, index + 1, excess, parts, visit) {
        return false;
    }
    // Join an existing part.
    for i in 0..parts.len() {
        parts[i].push(color);
        let keep = families_from(colors, index + 1, excess, parts, visit);
        parts[i].pop();
        if !keep {
            return false;
        }
    }
    // Open a new part.
    parts.push(vec![color]);
    let keep = families_from(colors, index + 1, excess, parts, visit);
    parts.pop();
    keep
}

/// Least feasible cost per part content, shared across colorings.
type PartMemo = HashMap<Vec<Vec<usize>>, Option<Selection>>;

struct ColoringSolver<'a> {
    inst: &'a ClusteringInstance,
    cfg: &'a SolveConfig,
    initial: &'a [InitialCluster],
    costs: &'a CostSet,
    alpha: BigRational,
    memo: PartMemo,
    stats: SolveStats,
}

impl ColoringSolver<'_> {
    /// The groups of composite clusters when the coloring admits a solution.
    fn try_coloring(&mut self, coloring: &[usize]) -> Result<Option<Vec<Vec<usize>>>> {
        let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (i, &c) in coloring.iter().enumerate() {
            classes.entry(c).or_default().push(i);
        }
        let used: Vec<usize> = classes.keys().copied().collect();
        let excess = self.initial.len() - self.inst.k;
        let mut found: Option<Vec<Vec<usize>>> = None;
        let mut error: Option<Error> = None;
        let mut examined: u128 = 0;
        let cap = self.cfg.caps.partitions;
        let mut candidates = Vec::new();
        families(&used, Some(excess), &mut |parts| {
            examined += 1;
            if examined > cap {
                error = Some(Error::CapExceeded { what: "color partitions", size: examined, cap });
                return false;
            }
            candidates.push(parts.to_vec());
            true
        });
        if let Some(e) = error {
            return Err(e);
        }
        for parts in candidates {
            self.stats.partitions_tried += 1;
            let mut total = CostValue::zero();
            let mut composite = Vec::with_capacity(parts.len());
            let mut feasible = true;
            for part in &parts {
                let key: Vec<Vec<usize>> = part.iter().map(|c| classes[c].clone()).collect();
                let Some(selection) = self.least_cost(&key)? else {
                    feasible = false;
                    break;
                };
                total = total.checked_add(&selection.cost)?;
                if !cost_le(&total, &self.inst.budget, &self.cfg.tol) {
                    feasible = false;
                    break;
                }
                composite.push(key.iter().zip(&selection.chosen).map(|(g, &i)| g[i]).collect());
            }
            if feasible {
                found = Some(composite);
                break;
            }
        }
        Ok(found)
    }

    /// The least `d ∈ 𝒟` for which the part's selection instance is a yes,
    /// with its witness.
    fn least_cost(&mut self, key: &[Vec<usize>]) -> Result<Option<Selection>> {
        if let Some(hit) = self.memo.get(key) {
            return Ok(hit.clone());
        }
        let groups = key.iter().map(|g| g.iter().map(|&i| self.initial[i].representative.clone()).collect()).collect();
        let weights = key.iter().map(|g| g.iter().map(|&i| self.initial[i].size.clone()).collect()).collect();
        let base = SelectionInstance::new(
            self.inst.order.clone(),
            self.inst.dataset.dimension(),
            groups,
            weights,
            self.inst.budget.clone(),
        )?;
        // A composite cluster of s initial clusters costs at least α(s - 1).
        let floor = CostValue::Rational(&self.alpha * BigRational::from_integer((key.len() - 1).into()));
        let members: Vec<&CostValue> = self.costs.members().iter().filter(|d| cost_cmp(d, &floor).is_ge()).collect();
        let attempt = |d: &CostValue, stats: &mut SolveStats| -> Result<Option<Selection>> {
            stats.selection_calls += 1;
            let result = select(&base.with_budget(d.clone()), &self.cfg.select)?;
            Ok(if result.decision { result.witness } else { None })
        };
        let answer = match self.cfg.min_search {
            MinCostSearch::Ascending => {
                let mut answer = None;
                for d in &members {
                    if let Some(w) = attempt(d, &mut self.stats)? {
                        answer = Some(w);
                        break;
                    }
                }
                answer
            }
            MinCostSearch::Bisection => {
                let (mut lo, mut hi) = (0usize, members.len());
                let mut best = None;
                while lo < hi {
                    let mid = (lo + hi) / 2;
                    match attempt(members[mid], &mut self.stats)? {
                        Some(w) => {
                            best = Some(w);
                            hi = mid;
                        }
                        None => lo = mid + 1,
                    }
                }
                best
            }
        };
        self.memo.insert(key.to_vec(), answer.clone());
        Ok(answer)
    }
}

fn ceil_colors(budget: &CostValue, alpha: &BigRational) -> Result<u64> {
    let value = budget.to_ratio().unwrap_or_else(|| budget.eval(EVAL_DIGITS).to_ratio());
    let t = (value * BigRational::from_integer(2.into()) / alpha).ceil().to_integer();
    t.to_u64().ok_or_else(|| Error::InvalidBudget(format!("budget {budget} needs too many colors")))
}

/// Number of ways to split `n` labelled items into at most `blocks` unlabelled blocks.
fn colorings_up_to_renaming(n: usize, blocks: usize) -> u128 {
    // Stirling numbers of the second kind, row by row.
    let mut row = vec![1u128];
    for i in 1..=n {
        let mut next = vec![0u128; i + 1];
        for (j, value) in next.iter_mut().enumerate().skip(1) {
            let stay = row.get(j).map_or(0, |s| s.saturating_mul(j as u128));
            let open = row.get(j - 1).copied().unwrap_or(0);
            *value = stay.saturating_add(open);
        }
        row = next;
    }
    row.iter().take(blocks + 1).fold(0u128, |acc, s| acc.saturating_add(*s))
}

/// Decides k-Clustering by color coding; a no is exact only for the
/// exhaustive policy.
pub fn solve_color_coding(inst: &ClusteringInstance, cfg: &SolveConfig) -> Result<SolveOutcome> {
    let initial = regularize(&inst.dataset);
    let n0 = initial.len();
    let mut stats = SolveStats { confidence: 1.0, ..SolveStats::default() };
    if inst.budget.to_f64() < 0.0 {
        return Err(Error::InvalidBudget(format!("negative budget {}", inst.budget)));
    }
    if inst.k >= n0 {
        let groups: Vec<Vec<usize>> = (0..n0).map(|i| vec![i]).collect();
        let clustering = Clustering::from_groups(&inst.order, &initial, &groups)?;
        return Ok(SolveOutcome { decision: true, clustering: Some(clustering), stats });
    }
    let alpha = alpha_for(&inst.order);
    let excess = n0 - inst.k;
    let floor = CostValue::Rational(&alpha * BigRational::from_integer(excess.into()));
    if !cost_le(&floor, &inst.budget, &cfg.tol) {
        return Ok(SolveOutcome { decision: false, clustering: None, stats });
    }
    let colors = ceil_colors(&inst.budget, &alpha)?;
    check_cap("colors", u128::from(colors), u128::from(cfg.caps.colors))?;
    stats.colors = colors;
    let n_total = inst.dataset.len().to_usize().unwrap_or(usize::MAX);
    let costs = enumerate_cost_set(&inst.order, &inst.budget, Some(n_total), &cfg.tol)?;
    let t = colors as usize;

    let planned = match cfg.policy {
        IterationPolicy::Exhaustive => {
            let count = colorings_up_to_renaming(n0, t);
            check_cap("colorings", count, cfg.caps.colorings)?;
            count as u64
        }
        IterationPolicy::Iterations(n) => n,
        IterationPolicy::Auto => {
            let full = (colors as f64).exp().ceil();
            if full >= cfg.caps.max_iterations as f64 {
                cfg.caps.max_iterations
            } else {
                full as u64
            }
        }
    };
    stats.planned_iterations = planned;
    if cfg.policy != IterationPolicy::Exhaustive {
        let p = (-(colors as f64)).exp();
        stats.confidence = 1.0 - (1.0 - p).powf(planned as f64);
    }

    let colorings: Vec<Vec<usize>> = match cfg.policy {
        IterationPolicy::Exhaustive => restricted_growth_strings(n0, t),
        _ => Vec::new(),
    };
    let coloring_at = |index: u64| -> Vec<usize> {
        match cfg.policy {
            IterationPolicy::Exhaustive => colorings[index as usize].clone(),
            _ => {
                let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
                rng.set_stream(index);
                (0..n0).map(|_| rng.random_range(0..t)).collect()
            }
        }
    };

    let best = AtomicU64::new(u64::MAX);
    let jobs = cfg.jobs.max(1);
    let worker = |tid: usize| -> Result<(Option<(u64, Vec<Vec<usize>>)>, SolveStats)> {
        let mut solver = ColoringSolver {
            inst,
            cfg,
            initial: &initial,
            costs: &costs,
            alpha: alpha.clone(),
            memo: HashMap::new(),
            stats: SolveStats::default(),
        };
        let mut index = tid as u64;
        while index < planned && index < best.load(AtomicOrdering::SeqCst) {
            solver.stats.iterations += 1;
            if let Some(groups) = solver.try_coloring(&coloring_at(index))? {
                best.fetch_min(index, AtomicOrdering::SeqCst);
                return Ok((Some((index, groups)), solver.stats));
            }
            index += jobs as u64;
        }
        Ok((None, solver.stats))
    };
    let results: Vec<Result<(Option<(u64, Vec<Vec<usize>>)>, SolveStats)>> = if jobs == 1 {
        vec![worker(0)]
    } else {
        std::thread::scope(|scope| {
            let handles: Vec<_> = (0..jobs).map(|tid| scope.spawn(move || worker(tid))).collect();
            handles.into_iter().map(|h| h.join().expect("worker thread panicked")).collect()
        })
    };
    let mut winner: Option<(u64, Vec<Vec<usize>>)> = None;
    for result in results {
        let (found, s) = result?;
        stats.iterations += s.iterations;
        stats.partitions_tried += s.partitions_tried;
        stats.selection_calls += s.selection_calls;
        if let Some((index, groups)) = found {
            if winner.as_ref().is_none_or(|(w, _)| index < *w) {
                winner = Some((index, groups));
            }
        }
    }
    let Some((_, composite)) = winner else {
        return Ok(SolveOutcome { decision: false, clustering: None, stats });
    };
    let mut merged = vec![false; n0];
    for group in &composite {
        for &i in group {
            merged[i] = true;
        }
    }
    let mut groups = composite;
    groups.extend((0..n0).filter(|&i| !merged[i]).map(|i| vec![i]));
    let clustering = Clustering::from_groups(&inst.order, &initial, &groups)?;
    debug_assert!(cost_le(&clustering.total_cost, &inst.budget, &cfg.tol));
    Ok(SolveOutcome { decision: true, clustering: Some(clustering), stats })
}

/// All colorings of `n` items with at most `blocks` colors, one per renaming
/// class.
fn restricted_growth_strings(n: usize, blocks: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(n);
    fn extend(n: usize, blocks: usize, current: &mut Vec<usize>, used: usize, out: &mut Vec<Vec<usize>>) {
        if current.len() == n {
            out.push(current.clone());
            return;
        }
        for c in 0..(used + 1).min(blocks) {
            current.push(c);
            extend(n, blocks, current, used.max(c + 1), out);
            current.pop();
        }
    }
    if blocks > 0 || n == 0 {
        extend(n, blocks, &mut current, 0, &mut out);
    }
    out
}

/// Limits for the brute-force oracle.
#[derive(Clone, Debug, PartialEq)]
pub struct BruteForceConfig {
    pub tol: Tolerance,
    /// Largest number of search nodes.
    pub nodes: u128,
    /// Largest number of initial clusters.
    pub initial_clusters: usize,
}

impl Default for BruteForceConfig {
    fn default() -> Self {
        Self { tol: Tolerance::default(), nodes: 100_000_000, initial_clusters: 128 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BruteForceOutcome {
    pub decision: bool,
    pub clustering: Clustering,
    pub min_cost: CostValue,
    pub nodes: u64,
}

struct BruteForce<'a> {
    order: &'a DistanceOrder,
    initial: &'a [InitialCluster],
    alpha: f64,
    cap: u128,
    nodes: u64,
    memo: HashMap<u128, (CostValue, f64)>,
    best: Option<(CostValue, f64, Vec<Vec<usize>>)>,
}

impl BruteForce<'_> {
    fn cluster_cost(&mut self, members: &[usize]) -> (CostValue, f64) {
        let mask = members.iter().fold(0u128, |m, &i| m | 1 << i);
        if let Some(hit) = self.memo.get(&mask) {
            return hit.clone();
        }
        let cluster = WeightedCluster::new(
            members.iter().map(|&i| self.initial[i].representative.clone()).collect(),
            members.iter().map(|&i| self.initial[i].size.clone()).collect(),
        )
        .expect("initial clusters form valid clusters");
        let (_, cost) = optimal_centroid(self.order, &cluster);
        let approx = cost.to_f64();
        self.memo.insert(mask, (cost.clone(), approx));
        (cost, approx)
    }

    fn hopeless(&self, bound: f64) -> bool {
        self.best.as_ref().is_some_and(|(_, b, _)| bound > b + 1e-9 * b.abs().max(1.0))
    }

    /// Chooses composite clusters with smallest members in ascending order.
    fn search(
        &mut self,
        start: usize,
        remaining: usize,
        used: u128,
        cost: &CostValue,
        approx: f64,
        chosen: &mut Vec<Vec<usize>>,
    ) -> Result<()> {
        self.nodes += 1;
        check_cap("clustering search nodes", u128::from(self.nodes), self.cap)?;
        if remaining == 0 {
            if self.best.as_ref().is_none_or(|(b, _, _)| cost_cmp(cost, b).is_lt()) {
                self.best = Some((cost.clone(), approx, chosen.clone()));
            }
            return Ok(());
        }
        if self.hopeless(approx + self.alpha * remaining as f64) {
            return Ok(());
        }
        let n = self.initial.len();
        let free: Vec<usize> = (start..n).filter(|&i| used >> i & 1 == 0).collect();
        if free.len() < remaining + 1 {
            return Ok(());
        }
        let first = free[0];
        // `first` joins a composite cluster with 1..=remaining later items.
        let rest = &free[1..];
        let mut partners = Vec::new();
        self.with_partners(first, rest, 0, remaining, &mut partners, remaining, used, cost, approx, chosen)?;
        // `first` stays a simple cluster.
        self.search(first + 1, remaining, used | 1 << first, cost, approx, chosen)
    }

    #[allow(clippy::too_many_arguments)]
    fn with_partners(
        &mut self,
        first: usize,
        rest: &[usize],
        from: usize,
        limit: usize,
        partners: &mut Vec<usize>,
        remaining: usize,
        used: u128,
        cost: &CostValue,
        approx: f64,
        chosen: &mut Vec<Vec<usize>>,
    ) -> Result<()> {
        if !partners.is_empty() {
            let mut members = vec![first];
            members.extend_from_slice(partners);
            let (c, a) = self.cluster_cost(&members);
            let left = remaining - partners.len();
            if !self.hopeless(approx + a + self.alpha * left as f64) {
                let total = cost.checked_add(&c)?;
                let mask = members.iter().fold(used, |m, &i| m | 1 << i);
                chosen.push(members);
                self.search(first + 1, left, mask, &total, approx + a, chosen)?;
                chosen.pop();
            }
        }
        if partners.len() == limit {
            return Ok(());
        }
        for i in from..rest.len() {
            partners.push(rest[i]);
            self.with_partners(first, rest, i + 1, limit, partners, remaining, used, cost, approx, chosen)?;
            partners.pop();
        }
        Ok(())
    }
}

/// Minimum cost over regular clusterings with at most `k` clusters.
pub fn solve_bruteforce(inst: &ClusteringInstance, cfg: &BruteForceConfig) -> Result<BruteForceOutcome> {
    let initial = regularize(&inst.dataset);
    let n0 = initial.len();
    check_cap("initial clusters", n0 as u128, cfg.initial_clusters.min(128) as u128)?;
    let excess = n0.saturating_sub(inst.k);
    let mut search = BruteForce {
        initial: &initial,
        order: &inst.order,
        alpha: alpha_for(&inst.order).to_f64().unwrap_or(0.0),
        cap: cfg.nodes,
        nodes: 0,
        memo: HashMap::new(),
        best: None,
    };
    let mut chosen = Vec::new();
    search.search(0, excess, 0, &CostValue::zero(), 0.0, &mut chosen)?;
    let nodes = search.nodes;
    let (min_cost, _, composite) = search.best.ok_or_else(|| Error::InvalidInstance("no clustering exists".into()))?;
    let mut merged = vec![false; n0];
    composite.iter().flatten().for_each(|&i| merged[i] = true);
    let mut groups = composite;
    groups.extend((0..n0).filter(|&i| !merged[i]).map(|i| vec![i]));
    let clustering = Clustering::from_groups(&inst.order, &initial, &groups)?;
    let decision = cost_le(&min_cost, &inst.budget, &cfg.tol);
    Ok(BruteForceOutcome { decision, clustering, min_cost, nodes })
}

/// Limits for the exact L∞ two-clustering search.
#[derive(Clone, Debug, PartialEq)]
pub struct BipartitionConfig {
    pub tol: Tolerance,
    /// Largest number of search nodes.
    pub nodes: u128,
}

impl Default for BipartitionConfig {
    fn default() -> Self {
        Self { tol: Tolerance::default(), nodes: 50_000_000 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BipartitionOutcome {
    pub decision: bool,
    pub clustering: Option<Clustering>,
    pub nodes: u64,
    /// Complete assignments whose exact cost was evaluated.
    pub leaves: u64,
}

struct Bipartition {
    /// Twice the largest total cost allowed by integral bounds.
    limit: i128,
    order: Vec<usize>,
    dist: Vec<Vec<i128>>,
    /// Per position in `order`: `m · max(0, W - 2 w_max)` over the unassigned suffix.
    tail: Vec<i128>,
    members: [Vec<usize>; 2],
    /// Per cluster the previous interchangeable cluster in `order`.
    twin_before: Vec<Option<usize>>,
    side: Vec<usize>,
    weight: Vec<i128>,
    capacity: Vec<i128>,
    packed: [i128; 2],
    /// Twice the optimal cost of each partial class, when known.
    exact: [Option<i128>; 2],
    cap: u128,
    nodes: u64,
    leaves: u64,
}

impl Bipartition {
    /// Adds `v` to class `c`, greedily extending the dual packing; returns the undo log.
    fn place(&mut self, v: usize, c: usize) -> Vec<(usize, i128)> {
        let mut partners: Vec<usize> = self.members[c].clone();
        partners.sort_by_key(|&u| std::cmp::Reverse(self.dist[u][v]));
        let mut log = Vec::new();
        for u in partners {
            let y = self.capacity[u].min(self.capacity[v]);
            if y > 0 {
                self.capacity[u] -= y;
                self.capacity[v] -= y;
                self.packed[c] += self.dist[u][v] * y;
                log.push((u, y));
            }
        }
        self.members[c].push(v);
        log
    }

    fn unplace(&mut self, v: usize, c: usize, log: Vec<(usize, i128)>) {
        for (u, y) in log {
            self.capacity[u] += y;
            self.capacity[v] += y;
            self.packed[c] -= self.dist[u][v] * y;
        }
        self.members[c].pop();
    }

    fn class_cost_doubled(&self, class: &[usize]) -> i128 {
        let w: Vec<i128> = class.iter().map(|&i| self.weight[i]).collect();
        let d: Vec<Vec<i128>> = class.iter().map(|&i| class.iter().map(|&k| self.dist[i][k]).collect()).collect();
        pairwise_cover_doubled(&w, &d)
    }

    fn far_pairs(&self, v: usize, c: usize, m: i128) -> usize {
        self.members[c].iter().filter(|&&u| self.dist[u][v] > m).count()
    }

    fn search(&mut self, depth: usize, m: i128) -> Result<Option<[Vec<usize>; 2]>> {
        self.nodes += 1;
        check_cap("bipartition search nodes", u128::from(self.nodes), self.cap)?;
        if 2 * (self.packed[0] + self.packed[1]) + self.tail[depth] > self.limit {
            return Ok(None);
        }
        for c in 0..2 {
            if self.exact[c].is_none() {
                self.exact[c] = Some(self.class_cost_doubled(&self.members[c]));
            }
        }
        let exact: i128 = self.exact.iter().flatten().sum();
        if depth == self.order.len() {
            self.leaves += 1;
            return Ok((exact <= self.limit).then(|| self.members.clone()));
        }
        if exact + self.tail[depth] > self.limit {
            return Ok(None);
        }
        let v = self.order[depth];
        let mut sides: Vec<usize> = if depth == 0 {
            vec![0]
        } else if self.far_pairs(v, 1, m) < self.far_pairs(v, 0, m) {
            vec![1, 0]
        } else {
            vec![0, 1]
        };
        if let Some(p) = self.twin_before[v] {
            let low = self.side[p];
            sides.retain(|&c| c >= low);
        }
        for c in sides {
            let saved = self.exact;
            let log = self.place(v, c);
            self.side[v] = c;
            self.exact[c] = None;
            let found = self.search(depth + 1, m)?;
            self.exact = saved;
            self.side[v] = usize::MAX;
            self.unplace(v, c, log);
            if found.is_some() {
                return Ok(found);
            }
        }
        Ok(None)
    }
}

/// Decides L∞ k-Clustering for `k <= 2` exactly by branch and bound over
/// two-colorings of the initial clusters.
///
/// A class admits radii `r` with a common centroid exactly when
/// `r_i + r_k >= dist_∞(x_i, x_k)` for all its pairs, so greedy packings of
/// that program's dual bound partial classes from below; every unassigned
/// cluster but one per class adds at least half the smallest distance per unit
/// of weight.
pub fn solve_linf_bipartition(inst: &ClusteringInstance, cfg: &BipartitionConfig) -> Result<BipartitionOutcome> {
    if inst.order != DistanceOrder::LInf {
        return Err(Error::Unsupported(format!("the bipartition search needs p = inf, got {}", inst.order)));
    }
    let initial = regularize(&inst.dataset);
    let n0 = initial.len();
    if inst.k >= n0 {
        let groups: Vec<Vec<usize>> = (0..n0).map(|i| vec![i]).collect();
        let clustering = Clustering::from_groups(&inst.order, &initial, &groups)?;
        let decision = cost_le(&clustering.total_cost, &inst.budget, &cfg.tol);
        return Ok(BipartitionOutcome { decision, clustering: decision.then_some(clustering), nodes: 0, leaves: 0 });
    }
    if inst.k > 2 {
        return Err(Error::Unsupported(format!("the bipartition search needs k <= 2, got {}", inst.k)));
    }
    if inst.k == 1 {
        let clustering = Clustering::from_groups(&inst.order, &initial, &[(0..n0).collect()])?;
        let decision = cost_le(&clustering.total_cost, &inst.budget, &cfg.tol);
        return Ok(BipartitionOutcome { decision, clustering: decision.then_some(clustering), nodes: 1, leaves: 1 });
    }
    let to_i128 = |v: &num_bigint::BigInt, what: &str| {
        v.to_i128().ok_or_else(|| Error::Unsupported(format!("{what} too large for the bipartition search")))
    };
    let weight: Vec<i128> = initial.iter().map(|c| to_i128(&c.size.clone().into(), "weight")).collect::<Result<_>>()?;
    let mut dist = vec![vec![0i128; n0]; n0];
    for i in 0..n0 {
        for k in i + 1..n0 {
            let gap = initial[i]
                .representative
                .coords()
                .iter()
                .zip(initial[k].representative.coords())
                .map(|(a, b)| (a - b).magnitude().clone())
                .max()
                .unwrap_or_default();
            let gap = to_i128(&gap.into(), "distance")?;
            dist[i][k] = gap;
            dist[k][i] = gap;
        }
    }
    let m = (0..n0).flat_map(|i| (i + 1..n0).map(move |k| (i, k))).map(|(i, k)| dist[i][k]).min().unwrap_or(0);

    // Clusters with many far partners first, then breadth first along far pairs.
    let far_degree: Vec<usize> = (0..n0).map(|i| (0..n0).filter(|&k| dist[i][k] > m).count()).collect();
    let mut order = Vec::with_capacity(n0);
    let mut seen = vec![false; n0];
    let mut by_degree: Vec<usize> = (0..n0).collect();
    by_degree.sort_by_key(|&i| std::cmp::Reverse(far_degree[i]));
    for &root in &by_degree {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            order.push(u);
            let mut next: Vec<usize> = (0..n0).filter(|&k| !seen[k] && dist[u][k] > m).collect();
            next.sort_by_key(|&k| std::cmp::Reverse(far_degree[k]));
            for k in next {
                seen[k] = true;
                queue.push_back(k);
            }
        }
    }
    // interchangeable clusters: equal weights and equal distances to all others
    let mut twin_before = vec![None; n0];
    for (pos, &v) in order.iter().enumerate() {
        twin_before[v] = order[..pos]
            .iter()
            .rev()
            .copied()
            .find(|&u| weight[u] == weight[v] && (0..n0).all(|x| x == u || x == v || dist[u][x] == dist[v][x]));
    }
    let mut tail = vec![0i128; n0 + 1];
    let (mut total, mut heaviest) = (0i128, 0i128);
    for depth in (0..n0).rev() {
        total += weight[order[depth]];
        heaviest = heaviest.max(weight[order[depth]]);
        tail[depth] = m * (total - 2 * heaviest).max(0);
    }
    let limit = to_i128(&inst.budget.scaled(&BigUint::from(2u32)).floor(&cfg.tol), "budget")?;
    if limit < 0 {
        return Err(Error::InvalidBudget(format!("negative budget {}", inst.budget)));
    }
    let mut search = Bipartition {
        limit,
        order,
        dist,
        capacity: weight.clone(),
        weight,
        tail,
        members: [Vec::new(), Vec::new()],
        twin_before,
        side: vec![usize::MAX; n0],
        packed: [0, 0],
        exact: [None, None],
        cap: cfg.nodes,
        nodes: 0,
        leaves: 0,
    };
    let found = search.search(0, m)?;
    let (nodes, leaves) = (search.nodes, search.leaves);
    let clustering = match found {
        Some(classes) => {
            let groups: Vec<Vec<usize>> = classes.into_iter().filter(|g| !g.is_empty()).collect();
            let clustering = Clustering::from_groups(&inst.order, &initial, &groups)?;
            debug_assert!(cost_le(&clustering.total_cost, &inst.budget, &cfg.tol));
            Some(clustering)
        }
        None => None,
    };
    Ok(BipartitionOutcome { decision: clustering.is_some(), clustering, nodes, leaves })
}

/// Monte-Carlo estimate of the probability that `colors` items colored
/// uniformly with `colors` colors all receive distinct colors.
pub fn coloring_success_estimate(colors: usize, trials: u64, seed: u64) -> Result<f64> {
    if colors == 0 || trials == 0 {
        return Err(Error::InvalidInstance("colors and trials must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hits = 0u64;
    let mut seen = vec![false; colors];
    for _ in 0..trials {
        seen.iter_mut().for_each(|s| *s = false);
        let distinct = (0..colors).all(|_| {
            let c = rng.random_range(0..colors);
            !std::mem::replace(&mut seen[c], true)
        });
        hits += u64::from(distinct);
    }
    Ok(hits as f64 / trials as f64)
}

/// `T! / T^T`.
pub fn rainbow_probability(colors: usize) -> f64 {
    (1..=colors).map(|i| i as f64 / colors as f64).product()
}
