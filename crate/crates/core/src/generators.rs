//! Hardness reductions as instance generators, source-problem oracles and a
//! reduction verifier.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::binomial;
use num_rational::{BigRational, Ratio};
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;

use crate::centroids::WeightedCluster;
use crate::cost::{cost_le, CostValue, Tolerance, EVAL_DIGITS};
use crate::data::{DataPoint, Dataset};
use crate::error::{check_cap, Error, Result};
use crate::metric::DistanceOrder;
use crate::real::Real;
use crate::selection::{select, select_bruteforce, SelectConfig, SelectionInstance};
use crate::solver::{
    solve_bruteforce, solve_color_coding, solve_linf_bipartition, BipartitionConfig, BruteForceConfig,
    ClusteringInstance, SolveConfig,
};

/// An undirected simple graph on vertices `1..=n`, optionally colored with `1..=k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    colors: Option<Vec<usize>>,
}

impl Graph {
    /// Edges keep their listing order; each is stored with its smaller endpoint first.
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut seen = BTreeSet::new();
        let mut stored = Vec::with_capacity(edges.len());
        for &(a, b) in edges {
            if a == b {
                return Err(Error::InvalidInstance(format!("self-loop at vertex {a}")));
            }
            if a == 0 || b == 0 || a > n || b > n {
                return Err(Error::InvalidInstance(format!("edge {{{a},{b}}} leaves 1..{n}")));
            }
            let e = (a.min(b), a.max(b));
            if !seen.insert(e) {
                return Err(Error::InvalidInstance(format!("duplicate edge {{{},{}}}", e.0, e.1)));
            }
            stored.push(e);
        }
        Ok(Self { n, edges: stored, colors: None })
    }

    pub fn with_colors(mut self, colors: Vec<usize>) -> Result<Self> {
        if colors.len() != self.n {
            return Err(Error::InvalidInstance(format!("{} colors for {} vertices", colors.len(), self.n)));
        }
        if colors.contains(&0) {
            return Err(Error::InvalidInstance("colors start at 1".into()));
        }
        self.colors = Some(colors);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn colors(&self) -> Option<&[usize]> {
        self.colors.as_deref()
    }

    pub fn color(&self, v: usize) -> Option<usize> {
        self.colors.as_ref().map(|c| c[v - 1])
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }

    fn adjacency(&self) -> Vec<Vec<bool>> {
        let mut adj = vec![vec![false; self.n + 1]; self.n + 1];
        for &(u, v) in &self.edges {
            adj[u][v] = true;
            adj[v][u] = true;
        }
        adj
    }

    fn require_colors(&self, k: usize) -> Result<&[usize]> {
        let colors =
            self.colors.as_deref().ok_or_else(|| Error::InvalidInstance("the reduction needs vertex colors".into()))?;
        if let Some(bad) = colors.iter().find(|&&c| c > k) {
            return Err(Error::InvalidInstance(format!("color {bad} outside 1..{k}")));
        }
        Ok(colors)
    }

    /// Edges between colors `i < j`, oriented as (vertex of color `i`, vertex of color `j`),
    /// with their 1-based positions in the edge list.
    fn crossing_edges(&self, colors: &[usize], i: usize, j: usize) -> Vec<(usize, usize, usize)> {
        self.edges
            .iter()
            .enumerate()
            .filter_map(|(pos, &(a, b))| {
                let (ca, cb) = (colors[a - 1], colors[b - 1]);
                if (ca, cb) == (i, j) {
                    Some((a, b, pos + 1))
                } else if (cb, ca) == (i, j) {
                    Some((b, a, pos + 1))
                } else {
                    None
                }
            })
            .collect()
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={} edges=[", self.n)?;
        for (i, (u, v)) in self.edges.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{u}-{v}")?;
        }
        write!(f, "]")?;
        if let Some(c) = &self.colors {
            write!(f, " colors={c:?}")?;
        }
        Ok(())
    }
}

/// A CNF formula whose clauses hold three distinct literals over variables `1..=n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CnfFormula {
    num_vars: usize,
    clauses: Vec<[i64; 3]>,
}

impl CnfFormula {
    pub fn new(num_vars: usize, clauses: Vec<[i64; 3]>) -> Result<Self> {
        for clause in &clauses {
            for &lit in clause {
                if lit == 0 || lit.unsigned_abs() as usize > num_vars {
                    return Err(Error::InvalidInstance(format!("literal {lit} outside ±1..{num_vars}")));
                }
            }
            if clause[0] == clause[1] || clause[0] == clause[2] || clause[1] == clause[2] {
                return Err(Error::InvalidInstance(format!("clause {clause:?} repeats a literal")));
            }
        }
        Ok(Self { num_vars, clauses })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn clauses(&self) -> &[[i64; 3]] {
        &self.clauses
    }

    pub fn satisfied_by(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().all(|c| c.iter().any(|&lit| assignment[lit.unsigned_abs() as usize - 1] == (lit > 0)))
    }
}

/// Half-Integral Odd Cycle Transversal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HioctInstance {
    pub graph: Graph,
    pub t: u64,
}

/// Names of the implemented reductions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Reduction {
    L0Clique,
    L0Mcc,
    L1Mcc,
    LinfClique,
    LinfMcc,
    LpMcc,
    SatHioctLinf2,
}

impl Reduction {
    pub const ALL: [Reduction; 7] = [
        Reduction::L0Clique,
        Reduction::L0Mcc,
        Reduction::L1Mcc,
        Reduction::LinfClique,
        Reduction::LinfMcc,
        Reduction::LpMcc,
        Reduction::SatHioctLinf2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Reduction::L0Clique => "l0-clique",
            Reduction::L0Mcc => "l0-mcc",
            Reduction::L1Mcc => "l1-mcc",
            Reduction::LinfClique => "linf-clique",
            Reduction::LinfMcc => "linf-mcc",
            Reduction::LpMcc => "lp-mcc",
            Reduction::SatHioctLinf2 => "3sat-hioct-linf2",
        }
    }

    pub fn needs_colors(self) -> bool {
        matches!(self, Reduction::L0Mcc | Reduction::L1Mcc | Reduction::LinfMcc | Reduction::LpMcc)
    }
}

impl fmt::Display for Reduction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Reduction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linf-2clust" => Ok(Reduction::SatHioctLinf2),
            _ => Reduction::ALL
                .into_iter()
                .find(|r| r.name() == s)
                .ok_or_else(|| Error::InvalidInstance(format!("unknown reduction {s:?}"))),
        }
    }
}

fn pairs(k: usize) -> Vec<(usize, usize)> {
    (1..=k).flat_map(|i| (i + 1..=k).map(move |j| (i, j))).collect()
}

fn choose2(k: usize) -> u64 {
    (k * k.saturating_sub(1) / 2) as u64
}

fn padded_vector(k: usize, i: usize, j: usize, u: usize, v: usize, padding: &BigInt) -> DataPoint {
    let mut coords = vec![padding.clone(); k];
    coords[i - 1] = BigInt::from(u);
    coords[j - 1] = BigInt::from(v);
    DataPoint::new(coords)
}

fn padding_value(g: &Graph, k: usize, i: usize, j: usize, e: usize) -> BigInt {
    BigInt::from(g.n) + BigInt::from(k * i + j) * BigInt::from(g.edges.len()) + BigInt::from(e)
}

fn assert_distinct_padding(values: &[BigInt], n: usize) {
    let distinct: BTreeSet<&BigInt> = values.iter().collect();
    assert_eq!(distinct.len(), values.len(), "padding values collide");
    assert!(values.iter().all(|v| *v > BigInt::from(n)), "padding values meet vertex values");
}

/// k-Clique to L0 k′-Clustering in dimension `k`.
pub fn gen_l0_clustering_from_clique(g: &Graph, k: usize) -> Result<ClusteringInstance> {
    if k < 3 {
        return Err(Error::InvalidInstance(format!("the L0 clique reduction needs k >= 3, got {k}")));
    }
    if g.edges.is_empty() {
        return Err(Error::Vacuous("the graph has no edges".into()));
    }
    let mut points = Vec::new();
    let mut paddings = Vec::new();
    for (i, j) in pairs(k) {
        for (pos, &(u, v)) in g.edges.iter().enumerate() {
            let padding = padding_value(g, k, i, j, pos + 1);
            points.push(padded_vector(k, i, j, u, v, &padding));
            paddings.push(padding);
        }
    }
    assert_distinct_padding(&paddings, g.n);
    let n = points.len();
    let clusters = n - choose2(k) as usize + 1;
    let budget = CostValue::int(choose2(k) * (k as u64 - 2));
    ClusteringInstance::new(Dataset::new(k, points)?, clusters, budget, DistanceOrder::L0)
}

/// Multicolored Clique to L0 Cluster Selection with one group per color pair.
pub fn gen_l0_selection_from_mcc(g: &Graph, k: usize) -> Result<SelectionInstance> {
    if k < 3 {
        return Err(Error::InvalidInstance(format!("the L0 reduction needs k >= 3, got {k}")));
    }
    let colors = g.require_colors(k)?;
    let mut groups = Vec::new();
    let mut paddings = Vec::new();
    for (i, j) in pairs(k) {
        let crossing = g.crossing_edges(colors, i, j);
        if crossing.is_empty() {
            return Err(empty_group(i, j));
        }
        let group = crossing
            .into_iter()
            .map(|(u, v, e)| {
                let padding = padding_value(g, k, i, j, e);
                paddings.push(padding.clone());
                padded_vector(k, i, j, u, v, &padding)
            })
            .collect();
        groups.push(group);
    }
    assert_distinct_padding(&paddings, g.n);
    SelectionInstance::unit(DistanceOrder::L0, groups, CostValue::int(choose2(k) * (k as u64 - 2)))
}

fn empty_group(i: usize, j: usize) -> Error {
    Error::Vacuous(format!("no edge joins colors {i} and {j}"))
}

/// Multicolored Clique to L1 Cluster Selection with mirrored groups `X_{i,j}`, `Y_{i,j}`.
pub fn gen_l1_selection_from_mcc(g: &Graph, k: usize) -> Result<SelectionInstance> {
    if k < 3 {
        return Err(Error::InvalidInstance(format!("the L1 reduction needs k >= 3, got {k}")));
    }
    let colors = g.require_colors(k)?;
    let boundary = BigInt::from(g.n + 1);
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (i, j) in pairs(k) {
        let crossing = g.crossing_edges(colors, i, j);
        if crossing.is_empty() {
            return Err(empty_group(i, j));
        }
        xs.push(crossing.iter().map(|&(u, v, _)| padded_vector(k, i, j, u, v, &BigInt::zero())).collect());
        ys.push(crossing.iter().map(|&(u, v, _)| padded_vector(k, i, j, u, v, &boundary)).collect());
    }
    xs.extend(ys);
    let budget = k as u64 * (g.n as u64 + 1) * choose2(k - 1);
    SelectionInstance::unit(DistanceOrder::l1(), xs, CostValue::int(budget))
}

/// Vertex vectors of the L∞ clique reduction: a 2 at the vertex coordinate and
/// ±2 on non-edge coordinates, the smaller endpoint taking +2.
fn linf_vertex_vectors(g: &Graph) -> Vec<DataPoint> {
    let adj = g.adjacency();
    let non_edges: Vec<(usize, usize)> =
        (1..=g.n).flat_map(|u| (u + 1..=g.n).map(move |v| (u, v))).filter(|&(u, v)| !adj[u][v]).collect();
    (1..=g.n)
        .map(|x| {
            let mut coords = vec![0i64; g.n + non_edges.len()];
            coords[x - 1] = 2;
            for (pos, &(u, v)) in non_edges.iter().enumerate() {
                if x == u {
                    coords[g.n + pos] = 2;
                } else if x == v {
                    coords[g.n + pos] = -2;
                }
            }
            DataPoint::from_i64(&coords)
        })
        .collect()
}

/// k-Clique to L∞ (|V| - k + 1)-Clustering with budget `k`.
pub fn gen_linf_clustering_from_clique(g: &Graph, k: usize) -> Result<ClusteringInstance> {
    if k < 2 {
        return Err(Error::InvalidInstance(format!("the L∞ clique reduction needs k >= 2, got {k}")));
    }
    if k > g.n {
        return Err(Error::Vacuous(format!("clique size {k} exceeds {} vertices", g.n)));
    }
    let points = linf_vertex_vectors(g);
    let dim = points[0].dim();
    ClusteringInstance::new(Dataset::new(dim, points)?, g.n - k + 1, CostValue::int(k as u64), DistanceOrder::LInf)
}

/// Multicolored Clique to L∞ Cluster Selection with one group per color.
pub fn gen_linf_selection_from_mcc(g: &Graph, k: usize) -> Result<SelectionInstance> {
    if k < 2 {
        return Err(Error::InvalidInstance(format!("the L∞ reduction needs k >= 2, got {k}")));
    }
    let colors = g.require_colors(k)?;
    let points = linf_vertex_vectors(g);
    let mut groups = vec![Vec::new(); k];
    for (v, p) in points.into_iter().enumerate() {
        groups[colors[v] - 1].push(p);
    }
    if let Some(empty) = groups.iter().position(Vec::is_empty) {
        return Err(Error::Vacuous(format!("color {} has no vertex", empty + 1)));
    }
    SelectionInstance::unit(DistanceOrder::LInf, groups, CostValue::int(k as u64))
}

/// Multicolored Clique to Cluster Selection under `Σ|x - y|^p` with `p > 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct LpSelectionReduction {
    pub p: Ratio<u64>,
    pub dimension: usize,
    pub groups: Vec<Vec<DataPoint>>,
    /// The budget evaluated to `EVAL_DIGITS` digits.
    pub budget: Real,
    /// The exact budget when it is rational, which holds for `p = 2`.
    pub exact_budget: Option<BigRational>,
}

impl LpSelectionReduction {
    /// The instance under the squared Euclidean distance.
    pub fn to_selection(&self) -> Result<SelectionInstance> {
        let exact = match (&self.exact_budget, self.p == Ratio::from_integer(2)) {
            (Some(b), true) => b.clone(),
            _ => {
                return Err(Error::Unsupported(format!(
                    "Cluster Selection is implemented for p = 2, not p = {}",
                    self.p
                )))
            }
        };
        let weights = self.groups.iter().map(|g| vec![BigUint::one(); g.len()]).collect();
        SelectionInstance::new(
            DistanceOrder::L2,
            self.dimension,
            self.groups.clone(),
            weights,
            CostValue::Rational(exact),
        )
    }
}

/// `k (k-1) C(k-1,2) / ((k-1)^q + C(k-1,2)^q)^{p-1}` with `q = 1/(p-1)`.
pub fn lp_selection_budget(k: usize, p: Ratio<u64>, digits: u32) -> Result<(Real, Option<BigRational>)> {
    if p <= Ratio::one() {
        return Err(Error::InvalidOrder(format!("the reduction needs p > 1, got {p}")));
    }
    let (a, b) = ((k - 1) as u64, choose2(k - 1));
    let numer = k as u64 * a * b;
    if p == Ratio::from_integer(2) {
        let exact = BigRational::new(numer.into(), (a + b).into());
        return Ok((Real::from_ratio(&exact, digits), Some(exact)));
    }
    let work = digits + crate::real::GUARD_DIGITS;
    let q = (p - Ratio::one()).recip();
    let base = Real::int_pow(&BigUint::from(a), q, work).add(&Real::int_pow(&BigUint::from(b), q, work));
    let value = Real::from_int(numer, work).div(&base.pow(p - Ratio::one()));
    Ok((value.with_digits(digits), None))
}

/// Multicolored Clique to Cluster Selection with 0/1 edge-indicator vectors.
pub fn gen_lp_selection_from_mcc(g: &Graph, k: usize, p: Ratio<u64>) -> Result<LpSelectionReduction> {
    if k < 3 {
        return Err(Error::InvalidInstance(format!("the Lp reduction needs k >= 3, got {k}")));
    }
    let colors = g.require_colors(k)?;
    let mut groups = Vec::new();
    for (i, j) in pairs(k) {
        let crossing = g.crossing_edges(colors, i, j);
        if crossing.is_empty() {
            return Err(empty_group(i, j));
        }
        groups.push(
            crossing
                .into_iter()
                .map(|(u, v, _)| {
                    let mut coords = vec![0i64; g.n];
                    coords[u - 1] = 1;
                    coords[v - 1] = 1;
                    DataPoint::from_i64(&coords)
                })
                .collect(),
        );
    }
    let (budget, exact_budget) = lp_selection_budget(k, p, EVAL_DIGITS)?;
    Ok(LpSelectionReduction { p, dimension: g.n, groups, budget, exact_budget })
}

/// Vertex numbering of the 3-SAT to HIOCT gadget graph.
pub struct HioctLayout {
    pub num_vars: usize,
    pub num_clauses: usize,
}

impl HioctLayout {
    pub fn positive(&self, i: usize) -> usize {
        2 * i - 1
    }

    pub fn negative(&self, i: usize) -> usize {
        2 * i
    }

    pub fn literal(&self, lit: i64) -> usize {
        let i = lit.unsigned_abs() as usize;
        if lit > 0 {
            self.positive(i)
        } else {
            self.negative(i)
        }
    }

    pub fn pendant(&self, i: usize, j: usize) -> usize {
        2 * self.num_vars + (i - 1) * (2 * self.num_vars + 1) + j
    }

    pub fn clause(&self, j: usize, l: usize) -> usize {
        2 * self.num_vars + self.num_vars * (2 * self.num_vars + 1) + 4 * (j - 1) + l
    }

    pub fn num_vertices(&self) -> usize {
        2 * self.num_vars + self.num_vars * (2 * self.num_vars + 1) + 4 * self.num_clauses
    }
}

/// 3-SAT to HIOCT: variable gadgets with `2n + 1` common neighbours and one
/// 7-cycle per clause through its literal vertices; `t = 2n`.
pub fn gen_hioct_from_3sat(f: &CnfFormula) -> Result<HioctInstance> {
    let layout = HioctLayout { num_vars: f.num_vars, num_clauses: f.clauses.len() };
    let mut edges = Vec::new();
    for i in 1..=f.num_vars {
        let (x, x_neg) = (layout.positive(i), layout.negative(i));
        edges.push((x, x_neg));
        for j in 1..=2 * f.num_vars + 1 {
            let y = layout.pendant(i, j);
            edges.push((y, x));
            edges.push((y, x_neg));
        }
    }
    for (j, clause) in f.clauses.iter().enumerate() {
        let c = |l: usize| layout.clause(j + 1, l);
        let lits: Vec<usize> = clause.iter().map(|&lit| layout.literal(lit)).collect();
        edges.extend([
            (c(1), lits[0]),
            (lits[0], c(2)),
            (c(2), lits[1]),
            (lits[1], c(3)),
            (c(3), lits[2]),
            (lits[2], c(4)),
            (c(4), c(1)),
        ]);
    }
    Ok(HioctInstance { graph: Graph::new(layout.num_vertices(), &edges)?, t: 2 * f.num_vars as u64 })
}

/// HIOCT to L∞ 2-Clustering.
#[derive(Clone, Debug)]
pub struct Linf2Reduction {
    pub instance: ClusteringInstance,
    /// `t >= |V|`: the source is a yes-instance without search.
    pub trivially_yes: bool,
}

/// HIOCT to L∞ 2-Clustering. Isolated vertices are dropped and `t + 5`
/// isolated edges added, each edge a coordinate with +2 on its smaller endpoint
/// and -2 on the other; `D = |V| + t` over the modified graph. With
/// `figure_mode` no edges are added.
pub fn gen_linf2_from_hioct(h: &HioctInstance, figure_mode: bool) -> Result<Linf2Reduction> {
    let g = &h.graph;
    let mut degree = vec![0usize; g.n + 1];
    for &(u, v) in &g.edges {
        degree[u] += 1;
        degree[v] += 1;
    }
    let kept: Vec<usize> = (1..=g.n).filter(|&v| degree[v] > 0).collect();
    let trivially_yes = h.t >= kept.len() as u64;
    let mut index = vec![0usize; g.n + 1];
    for (pos, &v) in kept.iter().enumerate() {
        index[v] = pos;
    }
    let extra = if figure_mode { 0 } else { h.t as usize + 5 };
    let n = kept.len() + 2 * extra;
    let d = g.edges.len() + extra;
    let mut rows = vec![vec![0i64; d]; n];
    for (pos, &(u, v)) in g.edges.iter().enumerate() {
        rows[index[u]][pos] = 2;
        rows[index[v]][pos] = -2;
    }
    for e in 0..extra {
        rows[kept.len() + 2 * e][g.edges.len() + e] = 2;
        rows[kept.len() + 2 * e + 1][g.edges.len() + e] = -2;
    }
    if n == 0 {
        return Err(Error::InvalidInstance("the graph has no edges".into()));
    }
    let points = rows.iter().map(|r| DataPoint::from_i64(r)).collect();
    let budget = CostValue::int(n as u64 + h.t);
    let instance = ClusteringInstance::new(Dataset::new(d, points)?, 2, budget, DistanceOrder::LInf)?;
    Ok(Linf2Reduction { instance, trivially_yes })
}

/// Default largest graph accepted by [`graph_has_clique`].
pub const CLIQUE_VERTEX_CAP: usize = 12;

/// Exhaustive k-clique test; with `colorful`, one vertex per color `1..=k`.
pub fn graph_has_clique(g: &Graph, k: usize, colorful: bool) -> Result<bool> {
    graph_has_clique_capped(g, k, colorful, CLIQUE_VERTEX_CAP)
}

pub fn graph_has_clique_capped(g: &Graph, k: usize, colorful: bool, cap: usize) -> Result<bool> {
    check_cap("clique oracle vertices", g.n as u128, cap as u128)?;
    let colors = if colorful { Some(g.require_colors(k)?) } else { None };
    let adj = g.adjacency();
    fn extend(
        adj: &[Vec<bool>],
        colors: Option<&[usize]>,
        n: usize,
        k: usize,
        from: usize,
        chosen: &mut Vec<usize>,
    ) -> bool {
        if chosen.len() == k {
            return true;
        }
        for v in from..=n {
            if chosen.iter().all(|&u| adj[u][v]) {
                if let Some(c) = colors {
                    if chosen.iter().any(|&u| c[u - 1] == c[v - 1]) || c[v - 1] > k {
                        continue;
                    }
                }
                chosen.push(v);
                if extend(adj, colors, n, k, v + 1, chosen) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    Ok(extend(&adj, colors, g.n, k, 1, &mut Vec::new()))
}

/// A satisfying assignment by exhaustive search.
pub fn satisfying_assignment(f: &CnfFormula) -> Result<Option<Vec<bool>>> {
    check_cap("SAT oracle variables", f.num_vars as u128, 24)?;
    Ok((0u64..1 << f.num_vars)
        .map(|mask| (0..f.num_vars).map(|i| mask >> i & 1 == 1).collect::<Vec<bool>>())
        .find(|a| f.satisfied_by(a)))
}

/// Whether the graph minus the edges removed by `delta` is bipartite; on
/// failure returns the vertices of an odd cycle.
pub fn hioct_odd_cycle(g: &Graph, delta: &[u8]) -> Option<Vec<usize>> {
    let mut adj = vec![Vec::new(); g.n + 1];
    for &(u, v) in &g.edges {
        if delta[u - 1] + delta[v - 1] < 2 {
            adj[u].push(v);
            adj[v].push(u);
        }
    }
    let mut parent = vec![0usize; g.n + 1];
    let mut depth = vec![usize::MAX; g.n + 1];
    for root in 1..=g.n {
        if depth[root] != usize::MAX {
            continue;
        }
        depth[root] = 0;
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                if depth[v] == usize::MAX {
                    depth[v] = depth[u] + 1;
                    parent[v] = u;
                    queue.push_back(v);
                } else if depth[v] == depth[u] {
                    let (mut a, mut b) = (u, v);
                    let (mut left, mut right) = (vec![a], vec![b]);
                    while a != b {
                        a = parent[a];
                        b = parent[b];
                        left.push(a);
                        right.push(b);
                    }
                    right.pop();
                    right.reverse();
                    left.extend(right);
                    return Some(left);
                }
            }
        }
    }
    None
}

/// An HIOCT solution by bounded search: some edge of any odd cycle left by the
/// current assignment must be removed, so one of its endpoints is raised.
pub fn hioct_solution(h: &HioctInstance) -> Option<Vec<u8>> {
    fn branch(g: &Graph, delta: &mut Vec<u8>, left: u64, seen: &mut BTreeSet<Vec<u8>>) -> bool {
        let Some(cycle) = hioct_odd_cycle(g, delta) else {
            return true;
        };
        if left == 0 || !seen.insert(delta.clone()) {
            return false;
        }
        let mut candidates: Vec<usize> = Vec::new();
        for w in 0..cycle.len() {
            let (u, v) = (cycle[w], cycle[(w + 1) % cycle.len()]);
            for x in [u, v] {
                if delta[x - 1] < 2 && !candidates.contains(&x) {
                    candidates.push(x);
                }
            }
        }
        for x in candidates {
            delta[x - 1] += 1;
            let ok = branch(g, delta, left - 1, seen);
            if ok {
                return true;
            }
            delta[x - 1] -= 1;
        }
        false
    }
    let mut delta = vec![0u8; h.graph.n];
    let mut seen = BTreeSet::new();
    branch(&h.graph, &mut delta, h.t, &mut seen).then_some(delta)
}

/// HIOCT by enumerating every `δ ∈ {0,1,2}^V` with `Σδ <= t`.
pub fn hioct_bruteforce(h: &HioctInstance, cap: u128) -> Result<Option<Vec<u8>>> {
    let n = h.graph.n;
    check_cap("HIOCT brute-force assignments", 3u128.saturating_pow(n as u32), cap)?;
    let total = 3u128.pow(n as u32);
    for code in 0..total {
        let mut c = code;
        let delta: Vec<u8> = (0..n)
            .map(|_| {
                let d = (c % 3) as u8;
                c /= 3;
                d
            })
            .collect();
        if delta.iter().map(|&d| u64::from(d)).sum::<u64>() <= h.t && hioct_odd_cycle(&h.graph, &delta).is_none() {
            return Ok(Some(delta));
        }
    }
    Ok(None)
}

/// Proof quantities of an L0 reduction cluster.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct L0Diagnostics {
    /// Coordinates holding at least one vertex value.
    pub beta: u64,
    /// Vertex-valued entries differing from the centroid.
    pub gamma: u64,
    /// `(β - 2 + γ) / (|C| - 1)`.
    pub ratio: BigRational,
}

/// `β`, `γ` and their ratio for a cluster of an L0 reduction on `num_vertices`
/// vertices; values in `1..=num_vertices` are vertex values.
pub fn l0_cluster_diagnostics(cluster: &WeightedCluster, num_vertices: usize) -> Result<L0Diagnostics> {
    let size: BigUint = cluster.total_weight();
    if size < BigUint::from(2u32) {
        return Err(Error::InvalidInstance("diagnostics need a cluster of at least two vectors".into()));
    }
    let is_vertex = |v: &BigInt| *v >= BigInt::one() && *v <= BigInt::from(num_vertices);
    let (mut beta, mut gamma) = (0u64, BigUint::zero());
    for i in 0..cluster.dim() {
        let mut counts: BTreeMap<&BigInt, BigUint> = BTreeMap::new();
        for (p, w) in cluster.points().iter().zip(cluster.weights()) {
            let v = &p.coords()[i];
            if is_vertex(v) {
                *counts.entry(v).or_insert_with(BigUint::zero) += w;
            }
        }
        if counts.is_empty() {
            continue;
        }
        beta += 1;
        let total: BigUint = counts.values().sum();
        let best = counts.values().max().cloned().unwrap_or_default();
        gamma += total - best;
    }
    let gamma = gamma.to_u64().ok_or_else(|| Error::Unsupported("γ too large".into()))?;
    let numer = BigInt::from(beta) - 2 + BigInt::from(gamma);
    let ratio = BigRational::new(numer, BigInt::from(size) - 1);
    Ok(L0Diagnostics { beta, gamma, ratio })
}

/// `κ = (k - 2) / (C(k,2) - 1) = 2 / (k + 1)`.
pub fn l0_kappa(k: usize) -> BigRational {
    BigRational::new(BigInt::from(k) - 2, BigInt::from(binomial(k, 2)) - 1)
}

/// Source instance of a reduction.
#[derive(Clone, Debug, PartialEq)]
pub enum Source {
    Graph(Graph),
    Formula(CnfFormula),
}

/// Which solvers decide the generated instances.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolverMode {
    /// `solve_bruteforce`, `select_bruteforce` and the exact bipartition search.
    Oracle,
    /// The color-coding solver and the specialised selection solvers.
    Paper,
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub mode: SolverMode,
    pub select: SelectConfig,
    pub bruteforce: BruteForceConfig,
    pub solve: SolveConfig,
    pub bipartition: BipartitionConfig,
    pub clique_cap: usize,
    /// Build the HIOCT to L∞ step without isolated edges.
    pub figure_mode: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            mode: SolverMode::Oracle,
            select: SelectConfig::default(),
            bruteforce: BruteForceConfig::default(),
            solve: SolveConfig::default(),
            bipartition: BipartitionConfig::default(),
            clique_cap: CLIQUE_VERTEX_CAP,
            figure_mode: false,
        }
    }
}

/// Outcome of one reduction check.
#[derive(Clone, Debug, PartialEq)]
pub struct VerifyReport {
    pub reduction: Reduction,
    pub source_truth: bool,
    /// The HIOCT answer in the 3-SAT chain.
    pub intermediate_truth: Option<bool>,
    pub target_truth: bool,
    pub agree: bool,
    pub budget: Option<CostValue>,
    /// Optimal target cost when the solver reports one, else the witness cost.
    pub target_cost: Option<CostValue>,
    pub note: String,
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let yn = |b: bool| if b { "yes" } else { "no" };
        write!(f, "{}: source={} target={}", self.reduction, yn(self.source_truth), yn(self.target_truth))?;
        if let Some(h) = self.intermediate_truth {
            write!(f, " hioct={}", yn(h))?;
        }
        if let Some(b) = &self.budget {
            write!(f, " D={b}")?;
        }
        if let Some(c) = &self.target_cost {
            write!(f, " cost={c}")?;
        }
        write!(f, " {}", if self.agree { "agree" } else { "DISAGREE" })?;
        if !self.note.is_empty() {
            write!(f, " ({})", self.note)?;
        }
        Ok(())
    }
}

/// Parameters of a reduction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionParams {
    pub k: usize,
    /// Exponent for `lp-mcc`.
    pub p: Ratio<u64>,
}

impl Default for ReductionParams {
    fn default() -> Self {
        Self { k: 3, p: Ratio::from_integer(2) }
    }
}

fn report(reduction: Reduction, source: bool, target: bool) -> VerifyReport {
    VerifyReport {
        reduction,
        source_truth: source,
        intermediate_truth: None,
        target_truth: target,
        agree: source == target,
        budget: None,
        target_cost: None,
        note: String::new(),
    }
}

fn decide_selection(inst: &SelectionInstance, cfg: &VerifyConfig) -> Result<(bool, Option<CostValue>)> {
    let result = match cfg.mode {
        SolverMode::Oracle => select_bruteforce(inst, &cfg.select)?,
        SolverMode::Paper => select(inst, &cfg.select)?,
    };
    Ok((result.decision, result.witness.map(|w| w.cost)))
}

fn decide_clustering(inst: &ClusteringInstance, cfg: &VerifyConfig) -> Result<(bool, Option<CostValue>)> {
    match cfg.mode {
        SolverMode::Oracle => {
            let out = solve_bruteforce(inst, &cfg.bruteforce)?;
            Ok((out.decision, Some(out.min_cost)))
        }
        SolverMode::Paper => {
            let out = solve_color_coding(inst, &cfg.solve)?;
            Ok((out.decision, out.clustering.map(|c| c.total_cost)))
        }
    }
}

fn vacuous(reduction: Reduction, g: &Graph, k: usize, cap: usize, err: Error) -> Result<VerifyReport> {
    let source = graph_has_clique_capped(g, k, reduction.needs_colors(), cap)?;
    let mut r = report(reduction, source, false);
    r.note = err.to_string();
    Ok(r)
}

/// Decides the source by brute force, generates the target and decides it at
/// the construction's budget.
pub fn verify_reduction(
    reduction: Reduction,
    source: &Source,
    params: &ReductionParams,
    cfg: &VerifyConfig,
) -> Result<VerifyReport> {
    let k = params.k;
    let graph = || match source {
        Source::Graph(g) => Ok(g),
        Source::Formula(_) => Err(Error::InvalidInstance(format!("{reduction} needs a graph"))),
    };
    match reduction {
        Reduction::L0Clique | Reduction::LinfClique => {
            let g = graph()?;
            let generated = if reduction == Reduction::L0Clique {
                gen_l0_clustering_from_clique(g, k)
            } else {
                gen_linf_clustering_from_clique(g, k)
            };
            let inst = match generated {
                Ok(inst) => inst,
                Err(e @ Error::Vacuous(_)) => return vacuous(reduction, g, k, cfg.clique_cap, e),
                Err(e) => return Err(e),
            };
            let truth = graph_has_clique_capped(g, k, false, cfg.clique_cap)?;
            let (decision, cost) = decide_clustering(&inst, cfg)?;
            Ok(VerifyReport {
                budget: Some(inst.budget().clone()),
                target_cost: cost,
                ..report(reduction, truth, decision)
            })
        }
        Reduction::L0Mcc | Reduction::L1Mcc | Reduction::LinfMcc | Reduction::LpMcc => {
            let g = graph()?;
            let generated = match reduction {
                Reduction::L0Mcc => gen_l0_selection_from_mcc(g, k),
                Reduction::L1Mcc => gen_l1_selection_from_mcc(g, k),
                Reduction::LinfMcc => gen_linf_selection_from_mcc(g, k),
                _ => gen_lp_selection_from_mcc(g, k, params.p).and_then(|r| r.to_selection()),
            };
            let inst = match generated {
                Ok(inst) => inst,
                Err(e @ Error::Vacuous(_)) => return vacuous(reduction, g, k, cfg.clique_cap, e),
                Err(e) => return Err(e),
            };
            let truth = graph_has_clique_capped(g, k, true, cfg.clique_cap)?;
            let (decision, cost) = decide_selection(&inst, cfg)?;
            Ok(VerifyReport {
                budget: Some(inst.budget().clone()),
                target_cost: cost,
                ..report(reduction, truth, decision)
            })
        }
        Reduction::SatHioctLinf2 => {
            let Source::Formula(f) = source else {
                return Err(Error::InvalidInstance(format!("{reduction} needs a formula")));
            };
            let truth = satisfying_assignment(f)?.is_some();
            let h = gen_hioct_from_3sat(f)?;
            let hioct = hioct_solution(&h).is_some();
            let target = gen_linf2_from_hioct(&h, cfg.figure_mode)?;
            let out = solve_linf_bipartition(&target.instance, &cfg.bipartition)?;
            let mut r = report(reduction, truth, out.decision);
            r.intermediate_truth = Some(hioct);
            r.agree = truth == hioct && hioct == out.decision;
            r.budget = Some(target.instance.budget().clone());
            r.target_cost = out.clustering.map(|c| c.total_cost);
            r.note = format!("{} search nodes", out.nodes);
            Ok(r)
        }
    }
}

/// Every graph on `n` vertices up to isomorphism, each in its canonical labelling.
pub fn graphs_up_to_isomorphism(n: usize) -> Result<Vec<Graph>> {
    check_cap("graph enumeration vertices", n as u128, 7)?;
    let slots: Vec<(usize, usize)> = (1..=n).flat_map(|u| (u + 1..=n).map(move |v| (u, v))).collect();
    let mut index = vec![vec![0usize; n + 1]; n + 1];
    for (s, &(u, v)) in slots.iter().enumerate() {
        index[u][v] = s;
        index[v][u] = s;
    }
    let perms = permutations(n);
    let mut canon = BTreeSet::new();
    for mask in 0u64..1 << slots.len() {
        let best = perms
            .iter()
            .map(|perm| {
                slots
                    .iter()
                    .enumerate()
                    .filter(|&(s, _)| mask >> s & 1 == 1)
                    .fold(0u64, |acc, (_, &(u, v))| acc | 1 << index[perm[u - 1]][perm[v - 1]])
            })
            .min()
            .unwrap_or(0);
        canon.insert(best);
    }
    canon
        .into_iter()
        .map(|mask| {
            let edges: Vec<(usize, usize)> =
                slots.iter().enumerate().filter(|&(s, _)| mask >> s & 1 == 1).map(|(_, &e)| e).collect();
            Graph::new(n, &edges)
        })
        .collect()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (1..=n).collect();
    fn heap(k: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(current.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, current, out);
            let j = if k.is_multiple_of(2) { i } else { 0 };
            current.swap(j, k - 1);
        }
    }
    heap(n, &mut current, &mut out);
    out
}

/// A random graph on `n` vertices with edge probability `density`, colored
/// uniformly with `1..=k` when `k > 0`.
pub fn random_graph(rng: &mut impl Rng, n: usize, density: f64, k: usize) -> Graph {
    let edges: Vec<(usize, usize)> =
        (1..=n).flat_map(|u| (u + 1..=n).map(move |v| (u, v))).filter(|_| rng.random_bool(density)).collect();
    let g = Graph::new(n, &edges).expect("generated edges are simple");
    if k == 0 {
        g
    } else {
        let colors = (0..n).map(|_| rng.random_range(1..=k)).collect();
        g.with_colors(colors).expect("one color per vertex")
    }
}

/// A random formula with `m` clauses of three distinct variables each.
///
/// # Panics
/// If `n < 3`.
pub fn random_formula(rng: &mut impl Rng, n: usize, m: usize) -> CnfFormula {
    assert!(n >= 3, "three distinct variables need n >= 3");
    let clauses = (0..m)
        .map(|_| {
            let mut vars: Vec<i64> = Vec::with_capacity(3);
            while vars.len() < 3 {
                let v = rng.random_range(1..=n as i64);
                if !vars.contains(&v) {
                    vars.push(v);
                }
            }
            let mut clause = [0i64; 3];
            for (slot, v) in clause.iter_mut().zip(vars) {
                *slot = if rng.random_bool(0.5) { v } else { -v };
            }
            clause
        })
        .collect();
    CnfFormula::new(n, clauses).expect("literals are in range and distinct")
}

/// Every formula over `n` variables with `m` clauses, each clause a set of
/// three distinct literals, clauses listed in nondecreasing order.
pub fn all_formulas(n: usize, m: usize) -> Vec<CnfFormula> {
    let literals: Vec<i64> = (1..=n as i64).flat_map(|v| [v, -v]).collect();
    let mut clauses = Vec::new();
    for a in 0..literals.len() {
        for b in a + 1..literals.len() {
            for c in b + 1..literals.len() {
                clauses.push([literals[a], literals[b], literals[c]]);
            }
        }
    }
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn extend(
        clauses: &[[i64; 3]],
        from: usize,
        m: usize,
        n: usize,
        current: &mut Vec<[i64; 3]>,
        out: &mut Vec<CnfFormula>,
    ) {
        if current.len() == m {
            out.push(CnfFormula::new(n, current.clone()).expect("clauses are valid"));
            return;
        }
        for i in from..clauses.len() {
            current.push(clauses[i]);
            extend(clauses, i, m, n, current, out);
            current.pop();
        }
    }
    extend(&clauses, 0, m, n, &mut current, &mut out);
    out
}

/// Checks that a cost is within the construction's budget.
pub fn within_budget(cost: &CostValue, budget: &CostValue) -> bool {
    cost_le(cost, budget, &Tolerance::default())
}

#[cfg(test)]
mod tests;
