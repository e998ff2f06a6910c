//! Difference hypergraphs over coordinates and enumeration of the coordinate
//! subsets where an optimal centroid may deviate from a pivot vector.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_traits::ToPrimitive;

use crate::cost::{CostValue, Tolerance};
use crate::data::DataPoint;
use crate::error::{Error, Result};
use crate::selection::SelectionInstance;

/// A hypergraph on vertices `0..num_vertices` with weighted hyperedges.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Hypergraph {
    num_vertices: usize,
    edges: Vec<(Vec<usize>, u64)>,
}

impl Hypergraph {
    /// Edges are given as vertex lists with a multiplicity each.
    pub fn new(num_vertices: usize, edges: Vec<(Vec<usize>, u64)>) -> Result<Self> {
        let mut normalized = Vec::with_capacity(edges.len());
        for (mut set, mult) in edges {
            set.sort_unstable();
            set.dedup();
            if set.last().is_some_and(|&v| v >= num_vertices) {
                return Err(Error::InvalidInstance(format!("edge {set:?} leaves 0..{num_vertices}")));
            }
            if mult == 0 {
                return Err(Error::InvalidInstance("edge multiplicities must be positive".into()));
            }
            normalized.push((set, mult));
        }
        Ok(Self { num_vertices, edges: normalized })
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn edges(&self) -> &[(Vec<usize>, u64)] {
        &self.edges
    }

    /// Total edge count with multiplicity.
    pub fn edge_weight(&self) -> u64 {
        self.edges.iter().map(|(_, m)| m).sum()
    }

    /// Union of all edges, ascending.
    pub fn covered_vertices(&self) -> Vec<usize> {
        let set: BTreeSet<usize> = self.edges.iter().flat_map(|(e, _)| e.iter().copied()).collect();
        set.into_iter().collect()
    }

    /// Distinct edge sets, ignoring multiplicity.
    fn distinct_edges(&self) -> Vec<&[usize]> {
        let set: BTreeSet<&[usize]> = self.edges.iter().map(|(e, _)| e.as_slice()).collect();
        set.into_iter().collect()
    }
}

/// A small hypergraph used as a template for coordinate subsets.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Pattern {
    pub hypergraph: Hypergraph,
    pub quarter_covered: bool,
}

/// Limits on pattern enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PatternCaps {
    pub vertices: usize,
    pub edges: usize,
    /// Largest number of edge multisets examined before giving up.
    pub candidates: u128,
}

impl Default for PatternCaps {
    fn default() -> Self {
        Self { vertices: 6, edges: 6, candidates: 2_000_000 }
    }
}

/// How candidate coordinate sets are produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CandidateMode {
    /// Quarter-covered patterns and their appearances in the host.
    Paper,
    /// Every subset of at most `D` covered coordinates.
    Exhaustive,
}

/// One hyperedge per input vector of weight at most `D`, listing where it
/// differs from `pivot`; vectors differing in more than `D` coordinates are
/// skipped.
pub fn build_difference_hypergraph(
    pivot: &DataPoint,
    inst: &SelectionInstance,
    budget: &CostValue,
    tol: &Tolerance,
) -> Result<Hypergraph> {
    if pivot.dim() != inst.dimension() {
        return Err(Error::DimensionMismatch { expected: inst.dimension(), found: pivot.dim() });
    }
    let limit = budget.floor(tol).to_u64().unwrap_or(u64::MAX);
    let mut edges = Vec::new();
    for (_, _, x, w) in inst.vectors() {
        let Some(w) = w.to_u64().filter(|&w| w <= limit) else {
            continue;
        };
        let differ: Vec<usize> = (0..pivot.dim()).filter(|&i| x.coords()[i] != pivot.coords()[i]).collect();
        if differ.len() as u64 <= limit {
            edges.push((differ, w));
        }
    }
    Hypergraph::new(pivot.dim(), edges)
}

/// Every vertex lies in at least a quarter of the edges, counting multiplicity.
pub fn quarter_cover_holds(h: &Hypergraph) -> bool {
    let need = h.edge_weight().div_ceil(4);
    (0..h.num_vertices).all(|v| {
        let covered: u64 = h.edges.iter().filter(|(e, _)| e.binary_search(&v).is_ok()).map(|(_, m)| m).sum();
        covered >= need
    })
}

/// Edge-count bound `⌈160 ln max(D, 2)⌉`.
pub fn log_edge_bound(budget: u64) -> usize {
    (160.0 * (budget.max(2) as f64).ln()).ceil() as usize
}

/// All quarter-covered hypergraphs with `1..=min(D, caps.vertices)` vertices
/// and `1..=min(D, ⌈160 ln max(D,2)⌉, caps.edges)` edges, one per
/// isomorphism class.
///
/// A solution cluster in the second phase has total weight at most `D`, so
/// its pattern never has more than `D` edges.
pub fn enumerate_patterns(budget: u64, caps: &PatternCaps) -> Result<Vec<Pattern>> {
    if budget == 0 {
        return Err(Error::InvalidBudget("patterns need D >= 1".into()));
    }
    let max_vertices = (budget as usize).min(caps.vertices);
    let max_edges = (budget as usize).min(log_edge_bound(budget)).min(caps.edges);
    if max_vertices > 16 {
        return Err(Error::CapExceeded { what: "pattern vertices", size: max_vertices as u128, cap: 16 });
    }
    let mut examined: u128 = 0;
    let mut out = Vec::new();
    for v in 1..=max_vertices {
        let perms = permutations(v);
        let masks = 1usize << v;
        for e in 1..=max_edges {
            let mut seq = vec![0usize; e];
            loop {
                examined += 1;
                if examined > caps.candidates {
                    return Err(Error::CapExceeded {
                        what: "pattern candidates",
                        size: examined,
                        cap: caps.candidates,
                    });
                }
                if mask_quarter_covered(v, &seq) && is_canonical(&seq, &perms) {
                    let edges = seq.iter().map(|&m| ((0..v).filter(|&b| m >> b & 1 == 1).collect(), 1)).collect();
                    let hypergraph = merge_multiplicities(Hypergraph::new(v, edges)?);
                    out.push(Pattern { hypergraph, quarter_covered: true });
                }
                // next non-decreasing sequence over 0..masks
                let Some(i) = (0..e).rev().find(|&i| seq[i] + 1 < masks) else {
                    break;
                };
                let next = seq[i] + 1;
                seq[i..].iter_mut().for_each(|s| *s = next);
            }
        }
    }
    Ok(out)
}

fn merge_multiplicities(h: Hypergraph) -> Hypergraph {
    let mut merged: BTreeMap<Vec<usize>, u64> = BTreeMap::new();
    for (e, m) in h.edges {
        *merged.entry(e).or_default() += m;
    }
    Hypergraph { num_vertices: h.num_vertices, edges: merged.into_iter().collect() }
}

fn mask_quarter_covered(v: usize, seq: &[usize]) -> bool {
    let need = seq.len().div_ceil(4);
    (0..v).all(|b| seq.iter().filter(|&&m| m >> b & 1 == 1).count() >= need)
}

fn permutations(v: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..v).collect();
    heap_permute(v, &mut current, &mut out);
    out
}

fn heap_permute(k: usize, items: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if k <= 1 {
        out.push(items.clone());
        return;
    }
    for i in 0..k {
        heap_permute(k - 1, items, out);
        let j = if k.is_multiple_of(2) { i } else { 0 };
        items.swap(j, k - 1);
    }
}

fn relabel(seq: &[usize], perm: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = seq
        .iter()
        .map(|&m| perm.iter().enumerate().filter(|&(b, _)| m >> b & 1 == 1).map(|(_, &t)| 1 << t).sum())
        .collect();
    out.sort_unstable();
    out
}

/// The sorted mask list is minimal among all relabelings.
fn is_canonical(seq: &[usize], perms: &[Vec<usize>]) -> bool {
    perms.iter().all(|p| relabel(seq, p).as_slice() >= seq)
}

/// Canonical form of a hypergraph on at most 16 vertices, for isomorphism tests.
pub fn canonical_form(h: &Hypergraph) -> (usize, Vec<usize>) {
    let seq: Vec<usize> = h
        .edges
        .iter()
        .flat_map(|(e, m)| std::iter::repeat_n(e.iter().map(|&v| 1usize << v).sum::<usize>(), *m as usize))
        .collect();
    let best = permutations(h.num_vertices).iter().map(|p| relabel(&seq, p)).min().unwrap_or_default();
    (h.num_vertices, best)
}

/// Every `V′ ⊆ V(host)` admitting a bijection `π: V(pattern) → V′` with each
/// pattern edge equal to `E′ ∩ V′` for some host edge `E′`.
pub fn find_appearances(pattern: &Hypergraph, host: &Hypergraph) -> Vec<Vec<usize>> {
    let pattern_edges = pattern.distinct_edges();
    let host_edges = host.distinct_edges();
    let mut found = BTreeSet::new();
    if pattern.num_vertices > host.num_vertices {
        return Vec::new();
    }
    let mut image = Vec::with_capacity(pattern.num_vertices);
    // Pattern vertices lie in some edge unless the pattern is uncovered, so
    // images outside the host's covered vertices only matter in that case.
    let targets: Vec<usize> = if quarter_cover_holds(pattern) && pattern.edge_weight() > 0 {
        host.covered_vertices()
    } else {
        (0..host.num_vertices).collect()
    };
    extend_appearance(&pattern_edges, &host_edges, pattern.num_vertices, &targets, &mut image, &mut found);
    found.into_iter().collect()
}

fn extend_appearance(
    pattern_edges: &[&[usize]],
    host_edges: &[&[usize]],
    pattern_vertices: usize,
    targets: &[usize],
    image: &mut Vec<usize>,
    found: &mut BTreeSet<Vec<usize>>,
) {
    let assigned = image.len();
    let consistent = pattern_edges.iter().all(|pe| {
        host_edges.iter().any(|he| {
            // Agreement on assigned vertices, and on the full image once complete.
            (0..assigned).all(|u| pe.binary_search(&u).is_ok() == he.binary_search(&image[u]).is_ok())
        })
    });
    if !consistent {
        return;
    }
    if assigned == pattern_vertices {
        let mut set = image.clone();
        set.sort_unstable();
        found.insert(set);
        return;
    }
    for &target in targets {
        if image.contains(&target) {
            continue;
        }
        image.push(target);
        extend_appearance(pattern_edges, host_edges, pattern_vertices, targets, image, found);
        image.pop();
    }
}

/// Coordinate subsets where the centroid may differ from the pivot.
///
/// The empty set is always included.
pub fn candidate_coordinate_sets(
    host: &Hypergraph,
    budget: u64,
    mode: CandidateMode,
    caps: &PatternCaps,
) -> Result<BTreeSet<Vec<usize>>> {
    let mut out = BTreeSet::from([Vec::new()]);
    if budget == 0 {
        return Ok(out);
    }
    match mode {
        CandidateMode::Exhaustive => {
            let universe = host.covered_vertices();
            let mut chosen = Vec::new();
            subsets_up_to(&universe, 0, budget as usize, &mut chosen, &mut out);
        }
        CandidateMode::Paper => {
            let patterns = enumerate_patterns(budget, caps)?;
            let mut memo: HashMap<(usize, Vec<Vec<usize>>), Vec<Vec<usize>>> = HashMap::new();
            for pattern in patterns {
                let h = &pattern.hypergraph;
                let key = (h.num_vertices, h.distinct_edges().iter().map(|e| e.to_vec()).collect());
                let sets = memo.entry(key).or_insert_with(|| find_appearances(h, host));
                out.extend(sets.iter().cloned());
            }
        }
    }
    Ok(out)
}

fn subsets_up_to(
    universe: &[usize],
    start: usize,
    size: usize,
    chosen: &mut Vec<usize>,
    out: &mut BTreeSet<Vec<usize>>,
) {
    out.insert(chosen.clone());
    if chosen.len() == size {
        return;
    }
    for i in start..universe.len() {
        chosen.push(universe[i]);
        subsets_up_to(universe, i + 1, size, chosen, out);
        chosen.pop();
    }
}

#[cfg(test)]
mod tests;
