//! Plain Rust layer behind the Python bindings.

use kclust::centroids::{optimal_centroid, WeightedCluster};
use kclust::generators::ReductionParams;
use kclust::selection::select_bruteforce;
use kclust::{
    dist, select, solve_bruteforce, solve_color_coding, Centroid, Clustering, ClusteringInstance, CostValue, DataPoint,
    Dataset, DistanceOrder, Error, Reduction, Result, SelectionInstance,
};
use kclust_cli::budget::{format_budget, parse_budget};
use kclust_cli::commands::generate_instance;
use kclust_cli::formats::{GraphFile, InstanceFile};
use kclust_cli::{Mode, Policy, RunFlags};
use num_bigint::BigUint;
use num_traits::ToPrimitive;

fn mode(text: &str) -> Result<Mode> {
    match text {
        "paper" => Ok(Mode::Paper),
        "oracle" => Ok(Mode::Oracle),
        _ => Err(Error::InvalidInstance(format!("mode must be paper or oracle, got {text:?}"))),
    }
}

fn rows(points: &[DataPoint]) -> Vec<Vec<i64>> {
    points.iter().map(|p| p.coords().iter().map(|c| c.to_i64().unwrap_or(i64::MAX)).collect()).collect()
}

fn centroid_strings(c: &Centroid) -> Vec<String> {
    c.coords().iter().map(ToString::to_string).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClusterReport {
    pub members: Vec<Vec<i64>>,
    pub weights: Vec<u64>,
    pub centroid: Vec<String>,
    pub cost: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveReport {
    pub decision: bool,
    pub cost: Option<String>,
    pub cost_float: Option<f64>,
    pub clusters: Vec<ClusterReport>,
    pub stats: Vec<(&'static str, f64)>,
}

fn cluster_reports(c: &Clustering) -> Vec<ClusterReport> {
    c.clusters
        .iter()
        .zip(&c.centroids)
        .zip(&c.costs)
        .map(|((cluster, centroid), cost)| ClusterReport {
            members: rows(cluster.points()),
            weights: cluster.weights().iter().map(|w| w.to_u64().unwrap_or(u64::MAX)).collect(),
            centroid: centroid_strings(centroid),
            cost: cost.to_string(),
        })
        .collect()
}

pub fn clustering_instance(
    p: &str,
    vectors: &[Vec<i64>],
    k: usize,
    budget: &str,
    multiplicities: Option<&[u64]>,
) -> Result<ClusteringInstance> {
    let order: DistanceOrder = p.parse()?;
    let dimension = vectors.first().map_or(0, Vec::len);
    let points = vectors.iter().map(|r| DataPoint::from_i64(r)).collect();
    let mult = match multiplicities {
        Some(m) => m.iter().map(|&x| BigUint::from(x)).collect(),
        None => vec![BigUint::from(1u32); vectors.len()],
    };
    let dataset = Dataset::with_multiplicities(dimension, points, mult)?;
    let budget = parse_budget(budget, &order)?;
    ClusteringInstance::new(dataset, k, budget, order)
}

pub fn selection_instance(
    p: &str,
    groups: &[Vec<Vec<i64>>],
    budget: &str,
    weights: Option<&[Vec<u64>]>,
) -> Result<SelectionInstance> {
    let order: DistanceOrder = p.parse()?;
    let dimension = groups.iter().flatten().next().map_or(0, Vec::len);
    let points = groups.iter().map(|g| g.iter().map(|r| DataPoint::from_i64(r)).collect()).collect();
    let weights = match weights {
        Some(w) => w.iter().map(|g| g.iter().map(|&x| BigUint::from(x)).collect()).collect(),
        None => groups.iter().map(|g| vec![BigUint::from(1u32); g.len()]).collect(),
    };
    let budget = parse_budget(budget, &order)?;
    SelectionInstance::new(order, dimension, points, weights, budget)
}

pub fn solve(inst: &ClusteringInstance, policy: &str, seed: u64, jobs: usize, mode_name: &str) -> Result<SolveReport> {
    let policy: Policy = policy.parse().map_err(Error::InvalidInstance)?;
    let flags = RunFlags { seed, policy, jobs, ..RunFlags::default() };
    match mode(mode_name)? {
        Mode::Paper => {
            let out = solve_color_coding(inst, &flags.solve_config()?)?;
            let s = &out.stats;
            Ok(SolveReport {
                decision: out.decision,
                cost: out.clustering.as_ref().map(|c| c.total_cost.to_string()),
                cost_float: out.clustering.as_ref().map(|c| c.total_cost.to_f64()),
                clusters: out.clustering.as_ref().map(cluster_reports).unwrap_or_default(),
                stats: vec![
                    ("colors", s.colors as f64),
                    ("planned_iterations", s.planned_iterations as f64),
                    ("iterations", s.iterations as f64),
                    ("partitions_tried", s.partitions_tried as f64),
                    ("selection_calls", s.selection_calls as f64),
                    ("confidence", s.confidence),
                ],
            })
        }
        Mode::Oracle => {
            let out = solve_bruteforce(inst, &flags.bruteforce_config()?)?;
            Ok(SolveReport {
                decision: out.decision,
                cost: Some(out.min_cost.to_string()),
                cost_float: Some(out.min_cost.to_f64()),
                clusters: cluster_reports(&out.clustering),
                stats: vec![("oracle_nodes", out.nodes as f64)],
            })
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SelectReport {
    pub decision: bool,
    pub cost: Option<String>,
    pub cost_float: Option<f64>,
    /// Zero-based index of the chosen vector in each group.
    pub chosen: Vec<usize>,
    pub centroid: Vec<String>,
    pub stats: Vec<(&'static str, f64)>,
}

pub fn select_report(inst: &SelectionInstance, mode_name: &str) -> Result<SelectReport> {
    let cfg = RunFlags::default().select_config()?;
    let out = match mode(mode_name)? {
        Mode::Paper => select(inst, &cfg)?,
        Mode::Oracle => select_bruteforce(inst, &cfg)?,
    };
    let s = &out.stats;
    Ok(SelectReport {
        decision: out.decision,
        cost: out.witness.as_ref().map(|w| w.cost.to_string()),
        cost_float: out.witness.as_ref().map(|w| w.cost.to_f64()),
        chosen: out.witness.as_ref().map(|w| w.chosen.clone()).unwrap_or_default(),
        centroid: out.witness.as_ref().map(|w| centroid_strings(&w.centroid)).unwrap_or_default(),
        stats: vec![
            ("centroids_tried", s.centroids_tried as f64),
            ("search_nodes", s.search_nodes as f64),
            ("coordinate_sets", s.coordinate_sets as f64),
            ("tuples_tried", s.tuples_tried as f64),
        ],
    })
}

/// `dist_p(x, y)` as an exact string.
pub fn distance(p: &str, x: &[i64], y: &[i64]) -> Result<String> {
    let order: DistanceOrder = p.parse()?;
    Ok(dist(&order, &DataPoint::from_i64(x), &DataPoint::from_i64(y))?.to_string())
}

/// The optimal centroid and cost of a weighted cluster.
pub fn centroid(p: &str, points: &[Vec<i64>], weights: Option<&[u64]>) -> Result<(Vec<String>, String)> {
    let order: DistanceOrder = p.parse()?;
    let pts = points.iter().map(|r| DataPoint::from_i64(r)).collect();
    let ws = match weights {
        Some(w) => w.iter().map(|&x| BigUint::from(x)).collect(),
        None => vec![BigUint::from(1u32); points.len()],
    };
    let cluster = WeightedCluster::new(pts, ws)?;
    let (c, cost) = optimal_centroid(&order, &cluster);
    Ok((centroid_strings(&c), cost.to_string()))
}

/// The canonical form of a budget under `p`.
pub fn canonical_budget(text: &str, p: &str) -> Result<String> {
    let order: DistanceOrder = p.parse()?;
    Ok(format_budget(&parse_budget(text, &order)?, &order))
}

fn cli_error(e: kclust_cli::CliError) -> Error {
    match e {
        kclust_cli::CliError::Core(e) => e,
        kclust_cli::CliError::Io(msg) => Error::InvalidInstance(msg),
    }
}

/// The instance file produced by a reduction on a graph file.
pub fn generate(reduction: &str, graph_json: &str, k: usize, p: &str, figure: bool) -> Result<String> {
    let reduction: Reduction = reduction.parse()?;
    let source = GraphFile::parse(graph_json)?;
    Ok(generate_instance(reduction, &source, k, p, figure).map_err(cli_error)?.render())
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifySummary {
    pub agree: bool,
    pub source: bool,
    pub target: bool,
    pub hioct: Option<bool>,
    pub budget: Option<String>,
    pub target_cost: Option<String>,
    pub report: String,
}

pub fn verify(reduction: &str, graph_json: &str, k: usize, p: &str, mode_name: &str) -> Result<VerifySummary> {
    let reduction: Reduction = reduction.parse()?;
    let source = GraphFile::parse(graph_json)?.to_source()?;
    let (n, d) = p.split_once('/').unwrap_or((p, "1"));
    let parse = |s: &str| s.trim().parse::<u64>().map_err(|_| Error::InvalidOrder(format!("cannot parse p = {p:?}")));
    let params = ReductionParams { k, p: num_rational::Ratio::new(parse(n)?, parse(d)?) };
    let flags = RunFlags { mode: mode(mode_name)?, ..RunFlags::default() };
    let r = kclust::verify_reduction(reduction, &source, &params, &flags.verify_config(false)?)?;
    Ok(VerifySummary {
        agree: r.agree,
        source: r.source_truth,
        target: r.target_truth,
        hioct: r.intermediate_truth,
        budget: r.budget.as_ref().map(CostValue::to_string),
        target_cost: r.target_cost.as_ref().map(CostValue::to_string),
        report: r.to_string(),
    })
}

pub fn clustering_from_json(text: &str) -> Result<ClusteringInstance> {
    InstanceFile::parse(text)?.to_clustering()
}

pub fn selection_from_json(text: &str) -> Result<SelectionInstance> {
    InstanceFile::parse(text)?.to_selection()
}

pub fn clustering_to_json(inst: &ClusteringInstance) -> Result<String> {
    Ok(InstanceFile::from_clustering(inst, None)?.render())
}

pub fn selection_to_json(inst: &SelectionInstance) -> Result<String> {
    Ok(InstanceFile::from_selection(inst, None)?.render())
}
