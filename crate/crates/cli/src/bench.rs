//! Timing suites with enumeration counters, written as CSV.

use std::collections::BTreeSet;
use std::fs;
use std::io::Write;
use std::time::Instant;

use kclust::solver::enumerate_color_partitions;
use kclust::{
    select, solve_color_coding, ClusteringInstance, CostValue, DataPoint, Dataset, DistanceOrder, Error,
    IterationPolicy, SelectConfig, SelectionInstance, SolveConfig,
};
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::budget::format_budget;
use crate::{BenchArgs, CliError, CliResult, EXIT_YES};

pub const HEADER: &str = "suite,solver,vectors,budget,colors,decision,wall_us,patterns_tried,centroids_tried,\
search_nodes,colorings,partitions_tried,color_partitions";

pub const SUITES: [&str; 7] = ["select-lp01", "select-l1", "select-l2", "select-linf", "select-l0", "solve", "empty"];

/// One CSV row; absent counters are left empty.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Row {
    pub suite: String,
    pub solver: String,
    pub vectors: usize,
    pub budget: String,
    pub colors: Option<u64>,
    pub decision: bool,
    pub wall_us: u128,
    pub patterns_tried: Option<u64>,
    pub centroids_tried: Option<u64>,
    pub search_nodes: Option<u64>,
    pub colorings: Option<u64>,
    pub partitions_tried: Option<u64>,
    pub color_partitions: Option<usize>,
}

fn cell<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(ToString::to_string).unwrap_or_default()
}

impl Row {
    pub fn csv(&self) -> String {
        [
            self.suite.clone(),
            self.solver.clone(),
            self.vectors.to_string(),
            self.budget.clone(),
            cell(&self.colors),
            self.decision.to_string(),
            self.wall_us.to_string(),
            cell(&self.patterns_tried),
            cell(&self.centroids_tried),
            cell(&self.search_nodes),
            cell(&self.colorings),
            cell(&self.partitions_tried),
            cell(&self.color_partitions),
        ]
        .join(",")
    }
}

const SCALE: i64 = 2;

/// Three groups of three distinct vectors in `{0, 2, 4, 6}^4`.
fn bench_selection(order: DistanceOrder, seed: u64) -> kclust::Result<SelectionInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pool = BTreeSet::new();
    while pool.len() < 9 {
        pool.insert((0..4).map(|_| SCALE * rng.random_range(0..=3)).collect::<Vec<i64>>());
    }
    let rows: Vec<Vec<i64>> = pool.into_iter().collect();
    let mut groups = vec![Vec::new(); 3];
    for (i, row) in rows.iter().enumerate() {
        groups[i % 3].push(DataPoint::from_i64(row));
    }
    let weights = groups.iter().map(|g| vec![BigUint::from(1u32); g.len()]).collect();
    SelectionInstance::new(order, 4, groups, weights, CostValue::zero())
}

fn select_suite(suite: &str, order: DistanceOrder, seed: u64) -> kclust::Result<Vec<Row>> {
    let base = bench_selection(order.clone(), seed)?;
    let cfg = SelectConfig::default();
    let mut rows = Vec::new();
    for d in 1..=4u64 {
        let inst = base.with_budget(CostValue::int(d));
        let start = Instant::now();
        let result = select(&inst, &cfg)?;
        let wall_us = start.elapsed().as_micros();
        rows.push(Row {
            suite: suite.into(),
            solver: "select".into(),
            vectors: inst.m(),
            budget: format_budget(inst.budget(), &order),
            decision: result.decision,
            wall_us,
            patterns_tried: Some(result.stats.coordinate_sets),
            centroids_tried: Some(result.stats.centroids_tried),
            search_nodes: Some(result.stats.search_nodes),
            ..Row::default()
        });
    }
    Ok(rows)
}

/// Four 1-D points nine apart under `p = 1/2` with `k = 3` and budgets `T/2`,
/// so `T = 2..5` colors and every answer is no.
fn solve_suite(seed: u64) -> kclust::Result<Vec<Row>> {
    let order = DistanceOrder::lp(1, 2)?;
    let points = (0..4).map(|x| DataPoint::from_i64(&[9 * x])).collect();
    let dataset = Dataset::new(1, points)?;
    let cfg = SolveConfig { seed, policy: IterationPolicy::Exhaustive, ..SolveConfig::default() };
    let mut rows = Vec::new();
    for colors in 2..=5u64 {
        let budget = CostValue::ratio(colors as i64, 2);
        let inst = ClusteringInstance::new(dataset.clone(), 3, budget, order.clone())?;
        let start = Instant::now();
        let outcome = solve_color_coding(&inst, &cfg)?;
        let wall_us = start.elapsed().as_micros();
        let all: Vec<usize> = (0..colors as usize).collect();
        rows.push(Row {
            suite: "solve".into(),
            solver: "color-coding".into(),
            vectors: 4,
            budget: format_budget(inst.budget(), &order),
            colors: Some(outcome.stats.colors),
            decision: outcome.decision,
            wall_us,
            centroids_tried: Some(outcome.stats.selection_calls),
            colorings: Some(outcome.stats.planned_iterations),
            partitions_tried: Some(outcome.stats.partitions_tried),
            color_partitions: Some(enumerate_color_partitions(colors as usize, &all)?.len()),
            ..Row::default()
        });
    }
    Ok(rows)
}

/// The rows of a suite.
pub fn suite_rows(suite: &str, seed: u64) -> kclust::Result<Vec<Row>> {
    match suite {
        "select-lp01" => select_suite(suite, DistanceOrder::lp(1, 2)?, seed),
        "select-l1" => select_suite(suite, DistanceOrder::l1(), seed),
        "select-l2" => select_suite(suite, DistanceOrder::L2, seed),
        "select-linf" => select_suite(suite, DistanceOrder::LInf, seed),
        "select-l0" => select_suite(suite, DistanceOrder::L0, seed),
        "solve" => solve_suite(seed),
        "empty" => Ok(Vec::new()),
        _ => Err(Error::InvalidInstance(format!("unknown suite {suite:?}; known: {}", SUITES.join(", ")))),
    }
}

pub fn run(args: &BenchArgs, out: &mut dyn Write) -> CliResult<i32> {
    let rows = suite_rows(&args.suite, args.seed)?;
    let mut text = format!("{HEADER}\n");
    for row in &rows {
        text.push_str(&row.csv());
        text.push('\n');
    }
    match &args.output {
        Some(path) => fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(EXIT_YES)
}
