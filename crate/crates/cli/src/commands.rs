//! The solve, select, generate and verify commands.

use std::fs;
use std::io::Write;
use std::path::Path;

use kclust::generators::{
    all_formulas, gen_lp_selection_from_mcc, graphs_up_to_isomorphism, random_formula, random_graph, ReductionParams,
};
use kclust::selection::select_bruteforce;
use kclust::solver::SolveStats;
use kclust::{
    gen_hioct_from_3sat, gen_l0_clustering_from_clique, gen_l0_selection_from_mcc, gen_l1_selection_from_mcc,
    gen_linf2_from_hioct, gen_linf_clustering_from_clique, gen_linf_selection_from_mcc, select, solve_bruteforce,
    solve_color_coding, Clustering, ClusteringInstance, Error, Graph, Reduction, SelectionInstance, SelectionResult,
    Source, VerifyReport,
};
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::budget::format_budget;
use crate::formats::{GraphFile, GraphInput, InstanceFile, Provenance};
use crate::{CliError, CliResult, GenerateArgs, Mode, SelectArgs, SolveArgs, VerifyArgs, EXIT_NO, EXIT_YES};

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn yes_no(decision: bool) -> &'static str {
    if decision {
        "yes"
    } else {
        "no"
    }
}

fn exit_for(decision: bool) -> i32 {
    if decision {
        EXIT_YES
    } else {
        EXIT_NO
    }
}

fn write_clustering(out: &mut dyn Write, c: &Clustering) -> CliResult<()> {
    writeln!(out, "cost: {}", c.total_cost)?;
    for (i, ((cluster, centroid), cost)) in c.clusters.iter().zip(&c.centroids).zip(&c.costs).enumerate() {
        writeln!(out, "cluster {}: cost {cost} centroid {centroid}", i + 1)?;
        for (point, w) in cluster.points().iter().zip(cluster.weights()) {
            writeln!(out, "  {point} x{w}")?;
        }
    }
    Ok(())
}

fn write_solve_stats(out: &mut dyn Write, s: &SolveStats) -> CliResult<()> {
    writeln!(
        out,
        "stats: colors={} planned_iterations={} iterations={} partitions_tried={} selection_calls={} confidence={:.6}",
        s.colors, s.planned_iterations, s.iterations, s.partitions_tried, s.selection_calls, s.confidence
    )?;
    Ok(())
}

fn describe_clustering(out: &mut dyn Write, inst: &ClusteringInstance) -> CliResult<()> {
    writeln!(
        out,
        "instance: clustering p={} k={} D={} vectors={} distinct={}",
        inst.order(),
        inst.k(),
        format_budget(inst.budget(), inst.order()),
        inst.dataset().len(),
        inst.dataset().points().len()
    )?;
    Ok(())
}

pub fn solve(args: &SolveArgs, out: &mut dyn Write) -> CliResult<i32> {
    let file = InstanceFile::parse(&read(&args.input)?)?;
    let inst = file.to_clustering()?;
    describe_clustering(out, &inst)?;
    match args.flags.mode {
        Mode::Paper => {
            let outcome = solve_color_coding(&inst, &args.flags.solve_config()?)?;
            writeln!(out, "decision: {}", yes_no(outcome.decision))?;
            if let Some(c) = &outcome.clustering {
                write_clustering(out, c)?;
            }
            write_solve_stats(out, &outcome.stats)?;
            Ok(exit_for(outcome.decision))
        }
        Mode::Oracle => {
            let outcome = solve_bruteforce(&inst, &args.flags.bruteforce_config()?)?;
            writeln!(out, "decision: {}", yes_no(outcome.decision))?;
            writeln!(out, "min cost: {}", outcome.min_cost)?;
            write_clustering(out, &outcome.clustering)?;
            writeln!(out, "stats: oracle_nodes={}", outcome.nodes)?;
            Ok(exit_for(outcome.decision))
        }
    }
}

fn write_selection(out: &mut dyn Write, inst: &SelectionInstance, result: &SelectionResult) -> CliResult<()> {
    writeln!(out, "decision: {}", yes_no(result.decision))?;
    if let Some(w) = &result.witness {
        writeln!(out, "cost: {}", w.cost)?;
        writeln!(out, "centroid: {}", w.centroid)?;
        for (g, &i) in w.chosen.iter().enumerate() {
            writeln!(out, "group {}: vector {} {}", g + 1, i + 1, inst.groups()[g][i])?;
        }
    }
    let s = &result.stats;
    writeln!(
        out,
        "stats: centroids_tried={} search_nodes={} coordinate_sets={} tuples_tried={} phase_two={}",
        s.centroids_tried, s.search_nodes, s.coordinate_sets, s.tuples_tried, s.entered_phase_two
    )?;
    Ok(())
}

pub fn select_cmd(args: &SelectArgs, out: &mut dyn Write) -> CliResult<i32> {
    let file = InstanceFile::parse(&read(&args.input)?)?;
    let inst = file.to_selection()?;
    writeln!(
        out,
        "instance: selection p={} t={} vectors={} D={}",
        inst.order(),
        inst.t(),
        inst.m(),
        format_budget(inst.budget(), inst.order())
    )?;
    let cfg = args.flags.select_config()?;
    let result = match args.flags.mode {
        Mode::Paper => select(&inst, &cfg)?,
        Mode::Oracle => select_bruteforce(&inst, &cfg)?,
    };
    write_selection(out, &inst, &result)?;
    Ok(exit_for(result.decision))
}

fn parse_exponent(text: &str) -> CliResult<Ratio<u64>> {
    let bad = || CliError::Core(Error::InvalidOrder(format!("cannot parse p = {text:?}")));
    let (n, d) = text.trim().split_once('/').unwrap_or((text.trim(), "1"));
    let (n, d): (u64, u64) = (n.parse().map_err(|_| bad())?, d.parse().map_err(|_| bad())?);
    if d == 0 {
        return Err(bad());
    }
    Ok(Ratio::new(n, d))
}

fn need_graph(input: &GraphInput, reduction: Reduction) -> CliResult<Graph> {
    match input {
        GraphInput::Graph(g) => Ok(g.clone()),
        _ => Err(Error::InvalidInstance(format!("{reduction} needs a graph file")).into()),
    }
}

/// Builds the instance file for `reduction` applied to `source`.
pub fn generate_instance(
    reduction: Reduction,
    source: &GraphFile,
    k: usize,
    p: &str,
    figure_mode: bool,
) -> CliResult<InstanceFile> {
    let input = source.to_input()?;
    let mut provenance = Provenance {
        reduction: reduction.name().to_string(),
        k: Some(k),
        p: None,
        figure_mode: false,
        source_sha256: source.sha256(),
        note: None,
    };
    let file = match reduction {
        Reduction::L0Clique => {
            InstanceFile::from_clustering(&gen_l0_clustering_from_clique(&need_graph(&input, reduction)?, k)?, None)?
        }
        Reduction::LinfClique => {
            InstanceFile::from_clustering(&gen_linf_clustering_from_clique(&need_graph(&input, reduction)?, k)?, None)?
        }
        Reduction::L0Mcc => {
            InstanceFile::from_selection(&gen_l0_selection_from_mcc(&need_graph(&input, reduction)?, k)?, None)?
        }
        Reduction::L1Mcc => {
            InstanceFile::from_selection(&gen_l1_selection_from_mcc(&need_graph(&input, reduction)?, k)?, None)?
        }
        Reduction::LinfMcc => {
            InstanceFile::from_selection(&gen_linf_selection_from_mcc(&need_graph(&input, reduction)?, k)?, None)?
        }
        Reduction::LpMcc => {
            let exponent = parse_exponent(p)?;
            provenance.p = Some(exponent.to_string());
            let red = gen_lp_selection_from_mcc(&need_graph(&input, reduction)?, k, exponent)?;
            InstanceFile::from_selection(&red.to_selection()?, None)?
        }
        Reduction::SatHioctLinf2 => {
            provenance.k = None;
            provenance.figure_mode = figure_mode;
            let h = match &input {
                GraphInput::Formula(f) => gen_hioct_from_3sat(f)?,
                GraphInput::Hioct(h) => h.clone(),
                GraphInput::Graph(_) => {
                    return Err(Error::InvalidInstance(format!("{reduction} needs a 3sat or hioct file")).into())
                }
            };
            let red = gen_linf2_from_hioct(&h, figure_mode)?;
            let mut note = format!("hioct n={} m={} t={}", h.graph.n(), h.graph.edges().len(), h.t);
            if red.trivially_yes {
                note.push_str(", trivially yes");
            }
            provenance.note = Some(note);
            InstanceFile::from_clustering(&red.instance, None)?
        }
    };
    Ok(InstanceFile { provenance: Some(provenance), ..file })
}

pub fn generate(args: &GenerateArgs, out: &mut dyn Write) -> CliResult<i32> {
    let reduction: Reduction = args.reduction.parse()?;
    let source = GraphFile::parse(&read(&args.graph)?)?;
    let file = generate_instance(reduction, &source, args.k, &args.p, args.figure)?;
    let text = file.render();
    match &args.output {
        Some(path) => fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(EXIT_YES)
}

fn describe_source(source: &Source) -> String {
    match source {
        Source::Graph(g) => g.to_string(),
        Source::Formula(f) => format!("n={} clauses={:?}", f.num_vars(), f.clauses()),
    }
}

/// The sources checked by `verify`, in a fixed order.
pub fn verify_sources(args: &VerifyArgs, reduction: Reduction) -> CliResult<Vec<Source>> {
    let mut sources = Vec::new();
    if let Some(path) = &args.graph {
        sources.push(GraphFile::parse(&read(path)?)?.to_source()?);
    }
    let chain = reduction == Reduction::SatHioctLinf2;
    if let Some(n) = args.sweep {
        if chain {
            for m in 1..=args.clauses {
                sources.extend(all_formulas(n, m).into_iter().map(Source::Formula));
            }
        } else {
            for g in graphs_up_to_isomorphism(n)? {
                if reduction.needs_colors() {
                    for colors in colorings(n, args.k) {
                        sources.push(Source::Graph(g.clone().with_colors(colors)?));
                    }
                } else {
                    sources.push(Source::Graph(g));
                }
            }
        }
    }
    if let Some(samples) = args.samples {
        let mut rng = ChaCha8Rng::seed_from_u64(args.flags.seed);
        for _ in 0..samples {
            if chain {
                let n = rng.random_range(3..=args.vertices.max(3));
                let m = rng.random_range(1..=args.clauses.max(1));
                sources.push(Source::Formula(random_formula(&mut rng, n, m)));
            } else {
                let n = rng.random_range(args.k.min(args.vertices)..=args.vertices);
                let density = rng.random_range(0.3..0.9);
                let colors = if reduction.needs_colors() { args.k } else { 0 };
                sources.push(Source::Graph(random_graph(&mut rng, n, density, colors)));
            }
        }
    }
    if sources.is_empty() {
        return Err(Error::InvalidInstance("give a graph file, --sweep or --samples".into()).into());
    }
    Ok(sources)
}

fn colorings(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|c: Vec<usize>| {
                (1..=k).map(move |color| {
                    let mut next = c.clone();
                    next.push(color);
                    next
                })
            })
            .collect();
    }
    out
}

pub fn verify(args: &VerifyArgs, out: &mut dyn Write) -> CliResult<i32> {
    let reduction: Reduction = args.reduction.parse()?;
    let params = ReductionParams { k: args.k, p: parse_exponent(&args.p)? };
    let cfg = args.flags.verify_config(args.figure)?;
    let sources = verify_sources(args, reduction)?;
    let jobs = args.flags.jobs.max(1).min(sources.len());
    let mut results: Vec<Option<kclust::Result<VerifyReport>>> = (0..sources.len()).map(|_| None).collect();
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..jobs)
            .map(|w| {
                let (sources, params, cfg) = (&sources, &params, &cfg);
                scope.spawn(move || {
                    (w..sources.len())
                        .step_by(jobs)
                        .map(|i| (i, kclust::verify_reduction(reduction, &sources[i], params, cfg)))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        for h in handles {
            for (i, r) in h.join().expect("verify worker panicked") {
                results[i] = Some(r);
            }
        }
    });
    let mut disagreements = 0usize;
    for (i, (source, result)) in sources.iter().zip(results).enumerate() {
        let report = result.expect("every source is checked")?;
        if !report.agree {
            disagreements += 1;
        }
        writeln!(out, "{}\t{}\t{report}", i + 1, describe_source(source))?;
    }
    writeln!(out, "checked {}, agree {}, disagree {}", sources.len(), sources.len() - disagreements, disagreements)?;
    Ok(if disagreements == 0 { EXIT_YES } else { EXIT_NO })
}
