use std::path::PathBuf;
use std::process::Command;

use kclust::generators::random_graph;
use kclust::{CnfFormula, CostValue, Reduction};
use kclust_cli::bench::{suite_rows, HEADER};
use kclust_cli::commands::generate_instance;
use kclust_cli::formats::{GraphFile, InstanceFile};
use kclust_cli::{run_args, EXIT_ERROR, EXIT_NO, EXIT_YES};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name).display().to_string()
}

fn scratch(name: &str) -> String {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name).display().to_string()
}

fn kclust(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("kclust").chain(args.iter().copied());
    let code = run_args(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn generate(reduction: &str, graph: &str, extra: &[&str], name: &str) -> String {
    let path = scratch(name);
    let mut args = vec!["generate", reduction, graph, "-o", path.as_str()];
    args.extend_from_slice(extra);
    let (code, _, err) = kclust(&args);
    assert_eq!(code, EXIT_YES, "{err}");
    path
}

fn read_instance(path: &str) -> InstanceFile {
    InstanceFile::parse(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn generate_l0_clique_figure() {
    let path = generate("l0-clique", &data("l0_figure_graph.json"), &["--k", "3"], "l0_figure.json");
    let file = read_instance(&path);
    assert_eq!(file.vectors.len(), 12);
    assert_eq!(file.k, Some(10));
    assert_eq!(file.budget, "3");
    let prov = file.provenance.unwrap();
    assert_eq!(prov.reduction, "l0-clique");
    assert_eq!(prov.k, Some(3));
    assert_eq!(prov.source_sha256.len(), 64);
}

#[test]
fn generate_lp_mcc_budget_form() {
    let path = generate("lp-mcc", &data("mcc_figure_graph.json"), &["--k", "3", "--p", "2"], "lp_figure.json");
    let file = read_instance(&path);
    assert_eq!(file.budget, "z/s2:2/1");
    assert_eq!(file.to_selection().unwrap().budget(), &CostValue::int(2));
}

#[test]
fn generate_rejects_unknown_reduction_and_bad_sources() {
    assert_eq!(kclust(&["generate", "l3-clique", &data("l0_figure_graph.json")]).0, EXIT_ERROR);
    assert_eq!(kclust(&["generate", "l0-mcc", &data("l0_figure_graph.json")]).0, EXIT_ERROR);
    assert_eq!(kclust(&["generate", "l0-clique", &data("single_clause.json")]).0, EXIT_ERROR);
    assert_eq!(kclust(&["generate", "lp-mcc", &data("mcc_figure_graph.json"), "--p", "3"]).0, EXIT_ERROR);
    assert_eq!(kclust(&["generate", "l0-clique", &data("missing.json")]).0, EXIT_ERROR);
}

#[test]
fn solve_l0_figure() {
    let path = generate("l0-clique", &data("l0_figure_graph.json"), &[], "l0_solve.json");
    let (code, out, err) = kclust(&["solve", &path, "--seed", "1"]);
    assert_eq!(code, EXIT_YES, "{err}");
    assert!(out.contains("decision: yes"));
    assert!(out.contains("\ncost: 3\n"), "{out}");
    let (code, out, _) = kclust(&["solve", &path, "--mode", "oracle"]);
    assert_eq!(code, EXIT_YES);
    assert!(out.contains("min cost: 3"));
}

#[test]
fn solve_below_minimum_is_no() {
    let path = generate("l0-clique", &data("l0_figure_graph.json"), &[], "l0_below.json");
    let mut file = read_instance(&path);
    file.budget = "2".into();
    let below = scratch("l0_below_d2.json");
    std::fs::write(&below, file.render()).unwrap();
    let (code, out, err) = kclust(&["solve", &below, "--policy", "exhaustive", "--jobs", "4"]);
    assert_eq!(code, EXIT_NO, "{err}");
    assert!(out.contains("decision: no"));
    assert!(out.contains("confidence=1.000000"));
    assert_eq!(kclust(&["solve", &below, "--mode", "oracle"]).0, EXIT_NO);
}

#[test]
fn solve_errors_exit_two() {
    let bad = scratch("malformed.json");
    std::fs::write(&bad, "{\"kind\": \"clustering\",").unwrap();
    let (code, _, err) = kclust(&["solve", &bad]);
    assert_eq!(code, EXIT_ERROR);
    assert!(err.contains("malformed"));
    let path = generate("l0-clique", &data("l0_figure_graph.json"), &[], "l0_cap.json");
    assert_eq!(kclust(&["solve", &path, "--policy", "exhaustive", "--cap-colorings", "10"]).0, EXIT_ERROR);
    assert_eq!(kclust(&["solve", &path, "--policy", "sometimes"]).0, EXIT_ERROR);
    let lp = generate("lp-mcc", &data("mcc_figure_graph.json"), &[], "lp_wrong_kind.json");
    assert_eq!(kclust(&["solve", &lp]).0, EXIT_ERROR);
}

#[test]
fn select_lp_figure() {
    let path = generate("lp-mcc", &data("mcc_figure_graph.json"), &[], "lp_select.json");
    let (code, out, err) = kclust(&["select", &path]);
    assert_eq!(code, EXIT_YES, "{err}");
    assert!(out.contains("\ncost: 2\n"), "{out}");
    assert!(out.contains("centroid: (2/3,2/3,0,2/3)"));
    let (oracle, out, _) = kclust(&["select", &path, "--mode", "oracle"]);
    assert_eq!(oracle, code);
    assert!(out.contains("\ncost: 2\n"));
}

#[test]
fn select_empty_group_exits_two() {
    let path = scratch("empty_group.json");
    let text = r#"{"kind": "selection", "p": "1", "dimension": 2, "vectors": [[0, 0], [1, 1]], "groups": [1, 3], "budget": "2"}"#;
    std::fs::write(&path, text).unwrap();
    let (code, _, err) = kclust(&["select", &path]);
    assert_eq!(code, EXIT_ERROR);
    assert!(err.contains("group 2 is empty"), "{err}");
}

#[test]
fn select_rejects_budget_outside_regime() {
    let path = scratch("bad_budget.json");
    let text =
        r#"{"kind": "selection", "p": "1", "dimension": 1, "vectors": [[0], [3]], "groups": [1, 2], "budget": "1.5"}"#;
    std::fs::write(&path, text).unwrap();
    assert_eq!(kclust(&["select", &path]).0, EXIT_ERROR);
    let text = r#"{"kind": "selection", "p": "1/2", "dimension": 1, "vectors": [[0], [3]], "groups": [1, 2], "budget": "1.5"}"#;
    std::fs::write(&path, text).unwrap();
    assert_eq!(kclust(&["select", &path]).0, EXIT_NO);
    let text = r#"{"kind": "selection", "p": "1/2", "dimension": 1, "vectors": [[0], [3]], "groups": [1, 2], "budget": "basis:1*3"}"#;
    std::fs::write(&path, text).unwrap();
    assert_eq!(kclust(&["select", &path]).0, EXIT_YES);
}

#[test]
fn verify_l0_clique_sweep() {
    let (code, out, err) = kclust(&["verify", "l0-clique", "--sweep", "4", "--k", "3", "--mode", "oracle"]);
    assert_eq!(code, EXIT_YES, "{err}");
    assert!(out.ends_with("checked 11, agree 11, disagree 0\n"), "{out}");
}

#[test]
fn verify_l1_mcc_figure() {
    let (code, out, err) = kclust(&["verify", "l1-mcc", &data("mcc_figure_graph.json"), "--mode", "oracle"]);
    assert_eq!(code, EXIT_YES, "{err}");
    assert!(out.contains("D=15 cost=15 agree"), "{out}");
}

#[test]
fn verify_chain_single_clause() {
    let (code, out, err) = kclust(&["verify", "linf-2clust", &data("single_clause.json")]);
    assert_eq!(code, EXIT_YES, "{err}");
    assert!(out.contains("source=yes target=yes hioct=yes"), "{out}");
    assert!(out.contains("agree"));
}

#[test]
fn verify_samples_in_parallel_match_serial() {
    let args = ["verify", "linf-mcc", "--samples", "12", "--vertices", "5", "--seed", "7", "--mode", "oracle"];
    let (serial, serial_out, _) = kclust(&args);
    let mut parallel_args = args.to_vec();
    parallel_args.extend(["--jobs", "3"]);
    let (parallel, parallel_out, _) = kclust(&parallel_args);
    assert_eq!(serial, EXIT_YES);
    assert_eq!(parallel, serial);
    assert_eq!(parallel_out, serial_out);
}

#[test]
fn verify_needs_a_source() {
    assert_eq!(kclust(&["verify", "l0-clique"]).0, EXIT_ERROR);
    assert_eq!(kclust(&["verify", "l0-clique", &data("single_clause.json")]).0, EXIT_ERROR);
}

#[test]
fn bench_suites() {
    let (code, out, _) = kclust(&["bench", "empty"]);
    assert_eq!(code, EXIT_YES);
    assert_eq!(out, format!("{HEADER}\n"));
    assert_eq!(kclust(&["bench", "nothing"]).0, EXIT_ERROR);

    let solve = suite_rows("solve", 0).unwrap();
    let colors: Vec<u64> = solve.iter().map(|r| r.colors.unwrap()).collect();
    assert_eq!(colors, vec![2, 3, 4, 5]);
    let families: Vec<usize> = solve.iter().map(|r| r.color_partitions.unwrap()).collect();
    assert_eq!(families, vec![2, 5, 15, 52]);
    let colorings: Vec<u64> = solve.iter().map(|r| r.colorings.unwrap()).collect();
    assert_eq!(colorings, vec![8, 14, 15, 15]);
    assert!(solve.iter().all(|r| !r.decision));

    let lp01 = suite_rows("select-lp01", 0).unwrap();
    assert_eq!(lp01.len(), 4);
    for pair in lp01.windows(2) {
        assert!(pair[0].search_nodes <= pair[1].search_nodes);
        assert!(pair[0].patterns_tried <= pair[1].patterns_tried);
    }
    let (code, out, _) = kclust(&["bench", "select-l2"]);
    assert_eq!(code, EXIT_YES);
    assert_eq!(out.lines().count(), 5);
}

#[test]
fn reports_are_deterministic() {
    let path = generate("l0-clique", &data("l0_figure_graph.json"), &[], "l0_det.json");
    let first = kclust(&["solve", &path, "--seed", "5", "--policy", "iters=50"]);
    let second = kclust(&["solve", &path, "--seed", "5", "--policy", "iters=50"]);
    assert_eq!(first, second);
    let again = generate("l0-clique", &data("l0_figure_graph.json"), &[], "l0_det2.json");
    assert_eq!(std::fs::read(&path).unwrap(), std::fs::read(&again).unwrap());
}

fn assert_round_trip(file: &InstanceFile) {
    let text = file.render();
    let parsed = InstanceFile::parse(&text).unwrap();
    assert_eq!(&parsed, file);
    assert_eq!(parsed.render(), text);
    match file.kind {
        kclust_cli::formats::InstanceKind::Clustering => {
            let inst = parsed.to_clustering().unwrap();
            let back = InstanceFile::from_clustering(&inst, file.provenance.clone()).unwrap();
            assert_eq!(&back, file);
        }
        kclust_cli::formats::InstanceKind::Selection => {
            let inst = parsed.to_selection().unwrap();
            let back = InstanceFile::from_selection(&inst, file.provenance.clone()).unwrap();
            assert_eq!(&back, file);
        }
    }
}

#[test]
fn generated_instances_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut checked = 0;
    for _ in 0..40 {
        let g = random_graph(&mut rng, 6, 0.7, 3);
        let source = GraphFile::from_graph(&g);
        for reduction in Reduction::ALL {
            if reduction == Reduction::SatHioctLinf2 {
                continue;
            }
            if let Ok(file) = generate_instance(reduction, &source, 3, "2", false) {
                assert_round_trip(&file);
                checked += 1;
            }
        }
    }
    let formula = CnfFormula::new(3, vec![[1, -2, 3], [-1, 2, 3]]).unwrap();
    for figure in [false, true] {
        let file = generate_instance(Reduction::SatHioctLinf2, &GraphFile::from_formula(&formula), 3, "2", figure);
        assert_round_trip(&file.unwrap());
    }
    let linfoct = GraphFile::parse(&std::fs::read_to_string(data("linfoct_figure.json")).unwrap()).unwrap();
    let file = generate_instance(Reduction::SatHioctLinf2, &linfoct, 3, "2", true).unwrap();
    assert_eq!(file.budget, "6");
    assert_eq!(file.vectors.len(), 4);
    assert_round_trip(&file);
    assert!(checked > 150, "{checked}");
}

#[test]
fn graph_files_round_trip_and_hash() {
    for name in ["l0_figure_graph.json", "mcc_figure_graph.json", "linfoct_figure.json", "single_clause.json"] {
        let file = GraphFile::parse(&std::fs::read_to_string(data(name)).unwrap()).unwrap();
        let again = GraphFile::parse(&file.render()).unwrap();
        assert_eq!(again, file);
        assert_eq!(again.sha256(), file.sha256());
    }
    let plain = GraphFile::parse(r#"{"n": 3, "edges": [[1, 2]]}"#).unwrap();
    let other = GraphFile::parse(r#"{"n": 3, "edges": [[2, 3]]}"#).unwrap();
    assert_ne!(plain.sha256(), other.sha256());
    assert!(GraphFile::parse(r#"{"n": 3, "edges": [[1, 2], [2, 1]]}"#).is_err());
    assert!(GraphFile::parse(r#"{"n": 3, "edges": [[1, 4]]}"#).is_err());
    assert!(GraphFile::parse(r#"{"n": 3, "edges": [[1, 2]], "clauses": [[1, 2, 3]]}"#).is_err());
}

#[test]
fn instance_file_invariants() {
    let rows = r#""vectors": [[0, 1], [1]]"#;
    let text = format!(r#"{{"kind": "clustering", "p": "1", "dimension": 2, {rows}, "k": 1, "budget": "1"}}"#);
    assert!(InstanceFile::parse(&text).is_err());
    let text = r#"{"kind": "clustering", "p": "3/2", "dimension": 1, "vectors": [[0]], "k": 1, "budget": "1"}"#;
    assert!(InstanceFile::parse(text).is_err());
    let text = r#"{"kind": "clustering", "p": "inf", "dimension": 1, "vectors": [[0], [1]], "k": 1, "budget": "1/2"}"#;
    assert_eq!(InstanceFile::parse(text).unwrap().budget().unwrap(), CostValue::halves(1));
    let text = r#"{"kind": "clustering", "p": "inf", "dimension": 1, "vectors": [[0]], "budget": "1"}"#;
    assert!(InstanceFile::parse(text).is_err());
    let text = r#"{"kind": "selection", "p": "0", "dimension": 1, "vectors": [[0]], "groups": [0], "budget": "1"}"#;
    assert!(InstanceFile::parse(text).is_err());
    let text = r#"{"kind": "selection", "p": "0", "dimension": 1, "vectors": [[0]], "groups": [1], "budget": "1", "extra": 1}"#;
    assert!(InstanceFile::parse(text).is_err());
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_kclust");
    let path = generate("lp-mcc", &data("mcc_figure_graph.json"), &[], "lp_bin.json");
    let status = Command::new(bin).args(["select", &path]).output().unwrap();
    assert_eq!(status.status.code(), Some(EXIT_YES));
    let mut file = read_instance(&path);
    file.budget = "z/s2:7/2".into();
    let below = scratch("lp_bin_below.json");
    std::fs::write(&below, file.render()).unwrap();
    let status = Command::new(bin).args(["select", &below]).output().unwrap();
    assert_eq!(status.status.code(), Some(EXIT_NO));
    let status = Command::new(bin).args(["select", "/nonexistent.json"]).output().unwrap();
    assert_eq!(status.status.code(), Some(EXIT_ERROR));
    let status = Command::new(bin).args(["frobnicate"]).output().unwrap();
    assert_eq!(status.status.code(), Some(EXIT_ERROR));
    let status = Command::new(bin).arg("--help").output().unwrap();
    assert_eq!(status.status.code(), Some(EXIT_YES));
}
