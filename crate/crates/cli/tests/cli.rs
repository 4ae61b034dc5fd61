use std::fs;
use std::path::{Path, PathBuf};

use bmcc_cli::commands::{cmd_bench, cmd_build_graph, cmd_solve};
use bmcc_cli::config::RunConfig;
use bmcc_cli::error::{EXIT_DATA, EXIT_INFEASIBLE, EXIT_OK, EXIT_USAGE};
use bmcc_cli::report::SolveReport;
use bmcc_core::catalog::Catalog;
use bmcc_core::solvers::SolveStatus;
use bmcc_core::Algorithm;
use tempfile::TempDir;

fn fixture() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/synthetic_1000.csv")
}

fn bmcc(args: &[&str]) -> i32 {
    bmcc_cli::run(std::iter::once("bmcc").chain(args.iter().copied()))
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Five datasets on an 8x8 grid, one point per cell centre.
fn five_dataset_points() -> String {
    let mut text = String::from("dataset_id,x,y\n");
    let mut add = |id: &str, cells: &[(u32, u32)]| {
        for (x, y) in cells {
            text.push_str(&format!("{id},{}.5,{}.5\n", x, y));
        }
    };
    add("D1", &[(0, 0), (1, 0), (2, 0), (3, 0), (4, 0)]);
    add("D2", &[(0, 1), (1, 1), (2, 1), (3, 1), (4, 1), (5, 1)]);
    add("D3", &[(6, 6), (7, 6), (6, 7), (7, 7)]);
    add("D4", &[(0, 3), (1, 3), (2, 3), (3, 3)]);
    add("D5", &[(7, 4), (7, 3)]);
    text
}

fn five_config(solvers: &str) -> RunConfig {
    let mut c = RunConfig::default();
    for (k, v) in [
        ("theta", "3"),
        ("delta", "2"),
        ("budget", "15"),
        ("bounds", "0,0,8,8"),
        ("solvers", solvers),
    ] {
        c.set(k, v).unwrap();
    }
    c
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    assert_eq!(bmcc(&[]), EXIT_USAGE);
    assert_eq!(bmcc(&["solve"]), EXIT_USAGE);
    assert_eq!(bmcc(&["--help"]), EXIT_OK);
    let pts = write(&dir, "p.csv", &five_dataset_points());
    assert_eq!(bmcc(&["solve", s(&pts), "--theta", "40"]), EXIT_USAGE);
    assert_eq!(bmcc(&["solve", s(&pts), "--solvers", "greedy"]), EXIT_USAGE);
    let missing = dir.path().join("missing.csv");
    assert_eq!(bmcc(&["solve", s(&missing)]), EXIT_DATA);
    let bad = write(&dir, "bad.csv", "dataset_id,x,y\nA,1,nope\n");
    assert_eq!(bmcc(&["solve", s(&bad)]), EXIT_DATA);
}

#[test]
fn ingest_writes_catalog() {
    let dir = TempDir::new().unwrap();
    let pts = write(&dir, "p.csv", "dataset_id,x,y\nA,0,0\nB,10,10\n");
    let out = dir.path().join("c.json");
    assert_eq!(
        bmcc(&["ingest", s(&pts), "-o", s(&out), "--theta", "4"]),
        EXIT_OK
    );
    let catalog = Catalog::from_json(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(catalog.datasets.len(), 2);
    assert_eq!(catalog.grid.theta, 4);
    // The catalog is a valid solve input at its own resolution only.
    assert_eq!(bmcc(&["build-graph", s(&out)]), EXIT_OK);
    assert_eq!(bmcc(&["build-graph", s(&out), "--theta", "5"]), EXIT_USAGE);
}

#[test]
fn ingest_reports_out_of_bounds_line() {
    let dir = TempDir::new().unwrap();
    let pts = write(&dir, "p.csv", "dataset_id,x,y\nA,1,1\nA,50,1\n");
    let out = dir.path().join("c.json");
    let r = bmcc_cli::commands::cmd_ingest(
        &pts,
        &out,
        4,
        Some(bmcc_cli::config::parse_bounds("0,0,10,10").unwrap()),
        None,
    );
    let msg = r.unwrap_err().to_string();
    assert!(msg.contains("line 3"), "{msg}");
    assert!(!out.exists());
}

#[test]
fn gen_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    for p in [&a, &b] {
        assert_eq!(
            bmcc(&["gen", "-o", s(p), "--datasets", "30", "--seed", "5"]),
            EXIT_OK
        );
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert_eq!(bmcc(&["gen", "--datasets", "0"]), EXIT_USAGE);
}

#[test]
fn zero_spread_gives_one_cell_per_dataset() {
    let dir = TempDir::new().unwrap();
    let pts = dir.path().join("p.csv");
    let args = ["gen", "-o", s(&pts), "--datasets", "25", "--spread", "0"];
    assert_eq!(bmcc(&args), EXIT_OK);
    let out = dir.path().join("c.json");
    assert_eq!(
        bmcc(&["ingest", s(&pts), "-o", s(&out), "--theta", "9"]),
        EXIT_OK
    );
    let catalog = Catalog::from_json(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(catalog.datasets.len(), 25);
    assert!(catalog.datasets.iter().all(|d| d.coverage() == 1));
}

#[test]
fn exact_dominates_dsa_on_five_datasets() {
    let dir = TempDir::new().unwrap();
    let pts = write(&dir, "p.csv", &five_dataset_points());
    let report = cmd_solve(&pts, &five_config("dsa,exact"), true).unwrap();
    assert!(report.all_feasible());
    let (dsa, exact) = (&report.solutions[0], &report.solutions[1]);
    assert_eq!(exact.selected, ["D1", "D2", "D4"]);
    assert_eq!(exact.coverage, 15);
    assert!(dsa.coverage <= exact.coverage);
    assert_eq!(report.parameters.budget.to_string(), "15.00");
}

#[test]
fn zero_budget_selects_nothing() {
    let dir = TempDir::new().unwrap();
    let pts = write(&dir, "p.csv", &five_dataset_points());
    let mut config = five_config("dsa,dpsa,dpsa-ba,cmc-mc,cmc-mg,exact");
    config.set("budget_ratio", "0").unwrap();
    let report = cmd_solve(&pts, &config, true).unwrap();
    assert_eq!(report.solutions.len(), 6);
    for sol in &report.solutions {
        assert_eq!(
            sol.status,
            SolveStatus::BudgetBelowMinimumPrice,
            "{}",
            sol.algorithm
        );
        assert!(sol.selected.is_empty());
        assert!(sol.feasible);
    }
}

#[test]
fn center_modes_agree_on_a_path() {
    // Five single-cell datasets two cells apart: at delta 2 the graph is a path.
    let dir = TempDir::new().unwrap();
    let mut text = String::from("dataset_id,x,y\n");
    for (i, x) in [0, 2, 4, 6, 8].iter().enumerate() {
        text.push_str(&format!("P{i},{x}.5,0.5\n"));
    }
    let pts = write(&dir, "p.csv", &text);
    let mut config = RunConfig::default();
    for (k, v) in [
        ("theta", "4"),
        ("delta", "2"),
        ("budget", "3"),
        ("bounds", "0,0,16,16"),
        ("solvers", "dpsa,dpsa-ba"),
    ] {
        config.set(k, v).unwrap();
    }
    let report = cmd_solve(&pts, &config, true).unwrap();
    assert_eq!(report.graph.edges, 4);
    assert_eq!(report.graph.components, 1);
    let (a, b) = (&report.solutions[0], &report.solutions[1]);
    assert_eq!((&a.selected, a.coverage), (&b.selected, b.coverage));
    assert_eq!(a.coverage, 3);
}

#[test]
fn bench_formats_and_full_scale() {
    let dir = TempDir::new().unwrap();
    let pts = write(&dir, "p.csv", &five_dataset_points());
    let csv_out = dir.path().join("b.csv");
    let json_out = dir.path().join("b.json");
    let base = [
        "--theta",
        "3",
        "--bounds",
        "0,0,8,8",
        "--deltas",
        "0,2",
        "--budget-ratios",
        "0.2,0.6",
        "--solvers",
        "dsa,exact",
        "--mask-timing",
    ];
    let mut args = vec!["bench", s(&pts), "-o", s(&csv_out)];
    args.extend(base);
    assert_eq!(bmcc(&args), EXIT_OK);
    let mut args = vec!["bench", s(&pts), "-o", s(&json_out), "--format", "json"];
    args.extend(base);
    assert_eq!(bmcc(&args), EXIT_OK);

    let csv_text = fs::read_to_string(&csv_out).unwrap();
    assert_eq!(csv_text.lines().count(), 1 + 2 * 2 * 2);
    assert!(csv_text.starts_with("solver,theta,delta,budget_ratio,budget,scale"));
    let rows: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&json_out).unwrap()).unwrap();
    assert_eq!(rows.as_array().unwrap().len(), 8);
    assert!(rows[0]["runtime_ms"].is_null());

    let mut config = five_config("dsa");
    config.set("scales", "0.4,1").unwrap();
    let records = cmd_bench(&pts, &config, true).unwrap();
    assert_eq!(records.iter().map(|r| r.nodes).collect::<Vec<_>>(), [2, 5]);
}

#[test]
fn config_file_with_flag_override() {
    let dir = TempDir::new().unwrap();
    let pts = write(&dir, "p.csv", &five_dataset_points());
    let cfg = write(
        &dir,
        "run.conf",
        "# five datasets\ntheta = 3\nbounds = 0,0,8,8\ndelta = 2\nbudget = 15\nsolvers = exact\n",
    );
    let out = dir.path().join("r.json");
    let args = [
        "solve",
        s(&pts),
        "--config",
        s(&cfg),
        "--budget",
        "6",
        "-o",
        s(&out),
        "--mask-timing",
    ];
    assert_eq!(bmcc(&args), EXIT_OK);
    let report: SolveReport = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report.parameters.budget.to_string(), "6.00");
    assert_eq!(report.parameters.theta, 3);
    assert_eq!(report.solutions[0].algorithm, Algorithm::Exact);
    assert_eq!(report.solutions[0].selected, ["D2"]);

    let broken = write(&dir, "broken.conf", "theta = 3\ncolour = red\n");
    assert_eq!(
        bmcc(&["solve", s(&pts), "--config", s(&broken)]),
        EXIT_USAGE
    );
}

#[test]
fn verify_round_trip_and_tampering() {
    let dir = TempDir::new().unwrap();
    let pts = write(&dir, "p.csv", &five_dataset_points());
    let out = dir.path().join("r.json");
    let solve = [
        "solve",
        s(&pts),
        "--theta",
        "3",
        "--bounds",
        "0,0,8,8",
        "--delta",
        "2",
        "--budget",
        "15",
        "-o",
        s(&out),
    ];
    assert_eq!(bmcc(&solve), EXIT_OK);
    let verify = [
        "verify",
        s(&pts),
        "--report",
        s(&out),
        "--bounds",
        "0,0,8,8",
    ];
    assert_eq!(bmcc(&verify), EXIT_OK);

    let mut report: SolveReport = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    report.solutions[0].coverage += 1;
    fs::write(&out, report.to_json()).unwrap();
    assert_eq!(bmcc(&verify), EXIT_INFEASIBLE);
}

#[test]
fn fixture_has_a_main_component() {
    let mut config = RunConfig::default();
    config.set("theta", "11").unwrap();
    config.set("delta", "10").unwrap();
    let summary = cmd_build_graph(&fixture(), &config, None, false).unwrap();
    assert_eq!(summary.graph.nodes, 1000);
    assert!(
        summary.largest_component * 4 >= summary.graph.nodes,
        "{}",
        summary.largest_component
    );
}
