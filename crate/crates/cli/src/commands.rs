//! Subcommand implementations. Each returns its result instead of exiting so
//! that tests can drive them directly.

use std::fs;
use std::io::Write;
use std::path::Path;
use std::time::Instant;

use bmcc_core::catalog::Catalog;
use bmcc_core::graph::build_graph_naive;
use bmcc_core::solvers::{solve, verify_solution, FeasibilityReport, SolveOptions};
use bmcc_core::{
    build_graph_indexed, connected_components, rasterize, Algorithm, BallTree, DatasetGraph,
    Marketplace, Price, Solution,
};
use rayon::prelude::*;

use crate::config::{PricingKind, RunConfig};
use crate::error::CliError;
use crate::gen::{generate, GenSpec};
use crate::input::{build_market, grid_for, subsample_ids, Source};
use crate::points::{read_points, read_prices, write_points};
use crate::report::{millis, BenchRecord, GraphRecord, Parameters, SolutionRecord, SolveReport};

fn write_output(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| CliError::data(p.display(), e)),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::data("stdout", e)),
    }
}

fn file_label(path: &Path) -> String {
    path.file_name().map_or_else(
        || path.display().to_string(),
        |n| n.to_string_lossy().into_owned(),
    )
}

#[derive(Clone, Debug, PartialEq)]
pub struct IngestSummary {
    pub storage_bytes: u64,
    pub datasets: usize,
    pub points: usize,
    pub x_range: (f64, f64),
    pub y_range: (f64, f64),
    pub theta: u32,
    pub cells: usize,
}

impl IngestSummary {
    pub fn render(&self) -> String {
        format!(
            "storage: {} bytes\ndatasets: {}\npoints: {}\nx range: [{}, {}]\ny range: [{}, {}]\ntheta: {}\ncells: {}\n",
            self.storage_bytes,
            self.datasets,
            self.points,
            self.x_range.0,
            self.x_range.1,
            self.y_range.0,
            self.y_range.1,
            self.theta,
            self.cells
        )
    }
}

/// Rasterizes a point file into a catalog file.
pub fn cmd_ingest(
    points_path: &Path,
    output: &Path,
    theta: u32,
    bounds: Option<bmcc_core::Bounds>,
    prices: Option<&Path>,
) -> Result<IngestSummary, CliError> {
    let bytes = fs::read(points_path).map_err(|e| CliError::data(points_path.display(), e))?;
    let points =
        read_points(bytes.as_slice()).map_err(|e| CliError::data(points_path.display(), e))?;
    let grid = grid_for(&points, theta, bounds)?;
    let datasets = points
        .datasets()
        .iter()
        .map(|d| rasterize(d, &grid))
        .collect::<Result<Vec<_>, _>>()?;
    let envelope = points.envelope().expect("non-empty");
    let mut catalog = Catalog::new(grid, datasets);
    if let Some(p) = prices {
        let text = fs::read_to_string(p).map_err(|e| CliError::data(p.display(), e))?;
        catalog.prices =
            Some(read_prices(text.as_bytes()).map_err(|e| CliError::data(p.display(), e))?);
    }
    // Validate the catalog the same way every later command will.
    catalog.clone().into_market(catalog.prices.is_some())?;
    let summary = IngestSummary {
        storage_bytes: bytes.len() as u64,
        datasets: catalog.datasets.len(),
        points: points.point_count,
        x_range: (envelope.min_x, envelope.max_x),
        y_range: (envelope.min_y, envelope.max_y),
        theta,
        cells: catalog.datasets.iter().map(|d| d.coverage()).sum(),
    };
    let mut text = catalog.to_json();
    text.push('\n');
    write_output(Some(output), &text)?;
    Ok(summary)
}

/// Writes a synthetic point file; returns the number of rows.
pub fn cmd_gen(spec: &GenSpec, output: Option<&Path>) -> Result<usize, CliError> {
    let rows = generate(spec)?;
    let mut buf = Vec::new();
    write_points(
        &mut buf,
        rows.iter().map(|(id, x, y)| (id.as_str(), *x, *y)),
        spec.decimals,
    )?;
    write_output(output, &String::from_utf8(buf).expect("utf-8"))?;
    Ok(rows.len())
}

pub fn build_graph(
    market: &Marketplace,
    delta: f64,
    naive: bool,
) -> Result<DatasetGraph, CliError> {
    Ok(if naive {
        build_graph_naive(market, delta)?
    } else {
        let tree = BallTree::build(market)?;
        build_graph_indexed(market, delta, &tree)?
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct GraphSummary {
    pub graph: GraphRecord,
    pub largest_component: usize,
    pub theta: u32,
    pub delta: f64,
}

impl GraphSummary {
    pub fn render(&self) -> String {
        let ms = self
            .graph
            .build_ms
            .map_or_else(|| "-".to_string(), |m| format!("{m}"));
        format!(
            "theta: {}\ndelta: {}\nnodes: {}\nedges: {}\naverage degree: {:.4}\ncomponents: {}\nlargest component: {}\nbuild ms: {}\n",
            self.theta,
            self.delta,
            self.graph.nodes,
            self.graph.edges,
            self.graph.average_degree,
            self.graph.components,
            self.largest_component,
            ms
        )
    }
}

/// Builds the dataset graph and optionally exports its adjacency.
pub fn cmd_build_graph(
    input: &Path,
    config: &RunConfig,
    adjacency: Option<&Path>,
    naive: bool,
) -> Result<GraphSummary, CliError> {
    config.validate()?;
    let source = Source::load(input)?;
    let theta = config.theta.unwrap_or_else(|| source.natural_theta());
    let ids = subsample_ids(&source.ids(), config.scale_axis()[0], config.seed);
    let market = build_market(&source, &ids, theta, config)?;
    let start = Instant::now();
    let graph = build_graph(&market, config.delta, naive)?;
    let elapsed = start.elapsed();
    if let Some(path) = adjacency {
        write_output(Some(path), &graph.export_adjacency(&market))?;
    }
    let largest = connected_components(&graph)
        .iter()
        .map(|c| c.len())
        .max()
        .unwrap_or(0);
    Ok(GraphSummary {
        graph: GraphRecord::new(&graph.stats(), millis(elapsed, false)),
        largest_component: largest,
        theta,
        delta: config.delta,
    })
}

struct Run {
    solution: Solution,
    report: FeasibilityReport,
    runtime_ms: Option<f64>,
}

fn run_solvers(
    market: &Marketplace,
    graph: &DatasetGraph,
    budget: Price,
    config: &RunConfig,
    mask_timing: bool,
) -> Result<Vec<Run>, CliError> {
    let options = SolveOptions {
        oracle_cap: config.oracle_cap,
    };
    config
        .solvers
        .iter()
        .map(|&algorithm| {
            let start = Instant::now();
            let solution = solve(algorithm, market, graph, budget, &options)?;
            let runtime_ms = millis(start.elapsed(), mask_timing);
            let report = verify_solution(market, graph, &solution, budget)?;
            Ok(Run {
                solution,
                report,
                runtime_ms,
            })
        })
        .collect()
}

fn pricing_label(kind: PricingKind) -> String {
    match kind {
        PricingKind::Usage => "usage".into(),
        PricingKind::Table => "table".into(),
    }
}

/// Runs every configured solver at one parameter point and verifies each output.
pub fn cmd_solve(
    input: &Path,
    config: &RunConfig,
    mask_timing: bool,
) -> Result<SolveReport, CliError> {
    config.validate()?;
    let source = Source::load(input)?;
    let theta = config.theta.unwrap_or_else(|| source.natural_theta());
    let scale = config.scale_axis()[0];
    let ids = subsample_ids(&source.ids(), scale, config.seed);
    let market = build_market(&source, &ids, theta, config)?;
    let spec = config.budget_spec();
    let budget = spec.resolve(market.total_price());

    let start = Instant::now();
    let graph = build_graph(&market, config.delta, false)?;
    let build_ms = millis(start.elapsed(), mask_timing);

    let runs = run_solvers(&market, &graph, budget, config, mask_timing)?;
    Ok(SolveReport {
        input: file_label(input),
        datasets: market.len(),
        parameters: Parameters {
            theta,
            delta: config.delta,
            budget,
            budget_ratio: spec.ratio(),
            pricing: pricing_label(config.pricing),
            scale,
            seed: config.seed,
        },
        graph: GraphRecord::new(&graph.stats(), build_ms),
        solutions: runs
            .iter()
            .map(|r| SolutionRecord::new(&market, &r.solution, &r.report, r.runtime_ms))
            .collect(),
    })
}

impl SolveReport {
    pub fn all_feasible(&self) -> bool {
        self.solutions.iter().all(|s| s.feasible)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// One `(scale, theta, delta)` group of a sweep: shared market and graph.
struct Group {
    scale: f64,
    theta: u32,
    delta: f64,
}

fn bench_group(
    source: &Source,
    group: &Group,
    config: &RunConfig,
    mask_timing: bool,
) -> Result<Vec<BenchRecord>, CliError> {
    let ids = subsample_ids(&source.ids(), group.scale, config.seed);
    let market = build_market(source, &ids, group.theta, config)?;
    let start = Instant::now();
    let graph = build_graph(&market, group.delta, false)?;
    let graph_ms = millis(start.elapsed(), mask_timing);
    let stats = graph.stats();
    let mut rows = Vec::new();
    for spec in config.budget_axis() {
        let budget = spec.resolve(market.total_price());
        for run in run_solvers(&market, &graph, budget, config, mask_timing)? {
            rows.push(BenchRecord {
                solver: run.solution.algorithm,
                theta: group.theta,
                delta: group.delta,
                budget_ratio: spec.ratio(),
                budget,
                scale: group.scale,
                nodes: stats.nodes,
                edges: stats.edges,
                average_degree: stats.average_degree,
                components: stats.components,
                coverage: run.solution.coverage,
                total_price: run.solution.total_price,
                selected: run.solution.selected.len(),
                status: run.solution.status,
                feasible: run.report.passed(),
                runtime_ms: run.runtime_ms,
                graph_ms,
            });
        }
    }
    Ok(rows)
}

/// Sweeps the cartesian product of the configured axes.
pub fn cmd_bench(
    input: &Path,
    config: &RunConfig,
    mask_timing: bool,
) -> Result<Vec<BenchRecord>, CliError> {
    config.validate()?;
    let source = Source::load(input)?;
    let thetas = config
        .thetas
        .clone()
        .unwrap_or_else(|| vec![config.theta.unwrap_or_else(|| source.natural_theta())]);
    let mut groups = Vec::new();
    for &scale in &config.scale_axis() {
        for &theta in &thetas {
            for &delta in &config.delta_axis() {
                groups.push(Group {
                    scale,
                    theta,
                    delta,
                });
            }
        }
    }
    let results: Vec<Result<Vec<BenchRecord>, CliError>> = if config.parallel {
        groups
            .par_iter()
            .map(|g| bench_group(&source, g, config, mask_timing))
            .collect()
    } else {
        groups
            .iter()
            .map(|g| bench_group(&source, g, config, mask_timing))
            .collect()
    };
    let mut rows = Vec::new();
    for r in results {
        rows.extend(r?);
    }
    Ok(rows)
}

pub fn bench_csv(rows: &[BenchRecord]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| CliError::Data(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Data(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("utf-8"))
}

pub fn bench_json(rows: &[BenchRecord]) -> String {
    let mut s = serde_json::to_string_pretty(rows).expect("records serialize");
    s.push('\n');
    s
}

/// Outcome of re-checking one solution of a report.
#[derive(Clone, Debug, PartialEq)]
pub struct VerifyLine {
    pub algorithm: Algorithm,
    pub report: FeasibilityReport,
}

/// Re-verifies every solution of a solve report against the input data.
pub fn cmd_verify(
    input: &Path,
    report_path: &Path,
    config: &RunConfig,
) -> Result<Vec<VerifyLine>, CliError> {
    let text =
        fs::read_to_string(report_path).map_err(|e| CliError::data(report_path.display(), e))?;
    let report: SolveReport =
        serde_json::from_str(&text).map_err(|e| CliError::data(report_path.display(), e))?;
    let params = &report.parameters;
    let mut config = config.clone();
    config.pricing = params
        .pricing
        .parse()
        .map_err(|e: String| CliError::Data(e))?;
    config.validate()?;
    let source = Source::load(input)?;
    let ids = subsample_ids(&source.ids(), params.scale, params.seed);
    let market = build_market(&source, &ids, params.theta, &config)?;
    let graph = build_graph(&market, params.delta, false)?;
    report
        .solutions
        .iter()
        .map(|record| {
            let selected = record
                .selected
                .iter()
                .map(|id| market.index_of(id))
                .collect::<Result<Vec<_>, _>>()?;
            let solution = Solution {
                algorithm: record.algorithm,
                status: record.status,
                selected,
                total_price: record.total_price,
                coverage: record.coverage,
                feasible: bmcc_core::solvers::Feasibility {
                    within_budget: record.checks.within_budget,
                    connected: record.checks.connected,
                },
                rounds: record.rounds,
            };
            Ok(VerifyLine {
                algorithm: record.algorithm,
                report: verify_solution(&market, &graph, &solution, params.budget)?,
            })
        })
        .collect()
}
