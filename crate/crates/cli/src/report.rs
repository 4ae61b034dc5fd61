//! Report records written by `solve` and `bench`.

use bmcc_core::solvers::{FeasibilityReport, RoundCoverages};
use bmcc_core::{Algorithm, GraphStats, Marketplace, Price, Solution, SolveStatus};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphRecord {
    pub nodes: usize,
    pub edges: usize,
    pub average_degree: f64,
    pub components: usize,
    /// Wall-clock graph construction time; `None` when timing is masked.
    pub build_ms: Option<f64>,
}

impl GraphRecord {
    pub fn new(stats: &GraphStats, build_ms: Option<f64>) -> Self {
        GraphRecord {
            nodes: stats.nodes,
            edges: stats.edges,
            average_degree: stats.average_degree,
            components: stats.components,
            build_ms,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Checks {
    pub within_budget: bool,
    pub connected: bool,
    pub coverage_matches: bool,
    pub price_matches: bool,
    pub distinct: bool,
}

impl From<&FeasibilityReport> for Checks {
    fn from(r: &FeasibilityReport) -> Self {
        Checks {
            within_budget: r.within_budget,
            connected: r.connected,
            coverage_matches: r.coverage_matches,
            price_matches: r.price_matches,
            distinct: r.distinct,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolutionRecord {
    pub algorithm: Algorithm,
    pub status: SolveStatus,
    pub selected: Vec<String>,
    pub total_price: Price,
    pub coverage: usize,
    pub checks: Checks,
    pub feasible: bool,
    /// Coverages of the two intermediate candidates (dsa, dpsa, dpsa-ba).
    pub rounds: Option<RoundCoverages>,
    pub runtime_ms: Option<f64>,
}

impl SolutionRecord {
    pub fn new(
        market: &Marketplace,
        solution: &Solution,
        report: &FeasibilityReport,
        runtime_ms: Option<f64>,
    ) -> Self {
        SolutionRecord {
            algorithm: solution.algorithm,
            status: solution.status,
            selected: solution.ids(market).into_iter().map(String::from).collect(),
            total_price: solution.total_price,
            coverage: solution.coverage,
            checks: report.into(),
            feasible: report.passed(),
            rounds: solution.rounds,
            runtime_ms,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Parameters {
    pub theta: u32,
    pub delta: f64,
    pub budget: Price,
    pub budget_ratio: Option<f64>,
    pub pricing: String,
    pub scale: f64,
    /// Seed of the subsample drawn when `scale < 1`.
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub input: String,
    pub datasets: usize,
    pub parameters: Parameters,
    pub graph: GraphRecord,
    pub solutions: Vec<SolutionRecord>,
}

/// One row per (solver, parameter point).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub solver: Algorithm,
    pub theta: u32,
    pub delta: f64,
    pub budget_ratio: Option<f64>,
    pub budget: Price,
    pub scale: f64,
    pub nodes: usize,
    pub edges: usize,
    pub average_degree: f64,
    pub components: usize,
    pub coverage: usize,
    pub total_price: Price,
    pub selected: usize,
    pub status: SolveStatus,
    pub feasible: bool,
    pub runtime_ms: Option<f64>,
    pub graph_ms: Option<f64>,
}

/// Milliseconds rounded to microseconds, or nothing when timing is masked.
pub fn millis(elapsed: std::time::Duration, masked: bool) -> Option<f64> {
    (!masked).then(|| (elapsed.as_secs_f64() * 1e6).round() / 1e3)
}
