//! Solvers for budgeted maximum coverage under a connectivity constraint.
//!
//! Every solver receives the marketplace, the dataset graph built over the
//! whole catalog and a budget, and returns a [`Solution`]. Datasets priced
//! above the budget are filtered first; the graph restricted to the
//! remaining nodes is exactly the graph one would build over them alone,
//! since edges depend only on pairwise distances.
//!
//! Ties are always broken towards the smallest node index, which is also
//! the smallest dataset id because the marketplace keeps datasets sorted.

pub mod bfs;
pub mod cmc;
pub mod dpsa;
pub mod dsa;
pub mod exact;
pub mod reduction;
pub mod state;
pub mod verify;

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::DatasetGraph;
use crate::grid::coverage_of_union;
use crate::marketplace::Marketplace;
use crate::price::Price;

pub use bfs::{find_center_exact, find_center_two_bfs, BfsTree, ExactCenter, TwoBfsCenter};
pub use cmc::{solve_cmc, CmcVariant};
pub use dpsa::{budgeted_greedy, solve_dpsa, CenterMode, GreedyFlag};
pub use dsa::{dsa_rounds, solve_dsa};
pub use exact::{solve_exact, DEFAULT_ORACLE_CAP};
pub use reduction::{make_reduction_instance, ReductionInstance};
pub use verify::{verify_solution, FeasibilityReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Algorithm {
    #[serde(rename = "dsa")]
    Dsa,
    #[serde(rename = "dpsa")]
    Dpsa,
    #[serde(rename = "dpsa-ba")]
    DpsaBa,
    #[serde(rename = "cmc-mc")]
    CmcMc,
    #[serde(rename = "cmc-mg")]
    CmcMg,
    #[serde(rename = "exact")]
    Exact,
}

impl Algorithm {
    pub const ALL: [Algorithm; 6] = [
        Algorithm::Dsa,
        Algorithm::Dpsa,
        Algorithm::DpsaBa,
        Algorithm::CmcMc,
        Algorithm::CmcMg,
        Algorithm::Exact,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Algorithm::Dsa => "dsa",
            Algorithm::Dpsa => "dpsa",
            Algorithm::DpsaBa => "dpsa-ba",
            Algorithm::CmcMc => "cmc-mc",
            Algorithm::CmcMg => "cmc-mg",
            Algorithm::Exact => "exact",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.label() == s.trim())
            .ok_or_else(|| {
                format!(
                    "unknown solver {s:?}; expected one of dsa, dpsa, dpsa-ba, cmc-mc, cmc-mg, exact"
                )
            })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    Solved,
    /// No dataset is priced within the budget; the selection is empty.
    BudgetBelowMinimumPrice,
    /// Path search produced nothing and the best single affordable dataset
    /// was returned instead.
    SingletonFallback,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Feasibility {
    pub within_budget: bool,
    pub connected: bool,
}

/// Coverages of the two intermediate candidates of the dual-search solvers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundCoverages {
    pub ratio: usize,
    pub coverage: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Solution {
    pub algorithm: Algorithm,
    pub status: SolveStatus,
    /// Selected node indices, ascending.
    pub selected: Vec<usize>,
    pub total_price: Price,
    pub coverage: usize,
    pub feasible: Feasibility,
    pub rounds: Option<RoundCoverages>,
}

impl Solution {
    pub(crate) fn from_selection(
        algorithm: Algorithm,
        status: SolveStatus,
        market: &Marketplace,
        graph: &DatasetGraph,
        budget: Price,
        mut selected: Vec<usize>,
    ) -> Self {
        selected.sort_unstable();
        selected.dedup();
        let total_price = selected.iter().map(|&i| market.price_of(i)).sum();
        let coverage = coverage_of_union(selected.iter().map(|&i| market.dataset(i)));
        Solution {
            algorithm,
            status,
            feasible: Feasibility {
                within_budget: total_price <= budget,
                connected: graph.is_connected_subset(&selected),
            },
            selected,
            total_price,
            coverage,
            rounds: None,
        }
    }

    pub(crate) fn below_minimum(algorithm: Algorithm) -> Self {
        Solution {
            algorithm,
            status: SolveStatus::BudgetBelowMinimumPrice,
            selected: Vec::new(),
            total_price: Price::ZERO,
            coverage: 0,
            feasible: Feasibility {
                within_budget: true,
                connected: true,
            },
            rounds: None,
        }
    }

    pub fn ids<'m>(&self, market: &'m Marketplace) -> Vec<&'m str> {
        self.selected.iter().map(|&i| market.id(i)).collect()
    }
}

/// A candidate node set with its price and coverage, ordered so that the
/// greatest candidate is the preferred one: higher coverage, then lower
/// price, then the lexicographically smaller sorted node list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Candidate {
    pub nodes: Vec<usize>,
    pub price: Price,
    pub coverage: usize,
}

impl Candidate {
    pub fn new(market: &Marketplace, mut nodes: Vec<usize>) -> Self {
        nodes.sort_unstable();
        nodes.dedup();
        let price = nodes.iter().map(|&i| market.price_of(i)).sum();
        let coverage = coverage_of_union(nodes.iter().map(|&i| market.dataset(i)));
        Candidate {
            nodes,
            price,
            coverage,
        }
    }
}

impl Ord for Candidate {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coverage
            .cmp(&other.coverage)
            .then_with(|| other.price.cmp(&self.price))
            .then_with(|| other.nodes.cmp(&self.nodes))
    }
}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolveOptions {
    pub oracle_cap: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            oracle_cap: DEFAULT_ORACLE_CAP,
        }
    }
}

/// Runs one solver. The graph must have been built over `market`.
pub fn solve(
    algorithm: Algorithm,
    market: &Marketplace,
    graph: &DatasetGraph,
    budget: Price,
    options: &SolveOptions,
) -> Result<Solution> {
    if graph.node_count() != market.len() {
        return Err(Error::Mismatch(format!(
            "graph has {} nodes, catalog has {} datasets",
            graph.node_count(),
            market.len()
        )));
    }
    Ok(match algorithm {
        Algorithm::Dsa => solve_dsa(market, graph, budget),
        Algorithm::Dpsa => solve_dpsa(market, graph, budget, CenterMode::Exact),
        Algorithm::DpsaBa => solve_dpsa(market, graph, budget, CenterMode::TwoBfs),
        Algorithm::CmcMc => solve_cmc(market, graph, budget, CmcVariant::MaxCoverage),
        Algorithm::CmcMg => solve_cmc(market, graph, budget, CmcVariant::MaxGain),
        Algorithm::Exact => solve_exact(market, graph, budget, options.oracle_cap)?,
    })
}
