//! Independent re-check of a solution against the catalog and graph.

use serde::{Deserialize, Serialize};

use super::Solution;
use crate::error::{Error, Result};
use crate::graph::DatasetGraph;
use crate::grid::coverage_of_union;
use crate::marketplace::Marketplace;
use crate::price::Price;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeasibilityReport {
    pub within_budget: bool,
    pub connected: bool,
    /// Reported coverage equals the recomputed one.
    pub coverage_matches: bool,
    /// Reported total price equals the recomputed one.
    pub price_matches: bool,
    /// No node is selected twice.
    pub distinct: bool,
    pub total_price: Price,
    pub coverage: usize,
}

impl FeasibilityReport {
    pub fn passed(&self) -> bool {
        self.checks().iter().all(|(_, ok)| *ok)
    }

    /// Named outcome of each check, in a fixed order.
    pub fn checks(&self) -> [(&'static str, bool); 5] {
        [
            ("within_budget", self.within_budget),
            ("connected", self.connected),
            ("coverage_matches", self.coverage_matches),
            ("price_matches", self.price_matches),
            ("distinct", self.distinct),
        ]
    }
}

/// Recomputes price, connectivity and coverage from scratch.
pub fn verify_solution(
    market: &Marketplace,
    graph: &DatasetGraph,
    solution: &Solution,
    budget: Price,
) -> Result<FeasibilityReport> {
    if graph.node_count() != market.len() {
        return Err(Error::Mismatch(format!(
            "graph has {} nodes, catalog has {} datasets",
            graph.node_count(),
            market.len()
        )));
    }
    if let Some(&bad) = solution.selected.iter().find(|&&i| i >= market.len()) {
        return Err(Error::UnknownDataset(format!("#{bad}")));
    }
    let mut nodes = solution.selected.clone();
    nodes.sort_unstable();
    nodes.dedup();
    let total_price: Price = nodes.iter().map(|&i| market.price_of(i)).sum();
    let coverage = coverage_of_union(nodes.iter().map(|&i| market.dataset(i)));
    Ok(FeasibilityReport {
        within_budget: total_price <= budget,
        connected: graph.is_connected_subset(&nodes),
        coverage_matches: coverage == solution.coverage,
        price_matches: total_price == solution.total_price,
        distinct: nodes.len() == solution.selected.len(),
        total_price,
        coverage,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{CellBasedDataset, GridConfig};
    use crate::marketplace::PricingFunction;
    use crate::solvers::{Algorithm, Feasibility, SolveStatus};

    fn setup() -> (Marketplace, DatasetGraph) {
        let m = Marketplace::new(
            GridConfig::new(3, 0.0, 0.0, 1.0, 1.0).unwrap(),
            vec![
                CellBasedDataset::new("a", 3, vec![0]).unwrap(),
                CellBasedDataset::new("b", 3, vec![63]).unwrap(),
            ],
            PricingFunction::UsageBased,
        )
        .unwrap();
        let g = DatasetGraph::from_edges(2, 1.0, []).unwrap();
        (m, g)
    }

    fn solution(selected: Vec<usize>, price: i64, coverage: usize) -> Solution {
        Solution {
            algorithm: Algorithm::Dsa,
            status: SolveStatus::Solved,
            selected,
            total_price: Price::from_units(price),
            coverage,
            feasible: Feasibility {
                within_budget: true,
                connected: true,
            },
            rounds: None,
        }
    }

    #[test]
    fn empty_solution_is_vacuously_feasible() {
        let (m, g) = setup();
        let r = verify_solution(&m, &g, &solution(vec![], 0, 0), Price::from_units(1)).unwrap();
        assert!(r.passed());
        assert_eq!(r.coverage, 0);
    }

    #[test]
    fn disconnected_pair_fails() {
        let (m, g) = setup();
        let r = verify_solution(&m, &g, &solution(vec![0, 1], 2, 2), Price::from_units(2)).unwrap();
        assert!(!r.connected);
        assert!(r.within_budget && r.coverage_matches && r.price_matches);
        assert!(!r.passed());
    }

    #[test]
    fn misreported_values_fail() {
        let (m, g) = setup();
        let r = verify_solution(&m, &g, &solution(vec![0], 2, 3), Price::from_units(1)).unwrap();
        assert!(!r.coverage_matches && !r.price_matches);
        let r = verify_solution(&m, &g, &solution(vec![0, 0], 1, 1), Price::from_units(1)).unwrap();
        assert!(!r.distinct);
    }

    #[test]
    fn unknown_node_is_an_error() {
        let (m, g) = setup();
        assert!(verify_solution(&m, &g, &solution(vec![5], 1, 1), Price::from_units(1)).is_err());
    }
}
