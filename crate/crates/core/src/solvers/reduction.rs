//! Maximum coverage instances embedded as marketplaces.
//!
//! Element `e` becomes grid cell `e`, each set becomes a unit-priced
//! dataset, and δ spans the whole grid so the dataset graph is complete.
//! With budget `k` the connectivity constraint is then void and the best
//! marketplace selection is the best choice of `k` sets.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::grid::{CellBasedDataset, GridConfig, MAX_THETA};
use crate::marketplace::{Marketplace, PricingFunction};
use crate::price::Price;

#[derive(Clone, Debug)]
pub struct ReductionInstance {
    pub market: Marketplace,
    /// Distance threshold under which every pair of datasets is adjacent.
    pub delta: f64,
}

/// Builds the marketplace for sets over elements `0..universe_size`. Set `i`
/// becomes dataset `s{i}` (zero-padded), so node order follows set order.
pub fn make_reduction_instance(universe_size: u64, sets: &[Vec<u64>]) -> Result<ReductionInstance> {
    let theta = (1..=MAX_THETA)
        .find(|&t| {
            1u64.checked_shl(2 * t)
                .is_none_or(|cells| cells >= universe_size)
        })
        .ok_or(Error::UniverseTooLarge(universe_size))?;
    let width = sets.len().to_string().len();
    let mut datasets = Vec::with_capacity(sets.len());
    let mut prices = BTreeMap::new();
    for (i, set) in sets.iter().enumerate() {
        let id = format!("s{i:0width$}");
        if let Some(&e) = set.iter().find(|&&e| e >= universe_size) {
            return Err(Error::Mismatch(format!(
                "element {e} of set {i} is outside a universe of {universe_size}"
            )));
        }
        if set.is_empty() {
            return Err(Error::EmptyDataset(id));
        }
        prices.insert(id.clone(), Price::from_units(1));
        datasets.push(CellBasedDataset::new(id, theta, set.clone())?);
    }
    let grid = GridConfig::new(theta, 0.0, 0.0, 1.0, 1.0)?;
    let market = Marketplace::new(grid, datasets, PricingFunction::ExplicitTable(prices))?;
    Ok(ReductionInstance {
        market,
        delta: (1u64 << theta) as f64 * std::f64::consts::SQRT_2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_graph_naive;
    use crate::solvers::solve_exact;

    #[test]
    fn picks_the_larger_set() {
        let inst = make_reduction_instance(2, &[vec![0], vec![0, 1]]).unwrap();
        assert_eq!(inst.market.grid().theta, 1);
        let g = build_graph_naive(&inst.market, inst.delta).unwrap();
        let s = solve_exact(&inst.market, &g, Price::from_units(1), 15).unwrap();
        assert_eq!(s.selected, vec![1]);
        assert_eq!(s.coverage, 2);
    }

    #[test]
    fn graph_is_complete() {
        let sets = vec![vec![0], vec![15], vec![5, 10], vec![3]];
        let inst = make_reduction_instance(16, &sets).unwrap();
        assert_eq!(inst.market.grid().theta, 2);
        let g = build_graph_naive(&inst.market, inst.delta).unwrap();
        assert_eq!(g.edge_count(), 6);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(make_reduction_instance(4, &[vec![4]]).is_err());
        assert!(make_reduction_instance(4, &[vec![]]).is_err());
        assert_eq!(
            make_reduction_instance(u64::MAX, &[vec![0]]).unwrap_err(),
            Error::UniverseTooLarge(u64::MAX)
        );
    }
}
