//! Connected maximum coverage baselines.
//!
//! Per connected component of the affordable datasets, the smallest member
//! is the root of a BFS tree and every other member defines the path from
//! the root to it. Starting from the root, paths are bought greedily: `mc`
//! ranks a path by the coverage of all its nodes divided by its length,
//! `mg` by the uncovered cells it adds divided by the number of nodes it
//! adds. Only paths whose unbought nodes fit the remaining budget compete.

use std::cmp::Ordering;

use super::bfs::BfsTree;
use super::state::{CellUniverse, GreedyState};
use super::{Algorithm, Candidate, Solution, SolveStatus};
use crate::graph::{components_within, DatasetGraph, Subgraph};
use crate::marketplace::Marketplace;
use crate::price::Price;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CmcVariant {
    /// Maximum average coverage per path node.
    MaxCoverage,
    /// Maximum average marginal gain per added node.
    MaxGain,
}

/// Path from the root (inclusive) to `target` (inclusive), walking parents.
fn root_path(tree: &BfsTree, sub: &Subgraph<'_>, target: usize) -> Vec<usize> {
    let mut path = vec![target];
    let mut cur = target;
    while let Some(p) = tree.parent[sub.local(cur).expect("member")] {
        path.push(p);
        cur = p;
    }
    path.reverse();
    path
}

fn grow(
    market: &Marketplace,
    sub: &Subgraph<'_>,
    budget: Price,
    variant: CmcVariant,
) -> Vec<usize> {
    let root = sub.members()[0];
    let tree = BfsTree::build(sub, root, market);
    let universe = CellUniverse::new(market, sub.members());
    let targets: Vec<usize> = sub.members()[1..].to_vec();
    let paths: Vec<Vec<usize>> = targets.iter().map(|&t| root_path(&tree, sub, t)).collect();
    let path_cells: Vec<Vec<u32>> = paths
        .iter()
        .map(|p| universe.union_of(p.iter().copied()))
        .collect();

    let mut state = GreedyState::new(&universe, market.len(), budget);
    state.take(root, market.price_of(root), universe.dense(root));
    let mut open: Vec<usize> = (0..paths.len()).collect();
    loop {
        // (slot, numerator, denominator) of the best affordable path so far
        let mut best: Option<(usize, usize, usize)> = None;
        open.retain(|&i| paths[i].iter().any(|&n| !state.contains(n)));
        for (slot, &i) in open.iter().enumerate() {
            let new_nodes: Vec<usize> = paths[i]
                .iter()
                .copied()
                .filter(|&n| !state.contains(n))
                .collect();
            let delta_price: Price = new_nodes.iter().map(|&n| market.price_of(n)).sum();
            if !state.fits(delta_price) {
                continue;
            }
            let (num, den) = match variant {
                CmcVariant::MaxCoverage => (path_cells[i].len(), paths[i].len()),
                CmcVariant::MaxGain => (state.gain(&path_cells[i]), new_nodes.len()),
            };
            let better = best.is_none_or(|(_, bn, bd)| {
                (num as u128 * bd as u128).cmp(&(bn as u128 * den as u128)) == Ordering::Greater
            });
            if better {
                best = Some((slot, num, den));
            }
        }
        let Some((slot, _, _)) = best else { break };
        let i = open.remove(slot);
        for &n in &paths[i] {
            state.take(n, market.price_of(n), universe.dense(n));
        }
    }
    state.into_selected()
}

pub fn solve_cmc(
    market: &Marketplace,
    graph: &DatasetGraph,
    budget: Price,
    variant: CmcVariant,
) -> Solution {
    let algorithm = match variant {
        CmcVariant::MaxCoverage => Algorithm::CmcMc,
        CmcVariant::MaxGain => Algorithm::CmcMg,
    };
    let affordable = market.affordable_subset(budget);
    if affordable.is_empty() {
        return Solution::below_minimum(algorithm);
    }
    let mut allowed = vec![false; market.len()];
    for &n in &affordable {
        allowed[n] = true;
    }
    let best = components_within(graph, &allowed)
        .iter()
        .map(|sub| Candidate::new(market, grow(market, sub, budget, variant)))
        .max()
        .expect("at least one component");
    Solution::from_selection(
        algorithm,
        SolveStatus::Solved,
        market,
        graph,
        budget,
        best.nodes,
    )
}
