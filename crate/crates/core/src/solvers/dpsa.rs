//! Dual-path search algorithm.
//!
//! For each connected component of the affordable datasets: find its center,
//! grow a BFS tree from it and greedily buy whole root-to-leaf paths. A path
//! costs only its nodes not already bought (`Δp`), so paths sharing a prefix
//! get cheaper once that prefix is paid for. Two greedy passes run per
//! component, one ranking paths by uncovered cells per unit of `Δp`, one by
//! uncovered cells alone; the best candidate over every component and both
//! passes is returned.

use std::cmp::Ordering;

use super::bfs::{find_center_exact, find_center_two_bfs, BfsTree};
use super::state::{CellUniverse, GreedyState};
use super::{Algorithm, Candidate, RoundCoverages, Solution, SolveStatus};
use crate::graph::{components_within, DatasetGraph};
use crate::marketplace::Marketplace;
use crate::price::Price;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GreedyFlag {
    /// Maximize uncovered cells per unit of incremental path price.
    Ratio,
    /// Maximize uncovered cells.
    Coverage,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CenterMode {
    /// BFS from every node.
    Exact,
    /// Two BFS sweeps.
    TwoBfs,
}

struct PathScore {
    gain: usize,
    delta_price: Price,
}

impl PathScore {
    /// Ordering where `Greater` means `self` should be picked first.
    fn rank(&self, other: &PathScore, flag: GreedyFlag) -> Ordering {
        match flag {
            GreedyFlag::Coverage => self.gain.cmp(&other.gain),
            GreedyFlag::Ratio => {
                let (a_free, b_free) = (
                    !self.delta_price.is_positive(),
                    !other.delta_price.is_positive(),
                );
                match (a_free, b_free) {
                    (true, true) => self.gain.cmp(&other.gain),
                    (true, false) => Ordering::Greater,
                    (false, true) => Ordering::Less,
                    (false, false) => {
                        let lhs = self.gain as i128 * other.delta_price.cents() as i128;
                        let rhs = other.gain as i128 * self.delta_price.cents() as i128;
                        lhs.cmp(&rhs)
                    }
                }
            }
        }
    }
}

/// Greedy path selection on a BFS tree. Returns the selected nodes, root
/// first, or `None` when the root alone exceeds the budget.
pub fn budgeted_greedy(
    market: &Marketplace,
    tree: &BfsTree,
    budget: Price,
    flag: GreedyFlag,
) -> Option<Vec<usize>> {
    let root_price = market.price_of(tree.root);
    if root_price > budget {
        return None;
    }
    let universe = CellUniverse::new(market, &tree.members);
    let path_cells: Vec<Vec<u32>> = tree
        .paths
        .iter()
        .map(|p| universe.union_of(p.iter().copied()))
        .collect();
    let mut state = GreedyState::new(&universe, market.len(), budget);
    state.take(tree.root, root_price, universe.dense(tree.root));

    let mut open: Vec<usize> = (0..tree.leaves.len()).collect();
    while !open.is_empty() && state.spent() <= budget {
        let score = |leaf: usize| PathScore {
            gain: state.gain(&path_cells[leaf]),
            delta_price: tree.paths[leaf]
                .iter()
                .filter(|&&n| !state.contains(n))
                .map(|&n| market.price_of(n))
                .sum(),
        };
        // Leaves are ascending by node id; keep the first maximum.
        let mut best_slot = 0;
        let mut best = score(open[0]);
        for (slot, &leaf) in open.iter().enumerate().skip(1) {
            let s = score(leaf);
            if s.rank(&best, flag) == Ordering::Greater {
                best_slot = slot;
                best = s;
            }
        }
        let leaf = open.remove(best_slot);
        if state.fits(best.delta_price) {
            for &n in &tree.paths[leaf] {
                state.take(n, market.price_of(n), universe.dense(n));
            }
        }
    }
    Some(state.into_selected())
}

pub fn solve_dpsa(
    market: &Marketplace,
    graph: &DatasetGraph,
    budget: Price,
    mode: CenterMode,
) -> Solution {
    let algorithm = match mode {
        CenterMode::Exact => Algorithm::Dpsa,
        CenterMode::TwoBfs => Algorithm::DpsaBa,
    };
    let affordable = market.affordable_subset(budget);
    if affordable.is_empty() {
        return Solution::below_minimum(algorithm);
    }
    let mut allowed = vec![false; market.len()];
    for &n in &affordable {
        allowed[n] = true;
    }

    let mut best_ratio: Option<Candidate> = None;
    let mut best_coverage: Option<Candidate> = None;
    for sub in components_within(graph, &allowed) {
        let center = match mode {
            CenterMode::Exact => find_center_exact(&sub).center,
            CenterMode::TwoBfs => find_center_two_bfs(&sub).center,
        };
        let tree = BfsTree::build(&sub, center, market);
        for (flag, slot) in [
            (GreedyFlag::Ratio, &mut best_ratio),
            (GreedyFlag::Coverage, &mut best_coverage),
        ] {
            if let Some(nodes) = budgeted_greedy(market, &tree, budget, flag) {
                let candidate = Candidate::new(market, nodes);
                if slot.as_ref().is_none_or(|b| candidate > *b) {
                    *slot = Some(candidate);
                }
            }
        }
    }

    let rounds = RoundCoverages {
        ratio: best_ratio.as_ref().map_or(0, |c| c.coverage),
        coverage: best_coverage.as_ref().map_or(0, |c| c.coverage),
    };
    let best = match (best_ratio, best_coverage) {
        (Some(a), Some(b)) => Some(if b > a { b } else { a }),
        (a, b) => a.or(b),
    };
    let mut solution = match best {
        Some(c) if !c.nodes.is_empty() => Solution::from_selection(
            algorithm,
            SolveStatus::Solved,
            market,
            graph,
            budget,
            c.nodes,
        ),
        _ => {
            let single = affordable
                .iter()
                .copied()
                .max_by_key(|&n| (market.dataset(n).coverage(), std::cmp::Reverse(n)))
                .expect("affordable set is non-empty");
            Solution::from_selection(
                algorithm,
                SolveStatus::SingletonFallback,
                market,
                graph,
                budget,
                vec![single],
            )
        }
    };
    solution.rounds = Some(rounds);
    solution
}
