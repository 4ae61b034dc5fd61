//! Dual-search algorithm: two greedy passes over the affordable datasets.
//!
//! The first pass ranks candidates by marginal coverage per unit price, the
//! second by raw marginal coverage. In both passes the top candidate is
//! accepted when it keeps the selection connected and fits the remaining
//! budget, and is dropped from the pool either way. The better of the two
//! selections is returned.

use std::cmp::Ordering;

use super::state::{CellUniverse, GreedyState};
use super::{Algorithm, Candidate, RoundCoverages, Solution, SolveStatus};
use crate::graph::DatasetGraph;
use crate::marketplace::Marketplace;
use crate::price::Price;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Score {
    Ratio,
    Coverage,
}

/// Both intermediate selections, plus the returned solution.
#[derive(Clone, Debug)]
pub struct DsaOutcome {
    pub ratio_round: Vec<usize>,
    pub coverage_round: Vec<usize>,
    pub solution: Solution,
}

fn run_round(
    market: &Marketplace,
    graph: &DatasetGraph,
    universe: &CellUniverse,
    candidates: &[usize],
    budget: Price,
    score: Score,
) -> Vec<usize> {
    let mut state = GreedyState::new(universe, market.len(), budget);
    let mut pool = candidates.to_vec();
    while !pool.is_empty() && state.spent() <= budget {
        // Pick the best-scoring candidate; the pool is ascending, so keeping
        // the first maximum breaks ties towards the smallest id.
        let mut best = 0;
        let mut best_gain = state.gain(universe.dense(pool[0]));
        for (slot, &node) in pool.iter().enumerate().skip(1) {
            let gain = state.gain(universe.dense(node));
            let better = match score {
                Score::Coverage => gain > best_gain,
                Score::Ratio => {
                    let lhs = gain as i128 * market.price_of(pool[best]).cents() as i128;
                    let rhs = best_gain as i128 * market.price_of(node).cents() as i128;
                    lhs.cmp(&rhs) == Ordering::Greater
                }
            };
            if better {
                best = slot;
                best_gain = gain;
            }
        }
        let node = pool.remove(best);
        let price = market.price_of(node);
        let connected =
            state.is_empty() || graph.neighbors(node).iter().any(|&n| state.contains(n));
        if connected && state.fits(price) {
            state.take(node, price, universe.dense(node));
        }
    }
    state.into_selected()
}

pub fn dsa_rounds(market: &Marketplace, graph: &DatasetGraph, budget: Price) -> DsaOutcome {
    let candidates = market.affordable_subset(budget);
    if candidates.is_empty() {
        return DsaOutcome {
            ratio_round: Vec::new(),
            coverage_round: Vec::new(),
            solution: Solution::below_minimum(Algorithm::Dsa),
        };
    }
    let universe = CellUniverse::new(market, &candidates);
    let ratio_round = run_round(market, graph, &universe, &candidates, budget, Score::Ratio);
    let coverage_round = run_round(
        market,
        graph,
        &universe,
        &candidates,
        budget,
        Score::Coverage,
    );
    let first = Candidate::new(market, ratio_round.clone());
    let second = Candidate::new(market, coverage_round.clone());
    let rounds = RoundCoverages {
        ratio: first.coverage,
        coverage: second.coverage,
    };
    let best = if second > first { second } else { first };
    let mut solution = Solution::from_selection(
        Algorithm::Dsa,
        SolveStatus::Solved,
        market,
        graph,
        budget,
        best.nodes,
    );
    solution.rounds = Some(rounds);
    DsaOutcome {
        ratio_round,
        coverage_round,
        solution,
    }
}

pub fn solve_dsa(market: &Marketplace, graph: &DatasetGraph, budget: Price) -> Solution {
    dsa_rounds(market, graph, budget).solution
}
