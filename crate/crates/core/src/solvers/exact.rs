//! Brute-force optimum for small catalogs.

use super::state::CellUniverse;
use super::{Algorithm, Candidate, Solution, SolveStatus};
use crate::error::{Error, Result};
use crate::graph::DatasetGraph;
use crate::marketplace::Marketplace;
use crate::price::Price;

pub const DEFAULT_ORACLE_CAP: usize = 15;

// Subsets are tracked as u64 masks.
const HARD_CAP: usize = 63;

struct Search<'a> {
    market: &'a Marketplace,
    universe: &'a CellUniverse,
    neighbor_masks: Vec<u64>,
    budget: Price,
    counts: Vec<u32>,
    covered: usize,
    best: Option<(usize, Price, u64)>,
}

fn mask_nodes(mask: u64) -> Vec<usize> {
    (0..64).filter(|i| mask & (1 << i) != 0).collect()
}

impl Search<'_> {
    fn connected(&self, mask: u64) -> bool {
        let start = mask & mask.wrapping_neg();
        let mut reached = start;
        let mut frontier = start;
        while frontier != 0 {
            let node = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let fresh = self.neighbor_masks[node] & mask & !reached;
            reached |= fresh;
            frontier |= fresh;
        }
        reached == mask
    }

    fn offer(&mut self, mask: u64, price: Price) {
        if mask == 0 || !self.connected(mask) {
            return;
        }
        let better = match self.best {
            None => true,
            Some((coverage, best_price, best_mask)) => {
                (self.covered, std::cmp::Reverse(price)) > (coverage, std::cmp::Reverse(best_price))
                    || (self.covered == coverage
                        && price == best_price
                        && mask_nodes(mask) < mask_nodes(best_mask))
            }
        };
        if better {
            self.best = Some((self.covered, price, mask));
        }
    }

    fn visit(&mut self, node: usize, mask: u64, price: Price) {
        if node == self.neighbor_masks.len() {
            self.offer(mask, price);
            return;
        }
        let p = price + self.market.price_of(node);
        if p <= self.budget {
            for &c in self.universe.dense(node) {
                if self.counts[c as usize] == 0 {
                    self.covered += 1;
                }
                self.counts[c as usize] += 1;
            }
            self.visit(node + 1, mask | (1 << node), p);
            for &c in self.universe.dense(node) {
                self.counts[c as usize] -= 1;
                if self.counts[c as usize] == 0 {
                    self.covered -= 1;
                }
            }
        }
        self.visit(node + 1, mask, price);
    }
}

/// Enumerates every subset of the catalog and keeps the connected,
/// budget-feasible one of maximum coverage; ties go to the lower price,
/// then to the lexicographically smaller node list.
pub fn solve_exact(
    market: &Marketplace,
    graph: &DatasetGraph,
    budget: Price,
    cap: usize,
) -> Result<Solution> {
    let n = market.len();
    if n > cap.min(HARD_CAP) {
        return Err(Error::OracleCapExceeded {
            size: n,
            cap: cap.min(HARD_CAP),
        });
    }
    if market.affordable_subset(budget).is_empty() {
        return Ok(Solution::below_minimum(Algorithm::Exact));
    }
    let all: Vec<usize> = (0..n).collect();
    let universe = CellUniverse::new(market, &all);
    let neighbor_masks = (0..n)
        .map(|v| graph.neighbors(v).iter().fold(0u64, |m, &u| m | (1 << u)))
        .collect();
    let mut search = Search {
        market,
        universe: &universe,
        neighbor_masks,
        budget,
        counts: vec![0; universe.len()],
        covered: 0,
        best: None,
    };
    search.visit(0, 0, Price::ZERO);
    let (_, _, mask) = search.best.expect("an affordable singleton exists");
    let best = Candidate::new(market, mask_nodes(mask));
    Ok(Solution::from_selection(
        Algorithm::Exact,
        SolveStatus::Solved,
        market,
        graph,
        budget,
        best.nodes,
    ))
}
