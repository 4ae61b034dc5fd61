//! Per-solve working state for the greedy solvers.

use crate::grid::CellId;
use crate::marketplace::Marketplace;
use crate::price::Price;

/// Dense renumbering of the cells touched by a set of datasets, so the
/// uncovered universe can be tracked as a flag per cell.
#[derive(Clone, Debug)]
pub struct CellUniverse {
    cells: Vec<CellId>,
    dense: Vec<Vec<u32>>,
}

impl CellUniverse {
    /// Universe spanned by `nodes`. Nodes outside that set map to no cells.
    pub fn new(market: &Marketplace, nodes: &[usize]) -> Self {
        let mut cells: Vec<CellId> = nodes
            .iter()
            .flat_map(|&n| market.dataset(n).cells().iter().copied())
            .collect();
        cells.sort_unstable();
        cells.dedup();
        let mut dense = vec![Vec::new(); market.len()];
        for &n in nodes {
            dense[n] = market
                .dataset(n)
                .cells()
                .iter()
                .map(|c| cells.binary_search(c).expect("cell in universe") as u32)
                .collect();
        }
        CellUniverse { cells, dense }
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn dense(&self, node: usize) -> &[u32] {
        &self.dense[node]
    }

    /// Sorted, deduplicated dense cells of several nodes.
    pub fn union_of(&self, nodes: impl IntoIterator<Item = usize>) -> Vec<u32> {
        let mut out: Vec<u32> = nodes
            .into_iter()
            .flat_map(|n| self.dense[n].iter().copied())
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

/// Uncovered universe, remaining budget and the result under construction.
///
/// Invariants: no cell of a selected node is flagged uncovered, and the
/// amount spent never exceeds the budget.
#[derive(Clone, Debug)]
pub struct GreedyState {
    uncovered: Vec<bool>,
    budget: Price,
    spent: Price,
    selected: Vec<usize>,
    in_result: Vec<bool>,
}

impl GreedyState {
    pub fn new(universe: &CellUniverse, node_count: usize, budget: Price) -> Self {
        GreedyState {
            uncovered: vec![true; universe.len()],
            budget,
            spent: Price::ZERO,
            selected: Vec::new(),
            in_result: vec![false; node_count],
        }
    }

    /// Number of `cells` still uncovered; `cells` must be duplicate-free.
    pub fn gain(&self, cells: &[u32]) -> usize {
        cells
            .iter()
            .filter(|&&c| self.uncovered[c as usize])
            .count()
    }

    pub fn remaining(&self) -> Price {
        self.budget - self.spent
    }

    pub fn spent(&self) -> Price {
        self.spent
    }

    pub fn fits(&self, extra: Price) -> bool {
        self.spent + extra <= self.budget
    }

    pub fn contains(&self, node: usize) -> bool {
        self.in_result[node]
    }

    pub fn selected(&self) -> &[usize] {
        &self.selected
    }

    pub fn is_empty(&self) -> bool {
        self.selected.is_empty()
    }

    /// Adds a node (if new), charging its price and covering its cells.
    pub fn take(&mut self, node: usize, price: Price, cells: &[u32]) {
        if std::mem::replace(&mut self.in_result[node], true) {
            return;
        }
        debug_assert!(self.fits(price));
        self.spent += price;
        self.selected.push(node);
        self.cover(cells);
    }

    pub fn cover(&mut self, cells: &[u32]) {
        for &c in cells {
            self.uncovered[c as usize] = false;
        }
    }

    pub fn into_selected(self) -> Vec<usize> {
        self.selected
    }
}
