//! Cell-based dataset distances and the spatial dataset graph.
//!
//! Distances are measured between integer cell indices, so two datasets in
//! horizontally adjacent cells are at distance 1 and datasets sharing a cell
//! are at distance 0. Edges are decided by [`within_threshold`] on the exact
//! squared distance; the naive and indexed builders share that predicate and
//! therefore produce identical edge sets.

pub mod ball_tree;

use std::collections::VecDeque;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::CellBasedDataset;
use crate::marketplace::Marketplace;

pub use ball_tree::{build_graph_indexed, BallTree};

/// Decoded cell coordinates of one dataset.
pub(crate) type Coords = Vec<(i64, i64)>;

pub(crate) fn decode_coords(d: &CellBasedDataset) -> Coords {
    d.coordinates()
        .into_iter()
        .map(|(x, y)| (x as i64, y as i64))
        .collect()
}

/// Minimum squared Euclidean distance between any cell of `a` and any cell of `b`.
pub(crate) fn min_squared_distance(a: &[(i64, i64)], b: &[(i64, i64)]) -> u64 {
    let mut best = u64::MAX;
    for &(ax, ay) in a {
        for &(bx, by) in b {
            let dx = ax - bx;
            let dy = ay - by;
            let d = (dx * dx + dy * dy) as u64;
            if d < best {
                best = d;
                if best == 0 {
                    return 0;
                }
            }
        }
    }
    best
}

/// Edge predicate shared by every graph builder.
#[inline]
pub fn within_threshold(squared_distance: u64, delta: f64) -> bool {
    (squared_distance as f64).sqrt() <= delta
}

fn sorted_intersect(a: &[u64], b: &[u64]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return true,
        }
    }
    false
}

/// Minimum distance, in cell units, between the cells of two datasets.
pub fn dataset_distance(a: &CellBasedDataset, b: &CellBasedDataset) -> Result<f64> {
    if a.theta != b.theta {
        return Err(Error::Mismatch(format!(
            "datasets {:?} (theta {}) and {:?} (theta {}) use different grids",
            a.id, a.theta, b.id, b.theta
        )));
    }
    if a.coverage() == 0 || b.coverage() == 0 {
        return Ok(f64::INFINITY);
    }
    if sorted_intersect(a.cells(), b.cells()) {
        return Ok(0.0);
    }
    Ok((min_squared_distance(&decode_coords(a), &decode_coords(b)) as f64).sqrt())
}

fn check_delta(delta: f64) -> Result<()> {
    if delta.is_nan() || delta < 0.0 {
        return Err(Error::Mismatch(format!(
            "distance threshold must be >= 0, got {delta}"
        )));
    }
    Ok(())
}

/// Undirected dataset graph with sorted adjacency lists over node indices.
#[derive(Clone, Debug, PartialEq)]
pub struct DatasetGraph {
    delta: f64,
    adjacency: Vec<Vec<usize>>,
}

impl DatasetGraph {
    /// Builds a graph from an explicit edge list. Self-loops and duplicate
    /// edges are dropped.
    pub fn from_edges(
        node_count: usize,
        delta: f64,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let mut adjacency = vec![Vec::new(); node_count];
        for (a, b) in edges {
            if a >= node_count || b >= node_count {
                return Err(Error::Mismatch(format!(
                    "edge ({a}, {b}) references a node outside 0..{node_count}"
                )));
            }
            if a != b {
                adjacency[a].push(b);
                adjacency[b].push(a);
            }
        }
        Ok(Self::from_adjacency(delta, adjacency))
    }

    pub(crate) fn from_adjacency(delta: f64, mut adjacency: Vec<Vec<usize>>) -> Self {
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
        }
        DatasetGraph { delta, adjacency }
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, node: usize) -> &[usize] {
        &self.adjacency[node]
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adjacency[a].binary_search(&b).is_ok()
    }

    /// Edge list with `a < b`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(a, ns)| ns.iter().filter(move |&&b| a < b).map(move |&b| (a, b)))
            .collect()
    }

    pub fn average_degree(&self) -> f64 {
        if self.adjacency.is_empty() {
            0.0
        } else {
            2.0 * self.edge_count() as f64 / self.node_count() as f64
        }
    }

    /// Whether the subgraph induced by `nodes` is connected. Empty and
    /// singleton sets are connected.
    pub fn is_connected_subset(&self, nodes: &[usize]) -> bool {
        if nodes.len() <= 1 {
            return true;
        }
        let mut member = vec![false; self.node_count()];
        for &n in nodes {
            member[n] = true;
        }
        let mut seen = vec![false; self.node_count()];
        let mut queue = VecDeque::from([nodes[0]]);
        seen[nodes[0]] = true;
        let mut reached = 1;
        while let Some(u) = queue.pop_front() {
            for &v in &self.adjacency[u] {
                if member[v] && !seen[v] {
                    seen[v] = true;
                    reached += 1;
                    queue.push_back(v);
                }
            }
        }
        let distinct = nodes
            .iter()
            .filter(|&&n| std::mem::replace(&mut member[n], false))
            .count();
        reached == distinct
    }

    pub fn stats(&self) -> GraphStats {
        GraphStats {
            nodes: self.node_count(),
            edges: self.edge_count(),
            average_degree: self.average_degree(),
            components: connected_components(self).len(),
        }
    }

    /// Adjacency export: one line per node, `id<TAB>price<TAB>neighbor ids`.
    pub fn export_adjacency(&self, market: &Marketplace) -> String {
        let mut out = String::from("# node\tprice\tneighbors\n");
        for (node, ns) in self.adjacency.iter().enumerate() {
            let neighbors: Vec<&str> = ns.iter().map(|&n| market.id(n)).collect();
            let _ = writeln!(
                out,
                "{}\t{}\t{}",
                market.id(node),
                market.price_of(node),
                neighbors.join(",")
            );
        }
        out
    }
}

/// Node, edge, degree and component counts of a dataset graph.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphStats {
    pub nodes: usize,
    pub edges: usize,
    pub average_degree: f64,
    pub components: usize,
}

/// All-pairs construction: every pair of datasets is compared exactly.
pub fn build_graph_naive(market: &Marketplace, delta: f64) -> Result<DatasetGraph> {
    check_delta(delta)?;
    let coords: Vec<Coords> = market.datasets().iter().map(decode_coords).collect();
    let n = market.len();
    let adjacency: Vec<Vec<usize>> = (0..n)
        .into_par_iter()
        .map(|i| {
            (0..n)
                .filter(|&j| {
                    j != i && {
                        let (a, b) = (market.dataset(i), market.dataset(j));
                        sorted_intersect(a.cells(), b.cells())
                            || within_threshold(min_squared_distance(&coords[i], &coords[j]), delta)
                    }
                })
                .collect()
        })
        .collect();
    Ok(DatasetGraph::from_adjacency(delta, adjacency))
}

/// A maximal connected component, with its own adjacency over local indices.
///
/// Local index `k` refers to `members()[k]`; members are ascending, so
/// comparing local indices orders nodes the same way as comparing global ids.
#[derive(Clone, Debug)]
pub struct Subgraph<'g> {
    graph: &'g DatasetGraph,
    members: Vec<usize>,
    local_adjacency: Vec<Vec<usize>>,
}

impl<'g> Subgraph<'g> {
    fn from_members(graph: &'g DatasetGraph, mut members: Vec<usize>, allowed: &[bool]) -> Self {
        members.sort_unstable();
        let local_adjacency = members
            .iter()
            .map(|&g| {
                graph
                    .neighbors(g)
                    .iter()
                    .filter(|&&n| allowed[n])
                    .filter_map(|n| members.binary_search(n).ok())
                    .collect()
            })
            .collect();
        Subgraph {
            graph,
            members,
            local_adjacency,
        }
    }

    pub fn graph(&self) -> &'g DatasetGraph {
        self.graph
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn global(&self, local: usize) -> usize {
        self.members[local]
    }

    pub fn local(&self, global: usize) -> Option<usize> {
        self.members.binary_search(&global).ok()
    }

    pub fn local_neighbors(&self, local: usize) -> &[usize] {
        &self.local_adjacency[local]
    }

    pub fn edge_count(&self) -> usize {
        self.local_adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }
}

/// Connected components of the whole graph.
pub fn connected_components(graph: &DatasetGraph) -> Vec<Subgraph<'_>> {
    components_within(graph, &vec![true; graph.node_count()])
}

/// Connected components of the subgraph induced by nodes with `allowed[n]`.
///
/// Components are ordered by smallest member; BFS expands neighbors in
/// ascending id order.
pub fn components_within<'g>(graph: &'g DatasetGraph, allowed: &[bool]) -> Vec<Subgraph<'g>> {
    let n = graph.node_count();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] || !allowed[start] {
            continue;
        }
        seen[start] = true;
        let mut members = vec![start];
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for &v in graph.neighbors(u) {
                if allowed[v] && !seen[v] {
                    seen[v] = true;
                    members.push(v);
                    queue.push_back(v);
                }
            }
        }
        out.push(Subgraph::from_members(graph, members, allowed));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{encode_cell, GridConfig};
    use crate::marketplace::PricingFunction;

    fn ds(id: &str, theta: u32, xy: &[(u32, u32)]) -> CellBasedDataset {
        let cells = xy
            .iter()
            .map(|&(x, y)| encode_cell(x, y, theta).unwrap())
            .collect();
        CellBasedDataset::new(id, theta, cells).unwrap()
    }

    fn market(datasets: Vec<CellBasedDataset>) -> Marketplace {
        let theta = datasets[0].theta;
        Marketplace::new(
            GridConfig::new(theta, 0.0, 0.0, 1.0, 1.0).unwrap(),
            datasets,
            PricingFunction::UsageBased,
        )
        .unwrap()
    }

    #[test]
    fn distance_examples() {
        let a = ds("a", 3, &[(0, 0), (1, 1)]);
        assert_eq!(dataset_distance(&a, &a).unwrap(), 0.0);
        let p = ds("p", 3, &[(0, 0)]);
        let q = ds("q", 3, &[(3, 4)]);
        assert_eq!(dataset_distance(&p, &q).unwrap(), 5.0);
        assert_eq!(dataset_distance(&q, &p).unwrap(), 5.0);
        let r = ds("r", 3, &[(1, 0)]);
        assert_eq!(dataset_distance(&p, &r).unwrap(), 1.0);
    }

    #[test]
    fn distance_rejects_mixed_grids() {
        let a = ds("a", 3, &[(0, 0)]);
        let b = ds("b", 4, &[(0, 0)]);
        assert!(matches!(dataset_distance(&a, &b), Err(Error::Mismatch(_))));
    }

    #[test]
    fn naive_graph_thresholds() {
        let m = market(vec![ds("a", 3, &[(2, 2)]), ds("b", 3, &[(2, 2)])]);
        for delta in [0.0, 1.0, 7.5] {
            assert_eq!(build_graph_naive(&m, delta).unwrap().edge_count(), 1);
        }
        let m = market(vec![ds("a", 3, &[(0, 0)]), ds("b", 3, &[(3, 4)])]);
        assert_eq!(build_graph_naive(&m, 2.0).unwrap().edge_count(), 0);
        assert_eq!(build_graph_naive(&m, 5.0).unwrap().edge_count(), 1);
        assert!(build_graph_naive(&m, -1.0).is_err());
    }

    #[test]
    fn components_basic() {
        let g = DatasetGraph::from_edges(3, 1.0, []).unwrap();
        assert_eq!(connected_components(&g).len(), 3);
        let g = DatasetGraph::from_edges(3, 1.0, [(0, 1), (1, 2)]).unwrap();
        let comps = connected_components(&g);
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].members(), &[0, 1, 2]);
    }

    #[test]
    fn components_ordered_by_smallest_member() {
        let g = DatasetGraph::from_edges(6, 1.0, [(4, 1), (0, 5), (2, 3)]).unwrap();
        let comps: Vec<Vec<usize>> = connected_components(&g)
            .iter()
            .map(|c| c.members().to_vec())
            .collect();
        assert_eq!(comps, vec![vec![0, 5], vec![1, 4], vec![2, 3]]);
    }

    #[test]
    fn components_within_mask_drop_excluded_edges() {
        let g = DatasetGraph::from_edges(3, 1.0, [(0, 1), (1, 2)]).unwrap();
        let comps = components_within(&g, &[true, false, true]);
        assert_eq!(comps.len(), 2);
        assert!(comps.iter().all(|c| c.edge_count() == 0));
    }

    #[test]
    fn connectivity_of_subsets() {
        let g = DatasetGraph::from_edges(4, 1.0, [(0, 1), (2, 3)]).unwrap();
        assert!(g.is_connected_subset(&[]));
        assert!(g.is_connected_subset(&[2]));
        assert!(g.is_connected_subset(&[0, 1]));
        assert!(!g.is_connected_subset(&[0, 2]));
        assert!(!g.is_connected_subset(&[0, 1, 2, 3]));
    }

    #[test]
    fn adjacency_export_lists_ids_and_prices() {
        let m = market(vec![ds("a", 3, &[(0, 0)]), ds("b", 3, &[(1, 0), (2, 0)])]);
        let g = build_graph_naive(&m, 1.0).unwrap();
        let text = g.export_adjacency(&m);
        assert!(text.contains("a\t1.00\tb\n"));
        assert!(text.contains("b\t2.00\ta\n"));
        let stats = g.stats();
        assert_eq!((stats.nodes, stats.edges, stats.components), (2, 1, 1));
        assert_eq!(stats.average_degree, 1.0);
    }
}
