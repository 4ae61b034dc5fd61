//! Breadth-first search utilities over connected subgraphs: eccentricities,
//! exact and two-sweep center finding, and rooted BFS trees with their
//! root-to-leaf paths.

use std::collections::VecDeque;

use itertools::Itertools;

use crate::graph::Subgraph;
use crate::grid::CellId;
use crate::marketplace::Marketplace;
use crate::price::Price;

/// Hop distances from `source` (local index); unreachable nodes get `usize::MAX`.
pub fn bfs_distances(sub: &Subgraph<'_>, source: usize) -> Vec<usize> {
    bfs(sub, source).0
}

/// Distances and BFS parents from `source`, expanding neighbors in ascending order.
fn bfs(sub: &Subgraph<'_>, source: usize) -> (Vec<usize>, Vec<Option<usize>>) {
    let mut dist = vec![usize::MAX; sub.len()];
    let mut parent = vec![None; sub.len()];
    dist[source] = 0;
    let mut queue = VecDeque::from([source]);
    while let Some(u) = queue.pop_front() {
        for &v in sub.local_neighbors(u) {
            if dist[v] == usize::MAX {
                dist[v] = dist[u] + 1;
                parent[v] = Some(u);
                queue.push_back(v);
            }
        }
    }
    (dist, parent)
}

/// Farthest node (smallest local index on ties) and its distance.
fn farthest(dist: &[usize]) -> (usize, usize) {
    let mut best = (0, 0);
    for (node, &d) in dist.iter().enumerate() {
        debug_assert!(d != usize::MAX, "subgraph must be connected");
        if d > best.1 {
            best = (node, d);
        }
    }
    best
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactCenter {
    /// Global node id of the center.
    pub center: usize,
    pub radius: usize,
    /// Eccentricity of each member, aligned with `Subgraph::members()`.
    pub eccentricities: Vec<usize>,
}

impl ExactCenter {
    pub fn diameter(&self) -> usize {
        self.eccentricities.iter().copied().max().unwrap_or(0)
    }
}

/// Runs a BFS from every node; the center is the node of minimum
/// eccentricity, smallest id on ties.
pub fn find_center_exact(sub: &Subgraph<'_>) -> ExactCenter {
    assert!(!sub.is_empty(), "center of an empty subgraph");
    let eccentricities: Vec<usize> = (0..sub.len())
        .map(|v| farthest(&bfs_distances(sub, v)).1)
        .collect();
    let (local, &radius) = eccentricities
        .iter()
        .enumerate()
        .min_by_key(|&(i, &e)| (e, i))
        .expect("non-empty");
    ExactCenter {
        center: sub.global(local),
        radius,
        eccentricities,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoBfsCenter {
    pub center: usize,
    /// `⌈diameter / 2⌉`; exact on trees.
    pub radius: usize,
    /// Length of the second sweep's longest path; exact on trees.
    pub diameter: usize,
    /// Global ids of the endpoints of that path.
    pub endpoints: (usize, usize),
}

/// Two-sweep center estimate: BFS from the smallest member to its farthest
/// node `a`, BFS from `a` to its farthest node `b`, and take the middle of
/// the `a → b` path.
pub fn find_center_two_bfs(sub: &Subgraph<'_>) -> TwoBfsCenter {
    assert!(!sub.is_empty(), "center of an empty subgraph");
    let (a, _) = farthest(&bfs_distances(sub, 0));
    let (dist, parent) = bfs(sub, a);
    let (b, diameter) = farthest(&dist);
    // Walk back from b by floor(diameter / 2) hops; the node reached is
    // ceil(diameter / 2) hops from a and floor(diameter / 2) from b.
    let mut mid = b;
    for _ in 0..diameter / 2 {
        mid = parent[mid].expect("path to sweep origin");
    }
    TwoBfsCenter {
        center: sub.global(mid),
        radius: diameter.div_ceil(2),
        diameter,
        endpoints: (sub.global(a), sub.global(b)),
    }
}

/// BFS tree rooted at a chosen center, with every root-to-leaf path.
#[derive(Clone, Debug)]
pub struct BfsTree {
    pub root: usize,
    /// Parent of each member (global ids), `None` for the root.
    pub parent: Vec<Option<usize>>,
    /// Depth of each member, aligned with `members`.
    pub depth: Vec<usize>,
    pub members: Vec<usize>,
    /// Leaves (global ids, ascending). A lone root has no leaves.
    pub leaves: Vec<usize>,
    /// Per leaf: path nodes from the root's child down to the leaf, root excluded.
    pub paths: Vec<Vec<usize>>,
    /// Per leaf: sorted union of the cells of the path nodes.
    pub path_cells: Vec<Vec<CellId>>,
    /// Per leaf: summed price of the path nodes.
    pub path_prices: Vec<Price>,
}

impl BfsTree {
    pub fn build(sub: &Subgraph<'_>, root: usize, market: &Marketplace) -> Self {
        let root_local = sub.local(root).expect("root belongs to the subgraph");
        let (dist, parent_local) = bfs(sub, root_local);
        let mut has_child = vec![false; sub.len()];
        for p in parent_local.iter().flatten() {
            has_child[*p] = true;
        }
        let mut leaves = Vec::new();
        let mut paths = Vec::new();
        for v in 0..sub.len() {
            if v == root_local || has_child[v] {
                continue;
            }
            let mut path = Vec::with_capacity(dist[v]);
            let mut cur = v;
            while cur != root_local {
                path.push(sub.global(cur));
                cur = parent_local[cur].expect("reachable from root");
            }
            path.reverse();
            leaves.push(sub.global(v));
            paths.push(path);
        }
        let path_cells = paths
            .iter()
            .map(|p| {
                p.iter()
                    .map(|&n| market.dataset(n).cells().iter().copied())
                    .kmerge()
                    .dedup()
                    .collect()
            })
            .collect();
        let path_prices = paths
            .iter()
            .map(|p| p.iter().map(|&n| market.price_of(n)).sum())
            .collect();
        BfsTree {
            root,
            parent: parent_local
                .iter()
                .map(|p| p.map(|l| sub.global(l)))
                .collect(),
            depth: dist,
            members: sub.members().to_vec(),
            leaves,
            paths,
            path_cells,
            path_prices,
        }
    }

    /// Depth of the tree, which is the eccentricity of the root.
    pub fn height(&self) -> usize {
        self.depth.iter().copied().max().unwrap_or(0)
    }
}
