//! Ball tree over datasets, used to prune pair evaluations while building
//! the dataset graph.
//!
//! Every dataset is a ball: its centroid is the mean of its decoded cell
//! coordinates and its radius the largest centroid-to-cell distance. Inner
//! nodes cover all cells of the datasets beneath them. During a query for
//! dataset `q` against tree node `b`:
//!
//! * `|c_q - c_b| - r_q - r_b > δ`: no dataset under `b` can be within `δ`.
//! * `|c_q - c_b| + r_q + r_b <= δ`: every dataset under `b` is within `δ`.
//! * otherwise recurse; leaves fall back to the exact distance.

use rayon::prelude::*;

use super::{decode_coords, min_squared_distance, within_threshold, Coords, DatasetGraph};
use crate::error::{Error, Result};
use crate::grid::GridConfig;
use crate::marketplace::Marketplace;

/// Relative margin applied to both bounds so that floating-point error in
/// centroids and radii can never flip a decision the exact test would make.
const BOUND_MARGIN: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct BallNode {
    pub centroid: [f64; 2],
    pub radius: f64,
    /// Range into [`BallTree::leaf_order`] covered by this node.
    pub span: (usize, usize),
    pub kind: BallKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BallKind {
    Leaf(usize),
    Inner(usize, usize),
}

#[derive(Clone, Debug)]
pub struct BallTree {
    nodes: Vec<BallNode>,
    /// Dataset indices in leaf order; each inner node covers a contiguous run.
    leaf_order: Vec<usize>,
    grid: GridConfig,
    dataset_count: usize,
}

struct Item<'a> {
    dataset: usize,
    coords: &'a Coords,
    centroid: [f64; 2],
}

fn centroid_of<'a>(coords: impl Iterator<Item = &'a (i64, i64)>) -> [f64; 2] {
    let (mut sx, mut sy, mut n) = (0.0, 0.0, 0usize);
    for &(x, y) in coords {
        sx += x as f64;
        sy += y as f64;
        n += 1;
    }
    [sx / n as f64, sy / n as f64]
}

fn radius_about<'a>(centroid: [f64; 2], coords: impl Iterator<Item = &'a (i64, i64)>) -> f64 {
    coords
        .map(|&(x, y)| (x as f64 - centroid[0]).hypot(y as f64 - centroid[1]))
        .fold(0.0, f64::max)
}

impl BallTree {
    /// Top-down construction: split on the centroid axis of maximum spread at
    /// the median, down to one dataset per leaf.
    pub fn build(market: &Marketplace) -> Result<Self> {
        if market.is_empty() {
            return Err(Error::EmptyCatalog);
        }
        let coords: Vec<Coords> = market.datasets().iter().map(decode_coords).collect();
        let mut items: Vec<Item> = coords
            .iter()
            .enumerate()
            .map(|(dataset, c)| Item {
                dataset,
                coords: c,
                centroid: centroid_of(c.iter()),
            })
            .collect();
        let mut tree = BallTree {
            nodes: Vec::with_capacity(2 * items.len()),
            leaf_order: Vec::with_capacity(items.len()),
            grid: market.grid().clone(),
            dataset_count: market.len(),
        };
        tree.build_node(&mut items);
        Ok(tree)
    }

    fn build_node(&mut self, items: &mut [Item]) -> usize {
        let all_cells = || items.iter().flat_map(|it| it.coords.iter());
        let centroid = centroid_of(all_cells());
        let radius = radius_about(centroid, all_cells());
        let slot = self.nodes.len();
        let start = self.leaf_order.len();
        self.nodes.push(BallNode {
            centroid,
            radius,
            span: (start, start),
            kind: BallKind::Leaf(usize::MAX),
        });
        let kind = if items.len() == 1 {
            self.leaf_order.push(items[0].dataset);
            BallKind::Leaf(items[0].dataset)
        } else {
            let spread = |axis: usize| {
                let (lo, hi) = items.iter().fold((f64::MAX, f64::MIN), |(lo, hi), it| {
                    (lo.min(it.centroid[axis]), hi.max(it.centroid[axis]))
                });
                hi - lo
            };
            let axis = if spread(1) > spread(0) { 1 } else { 0 };
            items.sort_by(|a, b| {
                a.centroid[axis]
                    .total_cmp(&b.centroid[axis])
                    .then(a.dataset.cmp(&b.dataset))
            });
            let mid = items.len() / 2;
            let (left, right) = items.split_at_mut(mid);
            let l = self.build_node(left);
            let r = self.build_node(right);
            BallKind::Inner(l, r)
        };
        let node = &mut self.nodes[slot];
        node.kind = kind;
        node.span = (start, self.leaf_order.len());
        slot
    }

    pub fn root(&self) -> &BallNode {
        &self.nodes[0]
    }

    pub fn nodes(&self) -> &[BallNode] {
        &self.nodes
    }

    pub fn node(&self, index: usize) -> &BallNode {
        &self.nodes[index]
    }

    /// Datasets covered by a node.
    pub fn datasets_under(&self, node: &BallNode) -> &[usize] {
        &self.leaf_order[node.span.0..node.span.1]
    }

    pub fn dataset_count(&self) -> usize {
        self.dataset_count
    }

    pub fn depth(&self) -> usize {
        fn go(t: &BallTree, i: usize) -> usize {
            match t.nodes[i].kind {
                BallKind::Leaf(_) => 1,
                BallKind::Inner(l, r) => 1 + go(t, l).max(go(t, r)),
            }
        }
        go(self, 0)
    }

    fn check_market(&self, market: &Marketplace) -> Result<()> {
        if market.len() != self.dataset_count || market.grid() != &self.grid {
            return Err(Error::Mismatch(format!(
                "ball tree indexes {} datasets on theta {}, market has {} on theta {}",
                self.dataset_count,
                self.grid.theta,
                market.len(),
                market.grid().theta
            )));
        }
        Ok(())
    }

    fn neighbors_of(
        &self,
        query: usize,
        leaf_ball: &[(f64, [f64; 2])],
        coords: &[Coords],
        delta: f64,
    ) -> Vec<usize> {
        let (q_radius, q_centroid) = leaf_ball[query];
        let mut out = Vec::new();
        let mut stack = vec![0usize];
        while let Some(i) = stack.pop() {
            let node = &self.nodes[i];
            let d = (q_centroid[0] - node.centroid[0]).hypot(q_centroid[1] - node.centroid[1]);
            let margin = BOUND_MARGIN * (1.0 + d + q_radius + node.radius);
            if d - q_radius - node.radius > delta + margin {
                continue;
            }
            if d + q_radius + node.radius + margin <= delta {
                out.extend(self.datasets_under(node).iter().filter(|&&j| j != query));
                continue;
            }
            match node.kind {
                BallKind::Leaf(j) => {
                    if j != query
                        && within_threshold(min_squared_distance(&coords[query], &coords[j]), delta)
                    {
                        out.push(j);
                    }
                }
                BallKind::Inner(l, r) => {
                    stack.push(r);
                    stack.push(l);
                }
            }
        }
        out
    }
}

/// Builds the dataset graph by querying the ball tree once per dataset.
pub fn build_graph_indexed(
    market: &Marketplace,
    delta: f64,
    tree: &BallTree,
) -> Result<DatasetGraph> {
    super::check_delta(delta)?;
    tree.check_market(market)?;
    let coords: Vec<Coords> = market.datasets().iter().map(decode_coords).collect();
    let leaf_ball: Vec<(f64, [f64; 2])> = coords
        .iter()
        .map(|c| {
            let centroid = centroid_of(c.iter());
            (radius_about(centroid, c.iter()), centroid)
        })
        .collect();
    let adjacency: Vec<Vec<usize>> = (0..market.len())
        .into_par_iter()
        .map(|q| tree.neighbors_of(q, &leaf_ball, &coords, delta))
        .collect();
    Ok(DatasetGraph::from_adjacency(delta, adjacency))
}
