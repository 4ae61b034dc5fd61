//! Budgeted maximum coverage with a connectivity constraint over spatial datasets.
//!
//! Point datasets are rasterized onto a `2^θ × 2^θ` grid whose cells are
//! numbered along a z-order curve. Datasets whose cell sets lie within a
//! distance threshold of each other are joined in a dataset graph, and the
//! solvers pick a connected, budget-feasible collection of datasets that
//! covers as many distinct cells as possible.
//!
//! The crate is organised bottom-up:
//!
//! * [`grid`]: z-order cell encoding and rasterization.
//! * [`price`] and [`marketplace`]: exact decimal prices and the priced catalog.
//! * [`graph`]: dataset distances, naive and ball-tree graph construction,
//!   connected components.
//! * [`solvers`]: the dual-search and dual-path-search greedy algorithms,
//!   center finding, CMC baselines, the exhaustive oracle and verification.
//! * [`catalog`]: the versioned on-disk catalog format.

pub mod catalog;
pub mod error;
pub mod graph;
pub mod grid;
pub mod marketplace;
pub mod price;
pub mod solvers;

pub use error::{Error, Result};
pub use graph::{
    ball_tree::BallTree, build_graph_indexed, build_graph_naive, connected_components,
    dataset_distance, DatasetGraph, GraphStats, Subgraph,
};
pub use grid::{
    coverage_of_union, decode_cell, encode_cell, rasterize, Bounds, CellBasedDataset, CellId,
    GridConfig, PointDataset,
};
pub use marketplace::{Marketplace, PricingFunction};
pub use price::Price;
pub use solvers::{Algorithm, Solution, SolveStatus};
