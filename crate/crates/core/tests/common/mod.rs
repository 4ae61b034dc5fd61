#![allow(dead_code)]

use std::collections::BTreeMap;

use bmcc_core::{CellBasedDataset, DatasetGraph, GridConfig, Marketplace, Price, PricingFunction};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Market of `n` small blobs on a `2^theta` grid, with either usage prices
/// or random explicit prices in whole cents.
pub fn random_market(
    rng: &mut impl Rng,
    n: usize,
    theta: u32,
    explicit_prices: bool,
) -> Marketplace {
    let side = 1u32 << theta;
    let mut datasets = Vec::with_capacity(n);
    for i in 0..n {
        let cx = rng.random_range(0..side);
        let cy = rng.random_range(0..side);
        let count = rng.random_range(1..=8);
        let cells = (0..count)
            .map(|_| {
                let x = (cx + rng.random_range(0..3)).min(side - 1);
                let y = (cy + rng.random_range(0..3)).min(side - 1);
                bmcc_core::encode_cell(x, y, theta).unwrap()
            })
            .collect();
        datasets.push(CellBasedDataset::new(format!("d{i:03}"), theta, cells).unwrap());
    }
    let pricing = if explicit_prices {
        PricingFunction::ExplicitTable(
            datasets
                .iter()
                .map(|d| (d.id.clone(), Price::from_cents(rng.random_range(50..=900))))
                .collect::<BTreeMap<_, _>>(),
        )
    } else {
        PricingFunction::UsageBased
    };
    Marketplace::new(
        GridConfig::new(theta, 0.0, 0.0, 1.0, 1.0).unwrap(),
        datasets,
        pricing,
    )
    .unwrap()
}

/// Uniform random labelled tree built by attaching each node to an earlier one,
/// then relabelled by a random permutation.
pub fn random_tree(rng: &mut impl Rng, n: usize) -> DatasetGraph {
    let mut labels: Vec<usize> = (0..n).collect();
    labels.shuffle(rng);
    let edges: Vec<_> = (1..n)
        .map(|i| (labels[i], labels[rng.random_range(0..i)]))
        .collect();
    DatasetGraph::from_edges(n, 1.0, edges).unwrap()
}

pub fn random_graph(rng: &mut impl Rng, n: usize, p: f64) -> DatasetGraph {
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.random_bool(p) {
                edges.push((a, b));
            }
        }
    }
    DatasetGraph::from_edges(n, 1.0, edges).unwrap()
}

/// Market with one cell per node and unit prices, for graph-only tests.
pub fn unit_market(n: usize, theta: u32) -> Marketplace {
    let datasets = (0..n)
        .map(|i| CellBasedDataset::new(format!("n{i:04}"), theta, vec![i as u64]).unwrap())
        .collect();
    Marketplace::new(
        GridConfig::new(theta, 0.0, 0.0, 1.0, 1.0).unwrap(),
        datasets,
        PricingFunction::UsageBased,
    )
    .unwrap()
}

/// Explicitly priced market from `(id, price in units, cells)` triples.
pub fn priced_market(theta: u32, specs: &[(&str, i64, Vec<u64>)]) -> Marketplace {
    let datasets = specs
        .iter()
        .map(|(id, _, cells)| CellBasedDataset::new(*id, theta, cells.clone()).unwrap())
        .collect();
    let table = specs
        .iter()
        .map(|(id, p, _)| (id.to_string(), Price::from_units(*p)))
        .collect();
    Marketplace::new(
        GridConfig::new(theta, 0.0, 0.0, 1.0, 1.0).unwrap(),
        datasets,
        PricingFunction::ExplicitTable(table),
    )
    .unwrap()
}
