mod common;

use std::collections::BTreeSet;

use bmcc_core::graph::build_graph_naive;
use bmcc_core::solvers::{dsa_rounds, solve, verify_solution, SolveOptions};
use bmcc_core::{
    build_graph_indexed, coverage_of_union, dataset_distance, decode_cell, encode_cell, rasterize,
    Algorithm, BallTree, Bounds, CellBasedDataset, GridConfig, PointDataset, Price,
    PricingFunction,
};
use proptest::prelude::*;

fn market_strategy(max_n: usize) -> impl Strategy<Value = (u64, usize, bool)> {
    (any::<u64>(), 1..=max_n, any::<bool>())
}

#[test]
fn encode_decode_exhaustive_small_theta() {
    for theta in 1..=6u32 {
        let side = 1u32 << theta;
        let mut seen = vec![false; (side * side) as usize];
        for x in 0..side {
            for y in 0..side {
                let id = encode_cell(x, y, theta).unwrap();
                assert!(!std::mem::replace(&mut seen[id as usize], true));
                assert_eq!(decode_cell(id, theta).unwrap(), (x, y));
            }
        }
    }
}

proptest! {
    #[test]
    fn encode_decode_round_trip(theta in 1u32..=31, x in any::<u32>(), y in any::<u32>()) {
        let mask = ((1u64 << theta) - 1) as u32;
        let (x, y) = (x & mask, y & mask);
        let id = encode_cell(x, y, theta).unwrap();
        prop_assert!(id < 1u64 << (2 * theta));
        prop_assert_eq!(decode_cell(id, theta).unwrap(), (x, y));
    }

    #[test]
    fn rasterizing_cell_centres_is_idempotent(
        theta in 1u32..=8,
        raw in prop::collection::vec(any::<u64>(), 1..40),
    ) {
        let limit = 1u64 << (2 * theta);
        let cells: Vec<u64> = raw.iter().map(|c| c % limit).collect();
        let d = CellBasedDataset::new("d", theta, cells).unwrap();
        let grid = GridConfig::new(theta, -3.0, 7.5, 0.25, 2.0).unwrap();
        let points = d
            .coordinates()
            .iter()
            .map(|&(x, y)| {
                (
                    grid.origin_x + (x as f64 + 0.5) * grid.cell_width,
                    grid.origin_y + (y as f64 + 0.5) * grid.cell_height,
                )
            })
            .collect();
        let again = rasterize(&PointDataset::new("d", points).unwrap(), &grid).unwrap();
        prop_assert_eq!(again.cells(), d.cells());
    }

    #[test]
    fn finer_grids_never_lose_coverage(
        points in prop::collection::vec((0.0f64..=1024.0, 0.0f64..=1024.0), 1..60),
        theta in 1u32..=12,
    ) {
        let bounds = Bounds { min_x: 0.0, min_y: 0.0, max_x: 1024.0, max_y: 1024.0 };
        let d = PointDataset::new("p", points).unwrap();
        let coarse = rasterize(&d, &GridConfig::from_bounds(theta, &bounds).unwrap()).unwrap();
        let fine = rasterize(&d, &GridConfig::from_bounds(theta + 1, &bounds).unwrap()).unwrap();
        prop_assert!(fine.coverage() >= coarse.coverage());
    }

    #[test]
    fn union_is_order_insensitive(
        sets in prop::collection::vec(prop::collection::vec(0u64..64, 1..10), 1..6),
    ) {
        let ds: Vec<_> = sets
            .iter()
            .map(|s| CellBasedDataset::new("x", 3, s.clone()).unwrap())
            .collect();
        let expected: BTreeSet<u64> = sets.iter().flatten().copied().collect();
        prop_assert_eq!(coverage_of_union(ds.iter()), expected.len());
        prop_assert_eq!(coverage_of_union(ds.iter().rev()), expected.len());
        prop_assert_eq!(coverage_of_union([&ds[0]]), ds[0].cells().len());
    }

    #[test]
    fn marketplace_price_invariants((seed, n, explicit) in market_strategy(30), b1 in 0i64..3000, b2 in 0i64..3000) {
        let m = common::random_market(&mut common::rng(seed), n, 5, explicit);
        for i in 0..m.len() {
            let p = m.price_of(i);
            prop_assert!(m.min_price() <= p && p <= m.max_price());
            if !explicit {
                prop_assert_eq!(p, Price::from_units(m.dataset(i).coverage() as i64));
            }
        }
        let (lo, hi) = (b1.min(b2), b1.max(b2));
        let small = m.affordable_subset(Price::from_cents(lo));
        let large: BTreeSet<_> = m.affordable_subset(Price::from_cents(hi)).into_iter().collect();
        prop_assert!(small.iter().all(|i| large.contains(i)));
    }

    #[test]
    fn distance_is_symmetric_with_zero_law(
        a in prop::collection::vec(0u64..256, 1..12),
        b in prop::collection::vec(0u64..256, 1..12),
    ) {
        let da = CellBasedDataset::new("a", 4, a.clone()).unwrap();
        let db = CellBasedDataset::new("b", 4, b.clone()).unwrap();
        let ab = dataset_distance(&da, &db).unwrap();
        prop_assert_eq!(ab, dataset_distance(&db, &da).unwrap());
        let intersect = a.iter().any(|c| b.contains(c));
        prop_assert_eq!(ab == 0.0, intersect);
    }

    #[test]
    fn indexed_graph_equals_naive((seed, n, _) in market_strategy(80), delta in 0.0f64..12.0) {
        let m = common::random_market(&mut common::rng(seed), n, 5, false);
        let tree = BallTree::build(&m).unwrap();
        prop_assert_eq!(
            build_graph_indexed(&m, delta, &tree).unwrap().edges(),
            build_graph_naive(&m, delta).unwrap().edges()
        );
    }

    #[test]
    fn larger_delta_keeps_every_edge((seed, n, _) in market_strategy(40), d1 in 0.0f64..10.0, extra in 0.0f64..10.0) {
        let m = common::random_market(&mut common::rng(seed), n, 5, false);
        let small = build_graph_naive(&m, d1).unwrap();
        let large = build_graph_naive(&m, d1 + extra).unwrap();
        prop_assert!(small.edges().iter().all(|&(a, b)| large.has_edge(a, b)));
        prop_assert!(small.stats().components >= large.stats().components);
    }

    #[test]
    fn solvers_are_feasible_dominated_and_deterministic(
        (seed, n, explicit) in market_strategy(10),
        delta in 0.0f64..6.0,
        budget_cents in 1i64..6000,
    ) {
        let m = common::random_market(&mut common::rng(seed), n, 4, explicit);
        let g = build_graph_naive(&m, delta).unwrap();
        let b = Price::from_cents(budget_cents);
        let opts = SolveOptions::default();
        let opt = solve(Algorithm::Exact, &m, &g, b, &opts).unwrap();
        for a in Algorithm::ALL {
            let s = solve(a, &m, &g, b, &opts).unwrap();
            let report = verify_solution(&m, &g, &s, b).unwrap();
            prop_assert!(report.passed(), "{} failed {:?}", a, report);
            prop_assert!(s.coverage <= opt.coverage, "{} beat the optimum", a);
            prop_assert_eq!(&s, &solve(a, &m, &g, b, &opts).unwrap());
        }
        let rounds = dsa_rounds(&m, &g, b);
        if let Some(r) = rounds.solution.rounds {
            prop_assert_eq!(rounds.solution.coverage, r.ratio.max(r.coverage));
        }
    }
}

#[test]
fn usage_pricing_equals_coverage_catalog_wide() {
    let m = common::random_market(&mut common::rng(3), 50, 6, false);
    assert_eq!(m.pricing(), &PricingFunction::UsageBased);
    let total: i64 = m.datasets().iter().map(|d| d.coverage() as i64).sum();
    assert_eq!(m.total_price(), Price::from_units(total));
}
