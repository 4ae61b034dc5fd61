//! Checks against independent reference implementations.

mod common;

use bmcc_core::graph::build_graph_naive;
use bmcc_core::solvers::{
    find_center_exact, find_center_two_bfs, make_reduction_instance, solve_exact,
};
use bmcc_core::{
    build_graph_indexed, connected_components, decode_cell, BallTree, DatasetGraph, Marketplace,
    Price,
};
use rand::Rng;

const INF: usize = usize::MAX / 4;

fn floyd_warshall(g: &DatasetGraph) -> Vec<Vec<usize>> {
    let n = g.node_count();
    let mut d = vec![vec![INF; n]; n];
    for (v, row) in d.iter_mut().enumerate() {
        row[v] = 0;
        for &u in g.neighbors(v) {
            row[u] = 1;
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][k] + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    d
}

fn union_find_components(n: usize, edges: &[(usize, usize)]) -> usize {
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut c = x;
        while p[c] != r {
            let next = p[c];
            p[c] = r;
            c = next;
        }
        r
    }
    let mut parent: Vec<usize> = (0..n).collect();
    let mut count = n;
    for &(a, b) in edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra] = rb;
            count -= 1;
        }
    }
    count
}

/// Pairwise Euclidean distance between cell centres, by brute force.
fn brute_force_edges(m: &Marketplace, delta: f64) -> Vec<(usize, usize)> {
    let theta = m.grid().theta;
    let coords: Vec<Vec<(f64, f64)>> = m
        .datasets()
        .iter()
        .map(|d| {
            d.cells()
                .iter()
                .map(|&c| {
                    let (x, y) = decode_cell(c, theta).unwrap();
                    (x as f64, y as f64)
                })
                .collect()
        })
        .collect();
    let mut edges = Vec::new();
    for a in 0..m.len() {
        for b in a + 1..m.len() {
            let min = coords[a]
                .iter()
                .flat_map(|p| coords[b].iter().map(move |q| (p.0 - q.0).hypot(p.1 - q.1)))
                .fold(f64::INFINITY, f64::min);
            if min <= delta {
                edges.push((a, b));
            }
        }
    }
    edges
}

#[test]
fn exact_center_matches_all_pairs_shortest_paths() {
    let mut rng = common::rng(11);
    for round in 0..60 {
        let n = rng.random_range(1..=50);
        let g = if round % 2 == 0 {
            common::random_tree(&mut rng, n)
        } else {
            common::random_graph(&mut rng, n, 0.15)
        };
        let d = floyd_warshall(&g);
        for sub in connected_components(&g) {
            let ecc: Vec<usize> = sub
                .members()
                .iter()
                .map(|&v| sub.members().iter().map(|&u| d[v][u]).max().unwrap())
                .collect();
            let radius = *ecc.iter().min().unwrap();
            let center = sub.members()[ecc.iter().position(|&e| e == radius).unwrap()];
            let c = find_center_exact(&sub);
            assert_eq!((c.center, c.radius), (center, radius));
            assert_eq!(c.eccentricities, ecc);
        }
    }
}

#[test]
fn two_bfs_is_exact_on_trees() {
    let mut rng = common::rng(12);
    for _ in 0..100 {
        let n = rng.random_range(1..=200);
        let g = common::random_tree(&mut rng, n);
        let sub = &connected_components(&g)[0];
        let exact = find_center_exact(sub);
        let t = find_center_two_bfs(sub);
        assert_eq!(t.diameter, exact.diameter());
        assert_eq!(t.radius, exact.radius);
        assert_eq!(
            exact.eccentricities[sub.local(t.center).unwrap()],
            exact.radius
        );
    }
}

#[test]
fn component_count_matches_union_find() {
    let mut rng = common::rng(13);
    for _ in 0..100 {
        let n = rng.random_range(1..=80);
        let p = rng.random_range(0.0..0.08);
        let g = common::random_graph(&mut rng, n, p);
        let comps = connected_components(&g);
        assert_eq!(comps.len(), union_find_components(n, &g.edges()));
        let mut seen: Vec<usize> = comps.iter().flat_map(|c| c.members().to_vec()).collect();
        seen.sort_unstable();
        assert_eq!(seen, (0..n).collect::<Vec<_>>());
    }
}

#[test]
fn graph_builders_match_brute_force() {
    let mut rng = common::rng(14);
    for _ in 0..20 {
        let n = rng.random_range(1..=60);
        let m = common::random_market(&mut rng, n, 5, false);
        let tree = BallTree::build(&m).unwrap();
        for delta in [0.0, 1.0, 2.5, 5.0, 10.0] {
            let expected = brute_force_edges(&m, delta);
            assert_eq!(build_graph_naive(&m, delta).unwrap().edges(), expected);
            assert_eq!(
                build_graph_indexed(&m, delta, &tree).unwrap().edges(),
                expected
            );
        }
    }
}

#[test]
fn indexed_graph_on_two_hundred_datasets() {
    let mut rng = common::rng(15);
    let m = common::random_market(&mut rng, 200, 6, false);
    let tree = BallTree::build(&m).unwrap();
    for delta in [0.0, 5.0, 10.0] {
        assert_eq!(
            build_graph_indexed(&m, delta, &tree).unwrap(),
            build_graph_naive(&m, delta).unwrap()
        );
    }
}

fn mcp_brute_force(sets: &[Vec<u64>], k: usize) -> usize {
    let mut best = 0;
    for mask in 0u32..1 << sets.len() {
        if mask.count_ones() as usize > k {
            continue;
        }
        let mut covered = std::collections::HashSet::new();
        for (i, s) in sets.iter().enumerate() {
            if mask & (1 << i) != 0 {
                covered.extend(s.iter().copied());
            }
        }
        best = best.max(covered.len());
    }
    best
}

#[test]
fn reduction_matches_maximum_coverage() {
    let mut rng = common::rng(16);
    for _ in 0..40 {
        let universe = rng.random_range(1..=40u64);
        let n = rng.random_range(1..=10);
        let sets: Vec<Vec<u64>> = (0..n)
            .map(|_| {
                let len = rng.random_range(1..=6);
                (0..len).map(|_| rng.random_range(0..universe)).collect()
            })
            .collect();
        let k = rng.random_range(1..=n);
        let inst = make_reduction_instance(universe, &sets).unwrap();
        let g = build_graph_naive(&inst.market, inst.delta).unwrap();
        assert_eq!(g.edge_count(), n * (n - 1) / 2);
        let s = solve_exact(&inst.market, &g, Price::from_units(k as i64), 15).unwrap();
        assert_eq!(s.coverage, mcp_brute_force(&sets, k));
    }
}
