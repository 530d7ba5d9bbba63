//! Independent oracles shared by the integration tests.

#![allow(dead_code)]

use std::collections::VecDeque;

use dismantle_core::generators::{barabasi_albert, erdos_renyi};
use dismantle_core::Graph;
use nalgebra::{DMatrix, SymmetricEigen};
use rand::Rng;

/// Dense `D_B - B` with `B_ij = w_i + w_j - 1` on edges, built straight from
/// the edge list.
pub fn dense_weighted_laplacian(g: &Graph, w: &[f64]) -> DMatrix<f64> {
    let n = g.node_count();
    let mut m = DMatrix::zeros(n, n);
    for (u, v) in g.edges() {
        let b = w[u] + w[v] - 1.0;
        m[(u, v)] -= b;
        m[(v, u)] -= b;
        m[(u, u)] += b;
        m[(v, v)] += b;
    }
    m
}

/// Combinatorial Laplacian `D - A`.
pub fn dense_laplacian(g: &Graph) -> DMatrix<f64> {
    let n = g.node_count();
    let mut m = DMatrix::zeros(n, n);
    for (u, v) in g.edges() {
        m[(u, v)] = -1.0;
        m[(v, u)] = -1.0;
        m[(u, u)] += 1.0;
        m[(v, v)] += 1.0;
    }
    m
}

pub fn ascending_eigenvalues(m: DMatrix<f64>) -> Vec<f64> {
    let mut ev: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

pub fn is_connected(g: &Graph) -> bool {
    g.node_count() == 0 || largest_component(g, &vec![false; g.node_count()]) == g.node_count()
}

/// Largest component among nodes not flagged in `removed`, by plain BFS.
pub fn largest_component(g: &Graph, removed: &[bool]) -> usize {
    let n = g.node_count();
    let mut seen = removed.to_vec();
    let mut best = 0;
    let mut queue = VecDeque::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        queue.push_back(s);
        let mut size = 0;
        while let Some(u) = queue.pop_front() {
            size += 1;
            for &v in g.neighbors(u) {
                if !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        best = best.max(size);
    }
    best
}

pub fn largest_component_after(g: &Graph, removed: &[usize]) -> usize {
    let mut mask = vec![false; g.node_count()];
    for &v in removed {
        mask[v] = true;
    }
    largest_component(g, &mask)
}

/// Erdős–Rényi (even `i`) or Barabási–Albert (odd `i`) graph.
pub fn mixed_graph<R: Rng>(i: usize, n: usize, rng: &mut R) -> Graph {
    if i % 2 == 0 {
        let mean = rng.random_range(2.0..8.0);
        erdos_renyi(n, mean, rng)
    } else {
        let m = rng.random_range(1..=4);
        barabasi_albert(n, m, rng)
    }
}

/// Redraws until connected.
pub fn connected_mixed_graph<R: Rng>(i: usize, n: usize, rng: &mut R) -> Graph {
    loop {
        let g = mixed_graph(i, n, rng);
        if is_connected(&g) {
            return g;
        }
    }
}

/// Cheapest vertex cover of `edges` by exhaustive search over their endpoints.
pub fn brute_force_cover(edges: &[(usize, usize)], weights: &[f64]) -> f64 {
    let mut nodes: Vec<usize> = edges.iter().flat_map(|&(u, v)| [u, v]).collect();
    nodes.sort_unstable();
    nodes.dedup();
    assert!(nodes.len() <= 24, "exhaustive search over {} nodes", nodes.len());
    let masks: Vec<(u32, u32)> = edges
        .iter()
        .map(|&(u, v)| {
            let bit = |x| 1u32 << nodes.binary_search(&x).unwrap();
            (bit(u), bit(v))
        })
        .collect();
    let mut best = f64::INFINITY;
    for mask in 0u32..(1 << nodes.len()) {
        if masks.iter().all(|&(a, b)| mask & (a | b) != 0) {
            let cost: f64 = (0..nodes.len()).filter(|&i| mask >> i & 1 == 1).map(|i| weights[nodes[i]]).sum();
            best = best.min(cost);
        }
    }
    best
}
