//! Random graph models used by benchmarks and tests.

use rand::Rng;

use crate::graph::Graph;

/// Erdős–Rényi G(n, p) with `p = mean_degree / (n - 1)`, sampled in
/// O(n + m) by geometric skipping over the lower-triangle pair sequence.
pub fn erdos_renyi<R: Rng + ?Sized>(n: usize, mean_degree: f64, rng: &mut R) -> Graph {
    let mut edges = Vec::new();
    if n >= 2 {
        let p = (mean_degree / (n - 1) as f64).clamp(0.0, 1.0);
        if p >= 1.0 {
            for v in 1..n {
                edges.extend((0..v).map(|w| (v, w)));
            }
        } else if p > 0.0 {
            let log_q = (1.0 - p).ln();
            let (mut v, mut w) = (1usize, -1i64);
            while v < n {
                let r: f64 = rng.random();
                w += 1 + ((1.0 - r).ln() / log_q).floor() as i64;
                while v < n && w >= v as i64 {
                    w -= v as i64;
                    v += 1;
                }
                if v < n {
                    edges.push((v, w as usize));
                }
            }
        }
    }
    Graph::from_edges(n, edges).expect("generated indices are in range")
}

/// Barabási–Albert preferential attachment: each new node links to `m`
/// distinct existing nodes chosen proportionally to degree. Seeded with a
/// star on `m + 1` nodes.
pub fn barabasi_albert<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R) -> Graph {
    let m = m.max(1);
    if n <= m + 1 {
        return Graph::from_edges(n, (1..n).map(|v| (0, v))).expect("in range");
    }
    let mut edges = Vec::with_capacity(n * m);
    let mut ends: Vec<usize> = Vec::with_capacity(2 * n * m);
    for v in 1..=m {
        edges.push((0, v));
        ends.extend([0, v]);
    }
    let mut targets = Vec::with_capacity(m);
    for v in (m + 1)..n {
        targets.clear();
        while targets.len() < m {
            let t = ends[rng.random_range(0..ends.len())];
            if !targets.contains(&t) {
                targets.push(t);
            }
        }
        for &t in &targets {
            edges.push((v, t));
            ends.extend([v, t]);
        }
    }
    Graph::from_edges(n, edges).expect("in range")
}
