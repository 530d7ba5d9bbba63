//! One spectral bisection step.
//!
//! The Fiedler approximation splits the nodes by sign. The edges crossing the
//! split form the cut `E*`, their endpoints the boundary `V*`, and a weighted
//! vertex cover of `(V*, E*)` picks the nodes that are actually removed.

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::scalar::Scalar;
use crate::spectral::{power_iteration_with_rng, NodeWeights, SpectralConfig, WeightedLaplacian};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    /// `v_i ≥ 0`
    Upper,
    /// `v_i < 0`
    Lower,
}

/// How the cut edges are turned into removed nodes.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum CoverStrategy {
    /// Local-ratio weighted vertex cover of the cut, then redundancy pruning.
    #[default]
    WeightedVertexCover,
    /// Every boundary node on the upper side.
    UpperBoundary,
}

/// Sign split of `v`. Falls back to a median split when one side would be
/// empty: the `⌈n/2⌉` smallest entries (ties by index) go to the lower side.
pub fn sign_split<T: Scalar>(v: &[T]) -> Result<Vec<Side>> {
    let n = v.len();
    if n < 2 {
        return Err(Error::TooFewNodes { needed: 2, got: n });
    }
    let sides: Vec<Side> = v
        .iter()
        .map(|&x| if x >= T::zero() { Side::Upper } else { Side::Lower })
        .collect();
    let upper = sides.iter().filter(|&&s| s == Side::Upper).count();
    if upper != 0 && upper != n {
        return Ok(sides);
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| v[a].partial_cmp(&v[b]).unwrap_or(std::cmp::Ordering::Equal).then(a.cmp(&b)));
    let mut sides = vec![Side::Upper; n];
    for &i in &order[..n.div_ceil(2)] {
        sides[i] = Side::Lower;
    }
    Ok(sides)
}

/// Cut edges in lexicographic order and their sorted endpoint set.
pub fn separating_edges(g: &Graph, sides: &[Side]) -> Result<(Vec<(usize, usize)>, Vec<usize>)> {
    if sides.len() != g.node_count() {
        return Err(Error::LengthMismatch {
            expected: g.node_count(),
            got: sides.len(),
        });
    }
    let cut: Vec<(usize, usize)> = g.edges().filter(|&(u, v)| sides[u] != sides[v]).collect();
    let mut boundary: Vec<usize> = cut.iter().flat_map(|&(u, v)| [u, v]).collect();
    boundary.sort_unstable();
    boundary.dedup();
    Ok((cut, boundary))
}

#[derive(Debug, Clone, PartialEq)]
pub struct VertexCover<T> {
    /// Sorted node indices.
    pub nodes: Vec<usize>,
    pub cost: T,
}

/// Bar-Yehuda–Even local-ratio cover, a 2-approximation of the minimum
/// weight vertex cover of `edges`.
///
/// Edges are visited in lexicographic `(min, max)` order. An uncovered edge
/// lowers both endpoint residuals by the smaller of the two; endpoints that
/// reach zero join the cover. Afterwards cover nodes are dropped, heaviest
/// first and higher index first among equals, whenever every edge stays
/// covered without them.
pub fn weighted_vertex_cover<T: Scalar>(edges: &[(usize, usize)], weights: &[T]) -> Result<VertexCover<T>> {
    cover_with_priority(edges, weights, |_| 0)
}

/// As [`weighted_vertex_cover`], but among equally heavy redundant nodes the
/// one with lower `keep_priority` is pruned first.
fn cover_with_priority<T: Scalar>(
    edges: &[(usize, usize)],
    weights: &[T],
    keep_priority: impl Fn(usize) -> usize,
) -> Result<VertexCover<T>> {
    let mut order: Vec<(usize, usize)> = edges.iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
    order.sort_unstable();
    order.dedup();

    if let Some(&(_, node)) = order.iter().find(|&&(_, v)| v >= weights.len()) {
        return Err(Error::NodeOutOfRange {
            node,
            n: weights.len(),
        });
    }
    let mut is_touched = vec![false; weights.len()];
    for &(u, v) in &order {
        is_touched[u] = true;
        is_touched[v] = true;
    }
    let touched: Vec<usize> = (0..weights.len()).filter(|&i| is_touched[i]).collect();
    for &node in &touched {
        let w = weights[node];
        if !(w.is_finite() && w >= T::zero()) {
            return Err(Error::InvalidWeight {
                node,
                weight: w.to_f64_lossy(),
            });
        }
    }

    let mut slot_of = vec![usize::MAX; weights.len()];
    for (s, &node) in touched.iter().enumerate() {
        slot_of[node] = s;
    }
    let slots: Vec<(usize, usize)> = order.iter().map(|&(u, v)| (slot_of[u], slot_of[v])).collect();
    let mut residual: Vec<T> = touched.iter().map(|&i| weights[i]).collect();
    let mut in_cover = vec![false; touched.len()];
    for &(a, b) in &slots {
        if in_cover[a] || in_cover[b] {
            continue;
        }
        let m = residual[a].min(residual[b]);
        residual[a] -= m;
        residual[b] -= m;
        if residual[a] <= T::zero() {
            in_cover[a] = true;
        }
        if residual[b] <= T::zero() {
            in_cover[b] = true;
        }
    }

    // Pruning: a cover node is redundant when all its cut neighbors are covered.
    let mut start = vec![0usize; touched.len() + 1];
    for &(a, b) in &slots {
        start[a + 1] += 1;
        start[b + 1] += 1;
    }
    for s in 0..touched.len() {
        start[s + 1] += start[s];
    }
    let mut fill = start.clone();
    let mut incident = vec![0usize; start[touched.len()]];
    for &(a, b) in &slots {
        incident[fill[a]] = b;
        fill[a] += 1;
        incident[fill[b]] = a;
        fill[b] += 1;
    }
    let mut candidates: Vec<usize> = (0..touched.len()).filter(|&s| in_cover[s]).collect();
    candidates.sort_by(|&a, &b| {
        weights[touched[b]]
            .partial_cmp(&weights[touched[a]])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(keep_priority(touched[a]).cmp(&keep_priority(touched[b])))
            .then(touched[b].cmp(&touched[a]))
    });
    for s in candidates {
        if incident[start[s]..start[s + 1]].iter().all(|&t| in_cover[t]) {
            in_cover[s] = false;
        }
    }

    let nodes: Vec<usize> = touched
        .iter()
        .zip(&in_cover)
        .filter_map(|(&node, &c)| c.then_some(node))
        .collect();
    let cost = nodes.iter().map(|&i| weights[i]).sum();
    Ok(VertexCover { nodes, cost })
}

#[derive(Debug, Clone, PartialEq)]
pub struct BisectionResult<T> {
    pub sides: Vec<Side>,
    pub separating_edges: Vec<(usize, usize)>,
    pub boundary_nodes: Vec<usize>,
    /// Sorted nodes to remove, a subset of the boundary.
    pub removal_cover: Vec<usize>,
    pub cover_cost: T,
    pub rayleigh: T,
}

/// Bisects a connected graph with at least two nodes. `weights` serve both as
/// the diagonal of the spectral weight matrix and as vertex-cover weights.
/// When pruning the cover, equally heavy nodes of higher degree are kept.
pub fn bisect<T: Scalar, R: Rng + ?Sized>(
    g: &Graph,
    weights: &NodeWeights<T>,
    cfg: &SpectralConfig,
    strategy: CoverStrategy,
    rng: &mut R,
) -> Result<BisectionResult<T>> {
    let op = WeightedLaplacian::new(g, weights.clone())?;
    let fiedler = power_iteration_with_rng(&op, cfg, rng)?;
    let sides = sign_split(&fiedler.vector)?;
    let (cut, boundary) = separating_edges(g, &sides)?;
    let (removal_cover, cover_cost) = match strategy {
        CoverStrategy::WeightedVertexCover => {
            let cover = cover_with_priority(&cut, weights.as_slice(), |v| g.degree(v))?;
            (cover.nodes, cover.cost)
        }
        CoverStrategy::UpperBoundary => {
            let nodes: Vec<usize> = boundary.iter().copied().filter(|&i| sides[i] == Side::Upper).collect();
            let cost = nodes.iter().map(|&i| weights.as_slice()[i]).sum();
            (nodes, cost)
        }
    };
    Ok(BisectionResult {
        sides,
        separating_edges: cut,
        boundary_nodes: boundary,
        removal_cover,
        cover_cost,
        rayleigh: fiedler.rayleigh,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{connected_components, remove_nodes};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn brute_force_cover(edges: &[(usize, usize)], weights: &[f64]) -> f64 {
        let mut nodes: Vec<usize> = edges.iter().flat_map(|&(u, v)| [u, v]).collect();
        nodes.sort_unstable();
        nodes.dedup();
        let k = nodes.len();
        let mut best = f64::INFINITY;
        for mask in 0u32..(1 << k) {
            let chosen = |x: usize| mask >> nodes.binary_search(&x).unwrap() & 1 == 1;
            if edges.iter().all(|&(u, v)| chosen(u) || chosen(v)) {
                let cost: f64 = (0..k).filter(|&i| mask >> i & 1 == 1).map(|i| weights[nodes[i]]).sum();
                best = best.min(cost);
            }
        }
        if k == 0 {
            0.0
        } else {
            best
        }
    }

    #[test]
    fn sign_split_examples() {
        use Side::*;
        assert_eq!(sign_split(&[0.7, 0.01, -0.7]).unwrap(), vec![Upper, Upper, Lower]);
        assert_eq!(sign_split(&[0.1, 0.2, 0.3]).unwrap(), vec![Lower, Lower, Upper]);
        assert_eq!(sign_split(&[1.0, -1.0]).unwrap(), vec![Upper, Lower]);
        assert_eq!(sign_split(&[0.0, 0.0]).unwrap(), vec![Lower, Upper]);
        assert!(sign_split(&[1.0]).is_err());
    }

    #[test]
    fn separating_edges_examples() {
        use Side::*;
        let p3 = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let (cut, boundary) = separating_edges(&p3, &[Upper, Upper, Lower]).unwrap();
        assert_eq!(cut, vec![(1, 2)]);
        assert_eq!(boundary, vec![1, 2]);
        let (cut, boundary) = separating_edges(&p3, &[Upper; 3]).unwrap();
        assert!(cut.is_empty() && boundary.is_empty());
        let k2 = Graph::from_edges(2, [(0, 1)]).unwrap();
        let (cut, boundary) = separating_edges(&k2, &[Upper, Lower]).unwrap();
        assert_eq!(cut, vec![(0, 1)]);
        assert_eq!(boundary, vec![0, 1]);
    }

    #[test]
    fn cover_examples() {
        let c = weighted_vertex_cover(&[(0, 1)], &[3.0, 1.0]).unwrap();
        assert_eq!((c.nodes, c.cost), (vec![1], 1.0));
        assert_eq!(brute_force_cover(&[(0, 1)], &[3.0, 1.0]), 1.0);

        let path = [(0, 1), (1, 2)];
        let c = weighted_vertex_cover(&path, &[5.0, 1.0, 5.0]).unwrap();
        assert_eq!((c.nodes, c.cost), (vec![1], 1.0));
        assert_eq!(brute_force_cover(&path, &[5.0, 1.0, 5.0]), 1.0);

        let tri = [(0, 1), (1, 2), (0, 2)];
        let c = weighted_vertex_cover(&tri, &[1.0; 3]).unwrap();
        assert_eq!(c.cost, 2.0);
        assert_eq!(c.nodes.len(), 2);
        assert_eq!(brute_force_cover(&tri, &[1.0; 3]), 2.0);
    }

    #[test]
    fn cover_rejects_negative_weight() {
        assert!(matches!(
            weighted_vertex_cover(&[(0, 1)], &[1.0, -1.0]),
            Err(Error::InvalidWeight { node: 1, .. })
        ));
    }

    #[test]
    fn simultaneous_zero_keeps_lower_id() {
        let c = weighted_vertex_cover(&[(2, 3)], &[0.0, 0.0, 3.0, 3.0]).unwrap();
        assert_eq!(c.nodes, vec![2]);
    }

    fn bridged_triangles() -> Graph {
        Graph::from_edges(6, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (4, 5), (3, 5)]).unwrap()
    }

    #[test]
    fn bisect_bridged_triangles() {
        let g = bridged_triangles();
        let w = NodeWeights::<f64>::degrees(&g);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let r = bisect(&g, &w, &SpectralConfig::default(), CoverStrategy::default(), &mut rng).unwrap();
        assert_eq!(r.separating_edges, vec![(2, 3)]);
        assert_eq!(r.boundary_nodes, vec![2, 3]);
        assert_eq!(r.removal_cover, vec![2]);
        assert_eq!(r.cover_cost, 3.0);
    }

    #[test]
    fn bisect_k2_and_p4() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let k2 = Graph::from_edges(2, [(0, 1)]).unwrap();
        let r = bisect(&k2, &NodeWeights::<f64>::degrees(&k2), &SpectralConfig::default(), CoverStrategy::default(), &mut rng).unwrap();
        assert_eq!(r.removal_cover.len(), 1);

        let p4 = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        let r = bisect(&p4, &NodeWeights::<f64>::degrees(&p4), &SpectralConfig::default(), CoverStrategy::default(), &mut rng).unwrap();
        assert_eq!(r.separating_edges, vec![(1, 2)]);
        assert_eq!(r.removal_cover, vec![1]);
    }

    #[test]
    fn naive_strategy_takes_upper_boundary() {
        let g = bridged_triangles();
        let w = NodeWeights::<f64>::degrees(&g);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let r = bisect(&g, &w, &SpectralConfig::default(), CoverStrategy::UpperBoundary, &mut rng).unwrap();
        assert_eq!(r.removal_cover.len(), 1);
        assert_eq!(r.sides[r.removal_cover[0]], Side::Upper);
    }

    fn arb_connected(max_n: usize) -> impl Strategy<Value = Graph> {
        (2..=max_n).prop_flat_map(|n| {
            (prop::collection::vec(0..n, n - 1), prop::collection::vec((0..n, 0..n), 0..2 * n)).prop_map(move |(parents, extra)| {
                // Random spanning tree plus extra edges.
                let tree = (1..n).map(|v| (v, parents[v - 1] % v));
                Graph::from_edges(n, tree.chain(extra)).unwrap()
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn bisection_invariants(g in arb_connected(40), seed in any::<u64>()) {
            let w = NodeWeights::<f64>::degrees(&g);
            let cfg = SpectralConfig { seed, ..SpectralConfig::default() };
            let run = |s| bisect(&g, &w, &cfg, CoverStrategy::default(), &mut ChaCha8Rng::seed_from_u64(s)).unwrap();
            let r = run(seed);
            prop_assert_eq!(&r, &run(seed));
            prop_assert!(!r.separating_edges.is_empty());
            for &(u, v) in &r.separating_edges {
                prop_assert!(r.removal_cover.contains(&u) || r.removal_cover.contains(&v));
            }
            for node in &r.removal_cover {
                prop_assert!(r.boundary_nodes.contains(node));
            }
            // No remaining path between the two sides.
            let rest = remove_nodes(&g, &r.removal_cover).unwrap();
            let labels = connected_components(&rest).labels;
            let kept: Vec<usize> = (0..g.node_count()).filter(|i| !r.removal_cover.contains(i)).collect();
            for (a, &pa) in kept.iter().enumerate() {
                for (b, &pb) in kept.iter().enumerate() {
                    if r.sides[pa] != r.sides[pb] {
                        prop_assert_ne!(labels[a], labels[b]);
                    }
                }
            }
        }

        #[test]
        fn cover_is_complete_and_two_approximate(
            raw in prop::collection::vec((0usize..12, 0usize..12), 1..30),
            ws in prop::collection::vec(0.0f64..10.0, 12),
        ) {
            let edges: Vec<_> = raw.into_iter().filter(|(u, v)| u != v).collect();
            let c = weighted_vertex_cover(&edges, &ws).unwrap();
            for &(u, v) in &edges {
                prop_assert!(c.nodes.contains(&u) || c.nodes.contains(&v));
            }
            prop_assert!(c.cost <= 2.0 * brute_force_cover(&edges, &ws) + 1e-9);
        }
    }
}
