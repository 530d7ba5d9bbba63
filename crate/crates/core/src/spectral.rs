//! Matrix-free node-weighted Laplacian and the shifted power iteration that
//! approximates its second-smallest eigenvector.
//!
//! With node weights `w` and adjacency `A`, the edge-cost matrix is
//! `B = AW + WA - A`, i.e. `B_ij = A_ij (w_i + w_j - 1)`, and the weighted
//! Laplacian is `L_w = D_B - B` where `D_B` holds the row sums of `B`.
//! Neither matrix is ever assembled: row `i` of `Bx` is
//! `sum_j w_j x_j + (w_i - 1) sum_j x_j` over the neighbors `j` of `i`.
//!
//! The power iteration runs on `σI - L_w`, whose dominant eigenvector is the
//! constant vector. Projecting that direction out after every product leaves
//! the eigenvector belonging to the second-smallest eigenvalue of `L_w` as
//! the dominant one.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::scalar::Scalar;

/// Non-negative per-node weights, the diagonal of `W`.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeWeights<T>(Vec<T>);

impl<T: Scalar> NodeWeights<T> {
    pub fn new(weights: Vec<T>) -> Result<Self> {
        for (node, &w) in weights.iter().enumerate() {
            if !(w.is_finite() && w >= T::zero()) {
                return Err(Error::InvalidWeight {
                    node,
                    weight: w.to_f64_lossy(),
                });
            }
        }
        Ok(Self(weights))
    }

    pub fn from_f64(weights: &[f64]) -> Result<Self> {
        Self::new(weights.iter().map(|&w| T::from_f64_lossy(w)).collect())
    }

    pub fn ones(n: usize) -> Self {
        Self(vec![T::one(); n])
    }

    pub fn degrees(g: &Graph) -> Self {
        Self(
            (0..g.node_count())
                .map(|i| T::from_usize_lossy(g.degree(i)))
                .collect(),
        )
    }

    pub fn as_slice(&self) -> &[T] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max(&self) -> T {
        self.0.iter().copied().fold(T::zero(), T::max)
    }

    /// True when every weight equals the node's degree in `g`.
    pub fn are_degrees_of(&self, g: &Graph) -> bool {
        self.0.len() == g.node_count()
            && self
                .0
                .iter()
                .enumerate()
                .all(|(i, &w)| w == T::from_usize_lossy(g.degree(i)))
    }
}

/// Which upper bound on the largest eigenvalue of `L_w` sets the shift.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShiftBound {
    /// Weights are the node degrees: `λ_n ≤ 6·d_max²`.
    DegreeWeights,
    /// Arbitrary non-negative weights: `λ_n ≤ 4·d_max·(w_max + 1)`.
    GeneralWeights,
}

impl ShiftBound {
    pub fn detect<T: Scalar>(g: &Graph, w: &NodeWeights<T>) -> Self {
        if w.are_degrees_of(g) {
            ShiftBound::DegreeWeights
        } else {
            ShiftBound::GeneralWeights
        }
    }
}

/// Shift `σ` with `σ ≥ λ_n`. Floors at 1 for edgeless graphs.
pub fn shift_constant<T: Scalar>(g: &Graph, w: &NodeWeights<T>, bound: ShiftBound) -> T {
    let d_max = T::from_usize_lossy(g.max_degree());
    let sigma = match bound {
        ShiftBound::DegreeWeights => T::from_f64_lossy(6.0) * d_max * d_max,
        ShiftBound::GeneralWeights => T::from_f64_lossy(4.0) * d_max * (w.max() + T::one()),
    };
    sigma.max(T::one())
}

#[derive(Debug, Clone)]
pub struct WeightedLaplacian<'g, T> {
    graph: &'g Graph,
    // Adjacency with per-entry coefficients `w_i + w_j - 1` for the hot loop.
    row_start: Vec<usize>,
    cols: Vec<u32>,
    coeffs: Coefficients<T>,
    weights: Vec<T>,
    d_b: Vec<T>,
    sigma: T,
}

impl<'g, T: Scalar> WeightedLaplacian<'g, T> {
    /// Operator with the shift chosen by [`ShiftBound::detect`].
    pub fn new(graph: &'g Graph, weights: NodeWeights<T>) -> Result<Self> {
        let bound = ShiftBound::detect(graph, &weights);
        Self::with_bound(graph, weights, bound)
    }

    pub fn with_bound(graph: &'g Graph, weights: NodeWeights<T>, bound: ShiftBound) -> Result<Self> {
        if weights.len() != graph.node_count() {
            return Err(Error::LengthMismatch {
                expected: graph.node_count(),
                got: weights.len(),
            });
        }
        let sigma = shift_constant(graph, &weights, bound);
        Ok(Self::with_sigma(graph, weights, sigma))
    }

    pub fn with_sigma(graph: &'g Graph, weights: NodeWeights<T>, sigma: T) -> Self {
        assert_eq!(weights.len(), graph.node_count());
        let w = weights.0;
        let d_b = (0..graph.node_count())
            .map(|i| {
                let nbr: T = graph.neighbors(i).iter().map(|&j| w[j]).sum();
                nbr + (w[i] - T::one()) * T::from_usize_lossy(graph.degree(i))
            })
            .collect();
        let mut row_start = Vec::with_capacity(graph.node_count() + 1);
        let mut cols = Vec::with_capacity(2 * graph.edge_count());
        let mut coeffs = Vec::with_capacity(2 * graph.edge_count());
        row_start.push(0);
        for i in 0..graph.node_count() {
            for &j in graph.neighbors(i) {
                cols.push(u32::try_from(j).expect("node index fits in u32"));
                coeffs.push(w[i] + w[j] - T::one());
            }
            row_start.push(cols.len());
        }
        let coeffs = Coefficients::new(coeffs);
        Self {
            graph,
            row_start,
            cols,
            coeffs,
            weights: w,
            d_b,
            sigma,
        }
    }

    pub fn graph(&self) -> &Graph {
        self.graph
    }

    pub fn node_count(&self) -> usize {
        self.graph.node_count()
    }

    pub fn sigma(&self) -> T {
        self.sigma
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    /// Diagonal of `D_B`.
    pub fn d_b(&self) -> &[T] {
        &self.d_b
    }

    fn check_len(&self, x: &[T]) -> Result<()> {
        if x.len() == self.node_count() {
            Ok(())
        } else {
            Err(Error::LengthMismatch {
                expected: self.node_count(),
                got: x.len(),
            })
        }
    }

    #[inline]
    fn b_row(&self, i: usize, x: &[T]) -> T {
        let mut weighted = T::zero();
        let mut plain = T::zero();
        for &j in self.graph.neighbors(i) {
            weighted += self.weights[j] * x[j];
            plain += x[j];
        }
        weighted + (self.weights[i] - T::one()) * plain
    }

    pub fn apply_b(&self, x: &[T]) -> Result<Vec<T>> {
        self.check_len(x)?;
        Ok((0..x.len()).map(|i| self.b_row(i, x)).collect())
    }

    pub fn apply_lw(&self, x: &[T]) -> Result<Vec<T>> {
        self.check_len(x)?;
        Ok((0..x.len())
            .map(|i| self.d_b[i] * x[i] - self.b_row(i, x))
            .collect())
    }

    /// `out = (σI - L_w) x`.
    fn apply_shifted_into(&self, x: &[T], out: &mut [T]) -> StepSums<T> {
        match &self.coeffs {
            Coefficients::Narrow(c) => self.shifted_rows(x, out, c, |&c| T::from_f64_lossy(f64::from(c))),
            Coefficients::Full(c) => self.shifted_rows(x, out, c, |&c| c),
        }
    }

    #[inline(always)]
    fn shifted_rows<C>(&self, x: &[T], out: &mut [T], coeffs: &[C], widen: impl Fn(&C) -> T) -> StepSums<T> {
        let mut sums = StepSums::default();
        for (i, o) in out.iter_mut().enumerate() {
            let row = self.row_start[i]..self.row_start[i + 1];
            let bx: T = self.cols[row.clone()]
                .iter()
                .zip(&coeffs[row])
                .map(|(&j, c)| widen(c) * x[j as usize])
                .sum();
            let y = (self.sigma - self.d_b[i]) * x[i] + bx;
            *o = y;
            sums.total += y;
            sums.squares += y * y;
            sums.with_input += x[i] * y;
        }
        sums
    }

    pub fn apply_shifted(&self, x: &[T]) -> Result<Vec<T>> {
        self.check_len(x)?;
        let mut out = vec![T::zero(); x.len()];
        self.apply_shifted_into(x, &mut out);
        Ok(out)
    }

    /// `xᵀ L_w x / xᵀ x`.
    pub fn rayleigh_quotient(&self, x: &[T]) -> Result<T> {
        let lx = self.apply_lw(x)?;
        let den = dot(x, x);
        if den == T::zero() {
            return Err(Error::ZeroVector(0));
        }
        Ok(dot(x, &lx) / den)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralConfig {
    /// Slack in the iteration budget `⌈ln(n)^(1+ε)⌉`.
    pub epsilon: f64,
    pub min_iterations: usize,
    /// Stop once successive Rayleigh quotients differ by less than
    /// [`EARLY_EXIT_TOLERANCE`].
    pub early_exit: bool,
    pub seed: u64,
}

pub const EARLY_EXIT_TOLERANCE: f64 = 1e-10;
const MAX_RETRIES: usize = 5;

impl Default for SpectralConfig {
    fn default() -> Self {
        Self {
            epsilon: 1.0,
            min_iterations: 100,
            early_exit: false,
            seed: 0,
        }
    }
}

impl SpectralConfig {
    pub fn iterations(&self, n: usize) -> usize {
        let ln = (n.max(1) as f64).ln();
        let budget = ln.powf(1.0 + self.epsilon).ceil() as usize;
        budget.max(self.min_iterations)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FiedlerApproximation<T> {
    /// Unit vector orthogonal to the all-ones vector.
    pub vector: Vec<T>,
    pub rayleigh: T,
    pub iterations: usize,
}

/// Power iteration seeded from `cfg.seed`.
pub fn power_iteration<T: Scalar>(
    op: &WeightedLaplacian<'_, T>,
    cfg: &SpectralConfig,
) -> Result<FiedlerApproximation<T>> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    power_iteration_with_rng(op, cfg, &mut rng)
}

/// Power iteration drawing its start vector from `rng`, for callers that run
/// many bisections off one stream.
pub fn power_iteration_with_rng<T: Scalar, R: Rng + ?Sized>(
    op: &WeightedLaplacian<'_, T>,
    cfg: &SpectralConfig,
    rng: &mut R,
) -> Result<FiedlerApproximation<T>> {
    let n = op.node_count();
    if n < 2 {
        return Err(Error::TooFewNodes { needed: 2, got: n });
    }
    let budget = cfg.iterations(n);
    let tol = T::from_f64_lossy(EARLY_EXIT_TOLERANCE);
    let n_t = T::from_usize_lossy(n);
    let mut next = vec![T::zero(); n];

    'draw: for _ in 0..=MAX_RETRIES {
        // Normalized Gaussian samples are uniform on the sphere.
        let mut v: Vec<T> = (0..n)
            .map(|_| T::from_f64_lossy(rng.sample::<f64, _>(StandardNormal)))
            .collect();
        let mean = v.iter().copied().sum::<T>() / T::from_usize_lossy(n);
        v.iter_mut().for_each(|x| *x -= mean);
        if !normalize(&mut v) {
            continue;
        }

        let mut iterations = 0;
        let mut previous = T::infinity();
        while iterations < budget {
            let sums = op.apply_shifted_into(&v, &mut next);
            // v is unit and orthogonal to the ones vector, so vᵀ(σI - L_w)v = σ - vᵀL_w v.
            let rayleigh = op.sigma - sums.with_input;
            let mean = sums.total / n_t;
            let norm = (sums.squares - n_t * mean * mean).sqrt();
            if norm <= T::zero() || !norm.is_finite() {
                continue 'draw;
            }
            next.iter_mut().for_each(|x| *x = (*x - mean) / norm);
            std::mem::swap(&mut v, &mut next);
            iterations += 1;
            if cfg.early_exit && (rayleigh - previous).abs() < tol {
                break;
            }
            previous = rayleigh;
        }

        let rayleigh = op.rayleigh_quotient(&v)?;
        return Ok(FiedlerApproximation {
            vector: v,
            rayleigh,
            iterations,
        });
    }
    Err(Error::ZeroVector(MAX_RETRIES + 1))
}

/// Off-diagonal entries of `B`, stored as f32 when that is lossless.
#[derive(Debug, Clone)]
enum Coefficients<T> {
    Narrow(Vec<f32>),
    Full(Vec<T>),
}

impl<T: Scalar> Coefficients<T> {
    fn new(full: Vec<T>) -> Self {
        let exact = full.iter().all(|&c| {
            let narrow = c.to_f64_lossy() as f32;
            T::from_f64_lossy(f64::from(narrow)) == c
        });
        if exact {
            Self::Narrow(full.iter().map(|&c| c.to_f64_lossy() as f32).collect())
        } else {
            Self::Full(full)
        }
    }
}

struct StepSums<T> {
    total: T,
    squares: T,
    with_input: T,
}

impl<T: Scalar> Default for StepSums<T> {
    fn default() -> Self {
        Self {
            total: T::zero(),
            squares: T::zero(),
            with_input: T::zero(),
        }
    }
}

fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

fn normalize<T: Scalar>(v: &mut [T]) -> bool {
    let norm = dot(v, v).sqrt();
    if norm <= T::zero() || !norm.is_finite() {
        return false;
    }
    v.iter_mut().for_each(|x| *x /= norm);
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn path(n: usize) -> Graph {
        Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    fn k2() -> Graph {
        path(2)
    }

    fn star(leaves: usize) -> Graph {
        Graph::from_edges(leaves + 1, (1..=leaves).map(|v| (0, v))).unwrap()
    }

    #[test]
    fn identity_weights_give_adjacency() {
        let g = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3), (0, 3), (0, 2)]).unwrap();
        let op = WeightedLaplacian::new(&g, NodeWeights::<f64>::ones(4)).unwrap();
        let x = [0.5, -1.0, 2.0, 3.0];
        let bx = op.apply_b(&x).unwrap();
        for i in 0..4 {
            let ax: f64 = g.neighbors(i).iter().map(|&j| x[j]).sum();
            assert_eq!(bx[i], ax);
        }
    }

    #[test]
    fn apply_b_examples() {
        let p3 = path(3);
        let op = WeightedLaplacian::new(&p3, NodeWeights::<f64>::degrees(&p3)).unwrap();
        assert_eq!(op.apply_b(&[1.0, 0.0, 0.0]).unwrap(), vec![0.0, 2.0, 0.0]);

        let g = k2();
        let op = WeightedLaplacian::new(&g, NodeWeights::<f64>::ones(2)).unwrap();
        assert_eq!(op.apply_b(&[1.0, 0.0]).unwrap(), vec![0.0, 1.0]);
        assert!(matches!(
            op.apply_b(&[1.0]),
            Err(Error::LengthMismatch { expected: 2, got: 1 })
        ));
    }

    #[test]
    fn apply_lw_examples() {
        let p3 = path(3);
        let op = WeightedLaplacian::new(&p3, NodeWeights::<f64>::degrees(&p3)).unwrap();
        assert_eq!(op.apply_lw(&[1.0, 1.0, 1.0]).unwrap(), vec![0.0; 3]);
        assert_eq!(op.apply_lw(&[1.0, 0.0, -1.0]).unwrap(), vec![2.0, 0.0, -2.0]);
        assert_eq!(op.d_b(), &[2.0, 4.0, 2.0]);

        let g = k2();
        let op = WeightedLaplacian::new(&g, NodeWeights::<f64>::ones(2)).unwrap();
        assert_eq!(op.apply_lw(&[1.0, -1.0]).unwrap(), vec![2.0, -2.0]);
    }

    #[test]
    fn shift_examples() {
        let p3 = path(3);
        let w = NodeWeights::<f64>::degrees(&p3);
        assert_eq!(shift_constant(&p3, &w, ShiftBound::DegreeWeights), 24.0);
        assert_eq!(ShiftBound::detect(&p3, &w), ShiftBound::DegreeWeights);

        let g = k2();
        let w = NodeWeights::<f64>::new(vec![5.0, 2.0]).unwrap();
        assert_eq!(shift_constant(&g, &w, ShiftBound::GeneralWeights), 24.0);
        assert_eq!(ShiftBound::detect(&g, &w), ShiftBound::GeneralWeights);

        let single = Graph::from_edges(1, []).unwrap();
        let w = NodeWeights::<f64>::degrees(&single);
        assert_eq!(shift_constant(&single, &w, ShiftBound::DegreeWeights), 1.0);
    }

    #[test]
    fn rayleigh_examples() {
        let p3 = path(3);
        let op = WeightedLaplacian::new(&p3, NodeWeights::<f64>::degrees(&p3)).unwrap();
        assert_eq!(op.rayleigh_quotient(&[1.0, 1.0, 1.0]).unwrap(), 0.0);
        assert_eq!(op.rayleigh_quotient(&[1.0, 0.0, -1.0]).unwrap(), 2.0);
        assert!(op.rayleigh_quotient(&[0.0; 3]).is_err());
    }

    #[test]
    fn power_iteration_p3() {
        let p3 = path(3);
        let op = WeightedLaplacian::new(&p3, NodeWeights::<f64>::degrees(&p3)).unwrap();
        let cfg = SpectralConfig::default();
        let f = power_iteration(&op, &cfg).unwrap();
        assert_abs_diff_eq!(f.rayleigh, 2.0, epsilon = 1e-6);
        let s = f.vector[0].signum();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert_abs_diff_eq!(f.vector[0], s * h, epsilon = 1e-6);
        assert_abs_diff_eq!(f.vector[1], 0.0, epsilon = 1e-6);
        assert_abs_diff_eq!(f.vector[2], -s * h, epsilon = 1e-6);
        assert_eq!(f.iterations, 100);
    }

    #[test]
    fn power_iteration_degenerate_star() {
        let s4 = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        let op = WeightedLaplacian::new(&s4, NodeWeights::<f64>::degrees(&s4)).unwrap();
        let f = power_iteration(&op, &SpectralConfig::default()).unwrap();
        assert_abs_diff_eq!(f.rayleigh, 3.0, epsilon = 1e-6);
        assert_abs_diff_eq!(dot(&f.vector, &f.vector), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(f.vector.iter().sum::<f64>(), 0.0, epsilon = 1e-9);
        // The λ=3 eigenspace has no weight on the center.
        assert_abs_diff_eq!(f.vector[0], 0.0, epsilon = 1e-6);
    }

    #[test]
    fn power_iteration_k2() {
        let g = k2();
        let op = WeightedLaplacian::new(&g, NodeWeights::<f64>::degrees(&g)).unwrap();
        let f = power_iteration(&op, &SpectralConfig::default()).unwrap();
        assert_abs_diff_eq!(f.rayleigh, 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(f.vector[0].abs(), std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-12);
        assert_abs_diff_eq!(f.vector[0], -f.vector[1], epsilon = 1e-12);
    }

    #[test]
    fn power_iteration_rejects_tiny_graphs() {
        let g = Graph::from_edges(1, []).unwrap();
        let op = WeightedLaplacian::new(&g, NodeWeights::<f64>::ones(1)).unwrap();
        assert!(matches!(
            power_iteration(&op, &SpectralConfig::default()),
            Err(Error::TooFewNodes { needed: 2, got: 1 })
        ));
    }

    #[test]
    fn power_iteration_f32() {
        let g = star(3);
        let op = WeightedLaplacian::new(&g, NodeWeights::<f32>::degrees(&g)).unwrap();
        let f = power_iteration(&op, &SpectralConfig::default()).unwrap();
        assert!((f.rayleigh - 3.0).abs() < 1e-3, "{}", f.rayleigh);
    }

    #[test]
    fn seeded_runs_are_identical() {
        let g = path(30);
        let op = WeightedLaplacian::new(&g, NodeWeights::<f64>::degrees(&g)).unwrap();
        let cfg = SpectralConfig {
            seed: 11,
            ..SpectralConfig::default()
        };
        assert_eq!(power_iteration(&op, &cfg).unwrap(), power_iteration(&op, &cfg).unwrap());
    }

    #[test]
    fn iteration_budget() {
        let cfg = SpectralConfig::default();
        assert_eq!(cfg.iterations(2), 100);
        // ln(2^18)^2 = 155.7...
        assert_eq!(cfg.iterations(1 << 18), 156);
        let cfg = SpectralConfig {
            epsilon: 0.5,
            min_iterations: 1,
            ..cfg
        };
        assert_eq!(cfg.iterations(1000), (1000f64.ln().powf(1.5)).ceil() as usize);
    }
}
