//! Reference strategies: random removal (site percolation) and the adaptive
//! highest-degree attack.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cost::CostModel;
use crate::dismantle::{gcc_after_prefixes, gcc_fraction_at_cost, DismantlingPlan, Method, TrajectoryPoint};
use crate::error::Result;
use crate::graph::Graph;
use crate::residual::{ComponentQueue, ResidualGraph};

/// Removes nodes along a seeded uniform permutation, stopping at the first
/// prefix that leaves no component above `target_size`.
pub fn random_removal_plan(g: &Graph, target_size: usize, seed: u64, model: &CostModel) -> Result<DismantlingPlan> {
    let mut order: Vec<usize> = (0..g.node_count()).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let gcc = gcc_after_prefixes(g, &order)?;
    let stop = gcc.iter().position(|&s| s <= target_size).unwrap_or(order.len());
    DismantlingPlan::from_order(g, &order[..stop], model, target_size, Method::RandomRemoval)
}

/// Repeatedly removes the highest residual-degree node of the current
/// largest component (lowest index on ties).
pub fn adaptive_degree_plan(g: &Graph, target_size: usize, model: &CostModel) -> Result<DismantlingPlan> {
    let mut residual = ResidualGraph::new(g);
    let mut queue = ComponentQueue::new(g, target_size);
    let mut order = Vec::new();
    while let Some(component) = queue.pop() {
        let hub = *component
            .iter()
            .max_by_key(|&&v| (residual.degree(v), std::cmp::Reverse(v)))
            .expect("queued components are non-empty");
        residual.remove(hub);
        order.push(hub);
        for piece in residual.split(&component) {
            queue.push(piece);
        }
    }
    DismantlingPlan::from_order(g, &order, model, target_size, Method::DegreeAttack)
}

#[derive(Debug, Clone, PartialEq)]
pub struct AggregatePoint {
    pub cost: f64,
    pub mean: f64,
    pub std_dev: f64,
}

/// Mean and population standard deviation of the GCC fraction across
/// curves, sampled at `steps + 1` evenly spaced costs in `[0, 1]`.
pub fn aggregate_curves(curves: &[Vec<TrajectoryPoint>], steps: usize) -> Vec<AggregatePoint> {
    let steps = steps.max(1);
    (0..=steps)
        .map(|i| {
            let cost = i as f64 / steps as f64;
            let samples: Vec<f64> = curves.iter().map(|c| gcc_fraction_at_cost(c, cost)).collect();
            let k = samples.len().max(1) as f64;
            let mean = samples.iter().sum::<f64>() / k;
            let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / k;
            AggregatePoint {
                cost,
                mean,
                std_dev: var.sqrt(),
            }
        })
        .collect()
}
