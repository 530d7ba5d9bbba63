//! Recursive spectral dismantling (GND), reinsertion refinement (GNDR) and
//! fragmentation curves.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use ordered_float::OrderedFloat;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cost::{removal_costs, CostLedger, CostModel};
use crate::dsu::DisjointSet;
use crate::error::{Error, Result};
use crate::graph::{induced_subgraph, Graph};
use crate::partition::{bisect, CoverStrategy};
use crate::residual::{ComponentQueue, ResidualGraph};
use crate::scalar::Scalar;
use crate::spectral::{NodeWeights, SpectralConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Gnd,
    Gndr,
    RandomRemoval,
    DegreeAttack,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Gnd => "gnd",
            Method::Gndr => "gndr",
            Method::RandomRemoval => "random",
            Method::DegreeAttack => "degree-attack",
        }
    }
}

/// Largest component size allowed after dismantling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Target {
    Size(usize),
    /// Fraction of the node count, rounded up, at least 1.
    Fraction(f64),
}

impl Target {
    pub fn resolve(self, node_count: usize) -> Result<usize> {
        match self {
            Target::Size(0) => Err(Error::InvalidTarget("target size must be at least 1".into())),
            Target::Size(c) => Ok(c),
            Target::Fraction(f) if f > 0.0 && f <= 1.0 => Ok(((f * node_count as f64).ceil() as usize).max(1)),
            Target::Fraction(f) => Err(Error::InvalidTarget(format!("fraction {f} is outside (0, 1]"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Removal {
    /// Index in the graph the plan was built for.
    pub node: usize,
    pub original_id: u64,
    /// Raw cost charged at removal time.
    pub cost: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DismantlingPlan {
    pub removals: Vec<Removal>,
    pub target_size: usize,
    pub method: Method,
}

impl DismantlingPlan {
    /// Builds a plan from a removal order, charging costs by replay.
    pub fn from_order(g: &Graph, order: &[usize], model: &CostModel, target_size: usize, method: Method) -> Result<Self> {
        let costs = removal_costs(g, model, order)?;
        let removals = order
            .iter()
            .zip(costs)
            .map(|(&node, cost)| Removal {
                node,
                original_id: g.original_id(node),
                cost,
            })
            .collect();
        Ok(Self {
            removals,
            target_size,
            method,
        })
    }

    pub fn nodes(&self) -> Vec<usize> {
        self.removals.iter().map(|r| r.node).collect()
    }

    pub fn len(&self) -> usize {
        self.removals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.removals.is_empty()
    }

    pub fn total_cost(&self) -> f64 {
        self.removals.iter().map(|r| r.cost).sum()
    }

    /// Checks that nodes are in range and distinct and that removing them
    /// leaves no component above the target size.
    pub fn validate(&self, g: &Graph) -> Result<()> {
        let mut seen = vec![false; g.node_count()];
        for r in &self.removals {
            g.check_node(r.node)?;
            if std::mem::replace(&mut seen[r.node], true) {
                return Err(Error::InvalidPlan(format!("node {} removed twice", r.original_id)));
            }
        }
        let largest = max_component_after(g, &self.nodes())?;
        if largest > self.target_size {
            return Err(Error::InvalidPlan(format!(
                "largest remaining component has {largest} nodes, target is {}",
                self.target_size
            )));
        }
        Ok(())
    }
}

/// Largest component size once `removed` is deleted.
pub fn max_component_after(g: &Graph, removed: &[usize]) -> Result<usize> {
    Ok(*gcc_after_prefixes(g, removed)?.last().expect("non-empty"))
}

/// `out[t]` is the largest component size after removing `order[..t]`.
/// Computed backwards by union-find, adding nodes in reverse order.
pub(crate) fn gcc_after_prefixes(g: &Graph, order: &[usize]) -> Result<Vec<usize>> {
    let n = g.node_count();
    let mut alive = vec![true; n];
    for &node in order {
        g.check_node(node)?;
        alive[node] = false;
    }
    let mut dsu = DisjointSet::new(n);
    for (u, v) in g.edges() {
        if alive[u] && alive[v] {
            dsu.union(u, v);
        }
    }
    let mut largest = (0..n).filter(|&i| alive[i]).map(|i| dsu.size_of(i)).max().unwrap_or(0);
    let mut out = vec![0; order.len() + 1];
    out[order.len()] = largest;
    for t in (0..order.len()).rev() {
        let node = order[t];
        alive[node] = true;
        for &v in g.neighbors(node) {
            if alive[v] {
                dsu.union(node, v);
            }
        }
        largest = largest.max(dsu.size_of(node));
        out[t] = largest;
    }
    Ok(out)
}

/// Which degrees feed the spectral weight matrix under the degree model.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum WeightRecompute {
    /// Degrees in the component being bisected.
    #[default]
    Current,
    /// Degrees in the input graph.
    Original,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct GndOptions {
    pub spectral: SpectralConfig,
    pub cover: CoverStrategy,
    pub recompute: WeightRecompute,
}

/// Recursive node-weighted spectral dismantling.
///
/// The largest remaining component is bisected until every component has
/// at most `target_size` nodes. Cover nodes of one bisection are removed in
/// ascending index order, each charged its cost in the residual graph.
pub fn gnd<T: Scalar>(g: &Graph, model: &CostModel, target_size: usize, opts: &GndOptions) -> Result<DismantlingPlan> {
    if target_size == 0 {
        return Err(Error::InvalidTarget("target size must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.spectral.seed);
    let mut residual = ResidualGraph::new(g);
    let mut queue = ComponentQueue::new(g, target_size);
    let mut removals = Vec::new();

    while let Some(component) = queue.pop() {
        let (sub, map) = induced_subgraph(g, &component)?;
        let weights: Vec<f64> = match (model, opts.recompute) {
            (CostModel::Degree, WeightRecompute::Original) => map.to_parent.iter().map(|&p| g.degree(p) as f64).collect(),
            _ => model.weights(&sub)?,
        };
        let weights = NodeWeights::<T>::from_f64(&weights)?;
        let result = bisect(&sub, &weights, &opts.spectral, opts.cover, &mut rng)?;
        if result.removal_cover.is_empty() {
            return Err(Error::InvalidPlan(format!(
                "bisection of a {}-node component removed nothing",
                component.len()
            )));
        }
        for &local in &result.removal_cover {
            let node = map.to_parent[local];
            let cost = model.cost_given_degree(g.original_id(node), residual.degree(node))?;
            residual.remove(node);
            removals.push(Removal {
                node,
                original_id: g.original_id(node),
                cost,
            });
        }
        for piece in residual.split(&component) {
            queue.push(piece);
        }
    }

    let plan = DismantlingPlan {
        removals,
        target_size,
        method: Method::Gnd,
    };
    plan.validate(g)?;
    Ok(plan)
}

/// Reinsertion refinement of a valid plan.
///
/// Starting from the dismantled graph, the removed node whose return creates
/// the smallest merged component is put back, provided that component stays
/// within the target size. Ties go to the lower recorded cost, then the lower
/// index. The surviving removals keep their original order and are recharged.
pub fn gndr(g: &Graph, plan: &DismantlingPlan, model: &CostModel, target_size: usize) -> Result<DismantlingPlan> {
    let checked = DismantlingPlan {
        target_size,
        ..plan.clone()
    };
    checked.validate(g)?;

    let n = g.node_count();
    let mut removed = vec![false; n];
    let mut plan_cost = vec![0.0; n];
    for r in &plan.removals {
        removed[r.node] = true;
        plan_cost[r.node] = r.cost;
    }
    let mut dsu = DisjointSet::new(n);
    for (u, v) in g.edges() {
        if !removed[u] && !removed[v] {
            dsu.union(u, v);
        }
    }

    let mut roots = Vec::new();
    let mut merged_size = |dsu: &mut DisjointSet, removed: &[bool], node: usize| -> usize {
        roots.clear();
        roots.extend(g.neighbors(node).iter().filter(|&&v| !removed[v]).map(|&v| dsu.find(v)));
        roots.sort_unstable();
        roots.dedup();
        1 + roots.iter().map(|&r| dsu.size_of(r)).sum::<usize>()
    };

    // Merged sizes never shrink as nodes return, so stale heap keys are
    // lower bounds and a lazy re-check yields the exact greedy choice.
    let mut heap = BinaryHeap::new();
    for r in &plan.removals {
        let size = merged_size(&mut dsu, &removed, r.node);
        heap.push(Reverse((size, OrderedFloat(r.cost), r.node)));
    }
    while let Some(Reverse((size, cost, node))) = heap.pop() {
        let current = merged_size(&mut dsu, &removed, node);
        if current > size {
            heap.push(Reverse((current, cost, node)));
            continue;
        }
        if current > target_size {
            break;
        }
        removed[node] = false;
        for &v in g.neighbors(node) {
            if !removed[v] {
                dsu.union(node, v);
            }
        }
    }

    let survivors: Vec<usize> = plan.removals.iter().map(|r| r.node).filter(|&v| removed[v]).collect();
    let refined = DismantlingPlan::from_order(g, &survivors, model, target_size, Method::Gndr)?;
    refined.validate(g)?;
    Ok(refined)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryPoint {
    pub step: usize,
    /// Original id of the node removed at this step; `None` for step 0.
    pub removed: Option<u64>,
    pub cost_increment: f64,
    pub cumulative_cost: f64,
    pub gcc_size: usize,
    /// GCC size relative to the GCC of the input graph.
    pub gcc_fraction: f64,
}

/// Replays `plan` node by node, starting from the point `(0, 1.0)`.
pub fn fragmentation_curve(g: &Graph, plan: &DismantlingPlan, model: &CostModel) -> Result<Vec<TrajectoryPoint>> {
    let order = plan.nodes();
    let costs = removal_costs(g, model, &order)?;
    let mut ledger = CostLedger::for_graph(model, g)?;
    costs.iter().for_each(|&c| ledger.push(c));
    let cumulative = ledger.cumulative_series();
    let gcc = gcc_after_prefixes(g, &order)?;
    let base = gcc[0];
    let fraction = |s: usize| if base == 0 { 1.0 } else { s as f64 / base as f64 };

    Ok((0..=order.len())
        .map(|t| TrajectoryPoint {
            step: t,
            removed: t.checked_sub(1).map(|i| g.original_id(order[i])),
            cost_increment: if t == 0 { 0.0 } else { costs[t - 1] },
            cumulative_cost: cumulative[t],
            gcc_size: gcc[t],
            gcc_fraction: fraction(gcc[t]),
        })
        .collect())
}

/// Smallest cumulative cost at which the GCC fraction drops to
/// `target_fraction` or below.
pub fn partial_dismantle_cost(curve: &[TrajectoryPoint], target_fraction: f64) -> Option<f64> {
    curve
        .iter()
        .find(|p| p.gcc_fraction <= target_fraction)
        .map(|p| p.cumulative_cost)
}

/// GCC fraction reached once at most `budget` cumulative cost is spent.
pub fn gcc_fraction_at_cost(curve: &[TrajectoryPoint], budget: f64) -> f64 {
    curve
        .iter()
        .take_while(|p| p.cumulative_cost <= budget)
        .last()
        .map_or(1.0, |p| p.gcc_fraction)
}
