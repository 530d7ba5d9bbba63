//! Node-removal cost models and cumulative cost accounting.
//!
//! Under the degree model a node costs its degree in the residual graph at
//! the moment it is removed. Every edge is therefore charged exactly once,
//! by whichever endpoint goes first, and the normalized cumulative cost is
//! the fraction of original edges that have been removed.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Per-node costs keyed by original node id.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ExternalWeights(HashMap<u64, f64>);

impl ExternalWeights {
    pub fn from_map(map: HashMap<u64, f64>) -> Result<Self> {
        for (&id, &w) in &map {
            if !(w.is_finite() && w >= 0.0) {
                return Err(Error::InvalidWeight {
                    node: id as usize,
                    weight: w,
                });
            }
        }
        Ok(Self(map))
    }

    /// Parses `node_id weight` lines; `#` and `%` start comments.
    pub fn parse(text: &str) -> Result<Self> {
        let mut map = HashMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') || line.starts_with('%') {
                continue;
            }
            let err = |message: String| Error::Parse {
                line: lineno + 1,
                message,
            };
            let mut tokens = line.split_whitespace();
            let (Some(id), Some(w), None) = (tokens.next(), tokens.next(), tokens.next()) else {
                return Err(err("expected `node_id weight`".into()));
            };
            let id: u64 = id
                .parse()
                .map_err(|_| err(format!("malformed node id {id:?}")))?;
            let w: f64 = w
                .parse()
                .map_err(|_| err(format!("malformed weight {w:?}")))?;
            if !(w.is_finite() && w >= 0.0) {
                return Err(err(format!("weight {w} is not a non-negative number")));
            }
            if map.insert(id, w).is_some() {
                return Err(err(format!("node id {id} listed twice")));
            }
        }
        Ok(Self(map))
    }

    pub fn get(&self, id: u64) -> Result<f64> {
        self.0.get(&id).copied().ok_or(Error::MissingWeight(id))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub enum CostModel {
    Unit,
    #[default]
    Degree,
    External(ExternalWeights),
}

impl CostModel {
    pub fn name(&self) -> &'static str {
        match self {
            CostModel::Unit => "unit",
            CostModel::Degree => "degree",
            CostModel::External(_) => "external",
        }
    }

    /// Cost of removing a node with the given original id whose residual
    /// degree is `current_degree`.
    pub fn cost_given_degree(&self, original_id: u64, current_degree: usize) -> Result<f64> {
        match self {
            CostModel::Unit => Ok(1.0),
            CostModel::Degree => Ok(current_degree as f64),
            CostModel::External(w) => w.get(original_id),
        }
    }

    /// Cost of removing `node` from `g_current` right now.
    pub fn node_cost(&self, g_current: &Graph, node: usize) -> Result<f64> {
        g_current.check_node(node)?;
        self.cost_given_degree(g_current.original_id(node), g_current.degree(node))
    }

    /// Static per-node weights of `g`, as used for the diagonal weight matrix
    /// of the spectral objective.
    pub fn weights(&self, g: &Graph) -> Result<Vec<f64>> {
        (0..g.node_count()).map(|i| self.node_cost(g, i)).collect()
    }

    /// Total cost of removing everything: `|E|`, `n`, or the weight sum.
    /// Falls back to 1 when that total is zero, so normalized costs stay 0.
    pub fn normalizer(&self, g: &Graph) -> Result<f64> {
        let total = match self {
            CostModel::Unit => g.node_count() as f64,
            CostModel::Degree => g.edge_count() as f64,
            CostModel::External(_) => self.weights(g)?.iter().sum(),
        };
        Ok(if total > 0.0 { total } else { 1.0 })
    }

    /// Whether increments depend on removal order.
    pub fn is_adaptive(&self) -> bool {
        matches!(self, CostModel::Degree)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CostLedger {
    increments: Vec<f64>,
    normalizer: f64,
}

impl CostLedger {
    pub fn new(normalizer: f64) -> Self {
        assert!(normalizer > 0.0, "normalizer must be positive");
        Self {
            increments: Vec::new(),
            normalizer,
        }
    }

    pub fn for_graph(model: &CostModel, g: &Graph) -> Result<Self> {
        Ok(Self::new(model.normalizer(g)?))
    }

    pub fn push(&mut self, increment: f64) {
        debug_assert!(increment >= 0.0);
        self.increments.push(increment);
    }

    pub fn increments(&self) -> &[f64] {
        &self.increments
    }

    pub fn normalizer(&self) -> f64 {
        self.normalizer
    }

    pub fn len(&self) -> usize {
        self.increments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.increments.is_empty()
    }

    /// Sum of the first `upto` increments divided by the normalizer.
    pub fn normalized_cumulative_cost(&self, upto: usize) -> f64 {
        let upto = upto.min(self.increments.len());
        self.increments[..upto].iter().sum::<f64>() / self.normalizer
    }

    /// Normalized cumulative cost after every step, starting with step 0.
    pub fn cumulative_series(&self) -> Vec<f64> {
        let mut acc = 0.0;
        std::iter::once(0.0)
            .chain(self.increments.iter().map(|x| {
                acc += x;
                acc / self.normalizer
            }))
            .collect()
    }
}

/// Replays `order` on `g`, charging each node its cost at removal time.
pub fn removal_costs(g: &Graph, model: &CostModel, order: &[usize]) -> Result<Vec<f64>> {
    let mut alive_degree = g.degrees();
    let mut removed = vec![false; g.node_count()];
    let mut out = Vec::with_capacity(order.len());
    for &node in order {
        g.check_node(node)?;
        if removed[node] {
            return Err(Error::InvalidPlan(format!(
                "node {} removed twice",
                g.original_id(node)
            )));
        }
        out.push(model.cost_given_degree(g.original_id(node), alive_degree[node])?);
        removed[node] = true;
        for &v in g.neighbors(node) {
            alive_degree[v] -= 1;
        }
    }
    Ok(out)
}
