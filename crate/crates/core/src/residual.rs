use std::cmp::{Ordering, Reverse};
use std::collections::{BinaryHeap, VecDeque};

use crate::graph::{connected_components, Graph};

/// Alive mask and residual degrees over a fixed root graph.
pub(crate) struct ResidualGraph<'g> {
    pub graph: &'g Graph,
    alive: Vec<bool>,
    degree: Vec<usize>,
    stamp: Vec<u32>,
    epoch: u32,
}

impl<'g> ResidualGraph<'g> {
    pub fn new(graph: &'g Graph) -> Self {
        let n = graph.node_count();
        Self {
            graph,
            alive: vec![true; n],
            degree: graph.degrees(),
            stamp: vec![0; n],
            epoch: 0,
        }
    }

    pub fn degree(&self, node: usize) -> usize {
        self.degree[node]
    }

    pub fn remove(&mut self, node: usize) {
        debug_assert!(self.alive[node]);
        self.alive[node] = false;
        for &v in self.graph.neighbors(node) {
            self.degree[v] -= 1;
        }
    }

    /// Connected pieces of the alive part of `nodes`, which must be a union
    /// of residual components. Each piece is sorted.
    pub fn split(&mut self, nodes: &[usize]) -> Vec<Vec<usize>> {
        self.epoch += 1;
        let epoch = self.epoch;
        let mut out = Vec::new();
        let mut queue = VecDeque::new();
        for &start in nodes {
            if !self.alive[start] || self.stamp[start] == epoch {
                continue;
            }
            self.stamp[start] = epoch;
            queue.push_back(start);
            let mut piece = Vec::new();
            while let Some(u) = queue.pop_front() {
                piece.push(u);
                for &v in self.graph.neighbors(u) {
                    if self.alive[v] && self.stamp[v] != epoch {
                        self.stamp[v] = epoch;
                        queue.push_back(v);
                    }
                }
            }
            piece.sort_unstable();
            out.push(piece);
        }
        out
    }
}

/// Components ordered largest first, then by lowest member.
#[derive(Debug, PartialEq, Eq)]
pub(crate) struct Component(pub Vec<usize>);

impl Ord for Component {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.0.len(), Reverse(self.0.first()))
            .cmp(&(other.0.len(), Reverse(other.0.first())))
    }
}

impl PartialOrd for Component {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Queue of components still larger than the target size.
pub(crate) struct ComponentQueue {
    heap: BinaryHeap<Component>,
    target: usize,
}

impl ComponentQueue {
    pub fn new(graph: &Graph, target: usize) -> Self {
        let mut q = Self {
            heap: BinaryHeap::new(),
            target,
        };
        for members in connected_components(graph).members() {
            q.push(members);
        }
        q
    }

    pub fn push(&mut self, nodes: Vec<usize>) {
        if nodes.len() > self.target {
            self.heap.push(Component(nodes));
        }
    }

    pub fn pop(&mut self) -> Option<Vec<usize>> {
        self.heap.pop().map(|c| c.0)
    }
}
