//! Immutable undirected simple graphs in compressed adjacency form, edge-list
//! ingestion, component analysis and node removal.
//!
//! Nodes are addressed by compact indices `0..n`. Every graph also carries the
//! original id of each node as it appeared in the input file, and subgraphs
//! inherit those ids, so reporting never has to chase index mappings.

use std::collections::HashMap;
use std::collections::VecDeque;
use std::fmt::Write as _;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    neighbors: Vec<usize>,
    original_ids: Vec<u64>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub(crate) struct BuildStats {
    pub self_loops: usize,
    pub duplicates: usize,
}

impl Graph {
    /// Builds a simple graph on `n` nodes. Self-loops are dropped and
    /// parallel edges collapsed. Original ids default to the indices.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        Self::build(n, edges).map(|(g, _)| g)
    }

    pub(crate) fn build<I>(n: usize, edges: I) -> Result<(Self, BuildStats)>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut stats = BuildStats::default();
        let mut pairs = Vec::new();
        for (u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(Error::NodeOutOfRange { node: x, n });
                }
            }
            if u == v {
                stats.self_loops += 1;
                continue;
            }
            pairs.push((u.min(v), u.max(v)));
        }
        pairs.sort_unstable();
        let before = pairs.len();
        pairs.dedup();
        stats.duplicates = before - pairs.len();

        let mut degree = vec![0usize; n];
        for &(u, v) in &pairs {
            degree[u] += 1;
            degree[v] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut cursor = offsets[..n].to_vec();
        let mut neighbors = vec![0usize; offsets[n]];
        // Sorted pair order leaves every neighbor list sorted.
        for &(u, v) in &pairs {
            neighbors[cursor[u]] = v;
            cursor[u] += 1;
            neighbors[cursor[v]] = u;
            cursor[v] += 1;
        }
        let g = Self {
            offsets,
            neighbors,
            original_ids: (0..n as u64).collect(),
        };
        Ok((g, stats))
    }

    pub fn empty() -> Self {
        Self {
            offsets: vec![0],
            neighbors: Vec::new(),
            original_ids: Vec::new(),
        }
    }

    /// Replaces the original-id table.
    pub fn with_original_ids(mut self, ids: Vec<u64>) -> Result<Self> {
        if ids.len() != self.node_count() {
            return Err(Error::LengthMismatch {
                expected: self.node_count(),
                got: ids.len(),
            });
        }
        self.original_ids = ids;
        Ok(self)
    }

    pub fn node_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors.len() / 2
    }

    pub fn is_empty(&self) -> bool {
        self.node_count() == 0
    }

    pub fn degree(&self, node: usize) -> usize {
        self.offsets[node + 1] - self.offsets[node]
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.node_count()).map(|i| self.degree(i)).collect()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.node_count())
            .map(|i| self.degree(i))
            .max()
            .unwrap_or(0)
    }

    /// Sorted neighbor indices of `node`.
    pub fn neighbors(&self, node: usize) -> &[usize] {
        &self.neighbors[self.offsets[node]..self.offsets[node + 1]]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.neighbors(u).binary_search(&v).is_ok()
    }

    /// Each undirected edge once, as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.node_count()).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .copied()
                .filter(move |&v| u < v)
                .map(move |v| (u, v))
        })
    }

    pub fn original_id(&self, node: usize) -> u64 {
        self.original_ids[node]
    }

    pub fn original_ids(&self) -> &[u64] {
        &self.original_ids
    }

    pub fn original_index_map(&self) -> HashMap<u64, usize> {
        self.original_ids
            .iter()
            .enumerate()
            .map(|(i, &id)| (id, i))
            .collect()
    }

    pub(crate) fn check_node(&self, node: usize) -> Result<()> {
        if node < self.node_count() {
            Ok(())
        } else {
            Err(Error::NodeOutOfRange {
                node,
                n: self.node_count(),
            })
        }
    }
}

/// Parses a whitespace-separated edge list.
///
/// Lines starting with `#` or `%` are comments and blank lines are skipped.
/// Only the first two columns are read, so weighted or timestamped edge lists
/// load as plain graphs. Node ids are compacted to `0..n` in ascending id order.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut raw = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with('%') {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let mut next_id = || -> Result<u64> {
            let tok = tokens.next().ok_or_else(|| Error::Parse {
                line: lineno + 1,
                message: "expected two node ids".into(),
            })?;
            tok.parse::<u64>().map_err(|_| Error::Parse {
                line: lineno + 1,
                message: format!("malformed node id {tok:?}"),
            })
        };
        let u = next_id()?;
        let v = next_id()?;
        raw.push((u, v));
    }

    let mut ids: Vec<u64> = raw.iter().flat_map(|&(u, v)| [u, v]).collect();
    ids.sort_unstable();
    ids.dedup();
    let index = |id: u64| ids.binary_search(&id).expect("id collected above");
    let edges: Vec<(usize, usize)> = raw.iter().map(|&(u, v)| (index(u), index(v))).collect();

    let (g, stats) = Graph::build(ids.len(), edges)?;
    if stats.self_loops > 0 {
        log::warn!("dropped {} self-loop(s)", stats.self_loops);
    }
    if stats.duplicates > 0 {
        log::warn!("collapsed {} duplicate edge(s)", stats.duplicates);
    }
    g.with_original_ids(ids)
}

/// Serializes edges using original ids. Isolated nodes are not representable
/// in the format and are omitted.
pub fn write_edge_list(g: &Graph) -> String {
    let mut out = String::new();
    for (u, v) in g.edges() {
        let _ = writeln!(out, "{} {}", g.original_id(u), g.original_id(v));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentLabeling {
    pub labels: Vec<usize>,
    pub sizes: Vec<usize>,
}

impl ComponentLabeling {
    pub fn count(&self) -> usize {
        self.sizes.len()
    }

    pub fn largest(&self) -> usize {
        self.sizes.iter().copied().max().unwrap_or(0)
    }

    /// Members of each component, in ascending node order.
    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = self.sizes.iter().map(|&s| Vec::with_capacity(s)).collect();
        for (node, &label) in self.labels.iter().enumerate() {
            out[label].push(node);
        }
        out
    }
}

/// Breadth-first labeling. Components are numbered in order of their
/// lowest-index node.
pub fn connected_components(g: &Graph) -> ComponentLabeling {
    let n = g.node_count();
    let mut labels = vec![usize::MAX; n];
    let mut sizes = Vec::new();
    let mut queue = VecDeque::new();
    for start in 0..n {
        if labels[start] != usize::MAX {
            continue;
        }
        let label = sizes.len();
        labels[start] = label;
        queue.push_back(start);
        let mut size = 0;
        while let Some(u) = queue.pop_front() {
            size += 1;
            for &v in g.neighbors(u) {
                if labels[v] == usize::MAX {
                    labels[v] = label;
                    queue.push_back(v);
                }
            }
        }
        sizes.push(size);
    }
    ComponentLabeling { labels, sizes }
}

pub fn gcc_size(g: &Graph) -> usize {
    connected_components(g).largest()
}

/// Index correspondence between a subgraph and the graph it was cut from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeMap {
    /// Parent index of each local node, ascending.
    pub to_parent: Vec<usize>,
}

impl NodeMap {
    pub fn local(&self, parent: usize) -> Option<usize> {
        self.to_parent.binary_search(&parent).ok()
    }
}

/// Subgraph induced by `keep`. Local indices follow ascending parent order.
pub fn induced_subgraph(g: &Graph, keep: &[usize]) -> Result<(Graph, NodeMap)> {
    let mut to_parent = keep.to_vec();
    to_parent.sort_unstable();
    to_parent.dedup();
    for &node in &to_parent {
        g.check_node(node)?;
    }
    let mut local = vec![usize::MAX; g.node_count()];
    for (l, &p) in to_parent.iter().enumerate() {
        local[p] = l;
    }
    let mut offsets = Vec::with_capacity(to_parent.len() + 1);
    let mut neighbors = Vec::new();
    offsets.push(0);
    for &p in &to_parent {
        // Parent neighbor lists are sorted and local order is monotone, so
        // the mapped lists stay sorted.
        neighbors.extend(g.neighbors(p).iter().map(|&q| local[q]).filter(|&l| l != usize::MAX));
        offsets.push(neighbors.len());
    }
    let sub = Graph {
        offsets,
        neighbors,
        original_ids: to_parent.iter().map(|&p| g.original_id(p)).collect(),
    };
    Ok((sub, NodeMap { to_parent }))
}

/// The graph with `removed` deleted. Remaining nodes keep their relative
/// order and original ids.
pub fn remove_nodes(g: &Graph, removed: &[usize]) -> Result<Graph> {
    let mut gone = vec![false; g.node_count()];
    for &node in removed {
        g.check_node(node)?;
        gone[node] = true;
    }
    let keep: Vec<usize> = (0..g.node_count()).filter(|&i| !gone[i]).collect();
    induced_subgraph(g, &keep).map(|(sub, _)| sub)
}
