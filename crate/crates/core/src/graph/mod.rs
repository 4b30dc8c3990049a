//! Immutable undirected simple graphs in compressed adjacency form.

pub(crate) mod bfs;
mod components;
pub mod io;
mod stats;

pub use bfs::{bfs, BfsResult, UNREACHABLE};
pub use components::{connected_components, giant_component, is_connected, InducedSubgraph};
pub use stats::{graph_stats, GraphStats, DEFAULT_EXACT_THRESHOLD};

use crate::error::{Error, Result};

/// Dense node identifier in `0..N`.
pub type NodeId = u32;

/// Sentinel for "no node".
pub(crate) const NO_NODE: NodeId = NodeId::MAX;

/// Undirected simple graph. Neighbor lists are sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<NodeId>,
}

/// Edges dropped while building a simple graph.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DroppedEdges {
    pub self_loops: usize,
    pub duplicates: usize,
}

impl DroppedEdges {
    pub fn total(&self) -> usize {
        self.self_loops + self.duplicates
    }
}

impl Graph {
    /// Builds a simple graph on `node_count` nodes. Self-loops and repeated
    /// edges are dropped and counted.
    pub fn from_edges<I>(node_count: usize, edges: I) -> Result<(Graph, DroppedEdges)>
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        if node_count >= NO_NODE as usize {
            return Err(Error::invalid(format!("node count {node_count} too large")));
        }
        let mut dropped = DroppedEdges::default();
        let mut pairs = Vec::new();
        for (u, v) in edges {
            if u as usize >= node_count || v as usize >= node_count {
                return Err(Error::invalid(format!(
                    "edge ({u}, {v}) out of range for {node_count} nodes"
                )));
            }
            if u == v {
                dropped.self_loops += 1;
                continue;
            }
            pairs.push((u.min(v), u.max(v)));
        }
        pairs.sort_unstable();
        let before = pairs.len();
        pairs.dedup();
        dropped.duplicates = before - pairs.len();

        let mut offsets = vec![0usize; node_count + 1];
        for &(u, v) in &pairs {
            offsets[u as usize + 1] += 1;
            offsets[v as usize + 1] += 1;
        }
        for i in 0..node_count {
            offsets[i + 1] += offsets[i];
        }
        let mut cursor = offsets[..node_count].to_vec();
        let mut targets = vec![0; offsets[node_count]];
        for &(u, v) in &pairs {
            targets[cursor[u as usize]] = v;
            cursor[u as usize] += 1;
            targets[cursor[v as usize]] = u;
            cursor[v as usize] += 1;
        }
        for i in 0..node_count {
            targets[offsets[i]..offsets[i + 1]].sort_unstable();
        }
        Ok((Graph { offsets, targets }, dropped))
    }

    /// Builds a graph from edges that must already be simple.
    pub fn from_simple_edges<I>(node_count: usize, edges: I) -> Result<Graph>
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        let (graph, dropped) = Graph::from_edges(node_count, edges)?;
        if dropped.total() > 0 {
            return Err(Error::invalid(format!(
                "edge list is not simple ({} self-loops, {} duplicates)",
                dropped.self_loops, dropped.duplicates
            )));
        }
        Ok(graph)
    }

    pub fn node_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    pub fn is_empty(&self) -> bool {
        self.node_count() == 0
    }

    #[inline]
    pub fn degree(&self, node: NodeId) -> usize {
        let i = node as usize;
        self.offsets[i + 1] - self.offsets[i]
    }

    #[inline]
    pub fn neighbors(&self, node: NodeId) -> &[NodeId] {
        let i = node as usize;
        &self.targets[self.offsets[i]..self.offsets[i + 1]]
    }

    #[inline]
    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.neighbors(u).binary_search(&v).is_ok()
    }

    pub fn contains(&self, node: NodeId) -> bool {
        (node as usize) < self.node_count()
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> {
        0..self.node_count() as NodeId
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.nodes().map(|u| self.degree(u)).collect()
    }

    pub fn max_degree(&self) -> usize {
        self.nodes().map(|u| self.degree(u)).max().unwrap_or(0)
    }

    /// Edges as `(u, v)` with `u < v`, in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.nodes().flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .filter(move |&&v| u < v)
                .map(move |&v| (u, v))
        })
    }

    pub(crate) fn check_node(&self, node: NodeId) -> Result<()> {
        if self.contains(node) {
            Ok(())
        } else {
            Err(Error::invalid(format!(
                "node {node} out of range for {} nodes",
                self.node_count()
            )))
        }
    }
}
