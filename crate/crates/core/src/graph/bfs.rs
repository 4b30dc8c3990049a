use std::collections::VecDeque;

use super::{Graph, NodeId, NO_NODE};
use crate::error::Result;

/// Distance marker for nodes not reached by a search.
pub const UNREACHABLE: u32 = u32::MAX;

/// Shortest-path tree rooted at `source`.
///
/// `parent(u)` is the next node on a shortest path from `u` toward the
/// source. Among equally short options the lowest neighbor id is taken, so
/// the tree is a deterministic function of the graph and source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BfsResult {
    source: NodeId,
    distance: Vec<u32>,
    parent: Vec<NodeId>,
}

impl BfsResult {
    pub fn source(&self) -> NodeId {
        self.source
    }

    pub fn distance(&self, node: NodeId) -> Option<u32> {
        match self.distance[node as usize] {
            UNREACHABLE => None,
            d => Some(d),
        }
    }

    pub fn parent(&self, node: NodeId) -> Option<NodeId> {
        match self.parent[node as usize] {
            NO_NODE => None,
            p => Some(p),
        }
    }

    /// Raw distances, [`UNREACHABLE`] for nodes outside the source's component.
    pub fn distances(&self) -> &[u32] {
        &self.distance
    }

    pub(crate) fn into_parts(self) -> (Vec<u32>, Vec<NodeId>) {
        (self.distance, self.parent)
    }

    pub fn reached(&self) -> usize {
        self.distance.iter().filter(|&&d| d != UNREACHABLE).count()
    }

    pub fn eccentricity(&self) -> u32 {
        self.distance
            .iter()
            .copied()
            .filter(|&d| d != UNREACHABLE)
            .max()
            .unwrap_or(0)
    }

    /// The tree path from `node` to the source, both ends included.
    pub fn path_to_source(&self, node: NodeId) -> Option<Vec<NodeId>> {
        self.distance(node)?;
        let mut path = vec![node];
        let mut cur = node;
        while let Some(p) = self.parent(cur) {
            path.push(p);
            cur = p;
        }
        Some(path)
    }
}

/// Breadth-first search from `source`.
pub fn bfs(graph: &Graph, source: NodeId) -> Result<BfsResult> {
    graph.check_node(source)?;
    let n = graph.node_count();
    let mut distance = vec![UNREACHABLE; n];
    bfs_distances_into(graph, source, &mut distance, &mut VecDeque::with_capacity(n));

    let mut parent = vec![NO_NODE; n];
    for u in graph.nodes() {
        let d = distance[u as usize];
        if d == UNREACHABLE || d == 0 {
            continue;
        }
        parent[u as usize] = graph
            .neighbors(u)
            .iter()
            .copied()
            .find(|&v| distance[v as usize] == d - 1)
            .expect("reached node has a predecessor one level closer");
    }
    Ok(BfsResult { source, distance, parent })
}

/// Fills `distance` (length N, any content) with hop counts from `source`.
pub(crate) fn bfs_distances_into(
    graph: &Graph,
    source: NodeId,
    distance: &mut [u32],
    queue: &mut VecDeque<NodeId>,
) {
    distance.fill(UNREACHABLE);
    queue.clear();
    distance[source as usize] = 0;
    queue.push_back(source);
    while let Some(u) = queue.pop_front() {
        let next = distance[u as usize] + 1;
        for &v in graph.neighbors(u) {
            let slot = &mut distance[v as usize];
            if *slot == UNREACHABLE {
                *slot = next;
                queue.push_back(v);
            }
        }
    }
}

/// Hop counts from `source` as a fresh vector.
pub(crate) fn bfs_distances(graph: &Graph, source: NodeId) -> Vec<u32> {
    let mut distance = vec![UNREACHABLE; graph.node_count()];
    bfs_distances_into(graph, source, &mut distance, &mut VecDeque::new());
    distance
}
