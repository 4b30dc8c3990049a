use std::collections::VecDeque;

use rand::seq::index;
use rayon::prelude::*;
use serde::Serialize;

use super::bfs::{bfs_distances_into, UNREACHABLE};
use super::{is_connected, Graph, NodeId};
use crate::error::{Error, Result};
use crate::seed;

/// Graphs up to this size get exact all-pairs statistics by default.
pub const DEFAULT_EXACT_THRESHOLD: usize = 2000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GraphStats {
    pub giant_component_size: usize,
    pub diameter: u32,
    /// Mean shortest-path length over ordered pairs of distinct nodes.
    pub mean_distance: f64,
    /// True when `diameter` and `mean_distance` come from sampled sources.
    /// A sampled diameter is a lower bound.
    pub estimated: bool,
}

/// Diameter and mean distance of a connected graph.
pub fn graph_stats(
    graph: &Graph,
    exact_threshold: usize,
    sample_size: usize,
    seed: u64,
) -> Result<GraphStats> {
    if graph.is_empty() {
        return Err(Error::EmptyGraph);
    }
    if !is_connected(graph) {
        return Err(Error::Disconnected);
    }
    let n = graph.node_count();
    let estimated = n > exact_threshold;
    let sources: Vec<NodeId> = if estimated {
        if sample_size == 0 {
            return Err(Error::invalid("sample size must be positive"));
        }
        let mut rng = seed::rng(seed);
        let mut picked: Vec<NodeId> = index::sample(&mut rng, n, sample_size.min(n))
            .into_iter()
            .map(|i| i as NodeId)
            .collect();
        picked.sort_unstable();
        picked
    } else {
        graph.nodes().collect()
    };

    let (sum, max) = sources
        .par_iter()
        .map_init(
            || (vec![UNREACHABLE; n], VecDeque::new()),
            |(dist, queue), &s| {
                bfs_distances_into(graph, s, dist, queue);
                dist.iter().fold((0u64, 0u32), |(sum, max), &d| (sum + d as u64, max.max(d)))
            },
        )
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1.max(b.1)));

    let pairs = sources.len() as u64 * (n as u64 - 1);
    let mean_distance = if pairs == 0 { 0.0 } else { sum as f64 / pairs as f64 };
    Ok(GraphStats {
        giant_component_size: n,
        diameter: max,
        mean_distance,
        estimated,
    })
}
