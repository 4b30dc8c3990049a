use std::collections::VecDeque;

use super::{Graph, NodeId, NO_NODE};
use crate::error::{Error, Result};

/// Component index per node. Components are numbered in order of their
/// lowest node id.
pub fn connected_components(graph: &Graph) -> (Vec<u32>, Vec<usize>) {
    let n = graph.node_count();
    let mut label = vec![u32::MAX; n];
    let mut sizes = Vec::new();
    let mut queue = VecDeque::new();
    for start in graph.nodes() {
        if label[start as usize] != u32::MAX {
            continue;
        }
        let id = sizes.len() as u32;
        let mut size = 0;
        label[start as usize] = id;
        queue.push_back(start);
        while let Some(u) = queue.pop_front() {
            size += 1;
            for &v in graph.neighbors(u) {
                if label[v as usize] == u32::MAX {
                    label[v as usize] = id;
                    queue.push_back(v);
                }
            }
        }
        sizes.push(size);
    }
    (label, sizes)
}

pub fn is_connected(graph: &Graph) -> bool {
    let (_, sizes) = connected_components(graph);
    sizes.len() == 1
}

/// A subgraph with dense ids, plus the maps back and forth.
#[derive(Debug, Clone)]
pub struct InducedSubgraph {
    pub graph: Graph,
    pub old_to_new: Vec<Option<NodeId>>,
    pub new_to_old: Vec<NodeId>,
}

/// The largest connected component, re-indexed densely in ascending order of
/// original id. Among equally large components the one holding the lowest
/// original id wins.
pub fn giant_component(graph: &Graph) -> Result<InducedSubgraph> {
    if graph.is_empty() {
        return Err(Error::EmptyGraph);
    }
    let (label, sizes) = connected_components(graph);
    let mut best = 0;
    for (i, &size) in sizes.iter().enumerate() {
        if size > sizes[best] {
            best = i;
        }
    }
    let best = best as u32;

    let mut old_to_new = vec![None; graph.node_count()];
    let mut new_to_old = Vec::with_capacity(sizes[best as usize]);
    for u in graph.nodes() {
        if label[u as usize] == best {
            old_to_new[u as usize] = Some(new_to_old.len() as NodeId);
            new_to_old.push(u);
        }
    }
    let edges = graph.edges().filter_map(|(u, v)| {
        Some((old_to_new[u as usize]?, old_to_new[v as usize]?))
    });
    let graph = Graph::from_simple_edges(new_to_old.len(), edges)?;
    debug_assert!(new_to_old.iter().all(|&u| u != NO_NODE));
    Ok(InducedSubgraph { graph, old_to_new, new_to_old })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{cycle_graph, path_graph};

    #[test]
    fn equal_components_pick_lowest_id() {
        let g = Graph::from_simple_edges(
            6,
            vec![(3, 4), (4, 5), (5, 3), (0, 1), (1, 2), (2, 0)],
        )
        .unwrap();
        let sub = giant_component(&g).unwrap();
        assert_eq!(sub.graph.node_count(), 3);
        assert_eq!(sub.graph.edge_count(), 3);
        assert_eq!(sub.new_to_old, vec![0, 1, 2]);
        assert_eq!(sub.old_to_new[4], None);
    }

    #[test]
    fn connected_graph_keeps_everything() {
        let g = cycle_graph(5);
        let sub = giant_component(&g).unwrap();
        assert_eq!(sub.graph, g);
        assert_eq!(sub.new_to_old, vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn isolated_node_is_removed() {
        let g = Graph::from_simple_edges(3, vec![(0, 1)]).unwrap();
        let sub = giant_component(&g).unwrap();
        assert_eq!(sub.graph.node_count(), 2);
        assert_eq!(sub.graph.edge_count(), 1);
        assert!(is_connected(&sub.graph));
        assert!(!is_connected(&g));
    }

    #[test]
    fn larger_component_wins_regardless_of_ids() {
        let g = Graph::from_simple_edges(6, vec![(0, 1), (2, 3), (3, 4), (4, 5)]).unwrap();
        let sub = giant_component(&g).unwrap();
        assert_eq!(sub.new_to_old, vec![2, 3, 4, 5]);
        assert_eq!(sub.graph, path_graph(4));
        let degree_sum: usize = sub.graph.degrees().iter().sum();
        assert_eq!(degree_sum % 2, 0);
    }

    #[test]
    fn empty_graph_is_an_error() {
        let g = Graph::from_simple_edges(0, vec![]).unwrap();
        assert!(matches!(giant_component(&g), Err(Error::EmptyGraph)));
    }
}
