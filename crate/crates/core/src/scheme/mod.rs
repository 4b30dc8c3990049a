//! Preprocessing: hubs, labels and routing tables.
//!
//! One BFS per hub gives every node its distance and next hop toward that
//! hub. A node's label is the tree path from the node to its closest hub;
//! its routing table holds one next-hop entry per hub plus its neighbors.

mod dump;

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{bfs, Graph, NodeId, NO_NODE, UNREACHABLE};

const NO_SLOT: u32 = u32::MAX;

/// Preference among hubs at the same distance from a node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClosestHubTie {
    #[default]
    HigherDegree,
    LowerDegree,
}

impl ClosestHubTie {
    fn as_str(self) -> &'static str {
        match self {
            ClosestHubTie::HigherDegree => "higher-degree",
            ClosestHubTie::LowerDegree => "lower-degree",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        match s {
            "higher-degree" => Some(ClosestHubTie::HigherDegree),
            "lower-degree" => Some(ClosestHubTie::LowerDegree),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemeConfig {
    pub hub_count: usize,
    #[serde(default)]
    pub tie_break: ClosestHubTie,
}

impl SchemeConfig {
    pub fn new(hub_count: usize) -> Self {
        SchemeConfig { hub_count, tie_break: ClosestHubTie::default() }
    }
}

/// The `h` highest-degree nodes, ties by ascending id.
pub fn select_hubs(graph: &Graph, h: usize) -> Result<Vec<NodeId>> {
    let n = graph.node_count();
    if h < 1 || h > n {
        return Err(Error::invalid(format!("hub count {h} outside 1..={n}")));
    }
    let mut order: Vec<NodeId> = graph.nodes().collect();
    order.sort_by_key(|&u| (std::cmp::Reverse(graph.degree(u)), u));
    order.truncate(h);
    Ok(order)
}

/// A node's routing name: the shortest path `<i, v1, ..., h_i>` from the
/// node to its closest hub.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Label {
    path: Vec<NodeId>,
    id_bits: u32,
}

impl Label {
    pub fn node(&self) -> NodeId {
        self.path[0]
    }

    pub fn hub(&self) -> NodeId {
        *self.path.last().expect("label path is never empty")
    }

    pub fn path(&self) -> &[NodeId] {
        &self.path
    }

    /// Distance from the node to its hub.
    pub fn hops(&self) -> usize {
        self.path.len() - 1
    }

    pub fn entry_count(&self) -> usize {
        self.path.len()
    }

    /// Size in bits with `ceil(log2 N)` bits per id.
    pub fn bit_size(&self) -> u64 {
        self.path.len() as u64 * self.id_bits as u64
    }

    pub fn get(&self, index: usize) -> Option<NodeId> {
        self.path.get(index).copied()
    }
}

/// Bits needed for one id among `n` nodes.
pub fn id_bits(n: usize) -> u32 {
    if n <= 1 {
        0
    } else {
        usize::BITS - (n - 1).leading_zeros()
    }
}

/// Preprocessed routing state for one graph.
#[derive(Debug, Clone)]
pub struct Scheme<'g> {
    graph: &'g Graph,
    config: SchemeConfig,
    hubs: Vec<NodeId>,
    hub_slot: Vec<u32>,
    // slot-major H x N matrices
    next_hop: Vec<NodeId>,
    hub_distance: Vec<u32>,
    labels: Vec<Label>,
    label_slot: Vec<u32>,
}

/// Runs the preprocessing stage on a connected graph.
pub fn build_scheme<'g>(graph: &'g Graph, config: &SchemeConfig) -> Result<Scheme<'g>> {
    if graph.is_empty() {
        return Err(Error::EmptyGraph);
    }
    let hubs = select_hubs(graph, config.hub_count)?;
    let n = graph.node_count();

    let trees = hubs
        .par_iter()
        .map(|&h| bfs(graph, h).map(|r| r.into_parts()))
        .collect::<Result<Vec<_>>>()?;
    let mut next_hop = Vec::with_capacity(hubs.len() * n);
    let mut hub_distance = Vec::with_capacity(hubs.len() * n);
    for (dist, parent) in trees {
        if dist.contains(&UNREACHABLE) {
            return Err(Error::Disconnected);
        }
        hub_distance.extend(dist);
        next_hop.extend(parent);
    }
    Scheme::assemble(graph, *config, hubs, next_hop, hub_distance)
}

impl<'g> Scheme<'g> {
    fn assemble(
        graph: &'g Graph,
        config: SchemeConfig,
        hubs: Vec<NodeId>,
        next_hop: Vec<NodeId>,
        hub_distance: Vec<u32>,
    ) -> Result<Self> {
        let n = graph.node_count();
        let mut hub_slot = vec![NO_SLOT; n];
        for (slot, &h) in hubs.iter().enumerate() {
            hub_slot[h as usize] = slot as u32;
        }
        let mut scheme = Scheme {
            graph,
            config,
            hubs,
            hub_slot,
            next_hop,
            hub_distance,
            labels: Vec::new(),
            label_slot: Vec::new(),
        };
        let bits = id_bits(n);
        let (labels, label_slot): (Vec<_>, Vec<_>) = graph
            .nodes()
            .map(|i| {
                let slot = scheme.closest_slot(i);
                let path = scheme.tree_path(i, slot)?;
                Ok((Label { path, id_bits: bits }, slot as u32))
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .unzip();
        scheme.labels = labels;
        scheme.label_slot = label_slot;
        Ok(scheme)
    }

    fn closest_slot(&self, node: NodeId) -> usize {
        let n = self.graph.node_count();
        let key = |slot: usize| {
            let hub = self.hubs[slot];
            let degree = self.graph.degree(hub) as i64;
            let degree = match self.config.tie_break {
                ClosestHubTie::HigherDegree => -degree,
                ClosestHubTie::LowerDegree => degree,
            };
            (self.hub_distance[slot * n + node as usize], degree, hub)
        };
        (0..self.hubs.len())
            .min_by_key(|&slot| key(slot))
            .expect("at least one hub")
    }

    /// Follows next-hop pointers from `node` to the hub in `slot`.
    fn tree_path(&self, node: NodeId, slot: usize) -> Result<Vec<NodeId>> {
        let n = self.graph.node_count();
        let hub = self.hubs[slot];
        let mut path = vec![node];
        let mut cur = node;
        while cur != hub {
            cur = self.next_hop[slot * n + cur as usize];
            if cur == NO_NODE || path.len() > n {
                return Err(Error::InvariantViolation(format!(
                    "next-hop chain from {node} does not reach hub {hub}"
                )));
            }
            path.push(cur);
        }
        Ok(path)
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn config(&self) -> &SchemeConfig {
        &self.config
    }

    pub fn hubs(&self) -> &[NodeId] {
        &self.hubs
    }

    pub fn hub_count(&self) -> usize {
        self.hubs.len()
    }

    pub fn is_hub(&self, node: NodeId) -> bool {
        self.hub_slot[node as usize] != NO_SLOT
    }

    pub fn label(&self, node: NodeId) -> &Label {
        &self.labels[node as usize]
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn closest_hub(&self, node: NodeId) -> NodeId {
        self.labels[node as usize].hub()
    }

    pub fn table(&self, node: NodeId) -> RoutingTable<'_> {
        RoutingTable { scheme: self, node }
    }

    /// d(node, hub) from the preprocessing BFS; `None` if `hub` is not a hub.
    pub fn hub_distance(&self, node: NodeId, hub: NodeId) -> Option<u32> {
        let slot = *self.hub_slot.get(hub as usize)?;
        if slot == NO_SLOT {
            return None;
        }
        Some(self.hub_distance[slot as usize * self.graph.node_count() + node as usize])
    }

    pub(crate) fn label_slot(&self, node: NodeId) -> usize {
        self.label_slot[node as usize] as usize
    }

    #[inline]
    pub(crate) fn slot_next_hop(&self, node: NodeId, slot: usize) -> NodeId {
        self.next_hop[slot * self.graph.node_count() + node as usize]
    }

    #[inline]
    pub(crate) fn slot_distance(&self, node: NodeId, slot: usize) -> u32 {
        self.hub_distance[slot * self.graph.node_count() + node as usize]
    }
}

/// A node's local routing state: one next-hop entry per hub and the node's
/// neighbor list.
#[derive(Debug, Clone, Copy)]
pub struct RoutingTable<'a> {
    scheme: &'a Scheme<'a>,
    node: NodeId,
}

impl<'a> RoutingTable<'a> {
    pub fn node(&self) -> NodeId {
        self.node
    }

    pub fn neighbors(&self) -> &'a [NodeId] {
        self.scheme.graph.neighbors(self.node)
    }

    pub fn is_neighbor(&self, other: NodeId) -> bool {
        self.scheme.graph.has_edge(self.node, other)
    }

    /// The neighbor on a shortest path toward `hub`. `None` when `hub` is
    /// this node or not a hub at all.
    pub fn next_hop(&self, hub: NodeId) -> Option<NodeId> {
        let slot = *self.scheme.hub_slot.get(hub as usize)?;
        if slot == NO_SLOT {
            return None;
        }
        match self.scheme.slot_next_hop(self.node, slot as usize) {
            NO_NODE => None,
            v => Some(v),
        }
    }

    pub fn distance_to(&self, hub: NodeId) -> Option<u32> {
        self.scheme.hub_distance(self.node, hub)
    }

    /// `(hub, next hop)` for every hub, in hub order.
    pub fn hub_entries(&self) -> impl Iterator<Item = (NodeId, Option<NodeId>)> + '_ {
        self.scheme.hubs.iter().map(move |&h| (h, self.next_hop(h)))
    }

    /// Hub entries plus neighbor entries.
    pub fn entry_count(&self) -> usize {
        self.scheme.hub_count() + self.neighbors().len()
    }
}

/// Histogram of label sizes over all nodes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LabelHistogram {
    pub node_count: usize,
    pub entry_counts: BTreeMap<usize, usize>,
    pub bit_sizes: BTreeMap<u64, usize>,
    pub mean_entries: f64,
    pub max_entries: usize,
    pub mean_bits: f64,
    pub max_bits: u64,
}

pub fn label_size_distribution(scheme: &Scheme<'_>) -> LabelHistogram {
    let mut entry_counts = BTreeMap::new();
    let mut bit_sizes = BTreeMap::new();
    for label in scheme.labels() {
        *entry_counts.entry(label.entry_count()).or_insert(0) += 1;
        *bit_sizes.entry(label.bit_size()).or_insert(0) += 1;
    }
    let n = scheme.labels().len();
    let total_entries: usize = entry_counts.iter().map(|(k, c)| k * c).sum();
    let total_bits: u64 = bit_sizes.iter().map(|(k, &c)| k * c as u64).sum();
    LabelHistogram {
        node_count: n,
        max_entries: entry_counts.keys().next_back().copied().unwrap_or(0),
        max_bits: bit_sizes.keys().next_back().copied().unwrap_or(0),
        mean_entries: total_entries as f64 / n as f64,
        mean_bits: total_bits as f64 / n as f64,
        entry_counts,
        bit_sizes,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{
        configuration_model, cycle_graph, path_graph, sample_power_law, star_graph,
        PowerLawConfig,
    };
    use crate::graph::{bfs, giant_component, graph_stats};
    use proptest::prelude::*;

    #[test]
    fn hub_selection() {
        assert_eq!(select_hubs(&star_graph(6), 1).unwrap(), vec![0]);
        assert_eq!(select_hubs(&cycle_graph(4), 2).unwrap(), vec![0, 1]);
        let mut all = select_hubs(&path_graph(5), 5).unwrap();
        assert_eq!(all[..3], [1, 2, 3]);
        all.sort();
        assert_eq!(all, vec![0, 1, 2, 3, 4]);
        assert!(select_hubs(&path_graph(5), 0).is_err());
        assert!(select_hubs(&path_graph(5), 6).is_err());
    }

    #[test]
    fn path_labels() {
        let g = path_graph(5);
        let s = build_scheme(&g, &SchemeConfig::new(1)).unwrap();
        assert_eq!(s.hubs(), &[1]);
        assert_eq!(s.label(4).path(), &[4, 3, 2, 1]);
        assert_eq!(s.label(1).path(), &[1]);
        assert_eq!(s.label(0).path(), &[0, 1]);
        assert_eq!(s.label(4).bit_size(), 4 * 3);
        let hist = label_size_distribution(&s);
        let expected: BTreeMap<_, _> = [(1, 1), (2, 2), (3, 1), (4, 1)].into_iter().collect();
        assert_eq!(hist.entry_counts, expected);
        assert_eq!(hist.max_entries, 4);
    }

    #[test]
    fn star_labels() {
        let g = star_graph(6);
        let s = build_scheme(&g, &SchemeConfig::new(1)).unwrap();
        for leaf in 1..6 {
            assert_eq!(s.label(leaf).path(), &[leaf, 0]);
            assert_eq!(s.label(leaf).entry_count(), 2);
        }
        let hist = label_size_distribution(&s);
        assert_eq!(hist.entry_counts, [(1, 1), (2, 5)].into_iter().collect());
    }

    #[test]
    fn closest_hub_tie_break_by_degree() {
        // 0 - 1 - 2 - 3 with 3 also holding leaves 4, 5 and 1 holding leaf 6.
        // Hubs 3 (degree 4) and 1 (degree 3): node 2 is adjacent to both.
        let g = Graph::from_simple_edges(
            8,
            vec![(0, 1), (1, 2), (2, 3), (3, 4), (3, 5), (1, 6), (3, 7)],
        )
        .unwrap();
        let hubs = select_hubs(&g, 2).unwrap();
        assert_eq!(hubs, vec![3, 1]);
        let s = build_scheme(&g, &SchemeConfig::new(2)).unwrap();
        assert_eq!(s.closest_hub(2), 3);
        let low = SchemeConfig { hub_count: 2, tie_break: ClosestHubTie::LowerDegree };
        let s = build_scheme(&g, &low).unwrap();
        assert_eq!(s.closest_hub(2), 1);
    }

    #[test]
    fn equal_degree_tie_goes_to_lower_id() {
        let g = cycle_graph(6);
        let s = build_scheme(&g, &SchemeConfig::new(2)).unwrap();
        // Hubs 0 and 1; node 3 is 2 from 1 and 3 from 0; node 4 is 2 from 0, 3 from 1.
        assert_eq!(s.closest_hub(3), 1);
        assert_eq!(s.closest_hub(4), 0);
        let g = path_graph(3);
        let s = build_scheme(&g, &SchemeConfig::new(3)).unwrap();
        assert_eq!(s.closest_hub(0), 0);
    }

    #[test]
    fn disconnected_graph_is_rejected() {
        let g = Graph::from_simple_edges(4, vec![(0, 1), (2, 3)]).unwrap();
        assert!(matches!(build_scheme(&g, &SchemeConfig::new(1)), Err(Error::Disconnected)));
    }

    #[test]
    fn routing_table_view() {
        let g = path_graph(5);
        let s = build_scheme(&g, &SchemeConfig::new(2)).unwrap();
        assert_eq!(s.hubs(), &[1, 2]);
        let t = s.table(4);
        assert_eq!(t.next_hop(1), Some(3));
        assert_eq!(t.next_hop(2), Some(3));
        assert_eq!(t.next_hop(0), None);
        assert_eq!(t.distance_to(1), Some(3));
        assert_eq!(t.entry_count(), 2 + 1);
        assert_eq!(s.table(1).next_hop(1), None);
        assert_eq!(s.table(1).hub_entries().collect::<Vec<_>>(), vec![(1, None), (2, Some(2))]);
    }

    #[test]
    fn id_bits_is_ceil_log2() {
        assert_eq!(id_bits(1), 0);
        assert_eq!(id_bits(2), 1);
        assert_eq!(id_bits(5), 3);
        assert_eq!(id_bits(8), 3);
        assert_eq!(id_bits(9), 4);
        assert_eq!(id_bits(10_000), 14);
    }

    fn power_law_giant(n: usize, seed: u64) -> Graph {
        let c = PowerLawConfig::new(n, 2.3, 2).unwrap();
        let seq = sample_power_law(&c, seed).unwrap();
        let cm = configuration_model(&seq, seed).unwrap();
        giant_component(&cm.graph).unwrap().graph
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn tables_and_labels_match_bfs(n in 20usize..200, h in 1usize..12, seed in any::<u64>()) {
            let g = power_law_giant(n, seed);
            let h = h.min(g.node_count());
            let s = build_scheme(&g, &SchemeConfig::new(h)).unwrap();
            let oracle: Vec<_> = s.hubs().iter().map(|&hub| bfs(&g, hub).unwrap()).collect();
            let diameter = graph_stats(&g, usize::MAX, 0, 0).unwrap().diameter as usize;
            for i in g.nodes() {
                let table = s.table(i);
                prop_assert_eq!(table.entry_count(), h + g.degree(i));
                for (slot, &hub) in s.hubs().iter().enumerate() {
                    let d = oracle[slot].distance(i).unwrap();
                    let mut cur = i;
                    let mut steps = 0;
                    while let Some(next) = s.table(cur).next_hop(hub) {
                        prop_assert!(g.has_edge(cur, next));
                        cur = next;
                        steps += 1;
                    }
                    prop_assert_eq!(cur, hub);
                    prop_assert_eq!(steps, d);
                }
                let label = s.label(i);
                let best = oracle.iter().map(|r| r.distance(i).unwrap()).min().unwrap();
                prop_assert_eq!(label.hops() as u32, best);
                prop_assert_eq!(label.node(), i);
                prop_assert_eq!(label.hub(), s.closest_hub(i));
                prop_assert!(s.is_hub(label.hub()));
                prop_assert!(label.path().windows(2).all(|w| g.has_edge(w[0], w[1])));
                prop_assert!(label.entry_count() <= diameter + 1);
                if s.is_hub(i) {
                    prop_assert_eq!(label.path(), &[i][..]);
                }
            }
        }
    }
}
