//! Packet forwarding.
//!
//! At an intermediate node `x` a packet for `t` is handled by the first
//! matching rule:
//!
//! 1. `x = t`: stop.
//! 2. `t` is a neighbor of `x`: send directly to `t`.
//! 3. `x` lies on `t`'s label at index `j`: move to entry `j - 1`.
//! 4. Otherwise forward along `x`'s table entry for `t`'s hub.
//!
//! The packet never changes in flight; every decision reads only the packet
//! and the current node's local table.

use rand::seq::index;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::{NodeId, NO_NODE};
use crate::scheme::{Label, RoutingTable, Scheme};
use crate::seed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    Arrived = 1,
    Neighbor = 2,
    LabelPath = 3,
    HubTable = 4,
}

impl Rule {
    pub fn number(self) -> u8 {
        self as u8
    }
}

impl Serialize for Rule {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_u8(self.number())
    }
}

/// Destination address carried by a packet.
#[derive(Debug, Clone, Copy)]
pub struct Packet<'a> {
    pub destination: NodeId,
    pub label: &'a Label,
}

/// One forwarding decision at the node owning `table`.
///
/// Rule 3 uses the node's distance to `t`'s hub to find the only label index
/// the node could occupy, then checks the id there.
pub fn forward(table: &RoutingTable<'_>, packet: &Packet<'_>) -> Result<(Rule, Option<NodeId>)> {
    let x = table.node();
    let t = packet.destination;
    if x == t {
        return Ok((Rule::Arrived, None));
    }
    if table.is_neighbor(t) {
        return Ok((Rule::Neighbor, Some(t)));
    }
    let hub = packet.label.hub();
    let to_hub = table.distance_to(hub).ok_or_else(|| {
        Error::InvariantViolation(format!("label of {t} names {hub}, which is not a hub"))
    })? as usize;
    let hops = packet.label.hops();
    if to_hub <= hops {
        let j = hops - to_hub;
        if packet.label.get(j) == Some(x) {
            // j > 0 because x != t
            return Ok((Rule::LabelPath, packet.label.get(j - 1)));
        }
    }
    match table.next_hop(hub) {
        Some(next) => Ok((Rule::HubTable, Some(next))),
        None => Err(Error::InvariantViolation(format!(
            "packet for {t} reached hub {hub} without meeting the label path"
        ))),
    }
}

/// The walk a packet takes from `source` to `destination`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RouteTrace {
    pub source: NodeId,
    pub destination: NodeId,
    pub walk: Vec<NodeId>,
    /// Rule that produced each hop; one entry per hop.
    pub rules: Vec<Rule>,
}

impl RouteTrace {
    /// Routed length r(s, t).
    pub fn hops(&self) -> usize {
        self.walk.len() - 1
    }
}

/// Simulates one packet from `source` to `destination`.
pub fn route(scheme: &Scheme<'_>, source: NodeId, destination: NodeId) -> Result<RouteTrace> {
    let graph = scheme.graph();
    graph.check_node(source)?;
    graph.check_node(destination)?;
    let packet = Packet { destination, label: scheme.label(destination) };
    let guard = graph.node_count();
    let mut walk = vec![source];
    let mut rules = Vec::new();
    let mut x = source;
    loop {
        match forward(&scheme.table(x), &packet)? {
            (Rule::Arrived, _) => break,
            (rule, Some(next)) => {
                rules.push(rule);
                walk.push(next);
                x = next;
            }
            (rule, None) => {
                return Err(Error::InvariantViolation(format!(
                    "rule {} fired at {x} without a next hop",
                    rule.number()
                )))
            }
        }
        if rules.len() >= guard {
            return Err(Error::InvariantViolation(format!(
                "route {source} -> {destination} exceeded {guard} hops"
            )));
        }
    }
    Ok(RouteTrace { source, destination, walk, rules })
}

/// Hop count only; the same decisions as [`route`] without recording the walk.
pub fn route_length(scheme: &Scheme<'_>, source: NodeId, destination: NodeId) -> Result<u32> {
    let n = scheme.graph().node_count();
    let label = scheme.label(destination);
    let slot = scheme.label_slot(destination);
    let hops = label.hops();
    let mut x = source;
    let mut count = 0u32;
    while x != destination {
        if scheme.graph().has_edge(x, destination) {
            return Ok(count + 1);
        }
        let to_hub = scheme.slot_distance(x, slot) as usize;
        x = if to_hub <= hops && label.get(hops - to_hub) == Some(x) {
            label.path()[hops - to_hub - 1]
        } else {
            match scheme.slot_next_hop(x, slot) {
                NO_NODE => {
                    return Err(Error::InvariantViolation(format!(
                        "packet for {destination} stuck at hub {x}"
                    )))
                }
                next => next,
            }
        };
        count += 1;
        if count as usize >= n {
            return Err(Error::InvariantViolation(format!(
                "route {source} -> {destination} exceeded {n} hops"
            )));
        }
    }
    Ok(count)
}

/// Which ordered pairs to route.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairSource {
    /// Every ordered pair `s != t`.
    Exhaustive,
    /// `count` distinct ordered pairs drawn uniformly, sorted by source.
    Sampled { count: usize, seed: u64 },
}

/// Ordered pairs of distinct nodes, grouped by source in ascending order.
pub fn pairs(node_count: usize, source: PairSource) -> Box<dyn Iterator<Item = (NodeId, NodeId)>> {
    let n = node_count as u64;
    match source {
        PairSource::Exhaustive => Box::new((0..n).flat_map(move |s| {
            (0..n).filter(move |&t| t != s).map(move |t| (s as NodeId, t as NodeId))
        })),
        PairSource::Sampled { count, seed } => Box::new(sample_pairs(node_count, count, seed).into_iter()),
    }
}

pub fn sample_pairs(node_count: usize, count: usize, seed: u64) -> Vec<(NodeId, NodeId)> {
    let total = node_count.saturating_mul(node_count.saturating_sub(1));
    let count = if count > total {
        log::warn!("requested {count} pairs but only {total} exist; using all");
        total
    } else {
        count
    };
    if count == 0 {
        return Vec::new();
    }
    let mut rng = seed::rng(seed);
    let mut picked: Vec<usize> = index::sample(&mut rng, total, count).into_vec();
    picked.sort_unstable();
    let span = node_count - 1;
    picked
        .into_iter()
        .map(|i| {
            let s = i / span;
            let r = i % span;
            let t = if r < s { r } else { r + 1 };
            (s as NodeId, t as NodeId)
        })
        .collect()
}

/// Lazily routes every selected pair.
pub fn route_all_pairs<'s, 'g>(
    scheme: &'s Scheme<'g>,
    source: PairSource,
) -> impl Iterator<Item = Result<RouteTrace>> + 's {
    pairs(scheme.graph().node_count(), source).map(move |(s, t)| route(scheme, s, t))
}
