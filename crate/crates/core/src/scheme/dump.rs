//! Line-oriented text dump of a scheme.
//!
//! ```text
//! hubroute-scheme 1
//! graph <nodes> <edges>
//! tie-break <higher-degree|lower-degree>
//! hubs <h_0> <h_1> ...
//! table <hub> <next hop of node 0> ... <next hop of node N-1>
//! ...                                  (one line per hub, '-' at the hub)
//! label <node> <hub> <path entries from node to hub>
//! ...                                  (one line per node)
//! end
//! ```
//!
//! Loading needs the same graph the dump was built from. Distances are
//! recomputed from the next-hop pointers and labels are checked against
//! them, so a loaded scheme satisfies the same invariants as a built one.

use std::io::{BufRead, Write};

use super::{select_hubs, ClosestHubTie, Scheme, SchemeConfig};
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId, NO_NODE, UNREACHABLE};

const MAGIC: &str = "hubroute-scheme";
const VERSION: u32 = 1;

impl Scheme<'_> {
    pub fn write_dump<W: Write>(&self, mut out: W) -> Result<()> {
        let n = self.graph.node_count();
        writeln!(out, "{MAGIC} {VERSION}")?;
        writeln!(out, "graph {} {}", n, self.graph.edge_count())?;
        writeln!(out, "tie-break {}", self.config.tie_break.as_str())?;
        write!(out, "hubs")?;
        for h in &self.hubs {
            write!(out, " {h}")?;
        }
        writeln!(out)?;
        for (slot, h) in self.hubs.iter().enumerate() {
            write!(out, "table {h}")?;
            for &next in &self.next_hop[slot * n..(slot + 1) * n] {
                if next == NO_NODE {
                    write!(out, " -")?;
                } else {
                    write!(out, " {next}")?;
                }
            }
            writeln!(out)?;
        }
        for label in &self.labels {
            write!(out, "label {} {}", label.node(), label.hub())?;
            for v in label.path() {
                write!(out, " {v}")?;
            }
            writeln!(out)?;
        }
        writeln!(out, "end")?;
        Ok(())
    }

    pub fn read_dump<'g, R: BufRead>(graph: &'g Graph, reader: R) -> Result<Scheme<'g>> {
        let n = graph.node_count();
        let mut lines = reader.lines();
        let mut next_line = |what: &str| -> Result<String> {
            lines
                .next()
                .transpose()?
                .ok_or_else(|| Error::Format(format!("unexpected end of input, expected {what}")))
        };

        let header = next_line("header")?;
        if header != format!("{MAGIC} {VERSION}") {
            return Err(Error::Format(format!("unsupported header {header:?}")));
        }
        let fields = expect_keyword(&next_line("graph")?, "graph")?;
        let sizes = parse_ids::<usize>(&fields)?;
        if sizes != [n, graph.edge_count()] {
            return Err(Error::Format(format!(
                "dump is for a graph with {sizes:?} nodes/edges, got [{n}, {}]",
                graph.edge_count()
            )));
        }
        let fields = expect_keyword(&next_line("tie-break")?, "tie-break")?;
        let tie_break = ClosestHubTie::parse(fields.trim())
            .ok_or_else(|| Error::Format(format!("unknown tie-break {fields:?}")))?;
        let hubs = parse_ids::<NodeId>(&expect_keyword(&next_line("hubs")?, "hubs")?)?;
        let config = SchemeConfig { hub_count: hubs.len(), tie_break };
        if select_hubs(graph, hubs.len()).ok().as_deref() != Some(&hubs[..]) {
            return Err(Error::Format("hub list does not match the graph's degree order".into()));
        }

        let mut next_hop = Vec::with_capacity(hubs.len() * n);
        for &hub in &hubs {
            let line = next_line("table")?;
            let fields = expect_keyword(&line, "table")?;
            let mut parts = fields.split_whitespace();
            let owner: NodeId = parse_one(parts.next())?;
            if owner != hub {
                return Err(Error::Format(format!("table for {owner} where {hub} expected")));
            }
            let start = next_hop.len();
            for part in parts {
                next_hop.push(if part == "-" { NO_NODE } else { parse_one(Some(part))? });
            }
            if next_hop.len() - start != n {
                return Err(Error::Format(format!("table for hub {hub} has wrong length")));
            }
        }
        let hub_distance = distances_from_pointers(graph, &hubs, &next_hop)?;
        let scheme = Scheme::assemble(graph, config, hubs, next_hop, hub_distance)?;

        for node in graph.nodes() {
            let line = next_line("label")?;
            let ids = parse_ids::<NodeId>(&expect_keyword(&line, "label")?)?;
            let label = scheme.label(node);
            if ids.len() < 3 || ids[0] != node || ids[1] != label.hub() || ids[2..] != *label.path()
            {
                return Err(Error::Format(format!("label for node {node} is inconsistent")));
            }
        }
        if next_line("end")?.trim() != "end" {
            return Err(Error::Format("missing end marker".into()));
        }
        Ok(scheme)
    }
}

fn expect_keyword(line: &str, keyword: &str) -> Result<String> {
    match line.split_once(' ') {
        Some((k, rest)) if k == keyword => Ok(rest.to_string()),
        _ if line == keyword => Ok(String::new()),
        _ => Err(Error::Format(format!("expected {keyword:?} line, got {line:?}"))),
    }
}

fn parse_one<T: std::str::FromStr>(field: Option<&str>) -> Result<T> {
    let field = field.ok_or_else(|| Error::Format("missing field".into()))?;
    field.parse().map_err(|_| Error::Format(format!("bad number {field:?}")))
}

fn parse_ids<T: std::str::FromStr>(fields: &str) -> Result<Vec<T>> {
    fields.split_whitespace().map(|f| parse_one(Some(f))).collect()
}

/// Hop counts toward each hub obtained by walking the stored pointers.
/// Rejects pointers that are not edges, that leave the hub's tree, or that
/// do not strictly approach the hub along a shortest path.
fn distances_from_pointers(graph: &Graph, hubs: &[NodeId], next_hop: &[NodeId]) -> Result<Vec<u32>> {
    let n = graph.node_count();
    let mut out = vec![UNREACHABLE; hubs.len() * n];
    let mut stack = Vec::new();
    for (slot, &hub) in hubs.iter().enumerate() {
        let next = &next_hop[slot * n..(slot + 1) * n];
        let dist = &mut out[slot * n..(slot + 1) * n];
        if next[hub as usize] != NO_NODE {
            return Err(Error::Format(format!("hub {hub} has a next hop to itself")));
        }
        dist[hub as usize] = 0;
        for start in graph.nodes() {
            let mut cur = start;
            while dist[cur as usize] == UNREACHABLE {
                let step = next[cur as usize];
                if step == NO_NODE || !graph.has_edge(cur, step) || stack.len() > n {
                    return Err(Error::Format(format!(
                        "next-hop pointers toward hub {hub} are broken at node {cur}"
                    )));
                }
                stack.push(cur);
                cur = step;
            }
            let mut d = dist[cur as usize];
            while let Some(u) = stack.pop() {
                d += 1;
                dist[u as usize] = d;
            }
        }
        // Every pointer must be a shortest-path step.
        for u in graph.nodes() {
            let best = graph.neighbors(u).iter().map(|&v| dist[v as usize]).min();
            if u != hub && best.map(|b| b + 1) != Some(dist[u as usize]) {
                return Err(Error::Format(format!(
                    "pointer from node {u} toward hub {hub} is not on a shortest path"
                )));
            }
        }
    }
    Ok(out)
}
