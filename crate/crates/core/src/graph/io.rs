//! Edge-list text format.
//!
//! One edge per line as two whitespace-separated non-negative integer ids.
//! Blank lines and lines starting with `#` are skipped. Ids may be sparse;
//! they are densified in ascending order of the original id.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufRead, Write};
use std::path::Path;

use super::{DroppedEdges, Graph, NodeId};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct EdgeList {
    pub graph: Graph,
    /// Original file id for each dense node id.
    pub original_ids: Vec<u64>,
    pub dropped: DroppedEdges,
}
/// Opens `path` for reading; the error message names the file.
pub fn open_file(path: &Path) -> Result<File> {
    File::open(path).map_err(|e| with_path(e, path))
}

/// Creates `path` for writing; the error message names the file.
pub fn create_file(path: &Path) -> Result<File> {
    File::create(path).map_err(|e| with_path(e, path))
}

fn with_path(e: io::Error, path: &Path) -> Error {
    Error::Io(io::Error::new(e.kind(), format!("{}: {e}", path.display())))
}


pub fn read_edge_list<R: BufRead>(reader: R) -> Result<EdgeList> {
    let mut raw = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut fields = trimmed.split_whitespace();
        let mut parse = |what: &str| -> Result<u64> {
            let field = fields.next().ok_or_else(|| Error::Parse {
                line: idx + 1,
                message: format!("missing {what} id"),
            })?;
            field.parse().map_err(|_| Error::Parse {
                line: idx + 1,
                message: format!("bad {what} id {field:?}"),
            })
        };
        let u = parse("first")?;
        let v = parse("second")?;
        if fields.next().is_some() {
            return Err(Error::Parse {
                line: idx + 1,
                message: "expected exactly two ids".into(),
            });
        }
        raw.push((u, v));
    }

    let mut ids = BTreeMap::new();
    for &(u, v) in &raw {
        ids.insert(u, 0);
        ids.insert(v, 0);
    }
    let mut original_ids = Vec::with_capacity(ids.len());
    for (dense, (&id, slot)) in ids.iter_mut().enumerate() {
        *slot = dense as NodeId;
        original_ids.push(id);
    }
    let edges = raw.iter().map(|(u, v)| (ids[u], ids[v]));
    let (graph, dropped) = Graph::from_edges(original_ids.len(), edges)?;
    if dropped.total() > 0 {
        log::warn!(
            "dropped {} self-loops and {} duplicate edges",
            dropped.self_loops,
            dropped.duplicates
        );
    }
    Ok(EdgeList { graph, original_ids, dropped })
}

pub fn write_edge_list<W: Write>(graph: &Graph, mut out: W) -> Result<()> {
    writeln!(out, "# nodes {} edges {}", graph.node_count(), graph.edge_count())?;
    for (u, v) in graph.edges() {
        writeln!(out, "{u} {v}")?;
    }
    Ok(())
}

/// Writes `dense original` lines.
pub fn write_id_mapping<W: Write>(original_ids: &[u64], mut out: W) -> Result<()> {
    writeln!(out, "# dense original")?;
    for (dense, id) in original_ids.iter().enumerate() {
        writeln!(out, "{dense} {id}")?;
    }
    Ok(())
}
