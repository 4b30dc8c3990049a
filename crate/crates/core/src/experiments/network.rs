use std::io::BufReader;
use std::path::Path;

use crate::error::{Error, Result};
use crate::generators::{
    configuration_model, sample_poisson, sample_power_law, PoissonConfig, PowerLawConfig,
};
use crate::graph::io::{open_file, read_edge_list};
use crate::graph::{giant_component, Graph};
use crate::seed;

use super::config::Family;

/// Parameters of one random-network ensemble.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NetworkSpec {
    pub family: Family,
    pub n: usize,
    pub gamma: f64,
    pub k_min: usize,
    pub k_max: Option<usize>,
    pub mean_degree: f64,
}

/// The giant component of one generated network.
#[derive(Debug, Clone)]
pub struct Realization {
    pub graph: Graph,
    pub seed: u64,
    pub generated_nodes: usize,
    pub discarded_stub_pairs: usize,
}

impl NetworkSpec {
    /// Seed shared by every cell that uses this ensemble member, so that
    /// varying only the hub count reuses identical graphs.
    pub fn realization_seed(&self, base: u64, index: usize) -> u64 {
        let (gamma, k_min) = match self.family {
            Family::PowerLaw => (self.gamma.to_bits(), self.k_min as u64),
            _ => (self.mean_degree.to_bits(), 0),
        };
        seed::derive(base, &[self.family.tag(), self.n as u64, gamma, k_min, index as u64])
    }

    pub fn realize(&self, base: u64, index: usize) -> Result<Realization> {
        let seed = self.realization_seed(base, index);
        let degrees = match self.family {
            Family::PowerLaw => {
                let config = match self.k_max {
                    Some(k_max) => PowerLawConfig::with_cutoff(self.n, self.gamma, self.k_min, k_max)?,
                    None => PowerLawConfig::new(self.n, self.gamma, self.k_min)?,
                };
                sample_power_law(&config, seed::derive(seed, &[1]))?
            }
            Family::Poisson => {
                let config = PoissonConfig { n: self.n, mean_degree: self.mean_degree };
                sample_poisson(&config, seed::derive(seed, &[1]))?
            }
            Family::File => return Err(Error::invalid("file networks are loaded, not generated")),
        };
        let model = configuration_model(&degrees, seed::derive(seed, &[2]))?;
        let giant = giant_component(&model.graph)?;
        Ok(Realization {
            graph: giant.graph,
            seed,
            generated_nodes: self.n,
            discarded_stub_pairs: model.discarded(),
        })
    }
}

/// Loads an edge list and keeps its giant component.
pub fn load_giant(path: &Path) -> Result<(Realization, crate::graph::DroppedEdges, usize)> {
    let file = open_file(path)?;
    let list = read_edge_list(BufReader::new(file))?;
    if list.graph.is_empty() {
        return Err(Error::EmptyGraph);
    }
    let loaded_nodes = list.graph.node_count();
    let giant = giant_component(&list.graph)?;
    Ok((
        Realization { graph: giant.graph, seed: 0, generated_nodes: loaded_nodes, discarded_stub_pairs: 0 },
        list.dropped,
        list.graph.edge_count(),
    ))
}
