//! Degree sequences and the configuration model.
//!
//! A configuration-model graph is built by listing `k_i` stubs for every
//! node, shuffling the stub list uniformly and pairing consecutive stubs.
//! Self-loops and repeated edges produced by the matching are discarded,
//! not rewired.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::seed;

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct DegreeSequence(pub Vec<usize>);

impl DegreeSequence {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn mean(&self) -> f64 {
        if self.0.is_empty() {
            0.0
        } else {
            self.total() as f64 / self.0.len() as f64
        }
    }

    /// Makes the degree sum even by bumping one uniformly chosen node.
    fn repair_parity<R: Rng>(&mut self, rng: &mut R) {
        if self.total() % 2 == 1 {
            let i = rng.random_range(0..self.0.len());
            self.0[i] += 1;
        }
    }
}

impl From<Vec<usize>> for DegreeSequence {
    fn from(degrees: Vec<usize>) -> Self {
        DegreeSequence(degrees)
    }
}

/// Discrete power law `P(k) ∝ k^-gamma` on `k_min..=k_max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLawConfig {
    pub n: usize,
    pub gamma: f64,
    pub k_min: usize,
    pub k_max: usize,
}

impl PowerLawConfig {
    /// Uses the natural cutoff `floor(n^(1/(gamma-1)))`, raised to `k_min`
    /// when the cutoff would fall below it.
    pub fn new(n: usize, gamma: f64, k_min: usize) -> Result<Self> {
        if !(gamma > 1.0) {
            return Err(Error::invalid(format!("gamma must exceed 1, got {gamma}")));
        }
        let k_max = natural_cutoff(n, gamma).max(k_min);
        Self::with_cutoff(n, gamma, k_min, k_max)
    }

    pub fn with_cutoff(n: usize, gamma: f64, k_min: usize, k_max: usize) -> Result<Self> {
        let config = PowerLawConfig { n, gamma, k_min, k_max };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma > 1.0) || !self.gamma.is_finite() {
            return Err(Error::invalid(format!("gamma must exceed 1, got {}", self.gamma)));
        }
        if self.k_min < 1 {
            return Err(Error::invalid("k_min must be at least 1"));
        }
        if self.k_min > self.k_max {
            return Err(Error::invalid(format!(
                "k_min {} exceeds k_max {}",
                self.k_min, self.k_max
            )));
        }
        Ok(())
    }
}

pub fn natural_cutoff(n: usize, gamma: f64) -> usize {
    (n as f64).powf(1.0 / (gamma - 1.0)).floor() as usize
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PoissonConfig {
    pub n: usize,
    pub mean_degree: f64,
}

impl PoissonConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.mean_degree > 0.0) || !self.mean_degree.is_finite() {
            return Err(Error::invalid(format!(
                "mean degree must be positive, got {}",
                self.mean_degree
            )));
        }
        Ok(())
    }
}

/// I.i.d. power-law degrees drawn by inverse-CDF lookup, parity repaired.
pub fn sample_power_law(config: &PowerLawConfig, seed: u64) -> Result<DegreeSequence> {
    config.validate()?;
    let mut cumulative = Vec::with_capacity(config.k_max - config.k_min + 1);
    let mut total = 0.0;
    for k in config.k_min..=config.k_max {
        total += (k as f64).powf(-config.gamma);
        cumulative.push(total);
    }
    let mut rng = seed::rng(seed);
    let degrees = (0..config.n)
        .map(|_| {
            let u = rng.random::<f64>() * total;
            let idx = cumulative.partition_point(|&c| c <= u).min(cumulative.len() - 1);
            config.k_min + idx
        })
        .collect();
    let mut seq = DegreeSequence(degrees);
    if !seq.is_empty() {
        seq.repair_parity(&mut rng);
    }
    Ok(seq)
}

/// I.i.d. Poisson degrees, parity repaired.
pub fn sample_poisson(config: &PoissonConfig, seed: u64) -> Result<DegreeSequence> {
    config.validate()?;
    let dist = Poisson::new(config.mean_degree)
        .map_err(|e| Error::invalid(format!("poisson: {e}")))?;
    let mut rng = seed::rng(seed);
    let degrees = (0..config.n).map(|_| dist.sample(&mut rng) as usize).collect();
    let mut seq = DegreeSequence(degrees);
    if !seq.is_empty() {
        seq.repair_parity(&mut rng);
    }
    Ok(seq)
}

#[derive(Debug, Clone)]
pub struct ConfigurationModel {
    pub graph: Graph,
    /// Stub pairs joining a node to itself.
    pub self_loops: usize,
    /// Stub pairs repeating an edge already present.
    pub multi_edges: usize,
}

impl ConfigurationModel {
    pub fn discarded(&self) -> usize {
        self.self_loops + self.multi_edges
    }
}

/// Uniform random perfect matching of the stub list.
pub fn configuration_model(degrees: &DegreeSequence, seed: u64) -> Result<ConfigurationModel> {
    let total = degrees.total();
    if total % 2 == 1 {
        return Err(Error::invalid(format!("degree sum {total} is odd")));
    }
    let mut stubs: Vec<NodeId> = Vec::with_capacity(total);
    for (node, &k) in degrees.as_slice().iter().enumerate() {
        stubs.extend(std::iter::repeat_n(node as NodeId, k));
    }
    let mut rng = seed::rng(seed);
    stubs.shuffle(&mut rng);
    let pairs = stubs.chunks_exact(2).map(|p| (p[0], p[1]));
    let (graph, dropped) = Graph::from_edges(degrees.len(), pairs)?;
    Ok(ConfigurationModel {
        graph,
        self_loops: dropped.self_loops,
        multi_edges: dropped.duplicates,
    })
}

/// Uniform random labelled tree on `n` nodes (Prüfer decoding).
pub fn random_tree(n: usize, seed: u64) -> Result<Graph> {
    if n <= 2 {
        return Ok(path_graph(n));
    }
    let mut rng = seed::rng(seed);
    let code: Vec<usize> = (0..n - 2).map(|_| rng.random_range(0..n)).collect();
    let mut degree = vec![1usize; n];
    for &c in &code {
        degree[c] += 1;
    }
    let mut leaves: std::collections::BinaryHeap<std::cmp::Reverse<usize>> = (0..n)
        .filter(|&i| degree[i] == 1)
        .map(std::cmp::Reverse)
        .collect();
    let mut edges = Vec::with_capacity(n - 1);
    for &c in &code {
        let std::cmp::Reverse(leaf) = leaves.pop().expect("Prüfer decoding always has a leaf");
        edges.push((leaf as NodeId, c as NodeId));
        degree[c] -= 1;
        if degree[c] == 1 {
            leaves.push(std::cmp::Reverse(c));
        }
    }
    let std::cmp::Reverse(a) = leaves.pop().unwrap();
    let std::cmp::Reverse(b) = leaves.pop().unwrap();
    edges.push((a as NodeId, b as NodeId));
    Graph::from_simple_edges(n, edges)
}

pub fn path_graph(n: usize) -> Graph {
    let edges = (1..n).map(|i| ((i - 1) as NodeId, i as NodeId));
    Graph::from_simple_edges(n, edges).expect("path is simple")
}

pub fn cycle_graph(n: usize) -> Graph {
    let mut edges: Vec<_> = (1..n).map(|i| ((i - 1) as NodeId, i as NodeId)).collect();
    if n > 2 {
        edges.push(((n - 1) as NodeId, 0));
    }
    Graph::from_simple_edges(n, edges).expect("cycle is simple")
}

/// Node 0 joined to nodes `1..n`.
pub fn star_graph(n: usize) -> Graph {
    let edges = (1..n).map(|i| (0, i as NodeId));
    Graph::from_simple_edges(n, edges).expect("star is simple")
}

pub fn complete_graph(n: usize) -> Graph {
    let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u as NodeId, v as NodeId)));
    Graph::from_simple_edges(n, edges).expect("complete graph is simple")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{bfs, is_connected};

    #[test]
    fn collapsed_support_gives_constant_degrees() {
        let c = PowerLawConfig::with_cutoff(1000, 2.7, 3, 3).unwrap();
        let seq = sample_power_law(&c, 5).unwrap();
        assert_eq!(seq.len(), 1000);
        assert!(seq.as_slice().iter().all(|&k| k == 3));
    }

    #[test]
    fn power_law_mean_matches_series() {
        let c = PowerLawConfig::with_cutoff(100_000, 2.3, 2, 100).unwrap();
        let (mut norm, mut first) = (0.0, 0.0);
        for k in 2..=100 {
            let w = (k as f64).powf(-2.3);
            norm += w;
            first += k as f64 * w;
        }
        let analytic = first / norm;
        let seq = sample_power_law(&c, 11).unwrap();
        assert!((seq.mean() - analytic).abs() / analytic < 0.02, "{} vs {analytic}", seq.mean());
        assert_eq!(seq.total() % 2, 0);
        assert!(seq.as_slice().iter().all(|&k| (2..=101).contains(&k)));
    }

    #[test]
    fn power_law_is_deterministic() {
        let c = PowerLawConfig::new(500, 2.3, 2).unwrap();
        assert_eq!(sample_power_law(&c, 9).unwrap(), sample_power_law(&c, 9).unwrap());
        assert_ne!(sample_power_law(&c, 9).unwrap(), sample_power_law(&c, 10).unwrap());
    }

    #[test]
    fn power_law_config_validation() {
        assert!(PowerLawConfig::with_cutoff(10, 2.3, 5, 4).is_err());
        assert!(PowerLawConfig::new(10, 1.0, 2).is_err());
        assert!(PowerLawConfig::new(10, 2.3, 0).is_err());
        assert_eq!(PowerLawConfig::new(10_000, 2.3, 2).unwrap().k_max, 1193);
        // Cutoff below k_min is raised.
        assert_eq!(PowerLawConfig::new(4, 3.5, 3).unwrap().k_max, 3);
    }

    #[test]
    fn poisson_moments() {
        let c = PoissonConfig { n: 100_000, mean_degree: 7.0 };
        let seq = sample_poisson(&c, 2).unwrap();
        let mean = seq.mean();
        let var = seq.as_slice().iter().map(|&k| (k as f64 - mean).powi(2)).sum::<f64>()
            / (seq.len() - 1) as f64;
        assert!((mean - 7.0).abs() / 7.0 < 0.02, "mean {mean}");
        assert!((var - 7.0).abs() / 7.0 < 0.05, "var {var}");
        assert_eq!(seq, sample_poisson(&c, 2).unwrap());
    }

    #[test]
    fn poisson_degenerate_limit() {
        let c = PoissonConfig { n: 100, mean_degree: 0.0001 };
        let seq = sample_poisson(&c, 1).unwrap();
        assert!(seq.as_slice().iter().filter(|&&k| k == 0).count() >= 98);
        let cm = configuration_model(&seq, 1).unwrap();
        assert!(cm.graph.edge_count() <= 1);
        assert!(sample_poisson(&PoissonConfig { n: 10, mean_degree: 0.0 }, 1).is_err());
    }

    #[test]
    fn single_matching() {
        let cm = configuration_model(&DegreeSequence::from(vec![1, 1]), 0).unwrap();
        assert_eq!(cm.graph.edges().collect::<Vec<_>>(), vec![(0, 1)]);
        assert_eq!(cm.discarded(), 0);
    }

    #[test]
    fn odd_sum_rejected() {
        let err = configuration_model(&DegreeSequence::from(vec![1, 1, 1]), 0).unwrap_err();
        assert!(matches!(err, Error::InvalidArgument(_)));
    }

    /// All perfect matchings of `stubs` (recursive enumeration).
    fn matchings(stubs: &[usize]) -> Vec<Vec<(usize, usize)>> {
        if stubs.is_empty() {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for j in 1..stubs.len() {
            let mut rest = stubs[1..].to_vec();
            rest.remove(j - 1);
            for mut m in matchings(&rest) {
                m.push((stubs[0], stubs[j]));
                out.push(m);
            }
        }
        out
    }

    #[test]
    fn triangle_frequency_matches_matching_enumeration() {
        // Stubs 0,1 -> node 0; 2,3 -> node 1; 4,5 -> node 2.
        let all = matchings(&[0, 1, 2, 3, 4, 5]);
        assert_eq!(all.len(), 15);
        let is_triangle = |m: &Vec<(usize, usize)>| {
            let mut edges: Vec<_> = m
                .iter()
                .map(|&(a, b)| ((a / 2).min(b / 2), (a / 2).max(b / 2)))
                .collect();
            edges.sort();
            edges == vec![(0, 1), (0, 2), (1, 2)]
        };
        let triangles = all.iter().filter(|m| is_triangle(m)).count();
        assert_eq!(triangles, 8);
        let p = triangles as f64 / all.len() as f64;

        let trials = 20_000;
        let seq = DegreeSequence::from(vec![2, 2, 2]);
        let mut hits = 0;
        for seed in 0..trials {
            let cm = configuration_model(&seq, seed).unwrap();
            if cm.graph.edge_count() == 3 {
                hits += 1;
            } else {
                assert!(cm.graph.edge_count() < 3);
                assert!(cm.discarded() > 0);
            }
        }
        let freq = hits as f64 / trials as f64;
        let se = (p * (1.0 - p) / trials as f64).sqrt();
        assert!((freq - p).abs() < 4.0 * se, "freq {freq} vs {p}");
    }

    #[test]
    fn realized_degrees_never_exceed_requested() {
        let c = PowerLawConfig::new(2000, 2.3, 2).unwrap();
        let seq = sample_power_law(&c, 4).unwrap();
        let cm = configuration_model(&seq, 4).unwrap();
        let realized: usize = cm.graph.degrees().iter().sum();
        assert_eq!(realized + 2 * cm.discarded(), seq.total());
        for (u, &k) in seq.as_slice().iter().enumerate() {
            assert!(cm.graph.degree(u as NodeId) <= k);
        }
    }

    #[test]
    fn discarded_stubs_are_rare_at_paper_parameters() {
        let c = PowerLawConfig::new(10_000, 2.3, 2).unwrap();
        for seed in 0..3 {
            let seq = sample_power_law(&c, seed).unwrap();
            let cm = configuration_model(&seq, seed).unwrap();
            let m = seq.total() / 2;
            assert!((cm.discarded() as f64) < 0.05 * m as f64, "{} of {m}", cm.discarded());
        }
    }

    #[test]
    fn random_trees_are_trees() {
        for (n, seed) in [(1, 0), (2, 0), (3, 1), (10, 2), (200, 3)] {
            let t = random_tree(n, seed).unwrap();
            assert_eq!(t.node_count(), n);
            assert_eq!(t.edge_count(), n.saturating_sub(1));
            assert!(n == 0 || is_connected(&t));
        }
        assert_ne!(random_tree(50, 1).unwrap(), random_tree(50, 2).unwrap());
    }

    #[test]
    fn classic_shapes() {
        assert_eq!(star_graph(6).degree(0), 5);
        assert_eq!(cycle_graph(4).degrees(), vec![2; 4]);
        assert_eq!(complete_graph(5).edge_count(), 10);
        assert_eq!(bfs(&path_graph(5), 0).unwrap().eccentricity(), 4);
    }
}
