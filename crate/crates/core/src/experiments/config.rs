use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::DEFAULT_EXACT_THRESHOLD;
use crate::router::PairSource;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum ExperimentId {
    LabelDist,
    StretchCdf,
    StretchVsN,
    StretchVsGamma,
    RealGraph,
}

impl ExperimentId {
    pub fn as_str(self) -> &'static str {
        match self {
            ExperimentId::LabelDist => "label_dist",
            ExperimentId::StretchCdf => "stretch_cdf",
            ExperimentId::StretchVsN => "stretch_vs_n",
            ExperimentId::StretchVsGamma => "stretch_vs_gamma",
            ExperimentId::RealGraph => "real_graph",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum Family {
    PowerLaw,
    Poisson,
    File,
}

impl Family {
    pub fn as_str(self) -> &'static str {
        match self {
            Family::PowerLaw => "power_law",
            Family::Poisson => "poisson",
            Family::File => "file",
        }
    }

    pub(crate) fn tag(self) -> u64 {
        match self {
            Family::PowerLaw => 1,
            Family::Poisson => 2,
            Family::File => 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Csv,
    Json,
}

/// Which ordered pairs each realization routes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum PairPolicy {
    /// Exhaustive up to the exact threshold, sampled above it.
    Auto,
    All,
    Sample(usize),
}

impl PairPolicy {
    pub fn resolve(self, nodes: usize, exact_threshold: usize, auto_sample: usize, seed: u64) -> PairSource {
        match self {
            PairPolicy::All => PairSource::Exhaustive,
            PairPolicy::Sample(count) => PairSource::Sampled { count, seed },
            PairPolicy::Auto if nodes <= exact_threshold => PairSource::Exhaustive,
            PairPolicy::Auto => PairSource::Sampled { count: auto_sample, seed },
        }
    }
}

impl fmt::Display for PairPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PairPolicy::Auto => f.write_str("auto"),
            PairPolicy::All => f.write_str("all"),
            PairPolicy::Sample(k) => write!(f, "sample:{k}"),
        }
    }
}

impl FromStr for PairPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(PairPolicy::Auto),
            "all" => Ok(PairPolicy::All),
            _ => s
                .strip_prefix("sample:")
                .and_then(|k| k.parse().ok())
                .filter(|&k| k > 0)
                .map(PairPolicy::Sample)
                .ok_or_else(|| Error::invalid(format!("bad pair policy {s:?}; use all, auto or sample:K"))),
        }
    }
}

impl TryFrom<String> for PairPolicy {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<PairPolicy> for String {
    fn from(p: PairPolicy) -> String {
        p.to_string()
    }
}

/// `H(N) = round(H0 * (ln N / ln N0)^nu)`, clamped to `[1, N]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HubScalePolicy {
    pub nu: u32,
    pub anchor_nodes: usize,
    pub anchor_hubs: usize,
}

impl HubScalePolicy {
    pub fn new(nu: u32) -> Self {
        HubScalePolicy { nu, anchor_nodes: 10_000, anchor_hubs: 100 }
    }

    pub fn hubs_for(&self, n: usize) -> usize {
        if n == 0 {
            return 0;
        }
        let ratio = (n as f64).ln() / (self.anchor_nodes as f64).ln();
        let h = (self.anchor_hubs as f64 * ratio.powi(self.nu as i32)).round() as usize;
        h.clamp(1, n)
    }
}

/// Full configuration of one experiment run. A JSON config file uses the
/// same field names; missing fields keep the experiment's defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentId,
    pub family: Family,
    /// Families overlaid by `stretch_vs_n`.
    pub families: Vec<Family>,
    pub n_values: Vec<usize>,
    pub gamma: f64,
    /// Exponents swept by `stretch_vs_gamma`.
    pub gamma_values: Vec<f64>,
    pub k_min: usize,
    /// Minimum degrees swept by `stretch_vs_gamma`.
    pub k_min_values: Vec<usize>,
    /// Degree cutoff; `None` means the natural cutoff `N^(1/(gamma-1))`.
    pub k_max: Option<usize>,
    pub mean_degree: f64,
    pub nu: u32,
    /// Hub scaling exponents swept by `stretch_vs_n` for power-law graphs.
    pub nu_values: Vec<u32>,
    /// Hub scaling exponent for Poisson graphs in `stretch_vs_n`.
    pub er_nu: u32,
    pub anchor_nodes: usize,
    pub anchor_hubs: usize,
    /// Fixed hub count, overriding the scaling policy.
    pub hubs: Option<usize>,
    pub realizations: usize,
    pub pairs: PairPolicy,
    pub exact_threshold: usize,
    pub auto_sample_pairs: usize,
    pub seed: u64,
    pub graph_file: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
}

impl ExperimentConfig {
    pub fn defaults_for(experiment: ExperimentId) -> Self {
        let mut config = ExperimentConfig {
            experiment,
            family: Family::PowerLaw,
            families: vec![Family::PowerLaw, Family::Poisson],
            n_values: vec![10_000],
            gamma: 2.3,
            gamma_values: vec![2.1, 2.3, 2.5, 2.7, 3.0, 3.5],
            k_min: 2,
            k_min_values: vec![1, 2, 3],
            k_max: None,
            mean_degree: 7.0,
            nu: 1,
            nu_values: vec![0, 1, 2, 3],
            er_nu: 3,
            anchor_nodes: 10_000,
            anchor_hubs: 100,
            hubs: None,
            realizations: 10,
            pairs: PairPolicy::Auto,
            exact_threshold: DEFAULT_EXACT_THRESHOLD,
            auto_sample_pairs: 100_000,
            seed: 1,
            graph_file: None,
            out: None,
            format: OutputFormat::Csv,
        };
        match experiment {
            ExperimentId::StretchCdf => config.n_values = vec![1000, 3000, 10_000],
            ExperimentId::StretchVsN => config.n_values = vec![1000, 2500, 5000, 10_000],
            ExperimentId::RealGraph => {
                config.family = Family::File;
                config.realizations = 1;
                config.format = OutputFormat::Json;
            }
            _ => {}
        }
        config
    }

    /// Applies the fields present in a JSON object on top of `self`.
    pub fn overlay_json(&self, overrides: &serde_json::Value) -> Result<Self> {
        let serde_json::Value::Object(fields) = overrides else {
            return Err(Error::invalid("config file must hold a JSON object"));
        };
        let mut merged = serde_json::to_value(self)?;
        let target = merged.as_object_mut().expect("config serializes to an object");
        for (key, value) in fields {
            if !target.contains_key(key) {
                return Err(Error::invalid(format!("unknown config field {key:?}")));
            }
            target.insert(key.clone(), value.clone());
        }
        serde_json::from_value(merged).map_err(|e| Error::invalid(format!("config: {e}")))
    }

    pub fn hub_policy(&self, nu: u32) -> HubScalePolicy {
        HubScalePolicy { nu, anchor_nodes: self.anchor_nodes, anchor_hubs: self.anchor_hubs }
    }

    /// Hub count for a nominal size `n` and exponent `nu`, capped at the
    /// number of nodes actually present.
    pub fn hubs_for(&self, n: usize, nu: u32, present: usize) -> usize {
        self.hubs.unwrap_or_else(|| self.hub_policy(nu).hubs_for(n)).clamp(1, present.max(1))
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::invalid(msg.to_string()));
        if self.realizations < 1 {
            return bad("realizations must be at least 1");
        }
        if self.n_values.is_empty() || self.n_values.iter().any(|&n| n < 2) {
            return bad("n values must be non-empty and at least 2");
        }
        if self.gamma_values.is_empty() || std::iter::once(&self.gamma).chain(&self.gamma_values).any(|&g| !(g > 1.0)) {
            return bad("gamma values must exceed 1");
        }
        if self.k_min_values.is_empty() || std::iter::once(&self.k_min).chain(&self.k_min_values).any(|&k| k < 1) {
            return bad("k_min values must be at least 1");
        }
        if self.k_max.is_some_and(|k| k < self.k_min) {
            return bad("k_max must be at least k_min");
        }
        if !(self.mean_degree > 0.0) {
            return bad("mean degree must be positive");
        }
        if self.nu_values.is_empty() {
            return bad("nu values must be non-empty");
        }
        if self.families.is_empty() {
            return bad("families must be non-empty");
        }
        if self.hubs == Some(0) {
            return bad("hubs must be at least 1");
        }
        if self.anchor_nodes < 2 || self.anchor_hubs < 1 {
            return bad("hub anchor must have at least 2 nodes and 1 hub");
        }
        if self.auto_sample_pairs < 1 {
            return bad("auto sample size must be positive");
        }
        let needs_file = self.experiment == ExperimentId::RealGraph || self.family == Family::File;
        if needs_file && self.graph_file.is_none() {
            return bad("this experiment needs --graph-file");
        }
        Ok(())
    }
}
