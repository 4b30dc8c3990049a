use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::graph_stats;
use crate::metrics::{evaluate_pairs, evaluate_pairs_many, StretchAccumulator, StretchReport};
use crate::scheme::{build_scheme, label_size_distribution, SchemeConfig};
use crate::seed;

use super::config::{ExperimentConfig, ExperimentId, Family};
use super::network::{load_giant, NetworkSpec, Realization};

/// Mean over realizations and its standard error (`NaN` for one realization).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeanSe {
    pub mean: f64,
    pub std_error: f64,
}

impl MeanSe {
    pub fn of(values: &[f64]) -> Self {
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let std_error = if values.len() > 1 {
            let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
            (var / n).sqrt()
        } else {
            f64::NAN
        };
        MeanSe { mean, std_error }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RealizationResult {
    pub index: usize,
    pub seed: u64,
    pub giant_size: usize,
    pub edges: usize,
    pub hubs: usize,
    pub discarded_stub_pairs: usize,
    pub report: StretchReport,
}

/// One point of an experiment grid, averaged over realizations.
#[derive(Debug, Clone, Serialize)]
pub struct CellResult {
    pub family: Family,
    pub n: usize,
    pub gamma: f64,
    pub k_min: usize,
    pub mean_degree: f64,
    pub nu: u32,
    /// Hub count from the scaling policy at the nominal size.
    pub hubs: usize,
    pub giant_size: MeanSe,
    pub mean_pair_stretch: MeanSe,
    pub ratio_of_averages: MeanSe,
    pub shortest_fraction: MeanSe,
    /// All realizations' pairs merged.
    pub pooled: StretchReport,
    pub realizations: Vec<RealizationResult>,
}

#[derive(Debug, Clone, Serialize)]
pub struct HistogramRow {
    pub entry_count: usize,
    /// Nodes with this label size, averaged over realizations.
    pub mean_nodes: f64,
    pub fraction: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct LabelRealization {
    pub index: usize,
    pub seed: u64,
    pub giant_size: usize,
    pub hubs: usize,
    pub diameter: u32,
    pub diameter_estimated: bool,
    pub max_entries: usize,
    pub mean_entries: f64,
    pub max_bits: u64,
    pub mean_bits: f64,
    /// max entries <= diameter + 1
    pub bound_holds: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct LabelDistResult {
    pub histogram: Vec<HistogramRow>,
    pub realizations: Vec<LabelRealization>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReferenceValues {
    pub mean_stretch: f64,
    pub shortest_fraction: f64,
    pub note: &'static str,
}

#[derive(Debug, Clone, Serialize)]
pub struct RealGraphResult {
    pub graph_file: String,
    pub loaded_nodes: usize,
    pub loaded_edges: usize,
    pub dropped_self_loops: usize,
    pub dropped_duplicates: usize,
    pub giant_size: usize,
    pub giant_edges: usize,
    pub hubs: usize,
    pub report: StretchReport,
    pub reference: ReferenceValues,
}

#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum ExperimentResults {
    LabelDist(LabelDistResult),
    Cells(Vec<CellResult>),
    RealGraph(RealGraphResult),
}

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentOutput {
    pub config: ExperimentConfig,
    pub assumptions: Vec<String>,
    pub results: ExperimentResults,
}

pub fn run(config: &ExperimentConfig) -> Result<ExperimentOutput> {
    config.validate()?;
    let results = match config.experiment {
        ExperimentId::LabelDist => ExperimentResults::LabelDist(run_label_dist(config)?),
        ExperimentId::StretchCdf => ExperimentResults::Cells(run_stretch_cdf(config)?),
        ExperimentId::StretchVsN => ExperimentResults::Cells(run_stretch_vs_n(config)?),
        ExperimentId::StretchVsGamma => ExperimentResults::Cells(run_stretch_vs_gamma(config)?),
        ExperimentId::RealGraph => ExperimentResults::RealGraph(run_real_graph(config)?),
    };
    Ok(ExperimentOutput { config: config.clone(), assumptions: assumptions(config), results })
}

fn assumptions(config: &ExperimentConfig) -> Vec<String> {
    let mut notes = vec![
        format!("k_min = {} for power-law networks (assumed)", config.k_min),
        "H ~ ln(N)^nu anchored so that H(anchor_nodes) = anchor_hubs".to_string(),
        "closest-hub ties prefer the higher-degree hub".to_string(),
    ];
    if config.k_max.is_none() {
        notes.push("degree cutoff k_max = floor(N^(1/(gamma-1)))".to_string());
    }
    if config.experiment == ExperimentId::RealGraph && config.hubs.is_none() {
        notes.push(format!("H = {} for the real graph is assumed, pass --hubs to override", config.anchor_hubs));
    }
    notes
}

fn spec(config: &ExperimentConfig, family: Family, n: usize, gamma: f64, k_min: usize) -> NetworkSpec {
    NetworkSpec { family, n, gamma, k_min, k_max: config.k_max, mean_degree: config.mean_degree }
}

fn realize_all(config: &ExperimentConfig, spec: &NetworkSpec) -> Result<Vec<Realization>> {
    if spec.family == Family::File {
        let path = config.graph_file.as_ref().ok_or_else(|| Error::invalid("missing graph file"))?;
        return Ok(vec![load_giant(path)?.0]);
    }
    (0..config.realizations).map(|i| spec.realize(config.seed, i)).collect()
}

/// Routes pairs on every realization, once per hub exponent in `nus`.
/// All exponents share the same graphs and the same pairs.
fn evaluate_cells(
    config: &ExperimentConfig,
    spec: &NetworkSpec,
    nus: &[u32],
    networks: &[Realization],
) -> Result<Vec<CellResult>> {
    let mut pooled = vec![StretchAccumulator::default(); nus.len()];
    let mut per_nu: Vec<Vec<RealizationResult>> = vec![Vec::new(); nus.len()];
    for (index, net) in networks.iter().enumerate() {
        let graph = &net.graph;
        let hubs: Vec<usize> = nus.iter().map(|&nu| config.hubs_for(spec.n, nu, graph.node_count())).collect();
        let schemes = hubs
            .iter()
            .map(|&h| build_scheme(graph, &SchemeConfig::new(h)))
            .collect::<Result<Vec<_>>>()?;
        let pairs = config.pairs.resolve(
            graph.node_count(),
            config.exact_threshold,
            config.auto_sample_pairs,
            seed::derive(net.seed, &[3]),
        );
        let accs = evaluate_pairs_many(&schemes, pairs)?;
        for (k, acc) in accs.into_iter().enumerate() {
            let report = acc.report();
            pooled[k].merge(acc);
            log::info!(
                "{} n={} nu={} #{index}: giant {} H {} stretch {:.4} S {:.4} shortest {:.3}",
                spec.family.as_str(),
                spec.n,
                nus[k],
                graph.node_count(),
                hubs[k],
                report.mean_pair_stretch,
                report.ratio_of_averages,
                report.shortest_fraction
            );
            per_nu[k].push(RealizationResult {
                index,
                seed: net.seed,
                giant_size: graph.node_count(),
                edges: graph.edge_count(),
                hubs: hubs[k],
                discarded_stub_pairs: net.discarded_stub_pairs,
                report,
            });
        }
    }
    Ok(nus
        .iter()
        .zip(pooled)
        .zip(per_nu)
        .map(|((&nu, pooled), realizations)| {
            let collect = |f: &dyn Fn(&RealizationResult) -> f64| {
                MeanSe::of(&realizations.iter().map(f).collect::<Vec<_>>())
            };
            CellResult {
                family: spec.family,
                n: spec.n,
                gamma: spec.gamma,
                k_min: spec.k_min,
                mean_degree: spec.mean_degree,
                nu,
                hubs: config.hubs_for(spec.n, nu, spec.n),
                giant_size: collect(&|r| r.giant_size as f64),
                mean_pair_stretch: collect(&|r| r.report.mean_pair_stretch),
                ratio_of_averages: collect(&|r| r.report.ratio_of_averages),
                shortest_fraction: collect(&|r| r.report.shortest_fraction),
                pooled: pooled.report(),
                realizations,
            }
        })
        .collect())
}

fn evaluate_cell(
    config: &ExperimentConfig,
    spec: &NetworkSpec,
    nu: u32,
    networks: &[Realization],
) -> Result<CellResult> {
    Ok(evaluate_cells(config, spec, &[nu], networks)?.remove(0))
}

pub fn run_label_dist(config: &ExperimentConfig) -> Result<LabelDistResult> {
    if config.family == Family::Poisson {
        return Err(Error::invalid("label_dist runs on power-law or file networks"));
    }
    let n = config.n_values[0];
    let spec = spec(config, config.family, n, config.gamma, config.k_min);
    let networks = realize_all(config, &spec)?;
    let mut totals: BTreeMap<usize, usize> = BTreeMap::new();
    let mut node_total = 0usize;
    let mut realizations = Vec::new();
    for (index, net) in networks.iter().enumerate() {
        let graph = &net.graph;
        let nominal = if config.family == Family::File { graph.node_count() } else { n };
        let hubs = config.hubs_for(nominal, config.nu, graph.node_count());
        let scheme = build_scheme(graph, &SchemeConfig::new(hubs))?;
        let hist = label_size_distribution(&scheme);
        for (&k, &c) in &hist.entry_counts {
            *totals.entry(k).or_insert(0) += c;
        }
        node_total += hist.node_count;
        let stats = graph_stats(graph, config.exact_threshold, 64, seed::derive(net.seed, &[4]))?;
        realizations.push(LabelRealization {
            index,
            seed: net.seed,
            giant_size: graph.node_count(),
            hubs,
            diameter: stats.diameter,
            diameter_estimated: stats.estimated,
            max_entries: hist.max_entries,
            mean_entries: hist.mean_entries,
            max_bits: hist.max_bits,
            mean_bits: hist.mean_bits,
            bound_holds: hist.max_entries <= stats.diameter as usize + 1,
        });
    }
    let count = networks.len() as f64;
    let histogram = totals
        .into_iter()
        .map(|(entry_count, c)| HistogramRow {
            entry_count,
            mean_nodes: c as f64 / count,
            fraction: c as f64 / node_total as f64,
        })
        .collect();
    Ok(LabelDistResult { histogram, realizations })
}

pub fn run_stretch_cdf(config: &ExperimentConfig) -> Result<Vec<CellResult>> {
    config
        .n_values
        .iter()
        .map(|&n| {
            let spec = spec(config, config.family, n, config.gamma, config.k_min);
            let networks = realize_all(config, &spec)?;
            evaluate_cell(config, &spec, config.nu, &networks)
        })
        .collect()
}

pub fn run_stretch_vs_n(config: &ExperimentConfig) -> Result<Vec<CellResult>> {
    let mut cells = Vec::new();
    for &family in &config.families {
        let nus: &[u32] = match family {
            Family::Poisson => std::slice::from_ref(&config.er_nu),
            _ => &config.nu_values,
        };
        for &n in &config.n_values {
            let spec = spec(config, family, n, config.gamma, config.k_min);
            let networks = realize_all(config, &spec)?;
            cells.extend(evaluate_cells(config, &spec, nus, &networks)?);
        }
    }
    Ok(cells)
}

pub fn run_stretch_vs_gamma(config: &ExperimentConfig) -> Result<Vec<CellResult>> {
    let n = config.n_values[0];
    let mut cells = Vec::new();
    for &k_min in &config.k_min_values {
        for &gamma in &config.gamma_values {
            let spec = spec(config, Family::PowerLaw, n, gamma, k_min);
            let networks = realize_all(config, &spec)?;
            cells.push(evaluate_cell(config, &spec, config.nu, &networks)?);
        }
    }
    Ok(cells)
}

pub fn run_real_graph(config: &ExperimentConfig) -> Result<RealGraphResult> {
    let path = config.graph_file.as_ref().ok_or_else(|| Error::invalid("missing graph file"))?;
    let (net, dropped, loaded_edges) = load_giant(path)?;
    let graph = &net.graph;
    let hubs = config.hubs.unwrap_or(config.anchor_hubs).clamp(1, graph.node_count());
    let scheme = build_scheme(graph, &SchemeConfig::new(hubs))?;
    let pairs = config.pairs.resolve(
        graph.node_count(),
        config.exact_threshold,
        config.auto_sample_pairs,
        seed::derive(config.seed, &[3]),
    );
    let report = evaluate_pairs(&scheme, pairs)?.report();
    Ok(RealGraphResult {
        graph_file: path.display().to_string(),
        loaded_nodes: net.generated_nodes,
        loaded_edges,
        dropped_self_loops: dropped.self_loops,
        dropped_duplicates: dropped.duplicates,
        giant_size: graph.node_count(),
        giant_edges: graph.edge_count(),
        hubs,
        report,
        reference: ReferenceValues {
            mean_stretch: 1.067,
            shortest_fraction: 0.79,
            note: "published AS-level measurement on a snapshot not bundled here; not a gate",
        },
    })
}
