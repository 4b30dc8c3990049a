use std::io::Write;

use crate::error::Result;

use super::config::{ExperimentConfig, OutputFormat};
use super::runner::{CellResult, ExperimentOutput, ExperimentResults, MeanSe};

const ECHO: [&str; 12] = [
    "experiment", "family", "n", "gamma", "k_min", "k_max", "mean_degree", "nu", "hubs", "seed",
    "realizations", "pairs",
];

fn echo(config: &ExperimentConfig, family: &str, n: usize, gamma: f64, k_min: usize, nu: u32, hubs: usize) -> Vec<String> {
    vec![
        config.experiment.as_str().to_string(),
        family.to_string(),
        n.to_string(),
        gamma.to_string(),
        k_min.to_string(),
        config.k_max.map_or_else(|| "natural".to_string(), |k| k.to_string()),
        config.mean_degree.to_string(),
        nu.to_string(),
        hubs.to_string(),
        config.seed.to_string(),
        config.realizations.to_string(),
        config.pairs.to_string(),
    ]
}

fn cell_echo(config: &ExperimentConfig, cell: &CellResult) -> Vec<String> {
    echo(config, cell.family.as_str(), cell.n, cell.gamma, cell.k_min, cell.nu, cell.hubs)
}

fn header(extra: &[&str]) -> Vec<String> {
    ECHO.iter().chain(extra).map(|s| s.to_string()).collect()
}

fn push_mean_se(row: &mut Vec<String>, v: MeanSe) {
    row.push(v.mean.to_string());
    row.push(v.std_error.to_string());
}

/// Header and rows of the CSV form of an experiment output.
pub fn csv_rows(output: &ExperimentOutput) -> (Vec<String>, Vec<Vec<String>>) {
    let config = &output.config;
    let family = config.family.as_str();
    let mut rows = Vec::new();
    let head = match &output.results {
        ExperimentResults::LabelDist(result) => {
            let n = result.realizations.first().map_or(0, |r| r.giant_size);
            let n = if config.family == super::Family::File { n } else { config.n_values[0] };
            let hubs = result.realizations.first().map_or(0, |r| r.hubs);
            for h in &result.histogram {
                let mut row = echo(config, family, n, config.gamma, config.k_min, config.nu, hubs);
                row.extend([h.entry_count.to_string(), h.mean_nodes.to_string(), h.fraction.to_string()]);
                rows.push(row);
            }
            header(&["entry_count", "mean_nodes", "fraction"])
        }
        ExperimentResults::Cells(cells) if config.experiment == super::ExperimentId::StretchCdf => {
            for cell in cells {
                for point in &cell.pooled.inverse_cdf {
                    let mut row = cell_echo(config, cell);
                    row.extend([
                        point.value.to_string(),
                        point.p_greater.to_string(),
                        cell.shortest_fraction.mean.to_string(),
                        cell.mean_pair_stretch.mean.to_string(),
                    ]);
                    rows.push(row);
                }
            }
            header(&["stretch", "p_greater", "shortest_fraction", "mean_pair_stretch"])
        }
        ExperimentResults::Cells(cells) => {
            for cell in cells {
                let mut row = cell_echo(config, cell);
                push_mean_se(&mut row, cell.giant_size);
                push_mean_se(&mut row, cell.mean_pair_stretch);
                push_mean_se(&mut row, cell.ratio_of_averages);
                push_mean_se(&mut row, cell.shortest_fraction);
                row.push(cell.pooled.max_stretch.to_string());
                rows.push(row);
            }
            header(&[
                "giant_size", "giant_size_se", "mean_pair_stretch", "mean_pair_stretch_se",
                "ratio_of_averages", "ratio_of_averages_se", "shortest_fraction",
                "shortest_fraction_se", "max_stretch",
            ])
        }
        ExperimentResults::RealGraph(r) => {
            let mut row = echo(config, family, r.giant_size, config.gamma, config.k_min, config.nu, r.hubs);
            row.extend([
                r.loaded_nodes.to_string(),
                r.giant_edges.to_string(),
                r.report.pair_count.to_string(),
                r.report.mean_pair_stretch.to_string(),
                r.report.ratio_of_averages.to_string(),
                r.report.shortest_fraction.to_string(),
                r.report.max_stretch.to_string(),
            ]);
            rows.push(row);
            header(&[
                "loaded_nodes", "giant_edges", "pair_count", "mean_pair_stretch",
                "ratio_of_averages", "shortest_fraction", "max_stretch",
            ])
        }
    };
    (head, rows)
}

pub fn write_output<W: Write>(output: &ExperimentOutput, format: OutputFormat, mut out: W) -> Result<()> {
    match format {
        OutputFormat::Json => {
            serde_json::to_writer_pretty(&mut out, output)?;
            writeln!(out)?;
        }
        OutputFormat::Csv => {
            let (head, rows) = csv_rows(output);
            let mut w = csv::Writer::from_writer(out);
            w.write_record(&head)?;
            for row in rows {
                w.write_record(&row)?;
            }
            w.flush()?;
        }
    }
    Ok(())
}
