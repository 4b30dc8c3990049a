//! Acceptance criteria. Each test prints one `[PASS]`/`[FAIL]` line.
//!

use std::collections::VecDeque;
use std::io::Write;
use std::sync::OnceLock;

use hubroute::experiments::{self, CellResult, ExperimentConfig, ExperimentId, ExperimentResults, Family, NetworkSpec};
use hubroute::generators::random_tree;
use hubroute::graph::graph_stats;
use hubroute::metrics::{
    degree_distance_monotonicity, evaluate_pairs, monotonicity_violations, DegreeBuckets, TargetPolicy,
};
use hubroute::router::{route, PairSource};
use hubroute::{build_scheme, Graph, NodeId, SchemeConfig};

// Written straight to stderr so the lines show up without `--nocapture`.
fn report(line: &str) {
    let _ = writeln!(std::io::stderr(), "{line}");
}

fn verdict(id: &str, name: &str, ok: bool, detail: &str) {
    let tag = if ok { "PASS" } else { "FAIL" };
    report(&format!("[{tag}] {id} {name}: {detail}"));
}

/// Plain BFS kept separate from the library's search.
fn oracle_distances(g: &Graph, s: NodeId) -> Vec<Option<u32>> {
    let mut dist = vec![None; g.node_count()];
    dist[s as usize] = Some(0);
    let mut queue = VecDeque::from([s]);
    while let Some(u) = queue.pop_front() {
        let d = dist[u as usize].unwrap();
        for &v in g.neighbors(u) {
            if dist[v as usize].is_none() {
                dist[v as usize] = Some(d + 1);
                queue.push_back(v);
            }
        }
    }
    dist
}

fn power_law(n: usize, k_min: usize, index: usize, seed: u64) -> Graph {
    let spec = NetworkSpec { family: Family::PowerLaw, n, gamma: 2.3, k_min, k_max: None, mean_degree: 7.0 };
    spec.realize(seed, index).unwrap().graph
}

#[test]
fn c1_tree_optimality() {
    let sizes = [10, 100, 1000];
    let hub_counts = [1, 3, 10];
    let mut failures = Vec::new();
    let mut pairs = 0u64;
    for i in 0..100usize {
        let n = sizes[i % 3];
        let tree = random_tree(n, 1000 + i as u64).unwrap();
        let h = hub_counts[(i / 3) % 3].min(n);
        let scheme = build_scheme(&tree, &SchemeConfig::new(h)).unwrap();
        let report = evaluate_pairs(&scheme, PairSource::Exhaustive).unwrap().report();
        pairs += report.pair_count;
        let ok = report.pair_count == (n * (n - 1)) as u64
            && report.shortest_fraction == 1.0
            && report.mean_pair_stretch == 1.0
            && report.ratio_of_averages == 1.0;
        if !ok {
            failures.push((i, n, report.shortest_fraction));
        }
    }
    verdict(
        "C1",
        "tree optimality",
        failures.is_empty(),
        &format!("100 trees, {pairs} ordered pairs, non-optimal trees: {failures:?}"),
    );
    assert!(failures.is_empty());
}

#[test]
fn c2_oracle_equivalence() {
    let mut checked = 0u64;
    let mut problems = Vec::new();
    for i in 0..50usize {
        let n = 60 + (i * 37) % 241;
        let g = power_law(n, 2, i, 77);
        let h = [1, 3, 10][i % 3].min(g.node_count());
        let scheme = build_scheme(&g, &SchemeConfig::new(h)).unwrap();
        let all: Vec<_> = g.nodes().map(|s| oracle_distances(&g, s)).collect();
        for s in g.nodes() {
            for t in g.nodes() {
                let trace = route(&scheme, s, t).unwrap();
                let d = all[s as usize][t as usize].unwrap();
                let hub = scheme.closest_hub(t);
                let bound = all[s as usize][hub as usize].unwrap() + all[hub as usize][t as usize].unwrap();
                let r = trace.hops() as u32;
                let walk_ok = trace.walk.first() == Some(&s)
                    && trace.walk.last() == Some(&t)
                    && trace.walk.windows(2).all(|w| g.has_edge(w[0], w[1]))
                    && trace.rules.len() == trace.hops();
                if !walk_ok || r < d || r > bound {
                    problems.push((i, s, t, r, d, bound));
                }
                checked += 1;
            }
        }
    }
    verdict(
        "C2",
        "oracle equivalence",
        problems.is_empty(),
        &format!("{checked} traces on 50 graphs, violations: {}", problems.len()),
    );
    assert!(problems.is_empty(), "{:?}", &problems[..problems.len().min(5)]);
}

fn headline(k_min: usize) -> (f64, f64, Vec<f64>) {
    let mut config = ExperimentConfig::defaults_for(ExperimentId::StretchCdf);
    config.n_values = vec![10_000];
    config.k_min = k_min;
    config.nu = 1;
    config.realizations = 5;
    config.pairs = experiments::PairPolicy::Sample(100_000);
    let cells = experiments::run_stretch_cdf(&config).unwrap();
    let cell = &cells[0];
    assert_eq!(cell.hubs, 100);
    let per_real = cell.realizations.iter().map(|r| r.report.shortest_fraction).collect();
    (cell.shortest_fraction.mean, cell.mean_pair_stretch.mean, per_real)
}

#[test]
fn c3_headline() {
    let (shortest, stretch, per_real) = headline(2);
    let ok = (shortest - 0.75).abs() <= 0.05 && stretch <= 1.15;
    verdict(
        "C3",
        "N=10000 shortest fraction 0.75 +/- 0.05, mean stretch <= 1.15",
        ok,
        &format!("k_min=2: shortest fraction {shortest:.4} (per realization {per_real:.3?}), mean stretch {stretch:.4}"),
    );
    if !ok {
        for k_min in [1, 3] {
            let (shortest, stretch, _) = headline(k_min);
            report(&format!("       sensitivity k_min={k_min}: shortest fraction {shortest:.4}, mean stretch {stretch:.4}"));
        }
    }
    assert!(ok, "shortest fraction {shortest} / stretch {stretch} outside target");
}

fn fig3_grid() -> &'static [CellResult] {
    static GRID: OnceLock<Vec<CellResult>> = OnceLock::new();
    GRID.get_or_init(|| {
        let mut config = ExperimentConfig::defaults_for(ExperimentId::StretchVsN);
        config.realizations = 5;
        config.n_values = vec![1000, 2500, 5000, 10_000];
        config.nu_values = vec![0, 1, 2, 3];
        config.families = vec![Family::PowerLaw, Family::Poisson];
        match experiments::run(&config).unwrap().results {
            ExperimentResults::Cells(cells) => cells,
            _ => unreachable!(),
        }
    })
}

#[test]
fn c4_ratio_of_averages_below_two() {
    let grid = fig3_grid();
    let worst = grid
        .iter()
        .flat_map(|c| c.realizations.iter().map(move |r| (c, r.report.ratio_of_averages)))
        .fold((None, 0.0f64), |acc, (c, s)| if s > acc.1 { (Some(c), s) } else { acc });
    let ok = grid.len() == 20 && grid.iter().all(|c| c.realizations.iter().all(|r| r.report.ratio_of_averages < 2.0));
    let (cell, s) = worst;
    let cell = cell.unwrap();
    verdict(
        "C4",
        "S < 2 in every stretch_vs_n cell",
        ok,
        &format!("{} cells, worst S {s:.4} ({} N={} nu={})", grid.len(), cell.family.as_str(), cell.n, cell.nu),
    );
    assert!(ok);
}

#[test]
fn c5_scale_free_beats_er() {
    let grid = fig3_grid();
    let mut ok = true;
    let mut detail = Vec::new();
    for n in [1000, 2500, 5000, 10_000] {
        let er = grid.iter().find(|c| c.family == Family::Poisson && c.n == n && c.nu == 3).unwrap();
        let mut min_margin = f64::INFINITY;
        for sf in grid.iter().filter(|c| c.family == Family::PowerLaw && c.n == n) {
            let gap = er.mean_pair_stretch.mean - sf.mean_pair_stretch.mean;
            let se = (er.mean_pair_stretch.std_error.powi(2) + sf.mean_pair_stretch.std_error.powi(2)).sqrt();
            ok &= gap > 2.0 * se;
            min_margin = min_margin.min(gap / se);
        }
        detail.push(format!("N={n}: ER {:.4}, min gap {min_margin:.1} SE", er.mean_pair_stretch.mean));
    }
    verdict("C5", "ER stretch exceeds scale-free by > 2 SE", ok, &detail.join("; "));
    assert!(ok);
}

#[test]
fn c6_flat_in_n() {
    let grid = fig3_grid();
    let mut ok = true;
    let mut detail = Vec::new();
    for nu in 0..=3 {
        let values: Vec<f64> = grid
            .iter()
            .filter(|c| c.family == Family::PowerLaw && c.nu == nu)
            .map(|c| c.mean_pair_stretch.mean)
            .collect();
        assert_eq!(values.len(), 4);
        let spread = values.iter().cloned().fold(f64::MIN, f64::max) - values.iter().cloned().fold(f64::MAX, f64::min);
        ok &= spread < 0.05;
        detail.push(format!("nu={nu}: {spread:.4}"));
    }
    verdict("C6", "scale-free mean stretch spread over N < 0.05", ok, &detail.join(", "));
    assert!(ok);
}

#[test]
fn c7_label_and_table_bounds() {
    let mut graphs: Vec<(String, Graph, usize)> = Vec::new();
    for (i, n) in [1000, 2500, 5000, 10_000].into_iter().enumerate() {
        for nu in [0, 3] {
            let h = experiments::HubScalePolicy::new(nu).hubs_for(n);
            graphs.push((format!("power_law N={n} nu={nu}"), power_law(n, 2, i, 5), h));
        }
        let er = NetworkSpec { family: Family::Poisson, n, gamma: 2.3, k_min: 1, k_max: None, mean_degree: 7.0 };
        graphs.push((format!("poisson N={n}"), er.realize(5, i).unwrap().graph, experiments::HubScalePolicy::new(3).hubs_for(n)));
    }
    for k_min in [1, 3] {
        graphs.push((format!("power_law N=2000 k_min={k_min}"), power_law(2000, k_min, 0, 6), 20));
    }
    for i in 0..3 {
        graphs.push((format!("tree {i}"), random_tree(500, i).unwrap(), 5));
    }
    let mut bad = Vec::new();
    let mut worst_slack = u32::MAX;
    for (name, g, h) in &graphs {
        let h = (*h).min(g.node_count());
        let scheme = build_scheme(g, &SchemeConfig::new(h)).unwrap();
        let diameter = graph_stats(g, usize::MAX, 0, 0).unwrap().diameter;
        let max_entries = scheme.labels().iter().map(|l| l.entry_count()).max().unwrap() as u32;
        let bits = hubroute::scheme::id_bits(g.node_count()) as u64;
        let bits_ok = scheme.labels().iter().all(|l| l.bit_size() <= (diameter as u64 + 1) * bits);
        let tables_ok = g.nodes().all(|u| scheme.table(u).entry_count() == h + g.degree(u));
        if max_entries > diameter + 1 || !bits_ok || !tables_ok {
            bad.push(name.clone());
        }
        worst_slack = worst_slack.min(diameter + 1 - max_entries.min(diameter + 1));
    }
    verdict(
        "C7",
        "max label entries <= D + 1 and table entries = H + k",
        bad.is_empty(),
        &format!("{} graphs, minimum slack {worst_slack}, failing: {bad:?}", graphs.len()),
    );
    assert!(bad.is_empty());
}

#[test]
fn c8_degree_distance_monotonicity() {
    let graphs: Vec<Graph> = (0..50).map(|i| power_law(2000, 2, i, 31)).collect();
    let max_degree = graphs.iter().map(|g| g.max_degree()).max().unwrap();
    // Degrees below k_min = 2 only appear where a discarded multi-edge left a
    // node with a single link (usually to a hub); they sit outside the
    // sampled distribution, so the buckets start at k_min. Reported below.
    let bounds: Vec<usize> = (1..).map(|p| 1usize << p).take_while(|&b| b <= max_degree).collect();
    let buckets = DegreeBuckets::new(bounds).unwrap();
    let out = degree_distance_monotonicity(&graphs, &buckets, TargetPolicy::Sample(50), 8).unwrap();
    let below = degree_distance_monotonicity(&graphs, &DegreeBuckets::new(vec![1, 2]).unwrap(), TargetPolicy::Sample(50), 8)
        .unwrap()
        .into_iter()
        .find(|b| b.min_degree == 1);
    let violations = monotonicity_violations(&out);
    let summary: Vec<String> = out
        .iter()
        .map(|b| format!("{}+:{:.3}±{:.3}", b.min_degree, b.mean_distance, b.std_error))
        .collect();
    verdict(
        "C8",
        "mean distance non-increasing in degree (±1 SE)",
        violations.is_empty() && out.len() >= 4,
        &format!("{} buckets [{}], violations {violations:?}", out.len(), summary.join(" ")),
    );
    if let Some(b) = below {
        report(&format!(
            "       degree 1 (below k_min): {} members, mean distance {:.3}±{:.3}",
            b.members, b.mean_distance, b.std_error
        ));
    }
    assert!(violations.is_empty() && out.len() >= 4);
}

#[test]
fn c9_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("net.txt");
    let g = power_law(400, 2, 0, 3);
    hubroute::graph::io::write_edge_list(&g, std::fs::File::create(&file).unwrap()).unwrap();

    let mut mismatches = Vec::new();
    let ids = [
        ExperimentId::LabelDist,
        ExperimentId::StretchCdf,
        ExperimentId::StretchVsN,
        ExperimentId::StretchVsGamma,
        ExperimentId::RealGraph,
    ];
    for id in ids {
        let mut config = ExperimentConfig::defaults_for(id);
        config.n_values = vec![300, 600];
        config.gamma_values = vec![2.3, 2.7];
        config.k_min_values = vec![1, 2];
        config.realizations = 2;
        config.pairs = experiments::PairPolicy::Sample(2000);
        config.graph_file = Some(file.clone());
        for format in [experiments::OutputFormat::Csv, experiments::OutputFormat::Json] {
            let render = || {
                let mut buf = Vec::new();
                experiments::write_output(&experiments::run(&config).unwrap(), format, &mut buf).unwrap();
                buf
            };
            if render() != render() {
                mismatches.push(format!("{}/{format:?}", id.as_str()));
            }
        }
    }
    verdict(
        "C9",
        "byte-identical outputs for identical config and seed",
        mismatches.is_empty(),
        &format!("5 experiments x 2 formats, mismatches: {mismatches:?}"),
    );
    assert!(mismatches.is_empty());
}
