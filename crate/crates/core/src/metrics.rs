//! Stretch statistics and the BFS ground truth they are measured against.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::sync::{Arc, Mutex};

use rand::seq::index;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{is_connected, Graph, NodeId, UNREACHABLE};
use crate::router::{route_length, sample_pairs, PairSource, RouteTrace};
use crate::scheme::Scheme;
use crate::seed;

/// Exact shortest-path distances, one BFS per distinct source.
///
/// Results are cached per source. With a bounded capacity the oldest source
/// is evicted first, so callers should present pairs grouped by source.
pub struct DistanceOracle<'g> {
    graph: &'g Graph,
    capacity: usize,
    cache: Mutex<OracleCache>,
}

#[derive(Default)]
struct OracleCache {
    rows: HashMap<NodeId, Arc<Vec<u32>>>,
    order: VecDeque<NodeId>,
    searches: usize,
}

impl<'g> DistanceOracle<'g> {
    pub fn new(graph: &'g Graph) -> Self {
        Self::with_capacity(graph, usize::MAX)
    }

    pub fn with_capacity(graph: &'g Graph, capacity: usize) -> Self {
        DistanceOracle { graph, capacity: capacity.max(1), cache: Mutex::default() }
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn distances_from(&self, source: NodeId) -> Result<Arc<Vec<u32>>> {
        self.graph.check_node(source)?;
        if let Some(row) = self.cache.lock().unwrap().rows.get(&source) {
            return Ok(Arc::clone(row));
        }
        let row = Arc::new(crate::graph::bfs::bfs_distances(self.graph, source));
        let mut cache = self.cache.lock().unwrap();
        if let Some(existing) = cache.rows.get(&source) {
            return Ok(Arc::clone(existing));
        }
        cache.searches += 1;
        if cache.rows.len() >= self.capacity {
            if let Some(old) = cache.order.pop_front() {
                cache.rows.remove(&old);
            }
        }
        cache.rows.insert(source, Arc::clone(&row));
        cache.order.push_back(source);
        Ok(row)
    }

    pub fn distance(&self, source: NodeId, target: NodeId) -> Result<u32> {
        self.graph.check_node(target)?;
        match self.distances_from(source)?[target as usize] {
            UNREACHABLE => Err(Error::Unreachable { from: source, target }),
            d => Ok(d),
        }
    }

    /// Number of BFS runs performed so far.
    pub fn searches(&self) -> usize {
        self.cache.lock().unwrap().searches
    }
}

/// Exact counts of `(routed, shortest)` length pairs. Merging is exact, so
/// partial accumulators from parallel workers combine in any order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StretchAccumulator {
    counts: BTreeMap<(u32, u32), u64>,
}

impl StretchAccumulator {
    pub fn add(&mut self, routed: u32, shortest: u32) {
        assert!(shortest > 0, "stretch needs distinct endpoints");
        *self.counts.entry((routed, shortest)).or_insert(0) += 1;
    }

    pub fn merge(&mut self, other: StretchAccumulator) {
        for (key, c) in other.counts {
            *self.counts.entry(key).or_insert(0) += c;
        }
    }

    pub fn pair_count(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn report(&self) -> StretchReport {
        let pairs = self.pair_count();
        if pairs == 0 {
            return StretchReport::empty();
        }
        let (mut sum_r, mut sum_d, mut shortest) = (0u64, 0u64, 0u64);
        let (mut sum_s, mut sum_s2) = (0.0f64, 0.0f64);
        let mut max = (1u32, 1u32);
        for (&(r, d), &c) in &self.counts {
            sum_r += r as u64 * c;
            sum_d += d as u64 * c;
            if r == d {
                shortest += c;
            }
            let s = r as f64 / d as f64;
            sum_s += s * c as f64;
            sum_s2 += s * s * c as f64;
            if r as u64 * max.1 as u64 > max.0 as u64 * d as u64 {
                max = (r, d);
            }
        }
        let n = pairs as f64;
        let mean = sum_s / n;
        let std_error = if pairs > 1 {
            let var = ((sum_s2 - n * mean * mean) / (n - 1.0)).max(0.0);
            (var / n).sqrt()
        } else {
            0.0
        };
        StretchReport {
            pair_count: pairs,
            mean_pair_stretch: mean,
            pair_stretch_std_error: std_error,
            ratio_of_averages: sum_r as f64 / sum_d as f64,
            mean_routed: sum_r as f64 / n,
            mean_shortest: sum_d as f64 / n,
            shortest_fraction: shortest as f64 / n,
            max_stretch: max.0 as f64 / max.1 as f64,
            inverse_cdf: self.inverse_cdf(max),
        }
    }

    /// P(stretch > x) on the grid 1.00, 1.05, ..., 3.00 plus the largest
    /// observed stretch, ordered by x.
    fn inverse_cdf(&self, max: (u32, u32)) -> Vec<CdfPoint> {
        let pairs = self.pair_count() as f64;
        let greater = |num: u64, den: u64| -> f64 {
            // stretch r/d > num/den  <=>  r*den > num*d
            let c: u64 = self
                .counts
                .iter()
                .filter(|(&(r, d), _)| r as u64 * den > num * d as u64)
                .map(|(_, &c)| c)
                .sum();
            c as f64 / pairs
        };
        let mut points: Vec<(u64, u64)> = (0..=CDF_STEPS).map(|k| (CDF_DENOM + k, CDF_DENOM)).collect();
        let max = (max.0 as u64, max.1 as u64);
        if !points.iter().any(|&(a, b)| a * max.1 == max.0 * b) {
            let at = points.partition_point(|&(a, b)| a * max.1 < max.0 * b);
            points.insert(at, max);
        }
        points
            .into_iter()
            .map(|(num, den)| CdfPoint { value: num as f64 / den as f64, p_greater: greater(num, den) })
            .collect()
    }
}

const CDF_DENOM: u64 = 20;
const CDF_STEPS: u64 = 40;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CdfPoint {
    pub value: f64,
    pub p_greater: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StretchReport {
    pub pair_count: u64,
    /// Mean over pairs of r(s,t) / d(s,t).
    pub mean_pair_stretch: f64,
    pub pair_stretch_std_error: f64,
    /// S = <r> / <d>.
    pub ratio_of_averages: f64,
    pub mean_routed: f64,
    pub mean_shortest: f64,
    pub shortest_fraction: f64,
    pub max_stretch: f64,
    pub inverse_cdf: Vec<CdfPoint>,
}

impl StretchReport {
    fn empty() -> Self {
        StretchReport {
            pair_count: 0,
            mean_pair_stretch: f64::NAN,
            pair_stretch_std_error: f64::NAN,
            ratio_of_averages: f64::NAN,
            mean_routed: f64::NAN,
            mean_shortest: f64::NAN,
            shortest_fraction: f64::NAN,
            max_stretch: f64::NAN,
            inverse_cdf: Vec::new(),
        }
    }
}

/// Aggregates traces against exact distances. Rejects self-pairs and traces
/// shorter than the true distance.
pub fn stretch_report<I>(traces: I, oracle: &DistanceOracle<'_>) -> Result<StretchReport>
where
    I: IntoIterator<Item = Result<RouteTrace>>,
{
    let mut acc = StretchAccumulator::default();
    for trace in traces {
        let trace = trace?;
        if trace.source == trace.destination {
            return Err(Error::invalid("stretch is undefined for s = t"));
        }
        let d = oracle.distance(trace.source, trace.destination)?;
        let r = trace.hops() as u32;
        if r < d {
            return Err(Error::InvariantViolation(format!(
                "route {} -> {} has {r} hops, shorter than distance {d}",
                trace.source, trace.destination
            )));
        }
        acc.add(r, d);
    }
    Ok(acc.report())
}

/// Routes the selected pairs and measures them, one BFS per source, in
/// parallel over sources. Every pair is checked against
/// `d(s,t) <= r(s,t) <= d(s,h_t) + d(h_t,t)`.
pub fn evaluate_pairs(scheme: &Scheme<'_>, source: PairSource) -> Result<StretchAccumulator> {
    let mut out = evaluate_pairs_many(std::slice::from_ref(scheme), source)?;
    Ok(out.pop().expect("one scheme in, one accumulator out"))
}

/// [`evaluate_pairs`] for several schemes over the same graph, sharing each
/// source's BFS. Returns one accumulator per scheme.
pub fn evaluate_pairs_many(schemes: &[Scheme<'_>], source: PairSource) -> Result<Vec<StretchAccumulator>> {
    let Some(first) = schemes.first() else {
        return Ok(Vec::new());
    };
    let graph = first.graph();
    if schemes.iter().any(|s| !std::ptr::eq(s.graph(), graph)) {
        return Err(Error::invalid("schemes must share one graph"));
    }
    let n = graph.node_count();
    let groups: Vec<(NodeId, Vec<NodeId>)> = match source {
        PairSource::Exhaustive => graph.nodes().map(|s| (s, Vec::new())).collect(),
        PairSource::Sampled { count, seed } => {
            let mut groups: Vec<(NodeId, Vec<NodeId>)> = Vec::new();
            for (s, t) in sample_pairs(n, count, seed) {
                match groups.last_mut() {
                    Some((last, targets)) if *last == s => targets.push(t),
                    _ => groups.push((s, vec![t])),
                }
            }
            groups
        }
    };
    let exhaustive = matches!(source, PairSource::Exhaustive);
    let empty = || vec![StretchAccumulator::default(); schemes.len()];

    groups
        .par_iter()
        .map_init(
            || (vec![UNREACHABLE; n], VecDeque::new()),
            |(dist, queue), (s, targets)| -> Result<Vec<StretchAccumulator>> {
                crate::graph::bfs::bfs_distances_into(graph, *s, dist, queue);
                let mut accs = empty();
                let mut measure = |t: NodeId| -> Result<()> {
                    let d = dist[t as usize];
                    if d == UNREACHABLE {
                        return Err(Error::Unreachable { from: *s, target: t });
                    }
                    for (scheme, acc) in schemes.iter().zip(accs.iter_mut()) {
                        let r = route_length(scheme, *s, t)?;
                        let hub = scheme.closest_hub(t);
                        let via_hub =
                            scheme.hub_distance(*s, hub).unwrap() + scheme.hub_distance(t, hub).unwrap();
                        if r < d || r > via_hub {
                            return Err(Error::InvariantViolation(format!(
                                "route {s} -> {t}: r = {r} outside [{d}, {via_hub}]"
                            )));
                        }
                        acc.add(r, d);
                    }
                    Ok(())
                };
                if exhaustive {
                    for t in graph.nodes().filter(|&t| t != *s) {
                        measure(t)?;
                    }
                } else {
                    for &t in targets {
                        measure(t)?;
                    }
                }
                Ok(accs)
            },
        )
        .try_reduce(empty, |mut a, b| {
            for (x, y) in a.iter_mut().zip(b) {
                x.merge(y);
            }
            Ok(a)
        })
}

/// Half-open degree ranges `[bounds[i], bounds[i+1])`; the last is unbounded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeBuckets {
    bounds: Vec<usize>,
}

impl DegreeBuckets {
    pub fn new(bounds: Vec<usize>) -> Result<Self> {
        if bounds.is_empty() || bounds.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid("bucket bounds must be non-empty and strictly increasing"));
        }
        Ok(DegreeBuckets { bounds })
    }

    /// `[1,2), [2,4), [4,8), ...` up to `max_degree`.
    pub fn powers_of_two(max_degree: usize) -> Self {
        let mut bounds = vec![1];
        while bounds.last().unwrap() * 2 <= max_degree {
            bounds.push(bounds.last().unwrap() * 2);
        }
        DegreeBuckets { bounds }
    }

    /// One bucket per degree value in `values`.
    pub fn exact(values: &[usize]) -> Result<Self> {
        let mut bounds: Vec<usize> = values.to_vec();
        bounds.sort_unstable();
        bounds.dedup();
        Self::new(bounds)
    }

    pub fn len(&self) -> usize {
        self.bounds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bounds.is_empty()
    }

    pub fn bucket_of(&self, degree: usize) -> Option<usize> {
        match self.bounds.partition_point(|&b| b <= degree) {
            0 => None,
            i => Some(i - 1),
        }
    }

    fn range(&self, i: usize) -> (usize, Option<usize>) {
        (self.bounds[i], self.bounds.get(i + 1).map(|b| b - 1))
    }
}

#[derive(Debug, Clone, Copy)]
pub enum TargetPolicy {
    /// Every other node of each graph.
    All,
    /// This many distinct random targets per graph.
    Sample(usize),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BucketDistance {
    pub min_degree: usize,
    /// Inclusive; `None` for the open-ended last bucket.
    pub max_degree: Option<usize>,
    pub members: usize,
    pub mean_distance: f64,
    pub std_error: f64,
}

/// Mean distance from nodes of each degree bucket to random targets.
///
/// Each node contributes its mean distance to the chosen targets (itself
/// excluded); the bucket reports the mean and standard error of those
/// per-node values, pooled over the ensemble. Empty buckets are dropped.
pub fn degree_distance_monotonicity(
    graphs: &[Graph],
    buckets: &DegreeBuckets,
    targets: TargetPolicy,
    seed: u64,
) -> Result<Vec<BucketDistance>> {
    if graphs.is_empty() {
        return Err(Error::invalid("empty ensemble"));
    }
    let per_graph = graphs
        .par_iter()
        .enumerate()
        .map(|(gi, g)| -> Result<Vec<(usize, f64)>> {
            if g.node_count() < 2 || !is_connected(g) {
                return Err(Error::Disconnected);
            }
            let n = g.node_count();
            let chosen: Vec<NodeId> = match targets {
                TargetPolicy::All => g.nodes().collect(),
                TargetPolicy::Sample(k) => {
                    let mut rng = seed::rng(seed::derive(seed, &[gi as u64]));
                    index::sample(&mut rng, n, k.min(n)).into_iter().map(|i| i as NodeId).collect()
                }
            };
            let mut sum = vec![0u64; n];
            let mut count = vec![0u32; n];
            let mut dist = vec![UNREACHABLE; n];
            let mut queue = VecDeque::new();
            for &t in &chosen {
                crate::graph::bfs::bfs_distances_into(g, t, &mut dist, &mut queue);
                for a in 0..n {
                    if a != t as usize {
                        sum[a] += dist[a] as u64;
                        count[a] += 1;
                    }
                }
            }
            Ok(g.nodes()
                .filter(|&a| count[a as usize] > 0)
                .filter_map(|a| {
                    let b = buckets.bucket_of(g.degree(a))?;
                    Some((b, sum[a as usize] as f64 / count[a as usize] as f64))
                })
                .collect())
        })
        .collect::<Result<Vec<_>>>()?;

    let mut stats = vec![(0usize, 0.0f64, 0.0f64); buckets.len()];
    for (b, x) in per_graph.into_iter().flatten() {
        let s = &mut stats[b];
        s.0 += 1;
        s.1 += x;
        s.2 += x * x;
    }
    let mut out = Vec::new();
    for (i, &(m, sum, sum2)) in stats.iter().enumerate() {
        let (min_degree, max_degree) = buckets.range(i);
        if m == 0 {
            log::warn!("degree bucket [{min_degree}, {max_degree:?}] is empty; dropped");
            continue;
        }
        let mean = sum / m as f64;
        let std_error = if m > 1 {
            (((sum2 - m as f64 * mean * mean) / (m - 1) as f64).max(0.0) / m as f64).sqrt()
        } else {
            0.0
        };
        out.push(BucketDistance { min_degree, max_degree, members: m, mean_distance: mean, std_error });
    }
    Ok(out)
}

/// Adjacent buckets whose means increase by more than the sum of their
/// standard errors, as `(lower bucket index, higher bucket index)`.
pub fn monotonicity_violations(buckets: &[BucketDistance]) -> Vec<(usize, usize)> {
    buckets
        .windows(2)
        .enumerate()
        .filter(|(_, w)| w[1].mean_distance > w[0].mean_distance + w[0].std_error + w[1].std_error)
        .map(|(i, _)| (i, i + 1))
        .collect()
}
