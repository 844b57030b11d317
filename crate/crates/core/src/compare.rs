//! Histogram binning (`cut2bin`), Jensen-Shannon divergence, random-walk
//! background sampling, and the per-candidate divergence profile.

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::candidate::CandidateSubgraph;
use crate::error::{Error, Result};
use crate::graph::{NodeId, PropertyGraph};
use crate::metrics::{network_bundle, MetricBundle, MetricKind, UndirectedView};
use crate::scalar::{cast, cast_usize, Real};

/// Teleport probability for background random walks.
const TELEPORT: f64 = 0.15;
/// Walk step budget as a multiple of the target node count.
const STEP_CAP_FACTOR: usize = 50;
/// Redraws allowed when a walk's largest component degenerates.
const WALK_RETRIES: usize = 5;

/// A binned distribution: `n + 1` ascending edges, `n` counts, and the
/// count-normalized probabilities (all zero when the histogram is empty).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram<T> {
    pub bin_edges: Vec<T>,
    pub counts: Vec<u64>,
    pub normalized: Vec<T>,
}

impl<T: Real> Histogram<T> {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn bins(&self) -> usize {
        self.counts.len()
    }

    /// CSV rows `edge_low,edge_high,count,normalized`, with header.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("edge_low,edge_high,count,normalized\n");
        for i in 0..self.bins() {
            out.push_str(&format!(
                "{},{},{},{}\n",
                self.bin_edges[i],
                self.bin_edges[i + 1],
                self.counts[i],
                self.normalized[i]
            ));
        }
        out
    }
}

fn bin_index<T: Real>(edges: &[T], value: T) -> usize {
    let last = edges.len() - 2;
    if value < edges[0] {
        return 0; // clamp below range
    }
    if value >= edges[edges.len() - 1] {
        return last; // clamp above range
    }
    // first edge strictly greater than value, minus one
    let mut lo = 0usize;
    let mut hi = edges.len() - 1;
    while lo + 1 < hi {
        let mid = (lo + hi) / 2;
        if edges[mid] <= value {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo.min(last)
}

/// Bin values into a histogram.
///
/// Without explicit edges, `n_bins` equi-width bins span the value range;
/// a degenerate range (min = max) produces a single bin of width one
/// centered on the value. With explicit edges, out-of-range values are
/// clamped into the first or last bin, so no mass is ever lost.
pub fn cut2bin<T: Real>(values: &[T], n_bins: usize, edges: Option<&[T]>) -> Result<Histogram<T>> {
    let edges: Vec<T> = match edges {
        Some(given) => {
            if given.len() < 2 || given.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::NonAscendingEdges);
            }
            given.to_vec()
        }
        None => {
            if values.is_empty() {
                return Err(Error::EmptyValues);
            }
            if n_bins == 0 {
                return Err(Error::Invalid("n_bins must be positive".into()));
            }
            let min = values.iter().copied().fold(T::infinity(), T::min);
            let max = values.iter().copied().fold(T::neg_infinity(), T::max);
            if min == max {
                let half = cast::<T>(0.5);
                vec![min - half, min + half]
            } else {
                let width = (max - min) / cast_usize(n_bins);
                let mut edges: Vec<T> = (0..n_bins)
                    .map(|i| min + width * cast_usize(i))
                    .collect();
                edges.push(max); // exact upper edge, immune to rounding
                if edges.windows(2).any(|w| w[0] >= w[1]) {
                    // range too narrow for the requested bin count
                    let half = cast::<T>(0.5);
                    vec![min - half, max + half]
                } else {
                    edges
                }
            }
        }
    };
    let mut counts = vec![0u64; edges.len() - 1];
    for &v in values {
        counts[bin_index(&edges, v)] += 1;
    }
    let total = counts.iter().sum::<u64>();
    let normalized = if total == 0 {
        vec![T::zero(); counts.len()]
    } else {
        counts
            .iter()
            .map(|&c| cast_usize::<T>(c as usize) / cast_usize(total as usize))
            .collect()
    };
    Ok(Histogram {
        bin_edges: edges,
        counts,
        normalized,
    })
}

/// Base-2 Jensen-Shannon divergence of two histograms over identical bin
/// edges; always in `[0, 1]`.
pub fn js_divergence<T: Real>(p: &Histogram<T>, q: &Histogram<T>) -> Result<T> {
    if p.bin_edges != q.bin_edges {
        return Err(Error::IncompatibleHistograms);
    }
    if p.total() == 0 || q.total() == 0 {
        return Err(Error::EmptyValues);
    }
    let half = cast::<T>(0.5);
    let mut acc = T::zero();
    for (&pi, &qi) in p.normalized.iter().zip(&q.normalized) {
        let mi = half * (pi + qi);
        if pi > T::zero() {
            acc += half * pi * (pi / mi).log2();
        }
        if qi > T::zero() {
            acc += half * qi * (qi / mi).log2();
        }
    }
    Ok(acc.max(T::zero()).min(T::one()))
}

/// Bin the reference equi-width, bin the candidate with the reference's
/// edges, and return the divergence with both histograms.
///
/// When the reference range is degenerate (all values equal) its single bin
/// cannot separate anything, so the edges are rebuilt over the combined
/// range of both lists; identical inputs still compare to zero and disjoint
/// constant inputs to one.
pub fn compare_histograms<T: Real>(
    candidate_values: &[T],
    reference_values: &[T],
    n_bins: usize,
) -> Result<(T, Histogram<T>, Histogram<T>)> {
    if candidate_values.is_empty() || reference_values.is_empty() {
        return Err(Error::EmptyValues);
    }
    let mut reference = cut2bin(reference_values, n_bins, None)?;
    if reference.bins() == 1 {
        let mut combined = reference_values.to_vec();
        combined.extend_from_slice(candidate_values);
        let min = combined.iter().copied().fold(T::infinity(), T::min);
        let max = combined.iter().copied().fold(T::neg_infinity(), T::max);
        if min < max {
            let widened = cut2bin(&combined, n_bins, None)?;
            reference = cut2bin(reference_values, n_bins, Some(&widened.bin_edges))?;
        }
    }
    let candidate = cut2bin(candidate_values, n_bins, Some(&reference.bin_edges))?;
    let jsd = js_divergence(&candidate, &reference)?;
    Ok((jsd, candidate, reference))
}

/// Random-walk background samples: each sample is the largest connected
/// component of the subgraph induced on the nodes visited by one walk
/// (uniform start, teleport probability 0.15, undirected steps) run until
/// `target_size` distinct nodes are visited or the step cap is reached.
pub fn sample_background<R: Rng>(
    g: &PropertyGraph,
    target_size: usize,
    n_walks: usize,
    rng: &mut R,
) -> Result<Vec<PropertyGraph>> {
    if g.is_empty() {
        return Err(Error::EmptyGraph);
    }
    if target_size == 0 || n_walks == 0 {
        return Err(Error::Invalid("target_size and n_walks must be positive".into()));
    }
    if target_size > g.node_count() {
        return Err(Error::Invalid(format!(
            "target_size {target_size} exceeds graph size {}",
            g.node_count()
        )));
    }
    let view = UndirectedView::new(g);
    let mut samples = Vec::with_capacity(n_walks);
    for _ in 0..n_walks {
        let mut best: Option<PropertyGraph> = None;
        for _ in 0..WALK_RETRIES {
            let visited = one_walk(&view, target_size, rng);
            let ids: BTreeSet<NodeId> = visited.iter().map(|&i| view.id(i).clone()).collect();
            let sample = g.induced_subgraph(&ids)?.largest_component();
            let better = best
                .as_ref()
                .is_none_or(|b| sample.node_count() > b.node_count());
            if better {
                best = Some(sample);
            }
            if best.as_ref().map_or(0, |b| b.node_count()) >= 2.min(target_size) {
                break;
            }
        }
        samples.push(best.expect("at least one walk attempted"));
    }
    Ok(samples)
}

fn one_walk<R: Rng>(view: &UndirectedView, target_size: usize, rng: &mut R) -> BTreeSet<usize> {
    let n = view.len();
    let cap = STEP_CAP_FACTOR.saturating_mul(target_size);
    let mut visited = BTreeSet::new();
    let mut current = rng.gen_range(0..n);
    visited.insert(current);
    let mut steps = 0;
    while visited.len() < target_size && steps < cap {
        steps += 1;
        let teleport = view.degree(current) == 0 || rng.gen::<f64>() < TELEPORT;
        current = if teleport {
            rng.gen_range(0..n)
        } else {
            let neighbors = view.neighbors(current);
            neighbors[rng.gen_range(0..neighbors.len())]
        };
        visited.insert(current);
    }
    visited
}

/// Side of the reference a candidate metric's median falls on; reported for
/// interpretation only, never used in scoring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ShiftDirection {
    Higher,
    Lower,
    Equal,
}

/// Per-candidate divergence summary: for each metric, the mean base-2 JSD
/// against the background samples.
#[derive(Debug, Clone, Serialize)]
pub struct DivergenceRecord<T> {
    pub candidate_id: String,
    pub mean: BTreeMap<MetricKind, T>,
    pub per_sample: BTreeMap<MetricKind, Vec<T>>,
    pub median_shift: BTreeMap<MetricKind, ShiftDirection>,
    pub n_samples: usize,
    pub diversity_ratio: T,
}

impl<T: Real> DivergenceRecord<T> {
    pub fn mean_of(&self, kind: MetricKind) -> T {
        self.mean[&kind]
    }

    /// Sum of the six mean divergences; used as a ranking tie-break.
    pub fn total_divergence(&self) -> T {
        self.mean.values().copied().sum()
    }
}

fn median<T: Real>(values: &[T]) -> T {
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite metric values"));
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) * cast(0.5)
    }
}

/// Divergence profile computed against already-computed sample bundles.
/// The background samples are shared across candidates, so the pipeline
/// computes their bundles once and reuses them here.
pub fn divergence_profile_with<T: Real>(
    candidate_id: &str,
    bundle: &MetricBundle<T>,
    sample_bundles: &[MetricBundle<T>],
    background_diversity: T,
    n_bins: usize,
) -> Result<DivergenceRecord<T>> {
    if sample_bundles.is_empty() {
        return Err(Error::Invalid("no background samples".into()));
    }
    let mut mean = BTreeMap::new();
    let mut per_sample = BTreeMap::new();
    let mut median_shift = BTreeMap::new();
    for kind in MetricKind::ALL {
        let candidate_values = bundle.values(kind);
        let mut jsds = Vec::with_capacity(sample_bundles.len());
        let mut reference_pool = Vec::new();
        for sample in sample_bundles {
            let reference_values = sample.values(kind);
            let (jsd, _, _) = compare_histograms(&candidate_values, &reference_values, n_bins)?;
            jsds.push(jsd);
            reference_pool.extend(reference_values);
        }
        let avg = jsds.iter().copied().sum::<T>() / cast_usize(jsds.len());
        mean.insert(kind, avg);
        per_sample.insert(kind, jsds);
        let shift = {
            let c = median(&candidate_values);
            let r = median(&reference_pool);
            if c > r {
                ShiftDirection::Higher
            } else if c < r {
                ShiftDirection::Lower
            } else {
                ShiftDirection::Equal
            }
        };
        median_shift.insert(kind, shift);
    }
    let diversity_ratio = if background_diversity == T::zero() {
        T::one()
    } else {
        bundle.diversity / background_diversity
    };
    Ok(DivergenceRecord {
        candidate_id: candidate_id.to_owned(),
        mean,
        per_sample,
        median_shift,
        n_samples: sample_bundles.len(),
        diversity_ratio,
    })
}

/// Divergence profile of one candidate against raw sample graphs: computes
/// each sample's metrics, compares histograms per metric, and averages the
/// JSD over the samples.
pub fn divergence_profile<T: Real>(
    c: &CandidateSubgraph,
    bundle: &MetricBundle<T>,
    samples: &[PropertyGraph],
    background_diversity: T,
    n_bins: usize,
) -> Result<DivergenceRecord<T>> {
    let sample_bundles: Vec<MetricBundle<T>> = samples
        .iter()
        .map(network_bundle)
        .collect::<Result<_>>()?;
    divergence_profile_with(&c.id, bundle, &sample_bundles, background_diversity, n_bins)
}
