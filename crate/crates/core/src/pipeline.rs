//! End-to-end pipeline: ingest, query, group, construct, filter, metrics,
//! sample, compare, discover, report.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::io::Write;
use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::candidate::{
    construct_candidate, filter_candidates_detailed, group_nodes, initial_query,
    CandidateSubgraph, ConstructionKind, PredicateSpec,
};
use crate::compare::{compare_histograms, divergence_profile_with, sample_background, DivergenceRecord};
use crate::discover::{discover, recommend_repartition, Verdict};
use crate::error::{Error, Result};
use crate::graph::{PropValue, PropertyGraph};
use crate::ingest::{ingest_tweets, read_tweets_file, TWEET};
use crate::metrics::{compute_metrics, network_bundle, vocabulary_diversity, MetricBundle, MetricKind};
use crate::pattern::{apply_rule, parse_group_pattern, parse_rule_file};
use crate::stopwords;

fn default_rule() -> ConstructionKind {
    ConstructionKind::G1
}
fn default_hop_budget() -> usize {
    1
}
fn default_theta_n() -> usize {
    10
}
fn default_n_bins() -> usize {
    20
}
fn default_n_walks() -> usize {
    3
}
fn default_walk_target_factor() -> f64 {
    3.0
}
fn default_k() -> usize {
    3
}
fn default_tau_d() -> f64 {
    0.5
}

/// Full configuration of one pipeline run. Every free parameter of the
/// generate-and-test process is surfaced here; a fixed seed makes the run
/// fully deterministic.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PipelineConfig {
    /// JSON-lines tweet dataset.
    pub input: PathBuf,
    /// Keywords of the initial query.
    pub keywords: Vec<String>,
    /// Optional inclusive date floor (ISO calendar date).
    #[serde(default)]
    pub date_from: Option<String>,
    /// Grouping pattern, e.g. `(:tweet{date})-[:uses]->(:hashtag{text})`.
    pub group_pattern: String,
    #[serde(default = "default_rule")]
    pub rule: ConstructionKind,
    #[serde(default = "default_hop_budget")]
    pub hop_budget: usize,
    /// Minimum candidate size (nodes).
    #[serde(default = "default_theta_n")]
    pub theta_n: usize,
    #[serde(default)]
    pub predicates: PredicateSpec,
    #[serde(default = "default_n_bins")]
    pub n_bins: usize,
    #[serde(default = "default_n_walks")]
    pub n_walks: usize,
    /// Walk target size as a multiple of the mean candidate node count.
    #[serde(default = "default_walk_target_factor")]
    pub walk_target_factor: f64,
    #[serde(default = "default_k")]
    pub k: usize,
    /// Diversity-ratio threshold for the interestingness flag.
    #[serde(default = "default_tau_d")]
    pub tau_d: f64,
    #[serde(default)]
    pub seed: u64,
    /// Report and histogram output directory.
    pub out_dir: PathBuf,
    /// Optional stopword file overriding the bundled list.
    #[serde(default)]
    pub stopwords_path: Option<PathBuf>,
    /// Optional edge-construction rule file applied to the background graph
    /// before grouping.
    #[serde(default)]
    pub derive_rules: Option<PathBuf>,
}

impl PipelineConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let cfg: PipelineConfig = serde_json::from_str(&text)?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.keywords.is_empty() {
            return Err(Error::Invalid("keywords must be non-empty".into()));
        }
        for (name, value) in [
            ("theta_n", self.theta_n),
            ("hop_budget", self.hop_budget),
            ("n_bins", self.n_bins),
            ("n_walks", self.n_walks),
            ("k", self.k),
        ] {
            if value == 0 {
                return Err(Error::Invalid(format!("{name} must be positive")));
            }
        }
        if !(self.walk_target_factor > 0.0) {
            return Err(Error::Invalid("walk_target_factor must be positive".into()));
        }
        if !(self.tau_d >= 0.0) {
            return Err(Error::Invalid("tau_d must be non-negative".into()));
        }
        parse_group_pattern(&self.group_pattern)?;
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GraphSummary {
    pub nodes: usize,
    pub edges: usize,
    pub node_labels: BTreeMap<String, usize>,
    pub edge_labels: BTreeMap<String, usize>,
}

impl GraphSummary {
    fn of(g: &PropertyGraph) -> Self {
        GraphSummary {
            nodes: g.node_count(),
            edges: g.edge_count(),
            node_labels: g.node_label_counts(),
            edge_labels: g.edge_label_counts(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CandidateSummary {
    pub id: String,
    pub rule: ConstructionKind,
    pub group_key: BTreeMap<String, String>,
    pub nodes: usize,
    pub edges: usize,
    pub tweets: usize,
    pub diversity: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub config: PipelineConfig,
    pub background: GraphSummary,
    pub background_diversity: f64,
    pub samples: Vec<GraphSummary>,
    pub group_count: usize,
    pub candidates: Vec<CandidateSummary>,
    pub dropped: Vec<DroppedCandidate>,
    pub metrics: BTreeMap<String, MetricBundle<f64>>,
    pub divergence: BTreeMap<String, DivergenceRecord<f64>>,
    pub verdict: Verdict,
    /// Human-readable justification lines per ranked candidate.
    pub why: BTreeMap<String, Vec<String>>,
    /// Keyword subsets recommended for candidates flagged for repartition.
    pub repartition: BTreeMap<String, Vec<Vec<String>>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DroppedCandidate {
    pub id: String,
    pub reason: String,
}

fn stage<T>(name: &'static str, result: Result<T>) -> Result<T> {
    result.map_err(|e| e.in_stage(name))
}

fn tweet_corpus(g: &PropertyGraph) -> Vec<String> {
    g.nodes_with_label(TWEET)
        .filter_map(|id| g.node(id))
        .filter_map(|n| n.props.get("text").and_then(PropValue::as_str))
        .map(str::to_owned)
        .collect()
}

fn load_stopwords(cfg: &PipelineConfig) -> Result<HashSet<String>> {
    match &cfg.stopwords_path {
        Some(path) => stopwords::from_file(path),
        None => Ok(stopwords::english()),
    }
}

/// File-system-safe rendering of a candidate id.
fn sanitize(id: &str) -> String {
    id.chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '-' })
        .collect()
}

/// Run the full pipeline and write `report.json` (plus histogram CSVs for
/// the ranked candidates) into the configured output directory. Returns the
/// report path.
pub fn run_pipeline(cfg: &PipelineConfig) -> Result<PathBuf> {
    stage("config", cfg.validate())?;
    let pattern = stage("config", parse_group_pattern(&cfg.group_pattern))?;
    let stop = stage("config", load_stopwords(cfg))?;
    let derive_rules = match &cfg.derive_rules {
        Some(path) => stage(
            "config",
            std::fs::read_to_string(path)
                .map_err(Error::from)
                .and_then(|text| parse_rule_file(&text)),
        )?,
        None => Vec::new(),
    };

    let records = stage("ingest", read_tweets_file(&cfg.input))?;
    let graph = stage("ingest", ingest_tweets(&records))?;

    let mut background = stage(
        "query",
        initial_query(&graph, &cfg.keywords, cfg.date_from.as_deref()),
    )?;
    for rule in &derive_rules {
        for derived in apply_rule(&background, rule) {
            let id = stage(
                "query",
                background.add_edge(derived.source, derived.target, derived.label.clone()),
            )?;
            stage(
                "query",
                background.set_edge_prop(id, "weight", PropValue::Int(derived.weight as i64)),
            )?;
        }
    }
    let background_diversity = vocabulary_diversity::<f64>(&tweet_corpus(&background), &stop);

    let groups = group_nodes(&background, &pattern);
    if groups.is_empty() {
        return Err(Error::Invalid("grouping pattern matched nothing".into()).in_stage("group"));
    }

    let candidates: Vec<CandidateSubgraph> = stage(
        "construct",
        groups
            .par_iter()
            .map(|grp| construct_candidate(&background, grp, cfg.rule, cfg.hop_budget))
            .collect::<Result<Vec<_>>>(),
    )?;

    let (survivors, dropped) =
        filter_candidates_detailed(candidates, cfg.theta_n, &cfg.predicates);
    if survivors.len() < 2 {
        return Err(Error::TooFewRecords.in_stage("filter"));
    }

    let bundles: Vec<MetricBundle<f64>> = stage(
        "metrics",
        survivors
            .par_iter()
            .map(|c| compute_metrics(c, &stop))
            .collect::<Result<Vec<_>>>(),
    )?;

    let mean_nodes = survivors
        .iter()
        .map(|c| c.graph.node_count())
        .sum::<usize>() as f64
        / survivors.len() as f64;
    let target_size = ((mean_nodes * cfg.walk_target_factor).round() as usize)
        .clamp(2, background.node_count());
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let samples = stage(
        "sample",
        sample_background(&background, target_size, cfg.n_walks, &mut rng),
    )?;
    let sample_bundles: Vec<MetricBundle<f64>> = stage(
        "sample",
        samples
            .par_iter()
            .map(network_bundle)
            .collect::<Result<Vec<_>>>(),
    )?;

    let records: Vec<DivergenceRecord<f64>> = stage(
        "compare",
        survivors
            .par_iter()
            .zip(&bundles)
            .map(|(c, bundle)| {
                divergence_profile_with(&c.id, bundle, &sample_bundles, background_diversity, cfg.n_bins)
            })
            .collect::<Result<Vec<_>>>(),
    )?;

    let verdict = stage("discover", discover(&records, cfg.k, cfg.tau_d))?;

    stage("report", write_report(
        cfg,
        &background,
        background_diversity,
        &samples,
        &sample_bundles,
        groups.len(),
        &survivors,
        &bundles,
        dropped,
        records,
        verdict,
    ))
}

#[allow(clippy::too_many_arguments)]
fn write_report(
    cfg: &PipelineConfig,
    background: &PropertyGraph,
    background_diversity: f64,
    samples: &[PropertyGraph],
    sample_bundles: &[MetricBundle<f64>],
    group_count: usize,
    survivors: &[CandidateSubgraph],
    bundles: &[MetricBundle<f64>],
    dropped: Vec<(String, crate::candidate::DropReason)>,
    records: Vec<DivergenceRecord<f64>>,
    verdict: Verdict,
) -> Result<PathBuf> {
    std::fs::create_dir_all(&cfg.out_dir)?;
    let hist_dir = cfg.out_dir.join("histograms");
    std::fs::create_dir_all(&hist_dir)?;

    let ranked: BTreeSet<String> = verdict
        .top_k
        .v1
        .iter()
        .chain(&verdict.top_k.v2)
        .chain(&verdict.top_k.v3)
        .chain(&verdict.interesting)
        .cloned()
        .collect();

    let mut why: BTreeMap<String, Vec<String>> = BTreeMap::new();
    for id in &ranked {
        let mut lines = Vec::new();
        for (vector, list) in [
            ("v1", &verdict.top_k.v1),
            ("v2", &verdict.top_k.v2),
            ("v3", &verdict.top_k.v3),
        ] {
            if let Some(rank) = list.iter().position(|c| c == id) {
                let score = match vector {
                    "v1" => verdict.v1[id],
                    "v2" => verdict.v2[id],
                    _ => verdict.v3[id],
                };
                lines.push(format!(
                    "rank {} in {vector} with {score} pairwise wins",
                    rank + 1
                ));
            }
        }
        if let Some(record) = records.iter().find(|r| &r.candidate_id == id) {
            if verdict.diversity_flags.get(id).copied().unwrap_or(false) {
                lines.push(format!(
                    "narrow vocabulary: diversity ratio {:.3} <= {:.3}",
                    record.diversity_ratio, cfg.tau_d
                ));
            }
        }
        if verdict.l.contains(id) {
            lines.push("uninterpretable -- repartition (dense subgroup structure)".into());
        }
        if verdict.interesting.contains(id) {
            lines.push("interesting: ranked in all three vectors with the diversity flag set".into());
        }
        why.insert(id.clone(), lines);
    }

    let mut repartition = BTreeMap::new();
    for id in &verdict.l {
        if let Some(candidate) = survivors.iter().find(|c| &c.id == id) {
            repartition.insert(id.clone(), recommend_repartition(candidate, &cfg.keywords));
        }
    }

    // histogram CSVs for ranked candidates, against the first sample
    if let Some(reference_bundle) = sample_bundles.first() {
        for id in &ranked {
            let Some(idx) = survivors.iter().position(|c| &c.id == id) else {
                continue;
            };
            for kind in MetricKind::ALL {
                let candidate_values = bundles[idx].values(kind);
                let reference_values = reference_bundle.values(kind);
                if candidate_values.is_empty() || reference_values.is_empty() {
                    continue;
                }
                let (_, cand_hist, ref_hist) =
                    compare_histograms(&candidate_values, &reference_values, cfg.n_bins)?;
                let base = format!("{}_{}", sanitize(id), kind.name());
                std::fs::write(
                    hist_dir.join(format!("{base}_candidate.csv")),
                    cand_hist.to_csv(),
                )?;
                std::fs::write(
                    hist_dir.join(format!("{base}_reference.csv")),
                    ref_hist.to_csv(),
                )?;
            }
        }
    }

    let report = Report {
        config: cfg.clone(),
        background: GraphSummary::of(background),
        background_diversity,
        samples: samples.iter().map(GraphSummary::of).collect(),
        group_count,
        candidates: survivors
            .iter()
            .zip(bundles)
            .map(|(c, b)| CandidateSummary {
                id: c.id.clone(),
                rule: c.rule,
                group_key: c.group_key.clone(),
                nodes: c.graph.node_count(),
                edges: c.graph.edge_count(),
                tweets: c.graph.nodes_with_label(TWEET).count(),
                diversity: b.diversity,
            })
            .collect(),
        dropped: dropped
            .into_iter()
            .map(|(id, reason)| DroppedCandidate {
                id,
                reason: reason.to_string(),
            })
            .collect(),
        metrics: survivors
            .iter()
            .zip(bundles)
            .map(|(c, b)| (c.id.clone(), b.clone()))
            .collect(),
        divergence: records
            .into_iter()
            .map(|r| (r.candidate_id.clone(), r))
            .collect(),
        verdict,
        why,
        repartition,
    };

    let path = cfg.out_dir.join("report.json");
    let mut file = std::io::BufWriter::new(std::fs::File::create(&path)?);
    serde_json::to_writer_pretty(&mut file, &report)?;
    file.write_all(b"\n")?;
    Ok(path)
}
