//! `sgmine`: discover unusual subgraphs in social-media graphs.
//!
//! Exit codes: 0 success, 2 config error, 3 data error, 4 pipeline error.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use sgmine::candidate::{CandidateSubgraph, ConstructionKind};
use sgmine::compare::compare_histograms;
use sgmine::error::{Error, Result};
use sgmine::graph::PropValue;
use sgmine::ingest::{ingest_tweets, read_tweets_file, TWEET};
use sgmine::metrics::compute_metrics;
use sgmine::pipeline::{run_pipeline, PipelineConfig};
use sgmine::stopwords;
use sgmine::synth::{synth_generate, SynthSpec};

#[derive(Parser)]
#[command(name = "sgmine", version, about = "Discover unusual subgraphs in social-media graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a JSON-lines tweet dataset and optionally dump the graph.
    Ingest {
        /// JSON-lines tweet dataset.
        #[arg(long)]
        input: PathBuf,
        /// Write a JSON graph snapshot here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate a synthetic dataset from a spec file.
    Synth {
        /// SynthSpec JSON file.
        #[arg(long)]
        config: PathBuf,
        /// Override the spec's seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Output JSON-lines path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the full discovery pipeline.
    Run {
        /// PipelineConfig JSON file.
        #[arg(long)]
        config: PathBuf,
        /// Override the config's seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Override the config's output directory.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Override the config's grouping pattern.
        #[arg(long)]
        pattern: Option<String>,
    },
    /// Debug: metric bundle of one dataset's largest component.
    Metrics {
        /// JSON-lines tweet dataset.
        #[arg(long)]
        input: PathBuf,
        /// Stopword file overriding the bundled list.
        #[arg(long)]
        stopwords: Option<PathBuf>,
        /// Write the bundle JSON here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Debug: histogram comparison of two value files (one number per line).
    Compare {
        #[arg(long)]
        candidate: PathBuf,
        #[arg(long)]
        reference: PathBuf,
        #[arg(long, default_value_t = 20)]
        bins: usize,
        /// Write candidate/reference histogram CSVs into this directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn exit_code(err: &Error) -> u8 {
    match err.root() {
        Error::Invalid(_)
        | Error::PatternSyntax { .. }
        | Error::UnboundVariable(_)
        | Error::UnknownRule(_) => 2,
        Error::Io(_)
        | Error::Json(_)
        | Error::MalformedRecord { .. }
        | Error::DuplicateTweetId(_)
        | Error::EmptyBackgroundGraph
        | Error::UnknownNode(_) => 3,
        _ => 4,
    }
}

fn read_values(path: &Path) -> Result<Vec<f64>> {
    let text = std::fs::read_to_string(path)?;
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(|l| {
            l.parse::<f64>()
                .map_err(|e| Error::Invalid(format!("bad value {l:?} in {}: {e}", path.display())))
        })
        .collect()
}

fn cmd_ingest(input: &Path, out: Option<&Path>) -> Result<()> {
    let records = read_tweets_file(input)?;
    let graph = ingest_tweets(&records)?;
    println!(
        "{} records -> {} nodes, {} edges",
        records.len(),
        graph.node_count(),
        graph.edge_count()
    );
    for (label, count) in graph.node_label_counts() {
        println!("  {label}: {count}");
    }
    if let Some(path) = out {
        graph.write_snapshot(path)?;
        println!("snapshot written to {}", path.display());
    }
    Ok(())
}

fn cmd_synth(config: &Path, seed: Option<u64>, out: &Path) -> Result<()> {
    let text = std::fs::read_to_string(config)
        .map_err(|e| Error::Invalid(format!("cannot read spec {}: {e}", config.display())))?;
    let mut spec: SynthSpec = serde_json::from_str(&text)
        .map_err(|e| Error::Invalid(format!("bad synth spec: {e}")))?;
    if let Some(seed) = seed {
        spec.seed = seed;
    }
    synth_generate(&spec, out)?;
    println!("dataset written to {}", out.display());
    Ok(())
}

fn cmd_run(
    config: &Path,
    seed: Option<u64>,
    out: Option<PathBuf>,
    pattern: Option<String>,
) -> Result<()> {
    let text = std::fs::read_to_string(config)
        .map_err(|e| Error::Invalid(format!("cannot read config {}: {e}", config.display())))?;
    let mut cfg: PipelineConfig = serde_json::from_str(&text)
        .map_err(|e| Error::Invalid(format!("bad pipeline config: {e}")))?;
    if let Some(seed) = seed {
        cfg.seed = seed;
    }
    if let Some(out) = out {
        cfg.out_dir = out;
    }
    if let Some(pattern) = pattern {
        cfg.group_pattern = pattern;
    }
    let report = run_pipeline(&cfg)?;
    println!("report written to {}", report.display());
    Ok(())
}

fn cmd_metrics(input: &Path, stop_path: Option<&Path>, out: Option<&Path>) -> Result<()> {
    let records = read_tweets_file(input)?;
    let graph = ingest_tweets(&records)?.largest_component();
    let corpus = graph
        .nodes_with_label(TWEET)
        .filter_map(|id| graph.node(id))
        .filter_map(|n| n.props.get("text").and_then(PropValue::as_str))
        .map(str::to_owned)
        .collect();
    let candidate = CandidateSubgraph {
        id: "debug".into(),
        graph,
        group_key: BTreeMap::new(),
        rule: ConstructionKind::G1,
        corpus,
    };
    let stop = match stop_path {
        Some(p) => stopwords::from_file(p)?,
        None => stopwords::english(),
    };
    let bundle = compute_metrics::<f64>(&candidate, &stop)?;
    let json = serde_json::to_string_pretty(&bundle)?;
    match out {
        Some(path) => std::fs::write(path, json + "\n")?,
        None => println!("{json}"),
    }
    Ok(())
}

fn cmd_compare(candidate: &Path, reference: &Path, bins: usize, out: Option<&Path>) -> Result<()> {
    let candidate_values = read_values(candidate)?;
    let reference_values = read_values(reference)?;
    let (jsd, cand_hist, ref_hist) = compare_histograms(&candidate_values, &reference_values, bins)?;
    println!("jsd {jsd}");
    if let Some(dir) = out {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join("candidate.csv"), cand_hist.to_csv())?;
        std::fs::write(dir.join("reference.csv"), ref_hist.to_csv())?;
        println!("histograms written to {}", dir.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Ingest { input, out } => cmd_ingest(input, out.as_deref()),
        Command::Synth { config, seed, out } => cmd_synth(config, *seed, out),
        Command::Run {
            config,
            seed,
            out,
            pattern,
        } => cmd_run(config, *seed, out.clone(), pattern.clone()),
        Command::Metrics { input, stopwords, out } => {
            cmd_metrics(input, stopwords.as_deref(), out.as_deref())
        }
        Command::Compare {
            candidate,
            reference,
            bins,
            out,
        } => cmd_compare(candidate, reference, *bins, out.as_deref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}
