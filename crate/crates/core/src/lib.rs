//! Discovery of structurally and textually unusual subgraphs in
//! social-media property graphs.
//!
//! The pipeline generates candidate subgraphs by querying and grouping a
//! typed property graph, computes centrality and diversity metrics per
//! candidate, compares the metric distributions against random-walk samples
//! of the background graph via Jensen-Shannon divergence, and ranks
//! candidates by pairwise divergence wins.
//!
//! Numeric kernels are generic over [`scalar::Real`]; the `*F64` aliases at
//! the crate root are the types the pipeline itself uses.

pub mod candidate;
pub mod compare;
pub mod discover;
pub mod error;
pub mod graph;
pub mod ingest;
pub mod linalg;
pub mod metrics;
pub mod pattern;
pub mod pipeline;
pub mod scalar;
pub mod stopwords;
pub mod synth;

pub use error::{Error, Result};
pub use scalar::Real;

pub type HistogramF64 = compare::Histogram<f64>;
pub type HistogramF32 = compare::Histogram<f32>;
pub type MetricBundleF64 = metrics::MetricBundle<f64>;
pub type MetricBundleF32 = metrics::MetricBundle<f32>;
pub type DivergenceRecordF64 = compare::DivergenceRecord<f64>;
pub type DivergenceRecordF32 = compare::DivergenceRecord<f32>;
