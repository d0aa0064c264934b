//! Prompt compression by in-context redundancy.
//!
//! Text is split into lexical units, each unit is scored by how similar it is
//! to its neighbours plus how predictable it is from them, and units scoring
//! at or above a per-chunk percentile are dropped.
//!
//! ```
//! use icpc::{compress, CompressionConfig, ReferenceBackend};
//!
//! let text = "The cat sat on the mat. The cat sat on the mat again.";
//! let cfg = CompressionConfig { ratio: 0.6, ..Default::default() };
//! let out = compress(text, &cfg, &ReferenceBackend::new(Default::default())).unwrap();
//! assert!(out.kept.len() < out.unit_count());
//! ```

pub mod cli;
pub mod compressor;
pub mod corpus;
pub mod metrics;
pub mod scoring;
pub mod segmentation;

pub use compressor::{
    compress, compress_with, filter_units, percentile, random_deletion, CompressError, CompressionConfig,
    CompressionResult, LossScore,
};
pub use metrics::{evaluate, shannon_entropy, MetricReport, Prf};
pub use scoring::{ReferenceBackend, ScorerBackend, UnitEmbedding};
pub use segmentation::{segment, Granularity, LexicalUnit, Lexicon, Token};
