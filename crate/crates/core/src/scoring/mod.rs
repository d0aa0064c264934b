//! Signals consumed by the redundancy score: unit embeddings for the
//! neighbour-similarity term and masked log-probabilities for the
//! predictability term.
//!
//! Both come from a [`ScorerBackend`]. [`ReferenceBackend`] is a fully
//! deterministic stand-in (hashed character trigrams plus a smoothed unigram
//! model); [`EncoderBackend`] drives a masked language model.

mod encoder;
mod reference;

use std::path::PathBuf;

use thiserror::Error;

pub use encoder::{EncoderBackend, EncoderSession, MaskedLanguageModel, ModelOutput, WordPieceVocab};
pub use reference::{
    build_frequency_table, fnv1a_64, reference_embed, reference_masked_log_prob, FrequencyTable,
    ReferenceBackend, REFERENCE_DIM,
};

#[derive(Debug, Error)]
pub enum ScoringError {
    #[error("embedding dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("target index {index} out of range for {len} units")]
    TargetOutOfRange { index: usize, len: usize },
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("vocabulary mismatch: {0}")]
    VocabMismatch(String),
    #[error("context of {len} positions exceeds the model limit of {limit}; chunk the input")]
    ContextTooLong { len: usize, limit: usize },
    #[error("model error: {0}")]
    Model(String),
    #[error("backend returned {got} embeddings for {expected} units")]
    EmbeddingCount { expected: usize, got: usize },
}

/// A unit's embedding. Unit-norm, or all zero for degenerate input.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitEmbedding(pub Vec<f64>);

impl UnitEmbedding {
    pub fn zeros(dim: usize) -> Self {
        Self(vec![0.0; dim])
    }

    /// Scales `v` to unit length; an all-zero vector stays zero.
    pub fn normalized(mut v: Vec<f64>) -> Self {
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 0.0 {
            v.iter_mut().for_each(|x| *x /= norm);
        }
        Self(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0.0)
    }
}

/// Cosine similarity, clamped to [-1, 1]. Zero when either side is zero.
pub fn cosine_sim(a: &UnitEmbedding, b: &UnitEmbedding) -> Result<f64, ScoringError> {
    if a.dim() != b.dim() {
        return Err(ScoringError::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    let (mut dot, mut na, mut nb) = (0.0, 0.0, 0.0);
    for (x, y) in a.0.iter().zip(&b.0) {
        dot += x * y;
        na += x * x;
        nb += y * y;
    }
    if na == 0.0 || nb == 0.0 {
        return Ok(0.0);
    }
    Ok((dot / (na.sqrt() * nb.sqrt())).clamp(-1.0, 1.0))
}

/// Source of embeddings and masked log-probabilities.
///
/// `units` is always the full list of unit texts of one chunk, in source
/// order. Implementations must be deterministic for a fixed instance and
/// input.
pub trait ScorerBackend: Send + Sync {
    fn embed(&self, units: &[&str]) -> Result<Vec<UnitEmbedding>, ScoringError>;

    /// Natural-log probability of `units[target]` given the units within
    /// `window_k` positions on either side. Never positive.
    fn masked_log_prob(&self, units: &[&str], target: usize, window_k: usize) -> Result<f64, ScoringError>;
}

impl<B: ScorerBackend + ?Sized> ScorerBackend for &B {
    fn embed(&self, units: &[&str]) -> Result<Vec<UnitEmbedding>, ScoringError> {
        (**self).embed(units)
    }

    fn masked_log_prob(&self, units: &[&str], target: usize, window_k: usize) -> Result<f64, ScoringError> {
        (**self).masked_log_prob(units, target, window_k)
    }
}

impl<B: ScorerBackend + ?Sized> ScorerBackend for Box<B> {
    fn embed(&self, units: &[&str]) -> Result<Vec<UnitEmbedding>, ScoringError> {
        (**self).embed(units)
    }

    fn masked_log_prob(&self, units: &[&str], target: usize, window_k: usize) -> Result<f64, ScoringError> {
        (**self).masked_log_prob(units, target, window_k)
    }
}

/// Index range of the units within `k` of `target`, clipped to `0..len`.
pub fn context_window(len: usize, target: usize, k: usize) -> std::ops::Range<usize> {
    target.saturating_sub(k)..(target + k + 1).min(len)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn one_hot(dim: usize, i: usize) -> UnitEmbedding {
        let mut v = vec![0.0; dim];
        v[i] = 1.0;
        UnitEmbedding(v)
    }

    #[test]
    fn cosine_identity() {
        let v = UnitEmbedding::normalized(vec![0.3, -1.2, 2.0, 0.5]);
        assert!((cosine_sim(&v, &v).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cosine_orthogonal() {
        assert_eq!(cosine_sim(&one_hot(4, 0), &one_hot(4, 3)).unwrap(), 0.0);
    }

    #[test]
    fn cosine_antipodal() {
        let v = UnitEmbedding::normalized(vec![1.0, 2.0, 3.0]);
        let w = UnitEmbedding(v.0.iter().map(|x| -x).collect());
        assert!((cosine_sim(&v, &w).unwrap() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn cosine_zero_vector() {
        assert_eq!(cosine_sim(&UnitEmbedding::zeros(3), &one_hot(3, 1)).unwrap(), 0.0);
    }

    #[test]
    fn cosine_dimension_mismatch() {
        let err = cosine_sim(&one_hot(3, 0), &one_hot(4, 0)).unwrap_err();
        assert!(matches!(err, ScoringError::DimensionMismatch { left: 3, right: 4 }));
    }

    #[test]
    fn window_clipping() {
        assert_eq!(context_window(10, 0, 2), 0..3);
        assert_eq!(context_window(10, 5, 2), 3..8);
        assert_eq!(context_window(10, 9, 3), 6..10);
        assert_eq!(context_window(1, 0, 3), 0..1);
    }

    proptest! {
        #[test]
        fn cosine_symmetric(a in prop::collection::vec(-10.0f64..10.0, 8), b in prop::collection::vec(-10.0f64..10.0, 8)) {
            let (a, b) = (UnitEmbedding(a), UnitEmbedding(b));
            let ab = cosine_sim(&a, &b).unwrap();
            let ba = cosine_sim(&b, &a).unwrap();
            prop_assert!((ab - ba).abs() <= 1e-12);
            prop_assert!((-1.0..=1.0).contains(&ab));
        }
    }
}
