use std::collections::BTreeSet;

use super::{achieved_ratio, merge_units, CompressError, CompressionConfig, CompressionResult};
use crate::segmentation::{segment_text, Lexicon};

/// SplitMix64 (Steele, Lea & Flood). Fixed here rather than taken from a
/// crate so that seeded baselines stay bit-identical across releases.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    /// Uniform integer in `0..bound` by rejection sampling.
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0);
        let zone = u64::MAX - (u64::MAX % bound);
        loop {
            let x = self.next_u64();
            if x < zone {
                return x % bound;
            }
        }
    }
}

/// [`random_deletion_with`] using the bundled word lists.
pub fn random_deletion(text: &str, cfg: &CompressionConfig) -> Result<CompressionResult, CompressError> {
    random_deletion_with(text, cfg, Lexicon::bundled())
}

/// Keeps a uniformly random subset of exactly `round(ratio * n)` units,
/// drawn by a partial Fisher-Yates shuffle seeded with `cfg.seed`.
pub fn random_deletion_with(
    text: &str,
    cfg: &CompressionConfig,
    lexicon: &Lexicon,
) -> Result<CompressionResult, CompressError> {
    cfg.validate()?;
    let (tokens, units) = segment_text(text, cfg.granularity, lexicon);
    let n = units.len();
    let keep = ((cfg.ratio * n as f64).round() as usize).min(n);

    let mut rng = SplitMix64::new(cfg.seed);
    let mut order: Vec<usize> = (0..n).collect();
    for i in 0..keep {
        let j = i + rng.below((n - i) as u64) as usize;
        order.swap(i, j);
    }
    let kept: BTreeSet<usize> = order[..keep].iter().copied().collect();

    Ok(CompressionResult {
        original_text: text.to_string(),
        compressed_text: merge_units(text, &tokens, &units, &kept),
        unit_texts: units.iter().map(|u| u.text(text).to_string()).collect(),
        scores: Vec::new(),
        achieved_ratio: achieved_ratio(kept.len(), n),
        kept,
        target_ratio: cfg.ratio,
        chunk_thresholds: Vec::new(),
    })
}
