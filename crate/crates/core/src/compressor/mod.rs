//! Redundancy scoring, percentile thresholding and merging.
//!
//! Every lexical unit `x_i` gets a score
//!
//! ```text
//! L(x_i) = alpha * sum_{0 < |n| <= k} sim(x_{i+n}, x_i) + ln p(x_i | x_{i-k..i+k} \ x_i)
//! ```
//!
//! where the neighbour window is clipped at chunk boundaries. A high score
//! marks a unit that is both similar to its neighbours and predictable from
//! them. Units scoring strictly below the `100 * ratio`-th percentile of the
//! chunk's scores survive; the rest are removed.

mod baseline;

use std::collections::BTreeSet;
use std::ops::Range;

use rayon::prelude::*;
use thiserror::Error;

use crate::scoring::{context_window, cosine_sim, ScorerBackend, ScoringError, UnitEmbedding};
use crate::segmentation::{segment_with, split_sentences_with, tokenize, Granularity, Lexicon, LexicalUnit, Token};

pub use baseline::{random_deletion, random_deletion_with, SplitMix64};

#[derive(Debug, Error)]
pub enum CompressError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("percentile of an empty list")]
    EmptyInput,
    #[error("percentile rank {0} outside [0, 100]")]
    PercentileRange(f64),
    #[error("chunk {chunk}: {source}")]
    Backend {
        chunk: usize,
        #[source]
        source: ScoringError,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompressionConfig {
    /// Weight of the neighbour-similarity term.
    pub alpha: f64,
    /// Target keep fraction in (0, 1]; thresholding uses percentile
    /// `100 * ratio`.
    pub ratio: f64,
    /// Neighbours considered on each side.
    pub window_k: usize,
    pub granularity: Granularity,
    /// Maximum tokens per independently scored chunk.
    pub chunk_size: usize,
    /// Floor on the number of units kept per chunk.
    pub min_keep: usize,
    /// Seed for the random-deletion baseline.
    pub seed: u64,
}

impl Default for CompressionConfig {
    fn default() -> Self {
        Self {
            alpha: 1.0,
            ratio: 0.6,
            window_k: 3,
            granularity: Granularity::Word,
            chunk_size: 512,
            min_keep: 1,
            seed: 0,
        }
    }
}

impl CompressionConfig {
    pub fn validate(&self) -> Result<(), CompressError> {
        if !(self.alpha >= 0.0 && self.alpha.is_finite()) {
            return Err(CompressError::Config(format!("alpha must be a finite value >= 0, got {}", self.alpha)));
        }
        if !(self.ratio > 0.0 && self.ratio <= 1.0) {
            return Err(CompressError::Config(format!("ratio must lie in (0, 1], got {}", self.ratio)));
        }
        if self.window_k < 1 {
            return Err(CompressError::Config("window must be at least 1".into()));
        }
        if self.chunk_size < 2 * self.window_k + 1 {
            return Err(CompressError::Config(format!(
                "chunk size {} is smaller than the {}-unit window",
                self.chunk_size,
                2 * self.window_k + 1
            )));
        }
        Ok(())
    }
}

/// One unit's score, split into its two terms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossScore {
    pub unit_id: usize,
    /// Sum of neighbour similarities, before weighting by alpha.
    pub similarity_term: f64,
    pub log_prob_term: f64,
    pub total: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompressionResult {
    pub original_text: String,
    pub compressed_text: String,
    /// Source text of every unit, indexed by unit id.
    pub unit_texts: Vec<String>,
    /// One per unit in source order; empty for baselines that do not score.
    pub scores: Vec<LossScore>,
    pub kept: BTreeSet<usize>,
    pub achieved_ratio: f64,
    pub target_ratio: f64,
    /// Percentile threshold of each scored chunk.
    pub chunk_thresholds: Vec<f64>,
}

impl CompressionResult {
    /// The percentile threshold, averaged over chunks. `None` when nothing
    /// was scored.
    pub fn threshold(&self) -> Option<f64> {
        if self.chunk_thresholds.is_empty() {
            None
        } else {
            Some(self.chunk_thresholds.iter().sum::<f64>() / self.chunk_thresholds.len() as f64)
        }
    }

    pub fn unit_count(&self) -> usize {
        self.unit_texts.len()
    }
}

fn achieved_ratio(kept: usize, units: usize) -> f64 {
    if units == 0 {
        1.0
    } else {
        kept as f64 / units as f64
    }
}

/// Scores unit `i` of a chunk. `units` and `embeddings` cover the whole
/// chunk; the returned `unit_id` is the chunk-local index.
pub fn unit_loss(
    i: usize,
    units: &[&str],
    embeddings: &[UnitEmbedding],
    backend: &dyn ScorerBackend,
    cfg: &CompressionConfig,
) -> Result<LossScore, ScoringError> {
    if i >= units.len() || i >= embeddings.len() {
        return Err(ScoringError::TargetOutOfRange {
            index: i,
            len: units.len().min(embeddings.len()),
        });
    }
    let mut similarity_term = 0.0;
    for j in context_window(embeddings.len(), i, cfg.window_k) {
        if j != i {
            similarity_term += cosine_sim(&embeddings[j], &embeddings[i])?;
        }
    }
    let log_prob_term = backend.masked_log_prob(units, i, cfg.window_k)?;
    Ok(LossScore {
        unit_id: i,
        similarity_term,
        log_prob_term,
        total: cfg.alpha * similarity_term + log_prob_term,
    })
}

/// Linear-interpolation percentile (numpy's default method).
pub fn percentile(values: &[f64], p: f64) -> Result<f64, CompressError> {
    if values.is_empty() {
        return Err(CompressError::EmptyInput);
    }
    if !(0.0..=100.0).contains(&p) {
        return Err(CompressError::PercentileRange(p));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let h = (sorted.len() - 1) as f64 * p / 100.0;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    Ok(sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo]))
}

/// Keeps units whose total lies strictly below the `100 * ratio`-th
/// percentile. When that leaves fewer than `min_keep` units, the
/// lowest-scoring remaining units (lower id first on ties) are added.
///
/// Returns the kept unit ids and the threshold.
pub fn filter_units(scores: &[LossScore], cfg: &CompressionConfig) -> Result<(BTreeSet<usize>, f64), CompressError> {
    let totals: Vec<f64> = scores.iter().map(|s| s.total).collect();
    let threshold = percentile(&totals, cfg.ratio * 100.0)?;
    let mut kept: BTreeSet<usize> = scores.iter().filter(|s| s.total < threshold).map(|s| s.unit_id).collect();

    let floor = cfg.min_keep.min(scores.len());
    if kept.len() < floor {
        let mut rest: Vec<&LossScore> = scores.iter().filter(|s| !kept.contains(&s.unit_id)).collect();
        rest.sort_by(|a, b| a.total.total_cmp(&b.total).then(a.unit_id.cmp(&b.unit_id)));
        for s in rest.into_iter().take(floor - kept.len()) {
            kept.insert(s.unit_id);
        }
    }
    Ok((kept, threshold))
}

/// Rebuilds text from the kept units.
///
/// Each kept unit contributes its original bytes plus the punctuation that
/// follows it up to the next word; punctuation before the first unit rides
/// with that unit. Kept units are joined by a single space.
pub fn merge_units(source: &str, tokens: &[Token], units: &[LexicalUnit], kept: &BTreeSet<usize>) -> String {
    let mut out = String::new();
    let first_word_start = tokens.iter().find(|t| t.is_word).map(|t| t.byte_span.start);
    for unit in units {
        if !kept.contains(&unit.unit_id) {
            continue;
        }
        let mut start = unit.char_span.start;
        if Some(start) == first_word_start {
            if let Some(first) = tokens.first() {
                start = first.byte_span.start;
            }
        }
        let mut end = unit.char_span.end;
        let after = tokens.partition_point(|t| t.byte_span.start < end);
        for tok in &tokens[after..] {
            if tok.is_word {
                break;
            }
            end = tok.byte_span.end;
        }
        if !out.is_empty() {
            out.push(' ');
        }
        out.push_str(&source[start..end]);
    }
    out
}

/// Packs whole sentences greedily into ranges of at most `chunk_size`
/// tokens. A sentence longer than `chunk_size` is cut at `chunk_size`
/// boundaries.
pub fn chunk(tokens: &[Token], chunk_size: usize) -> Vec<Range<usize>> {
    let chunk_size = chunk_size.max(1);
    let mut sentences: Vec<Range<usize>> = Vec::new();
    for (i, tok) in tokens.iter().enumerate() {
        match sentences.last_mut() {
            Some(r) if tokens[r.start].sentence_index == tok.sentence_index => r.end = i + 1,
            _ => sentences.push(i..i + 1),
        }
    }

    let mut chunks = Vec::new();
    let mut current: Option<Range<usize>> = None;
    for s in sentences {
        if s.len() > chunk_size {
            if let Some(c) = current.take() {
                chunks.push(c);
            }
            let mut start = s.start;
            while start < s.end {
                let end = (start + chunk_size).min(s.end);
                chunks.push(start..end);
                start = end;
            }
            continue;
        }
        current = match current {
            Some(c) if c.len() + s.len() <= chunk_size => Some(c.start..s.end),
            Some(c) => {
                chunks.push(c);
                Some(s)
            }
            None => Some(s),
        };
    }
    chunks.extend(current);
    chunks
}

/// [`compress_with`] using the bundled word lists.
pub fn compress(text: &str, cfg: &CompressionConfig, backend: &dyn ScorerBackend) -> Result<CompressionResult, CompressError> {
    compress_with(text, cfg, backend, Lexicon::bundled())
}

/// Full pipeline: tokenize, split sentences, chunk, then per chunk segment,
/// embed, score and threshold. Kept units from all chunks are merged in
/// source order.
///
/// A ratio of exactly 1.0 keeps every unit; scores and thresholds are still
/// reported.
pub fn compress_with(
    text: &str,
    cfg: &CompressionConfig,
    backend: &dyn ScorerBackend,
    lexicon: &Lexicon,
) -> Result<CompressionResult, CompressError> {
    cfg.validate()?;
    let tokens = split_sentences_with(tokenize(text), lexicon);
    let ranges = chunk(&tokens, cfg.chunk_size);

    let mut units: Vec<LexicalUnit> = Vec::new();
    let mut chunk_units: Vec<Range<usize>> = Vec::with_capacity(ranges.len());
    for r in &ranges {
        let start = units.len();
        for mut u in segment_with(&tokens[r.clone()], cfg.granularity, lexicon) {
            u.unit_id += start;
            units.push(u);
        }
        chunk_units.push(start..units.len());
    }
    let unit_texts: Vec<&str> = units.iter().map(|u| u.text(text)).collect();

    let scored: Vec<(Vec<LossScore>, BTreeSet<usize>, f64)> = chunk_units
        .par_iter()
        .enumerate()
        .filter(|(_, r)| !r.is_empty())
        .map(|(chunk_idx, r)| {
            let backend_err = |source| CompressError::Backend { chunk: chunk_idx, source };
            let texts = &unit_texts[r.clone()];
            let embeddings = backend.embed(texts).map_err(backend_err)?;
            if embeddings.len() != texts.len() {
                return Err(backend_err(ScoringError::EmbeddingCount {
                    expected: texts.len(),
                    got: embeddings.len(),
                }));
            }
            let mut scores = (0..texts.len())
                .map(|i| unit_loss(i, texts, &embeddings, backend, cfg))
                .collect::<Result<Vec<_>, _>>()
                .map_err(backend_err)?;
            let (kept, threshold) = filter_units(&scores, cfg)?;
            for s in &mut scores {
                s.unit_id += r.start;
            }
            Ok((scores, kept.into_iter().map(|id| id + r.start).collect(), threshold))
        })
        .collect::<Result<_, CompressError>>()?;

    let mut scores = Vec::with_capacity(units.len());
    let mut kept = BTreeSet::new();
    let mut chunk_thresholds = Vec::with_capacity(scored.len());
    for (s, k, t) in scored {
        scores.extend(s);
        kept.extend(k);
        chunk_thresholds.push(t);
    }
    if cfg.ratio >= 1.0 {
        kept = (0..units.len()).collect();
    }

    Ok(CompressionResult {
        original_text: text.to_string(),
        compressed_text: merge_units(text, &tokens, &units, &kept),
        unit_texts: unit_texts.iter().map(|s| s.to_string()).collect(),
        achieved_ratio: achieved_ratio(kept.len(), units.len()),
        scores,
        kept,
        target_ratio: cfg.ratio,
        chunk_thresholds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scoring::ReferenceBackend;
    use crate::segmentation::{segment, split_sentences};
    use proptest::prelude::*;

    fn scores_from(totals: &[f64]) -> Vec<LossScore> {
        totals
            .iter()
            .enumerate()
            .map(|(i, &t)| LossScore {
                unit_id: i,
                similarity_term: 0.0,
                log_prob_term: t,
                total: t,
            })
            .collect()
    }

    fn cfg(ratio: f64, min_keep: usize) -> CompressionConfig {
        CompressionConfig {
            ratio,
            min_keep,
            ..Default::default()
        }
    }

    /// Fixed embeddings and a constant log-probability, for hand-checkable
    /// scores.
    struct Fixed(f64);

    impl ScorerBackend for Fixed {
        fn embed(&self, units: &[&str]) -> Result<Vec<UnitEmbedding>, ScoringError> {
            Ok(units.iter().map(|_| UnitEmbedding(vec![1.0, 0.0])).collect())
        }
        fn masked_log_prob(&self, _: &[&str], _: usize, _: usize) -> Result<f64, ScoringError> {
            Ok(self.0)
        }
    }

    #[test]
    fn unit_loss_direct_substitution() {
        // sims: left 0.5, right 0.2
        let emb = vec![
            UnitEmbedding(vec![0.5, 0.75f64.sqrt()]),
            UnitEmbedding(vec![1.0, 0.0]),
            UnitEmbedding(vec![0.2, 0.96f64.sqrt()]),
        ];
        let c = CompressionConfig {
            window_k: 1,
            alpha: 1.0,
            ..Default::default()
        };
        let s = unit_loss(1, &["a", "b", "c"], &emb, &Fixed(-1.0), &c).unwrap();
        assert!((s.similarity_term - 0.7).abs() < 1e-12);
        assert!((s.total + 0.3).abs() < 1e-12);
    }

    #[test]
    fn unit_loss_alpha_zero() {
        let emb = vec![UnitEmbedding(vec![1.0, 0.0]); 3];
        let c = CompressionConfig {
            alpha: 0.0,
            ..Default::default()
        };
        let s = unit_loss(0, &["a", "b", "c"], &emb, &Fixed(-2.5), &c).unwrap();
        assert_eq!(s.total, -2.5);
        assert_eq!(s.total, s.log_prob_term);
    }

    #[test]
    fn unit_loss_clips_left_edge() {
        let emb: Vec<UnitEmbedding> = (0..5)
            .map(|i| UnitEmbedding::normalized(vec![1.0, i as f64, (i * i) as f64]))
            .collect();
        let c = CompressionConfig {
            window_k: 2,
            ..Default::default()
        };
        let s = unit_loss(0, &["a"; 5], &emb, &Fixed(0.0), &c).unwrap();
        let brute: f64 = [1, 2].iter().map(|&j| cosine_sim(&emb[j], &emb[0]).unwrap()).sum();
        assert!((s.similarity_term - brute).abs() < 1e-12);
    }

    #[test]
    fn percentile_examples() {
        assert_eq!(percentile(&[1.0, 2.0, 3.0, 4.0], 50.0).unwrap(), 2.5);
        assert_eq!(percentile(&[5.0], 40.0).unwrap(), 5.0);
        assert!((percentile(&[0.1, 0.3, 0.5, 0.9], 60.0).unwrap() - 0.46).abs() < 1e-12);
        assert!((percentile(&[0.9, 0.1, 0.5, 0.3], 60.0).unwrap() - 0.46).abs() < 1e-12);
    }

    #[test]
    fn percentile_errors() {
        assert!(matches!(percentile(&[], 50.0), Err(CompressError::EmptyInput)));
        assert!(matches!(percentile(&[1.0], 101.0), Err(CompressError::PercentileRange(_))));
    }

    #[test]
    fn filter_example() {
        let (kept, t) = filter_units(&scores_from(&[0.1, 0.9, 0.5, 0.3]), &cfg(0.6, 1)).unwrap();
        assert!((t - 0.46).abs() < 1e-12);
        assert_eq!(kept.into_iter().collect::<Vec<_>>(), [0, 3]);
    }

    #[test]
    fn filter_all_equal_uses_guard() {
        let (kept, _) = filter_units(&scores_from(&[0.4; 5]), &cfg(0.6, 1)).unwrap();
        assert_eq!(kept.into_iter().collect::<Vec<_>>(), [0]);
        let (kept, _) = filter_units(&scores_from(&[0.4; 5]), &cfg(0.6, 0)).unwrap();
        assert!(kept.is_empty());
    }

    #[test]
    fn filter_ratio_one_drops_only_maxima() {
        let totals = [0.3, -1.2, 2.5, 0.0, 2.5, 1.1, -0.4, 0.9, 1.7, 0.2];
        let (kept, t) = filter_units(&scores_from(&totals), &cfg(1.0, 1)).unwrap();
        assert_eq!(t, 2.5);
        let brute: BTreeSet<usize> = (0..totals.len()).filter(|&i| totals[i] < 2.5).collect();
        assert_eq!(kept, brute);
        assert_eq!(kept.len(), 8);
    }

    #[test]
    fn merge_examples() {
        let text = "alpha beta gamma";
        let toks = split_sentences(tokenize(text));
        let units = segment(&toks, Granularity::Word);
        assert_eq!(merge_units(text, &toks, &units, &[0, 2].into()), "alpha gamma");
        assert_eq!(merge_units(text, &toks, &units, &BTreeSet::new()), "");
        assert_eq!(merge_units(text, &toks, &units, &(0..3).collect()), text);
    }

    #[test]
    fn merge_keeps_trailing_punctuation_and_normalises_space() {
        let text = "\"Hello,   world!\"  Bye .";
        let toks = split_sentences(tokenize(text));
        let units = segment(&toks, Granularity::Word);
        assert_eq!(merge_units(text, &toks, &units, &(0..3).collect()), "\"Hello, world!\" Bye .");
        assert_eq!(merge_units(text, &toks, &units, &[1].into()), "world!\"");
    }

    fn sentence_tokens(lengths: &[usize]) -> Vec<Token> {
        let mut out = Vec::new();
        for (s, &len) in lengths.iter().enumerate() {
            for _ in 0..len {
                let at = out.len();
                out.push(Token {
                    text: "w".into(),
                    byte_span: at..at + 1,
                    is_word: true,
                    sentence_index: s,
                });
            }
        }
        out
    }

    #[test]
    fn chunk_examples() {
        assert_eq!(chunk(&sentence_tokens(&[512, 488]), 512), [0..512, 512..1000]);
        let one = chunk(&sentence_tokens(&[10]), 512);
        assert_eq!((one.len(), one[0].clone()), (1, 0..10));
        assert_eq!(chunk(&sentence_tokens(&[300, 300, 300]), 512), [0..300, 300..600, 600..900]);
        assert_eq!(chunk(&sentence_tokens(&[100, 200, 300]), 512), [0..300, 300..600]);
        assert_eq!(chunk(&sentence_tokens(&[5, 1100, 5]), 512), [0..5, 5..517, 517..1029, 1029..1105, 1105..1110]);
        assert!(chunk(&[], 512).is_empty());
    }

    #[test]
    fn config_validation() {
        assert!(CompressionConfig::default().validate().is_ok());
        for bad in [
            CompressionConfig { ratio: 0.0, ..Default::default() },
            CompressionConfig { ratio: 1.2, ..Default::default() },
            CompressionConfig { alpha: -1.0, ..Default::default() },
            CompressionConfig { window_k: 0, ..Default::default() },
            CompressionConfig { window_k: 3, chunk_size: 6, ..Default::default() },
        ] {
            assert!(matches!(bad.validate(), Err(CompressError::Config(_))), "{bad:?}");
        }
    }

    #[test]
    fn compress_ratio_one_is_identity_merge() {
        let text = "The quick brown fox jumps over the lazy dog. It was not amused!";
        let backend = ReferenceBackend::from_units(text.split_whitespace());
        let r = compress(text, &cfg(1.0, 1), &backend).unwrap();
        assert_eq!(r.compressed_text, text);
        assert_eq!(r.achieved_ratio, 1.0);
        assert_eq!(r.scores.len(), r.unit_count());
    }

    #[test]
    fn compress_single_unit_kept() {
        for ratio in [0.1, 0.4, 0.8] {
            let r = compress("Hello!", &cfg(ratio, 1), &ReferenceBackend::default()).unwrap();
            assert_eq!(r.compressed_text, "Hello!");
            assert_eq!(r.kept.len(), 1);
        }
    }

    #[test]
    fn compress_empty_text() {
        let r = compress("", &cfg(0.5, 1), &ReferenceBackend::default()).unwrap();
        assert_eq!(r.compressed_text, "");
        assert_eq!(r.achieved_ratio, 1.0);
        assert_eq!(r.threshold(), None);
    }

    #[test]
    fn compress_reports_backend_chunk() {
        struct Failing;
        impl ScorerBackend for Failing {
            fn embed(&self, _: &[&str]) -> Result<Vec<UnitEmbedding>, ScoringError> {
                Err(ScoringError::Model("boom".into()))
            }
            fn masked_log_prob(&self, _: &[&str], _: usize, _: usize) -> Result<f64, ScoringError> {
                Ok(0.0)
            }
        }
        let err = compress("a b c", &CompressionConfig::default(), &Failing).unwrap_err();
        assert!(matches!(err, CompressError::Backend { chunk: 0, .. }));
    }

    #[test]
    fn compress_thresholds_per_chunk() {
        let text = (0..40).map(|i| format!("word{i} item{} end.", i * 7 % 11)).collect::<Vec<_>>().join(" ");
        let c = CompressionConfig {
            chunk_size: 20,
            ..Default::default()
        };
        let backend = ReferenceBackend::from_units(text.split_whitespace());
        let r = compress(&text, &c, &backend).unwrap();
        // 4 tokens per sentence, 5 sentences per chunk
        assert_eq!(r.chunk_thresholds.len(), 8);
        assert_eq!(r.scores.len(), 120);
        assert!(r.scores.windows(2).all(|w| w[0].unit_id + 1 == w[1].unit_id));
    }

    /// Sort-and-interpolate with explicit rank arithmetic.
    fn percentile_oracle(values: &[f64], p: f64) -> f64 {
        let mut v = values.to_vec();
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let rank = p / 100.0 * (v.len() as f64 - 1.0);
        let below = rank.floor();
        let frac = rank - below;
        let i = below as usize;
        if i + 1 >= v.len() {
            v[v.len() - 1]
        } else {
            v[i] * (1.0 - frac) + v[i + 1] * frac
        }
    }

    proptest! {
        #[test]
        fn percentile_matches_oracle(v in prop::collection::vec(-1e3f64..1e3, 1..60), p in 0.0f64..=100.0) {
            let got = percentile(&v, p).unwrap();
            prop_assert!((got - percentile_oracle(&v, p)).abs() <= 1e-9);
        }

        #[test]
        fn kept_sets_nest(v in prop::collection::vec(-5.0f64..5.0, 1..40), a in 0.01f64..=1.0, b in 0.01f64..=1.0) {
            let (r1, r2) = if a <= b { (a, b) } else { (b, a) };
            let s = scores_from(&v);
            let (k1, _) = filter_units(&s, &cfg(r1, 1)).unwrap();
            let (k2, _) = filter_units(&s, &cfg(r2, 1)).unwrap();
            prop_assert!(k1.is_subset(&k2));
        }

        #[test]
        fn merged_text_is_in_order(words in prop::collection::vec("[a-z]{1,6}", 1..30), mask in any::<u64>()) {
            let text = words.join(" ");
            let toks = split_sentences(tokenize(&text));
            let units = segment(&toks, Granularity::Word);
            let kept: BTreeSet<usize> = (0..units.len()).filter(|i| mask >> (i % 64) & 1 == 1).collect();
            let expect: Vec<&str> = kept.iter().map(|&i| words[i].as_str()).collect();
            prop_assert_eq!(merge_units(&text, &toks, &units, &kept), expect.join(" "));
        }

        #[test]
        fn chunks_cover_tokens(lengths in prop::collection::vec(1usize..40, 0..20), size in 1usize..64) {
            let toks = sentence_tokens(&lengths);
            let chunks = chunk(&toks, size);
            let mut next = 0;
            for c in &chunks {
                prop_assert_eq!(c.start, next);
                prop_assert!(c.len() <= size && !c.is_empty());
                next = c.end;
            }
            prop_assert_eq!(next, toks.len());
        }
    }
}
