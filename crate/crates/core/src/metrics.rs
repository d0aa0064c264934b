//! Surface-level quality metrics comparing a compressed text with its
//! original.
//!
//! Token-based metrics operate on case-folded word tokens (punctuation is
//! ignored).

use std::collections::{HashMap, HashSet};
use std::hash::Hash;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::segmentation::{split_sentences, tokenize};

#[derive(Debug, Error, PartialEq)]
pub enum MetricError {
    #[error("probabilities must be non-negative and sum to 1 (sum = {0})")]
    NotADistribution(f64),
    #[error("text has no words")]
    NoWords,
    #[error("original text has no words")]
    EmptyOriginal,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Prf {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

impl Prf {
    fn new(precision: f64, recall: f64) -> Self {
        let f1 = if precision + recall > 0.0 {
            2.0 * precision * recall / (precision + recall)
        } else {
            0.0
        };
        Self { precision, recall, f1 }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct MetricReport {
    pub compression_rate: f64,
    pub bleu: f64,
    pub rouge1: Prf,
    pub rouge2: Prf,
    #[serde(rename = "rougeL")]
    pub rouge_l: Prf,
    pub jaccard: f64,
    pub tfidf_cosine: f64,
    /// Grade of the compressed text; `None` when it has no words.
    pub flesch_kincaid_grade: Option<f64>,
}

/// Case-folded word tokens of `text`.
pub fn word_tokens(text: &str) -> Vec<String> {
    tokenize(text).into_iter().filter(|t| t.is_word).map(|t| t.text.to_lowercase()).collect()
}

/// Scores `compressed` against `original` as the reference.
pub fn evaluate(original: &str, compressed: &str) -> Result<MetricReport, MetricError> {
    let reference = word_tokens(original);
    let candidate = word_tokens(compressed);
    Ok(MetricReport {
        compression_rate: compression_rate(&reference, &candidate)?,
        bleu: bleu(&reference, &candidate),
        rouge1: rouge_n(&reference, &candidate, 1),
        rouge2: rouge_n(&reference, &candidate, 2),
        rouge_l: rouge_l(&reference, &candidate),
        jaccard: jaccard(&reference, &candidate),
        tfidf_cosine: tfidf_cosine(&reference, &candidate),
        flesch_kincaid_grade: flesch_kincaid_grade(compressed).ok(),
    })
}

/// Shannon entropy in bits; `0 log 0` is taken as 0.
pub fn shannon_entropy(p: &[f64]) -> Result<f64, MetricError> {
    let sum: f64 = p.iter().sum();
    if p.iter().any(|&x| x < 0.0 || !x.is_finite()) || (sum - 1.0).abs() > 1e-9 {
        return Err(MetricError::NotADistribution(sum));
    }
    Ok(-p.iter().filter(|&&x| x > 0.0).map(|&x| x * x.log2()).sum::<f64>() + 0.0)
}

/// Intersection over union of the two token sets. Two empty sets count as
/// identical.
pub fn jaccard<S: AsRef<str>>(a: &[S], b: &[S]) -> f64 {
    let a: HashSet<&str> = a.iter().map(AsRef::as_ref).collect();
    let b: HashSet<&str> = b.iter().map(AsRef::as_ref).collect();
    let union = a.union(&b).count();
    if union == 0 {
        return 1.0;
    }
    a.intersection(&b).count() as f64 / union as f64
}

fn ngram_counts<S: AsRef<str>>(tokens: &[S], n: usize) -> HashMap<Vec<&str>, usize> {
    let mut counts = HashMap::new();
    if n == 0 || tokens.len() < n {
        return counts;
    }
    for w in tokens.windows(n) {
        *counts.entry(w.iter().map(AsRef::as_ref).collect()).or_insert(0) += 1;
    }
    counts
}

fn clipped_overlap<K: Eq + Hash>(reference: &HashMap<K, usize>, candidate: &HashMap<K, usize>) -> usize {
    candidate
        .iter()
        .map(|(g, &c)| c.min(reference.get(g).copied().unwrap_or(0)))
        .sum()
}

pub fn rouge_n<S: AsRef<str>>(reference: &[S], candidate: &[S], n: usize) -> Prf {
    let r = ngram_counts(reference, n);
    let c = ngram_counts(candidate, n);
    let overlap = clipped_overlap(&r, &c) as f64;
    let ref_total: usize = r.values().sum();
    let cand_total: usize = c.values().sum();
    let ratio = |den: usize| if den == 0 { 0.0 } else { overlap / den as f64 };
    Prf::new(ratio(cand_total), ratio(ref_total))
}

fn lcs_len<S: AsRef<str>>(a: &[S], b: &[S]) -> usize {
    let mut prev = vec![0usize; b.len() + 1];
    let mut cur = vec![0usize; b.len() + 1];
    for x in a {
        for (j, y) in b.iter().enumerate() {
            cur[j + 1] = if x.as_ref() == y.as_ref() {
                prev[j] + 1
            } else {
                cur[j].max(prev[j + 1])
            };
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

pub fn rouge_l<S: AsRef<str>>(reference: &[S], candidate: &[S]) -> Prf {
    let l = lcs_len(reference, candidate) as f64;
    let ratio = |den: usize| if den == 0 { 0.0 } else { l / den as f64 };
    Prf::new(ratio(candidate.len()), ratio(reference.len()))
}

/// Clipped n-gram precision as `(matches, candidate n-grams)`.
pub fn modified_precision<S: AsRef<str>>(reference: &[S], candidate: &[S], n: usize) -> (usize, usize) {
    let c = ngram_counts(candidate, n);
    (clipped_overlap(&ngram_counts(reference, n), &c), c.values().sum())
}

/// Sentence BLEU with n = 1..4, uniform weights and a brevity penalty.
/// A zero match count at n >= 2 becomes `1 / (candidate n-grams + 1)`.
pub fn bleu<S: AsRef<str>>(reference: &[S], candidate: &[S]) -> f64 {
    if candidate.is_empty() {
        return 0.0;
    }
    let mut log_sum = 0.0;
    for n in 1..=4 {
        let (matches, total) = modified_precision(reference, candidate, n);
        let p = if matches > 0 {
            matches as f64 / total as f64
        } else if n == 1 {
            return 0.0;
        } else {
            1.0 / (total as f64 + 1.0)
        };
        log_sum += p.ln() / 4.0;
    }
    let bp = (1.0 - reference.len() as f64 / candidate.len() as f64).exp().min(1.0);
    (bp * log_sum.exp()).clamp(0.0, 1.0)
}

fn term_counts<S: AsRef<str>>(doc: &[S]) -> HashMap<&str, f64> {
    let mut m: HashMap<&str, f64> = HashMap::new();
    for t in doc {
        *m.entry(t.as_ref()).or_insert(0.0) += 1.0;
    }
    m
}

/// Cosine of tf-idf vectors over the two-document corpus `{a, b}`, with
/// `idf(t) = ln((1 + N) / (1 + df(t))) + 1`.
pub fn tfidf_cosine<S: AsRef<str>>(a: &[S], b: &[S]) -> f64 {
    let (ta, tb) = (term_counts(a), term_counts(b));
    let idf = |t: &str| {
        let df = usize::from(ta.contains_key(t)) + usize::from(tb.contains_key(t));
        (3.0 / (1.0 + df as f64)).ln() + 1.0
    };
    let wa: HashMap<&str, f64> = ta.iter().map(|(&t, &c)| (t, c * idf(t))).collect();
    let wb: HashMap<&str, f64> = tb.iter().map(|(&t, &c)| (t, c * idf(t))).collect();
    let dot: f64 = wa.iter().filter_map(|(t, x)| wb.get(t).map(|y| x * y)).sum();
    let na = wa.values().map(|x| x * x).sum::<f64>().sqrt();
    let nb = wb.values().map(|x| x * x).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        return 0.0;
    }
    (dot / (na * nb)).clamp(0.0, 1.0)
}

/// Vowel-group syllable estimate: each run of `aeiouy` counts once, a
/// trailing silent `e` is dropped unless the word ends in `le`, and every
/// word has at least one syllable.
pub fn count_syllables(word: &str) -> usize {
    let w = word.to_lowercase();
    let mut groups = 0;
    let mut in_vowel = false;
    for c in w.chars() {
        let v = matches!(c, 'a' | 'e' | 'i' | 'o' | 'u' | 'y');
        if v && !in_vowel {
            groups += 1;
        }
        in_vowel = v;
    }
    if w.ends_with('e') && !w.ends_with("le") && groups > 0 {
        groups -= 1;
    }
    groups.max(1)
}

/// `0.39 * words/sentences + 11.8 * syllables/words - 15.59`.
pub fn flesch_kincaid_grade(text: &str) -> Result<f64, MetricError> {
    let tokens = split_sentences(tokenize(text));
    let words: Vec<_> = tokens.iter().filter(|t| t.is_word).collect();
    if words.is_empty() {
        return Err(MetricError::NoWords);
    }
    let sentences = words.iter().map(|t| t.sentence_index).collect::<HashSet<_>>().len();
    let syllables: usize = words.iter().map(|t| count_syllables(&t.text)).sum();
    let w = words.len() as f64;
    Ok(0.39 * (w / sentences as f64) + 11.8 * (syllables as f64 / w) - 15.59)
}

/// `|compressed| / |original|` in word tokens.
pub fn compression_rate<S: AsRef<str>>(original: &[S], compressed: &[S]) -> Result<f64, MetricError> {
    if original.is_empty() {
        return Err(MetricError::EmptyOriginal);
    }
    Ok(compressed.len() as f64 / original.len() as f64)
}
