//! Masked-language-model scoring.
//!
//! The model itself sits behind [`MaskedLanguageModel`]: token ids in, per
//! position vocabulary logits and hidden states out. [`EncoderSession`] pairs
//! a model with its WordPiece vocabulary and implements the two scoring
//! operations on top of it.

use std::collections::HashMap;
use std::path::Path;
use std::sync::Mutex;

use super::{context_window, ScorerBackend, ScoringError, UnitEmbedding};

/// Row-major output of one forward pass over a single sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelOutput {
    pub seq_len: usize,
    pub vocab_size: usize,
    /// `seq_len * vocab_size` logits.
    pub logits: Vec<f32>,
    pub hidden_size: usize,
    /// `seq_len * hidden_size` final hidden states; empty when the model
    /// does not expose them.
    pub hidden: Vec<f32>,
}

impl ModelOutput {
    fn logits_at(&self, pos: usize) -> &[f32] {
        &self.logits[pos * self.vocab_size..(pos + 1) * self.vocab_size]
    }

    fn hidden_at(&self, pos: usize) -> &[f32] {
        &self.hidden[pos * self.hidden_size..(pos + 1) * self.hidden_size]
    }
}

/// A loaded encoder with a masked-language-modelling head.
pub trait MaskedLanguageModel: Send {
    /// Longest sequence (special tokens included) the model accepts.
    fn max_positions(&self) -> usize;

    fn forward(&mut self, input_ids: &[i64], attention_mask: &[i64]) -> Result<ModelOutput, ScoringError>;
}

const MAX_WORD_CHARS: usize = 100;

/// BERT-style WordPiece vocabulary (`vocab.txt`, one token per line; line
/// number is the id).
#[derive(Debug, Clone)]
pub struct WordPieceVocab {
    ids: HashMap<String, u32>,
    len: usize,
    lowercase: bool,
    cls: u32,
    sep: u32,
    mask: u32,
    unk: u32,
}

impl WordPieceVocab {
    pub fn from_file(path: &Path) -> Result<Self, ScoringError> {
        let raw = std::fs::read_to_string(path).map_err(|source| ScoringError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_tokens(raw.lines())
    }

    /// Builds a vocabulary from tokens in id order. Input is lower-cased
    /// before lookup unless some ordinary token contains an upper-case letter.
    pub fn from_tokens<I, S>(tokens: I) -> Result<Self, ScoringError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut ids = HashMap::new();
        let mut len = 0usize;
        let mut cased = false;
        for (i, tok) in tokens.into_iter().enumerate() {
            let tok = tok.as_ref().trim_end_matches('\r');
            if !(tok.starts_with('[') && tok.ends_with(']')) && tok.chars().any(char::is_uppercase) {
                cased = true;
            }
            ids.entry(tok.to_string()).or_insert(i as u32);
            len = i + 1;
        }
        let special = |name: &str| {
            ids.get(name)
                .copied()
                .ok_or_else(|| ScoringError::VocabMismatch(format!("vocabulary has no {name} token")))
        };
        Ok(Self {
            cls: special("[CLS]")?,
            sep: special("[SEP]")?,
            mask: special("[MASK]")?,
            unk: special("[UNK]")?,
            ids,
            len,
            lowercase: !cased,
        })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn cls_id(&self) -> u32 {
        self.cls
    }

    pub fn sep_id(&self) -> u32 {
        self.sep
    }

    pub fn mask_id(&self) -> u32 {
        self.mask
    }

    pub fn unk_id(&self) -> u32 {
        self.unk
    }

    pub fn token_id(&self, token: &str) -> Option<u32> {
        self.ids.get(token).copied()
    }

    /// Whitespace and punctuation pre-split followed by greedy
    /// longest-match-first WordPiece.
    pub fn encode(&self, text: &str) -> Vec<u32> {
        let text = if self.lowercase { text.to_lowercase() } else { text.to_string() };
        let mut out = Vec::new();
        for word in text.split_whitespace() {
            let mut start = 0;
            for (i, c) in word.char_indices() {
                if c.is_ascii_punctuation() || (!c.is_alphanumeric() && !c.is_whitespace()) {
                    if start < i {
                        self.word_pieces(&word[start..i], &mut out);
                    }
                    self.word_pieces(&word[i..i + c.len_utf8()], &mut out);
                    start = i + c.len_utf8();
                }
            }
            if start < word.len() {
                self.word_pieces(&word[start..], &mut out);
            }
        }
        out
    }

    fn word_pieces(&self, word: &str, out: &mut Vec<u32>) {
        if word.chars().count() > MAX_WORD_CHARS {
            out.push(self.unk);
            return;
        }
        let mut pieces = Vec::new();
        let mut start = 0;
        while start < word.len() {
            let mut end = word.len();
            let mut found = None;
            while start < end {
                let piece = if start == 0 {
                    word[start..end].to_string()
                } else {
                    format!("##{}", &word[start..end])
                };
                if let Some(&id) = self.ids.get(&piece) {
                    found = Some(id);
                    break;
                }
                end = word[..end].char_indices().next_back().map_or(start, |(i, _)| i);
            }
            match found {
                Some(id) => {
                    pieces.push(id);
                    start = end;
                }
                None => {
                    out.push(self.unk);
                    return;
                }
            }
        }
        out.extend(pieces);
    }
}

/// A model plus its vocabulary. One session serves one caller at a time.
pub struct EncoderSession<M> {
    model: M,
    vocab: WordPieceVocab,
}

impl<M: MaskedLanguageModel> EncoderSession<M> {
    pub fn new(model: M, vocab: WordPieceVocab) -> Self {
        Self { model, vocab }
    }

    pub fn vocab(&self) -> &WordPieceVocab {
        &self.vocab
    }

    fn run(&mut self, ids: &[u32]) -> Result<ModelOutput, ScoringError> {
        let limit = self.model.max_positions();
        if ids.len() > limit {
            return Err(ScoringError::ContextTooLong { len: ids.len(), limit });
        }
        let input: Vec<i64> = ids.iter().map(|&i| i64::from(i)).collect();
        let attention = vec![1i64; input.len()];
        let out = self.model.forward(&input, &attention)?;
        if out.seq_len != input.len() {
            return Err(ScoringError::Model(format!(
                "model returned {} positions for {} inputs",
                out.seq_len,
                input.len()
            )));
        }
        if out.vocab_size != self.vocab.len() {
            return Err(ScoringError::VocabMismatch(format!(
                "model emits {} logits per position, vocabulary has {} entries",
                out.vocab_size,
                self.vocab.len()
            )));
        }
        Ok(out)
    }

    /// Log-probability of `units[target]` with all of its sub-tokens masked
    /// at once, conditioned on the units within `window_k` on either side.
    /// Per-position natural-log probabilities are summed.
    pub fn masked_log_prob(&mut self, units: &[&str], target: usize, window_k: usize) -> Result<f64, ScoringError> {
        if target >= units.len() {
            return Err(ScoringError::TargetOutOfRange {
                index: target,
                len: units.len(),
            });
        }
        let mut ids = vec![self.vocab.cls];
        let mut masked = Vec::new();
        for j in context_window(units.len(), target, window_k) {
            let pieces = self.encoded(units[j]);
            if j == target {
                for original in pieces {
                    masked.push((ids.len(), original));
                    ids.push(self.vocab.mask);
                }
            } else {
                ids.extend(pieces);
            }
        }
        ids.push(self.vocab.sep);

        let out = self.run(&ids)?;
        Ok(masked
            .iter()
            .map(|&(pos, original)| log_softmax_at(out.logits_at(pos), original as usize))
            .sum())
    }

    /// Mean of the final hidden states over each unit's sub-token positions,
    /// L2-normalised. Units are packed into as few forward passes as the
    /// positional limit allows, always in source order.
    pub fn embed(&mut self, units: &[&str]) -> Result<Vec<UnitEmbedding>, ScoringError> {
        let limit = self.model.max_positions();
        let encoded: Vec<Vec<u32>> = units.iter().map(|u| self.encoded(u)).collect();
        let mut result = Vec::with_capacity(units.len());
        let mut start = 0;
        while start < encoded.len() {
            let mut end = start;
            let mut len = 2;
            while end < encoded.len() && len + encoded[end].len() <= limit {
                len += encoded[end].len();
                end += 1;
            }
            if end == start {
                return Err(ScoringError::ContextTooLong {
                    len: encoded[start].len() + 2,
                    limit,
                });
            }
            let mut ids = vec![self.vocab.cls];
            let mut spans = Vec::with_capacity(end - start);
            for pieces in &encoded[start..end] {
                spans.push(ids.len()..ids.len() + pieces.len());
                ids.extend(pieces);
            }
            ids.push(self.vocab.sep);

            let out = self.run(&ids)?;
            if out.hidden.len() != out.seq_len * out.hidden_size || out.hidden_size == 0 {
                return Err(ScoringError::Model("model exposes no hidden-state output".into()));
            }
            for span in spans {
                let mut pooled = vec![0.0f64; out.hidden_size];
                for pos in span.clone() {
                    for (acc, &h) in pooled.iter_mut().zip(out.hidden_at(pos)) {
                        *acc += f64::from(h);
                    }
                }
                let n = span.len().max(1) as f64;
                pooled.iter_mut().for_each(|x| *x /= n);
                result.push(UnitEmbedding::normalized(pooled));
            }
            start = end;
        }
        Ok(result)
    }

    fn encoded(&self, unit: &str) -> Vec<u32> {
        let ids = self.vocab.encode(unit);
        if ids.is_empty() {
            vec![self.vocab.unk]
        } else {
            ids
        }
    }
}

fn log_softmax_at(logits: &[f32], index: usize) -> f64 {
    let max = logits.iter().fold(f64::NEG_INFINITY, |m, &x| m.max(f64::from(x)));
    let sum: f64 = logits.iter().map(|&x| (f64::from(x) - max).exp()).sum();
    f64::from(logits[index]) - max - sum.ln()
}

/// [`ScorerBackend`] over a pool of sessions. Each call locks one session;
/// rayon worker threads map onto sessions by index so parallel chunks do not
/// contend when the pool is as large as the thread pool.
pub struct EncoderBackend<M> {
    sessions: Vec<Mutex<EncoderSession<M>>>,
}

impl<M: MaskedLanguageModel> EncoderBackend<M> {
    pub fn new(sessions: Vec<EncoderSession<M>>) -> Self {
        assert!(!sessions.is_empty(), "encoder backend needs at least one session");
        Self {
            sessions: sessions.into_iter().map(Mutex::new).collect(),
        }
    }

    fn with_session<T>(&self, f: impl FnOnce(&mut EncoderSession<M>) -> T) -> T {
        let slot = rayon::current_thread_index().unwrap_or(0) % self.sessions.len();
        let mut guard = self.sessions[slot].lock().unwrap_or_else(|p| p.into_inner());
        f(&mut guard)
    }
}

impl<M: MaskedLanguageModel> ScorerBackend for EncoderBackend<M> {
    fn embed(&self, units: &[&str]) -> Result<Vec<UnitEmbedding>, ScoringError> {
        self.with_session(|s| s.embed(units))
    }

    fn masked_log_prob(&self, units: &[&str], target: usize, window_k: usize) -> Result<f64, ScoringError> {
        self.with_session(|s| s.masked_log_prob(units, target, window_k))
    }
}
