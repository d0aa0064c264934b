use std::collections::HashMap;

use super::{ScorerBackend, ScoringError, UnitEmbedding};

/// Dimension of [`reference_embed`] vectors.
pub const REFERENCE_DIM: usize = 64;

const FNV_OFFSET_BASIS: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

/// 64-bit FNV-1a.
pub fn fnv1a_64(bytes: &[u8]) -> u64 {
    bytes
        .iter()
        .fold(FNV_OFFSET_BASIS, |h, &b| (h ^ u64::from(b)).wrapping_mul(FNV_PRIME))
}

/// Hashed character-trigram embedding.
///
/// The case-folded text is wrapped in `^`/`$` sentinels, each character
/// trigram is hashed with FNV-1a into one of 64 buckets, and the bucket
/// counts are L2-normalised. Empty text maps to the zero vector.
pub fn reference_embed(unit_text: &str) -> UnitEmbedding {
    let folded = unit_text.to_lowercase();
    let chars: Vec<char> = std::iter::once('^').chain(folded.chars()).chain(std::iter::once('$')).collect();
    let mut counts = vec![0.0; REFERENCE_DIM];
    let mut buf = String::with_capacity(12);
    for tri in chars.windows(3) {
        buf.clear();
        buf.extend(tri);
        counts[(fnv1a_64(buf.as_bytes()) % REFERENCE_DIM as u64) as usize] += 1.0;
    }
    UnitEmbedding::normalized(counts)
}

/// Case-folded unit counts.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FrequencyTable {
    counts: HashMap<String, u64>,
    total: u64,
}

impl FrequencyTable {
    pub fn count(&self, unit_text: &str) -> u64 {
        self.counts.get(&unit_text.to_lowercase()).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn vocab_size(&self) -> usize {
        self.counts.len()
    }

    pub fn add(&mut self, unit_text: &str) {
        *self.counts.entry(unit_text.to_lowercase()).or_insert(0) += 1;
        self.total += 1;
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, u64)> {
        self.counts.iter().map(|(k, &v)| (k.as_str(), v))
    }
}

pub fn build_frequency_table<I, S>(corpus_units: I) -> FrequencyTable
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    let mut table = FrequencyTable::default();
    for unit in corpus_units {
        table.add(unit.as_ref());
    }
    table
}

/// `ln((count + 1) / (total + vocab_size + 1))`: a Laplace-smoothed unigram
/// estimate that ignores context.
///
/// An empty table would give `ln(1/1) = 0`, a certain event; it returns
/// `ln(1/2)` instead so that nothing is scored as fully predictable.
pub fn reference_masked_log_prob(table: &FrequencyTable, unit_text: &str) -> f64 {
    if table.total() == 0 {
        return 0.5f64.ln();
    }
    let num = table.count(unit_text) as f64 + 1.0;
    let den = table.total() as f64 + table.vocab_size() as f64 + 1.0;
    (num / den).ln()
}

/// Deterministic scorer built on [`reference_embed`] and
/// [`reference_masked_log_prob`].
#[derive(Debug, Clone, Default)]
pub struct ReferenceBackend {
    table: FrequencyTable,
}

impl ReferenceBackend {
    pub fn new(table: FrequencyTable) -> Self {
        Self { table }
    }

    pub fn from_units<I, S>(corpus_units: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        Self::new(build_frequency_table(corpus_units))
    }

    pub fn table(&self) -> &FrequencyTable {
        &self.table
    }
}

impl ScorerBackend for ReferenceBackend {
    fn embed(&self, units: &[&str]) -> Result<Vec<UnitEmbedding>, ScoringError> {
        Ok(units.iter().map(|u| reference_embed(u)).collect())
    }

    fn masked_log_prob(&self, units: &[&str], target: usize, _window_k: usize) -> Result<f64, ScoringError> {
        let unit = units.get(target).ok_or(ScoringError::TargetOutOfRange {
            index: target,
            len: units.len(),
        })?;
        Ok(reference_masked_log_prob(&self.table, unit))
    }
}
