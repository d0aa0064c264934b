//! Corpus ingestion and JSONL result output.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::compressor::CompressionResult;
use crate::metrics::{MetricReport, Prf};
use crate::segmentation::tokenize;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{path}: invalid UTF-8 at byte {offset}")]
    Utf8 { path: PathBuf, offset: usize },
    #[error("{path}, line {line}: {message}")]
    Malformed { path: PathBuf, line: usize, message: String },
    #[error("{path}: duplicate document id `{id}`")]
    DuplicateId { path: PathBuf, id: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CorpusFormat {
    #[default]
    Text,
    Jsonl,
}

impl FromStr for CorpusFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "text" | "txt" => Ok(CorpusFormat::Text),
            "jsonl" => Ok(CorpusFormat::Jsonl),
            other => Err(format!("unknown format `{other}` (expected text or jsonl)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusDocument {
    pub id: String,
    pub text: String,
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> CorpusError + '_ {
    move |source| CorpusError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Reads a corpus. A text file is one document named after the file stem; a
/// JSONL file holds one `{"id", "text"}` object per non-blank line.
pub fn read_corpus(path: &Path, format: CorpusFormat) -> Result<Vec<CorpusDocument>, CorpusError> {
    let bytes = fs::read(path).map_err(io_err(path))?;
    let raw = String::from_utf8(bytes).map_err(|e| CorpusError::Utf8 {
        path: path.to_path_buf(),
        offset: e.utf8_error().valid_up_to(),
    })?;
    match format {
        CorpusFormat::Text => {
            let id = path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .filter(|s| !s.is_empty())
                .unwrap_or_else(|| "document".to_string());
            Ok(vec![CorpusDocument { id, text: raw }])
        }
        CorpusFormat::Jsonl => parse_jsonl(path, &raw),
    }
}

fn parse_jsonl(path: &Path, raw: &str) -> Result<Vec<CorpusDocument>, CorpusError> {
    let mut docs = Vec::new();
    let mut seen = HashSet::new();
    for (idx, line) in raw.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let malformed = |message: String| CorpusError::Malformed {
            path: path.to_path_buf(),
            line: idx + 1,
            message,
        };
        let doc: CorpusDocument = serde_json::from_str(line).map_err(|e| malformed(json_message(&e)))?;
        if doc.id.is_empty() {
            return Err(malformed("empty document id".into()));
        }
        if !seen.insert(doc.id.clone()) {
            return Err(CorpusError::DuplicateId {
                path: path.to_path_buf(),
                id: doc.id,
            });
        }
        docs.push(doc);
    }
    Ok(docs)
}

/// serde_json's message with its position rewritten relative to the line.
fn json_message(e: &serde_json::Error) -> String {
    let text = e.to_string();
    let head = text.split(" at line ").next().unwrap_or(&text);
    if e.column() == 0 {
        head.to_string()
    } else {
        format!("{head} (column {})", e.column())
    }
}

/// One compressed document with its metrics, as written by
/// [`write_results`].
#[derive(Debug, Clone)]
pub struct DocumentResult {
    pub id: String,
    pub result: CompressionResult,
    pub metrics: MetricReport,
}

/// A line of a results file, as read back by [`read_results`].
#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct ResultLine {
    pub id: String,
    pub original: String,
    pub compressed: String,
    pub ratio_target: f64,
    pub ratio_actual: f64,
    pub threshold: Option<f64>,
    pub units: Vec<UnitLine>,
    pub metrics: MetricReport,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct UnitLine {
    pub text: String,
    pub loss: Option<f64>,
    pub kept: bool,
}

/// Six-decimal float; non-finite values become `null`.
pub(crate) fn fmt_f64(out: &mut String, v: f64) {
    if v.is_finite() {
        let _ = write!(out, "{v:.6}");
    } else {
        out.push_str("null");
    }
}

fn fmt_opt(out: &mut String, v: Option<f64>) {
    match v {
        Some(v) => fmt_f64(out, v),
        None => out.push_str("null"),
    }
}

fn fmt_str(out: &mut String, s: &str) {
    out.push_str(&serde_json::to_string(s).expect("strings always serialize"));
}

fn fmt_prf(out: &mut String, p: &Prf) {
    out.push_str("{\"precision\":");
    fmt_f64(out, p.precision);
    out.push_str(",\"recall\":");
    fmt_f64(out, p.recall);
    out.push_str(",\"f1\":");
    fmt_f64(out, p.f1);
    out.push('}');
}

/// Serialises a metric report with fixed key order and six-decimal floats.
pub fn metrics_json(m: &MetricReport) -> String {
    let mut out = String::new();
    out.push_str("{\"compression_rate\":");
    fmt_f64(&mut out, m.compression_rate);
    out.push_str(",\"bleu\":");
    fmt_f64(&mut out, m.bleu);
    out.push_str(",\"rouge1\":");
    fmt_prf(&mut out, &m.rouge1);
    out.push_str(",\"rouge2\":");
    fmt_prf(&mut out, &m.rouge2);
    out.push_str(",\"rougeL\":");
    fmt_prf(&mut out, &m.rouge_l);
    out.push_str(",\"jaccard\":");
    fmt_f64(&mut out, m.jaccard);
    out.push_str(",\"tfidf_cosine\":");
    fmt_f64(&mut out, m.tfidf_cosine);
    out.push_str(",\"flesch_kincaid_grade\":");
    fmt_opt(&mut out, m.flesch_kincaid_grade);
    out.push('}');
    out
}

/// One JSON object for `doc`, without the trailing newline.
pub fn result_json(doc: &DocumentResult) -> String {
    let r = &doc.result;
    let mut out = String::new();
    out.push_str("{\"id\":");
    fmt_str(&mut out, &doc.id);
    out.push_str(",\"original\":");
    fmt_str(&mut out, &r.original_text);
    out.push_str(",\"compressed\":");
    fmt_str(&mut out, &r.compressed_text);
    out.push_str(",\"ratio_target\":");
    fmt_f64(&mut out, r.target_ratio);
    out.push_str(",\"ratio_actual\":");
    fmt_f64(&mut out, r.achieved_ratio);
    out.push_str(",\"threshold\":");
    fmt_opt(&mut out, r.threshold());
    out.push_str(",\"units\":[");
    for (i, text) in r.unit_texts.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str("{\"text\":");
        fmt_str(&mut out, text);
        out.push_str(",\"loss\":");
        fmt_opt(&mut out, r.scores.get(i).map(|s| s.total));
        out.push_str(",\"kept\":");
        out.push_str(if r.kept.contains(&i) { "true" } else { "false" });
        out.push('}');
    }
    out.push_str("],\"metrics\":");
    out.push_str(&metrics_json(&doc.metrics));
    out.push('}');
    out
}

pub fn write_results_to<W: Write>(results: &[DocumentResult], mut w: W) -> io::Result<()> {
    for doc in results {
        w.write_all(result_json(doc).as_bytes())?;
        w.write_all(b"\n")?;
    }
    w.flush()
}

/// Writes one JSON object per line, in input order.
pub fn write_results(results: &[DocumentResult], path: &Path) -> Result<(), CorpusError> {
    let file = fs::File::create(path).map_err(io_err(path))?;
    write_results_to(results, BufWriter::new(file)).map_err(io_err(path))
}

pub fn read_results(path: &Path) -> Result<Vec<ResultLine>, CorpusError> {
    let raw = fs::read_to_string(path).map_err(io_err(path))?;
    raw.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            serde_json::from_str(l).map_err(|e| CorpusError::Malformed {
                path: path.to_path_buf(),
                line: i + 1,
                message: json_message(&e),
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct CorpusStats {
    pub doc_count: usize,
    pub token_count: usize,
    pub mean_tokens: f64,
    pub max_tokens: usize,
}

pub fn corpus_stats(docs: &[CorpusDocument]) -> CorpusStats {
    let counts: Vec<usize> = docs.iter().map(|d| tokenize(&d.text).len()).collect();
    let token_count: usize = counts.iter().sum();
    CorpusStats {
        doc_count: docs.len(),
        token_count,
        mean_tokens: if docs.is_empty() {
            0.0
        } else {
            token_count as f64 / docs.len() as f64
        },
        max_tokens: counts.into_iter().max().unwrap_or(0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compressor::{compress, CompressionConfig};
    use crate::metrics::evaluate;
    use crate::scoring::ReferenceBackend;
    use proptest::prelude::*;

    fn write(dir: &Path, name: &str, body: &[u8]) -> PathBuf {
        let p = dir.join(name);
        fs::write(&p, body).unwrap();
        p
    }

    #[test]
    fn text_file_single_document() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(dir.path(), "a.txt", b"hi");
        assert_eq!(
            read_corpus(&p, CorpusFormat::Text).unwrap(),
            [CorpusDocument { id: "a".into(), text: "hi".into() }]
        );
    }

    #[test]
    fn jsonl_preserves_order_and_skips_blanks() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(dir.path(), "c.jsonl", b"{\"id\":\"z\",\"text\":\"one\"}\n\n{\"id\":\"a\",\"text\":\"two\",\"extra\":1}\n");
        let docs = read_corpus(&p, CorpusFormat::Jsonl).unwrap();
        assert_eq!(docs.iter().map(|d| d.id.as_str()).collect::<Vec<_>>(), ["z", "a"]);
        assert_eq!(docs[1].text, "two");
    }

    #[test]
    fn jsonl_missing_text_names_line() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(dir.path(), "c.jsonl", b"{\"id\":\"a\",\"text\":\"x\"}\n{\"id\":\"b\"}\n");
        let err = read_corpus(&p, CorpusFormat::Jsonl).unwrap_err();
        assert!(matches!(err, CorpusError::Malformed { line: 2, .. }), "{err}");
        assert!(err.to_string().contains("line 2: missing field `text`"));
    }

    #[test]
    fn jsonl_duplicate_id() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(dir.path(), "c.jsonl", b"{\"id\":\"a\",\"text\":\"x\"}\n{\"id\":\"a\",\"text\":\"y\"}\n");
        assert!(matches!(read_corpus(&p, CorpusFormat::Jsonl), Err(CorpusError::DuplicateId { .. })));
    }

    #[test]
    fn invalid_utf8_is_an_error() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(dir.path(), "bad.txt", b"ok \xff\xfe");
        assert!(matches!(read_corpus(&p, CorpusFormat::Text), Err(CorpusError::Utf8 { offset: 3, .. })));
    }

    #[test]
    fn missing_file() {
        assert!(matches!(
            read_corpus(Path::new("/nonexistent/x.txt"), CorpusFormat::Text),
            Err(CorpusError::Io { .. })
        ));
    }

    fn sample(id: &str, text: &str, ratio: f64) -> DocumentResult {
        let backend = ReferenceBackend::from_units(text.split_whitespace());
        let cfg = CompressionConfig { ratio, ..Default::default() };
        let result = compress(text, &cfg, &backend).unwrap();
        let metrics = evaluate(text, &result.compressed_text).unwrap();
        DocumentResult { id: id.into(), result, metrics }
    }

    #[test]
    fn empty_results_empty_file() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("out.jsonl");
        write_results(&[], &p).unwrap();
        assert_eq!(fs::read(&p).unwrap(), b"");
    }

    #[test]
    fn one_result_one_line_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("out.jsonl");
        let doc = sample("d1", "The cat sat on the mat, and the dog sat on the log.", 0.6);
        write_results(std::slice::from_ref(&doc), &p).unwrap();
        let raw = fs::read_to_string(&p).unwrap();
        assert_eq!(raw.lines().count(), 1);
        assert!(raw.ends_with('\n'));
        let v: serde_json::Value = serde_json::from_str(raw.trim_end()).unwrap();
        let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
        assert_eq!(keys.len(), 8);
        assert!(raw.starts_with("{\"id\":\"d1\",\"original\":"));
        assert!(raw.contains("\"ratio_target\":0.600000,"));

        let back = read_results(&p).unwrap();
        assert!((back[0].ratio_actual - doc.result.achieved_ratio).abs() < 1e-6);
        assert_eq!(back[0].units.len(), doc.result.unit_count());
        assert_eq!(back[0].compressed, doc.result.compressed_text);
    }

    #[test]
    fn stats_examples() {
        assert_eq!(corpus_stats(&[]), CorpusStats::default());
        let one = [CorpusDocument { id: "a".into(), text: "a b".into() }];
        assert_eq!(
            corpus_stats(&one),
            CorpusStats { doc_count: 1, token_count: 2, mean_tokens: 2.0, max_tokens: 2 }
        );
        let two = [
            CorpusDocument { id: "a".into(), text: "a b".into() },
            CorpusDocument { id: "b".into(), text: "c d e f".into() },
        ];
        let s = corpus_stats(&two);
        assert_eq!((s.mean_tokens, s.max_tokens), (3.0, 4));
    }

    proptest! {
        #[test]
        fn jsonl_round_trip_lossless(texts in prop::collection::vec("\\PC{0,30}", 1..5)) {
            let dir = tempfile::tempdir().unwrap();
            let p = dir.path().join("in.jsonl");
            let docs: Vec<CorpusDocument> = texts
                .iter()
                .enumerate()
                .map(|(i, t)| CorpusDocument { id: format!("doc-{i}-é"), text: t.clone() })
                .collect();
            let body: String = docs.iter().map(|d| serde_json::to_string(d).unwrap() + "\n").collect();
            fs::write(&p, body).unwrap();
            prop_assert_eq!(read_corpus(&p, CorpusFormat::Jsonl).unwrap(), docs);
        }

        #[test]
        fn results_round_trip_strings(text in "[a-zé ]{1,40}[a-z]") {
            let dir = tempfile::tempdir().unwrap();
            let p = dir.path().join("out.jsonl");
            let doc = sample("x\"y", &text, 0.8);
            write_results(std::slice::from_ref(&doc), &p).unwrap();
            let back = read_results(&p).unwrap();
            prop_assert_eq!(&back[0].id, "x\"y");
            prop_assert_eq!(&back[0].original, &text);
            prop_assert_eq!(&back[0].compressed, &doc.result.compressed_text);
        }
    }
}
