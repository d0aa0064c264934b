//! Command-line surface.
//!
//! Exit codes: 0 success, 1 configuration error, 2 I/O error, 3 backend
//! error. Diagnostics go to standard error; standard output carries only
//! results and tables.

mod heatmap;

use std::fmt::Write as _;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::compressor::{compress_with, random_deletion_with, CompressError, CompressionConfig, CompressionResult};
use crate::corpus::{
    corpus_stats, fmt_f64, metrics_json, read_corpus, read_results, write_results_to, CorpusDocument, CorpusError,
    CorpusFormat, DocumentResult,
};
use crate::metrics::{evaluate, MetricReport, Prf};
use crate::scoring::{ReferenceBackend, ScorerBackend};
use crate::segmentation::{segment_text, Granularity, Lexicon};

pub use heatmap::{heatmap_html, importance, render_heatmap};

/// Environment variable consulted when `--model-path` is absent.
pub const MODEL_DIR_ENV: &str = "ICPC_MODEL_DIR";

#[derive(Debug, Parser)]
#[command(name = "icpc", version, about = "Compress long prompts by removing redundant lexical units")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compress every document of a corpus and write JSONL results.
    Compress(CompressArgs),
    /// Run the original, random, selective and icpc arms side by side.
    Compare(CompareArgs),
    /// Recompute metrics for a results file.
    Evaluate(EvaluateArgs),
    /// Render a unit-importance heatmap for one document.
    Heatmap(HeatmapArgs),
    /// Print corpus statistics.
    Stats(StatsArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BackendKind {
    Reference,
    Encoder,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Text,
    Jsonl,
}

#[derive(Debug, Clone, Args)]
pub struct InputArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Defaults to jsonl for `.jsonl` files, text otherwise.
    #[arg(long, value_enum)]
    pub format: Option<FormatArg>,
}

impl InputArgs {
    fn format(&self) -> CorpusFormat {
        match self.format {
            Some(FormatArg::Text) => CorpusFormat::Text,
            Some(FormatArg::Jsonl) => CorpusFormat::Jsonl,
            None if self.input.extension().is_some_and(|e| e == "jsonl") => CorpusFormat::Jsonl,
            None => CorpusFormat::Text,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct ScoringArgs {
    #[arg(long, value_enum, default_value = "reference")]
    pub backend: BackendKind,
    /// ONNX model file (encoder backend). Falls back to `$ICPC_MODEL_DIR/model.onnx`.
    #[arg(long)]
    pub model_path: Option<PathBuf>,
    /// WordPiece vocabulary (encoder backend). Falls back to `$ICPC_MODEL_DIR/vocab.txt`.
    #[arg(long)]
    pub vocab_path: Option<PathBuf>,
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 3)]
    pub window: usize,
    #[arg(long, default_value = "word")]
    pub granularity: Granularity,
    #[arg(long, default_value_t = 512)]
    pub chunk_size: usize,
    #[arg(long, default_value_t = 1)]
    pub min_keep: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads; 0 uses one per logical CPU.
    #[arg(long, default_value_t = 0)]
    pub workers: usize,
    /// Replacement abbreviation list, one entry per line.
    #[arg(long)]
    pub abbreviations: Option<PathBuf>,
    /// Replacement stop-word list, one entry per line.
    #[arg(long)]
    pub stopwords: Option<PathBuf>,
}

impl ScoringArgs {
    fn config(&self, ratio: f64) -> CompressionConfig {
        CompressionConfig {
            alpha: self.alpha,
            ratio,
            window_k: self.window,
            granularity: self.granularity,
            chunk_size: self.chunk_size,
            min_keep: self.min_keep,
            seed: self.seed,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct CompressArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Results file; JSONL goes to standard output when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Target keep fraction in (0, 1].
    #[arg(long, default_value_t = 0.6)]
    pub ratio: f64,
    #[command(flatten)]
    pub scoring: ScoringArgs,
}

#[derive(Debug, Clone, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// JSONL table, one row per arm and ratio.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_delimiter = ',', default_value = "0.8,0.6,0.4")]
    pub ratios: Vec<f64>,
    /// Include mean wall-clock time in the JSONL rows. Makes the file
    /// differ between runs.
    #[arg(long)]
    pub record_timing: bool,
    #[command(flatten)]
    pub scoring: ScoringArgs,
}

#[derive(Debug, Clone, Args)]
pub struct EvaluateArgs {
    /// Results file written by `compress`.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct HeatmapArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long)]
    pub output: PathBuf,
    /// Document to render; defaults to the first.
    #[arg(long)]
    pub id: Option<String>,
    #[arg(long, default_value_t = 0.6)]
    pub ratio: f64,
    #[command(flatten)]
    pub scoring: ScoringArgs,
}

#[derive(Debug, Clone, Args)]
pub struct StatsArgs {
    #[command(flatten)]
    pub input: InputArgs,
}

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Io(String),
    Backend(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 1,
            CliError::Io(_) => 2,
            CliError::Backend(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Config(m) | CliError::Io(m) | CliError::Backend(m) => m,
        }
    }
}

impl From<CorpusError> for CliError {
    fn from(e: CorpusError) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<CompressError> for CliError {
    fn from(e: CompressError) -> Self {
        match e {
            CompressError::Config(_) => CliError::Config(e.to_string()),
            _ => CliError::Backend(e.to_string()),
        }
    }
}

fn io_error(path: &Path) -> impl FnOnce(io::Error) -> CliError + '_ {
    move |e| CliError::Io(format!("{}: {e}", path.display()))
}

/// Parses `args` (program name first) and runs the command. Returns the
/// process exit code.
pub fn run<I, S>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{e}");
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
        }
    };
    let outcome = match &cli.command {
        Command::Compress(a) => run_compress(a, stdout, stderr),
        Command::Compare(a) => run_compare(a, stdout),
        Command::Evaluate(a) => run_evaluate(a, stdout),
        Command::Heatmap(a) => run_heatmap(a, stdout),
        Command::Stats(a) => run_stats(a, stdout),
    };
    match outcome {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e.message());
            e.exit_code()
        }
    }
}

fn thread_pool(workers: usize) -> Result<rayon::ThreadPool, CliError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| CliError::Config(format!("cannot start worker pool: {e}")))
}

fn load_lexicon(args: &ScoringArgs) -> Result<Lexicon, CliError> {
    Lexicon::load(args.abbreviations.as_deref(), args.stopwords.as_deref())
        .map_err(|e| CliError::Io(format!("cannot read word list: {e}")))
}

fn load_corpus(input: &InputArgs) -> Result<Vec<CorpusDocument>, CliError> {
    Ok(read_corpus(&input.input, input.format())?)
}

fn resolve_model_paths(args: &ScoringArgs) -> Result<(PathBuf, PathBuf), CliError> {
    let dir = std::env::var_os(MODEL_DIR_ENV).map(PathBuf::from);
    let model = args
        .model_path
        .clone()
        .or_else(|| dir.as_ref().map(|d| d.join("model.onnx")))
        .ok_or_else(|| CliError::Config(format!("--backend encoder needs --model-path or ${MODEL_DIR_ENV}")))?;
    let vocab = args
        .vocab_path
        .clone()
        .or_else(|| dir.as_ref().map(|d| d.join("vocab.txt")))
        .or_else(|| args.model_path.as_ref().and_then(|m| m.parent()).map(|d| d.join("vocab.txt")))
        .ok_or_else(|| CliError::Config("--backend encoder needs --vocab-path".into()))?;
    Ok((model, vocab))
}

/// Builds the scorer. The reference backend's unigram table is estimated
/// from every unit of the input corpus.
fn build_backend(
    args: &ScoringArgs,
    docs: &[CorpusDocument],
    lexicon: &Lexicon,
    sessions: usize,
) -> Result<Box<dyn ScorerBackend>, CliError> {
    match args.backend {
        BackendKind::Reference => {
            let mut units = Vec::new();
            for doc in docs {
                let (_, us) = segment_text(&doc.text, args.granularity, lexicon);
                units.extend(us.iter().map(|u| u.text(&doc.text).to_string()));
            }
            Ok(Box::new(ReferenceBackend::from_units(units)))
        }
        BackendKind::Encoder => {
            let (model, vocab) = resolve_model_paths(args)?;
            encoder_backend(&model, &vocab, sessions)
        }
    }
}

fn encoder_backend(_model: &Path, _vocab: &Path, _sessions: usize) -> Result<Box<dyn ScorerBackend>, CliError> {
    Err(CliError::Backend(
        format!(
        "cannot load {}: this build links no ONNX runtime; implement `MaskedLanguageModel` for your runtime and use the library API",
        _model.display()
    ),
    ))
}

/// Corpus, word lists, worker pool and scorer shared by the scoring commands.
type Prepared = (Vec<CorpusDocument>, Lexicon, rayon::ThreadPool, Box<dyn ScorerBackend>);

fn prepare(
    input: &InputArgs,
    scoring: &ScoringArgs,
    ratios: &[f64],
) -> Result<Prepared, CliError> {
    for &r in ratios {
        scoring.config(r).validate()?;
    }
    let pool = thread_pool(scoring.workers)?;
    let lexicon = load_lexicon(scoring)?;
    let docs = load_corpus(input)?;
    let backend = build_backend(scoring, &docs, &lexicon, pool.current_num_threads())?;
    Ok((docs, lexicon, pool, backend))
}

fn metrics_for(original: &str, compressed: &str) -> MetricReport {
    // Documents without words have no defined metrics; report zeros.
    evaluate(original, compressed).unwrap_or_default()
}

struct Timed<T> {
    value: T,
    ms: f64,
}

fn timed<T, E>(f: impl FnOnce() -> Result<T, E>) -> Result<Timed<T>, E> {
    let start = Instant::now();
    let value = f()?;
    Ok(Timed {
        value,
        ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

pub fn run_compress(args: &CompressArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), CliError> {
    let (docs, lexicon, pool, backend) = prepare(&args.input, &args.scoring, &[args.ratio])?;
    let cfg = args.scoring.config(args.ratio);

    let timed_results: Vec<Timed<DocumentResult>> = pool.install(|| {
        docs.par_iter()
            .map(|doc| {
                let t = timed(|| compress_with(&doc.text, &cfg, backend.as_ref(), &lexicon))
                    .map_err(|e| CliError::from(e).prefixed(&doc.id))?;
                let metrics = metrics_for(&doc.text, &t.value.compressed_text);
                Ok(Timed {
                    value: DocumentResult {
                        id: doc.id.clone(),
                        result: t.value,
                        metrics,
                    },
                    ms: t.ms,
                })
            })
            .collect::<Result<_, CliError>>()
    })?;

    let n = timed_results.len().max(1) as f64;
    let mean_ratio = timed_results.iter().map(|t| t.value.result.achieved_ratio).sum::<f64>() / n;
    let mean_ms = timed_results.iter().map(|t| t.ms).sum::<f64>() / n;
    let results: Vec<DocumentResult> = timed_results.into_iter().map(|t| t.value).collect();
    let summary = format!(
        "documents: {}  mean ratio: {:.4}  mean ms/document: {:.3}\n",
        results.len(),
        mean_ratio,
        mean_ms
    );

    match &args.output {
        Some(path) => {
            let file = std::fs::File::create(path).map_err(io_error(path))?;
            write_results_to(&results, io::BufWriter::new(file)).map_err(io_error(path))?;
            stdout.write_all(summary.as_bytes()).map_err(io_error(Path::new("<stdout>")))?;
        }
        None => {
            write_results_to(&results, &mut *stdout).map_err(io_error(Path::new("<stdout>")))?;
            let _ = stderr.write_all(summary.as_bytes());
        }
    }
    Ok(())
}

impl CliError {
    fn prefixed(self, id: &str) -> Self {
        match self {
            CliError::Config(m) => CliError::Config(format!("document `{id}`: {m}")),
            CliError::Io(m) => CliError::Io(format!("document `{id}`: {m}")),
            CliError::Backend(m) => CliError::Backend(format!("document `{id}`: {m}")),
        }
    }
}

/// The arms of a comparison run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Arm {
    /// Uncompressed text.
    Original,
    /// Seeded uniform deletion.
    Random,
    /// Log-probability term only (`alpha = 0`).
    Selective,
    /// Full score with the configured alpha.
    Icpc,
}

impl Arm {
    pub fn name(self) -> &'static str {
        match self {
            Arm::Original => "original",
            Arm::Random => "random",
            Arm::Selective => "selective",
            Arm::Icpc => "icpc",
        }
    }
}

#[derive(Debug, Clone)]
pub struct CompareRow {
    pub arm: Arm,
    pub ratio: Option<f64>,
    pub documents: usize,
    pub metrics: MetricReport,
    pub mean_ms: f64,
}

fn mean_prf(items: &[&Prf]) -> Prf {
    let n = items.len().max(1) as f64;
    Prf {
        precision: items.iter().map(|p| p.precision).sum::<f64>() / n,
        recall: items.iter().map(|p| p.recall).sum::<f64>() / n,
        f1: items.iter().map(|p| p.f1).sum::<f64>() / n,
    }
}

/// Field-wise mean. The grade averages only documents where it is defined.
pub fn mean_report(reports: &[MetricReport]) -> MetricReport {
    let n = reports.len().max(1) as f64;
    let mean = |f: fn(&MetricReport) -> f64| reports.iter().map(f).sum::<f64>() / n;
    let grades: Vec<f64> = reports.iter().filter_map(|r| r.flesch_kincaid_grade).collect();
    MetricReport {
        compression_rate: mean(|r| r.compression_rate),
        bleu: mean(|r| r.bleu),
        rouge1: mean_prf(&reports.iter().map(|r| &r.rouge1).collect::<Vec<_>>()),
        rouge2: mean_prf(&reports.iter().map(|r| &r.rouge2).collect::<Vec<_>>()),
        rouge_l: mean_prf(&reports.iter().map(|r| &r.rouge_l).collect::<Vec<_>>()),
        jaccard: mean(|r| r.jaccard),
        tfidf_cosine: mean(|r| r.tfidf_cosine),
        flesch_kincaid_grade: if grades.is_empty() {
            None
        } else {
            Some(grades.iter().sum::<f64>() / grades.len() as f64)
        },
    }
}

fn run_arm(
    arm: Arm,
    ratio: f64,
    docs: &[CorpusDocument],
    args: &ScoringArgs,
    backend: &dyn ScorerBackend,
    lexicon: &Lexicon,
) -> Result<CompareRow, CliError> {
    let mut cfg = args.config(ratio);
    if arm == Arm::Selective {
        cfg.alpha = 0.0;
    }
    let outputs: Vec<Timed<String>> = docs
        .par_iter()
        .map(|doc| {
            let compressed = |r: CompressionResult| r.compressed_text;
            match arm {
                Arm::Original => timed(|| Ok::<_, CompressError>(doc.text.clone())),
                Arm::Random => timed(|| random_deletion_with(&doc.text, &cfg, lexicon).map(compressed)),
                Arm::Selective | Arm::Icpc => {
                    timed(|| compress_with(&doc.text, &cfg, backend, lexicon).map(compressed))
                }
            }
            .map_err(|e| CliError::from(e).prefixed(&doc.id))
        })
        .collect::<Result<_, _>>()?;
    let reports: Vec<MetricReport> = docs
        .iter()
        .zip(&outputs)
        .map(|(d, o)| metrics_for(&d.text, &o.value))
        .collect();
    Ok(CompareRow {
        arm,
        ratio: (arm != Arm::Original).then_some(ratio),
        documents: docs.len(),
        metrics: mean_report(&reports),
        mean_ms: outputs.iter().map(|o| o.ms).sum::<f64>() / outputs.len().max(1) as f64,
    })
}

/// Aligned text table of comparison rows.
pub fn format_compare_table(rows: &[CompareRow]) -> String {
    let header = [
        "arm", "ratio", "rate", "bleu", "r1_p", "r1_r", "r1_f", "r2_f", "rL_f", "jaccard", "tfidf", "fk_grade", "ms",
    ];
    let mut cells: Vec<Vec<String>> = vec![header.iter().map(|s| s.to_string()).collect()];
    for r in rows {
        let m = &r.metrics;
        cells.push(vec![
            r.arm.name().to_string(),
            r.ratio.map_or("-".into(), |x| format!("{x:.2}")),
            format!("{:.4}", m.compression_rate),
            format!("{:.4}", m.bleu),
            format!("{:.4}", m.rouge1.precision),
            format!("{:.4}", m.rouge1.recall),
            format!("{:.4}", m.rouge1.f1),
            format!("{:.4}", m.rouge2.f1),
            format!("{:.4}", m.rouge_l.f1),
            format!("{:.4}", m.jaccard),
            format!("{:.4}", m.tfidf_cosine),
            m.flesch_kincaid_grade.map_or("-".into(), |g| format!("{g:.2}")),
            format!("{:.3}", r.mean_ms),
        ]);
    }
    let widths: Vec<usize> = (0..header.len())
        .map(|c| cells.iter().map(|row| row[c].len()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for row in &cells {
        let line: Vec<String> = row
            .iter()
            .enumerate()
            .map(|(c, s)| if c == 0 { format!("{s:<w$}", w = widths[c]) } else { format!("{s:>w$}", w = widths[c]) })
            .collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    }
    out
}

/// One JSONL row: arm, ratio, document count, the flattened metric report
/// and optionally the mean time.
pub fn compare_row_json(row: &CompareRow, with_timing: bool) -> String {
    let mut out = String::new();
    let _ = write!(out, "{{\"arm\":\"{}\",\"ratio\":", row.arm.name());
    match row.ratio {
        Some(r) => fmt_f64(&mut out, r),
        None => out.push_str("null"),
    }
    let _ = write!(out, ",\"documents\":{},", row.documents);
    let metrics = metrics_json(&row.metrics);
    out.push_str(&metrics[1..metrics.len() - 1]);
    if with_timing {
        out.push_str(",\"mean_ms\":");
        fmt_f64(&mut out, row.mean_ms);
    }
    out.push('}');
    out
}

pub fn run_compare(args: &CompareArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    if args.ratios.is_empty() {
        return Err(CliError::Config("--ratios must list at least one ratio".into()));
    }
    let (docs, lexicon, pool, backend) = prepare(&args.input, &args.scoring, &args.ratios)?;

    let rows = pool.install(|| -> Result<Vec<CompareRow>, CliError> {
        let mut rows = vec![run_arm(Arm::Original, 1.0, &docs, &args.scoring, backend.as_ref(), &lexicon)?];
        for arm in [Arm::Random, Arm::Selective, Arm::Icpc] {
            for &ratio in &args.ratios {
                rows.push(run_arm(arm, ratio, &docs, &args.scoring, backend.as_ref(), &lexicon)?);
            }
        }
        Ok(rows)
    })?;

    stdout
        .write_all(format_compare_table(&rows).as_bytes())
        .map_err(io_error(Path::new("<stdout>")))?;
    if let Some(path) = &args.output {
        let body: String = rows
            .iter()
            .map(|r| compare_row_json(r, args.record_timing) + "\n")
            .collect();
        std::fs::write(path, body).map_err(io_error(path))?;
    }
    Ok(())
}

pub fn run_evaluate(args: &EvaluateArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let lines = read_results(&args.input)?;
    let reports: Vec<(String, MetricReport)> = lines
        .iter()
        .map(|l| (l.id.clone(), metrics_for(&l.original, &l.compressed)))
        .collect();
    let mut table = String::from("id\trate\tbleu\trouge1_f1\trougeL_f1\tjaccard\ttfidf\n");
    for (id, m) in &reports {
        let _ = writeln!(
            table,
            "{id}\t{:.4}\t{:.4}\t{:.4}\t{:.4}\t{:.4}\t{:.4}",
            m.compression_rate, m.bleu, m.rouge1.f1, m.rouge_l.f1, m.jaccard, m.tfidf_cosine
        );
    }
    let all: Vec<MetricReport> = reports.iter().map(|(_, m)| m.clone()).collect();
    let mean = mean_report(&all);
    let _ = writeln!(
        table,
        "mean\t{:.4}\t{:.4}\t{:.4}\t{:.4}\t{:.4}\t{:.4}",
        mean.compression_rate, mean.bleu, mean.rouge1.f1, mean.rouge_l.f1, mean.jaccard, mean.tfidf_cosine
    );
    stdout.write_all(table.as_bytes()).map_err(io_error(Path::new("<stdout>")))?;

    if let Some(path) = &args.output {
        let body: String = reports
            .iter()
            .map(|(id, m)| {
                format!(
                    "{{\"id\":{},\"metrics\":{}}}\n",
                    serde_json::to_string(id).expect("strings serialize"),
                    metrics_json(m)
                )
            })
            .collect();
        std::fs::write(path, body).map_err(io_error(path))?;
    }
    Ok(())
}

pub fn run_heatmap(args: &HeatmapArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let (docs, lexicon, pool, backend) = prepare(&args.input, &args.scoring, &[args.ratio])?;
    let doc = match &args.id {
        Some(id) => docs
            .iter()
            .find(|d| &d.id == id)
            .ok_or_else(|| CliError::Config(format!("no document with id `{id}`")))?,
        None => docs.first().ok_or_else(|| CliError::Config("corpus is empty".into()))?,
    };
    let cfg = args.scoring.config(args.ratio);
    let result = pool.install(|| compress_with(&doc.text, &cfg, backend.as_ref(), &lexicon))?;
    if result.scores.is_empty() {
        return Err(CliError::Config(format!("document `{}` has no lexical units", doc.id)));
    }
    render_heatmap(&result, &args.output).map_err(io_error(&args.output))?;
    let _ = writeln!(stdout, "{}", args.output.display());
    Ok(())
}

pub fn run_stats(args: &StatsArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let docs = load_corpus(&args.input)?;
    let stats = corpus_stats(&docs);
    let line = serde_json::to_string(&stats).expect("stats serialize");
    writeln!(stdout, "{line}").map_err(io_error(Path::new("<stdout>")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("icpc").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn help_exits_zero() {
        assert_eq!(run_args(&["--help"]).0, 0);
    }

    #[test]
    fn bad_flag_is_config_error() {
        assert_eq!(run_args(&["compress", "--input", "x", "--bogus"]).0, 1);
        assert_eq!(run_args(&["compress", "--input", "x", "--granularity", "page"]).0, 1);
    }

    #[test]
    fn out_of_range_ratio_is_config_error() {
        let (code, _, err) = run_args(&["compress", "--input", "/nonexistent", "--ratio", "1.5"]);
        assert_eq!(code, 1, "{err}");
    }

    #[test]
    fn missing_input_is_io_error() {
        assert_eq!(run_args(&["stats", "--input", "/nonexistent/corpus.jsonl"]).0, 2);
    }

    #[test]
    fn format_inferred_from_extension() {
        let a = InputArgs { input: "c.jsonl".into(), format: None };
        assert_eq!(a.format(), CorpusFormat::Jsonl);
        let b = InputArgs { input: "c.txt".into(), format: None };
        assert_eq!(b.format(), CorpusFormat::Text);
    }

    #[test]
    fn mean_report_skips_missing_grades() {
        let a = MetricReport { bleu: 1.0, flesch_kincaid_grade: Some(4.0), ..Default::default() };
        let b = MetricReport { bleu: 0.0, flesch_kincaid_grade: None, ..Default::default() };
        let m = mean_report(&[a, b]);
        assert_eq!(m.bleu, 0.5);
        assert_eq!(m.flesch_kincaid_grade, Some(4.0));
    }
}
