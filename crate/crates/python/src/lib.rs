//! Python bindings: configuration and result types, compression with the
//! reference scorer, the random-deletion baseline, segmentation and metrics.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use icpc::metrics::Prf;
use icpc::segmentation::segment_text;
use icpc::{Granularity, Lexicon, ReferenceBackend};

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

#[pyclass(name = "CompressionConfig", from_py_object)]
#[derive(Clone, Default)]
pub struct PyCompressionConfig {
    inner: icpc::CompressionConfig,
}

#[pymethods]
impl PyCompressionConfig {
    #[new]
    #[pyo3(signature = (ratio=0.6, alpha=1.0, window=3, granularity="word", chunk_size=512, min_keep=1, seed=0))]
    fn new(
        ratio: f64,
        alpha: f64,
        window: usize,
        granularity: &str,
        chunk_size: usize,
        min_keep: usize,
        seed: u64,
    ) -> PyResult<Self> {
        let inner = icpc::CompressionConfig {
            alpha,
            ratio,
            window_k: window,
            granularity: granularity.parse::<Granularity>().map_err(value_error)?,
            chunk_size,
            min_keep,
            seed,
        };
        inner.validate().map_err(value_error)?;
        Ok(Self { inner })
    }

    #[getter]
    fn ratio(&self) -> f64 {
        self.inner.ratio
    }

    #[getter]
    fn alpha(&self) -> f64 {
        self.inner.alpha
    }

    #[getter]
    fn window(&self) -> usize {
        self.inner.window_k
    }

    #[getter]
    fn granularity(&self) -> String {
        self.inner.granularity.to_string()
    }

    #[getter]
    fn chunk_size(&self) -> usize {
        self.inner.chunk_size
    }

    #[getter]
    fn min_keep(&self) -> usize {
        self.inner.min_keep
    }

    #[getter]
    fn seed(&self) -> u64 {
        self.inner.seed
    }

    fn __repr__(&self) -> String {
        let c = &self.inner;
        format!(
            "CompressionConfig(ratio={}, alpha={}, window={}, granularity='{}', chunk_size={}, min_keep={}, seed={})",
            c.ratio, c.alpha, c.window_k, c.granularity, c.chunk_size, c.min_keep, c.seed
        )
    }
}

#[pyclass(name = "CompressionResult", skip_from_py_object)]
pub struct PyCompressionResult {
    inner: icpc::CompressionResult,
}

#[pymethods]
impl PyCompressionResult {
    #[getter]
    fn original_text(&self) -> &str {
        &self.inner.original_text
    }

    #[getter]
    fn compressed_text(&self) -> &str {
        &self.inner.compressed_text
    }

    #[getter]
    fn units(&self) -> Vec<String> {
        self.inner.unit_texts.clone()
    }

    /// Total score per unit; empty for the random baseline.
    #[getter]
    fn scores(&self) -> Vec<f64> {
        self.inner.scores.iter().map(|s| s.total).collect()
    }

    #[getter]
    fn kept(&self) -> Vec<usize> {
        self.inner.kept.iter().copied().collect()
    }

    #[getter]
    fn achieved_ratio(&self) -> f64 {
        self.inner.achieved_ratio
    }

    #[getter]
    fn target_ratio(&self) -> f64 {
        self.inner.target_ratio
    }

    #[getter]
    fn threshold(&self) -> Option<f64> {
        self.inner.threshold()
    }

    fn __len__(&self) -> usize {
        self.inner.unit_count()
    }

    fn __repr__(&self) -> String {
        format!(
            "CompressionResult(kept={}/{}, achieved_ratio={:.4})",
            self.inner.kept.len(),
            self.inner.unit_count(),
            self.inner.achieved_ratio
        )
    }
}

/// Compresses `text` with the reference scorer. Unigram counts come from
/// `corpus` when given, otherwise from `text` itself.
#[pyfunction]
#[pyo3(signature = (text, config=None, corpus=None))]
fn compress(
    py: Python<'_>,
    text: &str,
    config: Option<PyCompressionConfig>,
    corpus: Option<Vec<String>>,
) -> PyResult<PyCompressionResult> {
    let cfg = config.unwrap_or_default().inner;
    let lexicon = Lexicon::bundled();
    let docs = corpus.unwrap_or_else(|| vec![text.to_string()]);
    let inner = py.detach(|| {
        let mut units = Vec::new();
        for doc in &docs {
            let (_, us) = segment_text(doc, cfg.granularity, lexicon);
            units.extend(us.iter().map(|u| u.text(doc).to_string()));
        }
        let backend = ReferenceBackend::from_units(units);
        icpc::compress_with(text, &cfg, &backend, lexicon)
    });
    Ok(PyCompressionResult {
        inner: inner.map_err(value_error)?,
    })
}

#[pyfunction]
#[pyo3(signature = (text, config=None))]
fn random_deletion(text: &str, config: Option<PyCompressionConfig>) -> PyResult<PyCompressionResult> {
    let cfg = config.unwrap_or_default().inner;
    let inner = icpc::random_deletion(text, &cfg).map_err(value_error)?;
    Ok(PyCompressionResult { inner })
}

/// Unit texts of `text` at the given granularity.
#[pyfunction]
#[pyo3(signature = (text, granularity="word"))]
fn segment(text: &str, granularity: &str) -> PyResult<Vec<String>> {
    let g: Granularity = granularity.parse().map_err(value_error)?;
    let (_, units) = segment_text(text, g, Lexicon::bundled());
    Ok(units.iter().map(|u| u.text(text).to_string()).collect())
}

fn prf_dict<'py>(py: Python<'py>, p: &Prf) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("precision", p.precision)?;
    d.set_item("recall", p.recall)?;
    d.set_item("f1", p.f1)?;
    Ok(d)
}

/// Metric report as a dict keyed like the JSONL output.
#[pyfunction]
fn evaluate<'py>(py: Python<'py>, original: &str, compressed: &str) -> PyResult<Bound<'py, PyDict>> {
    let m = icpc::evaluate(original, compressed).map_err(value_error)?;
    let d = PyDict::new(py);
    d.set_item("compression_rate", m.compression_rate)?;
    d.set_item("bleu", m.bleu)?;
    d.set_item("rouge1", prf_dict(py, &m.rouge1)?)?;
    d.set_item("rouge2", prf_dict(py, &m.rouge2)?)?;
    d.set_item("rougeL", prf_dict(py, &m.rouge_l)?)?;
    d.set_item("jaccard", m.jaccard)?;
    d.set_item("tfidf_cosine", m.tfidf_cosine)?;
    d.set_item("flesch_kincaid_grade", m.flesch_kincaid_grade)?;
    Ok(d)
}

/// Linear-interpolation percentile, `p` in [0, 100].
#[pyfunction]
fn percentile(values: Vec<f64>, p: f64) -> PyResult<f64> {
    icpc::percentile(&values, p).map_err(value_error)
}

/// Entropy in bits of a probability vector.
#[pyfunction]
fn shannon_entropy(p: Vec<f64>) -> PyResult<f64> {
    icpc::shannon_entropy(&p).map_err(value_error)
}

#[pymodule]
fn icpc_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyCompressionConfig>()?;
    m.add_class::<PyCompressionResult>()?;
    m.add_function(wrap_pyfunction!(compress, m)?)?;
    m.add_function(wrap_pyfunction!(random_deletion, m)?)?;
    m.add_function(wrap_pyfunction!(segment, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate, m)?)?;
    m.add_function(wrap_pyfunction!(percentile, m)?)?;
    m.add_function(wrap_pyfunction!(shannon_entropy, m)?)?;
    Ok(())
}
