//! Self-contained HTML rendering of per-unit importance.

use std::fmt::Write as _;
use std::io;
use std::path::Path;

use crate::compressor::CompressionResult;

/// Importance per unit: `(L_max - L_i) / (L_max - L_min)`, or 0.5 for every
/// unit when all scores are equal. Low redundancy means high importance.
pub fn importance(totals: &[f64]) -> Vec<f64> {
    let max = totals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = totals.iter().copied().fold(f64::INFINITY, f64::min);
    if max.partial_cmp(&min) != Some(std::cmp::Ordering::Greater) {
        return vec![0.5; totals.len()];
    }
    totals.iter().map(|&l| (max - l) / (max - min)).collect()
}

fn escape(out: &mut String, s: &str) {
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&#39;"),
            c => out.push(c),
        }
    }
}

const STYLE: &str = "body{font-family:Georgia,serif;max-width:52em;margin:2em auto;line-height:1.9}\
span.unit{padding:0 .12em;border-radius:.2em}\
del.removed{color:#999}\
p.output{font-family:monospace;white-space:pre-wrap;border-top:1px solid #ccc;padding-top:1em}";

/// Renders `result` as an XHTML-compatible page. Section `original` has one
/// `span.unit` per unit, highlighted yellow with opacity equal to its
/// importance; section `compressed` repeats the units with removed ones
/// struck through, followed by the merged output.
pub fn heatmap_html(result: &CompressionResult) -> Result<String, io::Error> {
    if result.scores.is_empty() {
        return Err(io::Error::new(io::ErrorKind::InvalidInput, "heatmap needs at least one scored unit"));
    }
    let totals: Vec<f64> = result.scores.iter().map(|s| s.total).collect();
    let weights = importance(&totals);

    let mut html = String::new();
    html.push_str("<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\"/>\n");
    html.push_str("<title>Unit importance</title>\n<style>");
    html.push_str(STYLE);
    html.push_str("</style>\n</head>\n<body>\n");

    html.push_str("<section id=\"original\">\n<h2>Before compression</h2>\n<p>");
    for (score, w) in result.scores.iter().zip(&weights) {
        let text = result.unit_texts.get(score.unit_id).map_or("", String::as_str);
        let _ = write!(
            html,
            "<span class=\"unit\" data-id=\"{}\" data-loss=\"{:.6}\" data-importance=\"{:.4}\" \
             style=\"background-color:rgba(255,214,0,{:.4})\">",
            score.unit_id, score.total, w, w
        );
        escape(&mut html, text);
        html.push_str("</span> ");
    }
    html.push_str("</p>\n</section>\n");

    let _ = write!(
        html,
        "<section id=\"compressed\">\n<h2>After compression (kept {} of {} units)</h2>\n<p>",
        result.kept.len(),
        result.unit_count()
    );
    for (id, text) in result.unit_texts.iter().enumerate() {
        if result.kept.contains(&id) {
            html.push_str("<ins class=\"kept\">");
            escape(&mut html, text);
            html.push_str("</ins> ");
        } else {
            html.push_str("<del class=\"removed\">");
            escape(&mut html, text);
            html.push_str("</del> ");
        }
    }
    html.push_str("</p>\n<p class=\"output\">");
    escape(&mut html, &result.compressed_text);
    html.push_str("</p>\n</section>\n</body>\n</html>\n");
    Ok(html)
}

pub fn render_heatmap(result: &CompressionResult, path: &Path) -> io::Result<()> {
    std::fs::write(path, heatmap_html(result)?)
}
