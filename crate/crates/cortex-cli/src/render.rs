//! Output schemas and renderers. Every command builds one plain data
//! struct here, then renders it as pretty JSON, CSV, or a text report.
//! JSON uses the default float display so equal scores always print
//! the same bytes.

use anyhow::{bail, Result};
use cortex_core::decision::NormalizedTable;
use cortex_core::eval::{MetricStats, SensitivityReport, ShuffleReport};
use cortex_core::metrics::MetricTable;
use cortex_core::{
    score_generic, Lexicon, Metric, PreprocessedDocument, Summary, TermMatrix,
};
use serde::{Deserialize, Serialize};

use crate::qaas::{QaasReport, SummarizerKind};

// ---- summaries -------------------------------------------------------

#[derive(Debug, Serialize, Deserialize)]
pub struct SummaryEntryFile {
    pub doc_id: String,
    pub sentence: usize,
    pub score: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub global_score: Option<f64>,
    #[serde(default, skip_serializing_if = "is_false")]
    pub frequency_only: bool,
    pub text: String,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SummaryFile {
    pub doc_id: String,
    pub mode: String,
    pub tau: u32,
    pub unit: String,
    pub sentences_total: usize,
    #[serde(default, skip_serializing_if = "is_false")]
    pub rerank_fallback: bool,
    pub entries: Vec<SummaryEntryFile>,
}

/// Extract JSON as written (an array) or a bare object, so saved
/// single extracts can be fed back to `eval` either way.
#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum SummaryFileSet {
    One(SummaryFile),
    Many(Vec<SummaryFile>),
}

impl SummaryFileSet {
    pub fn into_vec(self) -> Vec<SummaryFile> {
        match self {
            SummaryFileSet::One(file) => vec![file],
            SummaryFileSet::Many(files) => files,
        }
    }
}

fn is_false(flag: &bool) -> bool {
    !*flag
}

/// Per-document view of a generic run: one `SummaryFile` per input
/// document, entries in document order.
pub fn summary_file(doc: &PreprocessedDocument, summary: &Summary, mode: &str) -> SummaryFile {
    SummaryFile {
        doc_id: doc.source_id.clone(),
        mode: mode.to_string(),
        tau: summary.spec.tau,
        unit: unit_name(summary.spec.unit),
        sentences_total: doc.sentences.len(),
        rerank_fallback: summary.rerank_fallback,
        entries: summary
            .entries
            .iter()
            .map(|entry| SummaryEntryFile {
                doc_id: entry.doc_id.clone(),
                sentence: entry.sentence,
                score: entry.local_score,
                global_score: entry.global_score,
                frequency_only: entry.frequency_only,
                text: entry.text.clone(),
            })
            .collect(),
    }
}

pub fn unit_name(unit: cortex_core::CompressionUnit) -> String {
    match unit {
        cortex_core::CompressionUnit::Sentences => "sentences".to_string(),
        cortex_core::CompressionUnit::Words => "words".to_string(),
    }
}

/// The extract as prose, one sentence per line.
pub fn summary_text(file: &SummaryFile) -> String {
    let mut out = String::new();
    for entry in &file.entries {
        out.push_str(&entry.text);
        out.push('\n');
    }
    out
}

pub fn summaries_csv(files: &[SummaryFile]) -> String {
    let mut out = csv_row(&[
        "doc_id",
        "sentence",
        "score",
        "global_score",
        "frequency_only",
        "text",
    ]);
    for file in files {
        for entry in &file.entries {
            out.push_str(&csv_row(&[
                &entry.doc_id,
                &entry.sentence.to_string(),
                &entry.score.to_string(),
                &entry.global_score.map(|g| g.to_string()).unwrap_or_default(),
                &entry.frequency_only.to_string(),
                &entry.text,
            ]));
        }
    }
    out
}

// ---- question answering ----------------------------------------------

#[derive(Debug, Serialize)]
pub struct QaasCandidateFile {
    pub doc_id: String,
    pub sentence: usize,
    pub score: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub correct: Option<bool>,
    pub text: String,
}

#[derive(Debug, Serialize)]
pub struct QaasQuestionFile {
    pub id: String,
    pub question: String,
    pub answered: bool,
    pub confidence: f64,
    #[serde(skip_serializing_if = "is_false")]
    pub rerank_fallback: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub correct_top1: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub correct_any: Option<bool>,
    pub candidates: Vec<QaasCandidateFile>,
}

#[derive(Debug, Serialize)]
pub struct QaasFile {
    pub summarizer: String,
    pub tau: u32,
    pub unit: String,
    pub questions: Vec<QaasQuestionFile>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub correct_top1: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub correct_any: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cws: Option<f64>,
}

pub fn qaas_file(
    report: &QaasReport,
    summarizer: SummarizerKind,
    spec: cortex_core::CompressionSpec,
) -> QaasFile {
    QaasFile {
        summarizer: match summarizer {
            SummarizerKind::Personalized => "personalized".to_string(),
            SummarizerKind::Generic => "generic".to_string(),
        },
        tau: spec.tau,
        unit: unit_name(spec.unit),
        questions: report
            .outcomes
            .iter()
            .map(|o| QaasQuestionFile {
                id: o.id.clone(),
                question: o.question.clone(),
                answered: o.answered,
                confidence: o.confidence,
                rerank_fallback: o.rerank_fallback,
                correct_top1: o.correct_top1,
                correct_any: o.correct_any,
                candidates: o
                    .candidates
                    .iter()
                    .map(|c| QaasCandidateFile {
                        doc_id: c.doc_id.clone(),
                        sentence: c.sentence,
                        score: c.score,
                        correct: c.correct,
                        text: c.text.clone(),
                    })
                    .collect(),
            })
            .collect(),
        correct_top1: report.correct_top1,
        correct_any: report.correct_any,
        cws: report.cws,
    }
}

pub fn qaas_text(file: &QaasFile) -> String {
    let mut out = String::new();
    for q in &file.questions {
        out.push_str(&format!("{}  {}\n", q.id, q.question));
        if !q.answered {
            out.push_str("  no answer: no query term found in the corpus\n\n");
            continue;
        }
        for (rank, c) in q.candidates.iter().enumerate() {
            let mark = match c.correct {
                Some(true) => " [correct]",
                Some(false) => "",
                None => "",
            };
            out.push_str(&format!(
                "  {}. ({:.4}) {}#{}{}  {}\n",
                rank + 1,
                c.score,
                c.doc_id,
                c.sentence,
                mark,
                c.text
            ));
        }
        out.push('\n');
    }
    let total = file.questions.len();
    if let Some(top1) = file.correct_top1 {
        out.push_str(&format!("correct at rank 1: {top1}/{total}\n"));
    }
    if let Some(any) = file.correct_any {
        out.push_str(&format!("correct in candidates: {any}/{total}\n"));
    }
    if let Some(cws) = file.cws {
        out.push_str(&format!("confidence-weighted score: {cws:.4}\n"));
    }
    out
}

pub fn qaas_csv(file: &QaasFile) -> String {
    let mut out = csv_row(&[
        "question_id",
        "question",
        "answered",
        "confidence",
        "rank",
        "doc_id",
        "sentence",
        "score",
        "correct",
        "text",
    ]);
    for q in &file.questions {
        if q.candidates.is_empty() {
            out.push_str(&csv_row(&[
                &q.id,
                &q.question,
                &q.answered.to_string(),
                &q.confidence.to_string(),
                "",
                "",
                "",
                "",
                "",
                "",
            ]));
            continue;
        }
        for (rank, c) in q.candidates.iter().enumerate() {
            out.push_str(&csv_row(&[
                &q.id,
                &q.question,
                &q.answered.to_string(),
                &q.confidence.to_string(),
                &(rank + 1).to_string(),
                &c.doc_id,
                &c.sentence.to_string(),
                &c.score.to_string(),
                &c.correct.map(|b| b.to_string()).unwrap_or_default(),
                &c.text,
            ]));
        }
    }
    out
}

// ---- metric analysis -------------------------------------------------

#[derive(Debug, Serialize)]
pub struct MetricStatsFile {
    pub metric: String,
    pub count: usize,
    pub mean: f64,
    pub std_dev: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa_plus: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa_minus: Option<f64>,
    pub advantaged_fraction: f64,
    pub disadvantaged_fraction: f64,
    pub histogram: Vec<u32>,
}

#[derive(Debug, Serialize)]
pub struct AnalyzeFile {
    pub documents: usize,
    pub sentences: usize,
    pub metrics: Vec<MetricStatsFile>,
    pub decision: MetricStatsFile,
}

fn stats_file(name: &str, stats: &MetricStats) -> MetricStatsFile {
    MetricStatsFile {
        metric: name.to_string(),
        count: stats.count,
        mean: stats.mean,
        std_dev: stats.std_dev,
        kappa_plus: stats.kappa_plus,
        kappa_minus: stats.kappa_minus,
        advantaged_fraction: stats.advantaged_fraction,
        disadvantaged_fraction: stats.disadvantaged_fraction,
        histogram: stats.histogram.to_vec(),
    }
}

pub fn analyze_file(report: &SensitivityReport) -> AnalyzeFile {
    AnalyzeFile {
        documents: report.documents,
        sentences: report.sentences,
        metrics: report
            .per_metric
            .iter()
            .map(|(metric, stats)| stats_file(metric.label(), stats))
            .collect(),
        decision: stats_file("A", &report.decision),
    }
}

pub fn analyze_text(file: &AnalyzeFile) -> String {
    let mut out = format!(
        "{} documents, {} sentences\n\n",
        file.documents, file.sentences
    );
    out.push_str(&format!(
        "{:<8} {:>6} {:>8} {:>8} {:>8} {:>8} {:>7} {:>7}\n",
        "metric", "count", "mean", "std", "kappa+", "kappa-", "adv", "disadv"
    ));
    for stats in file.metrics.iter().chain(std::iter::once(&file.decision)) {
        out.push_str(&format!(
            "{:<8} {:>6} {:>8.4} {:>8.4} {:>8} {:>8} {:>7.3} {:>7.3}\n",
            stats.metric,
            stats.count,
            stats.mean,
            stats.std_dev,
            opt_fixed(stats.kappa_plus),
            opt_fixed(stats.kappa_minus),
            stats.advantaged_fraction,
            stats.disadvantaged_fraction,
        ));
    }
    out
}

fn opt_fixed(value: Option<f64>) -> String {
    match value {
        Some(v) => format!("{v:.4}"),
        None => "-".to_string(),
    }
}

pub fn sensitivity_csv(file: &AnalyzeFile) -> String {
    let mut out = csv_row(&[
        "metric",
        "count",
        "mean",
        "std_dev",
        "kappa_plus",
        "kappa_minus",
        "advantaged_fraction",
        "disadvantaged_fraction",
    ]);
    for stats in file.metrics.iter().chain(std::iter::once(&file.decision)) {
        out.push_str(&csv_row(&[
            &stats.metric,
            &stats.count.to_string(),
            &stats.mean.to_string(),
            &stats.std_dev.to_string(),
            &stats.kappa_plus.map(|v| v.to_string()).unwrap_or_default(),
            &stats.kappa_minus.map(|v| v.to_string()).unwrap_or_default(),
            &stats.advantaged_fraction.to_string(),
            &stats.disadvantaged_fraction.to_string(),
        ]));
    }
    out
}

/// Long-format histogram table: ten equal bins over [0, 1] per metric.
pub fn histograms_csv(file: &AnalyzeFile) -> String {
    let mut out = csv_row(&["metric", "bin", "lower", "upper", "count"]);
    for stats in file.metrics.iter().chain(std::iter::once(&file.decision)) {
        let bins = stats.histogram.len();
        for (bin, count) in stats.histogram.iter().enumerate() {
            out.push_str(&csv_row(&[
                &stats.metric,
                &bin.to_string(),
                &(bin as f64 / bins as f64).to_string(),
                &((bin + 1) as f64 / bins as f64).to_string(),
                &count.to_string(),
            ]));
        }
    }
    out
}

/// Per-sentence dump: raw and normalized value of every metric plus
/// the decision score.
pub fn metrics_csv(docs: &[PreprocessedDocument]) -> Result<String> {
    let mut header: Vec<String> = vec!["doc_id".to_string(), "sentence".to_string()];
    for metric in Metric::ALL {
        header.push(format!("{}_raw", metric.label()));
        header.push(format!("{}_norm", metric.label()));
    }
    header.push("A".to_string());
    header.push("advantaged".to_string());
    let fields: Vec<&str> = header.iter().map(String::as_str).collect();
    let mut out = csv_row(&fields);

    for doc in docs {
        if doc.is_empty() {
            continue;
        }
        let lex = Lexicon::build(doc);
        let m = TermMatrix::build(doc, &lex);
        let table = MetricTable::generic(&m, doc);
        let norm = NormalizedTable::from_metrics(&table);
        let scores = score_generic(doc)?;
        for mu in 0..doc.sentences.len() {
            let mut row: Vec<String> =
                vec![doc.source_id.clone(), mu.to_string()];
            for k in 0..table.metrics.len() {
                row.push(table.values[k][mu].to_string());
                row.push(norm.values[k][mu].to_string());
            }
            row.push(scores[mu].a.to_string());
            row.push(scores[mu].advantaged.to_string());
            let fields: Vec<&str> = row.iter().map(String::as_str).collect();
            out.push_str(&csv_row(&fields));
        }
    }
    Ok(out)
}

// ---- extract evaluation ----------------------------------------------

#[derive(Debug, Serialize)]
pub struct EvalFile {
    pub doc_id: String,
    pub extract_size: usize,
    pub reference_size: usize,
    pub precision: f64,
    pub recall: f64,
    #[serde(skip_serializing_if = "is_false")]
    pub empty_extract: bool,
    pub quality_raw: f64,
    pub quality_normalized: f64,
}

pub fn eval_text(file: &EvalFile) -> String {
    format!(
        "document: {}\nextract: {} sentences, reference: {} sentences\n\
         precision: {:.4}\nrecall: {:.4}\nquality (raw): {:.4}\nquality (normalized): {:.4}\n",
        file.doc_id,
        file.extract_size,
        file.reference_size,
        file.precision,
        file.recall,
        file.quality_raw,
        file.quality_normalized,
    )
}

pub fn eval_csv(file: &EvalFile) -> String {
    let mut out = csv_row(&[
        "doc_id",
        "extract_size",
        "reference_size",
        "precision",
        "recall",
        "empty_extract",
        "quality_raw",
        "quality_normalized",
    ]);
    out.push_str(&csv_row(&[
        &file.doc_id,
        &file.extract_size.to_string(),
        &file.reference_size.to_string(),
        &file.precision.to_string(),
        &file.recall.to_string(),
        &file.empty_extract.to_string(),
        &file.quality_raw.to_string(),
        &file.quality_normalized.to_string(),
    ]));
    out
}

// ---- shuffle check ----------------------------------------------------

#[derive(Debug, Serialize)]
pub struct ShuffleDocFile {
    pub doc_id: String,
    pub sentences: usize,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mismatch: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct ShuffleFile {
    pub seed: u64,
    pub documents: Vec<ShuffleDocFile>,
    pub passed: bool,
}

pub fn shuffle_file(
    seed: u64,
    reports: &[(String, usize, ShuffleReport)],
) -> ShuffleFile {
    let documents: Vec<ShuffleDocFile> = reports
        .iter()
        .map(|(doc_id, sentences, report)| ShuffleDocFile {
            doc_id: doc_id.clone(),
            sentences: *sentences,
            passed: report.passed,
            mismatch: report.mismatch.clone(),
        })
        .collect();
    let passed = documents.iter().all(|d| d.passed);
    ShuffleFile {
        seed,
        documents,
        passed,
    }
}

pub fn shuffle_text(file: &ShuffleFile) -> String {
    let mut out = String::new();
    for doc in &file.documents {
        let state = if doc.passed { "ok" } else { "MISMATCH" };
        out.push_str(&format!(
            "{:<10} {} ({} sentences)",
            state, doc.doc_id, doc.sentences
        ));
        if let Some(mismatch) = &doc.mismatch {
            out.push_str(&format!("  {mismatch}"));
        }
        out.push('\n');
    }
    out.push_str(&format!(
        "shuffle check (seed {}): {}\n",
        file.seed,
        if file.passed { "passed" } else { "FAILED" }
    ));
    out
}

pub fn shuffle_csv(file: &ShuffleFile) -> String {
    let mut out = csv_row(&["doc_id", "sentences", "passed", "mismatch"]);
    for doc in &file.documents {
        out.push_str(&csv_row(&[
            &doc.doc_id,
            &doc.sentences.to_string(),
            &doc.passed.to_string(),
            doc.mismatch.as_deref().unwrap_or(""),
        ]));
    }
    out
}

// ---- shared -----------------------------------------------------------

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut out = serde_json::to_string_pretty(value)?;
    out.push('\n');
    Ok(out)
}

pub fn from_json_summaries(text: &str) -> Result<Vec<SummaryFile>> {
    let set: SummaryFileSet = match serde_json::from_str(text) {
        Ok(set) => set,
        Err(err) => bail!("not an extract file: {err}"),
    };
    Ok(set.into_vec())
}

/// One CSV record. Fields holding a comma, quote, CR or LF are quoted
/// with internal quotes doubled.
pub fn csv_row(fields: &[&str]) -> String {
    let mut out = String::new();
    for (k, field) in fields.iter().enumerate() {
        if k > 0 {
            out.push(',');
        }
        if field.contains(['"', ',', '\n', '\r']) {
            out.push('"');
            out.push_str(&field.replace('"', "\"\""));
            out.push('"');
        } else {
            out.push_str(field);
        }
    }
    out.push('\n');
    out
}
