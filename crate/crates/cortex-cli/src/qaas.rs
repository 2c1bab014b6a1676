//! Question answering over a corpus: retrieve candidate documents per
//! question, condense them around the query, and surface the top
//! sentences as candidate answers. With gold answers available the run
//! is scored (top-1 and any-candidate accuracy, confidence-weighted
//! score).

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use cortex_core::eval::{cws, AnswerRecord};
use cortex_core::{
    rerank_global, summarize_generic, summarize_personalized, CompressionSpec, CortexError,
    PipelineConfig, PreprocessedDocument, Query, SentenceIndex, SummaryEntry, Thesaurus,
};

use crate::parallel::parallel_map;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SummarizerKind {
    Personalized,
    Generic,
}

pub struct Question {
    pub id: String,
    pub text: String,
}

pub struct QaasParams {
    pub spec: CompressionSpec,
    pub summarizer: SummarizerKind,
    /// Retrieval cutoff; the whole corpus when absent.
    pub r_docs: Option<usize>,
    pub max_candidates: usize,
    /// Candidates must equal a gold answer instead of containing one.
    pub exact_answers: bool,
}

pub struct Candidate {
    pub doc_id: String,
    pub sentence: usize,
    pub score: f64,
    pub text: String,
    pub correct: Option<bool>,
}

pub struct QuestionOutcome {
    pub id: String,
    pub question: String,
    /// False when no query term survived normalization or no document
    /// shares one.
    pub answered: bool,
    pub confidence: f64,
    pub rerank_fallback: bool,
    pub candidates: Vec<Candidate>,
    pub correct_top1: Option<bool>,
    pub correct_any: Option<bool>,
}

pub struct QaasReport {
    pub outcomes: Vec<QuestionOutcome>,
    pub correct_top1: Option<usize>,
    pub correct_any: Option<usize>,
    pub cws: Option<f64>,
}

/// Question file: one question per line, optional TAB-separated gold
/// answers after it. Blank lines and `#` comments are skipped; ids are
/// `q1`, `q2`, ... in file order.
pub fn read_questions(path: &Path) -> Result<(Vec<Question>, BTreeMap<String, Vec<String>>)> {
    let content = fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    let mut questions = Vec::new();
    let mut gold: BTreeMap<String, Vec<String>> = BTreeMap::new();
    for line in content.lines() {
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split('\t');
        let text = fields.next().unwrap_or("").trim().to_string();
        if text.is_empty() {
            bail!("{}: question line with empty text", path.display());
        }
        let id = format!("q{}", questions.len() + 1);
        let answers: Vec<String> = fields
            .map(str::trim)
            .filter(|a| !a.is_empty())
            .map(str::to_string)
            .collect();
        if !answers.is_empty() {
            gold.insert(id.clone(), answers);
        }
        questions.push(Question { id, text });
    }
    if questions.is_empty() {
        bail!("{}: no questions", path.display());
    }
    Ok((questions, gold))
}

/// Gold answer file: `question-id TAB answer [TAB answer ...]` per
/// line. Entries extend any inline answers.
pub fn read_gold(path: &Path, gold: &mut BTreeMap<String, Vec<String>>) -> Result<()> {
    let content = fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    for (number, line) in content.lines().enumerate() {
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split('\t');
        let id = fields.next().unwrap_or("").trim().to_string();
        let answers: Vec<String> = fields
            .map(str::trim)
            .filter(|a| !a.is_empty())
            .map(str::to_string)
            .collect();
        if id.is_empty() || answers.is_empty() {
            bail!(
                "{} line {}: expected 'question-id TAB answer'",
                path.display(),
                number + 1
            );
        }
        gold.entry(id).or_default().extend(answers);
    }
    Ok(())
}

/// Run every question against the corpus. `gold` may be empty, in
/// which case nothing is scored; otherwise every question needs at
/// least one answer.
pub fn run(
    docs: &[PreprocessedDocument],
    questions: &[Question],
    gold: &BTreeMap<String, Vec<String>>,
    thesaurus: &Thesaurus,
    config: &PipelineConfig,
    params: &QaasParams,
    workers: usize,
) -> Result<QaasReport> {
    let scored = !gold.is_empty();
    if scored {
        for q in questions {
            if !gold.contains_key(&q.id) {
                bail!("no gold answer for question {} ({})", q.id, q.text);
            }
        }
    }
    let index = SentenceIndex::build(docs)?;
    let outcomes: Vec<QuestionOutcome> =
        parallel_map(questions, workers, |q| {
            answer_one(q, docs, &index, gold, thesaurus, config, params)
        })
        .into_iter()
        .collect::<Result<_>>()?;

    let mut report = QaasReport {
        outcomes,
        correct_top1: None,
        correct_any: None,
        cws: None,
    };
    if scored {
        report.correct_top1 = Some(
            report
                .outcomes
                .iter()
                .filter(|o| o.correct_top1 == Some(true))
                .count(),
        );
        report.correct_any = Some(
            report
                .outcomes
                .iter()
                .filter(|o| o.correct_any == Some(true))
                .count(),
        );
        let records: Vec<AnswerRecord> = report
            .outcomes
            .iter()
            .map(|o| AnswerRecord {
                question_id: o.id.clone(),
                confidence: o.confidence,
                correct: o.correct_top1 == Some(true),
            })
            .collect();
        report.cws = Some(cws(&records)?);
    }
    Ok(report)
}

fn answer_one(
    q: &Question,
    docs: &[PreprocessedDocument],
    index: &SentenceIndex,
    gold: &BTreeMap<String, Vec<String>>,
    thesaurus: &Thesaurus,
    config: &PipelineConfig,
    params: &QaasParams,
) -> Result<QuestionOutcome> {
    let answers = gold.get(&q.id).map(Vec::as_slice);
    let query = match Query::expand(&q.text, thesaurus, config) {
        Ok(query) => query,
        Err(CortexError::EmptyQuery) => return Ok(unanswered(q, answers)),
        Err(err) => return Err(err).context(format!("question {}", q.id)),
    };
    let selected = index.select_documents(&query, params.r_docs.unwrap_or(docs.len()));
    if selected.is_empty() {
        return Ok(unanswered(q, answers));
    }
    let chosen: Vec<PreprocessedDocument> =
        selected.iter().map(|&i| docs[i].clone()).collect();

    let (entries, rerank_fallback) = match params.summarizer {
        SummarizerKind::Personalized => {
            let summary = summarize_personalized(&chosen, &query, params.spec)
                .with_context(|| format!("question {}", q.id))?;
            let reranked = rerank_global(&summary, &query);
            (reranked.entries, reranked.rerank_fallback)
        }
        SummarizerKind::Generic => {
            let mut entries: Vec<SummaryEntry> = Vec::new();
            for doc in &chosen {
                let summary = summarize_generic(doc, params.spec)
                    .with_context(|| format!("question {}", q.id))?;
                entries.extend(summary.entries);
            }
            entries.sort_by(|x, y| {
                y.local_score
                    .total_cmp(&x.local_score)
                    .then_with(|| x.doc_id.cmp(&y.doc_id))
                    .then_with(|| x.sentence.cmp(&y.sentence))
            });
            (entries, false)
        }
    };

    let candidates: Vec<Candidate> = entries
        .into_iter()
        .take(params.max_candidates)
        .map(|entry| {
            let correct = answers
                .map(|answers| answer_matches(&entry.text, answers, params.exact_answers));
            Candidate {
                doc_id: entry.doc_id,
                sentence: entry.sentence,
                score: entry.global_score.unwrap_or(entry.local_score),
                text: entry.text,
                correct,
            }
        })
        .collect();

    if candidates.is_empty() {
        return Ok(unanswered(q, answers));
    }
    let confidence = candidates[0].score;
    let correct_top1 = candidates[0].correct;
    let correct_any = answers.map(|_| candidates.iter().any(|c| c.correct == Some(true)));
    Ok(QuestionOutcome {
        id: q.id.clone(),
        question: q.text.clone(),
        answered: true,
        confidence,
        rerank_fallback,
        candidates,
        correct_top1,
        correct_any,
    })
}

/// Outcome for a question the system declines: scored as wrong with
/// confidence below every real score.
fn unanswered(q: &Question, answers: Option<&[String]>) -> QuestionOutcome {
    QuestionOutcome {
        id: q.id.clone(),
        question: q.text.clone(),
        answered: false,
        confidence: -1.0,
        rerank_fallback: false,
        candidates: Vec::new(),
        correct_top1: answers.map(|_| false),
        correct_any: answers.map(|_| false),
    }
}

/// Whitespace-squashed, case-folded containment (or equality in exact
/// mode) of any gold answer in the candidate sentence.
fn answer_matches(text: &str, answers: &[String], exact: bool) -> bool {
    let haystack = squash(text);
    answers.iter().any(|answer| {
        let needle = squash(answer);
        if exact {
            haystack == needle
        } else {
            haystack.contains(&needle)
        }
    })
}

fn squash(text: &str) -> String {
    text.split_whitespace()
        .collect::<Vec<_>>()
        .join(" ")
        .to_lowercase()
}
