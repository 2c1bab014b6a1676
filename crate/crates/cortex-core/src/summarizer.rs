//! Generic and query-biased extract assembly.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::decision::{decide, select, CompressionSpec, NormalizedTable};
use crate::error::CortexError;
use crate::lexicon::Lexicon;
use crate::matrix::TermMatrix;
use crate::metrics::MetricTable;
use crate::pipeline::{Counts, PreprocessedDocument, TermId};
use crate::query::Query;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SummaryMode {
    Generic,
    Personalized,
}

/// One extracted sentence.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryEntry {
    pub doc_id: String,
    pub sentence: usize,
    pub text: String,
    /// Decision score within the sentence's own document.
    pub local_score: f64,
    /// Corpus-wide score from the re-ranking pass, when run.
    pub global_score: Option<f64>,
    /// Normalized terms of the sentence; the re-ranking pass feeds on
    /// these.
    pub terms: Vec<String>,
    /// The document shared no term with the query, so only frequency
    /// voted.
    pub frequency_only: bool,
}

/// An extract plus how it was made. Generic summaries keep document
/// order; personalized summaries are sorted by score, global when
/// present, falling back to local.
#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub entries: Vec<SummaryEntry>,
    pub spec: CompressionSpec,
    pub mode: SummaryMode,
    /// Re-ranking found no query term in any selected sentence and
    /// fell back to local scores.
    pub rerank_fallback: bool,
}

fn sentence_terms_of(doc: &PreprocessedDocument, sentence: usize) -> Vec<String> {
    doc.sentences[sentence]
        .iter()
        .map(|&id| doc.term_str(id).to_string())
        .collect()
}

/// Decision scores of a whole document under the full metric set.
pub fn score_generic(doc: &PreprocessedDocument) -> Result<Vec<crate::decision::DecisionScore>, CortexError> {
    let lex = Lexicon::build(doc);
    let m = TermMatrix::build(doc, &lex);
    let table = MetricTable::generic(&m, doc);
    let norm = NormalizedTable::from_metrics(&table);
    decide(&norm)
}

/// Extract a document at the requested rate with all ten metrics and
/// the title as angle reference.
pub fn summarize_generic(
    doc: &PreprocessedDocument,
    spec: CompressionSpec,
) -> Result<Summary, CortexError> {
    let mut summary = Summary {
        entries: Vec::new(),
        spec,
        mode: SummaryMode::Generic,
        rerank_fallback: false,
    };
    if doc.is_empty() {
        return Ok(summary);
    }
    let scores = score_generic(doc)?;
    for idx in select(&scores, doc, spec) {
        summary.entries.push(SummaryEntry {
            doc_id: doc.source_id.clone(),
            sentence: idx,
            text: doc.raw_sentences[idx].clone(),
            local_score: scores[idx].a,
            global_score: None,
            terms: sentence_terms_of(doc, idx),
            frequency_only: false,
        });
    }
    Ok(summary)
}

/// Query-biased pass: each document is scored with {frequency, angle}
/// against the expanded query vector and condensed at the rate; the
/// per-document extracts are merged and sorted by local score.
pub fn summarize_personalized(
    docs: &[PreprocessedDocument],
    query: &Query,
    spec: CompressionSpec,
) -> Result<Summary, CortexError> {
    let mut entries: Vec<SummaryEntry> = Vec::new();
    for doc in docs {
        if doc.is_empty() {
            continue;
        }
        let lex = Lexicon::build(doc);
        let m = TermMatrix::build(doc, &lex);
        let qvec = query.vector(doc, &lex);
        let no_shared_term = qvec.iter().all(|&w| w == 0.0);
        let table = MetricTable::query_biased(&m, &qvec);
        let norm = NormalizedTable::from_metrics(&table);
        let scores = decide(&norm)?;
        for idx in select(&scores, doc, spec) {
            entries.push(SummaryEntry {
                doc_id: doc.source_id.clone(),
                sentence: idx,
                text: doc.raw_sentences[idx].clone(),
                local_score: scores[idx].a,
                global_score: None,
                terms: sentence_terms_of(doc, idx),
                frequency_only: no_shared_term,
            });
        }
    }
    sort_entries(&mut entries);
    Ok(Summary {
        entries,
        spec,
        mode: SummaryMode::Personalized,
        rerank_fallback: false,
    })
}

fn sort_entries(entries: &mut [SummaryEntry]) {
    entries.sort_by(|x, y| {
        let xs = x.global_score.unwrap_or(x.local_score);
        let ys = y.global_score.unwrap_or(y.local_score);
        ys.total_cmp(&xs)
            .then_with(|| x.doc_id.cmp(&y.doc_id))
            .then_with(|| x.sentence.cmp(&y.sentence))
    });
}

/// Re-score a personalized summary as one synthetic document: the
/// selected sentences keep only their query terms, the full metric
/// set runs over that document with the query as angle reference, and
/// the resulting scores order the summary globally. The sentence set
/// never changes.
pub fn rerank_global(summary: &Summary, query: &Query) -> Summary {
    let mut out = summary.clone();
    if out.entries.is_empty() {
        return out;
    }

    let query_terms = query.expanded_set();
    let filtered: Vec<Vec<&str>> = out
        .entries
        .iter()
        .map(|e| {
            e.terms
                .iter()
                .map(|t| t.as_str())
                .filter(|t| query_terms.contains(t))
                .collect()
        })
        .collect();

    if filtered.iter().all(|seq| seq.is_empty()) {
        for entry in &mut out.entries {
            entry.global_score = Some(entry.local_score);
        }
        out.rerank_fallback = true;
        sort_entries(&mut out.entries);
        return out;
    }

    let synthetic = synthetic_document(&filtered, &out.entries);
    let lex = Lexicon::build(&synthetic);
    let m = TermMatrix::build(&synthetic, &lex);
    let qvec = query.vector(&synthetic, &lex);
    let table = MetricTable::full_with_reference(&m, &qvec);
    let norm = NormalizedTable::from_metrics(&table);
    // The metric set is never empty here.
    let scores = decide(&norm).unwrap();

    for (entry, score) in out.entries.iter_mut().zip(&scores) {
        entry.global_score = Some(score.a);
    }
    sort_entries(&mut out.entries);
    out
}

/// A document whose sentences are the filtered term sequences. No
/// titles: the angle reference comes from outside.
fn synthetic_document(filtered: &[Vec<&str>], entries: &[SummaryEntry]) -> PreprocessedDocument {
    let mut table: BTreeMap<&str, TermId> = BTreeMap::new();
    for term in filtered.iter().flatten() {
        table.entry(term).or_insert(0);
    }
    let mut terms: Vec<String> = Vec::with_capacity(table.len());
    for (next, (term, id)) in table.iter_mut().enumerate() {
        *id = next as TermId;
        terms.push(term.to_string());
    }
    let sentences: Vec<Vec<TermId>> = filtered
        .iter()
        .map(|seq| seq.iter().map(|t| table[t]).collect())
        .collect();
    let raw_sentences: Vec<String> = entries.iter().map(|e| e.text.clone()).collect();
    let (raw_words, distinct_raw_words) = {
        let mut total = 0;
        for text in &raw_sentences {
            total += text.split_whitespace().count();
        }
        (total, 0)
    };
    let counts = Counts {
        raw_words,
        distinct_raw_words,
        sentences: sentences.len(),
        titles: 0,
        distinct_terms: terms.len(),
    };
    PreprocessedDocument {
        source_id: "rerank".to_string(),
        terms,
        sentences,
        titles: Vec::new(),
        sentence_title: alloc::vec![None; filtered.len()],
        raw_sentences,
        counts,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decision::CompressionUnit;
    use crate::pipeline::PipelineConfig;
    use crate::query::Thesaurus;
    use crate::testkit;
    use alloc::vec;

    fn spec(tau: u32) -> CompressionSpec {
        CompressionSpec::new(tau, CompressionUnit::Sentences).unwrap()
    }

    fn plain_query(word: &str) -> Query {
        Query::expand(word, &Thesaurus::new(), &PipelineConfig::generic()).unwrap()
    }

    #[test]
    fn worked_example_selects_the_argmax() {
        let doc = testkit::worked_example();
        let summary = summarize_generic(&doc, spec(33)).unwrap();
        assert_eq!(summary.entries.len(), 1);
        assert_eq!(summary.entries[0].sentence, 2);
        assert!((summary.entries[0].local_score - 0.7).abs() < 1e-9);
    }

    #[test]
    fn single_sentence_document_survives_any_rate() {
        let doc = testkit::doc(&[&["a", "a"]], &[]);
        for tau in [1, 25, 50, 100] {
            let summary = summarize_generic(&doc, spec(tau)).unwrap();
            assert_eq!(summary.entries.len(), 1);
        }
    }

    #[test]
    fn empty_document_gives_empty_summary() {
        let doc = testkit::doc(&[], &[]);
        let summary = summarize_generic(&doc, spec(50)).unwrap();
        assert!(summary.entries.is_empty());
    }

    #[test]
    fn generic_entries_keep_document_order() {
        let doc = testkit::doc(
            &[&["a", "b"], &["c", "c", "c"], &["a", "b", "c"]],
            &[],
        );
        let summary = summarize_generic(&doc, spec(100)).unwrap();
        let order: Vec<usize> = summary.entries.iter().map(|e| e.sentence).collect();
        assert_eq!(order, vec![0, 1, 2]);
    }

    #[test]
    fn query_match_is_advantaged_in_its_document() {
        // Sentence 1 is exactly the query subject.
        let doc = testkit::doc(
            &[&["noise", "noise"], &["signal", "signal"], &["noise", "signal"]],
            &[],
        );
        let q = plain_query("signal");
        let summary = summarize_personalized(&[doc], &q, spec(34)).unwrap();
        assert_eq!(summary.entries.len(), 1);
        assert_eq!(summary.entries[0].sentence, 1);
        assert!(summary.entries[0].local_score > 0.5);
        assert!(!summary.entries[0].frequency_only);
    }

    #[test]
    fn disjoint_document_is_flagged_frequency_only() {
        let doc = testkit::doc(&[&["x", "x"], &["x", "y", "y"]], &[]);
        let q = plain_query("zebra");
        let summary = summarize_personalized(&[doc], &q, spec(50)).unwrap();
        assert_eq!(summary.entries.len(), 1);
        assert!(summary.entries[0].frequency_only);
    }

    #[test]
    fn one_matching_sentence_per_document_at_half_rate() {
        // "vent" must clear the two-occurrence bar in each document,
        // or the angle metric never sees it.
        let a = {
            let mut d = testkit::doc(&[&["mer", "mer"], &["mer", "vent", "vent"]], &[]);
            d.source_id = "a".to_string();
            d
        };
        let b = {
            let mut d = testkit::doc(&[&["vent", "sol", "vent"], &["sol", "sol"]], &[]);
            d.source_id = "b".to_string();
            d
        };
        let q = plain_query("vent");
        let summary = summarize_personalized(&[a, b], &q, spec(50)).unwrap();
        assert_eq!(summary.entries.len(), 2);
        let picked: Vec<(&str, usize)> = summary
            .entries
            .iter()
            .map(|e| (e.doc_id.as_str(), e.sentence))
            .collect();
        assert!(picked.contains(&("a", 1)));
        assert!(picked.contains(&("b", 0)));
    }

    #[test]
    fn rerank_never_changes_the_sentence_set() {
        let doc = testkit::doc(
            &[&["a", "b"], &["a", "a", "b"], &["b", "c"], &["c", "c"]],
            &[],
        );
        let q = plain_query("a b");
        let summary = summarize_personalized(&[doc], &q, spec(50)).unwrap();
        let reranked = rerank_global(&summary, &q);

        let mut before: Vec<(String, usize)> = summary
            .entries
            .iter()
            .map(|e| (e.doc_id.clone(), e.sentence))
            .collect();
        let mut after: Vec<(String, usize)> = reranked
            .entries
            .iter()
            .map(|e| (e.doc_id.clone(), e.sentence))
            .collect();
        before.sort();
        after.sort();
        assert_eq!(before, after);
        assert!(reranked.entries.iter().all(|e| e.global_score.is_some()));
        assert!(!reranked.rerank_fallback);
    }

    #[test]
    fn rerank_falls_back_when_no_query_term_survives() {
        let doc = testkit::doc(&[&["x", "x"], &["y", "x"]], &[]);
        let q = plain_query("zebra");
        let summary = summarize_personalized(&[doc], &q, spec(50)).unwrap();
        let reranked = rerank_global(&summary, &q);
        assert!(reranked.rerank_fallback);
        for entry in &reranked.entries {
            assert_eq!(entry.global_score, Some(entry.local_score));
        }
    }

    #[test]
    fn identical_profiles_tie_break_by_position() {
        let doc = testkit::doc(
            &[&["a", "b"], &["a", "b"], &["a", "c", "c"], &["c", "b"]],
            &[],
        );
        let q = plain_query("a b");
        let summary = summarize_personalized(&[doc], &q, spec(50)).unwrap();
        let reranked = rerank_global(&summary, &q);
        for pair in reranked.entries.windows(2) {
            let g0 = pair[0].global_score.unwrap();
            let g1 = pair[1].global_score.unwrap();
            assert!(g0 >= g1);
            if g0 == g1 {
                assert!(
                    (pair[0].doc_id.as_str(), pair[0].sentence)
                        < (pair[1].doc_id.as_str(), pair[1].sentence)
                );
            }
        }
    }
}
