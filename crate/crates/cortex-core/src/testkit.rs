//! Hand-built documents for unit tests, bypassing the text pipeline.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::pipeline::{Counts, PreprocessedDocument, TermId, Title};

/// Build a document straight from term strings. Term ids follow
/// lexicographic order, matching the real pipeline.
pub(crate) fn doc(sentences: &[&[&str]], titles: &[&[&str]]) -> PreprocessedDocument {
    let mut table: BTreeMap<&str, TermId> = BTreeMap::new();
    for term in sentences.iter().chain(titles.iter()).flat_map(|s| s.iter()) {
        table.entry(term).or_insert(0);
    }
    let mut terms: Vec<String> = Vec::new();
    for (next, (term, id)) in table.iter_mut().enumerate() {
        *id = next as TermId;
        terms.push(term.to_string());
    }

    let to_ids = |seq: &[&str]| -> Vec<TermId> { seq.iter().map(|t| table[t]).collect() };
    let sentence_ids: Vec<Vec<TermId>> = sentences.iter().map(|s| to_ids(s)).collect();
    let title_rows: Vec<Title> = titles
        .iter()
        .map(|t| Title {
            level: 0,
            raw: t.join(" "),
            term_ids: to_ids(t),
        })
        .collect();

    let raw_sentences: Vec<String> = sentences
        .iter()
        .map(|s| {
            let mut line = s.join(" ");
            line.push('.');
            line
        })
        .collect();
    let word_total: usize = sentences.iter().map(|s| s.len()).sum::<usize>()
        + titles.iter().map(|t| t.len()).sum::<usize>();

    let counts = Counts {
        raw_words: word_total,
        distinct_raw_words: terms.len(),
        sentences: sentences.len(),
        titles: titles.len(),
        distinct_terms: terms.len(),
    };
    let governing = if titles.is_empty() { None } else { Some(0) };
    PreprocessedDocument {
        source_id: "test".to_string(),
        terms,
        sentences: sentence_ids,
        titles: title_rows,
        sentence_title: alloc::vec![governing; sentences.len()],
        raw_sentences,
        counts,
    }
}

/// The worked 3-sentence example used across the metric tests:
/// gamma rows [2,1,0], [0,1,1], [1,0,2] over terms t1 < t2 < t3.
pub(crate) fn worked_example() -> PreprocessedDocument {
    doc(
        &[&["t1", "t1", "t2"], &["t2", "t3"], &["t1", "t3", "t3"]],
        &[],
    )
}
