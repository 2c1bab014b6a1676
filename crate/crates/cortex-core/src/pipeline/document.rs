//! Document representations before and after the text pipeline.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

/// Index into a document's term table.
pub type TermId = u32;

/// Unprocessed input text. `source_id` tags extract entries and
/// retrieval results; it is never interpreted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawDocument {
    pub source_id: String,
    pub body: String,
}

impl RawDocument {
    pub fn new(source_id: impl Into<String>, body: impl Into<String>) -> Self {
        RawDocument {
            source_id: source_id.into(),
            body: body.into(),
        }
    }
}

/// Pre-segmented input: an optional document title plus an ordered
/// block sequence. Sentences arrive already split; subtitles open a
/// section that governs the sentences after them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructuredText {
    pub source_id: String,
    pub title: Option<String>,
    pub blocks: Vec<Block>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Block {
    Subtitle { level: u32, text: String },
    Sentence(String),
}

/// A detected or declared title. Level 0 is the main title,
/// higher levels are section subtitles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Title {
    pub level: u32,
    pub raw: String,
    pub term_ids: Vec<TermId>,
}

/// Size measurements taken during preprocessing.
///
/// `raw_words` counts every whitespace-delimited token of the input,
/// titles included; `distinct_raw_words` counts them without
/// repetition. `distinct_terms` is the size of the term table after
/// filtering and normalization, sentences and titles together.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Counts {
    pub raw_words: usize,
    pub distinct_raw_words: usize,
    pub sentences: usize,
    pub titles: usize,
    pub distinct_terms: usize,
}

/// Output of the text pipeline: sentences and titles as term-id
/// occurrence lists over a per-document term table, plus the verbatim
/// sentence texts for extract output.
///
/// Term ids are assigned in lexicographic term order, so two documents
/// with the same sentence multiset get identical tables regardless of
/// sentence order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreprocessedDocument {
    pub source_id: String,
    /// id -> term string; sorted, deduplicated.
    pub terms: Vec<String>,
    /// Per sentence, term ids with multiplicity, in text order.
    pub sentences: Vec<Vec<TermId>>,
    pub titles: Vec<Title>,
    /// Governing title per sentence: innermost enclosing subtitle if
    /// any, else the main title, else None.
    pub sentence_title: Vec<Option<usize>>,
    pub raw_sentences: Vec<String>,
    pub counts: Counts,
}

impl PreprocessedDocument {
    pub fn term_str(&self, id: TermId) -> &str {
        &self.terms[id as usize]
    }

    /// Raw word count of one sentence, the unit of word-based
    /// compression budgets.
    pub fn sentence_word_count(&self, sentence: usize) -> usize {
        self.raw_sentences[sentence].split_whitespace().count()
    }

    /// Reorder sentences by `perm` (new position -> old index). The
    /// term table is untouched: the term set is order-independent.
    pub fn permuted(&self, perm: &[usize]) -> PreprocessedDocument {
        debug_assert_eq!(perm.len(), self.sentences.len());
        let mut out = self.clone();
        out.sentences = perm.iter().map(|&old| self.sentences[old].clone()).collect();
        out.raw_sentences = perm
            .iter()
            .map(|&old| self.raw_sentences[old].clone())
            .collect();
        out.sentence_title = perm.iter().map(|&old| self.sentence_title[old]).collect();
        out
    }

    /// Render the normalized term sequences back to text: title lines
    /// first, then one sentence per line, each closed with a period.
    /// Feeding the result through the pipeline again reproduces the
    /// same term sequences.
    pub fn render_terms(&self) -> String {
        let mut out = String::new();
        for title in &self.titles {
            for (k, id) in title.term_ids.iter().enumerate() {
                if k > 0 {
                    out.push(' ');
                }
                out.push_str(self.term_str(*id));
            }
            out.push_str(".\n");
        }
        for sentence in &self.sentences {
            for (k, id) in sentence.iter().enumerate() {
                if k > 0 {
                    out.push(' ');
                }
                out.push_str(self.term_str(*id));
            }
            out.push_str(".\n");
        }
        out
    }

    /// Total occurrences of each term across sentences (titles not
    /// counted), indexed by term id.
    pub fn sentence_term_totals(&self) -> Vec<u32> {
        let mut totals = alloc::vec![0u32; self.terms.len()];
        for sentence in &self.sentences {
            for &id in sentence {
                totals[id as usize] += 1;
            }
        }
        totals
    }

    pub fn is_empty(&self) -> bool {
        self.sentences.is_empty()
    }
}

pub(crate) fn count_raw_words(texts: &[&str]) -> (usize, usize) {
    let mut total = 0usize;
    let mut distinct: BTreeSet<&str> = BTreeSet::new();
    for text in texts {
        for word in text.split_whitespace() {
            total += 1;
            distinct.insert(word);
        }
    }
    (total, distinct.len())
}
