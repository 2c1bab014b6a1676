//! The relevant lexicon: terms that occur at least twice.
//!
//! Only repeated terms carry signal for sentence comparison; hapax
//! terms would add empty matrix columns. Title occurrences count
//! toward the threshold because titles share the id space with
//! sentences.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::error::CortexError;
use crate::pipeline::{PreprocessedDocument, TermId};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lexicon {
    /// Lexicon id -> document term id, ascending. Document term ids
    /// are lexicographic, so lexicon ids inherit that order.
    pub term_ids: Vec<TermId>,
    to_lex: BTreeMap<TermId, u32>,
}

impl Lexicon {
    pub fn build(doc: &PreprocessedDocument) -> Lexicon {
        let mut totals = alloc::vec![0u32; doc.terms.len()];
        for sentence in &doc.sentences {
            for &id in sentence {
                totals[id as usize] += 1;
            }
        }
        for title in &doc.titles {
            for &id in &title.term_ids {
                totals[id as usize] += 1;
            }
        }
        let term_ids: Vec<TermId> = (0..doc.terms.len() as TermId)
            .filter(|&id| totals[id as usize] >= 2)
            .collect();
        let to_lex = term_ids
            .iter()
            .enumerate()
            .map(|(lex, &doc_id)| (doc_id, lex as u32))
            .collect();
        Lexicon { term_ids, to_lex }
    }

    /// N_L.
    pub fn len(&self) -> usize {
        self.term_ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.term_ids.is_empty()
    }

    pub fn lex_id(&self, term: TermId) -> Option<u32> {
        self.to_lex.get(&term).copied()
    }

    pub fn term_str<'d>(&self, doc: &'d PreprocessedDocument, lex_id: u32) -> &'d str {
        doc.term_str(self.term_ids[lex_id as usize])
    }
}

/// N_L / N_W: how much of the raw text survives as matrix columns.
pub fn lexical_ratio(doc: &PreprocessedDocument, lex: &Lexicon) -> Result<f64, CortexError> {
    if doc.counts.raw_words == 0 {
        return Err(CortexError::NoRawWords);
    }
    Ok(lex.len() as f64 / doc.counts.raw_words as f64)
}
