//! Sparse term–sentence matrices over the relevant lexicon.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::lexicon::Lexicon;
use crate::pipeline::PreprocessedDocument;

/// Frequency matrix (sentence rows x lexicon columns), its 0/1
/// presence shadow, and one frequency row per title. Rows hold sorted
/// (lexicon id, count) pairs; absent pairs are zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TermMatrix {
    pub n_sentences: usize,
    /// N_L: number of columns.
    pub n_terms: usize,
    /// Frequency rows, one per sentence.
    pub rows: Vec<Vec<(u32, u32)>>,
    /// Presence rows: sorted lexicon ids with nonzero count.
    pub presence: Vec<Vec<u32>>,
    /// Frequency rows of the titles, same column space.
    pub title_rows: Vec<Vec<(u32, u32)>>,
    /// T: total occurrences over sentence rows (titles not counted).
    pub total: u64,
}

impl TermMatrix {
    pub fn build(doc: &PreprocessedDocument, lex: &Lexicon) -> TermMatrix {
        let sparse_row = |term_ids: &[crate::pipeline::TermId]| -> Vec<(u32, u32)> {
            let mut counts: BTreeMap<u32, u32> = BTreeMap::new();
            for &id in term_ids {
                if let Some(lex_id) = lex.lex_id(id) {
                    *counts.entry(lex_id).or_insert(0) += 1;
                }
            }
            counts.into_iter().collect()
        };

        let rows: Vec<Vec<(u32, u32)>> = doc.sentences.iter().map(|s| sparse_row(s)).collect();
        let title_rows: Vec<Vec<(u32, u32)>> =
            doc.titles.iter().map(|t| sparse_row(&t.term_ids)).collect();
        let presence: Vec<Vec<u32>> = rows
            .iter()
            .map(|row| row.iter().map(|&(i, _)| i).collect())
            .collect();
        let total: u64 = rows
            .iter()
            .flat_map(|row| row.iter().map(|&(_, c)| c as u64))
            .sum();

        TermMatrix {
            n_sentences: rows.len(),
            n_terms: lex.len(),
            rows,
            presence,
            title_rows,
            total,
        }
    }

    /// gamma[sentence][term], zero when absent.
    pub fn gamma(&self, sentence: usize, term: u32) -> u32 {
        match self.rows[sentence].binary_search_by_key(&term, |&(i, _)| i) {
            Ok(k) => self.rows[sentence][k].1,
            Err(_) => 0,
        }
    }

    /// xi[sentence][term]: presence.
    pub fn xi(&self, sentence: usize, term: u32) -> bool {
        self.presence[sentence].binary_search(&term).is_ok()
    }

    /// Column totals over sentence rows; p derives from these.
    pub fn column_totals(&self) -> Vec<u64> {
        let mut totals = alloc::vec![0u64; self.n_terms];
        for row in &self.rows {
            for &(i, c) in row {
                totals[i as usize] += c as u64;
            }
        }
        totals
    }

    /// (sentence, term, count) triplets of the nonzero entries, for
    /// debug dumps.
    pub fn triplets(&self) -> Vec<(usize, u32, u32)> {
        let mut out = Vec::new();
        for (s, row) in self.rows.iter().enumerate() {
            for &(i, c) in row {
                out.push((s, i, c));
            }
        }
        out
    }
}
