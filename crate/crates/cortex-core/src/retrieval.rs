//! Sentence-granular tf.idf retrieval over a corpus.
//!
//! The index covers the full term table of every document, not the
//! two-occurrence lexicon: a question about a rare word must still
//! find it. df counts sentences, not documents.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::CortexError;
use crate::pipeline::PreprocessedDocument;
use crate::query::Query;

struct IndexedSentence {
    doc: u32,
    sentence: u32,
    /// (vocab id, occurrences), ascending by id.
    tf: Vec<(u32, u32)>,
}

pub struct SentenceIndex {
    vocab: BTreeMap<String, u32>,
    /// Sentences containing each vocab entry at least once.
    df: Vec<u32>,
    n_sentences: u64,
    entries: Vec<IndexedSentence>,
    doc_ids: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankedSentence {
    pub doc: usize,
    pub doc_id: String,
    pub sentence: usize,
    pub score: f64,
}

impl SentenceIndex {
    pub fn build(docs: &[PreprocessedDocument]) -> Result<Self, CortexError> {
        let mut vocab: BTreeMap<String, u32> = BTreeMap::new();
        for doc in docs {
            for sentence in &doc.sentences {
                for &id in sentence {
                    vocab.entry(doc.term_str(id).into()).or_insert(0);
                }
            }
        }
        for (next, id) in vocab.values_mut().enumerate() {
            *id = next as u32;
        }

        let mut df = alloc::vec![0u32; vocab.len()];
        let mut entries = Vec::new();
        for (d, doc) in docs.iter().enumerate() {
            for (s, sentence) in doc.sentences.iter().enumerate() {
                let mut tf: BTreeMap<u32, u32> = BTreeMap::new();
                for &id in sentence {
                    *tf.entry(vocab[doc.term_str(id)]).or_insert(0) += 1;
                }
                for &id in tf.keys() {
                    df[id as usize] += 1;
                }
                entries.push(IndexedSentence {
                    doc: d as u32,
                    sentence: s as u32,
                    tf: tf.into_iter().collect(),
                });
            }
        }
        if entries.is_empty() {
            return Err(CortexError::EmptyCorpus);
        }
        Ok(SentenceIndex {
            vocab,
            df,
            n_sentences: entries.len() as u64,
            entries,
            doc_ids: docs.iter().map(|d| d.source_id.clone()).collect(),
        })
    }

    pub fn n_sentences(&self) -> usize {
        self.n_sentences as usize
    }

    fn idf(&self, vocab_id: u32) -> f64 {
        libm::log(self.n_sentences as f64 / self.df[vocab_id as usize] as f64)
    }

    /// Query weights over the vocabulary. Terms the corpus has never
    /// seen carry no weight.
    fn query_weights(&self, query: &Query) -> BTreeMap<u32, f64> {
        let mut tf: BTreeMap<u32, u32> = BTreeMap::new();
        for term in &query.terms {
            if let Some(&id) = self.vocab.get(term) {
                *tf.entry(id).or_insert(0) += 1;
            }
        }
        tf.into_iter()
            .map(|(id, count)| (id, count as f64 * self.idf(id)))
            .collect()
    }

    /// Cosine scores between the raw query and every sentence, best
    /// first. Sentences scoring zero are left out.
    pub fn rank_sentences(&self, query: &Query, top_k: Option<usize>) -> Vec<RankedSentence> {
        let qw = self.query_weights(query);
        let q_norm = libm::sqrt(qw.values().map(|w| w * w).sum());
        let mut ranked = Vec::new();
        if q_norm > 0.0 {
            for entry in &self.entries {
                let mut dot = 0.0;
                let mut s_norm_sq = 0.0;
                for &(id, count) in &entry.tf {
                    let w = count as f64 * self.idf(id);
                    s_norm_sq += w * w;
                    if let Some(&query_w) = qw.get(&id) {
                        dot += w * query_w;
                    }
                }
                if s_norm_sq == 0.0 || dot == 0.0 {
                    continue;
                }
                let score = (dot / (libm::sqrt(s_norm_sq) * q_norm)).clamp(0.0, 1.0);
                if score == 0.0 {
                    continue;
                }
                ranked.push(RankedSentence {
                    doc: entry.doc as usize,
                    doc_id: self.doc_ids[entry.doc as usize].clone(),
                    sentence: entry.sentence as usize,
                    score,
                });
            }
        }
        ranked.sort_by(|x, y| {
            y.score
                .total_cmp(&x.score)
                .then_with(|| x.doc_id.cmp(&y.doc_id))
                .then_with(|| x.sentence.cmp(&y.sentence))
        });
        if let Some(k) = top_k {
            ranked.truncate(k);
        }
        ranked
    }

    /// Indices of the documents worth summarizing for the query: those
    /// sharing at least one term, ordered by their best sentence score.
    pub fn select_documents(&self, query: &Query, r_d: usize) -> Vec<usize> {
        let query_ids: BTreeSet<u32> = query
            .terms
            .iter()
            .filter_map(|t| self.vocab.get(t).copied())
            .collect();
        let mut sharing: BTreeSet<usize> = BTreeSet::new();
        for entry in &self.entries {
            if entry.tf.iter().any(|(id, _)| query_ids.contains(id)) {
                sharing.insert(entry.doc as usize);
            }
        }
        let mut best: BTreeMap<usize, f64> = sharing.iter().map(|&d| (d, 0.0)).collect();
        for ranked in self.rank_sentences(query, None) {
            if let Some(score) = best.get_mut(&ranked.doc) {
                if ranked.score > *score {
                    *score = ranked.score;
                }
            }
        }
        let mut docs: Vec<(usize, f64)> = best.into_iter().collect();
        docs.sort_by(|x, y| {
            y.1.total_cmp(&x.1)
                .then_with(|| self.doc_ids[x.0].cmp(&self.doc_ids[y.0]))
        });
        docs.truncate(r_d);
        docs.into_iter().map(|(d, _)| d).collect()
    }
}
