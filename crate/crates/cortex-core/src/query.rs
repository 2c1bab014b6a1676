//! Question normalization and thesaurus expansion.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::CortexError;
use crate::lexicon::Lexicon;
use crate::pipeline::{normalize_term, Filters, PipelineConfig, PreprocessedDocument};

/// Synonym table. Heads and synonyms are normalized terms; each entry
/// may carry a weight for the expanded vector (1.0 when unstated).
#[derive(Debug, Clone, Default)]
pub struct Thesaurus {
    entries: BTreeMap<String, Vec<(String, f64)>>,
    /// Synonyms taken per query term.
    pub cap: usize,
}

impl Thesaurus {
    pub fn new() -> Thesaurus {
        Thesaurus {
            entries: BTreeMap::new(),
            cap: 2,
        }
    }

    pub fn insert(&mut self, head: impl Into<String>, synonyms: &[(&str, f64)]) {
        self.entries.insert(
            head.into(),
            synonyms.iter().map(|(s, w)| (s.to_string(), *w)).collect(),
        );
    }

    pub fn synonyms(&self, term: &str) -> &[(String, f64)] {
        self.entries.get(term).map_or(&[], |v| v.as_slice())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// A user question after pipeline normalization and expansion.
///
/// `terms` keeps the original normalized multiset (retrieval wants
/// term frequencies, unexpanded); `expanded` merges the originals at
/// weight 1 with up to `cap` synonyms each, duplicates collapsed to
/// their highest weight.
#[derive(Debug, Clone, PartialEq)]
pub struct Query {
    pub original: String,
    pub terms: Vec<String>,
    pub expanded: BTreeMap<String, f64>,
}

impl Query {
    /// Normalize a question with the document pipeline, then widen it
    /// with thesaurus synonyms.
    pub fn expand(
        question: &str,
        thesaurus: &Thesaurus,
        config: &PipelineConfig,
    ) -> Result<Query, CortexError> {
        config.validate()?;
        // Questions skip segmentation and title handling; the token
        // pipeline alone decides what counts as a term.
        let mut terms = Filters::new(config).sentence_terms(question);
        terms.sort();
        if terms.is_empty() {
            return Err(CortexError::EmptyQuery);
        }

        let mut expanded: BTreeMap<String, f64> = BTreeMap::new();
        let mut merge = |term: &str, weight: f64| {
            let slot = expanded.entry(term.to_string()).or_insert(weight);
            if weight > *slot {
                *slot = weight;
            }
        };
        for term in &terms {
            merge(term, 1.0);
            for (synonym, weight) in thesaurus.synonyms(term).iter().take(thesaurus.cap) {
                // Thesaurus files may hold surface forms; normalize so
                // the synonym lands in the same term space.
                if let Some(normalized) = normalize_term(synonym, config) {
                    merge(&normalized, *weight);
                }
            }
        }
        Ok(Query {
            original: question.to_string(),
            terms,
            expanded,
        })
    }

    /// The expanded terms as a set, for filtering.
    pub fn expanded_set(&self) -> BTreeSet<&str> {
        self.expanded.keys().map(|s| s.as_str()).collect()
    }

    /// Weight vector over one document's lexicon columns. Terms the
    /// document lacks contribute nothing; an all-zero vector means the
    /// document never mentions the query.
    pub fn vector(&self, doc: &PreprocessedDocument, lex: &Lexicon) -> Vec<f64> {
        let mut v = alloc::vec![0.0; lex.len()];
        for (term, &weight) in &self.expanded {
            // Document term ids are sorted lexicographically.
            if let Ok(doc_id) = doc.terms.binary_search(term) {
                if let Some(lex_id) = lex.lex_id(doc_id as u32) {
                    v[lex_id as usize] = weight;
                }
            }
        }
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::TermMatrix;
    use crate::testkit;
    use alloc::vec;

    fn cfg() -> PipelineConfig {
        let mut cfg = PipelineConfig::generic();
        cfg.stoplist.insert("the".to_string());
        cfg.lemma_table.insert("cars".to_string(), "car".to_string());
        cfg.lemma_table
            .insert("automobiles".to_string(), "automobile".to_string());
        cfg
    }

    fn auto_thesaurus() -> Thesaurus {
        let mut th = Thesaurus::new();
        th.insert("car", &[("auto", 1.0), ("automobile", 1.0)]);
        th
    }

    #[test]
    fn expansion_unions_synonyms() {
        let q = Query::expand("the cars", &auto_thesaurus(), &cfg()).unwrap();
        assert_eq!(q.terms, vec!["car"]);
        let expanded: Vec<&str> = q.expanded.keys().map(|s| s.as_str()).collect();
        assert_eq!(expanded, vec!["auto", "automobile", "car"]);
    }

    #[test]
    fn unknown_term_stays_singleton() {
        let q = Query::expand("turbine", &Thesaurus::new(), &cfg()).unwrap();
        assert_eq!(q.terms, vec!["turbine"]);
        assert_eq!(q.expanded.len(), 1);
    }

    #[test]
    fn normalization_merges_before_expansion() {
        let q = Query::expand("cars automobiles", &auto_thesaurus(), &cfg()).unwrap();
        assert_eq!(q.terms, vec!["automobile", "car"]);
        let expanded: Vec<&str> = q.expanded.keys().map(|s| s.as_str()).collect();
        assert_eq!(expanded, vec!["auto", "automobile", "car"]);
    }

    #[test]
    fn stopword_only_question_is_an_error() {
        assert_eq!(
            Query::expand("the the", &Thesaurus::new(), &cfg()),
            Err(CortexError::EmptyQuery)
        );
    }

    #[test]
    fn synonym_cap_limits_expansion() {
        let mut th = Thesaurus::new();
        th.insert("car", &[("auto", 1.0), ("automobile", 1.0), ("vehicle", 1.0)]);
        th.cap = 1;
        let q = Query::expand("cars", &th, &cfg()).unwrap();
        let expanded: Vec<&str> = q.expanded.keys().map(|s| s.as_str()).collect();
        assert_eq!(expanded, vec!["auto", "car"]);
    }

    #[test]
    fn vector_lands_on_lexicon_columns() {
        let doc = testkit::doc(&[&["car", "road"], &["car", "road"]], &[]);
        let lex = crate::lexicon::Lexicon::build(&doc);
        assert_eq!(lex.len(), 2);

        let q = Query::expand("cars", &Thesaurus::new(), &cfg()).unwrap();
        let v = q.vector(&doc, &lex);
        assert_eq!(v, vec![1.0, 0.0]);

        let m = TermMatrix::build(&doc, &lex);
        let angles = crate::metrics::title_angle(&m, &v);
        assert!(angles[0] > 0.0);
    }

    #[test]
    fn disjoint_query_vector_is_zero() {
        let doc = testkit::doc(&[&["road", "dust"], &["road", "dust"]], &[]);
        let lex = crate::lexicon::Lexicon::build(&doc);
        let q = Query::expand("cars", &Thesaurus::new(), &cfg()).unwrap();
        assert!(q.vector(&doc, &lex).iter().all(|&w| w == 0.0));
    }
}
