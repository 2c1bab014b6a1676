//! Pipeline configuration: filtering flags, lexical resources, delimiters.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::CortexError;

/// One suffix-strip rule. Applied when the token ends with `suffix`
/// and the remaining stem keeps at least `min_stem` characters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StemRule {
    pub suffix: String,
    pub replacement: String,
    pub min_stem: usize,
}

impl StemRule {
    pub fn new(suffix: &str, replacement: &str, min_stem: usize) -> Self {
        StemRule {
            suffix: suffix.to_string(),
            replacement: replacement.to_string(),
            min_stem,
        }
    }
}

/// Configuration for the text pipeline.
///
/// The stoplist holds surface forms (single words or multiword
/// expressions, matched lowercase). The lemma table maps surface forms
/// to lemmas and is consulted before suffix stripping. Compounds are
/// sequences of lemmas that collapse into one underscore-joined term.
#[derive(Debug, Clone)]
pub struct PipelineConfig {
    pub stoplist: BTreeSet<String>,
    pub delete_function_words: bool,
    pub delete_numbers: bool,
    /// Spelled-out numerals, removed only when `delete_numbers` is on.
    pub number_words: BTreeSet<String>,
    pub lemma_table: BTreeMap<String, String>,
    pub stemmer_rules: Vec<StemRule>,
    /// Each entry is a space-separated lemma sequence, e.g. "pomme de terre".
    pub compound_list: Vec<String>,
    pub sentence_delimiters: BTreeSet<char>,
    /// Drop parenthesized spans from term extraction (kept in raw text).
    pub strip_parentheses: bool,
}

impl PipelineConfig {
    fn base() -> Self {
        let mut delimiters = BTreeSet::new();
        for c in ['.', '\n', ':', '?', '!'] {
            delimiters.insert(c);
        }
        PipelineConfig {
            stoplist: BTreeSet::new(),
            delete_function_words: true,
            delete_numbers: true,
            number_words: BTreeSet::new(),
            lemma_table: BTreeMap::new(),
            stemmer_rules: Vec::new(),
            compound_list: Vec::new(),
            sentence_delimiters: delimiters,
            strip_parentheses: true,
        }
    }

    /// Preset for stand-alone extracts: numbers are deleted.
    pub fn generic() -> Self {
        Self::base()
    }

    /// Preset for question answering: numbers are kept, since answers
    /// are often numeric.
    pub fn qa() -> Self {
        let mut cfg = Self::base();
        cfg.delete_numbers = false;
        cfg
    }

    pub fn validate(&self) -> Result<(), CortexError> {
        if self.sentence_delimiters.is_empty() {
            return Err(CortexError::InvalidConfig(
                "sentence delimiter set is empty".to_string(),
            ));
        }
        for rule in &self.stemmer_rules {
            if rule.suffix.is_empty() {
                return Err(CortexError::InvalidConfig(
                    "stemmer rule with empty suffix".to_string(),
                ));
            }
            if rule.replacement.chars().count() > rule.suffix.chars().count() {
                return Err(CortexError::InvalidConfig(alloc::format!(
                    "stemmer rule '{}' -> '{}' lengthens the token",
                    rule.suffix,
                    rule.replacement
                )));
            }
        }
        Ok(())
    }
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self::generic()
    }
}
