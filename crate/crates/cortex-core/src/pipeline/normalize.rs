//! Token-level filtering, lemmatization and stemming.

use alloc::borrow::ToOwned;
use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::config::{PipelineConfig, StemRule};

/// Strip suffixes until no rule applies. Rules are tried in order and
/// the process restarts after every hit, so chained suffixes come off
/// one by one. Bounded, so adversarial rule sets still terminate.
pub fn stem(token: &str, rules: &[StemRule]) -> String {
    let mut current = token.to_string();
    for _ in 0..64 {
        let mut applied = false;
        for rule in rules {
            if !current.ends_with(rule.suffix.as_str()) {
                continue;
            }
            let stem_end = current.len() - rule.suffix.len();
            if current[..stem_end].chars().count() < rule.min_stem {
                continue;
            }
            let mut next = current[..stem_end].to_string();
            next.push_str(&rule.replacement);
            if next == current {
                continue;
            }
            current = next;
            applied = true;
            break;
        }
        if !applied {
            break;
        }
    }
    current
}

/// True for tokens made of digits and numeric punctuation: "1998",
/// "3.5", "12-15". Tokens mixing letters and digits stay.
pub fn is_numeric_token(token: &str) -> bool {
    let mut saw_digit = false;
    for ch in token.chars() {
        if ch.is_ascii_digit() {
            saw_digit = true;
        } else if !matches!(ch, '.' | ',' | '-') {
            return false;
        }
    }
    saw_digit
}

/// Lowercased word tokens of one sentence. Parenthesized spans go
/// away, apostrophes split their clitic off ("l'ordinateur" gives
/// "l" and "ordinateur"), and symbols separate. Hyphens and
/// underscores survive inside a token; a period or comma survives
/// only between two digits.
pub fn surface_tokens(text: &str, strip_parens: bool) -> Vec<String> {
    let chars: Vec<char> = text.chars().collect();
    let mut cleaned = String::with_capacity(text.len());
    let mut depth = 0usize;
    for (k, &ch) in chars.iter().enumerate() {
        if strip_parens {
            if ch == '(' {
                depth += 1;
                continue;
            }
            if ch == ')' {
                depth = depth.saturating_sub(1);
                continue;
            }
            if depth > 0 {
                continue;
            }
        }
        if ch.is_alphanumeric() || ch == '-' || ch == '_' {
            for low in ch.to_lowercase() {
                cleaned.push(low);
            }
        } else if matches!(ch, '.' | ',')
            && k > 0
            && chars[k - 1].is_ascii_digit()
            && k + 1 < chars.len()
            && chars[k + 1].is_ascii_digit()
        {
            cleaned.push(ch);
        } else {
            cleaned.push(' ');
        }
    }
    cleaned
        .split_whitespace()
        .map(|tok| tok.trim_matches(['-', '_']))
        .filter(|tok| !tok.is_empty())
        .map(|tok| tok.to_string())
        .collect()
}

/// Stoplists and compound tables in lookup form, built once per
/// document.
pub(crate) struct Filters<'c> {
    config: &'c PipelineConfig,
    single_stops: BTreeSet<&'c str>,
    /// Multiword stop entries as token sequences, longest first.
    multi_stops: Vec<Vec<&'c str>>,
    /// Compound lemma sequences, longest first.
    compounds: Vec<Vec<&'c str>>,
}

impl<'c> Filters<'c> {
    pub(crate) fn new(config: &'c PipelineConfig) -> Self {
        let mut single_stops = BTreeSet::new();
        let mut multi_stops: Vec<Vec<&str>> = Vec::new();
        for entry in &config.stoplist {
            if entry.contains(' ') {
                multi_stops.push(entry.split_whitespace().collect());
            } else {
                single_stops.insert(entry.as_str());
            }
        }
        multi_stops.sort_by(|a, b| b.len().cmp(&a.len()).then(a.cmp(b)));
        let mut compounds: Vec<Vec<&str>> = config
            .compound_list
            .iter()
            .map(|entry| entry.split_whitespace().collect())
            .filter(|seq: &Vec<&str>| seq.len() > 1)
            .collect();
        compounds.sort_by(|a, b| b.len().cmp(&a.len()).then(a.cmp(b)));
        Filters {
            config,
            single_stops,
            multi_stops,
            compounds,
        }
    }

    fn lemma(&self, surface: &str) -> String {
        match self.config.lemma_table.get(surface) {
            Some(lemma) => lemma.clone(),
            None => surface.to_owned(),
        }
    }

    fn is_stopped(&self, surface: &str, lemma: &str) -> bool {
        self.config.delete_function_words
            && (self.single_stops.contains(surface) || self.single_stops.contains(lemma))
    }

    fn is_deleted_number(&self, surface: &str, lemma: &str) -> bool {
        self.config.delete_numbers
            && (is_numeric_token(surface)
                || self.config.number_words.contains(surface)
                || self.config.number_words.contains(lemma))
    }

    /// Finish one non-compound token: filter, then stem the lemma.
    /// Tokens already holding an underscore are joined compounds and
    /// pass through untouched.
    fn finish(&self, surface: &str, lemma: &str) -> Option<String> {
        if self.is_stopped(surface, lemma) || self.is_deleted_number(surface, lemma) {
            return None;
        }
        if lemma.contains('_') {
            return Some(lemma.to_owned());
        }
        Some(stem(lemma, &self.config.stemmer_rules))
    }

    fn matches_at<'t>(seqs: &[Vec<&str>], toks: &[&'t str], at: usize) -> Option<usize> {
        for seq in seqs {
            if at + seq.len() <= toks.len()
                && seq.iter().zip(&toks[at..]).all(|(a, b)| a == b)
            {
                return Some(seq.len());
            }
        }
        None
    }

    pub(crate) fn sentence_terms(&self, text: &str) -> Vec<String> {
        let raw = surface_tokens(text, self.config.strip_parentheses);
        let raw_refs: Vec<&str> = raw.iter().map(|s| s.as_str()).collect();

        // Multiword stop expressions go first, on surface forms.
        let mut surfaces: Vec<&str> = Vec::with_capacity(raw_refs.len());
        let mut i = 0;
        while i < raw_refs.len() {
            if let Some(len) = Self::matches_at(&self.multi_stops, &raw_refs, i) {
                i += len;
            } else {
                surfaces.push(raw_refs[i]);
                i += 1;
            }
        }

        let lemmas: Vec<String> = surfaces.iter().map(|s| self.lemma(s)).collect();
        let lemma_refs: Vec<&str> = lemmas.iter().map(|s| s.as_str()).collect();

        // Compounds match on lemma sequences; function words inside a
        // compound are part of the term, so filtering waits.
        let mut terms: Vec<String> = Vec::new();
        let mut i = 0;
        while i < lemma_refs.len() {
            if let Some(len) = Self::matches_at(&self.compounds, &lemma_refs, i) {
                terms.push(lemma_refs[i..i + len].join("_"));
                i += len;
            } else {
                if let Some(term) = self.finish(surfaces[i], &lemmas[i]) {
                    terms.push(term);
                }
                i += 1;
            }
        }
        terms
    }
}

/// Normalize one token or detected compound. Phrases with spaces are
/// either stoplisted away or joined into an underscore compound of
/// their lemmas; single tokens go through stop/number filtering,
/// lemma lookup, and stemming. None means the token contributes no
/// term.
pub fn normalize_term(token: &str, config: &PipelineConfig) -> Option<String> {
    let filters = Filters::new(config);
    let lowered = token.to_lowercase();
    let trimmed = lowered.trim();
    if trimmed.is_empty() {
        return None;
    }
    if trimmed.contains(' ') {
        if config.delete_function_words && config.stoplist.contains(trimmed) {
            return None;
        }
        let parts: Vec<String> = trimmed
            .split_whitespace()
            .map(|part| filters.lemma(part))
            .collect();
        return Some(parts.join("_"));
    }
    filters.finish(trimmed, &filters.lemma(trimmed))
}
