//! Lexical resource files: embedded packs and the formats they share
//! with user-supplied overrides.
//!
//! Formats, all UTF-8, `#` comments and blank lines ignored:
//! - stoplist: one word or multiword expression per line
//! - lemmas: surface TAB lemma
//! - stems: suffix TAB replacement TAB minimum-stem-length, in order
//! - numbers: one spelled-out numeral per line
//! - compounds: one space-separated expression per line
//! - thesaurus: term TAB synonym TAB weight (weight optional)

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use cortex_core::pipeline::{normalize_term, StemRule};
use cortex_core::{PipelineConfig, Thesaurus};

pub struct ResourcePack {
    pub lang: &'static str,
    stopwords: &'static str,
    lemmas: &'static str,
    stems: &'static str,
    numbers: &'static str,
    compounds: &'static str,
    thesaurus: &'static str,
}

pub const FRENCH: ResourcePack = ResourcePack {
    lang: "fr",
    stopwords: include_str!("../resources/fr/stopwords.txt"),
    lemmas: include_str!("../resources/fr/lemmas.tsv"),
    stems: include_str!("../resources/fr/stems.tsv"),
    numbers: include_str!("../resources/fr/numbers.txt"),
    compounds: include_str!("../resources/fr/compounds.txt"),
    thesaurus: include_str!("../resources/fr/thesaurus.tsv"),
};

pub const ENGLISH: ResourcePack = ResourcePack {
    lang: "en",
    stopwords: include_str!("../resources/en/stopwords.txt"),
    lemmas: include_str!("../resources/en/lemmas.tsv"),
    stems: include_str!("../resources/en/stems.tsv"),
    numbers: include_str!("../resources/en/numbers.txt"),
    compounds: include_str!("../resources/en/compounds.txt"),
    thesaurus: include_str!("../resources/en/thesaurus.tsv"),
};

/// Everything a run needs from the resource side.
pub struct Resources {
    pub config: PipelineConfig,
    pub thesaurus: Thesaurus,
}

/// Assemble the pipeline configuration and thesaurus from a pack,
/// swapping in any user-supplied files.
pub fn load(
    pack: &ResourcePack,
    qa_preset: bool,
    stoplist_path: Option<&Path>,
    lemmas_path: Option<&Path>,
    thesaurus_path: Option<&Path>,
) -> Result<Resources> {
    let stop_text = read_override(stoplist_path, pack.stopwords)?;
    let lemma_text = read_override(lemmas_path, pack.lemmas)?;
    let thesaurus_text = read_override(thesaurus_path, pack.thesaurus)?;

    let mut config = if qa_preset {
        PipelineConfig::qa()
    } else {
        PipelineConfig::generic()
    };
    config.stoplist = parse_words(&stop_text, origin(stoplist_path, "stoplist"))?
        .into_iter()
        .collect();
    config.number_words = parse_words(pack.numbers, "embedded numbers")?
        .into_iter()
        .collect();
    config.lemma_table = parse_lemmas(&lemma_text, origin(lemmas_path, "lemma table"))?;
    config.stemmer_rules = parse_stems(pack.stems, "embedded stem rules")?;
    config.compound_list = parse_words(pack.compounds, "embedded compounds")?;
    config.validate()?;

    let entries = parse_thesaurus(&thesaurus_text, origin(thesaurus_path, "thesaurus"))?;
    let thesaurus = build_thesaurus(&entries, &config);
    Ok(Resources { config, thesaurus })
}

fn read_override(path: Option<&Path>, embedded: &str) -> Result<String> {
    match path {
        Some(p) => {
            fs::read_to_string(p).with_context(|| format!("cannot read {}", p.display()))
        }
        None => Ok(embedded.to_string()),
    }
}

fn origin(path: Option<&Path>, embedded_name: &'static str) -> String {
    match path {
        Some(p) => p.display().to_string(),
        None => format!("embedded {embedded_name}"),
    }
}

/// Lines of a resource file: trimmed, lowercased, comments dropped.
fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(k, line)| (k + 1, line.trim_end_matches('\r').trim()))
        .filter(|(_, line)| !line.is_empty() && !line.starts_with('#'))
}

fn parse_words(text: &str, origin: impl AsRef<str>) -> Result<Vec<String>> {
    let origin = origin.as_ref();
    let mut words = Vec::new();
    for (n, line) in lines(text) {
        if line.contains('\t') {
            bail!("{origin}:{n}: unexpected TAB in a word-list entry");
        }
        words.push(line.to_lowercase());
    }
    Ok(words)
}

fn parse_lemmas(text: &str, origin: impl AsRef<str>) -> Result<BTreeMap<String, String>> {
    let origin = origin.as_ref();
    let mut table = BTreeMap::new();
    for (n, line) in lines(text) {
        let mut parts = line.split('\t');
        let (surface, lemma) = match (parts.next(), parts.next(), parts.next()) {
            (Some(s), Some(l), None) if !s.is_empty() && !l.is_empty() => (s, l),
            _ => bail!("{origin}:{n}: expected 'surface TAB lemma'"),
        };
        table.insert(surface.to_lowercase(), lemma.to_lowercase());
    }
    Ok(table)
}

fn parse_stems(text: &str, origin: impl AsRef<str>) -> Result<Vec<StemRule>> {
    let origin = origin.as_ref();
    let mut rules = Vec::new();
    for (n, line) in lines(text) {
        let parts: Vec<&str> = line.split('\t').collect();
        let [suffix, replacement, min_stem] = parts.as_slice() else {
            bail!("{origin}:{n}: expected 'suffix TAB replacement TAB min-stem'");
        };
        let min_stem: usize = min_stem
            .parse()
            .with_context(|| format!("{origin}:{n}: min-stem is not a number"))?;
        rules.push(StemRule::new(suffix, replacement, min_stem));
    }
    Ok(rules)
}

fn parse_thesaurus(
    text: &str,
    origin: impl AsRef<str>,
) -> Result<Vec<(String, String, f64)>> {
    let origin = origin.as_ref();
    let mut entries = Vec::new();
    for (n, line) in lines(text) {
        let parts: Vec<&str> = line.split('\t').collect();
        let (head, synonym, weight) = match parts.as_slice() {
            [h, s] => (h, s, 1.0),
            [h, s, w] => {
                let w: f64 = w
                    .parse()
                    .with_context(|| format!("{origin}:{n}: weight is not a number"))?;
                if !(0.0..=1.0).contains(&w) {
                    bail!("{origin}:{n}: weight {w} is outside [0, 1]");
                }
                (h, s, w)
            }
            _ => bail!("{origin}:{n}: expected 'term TAB synonym [TAB weight]'"),
        };
        entries.push((head.to_lowercase(), synonym.to_lowercase(), weight));
    }
    Ok(entries)
}

/// Thesaurus lookup happens on normalized query terms, so heads are
/// pushed through the pipeline here; synonyms are normalized at
/// expansion time.
fn build_thesaurus(entries: &[(String, String, f64)], config: &PipelineConfig) -> Thesaurus {
    let mut grouped: BTreeMap<String, Vec<(String, f64)>> = BTreeMap::new();
    for (head, synonym, weight) in entries {
        let Some(head_term) = normalize_term(head, config) else {
            continue;
        };
        let synonyms = grouped.entry(head_term).or_default();
        if !synonyms.iter().any(|(s, _)| s == synonym) {
            synonyms.push((synonym.clone(), *weight));
        }
    }
    let mut thesaurus = Thesaurus::new();
    for (head, synonyms) in grouped {
        let refs: Vec<(&str, f64)> = synonyms.iter().map(|(s, w)| (s.as_str(), *w)).collect();
        thesaurus.insert(head, &refs);
    }
    thesaurus
}
