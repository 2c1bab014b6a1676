//! Text pipeline: sentence segmentation, title detection, token
//! filtering and normalization, term table assembly.

mod config;
mod document;
mod normalize;
mod segment;

pub use config::{PipelineConfig, StemRule};
pub use document::{
    Block, Counts, PreprocessedDocument, RawDocument, StructuredText, TermId, Title,
};
pub use normalize::{is_numeric_token, normalize_term, stem, surface_tokens};
pub use segment::{detect_title, segment_sentences, Segment, TitleRule};

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::CortexError;
use document::count_raw_words;
pub(crate) use normalize::Filters;

/// Run the whole pipeline on plain text: segment, pull out the title,
/// normalize every sentence, assemble the term table.
pub fn preprocess(
    raw: &RawDocument,
    config: &PipelineConfig,
) -> Result<PreprocessedDocument, CortexError> {
    config.validate()?;
    let filters = Filters::new(config);

    let segments = segment_sentences(&raw.body, config);
    if segments.is_empty() {
        return Ok(empty_document(&raw.source_id));
    }

    let mut title_specs: Vec<(u32, String)> = Vec::new();
    let mut skip = 0usize;
    if let Some((title, _, consumed)) = detect_title(&raw.body, &segments) {
        title_specs.push((0, title));
        skip = consumed;
    }

    let body_segments = &segments[skip..];
    let raw_sentences: Vec<String> = body_segments.iter().map(|s| s.text.clone()).collect();
    let sentence_terms: Vec<Vec<String>> = body_segments
        .iter()
        .map(|s| filters.sentence_terms(&s.text))
        .collect();
    let sentence_title: Vec<Option<usize>> = raw_sentences
        .iter()
        .map(|_| if title_specs.is_empty() { None } else { Some(0) })
        .collect();

    let (raw_words, distinct_raw_words) = count_raw_words(&[raw.body.as_str()]);
    Ok(assemble(
        &raw.source_id,
        &filters,
        title_specs,
        sentence_terms,
        raw_sentences,
        sentence_title,
        raw_words,
        distinct_raw_words,
    ))
}

/// Pipeline entry for pre-segmented input: the title is declared, the
/// sentences come already split, subtitles open sections.
pub fn preprocess_structured(
    structured: &StructuredText,
    config: &PipelineConfig,
) -> Result<PreprocessedDocument, CortexError> {
    config.validate()?;
    let filters = Filters::new(config);

    let mut title_specs: Vec<(u32, String)> = Vec::new();
    let mut raw_sentences: Vec<String> = Vec::new();
    let mut sentence_terms: Vec<Vec<String>> = Vec::new();
    let mut sentence_title: Vec<Option<usize>> = Vec::new();
    let mut all_texts: Vec<&str> = Vec::new();

    let mut current_title: Option<usize> = None;
    if let Some(title) = &structured.title {
        title_specs.push((0, title.trim().to_string()));
        current_title = Some(0);
        all_texts.push(title.as_str());
    }
    for block in &structured.blocks {
        match block {
            Block::Subtitle { level, text } => {
                title_specs.push((*level, text.trim().to_string()));
                current_title = Some(title_specs.len() - 1);
                all_texts.push(text.as_str());
            }
            Block::Sentence(text) => {
                let trimmed = text.trim();
                if trimmed.is_empty() {
                    continue;
                }
                raw_sentences.push(trimmed.to_string());
                sentence_terms.push(filters.sentence_terms(trimmed));
                sentence_title.push(current_title.or(if title_specs.is_empty() {
                    None
                } else {
                    Some(0)
                }));
                all_texts.push(text.as_str());
            }
        }
    }

    let (raw_words, distinct_raw_words) = count_raw_words(&all_texts);
    Ok(assemble(
        &structured.source_id,
        &filters,
        title_specs,
        sentence_terms,
        raw_sentences,
        sentence_title,
        raw_words,
        distinct_raw_words,
    ))
}

fn empty_document(source_id: &str) -> PreprocessedDocument {
    PreprocessedDocument {
        source_id: source_id.to_string(),
        terms: Vec::new(),
        sentences: Vec::new(),
        titles: Vec::new(),
        sentence_title: Vec::new(),
        raw_sentences: Vec::new(),
        counts: Counts::default(),
    }
}

/// Assign term ids in lexicographic order and map every sequence onto
/// them. Sorting the table makes ids independent of sentence order,
/// which keeps downstream float summations bit-stable under
/// permutation.
#[allow(clippy::too_many_arguments)]
fn assemble(
    source_id: &str,
    filters: &Filters<'_>,
    title_specs: Vec<(u32, String)>,
    sentence_terms: Vec<Vec<String>>,
    raw_sentences: Vec<String>,
    sentence_title: Vec<Option<usize>>,
    raw_words: usize,
    distinct_raw_words: usize,
) -> PreprocessedDocument {
    let title_terms: Vec<Vec<String>> = title_specs
        .iter()
        .map(|(_, text)| filters.sentence_terms(text))
        .collect();

    let mut table: BTreeMap<&str, TermId> = BTreeMap::new();
    for term in sentence_terms.iter().chain(title_terms.iter()).flatten() {
        table.entry(term.as_str()).or_insert(0);
    }
    let mut terms: Vec<String> = Vec::with_capacity(table.len());
    for (next_id, (term, id)) in table.iter_mut().enumerate() {
        *id = next_id as TermId;
        terms.push(term.to_string());
    }

    let to_ids = |seq: &[String]| -> Vec<TermId> {
        seq.iter().map(|t| table[t.as_str()]).collect()
    };
    let sentences: Vec<Vec<TermId>> = sentence_terms.iter().map(|s| to_ids(s)).collect();
    let titles: Vec<Title> = title_specs
        .iter()
        .zip(&title_terms)
        .map(|((level, raw), term_seq)| Title {
            level: *level,
            raw: raw.clone(),
            term_ids: to_ids(term_seq),
        })
        .collect();

    let counts = Counts {
        raw_words,
        distinct_raw_words,
        sentences: sentences.len(),
        titles: titles.len(),
        distinct_terms: terms.len(),
    };
    PreprocessedDocument {
        source_id: source_id.to_string(),
        terms,
        sentences,
        titles,
        sentence_title,
        raw_sentences,
        counts,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn bare() -> PipelineConfig {
        let mut cfg = PipelineConfig::generic();
        cfg.strip_parentheses = true;
        cfg
    }

    #[test]
    fn toy_two_sentence_document() {
        let raw = RawDocument::new("toy", "aa bb. aa cc.");
        let doc = preprocess(&raw, &bare()).unwrap();
        let named: Vec<Vec<&str>> = doc
            .sentences
            .iter()
            .map(|s| s.iter().map(|&id| doc.term_str(id)).collect())
            .collect();
        assert_eq!(named, vec![vec!["aa", "bb"], vec!["aa", "cc"]]);
        assert_eq!(doc.counts.raw_words, 4);
        assert_eq!(doc.counts.sentences, 2);
    }

    #[test]
    fn whitespace_body_gives_empty_document() {
        let raw = RawDocument::new("blank", "   \n  ");
        let doc = preprocess(&raw, &bare()).unwrap();
        assert_eq!(doc.counts, Counts::default());
        assert!(doc.is_empty());
    }

    #[test]
    fn capitalized_title_leaves_the_body() {
        let raw = RawDocument::new(
            "t",
            "TITRE GLOBAL.\nLes ordinateurs calculent vite. Les puces sautent loin.",
        );
        let doc = preprocess(&raw, &bare()).unwrap();
        assert_eq!(doc.counts.titles, 1);
        assert_eq!(doc.titles[0].raw, "TITRE GLOBAL");
        assert_eq!(doc.counts.sentences, 2);
        assert_eq!(doc.sentence_title, vec![Some(0), Some(0)]);
    }

    #[test]
    fn term_ids_are_sorted() {
        let raw = RawDocument::new("t", "zz yy. aa zz.");
        let doc = preprocess(&raw, &bare()).unwrap();
        let mut sorted = doc.terms.clone();
        sorted.sort();
        assert_eq!(doc.terms, sorted);
    }

    #[test]
    fn structured_subtitles_govern_following_sentences() {
        let st = StructuredText {
            source_id: "s".to_string(),
            title: Some("Sujet global".to_string()),
            blocks: vec![
                Block::Sentence("Une phrase introductive.".to_string()),
                Block::Subtitle {
                    level: 1,
                    text: "Premier volet".to_string(),
                },
                Block::Sentence("Le volet parle de calcul.".to_string()),
                Block::Sentence("Encore du calcul rapide.".to_string()),
            ],
        };
        let doc = preprocess_structured(&st, &bare()).unwrap();
        assert_eq!(doc.counts.titles, 2);
        assert_eq!(doc.sentence_title, vec![Some(0), Some(1), Some(1)]);
        assert_eq!(doc.counts.sentences, 3);
    }

    #[test]
    fn rendering_terms_back_reproduces_sequences() {
        let mut cfg = bare();
        cfg.stoplist.insert("les".to_string());
        cfg.stemmer_rules.push(StemRule::new("s", "", 3));
        let raw = RawDocument::new(
            "t",
            "CALCULS RAPIDES.\nLes ordinateurs calculent. Les calculs avancent vite.",
        );
        let doc = preprocess(&raw, &cfg).unwrap();
        let rendered = RawDocument::new("t", doc.render_terms());
        let again = preprocess(&rendered, &cfg).unwrap();
        assert_eq!(doc.counts.sentences, again.counts.sentences);
        let seq = |d: &PreprocessedDocument| -> Vec<Vec<String>> {
            d.sentences
                .iter()
                .map(|s| s.iter().map(|&id| d.term_str(id).to_string()).collect())
                .collect()
        };
        assert_eq!(seq(&doc), seq(&again));
    }
}
