//! Sentence boundary detection and title heuristics.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::ops::Range;

use super::config::PipelineConfig;

/// A sentence with its byte span in the original body. Spans partition
/// the body: every byte belongs to exactly one span, whitespace-only
/// remainders are absorbed by the preceding span. `text` is the
/// trimmed slice, delimiter included.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segment {
    pub text: String,
    pub span: Range<usize>,
}

/// Which heuristic produced the document title.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TitleRule {
    /// First sentence written entirely in capitals.
    Capitalized,
    /// First sentence alone on the first line.
    CarriageReturn,
    /// Short first sentence (at most ten words).
    FirstSentence,
    /// Nothing qualified; the first ten words stand in, and the text
    /// keeps its sentences untouched.
    FirstWords,
}

/// Split `body` into sentences at the configured delimiter characters.
///
/// Three situations protect a delimiter from acting as a boundary:
/// periods inside URLs and email addresses, a period between two
/// digits, and any delimiter inside parentheses.
pub fn segment_sentences(body: &str, config: &PipelineConfig) -> Vec<Segment> {
    if body.trim().is_empty() {
        return Vec::new();
    }
    let protected = protected_positions(body);
    let bytes = body.len();

    let mut cuts: Vec<usize> = Vec::new();
    let mut paren_depth = 0usize;
    for (pos, ch) in body.char_indices() {
        match ch {
            '(' => paren_depth += 1,
            ')' => paren_depth = paren_depth.saturating_sub(1),
            _ => {}
        }
        if paren_depth > 0 || !config.sentence_delimiters.contains(&ch) {
            continue;
        }
        if protected.binary_search(&pos).is_ok() {
            continue;
        }
        cuts.push(pos + ch.len_utf8());
    }
    if cuts.last() != Some(&bytes) {
        cuts.push(bytes);
    }

    let mut segments: Vec<Segment> = Vec::new();
    let mut start = 0usize;
    for cut in cuts {
        let slice = &body[start..cut];
        let trimmed = slice.trim();
        if trimmed.is_empty() {
            // Whitespace-only remainder: extend the previous span so
            // the partition stays gapless.
            if let Some(last) = segments.last_mut() {
                last.span.end = cut;
            }
            // With no previous segment the slice is leading
            // whitespace; leave `start` alone so it joins the next.
            if segments.is_empty() {
                continue;
            }
        } else {
            segments.push(Segment {
                text: trimmed.to_string(),
                span: start..cut,
            });
        }
        start = cut;
    }
    segments
}

/// Byte positions of delimiter characters that must not split: inside
/// URL or email tokens, or a period flanked by digits.
fn protected_positions(body: &str) -> Vec<usize> {
    let mut protected = Vec::new();
    let body_bytes = body.as_bytes();

    let mut token_start = None;
    for (pos, ch) in body.char_indices().chain(core::iter::once((body.len(), ' '))) {
        if ch.is_whitespace() {
            if let Some(start) = token_start.take() {
                mark_token(body, start, pos, &mut protected);
            }
        } else if token_start.is_none() {
            token_start = Some(pos);
        }
    }

    for (pos, ch) in body.char_indices() {
        if ch != '.' {
            continue;
        }
        let before = pos > 0 && body_bytes[pos - 1].is_ascii_digit();
        let after = pos + 1 < body.len() && body_bytes[pos + 1].is_ascii_digit();
        if before && after {
            protected.push(pos);
        }
    }

    protected.sort_unstable();
    protected.dedup();
    protected
}

fn mark_token(body: &str, start: usize, end: usize, protected: &mut Vec<usize>) {
    let token = &body[start..end];
    let lower = token.to_lowercase();
    let looks_like_url = lower.contains("://") || lower.starts_with("www.");
    let at = token.find('@');
    let looks_like_email = match at {
        Some(i) => token[i + 1..].contains('.'),
        None => false,
    };
    if !looks_like_url && !looks_like_email {
        return;
    }
    // Sentence-final punctuation after the address still terminates:
    // only interior delimiters are shielded.
    let trimmed = token.trim_end_matches(['.', '?', '!', ':', ',', ';']);
    let interior_end = start + trimmed.len();
    for (off, ch) in token.char_indices() {
        let pos = start + off;
        if pos < interior_end && matches!(ch, '.' | '?' | '!' | ':') {
            protected.push(pos);
        }
    }
}

/// Apply the title heuristics to an already-segmented body.
///
/// Returns the title text (trailing delimiter stripped), the rule that
/// fired, and how many leading segments the title consumed. The two
/// typographic rules (capitals, own line) lift the sentence out of the
/// body; the two weak rules only copy, so the opening prose stays a
/// sentence. A single-segment body never gives up its only sentence.
pub fn detect_title(body: &str, segments: &[Segment]) -> Option<(String, TitleRule, usize)> {
    let first = segments.first()?;
    let consumed = if segments.len() > 1 { 1 } else { 0 };

    if is_all_caps(&first.text) {
        return Some((strip_delimiter(&first.text), TitleRule::Capitalized, consumed));
    }
    if on_own_line(body, first) {
        return Some((strip_delimiter(&first.text), TitleRule::CarriageReturn, consumed));
    }
    if first.text.split_whitespace().count() <= 10 {
        return Some((strip_delimiter(&first.text), TitleRule::FirstSentence, 0));
    }
    let words: Vec<&str> = body.split_whitespace().take(10).collect();
    if words.is_empty() {
        return None;
    }
    Some((strip_delimiter(&words.join(" ")), TitleRule::FirstWords, 0))
}

fn is_all_caps(text: &str) -> bool {
    let mut saw_letter = false;
    for ch in text.chars() {
        if ch.is_alphabetic() {
            saw_letter = true;
            if !ch.is_uppercase() {
                return false;
            }
        }
    }
    saw_letter
}

fn on_own_line(body: &str, first: &Segment) -> bool {
    match body.find('\n') {
        Some(nl) => body[..nl].trim() == first.text,
        None => false,
    }
}

fn strip_delimiter(text: &str) -> String {
    text.trim_end_matches(['.', '?', '!', ':']).trim().to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn cfg() -> PipelineConfig {
        PipelineConfig::generic()
    }

    fn texts(body: &str) -> Vec<String> {
        segment_sentences(body, &cfg())
            .into_iter()
            .map(|s| s.text)
            .collect()
    }

    #[test]
    fn one_sentence_per_delimiter() {
        assert_eq!(texts("A b. C d? E!"), vec!["A b.", "C d?", "E!"]);
    }

    #[test]
    fn url_periods_do_not_split() {
        assert_eq!(
            texts("Voir http://www.lia.univ-avignon.fr demain."),
            vec!["Voir http://www.lia.univ-avignon.fr demain."]
        );
    }

    #[test]
    fn colon_and_newline_are_delimiters() {
        assert_eq!(texts("x: y.\nz."), vec!["x:", "y.", "z."]);
    }

    #[test]
    fn email_protected_but_final_period_cuts() {
        assert_eq!(
            texts("Write to jean.dupont@lia.fr. Then wait."),
            vec!["Write to jean.dupont@lia.fr.", "Then wait."]
        );
    }

    #[test]
    fn decimal_point_is_not_a_boundary() {
        assert_eq!(texts("Il mesure 3.5 cm. Fin."), vec!["Il mesure 3.5 cm.", "Fin."]);
    }

    #[test]
    fn parentheses_suppress_delimiters() {
        assert_eq!(
            texts("Un choix (voir fig. 2) secondaire. Fin."),
            vec!["Un choix (voir fig. 2) secondaire.", "Fin."]
        );
    }

    #[test]
    fn spans_partition_the_body() {
        let body = "  A b. C d?  E!  ";
        let segs = segment_sentences(body, &cfg());
        assert_eq!(segs.first().unwrap().span.start, 0);
        assert_eq!(segs.last().unwrap().span.end, body.len());
        for pair in segs.windows(2) {
            assert_eq!(pair[0].span.end, pair[1].span.start);
        }
    }

    #[test]
    fn title_rule_capitalized() {
        let body = "INFORMATIQUE ET PUCES.\nEt si les puces devenaient intelligentes.";
        let segs = segment_sentences(body, &cfg());
        let (title, rule, used) = detect_title(body, &segs).unwrap();
        assert_eq!(title, "INFORMATIQUE ET PUCES");
        assert_eq!(rule, TitleRule::Capitalized);
        assert_eq!(used, 1);
    }

    #[test]
    fn title_rule_carriage_return() {
        let body = "Hello world.\nMore text here, clearly not in capitals at all.";
        let segs = segment_sentences(body, &cfg());
        let (title, rule, _) = detect_title(body, &segs).unwrap();
        assert_eq!(title, "Hello world");
        assert_eq!(rule, TitleRule::CarriageReturn);
    }

    #[test]
    fn title_rule_fallback_keeps_body() {
        let word = "mot ";
        let body = word.repeat(40);
        let segs = segment_sentences(&body, &cfg());
        assert_eq!(segs.len(), 1);
        let (title, rule, used) = detect_title(&body, &segs).unwrap();
        assert_eq!(rule, TitleRule::FirstWords);
        assert_eq!(used, 0);
        assert_eq!(title.split_whitespace().count(), 10);
    }

    #[test]
    fn single_sentence_is_never_consumed() {
        let body = "SEUL TITRE POSSIBLE.";
        let segs = segment_sentences(body, &cfg());
        let (title, rule, used) = detect_title(body, &segs).unwrap();
        assert_eq!(used, 0);
        assert_eq!(rule, TitleRule::Capitalized);
        assert_eq!(title, "SEUL TITRE POSSIBLE");
    }
}
