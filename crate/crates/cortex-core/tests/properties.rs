//! Randomized invariants of the whole scoring chain.

use std::collections::BTreeSet;

use proptest::prelude::*;

use cortex_core::decision::{decide, normalize, ranked_indices, select, NormalizedTable};
use cortex_core::eval::{cws, shuffle_test, AnswerRecord};
use cortex_core::summarizer::{score_generic, summarize_generic};
use cortex_core::metrics::{term_probabilities, Metric, MetricTable};
use cortex_core::pipeline::{
    preprocess, segment_sentences, stem, Counts, PipelineConfig, PreprocessedDocument,
    RawDocument, StemRule, TermId, Title,
};
use cortex_core::{CompressionSpec, CompressionUnit, Lexicon, TermMatrix};

fn build_doc(
    n_terms: usize,
    sentences: &[Vec<usize>],
    titles: &[Vec<usize>],
) -> PreprocessedDocument {
    assert!(n_terms <= 10, "single-digit names keep the table sorted");
    let terms: Vec<String> = (0..n_terms).map(|i| format!("t{}", i)).collect();
    let raw_sentences: Vec<String> = sentences
        .iter()
        .enumerate()
        .map(|(k, s)| {
            let mut text = format!("s{}", k);
            for &i in s {
                text.push(' ');
                text.push_str(&terms[i]);
            }
            text.push('.');
            text
        })
        .collect();
    let title_words: usize = titles.iter().map(|t| t.len()).sum();
    let raw_words = raw_sentences
        .iter()
        .map(|s| s.split_whitespace().count())
        .sum::<usize>()
        + title_words;
    let governing = if titles.is_empty() { None } else { Some(0) };
    PreprocessedDocument {
        source_id: "prop".into(),
        sentences: sentences
            .iter()
            .map(|s| s.iter().map(|&i| i as TermId).collect())
            .collect(),
        titles: titles
            .iter()
            .map(|t| Title {
                level: 0,
                raw: t.iter().map(|&i| terms[i].clone()).collect::<Vec<_>>().join(" "),
                term_ids: t.iter().map(|&i| i as TermId).collect(),
            })
            .collect(),
        sentence_title: vec![governing; sentences.len()],
        raw_sentences,
        counts: Counts {
            raw_words,
            distinct_raw_words: n_terms,
            sentences: sentences.len(),
            titles: titles.len(),
            distinct_terms: n_terms,
        },
        terms,
    }
}

prop_compose! {
    fn doc_strategy(max_titles: usize)
        (n_terms in 1usize..=8)
        (
            n_terms in Just(n_terms),
            sentences in prop::collection::vec(
                prop::collection::vec(0..n_terms, 1..=5), 1..=7),
            titles in prop::collection::vec(
                prop::collection::vec(0..n_terms, 1..=4), 0..=max_titles),
        )
        -> PreprocessedDocument
    {
        build_doc(n_terms, &sentences, &titles)
    }
}

fn table_of(doc: &PreprocessedDocument) -> (TermMatrix, MetricTable) {
    let lex = Lexicon::build(doc);
    let m = TermMatrix::build(doc, &lex);
    let table = MetricTable::generic(&m, doc);
    (m, table)
}

proptest! {
    #[test]
    fn lexicon_is_exactly_the_twice_seen_terms(doc in doc_strategy(2)) {
        let lex = Lexicon::build(&doc);
        for id in 0..doc.terms.len() as TermId {
            let total: usize = doc
                .sentences
                .iter()
                .map(|s| s.iter().filter(|&&t| t == id).count())
                .sum::<usize>()
                + doc
                    .titles
                    .iter()
                    .map(|t| t.term_ids.iter().filter(|&&x| x == id).count())
                    .sum::<usize>();
            prop_assert_eq!(lex.lex_id(id).is_some(), total >= 2);
        }
    }

    #[test]
    fn presence_mirrors_positive_frequency(doc in doc_strategy(1)) {
        let (m, _) = table_of(&doc);
        for mu in 0..m.n_sentences {
            for n in 0..m.n_terms as u32 {
                prop_assert_eq!(m.xi(mu, n), m.gamma(mu, n) > 0);
            }
        }
    }

    #[test]
    fn frequencies_sum_to_the_total_mass(doc in doc_strategy(1)) {
        let (m, table) = table_of(&doc);
        let sum: f64 = (0..m.n_sentences)
            .map(|mu| table.value(Metric::Frequency, mu).unwrap())
            .sum();
        prop_assert_eq!(sum, m.total as f64);
    }

    #[test]
    fn probabilities_sum_to_one(doc in doc_strategy(1)) {
        let lex = Lexicon::build(&doc);
        let m = TermMatrix::build(&doc, &lex);
        let p = term_probabilities(&m);
        if m.total > 0 {
            prop_assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        }
        prop_assert!(p.iter().all(|&v| (0.0..=1.0).contains(&v)));
    }

    #[test]
    fn interactivity_is_presence_sum_minus_count(doc in doc_strategy(1)) {
        let (m, table) = table_of(&doc);
        for mu in 0..m.n_sentences {
            let i = table.value(Metric::Interactivity, mu).unwrap();
            let theta = table.value(Metric::PresenceSum, mu).unwrap();
            let phi = table.value(Metric::TermCount, mu).unwrap();
            prop_assert_eq!(i, theta - phi);
        }
    }

    #[test]
    fn angles_stay_in_the_unit_interval(doc in doc_strategy(2)) {
        let (m, table) = table_of(&doc);
        for mu in 0..m.n_sentences {
            let angle = table.value(Metric::TitleAngle, mu).unwrap();
            prop_assert!((0.0..=1.0).contains(&angle));
        }
    }

    #[test]
    fn normalization_hits_both_endpoints(
        raw in prop::collection::vec((-50i32..50).prop_map(|v| v as f64 / 10.0), 0..8)
    ) {
        let normed = normalize(&raw);
        prop_assert_eq!(normed.len(), raw.len());
        if raw.is_empty() {
            return Ok(());
        }
        let min = raw.iter().cloned().fold(f64::INFINITY, f64::min);
        let max = raw.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if min == max {
            prop_assert!(normed.iter().all(|&v| v == 0.5));
        } else {
            prop_assert!(normed.iter().all(|&v| (0.0..=1.0).contains(&v)));
            prop_assert!(normed.contains(&0.0));
            prop_assert!(normed.contains(&1.0));
            for i in 0..raw.len() {
                for j in 0..raw.len() {
                    if raw[i] <= raw[j] {
                        prop_assert!(normed[i] <= normed[j]);
                    }
                }
            }
        }
    }

    #[test]
    fn decision_matches_the_vote_arithmetic(
        values in (1usize..=4, 1usize..=5).prop_flat_map(|(g, n)| {
            prop::collection::vec(
                prop::collection::vec((0u8..=4).prop_map(|v| v as f64 / 4.0), n..=n),
                g..=g,
            )
        })
    ) {
        let gamma = values.len();
        let n = values[0].len();
        let norm = NormalizedTable {
            metrics: Metric::ALL[..gamma].to_vec(),
            values: values.clone(),
        };
        let scores = decide(&norm).unwrap();
        prop_assert_eq!(scores.len(), n);
        for (mu, score) in scores.iter().enumerate() {
            let mut advantage = 0.0;
            let mut disadvantage = 0.0;
            for row in &values {
                let v = row[mu];
                if v > 0.5 {
                    advantage += v - 0.5;
                } else if v < 0.5 {
                    disadvantage += 0.5 - v;
                }
            }
            let expected = if advantage > disadvantage {
                0.5 + advantage / gamma as f64
            } else {
                0.5 - disadvantage / gamma as f64
            };
            prop_assert_eq!(score.a, expected);
            prop_assert_eq!(score.advantaged, advantage > disadvantage);
            prop_assert!((0.0..=1.0).contains(&score.a));
        }
    }

    #[test]
    fn ranking_is_by_score_then_position(doc in doc_strategy(1)) {
        let (_, table) = table_of(&doc);
        let norm = NormalizedTable::from_metrics(&table);
        let scores = decide(&norm).unwrap();
        let ranked = ranked_indices(&scores);
        prop_assert_eq!(ranked.len(), scores.len());
        for w in ranked.windows(2) {
            let (hi, lo) = (w[0], w[1]);
            prop_assert!(
                scores[hi].a > scores[lo].a || (scores[hi].a == scores[lo].a && hi < lo)
            );
        }
    }

    #[test]
    fn sentence_mode_size_is_the_rounded_share(doc in doc_strategy(1), tau in 1u32..=100) {
        let (_, table) = table_of(&doc);
        let norm = NormalizedTable::from_metrics(&table);
        let scores = decide(&norm).unwrap();
        let spec = CompressionSpec::new(tau, CompressionUnit::Sentences).unwrap();
        let picked = select(&scores, &doc, spec);
        let n = doc.sentences.len();
        let expected = (((tau as usize * n + 50) / 100).max(1)).min(n);
        prop_assert_eq!(picked.len(), expected);
        let distinct: BTreeSet<usize> = picked.iter().copied().collect();
        prop_assert_eq!(distinct.len(), picked.len());
        prop_assert!(picked.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn word_mode_meets_the_budget_or_runs_out(doc in doc_strategy(1), tau in 1u32..=100) {
        let (_, table) = table_of(&doc);
        let norm = NormalizedTable::from_metrics(&table);
        let scores = decide(&norm).unwrap();
        let spec = CompressionSpec::new(tau, CompressionUnit::Words).unwrap();
        let picked = select(&scores, &doc, spec);
        prop_assert!(!picked.is_empty());
        prop_assert!(picked.windows(2).all(|w| w[0] < w[1]));
        let words: usize = picked.iter().map(|&mu| doc.sentence_word_count(mu)).sum();
        let budget = tau as usize * doc.counts.raw_words;
        prop_assert!(words * 100 >= budget || picked.len() == doc.sentences.len());
    }

    #[test]
    fn shuffling_sentences_moves_no_score(doc in doc_strategy(2), seed in any::<u64>()) {
        let report = shuffle_test(&doc, seed).unwrap();
        prop_assert!(report.passed, "{:?}", report.mismatch);

        // With tie-free scores the extract itself is order-blind too.
        // Exact ties fall back to position, which a shuffle moves.
        let scores = score_generic(&doc).unwrap();
        let mut bits: Vec<u64> = scores.iter().map(|s| s.a.to_bits()).collect();
        bits.sort_unstable();
        bits.dedup();
        if bits.len() == scores.len() {
            let spec = CompressionSpec::new(40, CompressionUnit::Sentences).unwrap();
            let shuffled = doc.permuted(&report.permutation);
            let mut base: Vec<String> = summarize_generic(&doc, spec)
                .unwrap()
                .entries
                .into_iter()
                .map(|e| e.text)
                .collect();
            let mut moved: Vec<String> = summarize_generic(&shuffled, spec)
                .unwrap()
                .entries
                .into_iter()
                .map(|e| e.text)
                .collect();
            base.sort();
            moved.sort();
            prop_assert_eq!(base, moved);
        }
    }

    #[test]
    fn stemming_is_idempotent(
        word in "[a-z]{1,12}",
        rules in prop::collection::vec(
            (
                prop::sample::select(vec!["s", "es", "ent", "aient", "ait", "e", "x"]),
                prop::sample::select(vec!["", "e", "t"]),
                1usize..4,
            )
                .prop_filter_map("rule must not lengthen", |(suffix, repl, min_stem)| {
                    (repl.chars().count() <= suffix.chars().count())
                        .then(|| StemRule::new(suffix, repl, min_stem))
                }),
            0..6,
        )
    ) {
        let once = stem(&word, &rules);
        let twice = stem(&once, &rules);
        prop_assert_eq!(&once, &twice);
        prop_assert!(once.chars().count() <= word.chars().count());
    }

    #[test]
    fn segment_spans_partition_the_body(body in "[a-z .\\n:?!()0-9',]{0,80}") {
        let config = PipelineConfig::generic();
        let segments = segment_sentences(&body, &config);
        if segments.is_empty() {
            prop_assert!(body.trim().is_empty());
        } else {
            prop_assert_eq!(segments[0].span.start, 0);
            prop_assert_eq!(segments.last().unwrap().span.end, body.len());
            for w in segments.windows(2) {
                prop_assert_eq!(w[0].span.end, w[1].span.start);
            }
        }
    }

    #[test]
    fn preprocessing_never_panics_and_stays_consistent(body in "[a-z .\\n:?!()0-9',]{0,120}") {
        let doc = preprocess(&RawDocument::new("d", body), &PipelineConfig::generic()).unwrap();
        prop_assert_eq!(doc.sentences.len(), doc.raw_sentences.len());
        prop_assert_eq!(doc.sentences.len(), doc.sentence_title.len());
        prop_assert_eq!(doc.sentences.len(), doc.counts.sentences);
        prop_assert_eq!(doc.titles.len(), doc.counts.titles);
        prop_assert_eq!(doc.terms.len(), doc.counts.distinct_terms);
        let mut sorted = doc.terms.clone();
        sorted.sort();
        sorted.dedup();
        prop_assert_eq!(&sorted, &doc.terms);
        for sentence in &doc.sentences {
            for &id in sentence {
                prop_assert!((id as usize) < doc.terms.len());
            }
        }
    }

    #[test]
    fn cws_rewards_an_extra_correct_answer(
        correct in prop::collection::vec(any::<bool>(), 1..10),
        flip in any::<prop::sample::Index>(),
    ) {
        let records: Vec<AnswerRecord> = correct
            .iter()
            .enumerate()
            .map(|(i, &ok)| AnswerRecord {
                question_id: format!("q{:02}", i),
                confidence: 1.0 - i as f64 / 16.0,
                correct: ok,
            })
            .collect();
        let base = cws(&records).unwrap();
        prop_assert!((0.0..=1.0).contains(&base));

        let mut flipped = records.clone();
        let at = flip.index(flipped.len());
        if !flipped[at].correct {
            flipped[at].correct = true;
            let improved = cws(&flipped).unwrap();
            prop_assert!(improved >= base);
        }
    }
}
