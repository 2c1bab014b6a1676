//! Scoring of extracts and answer rankings, plus the order-invariance
//! probe.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::decision::{decide, NormalizedTable};
use crate::error::CortexError;
use crate::lexicon::Lexicon;
use crate::matrix::TermMatrix;
use crate::metrics::{Metric, MetricTable};
use crate::pipeline::PreprocessedDocument;
use crate::rng::SplitMix64;
use crate::summarizer::score_generic;

/// One answered question: how sure the system was and whether the
/// answer was right.
#[derive(Debug, Clone, PartialEq)]
pub struct AnswerRecord {
    pub question_id: String,
    pub confidence: f64,
    pub correct: bool,
}

/// Confidence-weighted score of an answer run: answers are ranked by
/// descending confidence and each rank contributes the fraction of
/// correct answers seen so far. Rewards calibration, not just
/// accuracy.
pub fn cws(records: &[AnswerRecord]) -> Result<f64, CortexError> {
    if records.is_empty() {
        return Err(CortexError::NoAnswers);
    }
    let mut sorted: Vec<&AnswerRecord> = records.iter().collect();
    sorted.sort_by(|x, y| {
        y.confidence
            .total_cmp(&x.confidence)
            .then_with(|| x.question_id.cmp(&y.question_id))
    });
    let mut correct_so_far = 0u64;
    let mut sum = 0.0;
    for (rank, record) in sorted.iter().enumerate() {
        if record.correct {
            correct_so_far += 1;
        }
        sum += correct_so_far as f64 / (rank + 1) as f64;
    }
    Ok(sum / sorted.len() as f64)
}

/// A human extract to judge against: per-sentence weights over the
/// whole document and the set of sentences the judges kept.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceExtract {
    pub weights: Vec<f64>,
    pub selected: BTreeSet<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QualityScore {
    /// Weight mass of the extract's sentences that the judges also
    /// kept.
    pub raw: f64,
    /// Same, over the weight mass of the judged extract itself.
    pub normalized: f64,
}

pub fn quality(extract: &BTreeSet<usize>, reference: &ReferenceExtract) -> QualityScore {
    let raw: f64 = extract
        .iter()
        .filter(|mu| reference.selected.contains(mu))
        .map(|&mu| reference.weights[mu])
        .sum();
    let denom: f64 = reference
        .selected
        .iter()
        .map(|&mu| reference.weights[mu])
        .sum();
    let normalized = if denom > 0.0 { raw / denom } else { 0.0 };
    QualityScore { raw, normalized }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrecisionRecall {
    pub precision: f64,
    pub recall: f64,
    /// The extract had no sentences at all; precision is 0 by fiat.
    pub empty_extract: bool,
}

pub fn precision_recall(
    extract: &BTreeSet<usize>,
    reference: &BTreeSet<usize>,
) -> Result<PrecisionRecall, CortexError> {
    if reference.is_empty() {
        return Err(CortexError::EmptyReference);
    }
    if extract.is_empty() {
        return Ok(PrecisionRecall {
            precision: 0.0,
            recall: 0.0,
            empty_extract: true,
        });
    }
    let hits = extract.intersection(reference).count() as f64;
    Ok(PrecisionRecall {
        precision: hits / extract.len() as f64,
        recall: hits / reference.len() as f64,
        empty_extract: false,
    })
}

pub const HISTOGRAM_BINS: usize = 10;

/// Distribution of one normalized metric (or of the decision scores)
/// over a corpus.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricStats {
    pub count: usize,
    pub mean: f64,
    pub std_dev: f64,
    /// Mean of the values above 1/2; absent when none are.
    pub kappa_plus: Option<f64>,
    /// Mean of the values below 1/2; absent when none are.
    pub kappa_minus: Option<f64>,
    pub advantaged_fraction: f64,
    pub disadvantaged_fraction: f64,
    pub histogram: [u32; HISTOGRAM_BINS],
}

impl MetricStats {
    pub fn from_values(values: &[f64]) -> MetricStats {
        let count = values.len();
        let mut stats = MetricStats {
            count,
            mean: 0.0,
            std_dev: 0.0,
            kappa_plus: None,
            kappa_minus: None,
            advantaged_fraction: 0.0,
            disadvantaged_fraction: 0.0,
            histogram: [0; HISTOGRAM_BINS],
        };
        if count == 0 {
            return stats;
        }
        let n = count as f64;
        stats.mean = values.iter().sum::<f64>() / n;
        let var = values.iter().map(|v| (v - stats.mean) * (v - stats.mean)).sum::<f64>() / n;
        stats.std_dev = libm::sqrt(var);

        let mut above = (0u64, 0.0);
        let mut below = (0u64, 0.0);
        for &v in values {
            if v > 0.5 {
                above = (above.0 + 1, above.1 + v);
            } else if v < 0.5 {
                below = (below.0 + 1, below.1 + v);
            }
            let bin = ((v.clamp(0.0, 1.0) * HISTOGRAM_BINS as f64) as usize)
                .min(HISTOGRAM_BINS - 1);
            stats.histogram[bin] += 1;
        }
        if above.0 > 0 {
            stats.kappa_plus = Some(above.1 / above.0 as f64);
        }
        if below.0 > 0 {
            stats.kappa_minus = Some(below.1 / below.0 as f64);
        }
        stats.advantaged_fraction = above.0 as f64 / n;
        stats.disadvantaged_fraction = below.0 as f64 / n;
        stats
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SensitivityReport {
    pub per_metric: Vec<(Metric, MetricStats)>,
    pub decision: MetricStats,
    pub documents: usize,
    pub sentences: usize,
}

/// How each metric behaves across a corpus: every document is scored
/// generically and the normalized values are pooled per metric, along
/// with the decision scores they produce.
pub fn sensitivity(docs: &[PreprocessedDocument]) -> Result<SensitivityReport, CortexError> {
    let mut pooled: Vec<Vec<f64>> = alloc::vec![Vec::new(); Metric::ALL.len()];
    let mut decisions: Vec<f64> = Vec::new();
    let mut documents = 0;
    for doc in docs {
        if doc.is_empty() {
            continue;
        }
        documents += 1;
        let lex = Lexicon::build(doc);
        let m = TermMatrix::build(doc, &lex);
        let table = MetricTable::generic(&m, doc);
        let norm = NormalizedTable::from_metrics(&table);
        for (k, metric) in Metric::ALL.iter().enumerate() {
            debug_assert_eq!(norm.metrics[k], *metric);
            pooled[k].extend_from_slice(&norm.values[k]);
        }
        for score in decide(&norm)? {
            decisions.push(score.a);
        }
    }
    if decisions.is_empty() {
        return Err(CortexError::EmptyCorpus);
    }
    Ok(SensitivityReport {
        per_metric: Metric::ALL
            .iter()
            .enumerate()
            .map(|(k, &metric)| (metric, MetricStats::from_values(&pooled[k])))
            .collect(),
        decision: MetricStats::from_values(&decisions),
        documents,
        sentences: decisions.len(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShuffleReport {
    pub passed: bool,
    /// Position each shuffled sentence came from.
    pub permutation: Vec<usize>,
    pub mismatch: Option<String>,
}

/// Scores a document twice, once with its sentences shuffled, and
/// checks that every sentence keeps the exact same decision score.
/// Bit-for-bit: term ids are assigned by term order, not arrival
/// order, so no float may move. Extract membership follows for
/// tie-free scores; when distinct sentences tie exactly, which of
/// them is kept depends on position by design.
pub fn shuffle_test(doc: &PreprocessedDocument, seed: u64) -> Result<ShuffleReport, CortexError> {
    let n = doc.sentences.len();
    let permutation = SplitMix64::new(seed).permutation(n);
    if n < 2 {
        return Ok(ShuffleReport {
            passed: true,
            permutation,
            mismatch: None,
        });
    }
    let shuffled = doc.permuted(&permutation);

    let base = score_generic(doc)?;
    let moved = score_generic(&shuffled)?;
    let mut base_pairs: Vec<(&str, u64)> = doc
        .raw_sentences
        .iter()
        .zip(&base)
        .map(|(text, s)| (text.as_str(), s.a.to_bits()))
        .collect();
    let mut moved_pairs: Vec<(&str, u64)> = shuffled
        .raw_sentences
        .iter()
        .zip(&moved)
        .map(|(text, s)| (text.as_str(), s.a.to_bits()))
        .collect();
    base_pairs.sort();
    moved_pairs.sort();
    for (b, m) in base_pairs.iter().zip(&moved_pairs) {
        if b != m {
            return Ok(ShuffleReport {
                passed: false,
                permutation,
                mismatch: Some(format!(
                    "score multiset differs: {:?} vs {:?}",
                    b, m
                )),
            });
        }
    }
    Ok(ShuffleReport {
        passed: true,
        permutation,
        mismatch: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testkit;
    use alloc::string::ToString;
    use alloc::vec;

    fn record(id: &str, confidence: f64, correct: bool) -> AnswerRecord {
        AnswerRecord {
            question_id: id.to_string(),
            confidence,
            correct,
        }
    }

    #[test]
    fn cws_of_all_correct_is_one() {
        let records = vec![
            record("q1", 0.9, true),
            record("q2", 0.4, true),
            record("q3", 0.6, true),
        ];
        assert_eq!(cws(&records).unwrap(), 1.0);
    }

    #[test]
    fn cws_ranks_by_confidence() {
        // Ranked: correct, wrong, correct -> (1 + 1/2 + 2/3) / 3.
        let records = vec![
            record("q2", 0.8, false),
            record("q3", 0.7, true),
            record("q1", 0.9, true),
        ];
        assert!((cws(&records).unwrap() - 13.0 / 18.0).abs() < 1e-12);
    }

    #[test]
    fn cws_breaks_confidence_ties_by_question_id() {
        let forward = vec![record("a", 0.5, true), record("b", 0.5, false)];
        let backward = vec![record("b", 0.5, false), record("a", 0.5, true)];
        let expected = (1.0 + 0.5) / 2.0;
        assert_eq!(cws(&forward).unwrap(), expected);
        assert_eq!(cws(&backward).unwrap(), expected);
    }

    #[test]
    fn cws_needs_at_least_one_answer() {
        assert!(matches!(cws(&[]), Err(CortexError::NoAnswers)));
    }

    #[test]
    fn quality_counts_only_shared_sentences() {
        let reference = ReferenceExtract {
            weights: vec![0.2, 0.8, 0.6],
            selected: [1, 2].into_iter().collect(),
        };
        let extract: BTreeSet<usize> = [0, 1].into_iter().collect();
        let score = quality(&extract, &reference);
        assert!((score.raw - 0.8).abs() < 1e-12);
        assert!((score.normalized - 0.8 / 1.4).abs() < 1e-12);
    }

    #[test]
    fn quality_of_weightless_reference_is_zero() {
        let reference = ReferenceExtract {
            weights: vec![0.0, 0.0],
            selected: [0].into_iter().collect(),
        };
        let extract: BTreeSet<usize> = [0].into_iter().collect();
        let score = quality(&extract, &reference);
        assert_eq!(score.raw, 0.0);
        assert_eq!(score.normalized, 0.0);
    }

    #[test]
    fn precision_recall_counts_overlap() {
        let extract: BTreeSet<usize> = [0, 1, 2].into_iter().collect();
        let reference: BTreeSet<usize> = [1, 2, 3].into_iter().collect();
        let pr = precision_recall(&extract, &reference).unwrap();
        assert!((pr.precision - 2.0 / 3.0).abs() < 1e-12);
        assert!((pr.recall - 2.0 / 3.0).abs() < 1e-12);
        assert!(!pr.empty_extract);
    }

    #[test]
    fn empty_extract_is_flagged_not_an_error() {
        let reference: BTreeSet<usize> = [0].into_iter().collect();
        let pr = precision_recall(&BTreeSet::new(), &reference).unwrap();
        assert_eq!(pr.precision, 0.0);
        assert_eq!(pr.recall, 0.0);
        assert!(pr.empty_extract);
    }

    #[test]
    fn empty_reference_is_an_error() {
        let extract: BTreeSet<usize> = [0].into_iter().collect();
        assert!(matches!(
            precision_recall(&extract, &BTreeSet::new()),
            Err(CortexError::EmptyReference)
        ));
    }

    #[test]
    fn kappa_splits_around_one_half() {
        let stats = MetricStats::from_values(&[0.8, 0.9, 0.2]);
        assert_eq!(stats.count, 3);
        assert!((stats.kappa_plus.unwrap() - 0.85).abs() < 1e-12);
        assert!((stats.kappa_minus.unwrap() - 0.2).abs() < 1e-12);
        assert!((stats.advantaged_fraction - 2.0 / 3.0).abs() < 1e-12);
        assert!((stats.disadvantaged_fraction - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn kappa_sides_vanish_when_empty() {
        let stats = MetricStats::from_values(&[0.5, 0.5]);
        assert!(stats.kappa_plus.is_none());
        assert!(stats.kappa_minus.is_none());
        assert_eq!(stats.advantaged_fraction, 0.0);
    }

    #[test]
    fn histogram_covers_the_unit_interval() {
        let stats = MetricStats::from_values(&[0.0, 0.05, 0.55, 1.0]);
        assert_eq!(stats.histogram[0], 2);
        assert_eq!(stats.histogram[5], 1);
        assert_eq!(stats.histogram[9], 1);
        assert_eq!(stats.histogram.iter().sum::<u32>(), 4);
    }

    #[test]
    fn sensitivity_pools_every_sentence() {
        let docs = vec![testkit::worked_example(), testkit::worked_example()];
        let report = sensitivity(&docs).unwrap();
        assert_eq!(report.documents, 2);
        assert_eq!(report.sentences, 6);
        assert_eq!(report.per_metric.len(), 10);
        for (_, stats) in &report.per_metric {
            assert_eq!(stats.count, 6);
        }
        assert_eq!(report.decision.count, 6);
    }

    #[test]
    fn sensitivity_needs_sentences() {
        assert!(matches!(sensitivity(&[]), Err(CortexError::EmptyCorpus)));
        let empty = testkit::doc(&[], &[]);
        assert!(matches!(
            sensitivity(&[empty]),
            Err(CortexError::EmptyCorpus)
        ));
    }

    #[test]
    fn shuffling_never_moves_a_score() {
        let doc = testkit::doc(
            &[
                &["a", "b", "b"],
                &["c", "a"],
                &["b", "c", "c", "d"],
                &["d", "a", "a"],
                &["c", "b", "a"],
            ],
            &[&["a", "d"]],
        );
        for seed in 0..20 {
            let report = shuffle_test(&doc, seed).unwrap();
            assert!(report.passed, "seed {}: {:?}", seed, report.mismatch);
        }
    }

    #[test]
    fn single_sentence_shuffle_is_trivially_stable() {
        let doc = testkit::doc(&[&["a", "a"]], &[]);
        assert!(shuffle_test(&doc, 7).unwrap().passed);
    }
}
