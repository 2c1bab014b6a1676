//! Min-max normalization, the voting decision rule, and extract
//! selection at a compression rate.

use alloc::vec::Vec;

use crate::error::CortexError;
use crate::metrics::{Metric, MetricTable};
use crate::pipeline::PreprocessedDocument;

/// Per-metric values rescaled to [0, 1] over the sentences. A metric
/// that is constant across the document normalizes to a flat 0.5,
/// which the decision rule ignores.
#[derive(Debug, Clone)]
pub struct NormalizedTable {
    pub metrics: Vec<Metric>,
    /// values[k][mu], all in [0, 1].
    pub values: Vec<Vec<f64>>,
}

/// Min-max rescale one metric's sentence values.
pub fn normalize(raw: &[f64]) -> Vec<f64> {
    if raw.is_empty() {
        return Vec::new();
    }
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    for &v in raw {
        min = min.min(v);
        max = max.max(v);
    }
    if max == min {
        return alloc::vec![0.5; raw.len()];
    }
    let span = max - min;
    raw.iter().map(|&v| (v - min) / span).collect()
}

impl NormalizedTable {
    pub fn from_metrics(table: &MetricTable) -> NormalizedTable {
        NormalizedTable {
            metrics: table.metrics.clone(),
            values: table.values.iter().map(|row| normalize(row)).collect(),
        }
    }

    pub fn gamma_count(&self) -> usize {
        self.metrics.len()
    }

    pub fn n_sentences(&self) -> usize {
        self.values.first().map_or(0, |row| row.len())
    }
}

/// One sentence's combined vote.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecisionScore {
    pub a: f64,
    /// True when the advantage mass beat the disadvantage mass.
    pub advantaged: bool,
}

/// Combine the normalized metrics into one score per sentence.
///
/// Each metric votes with its distance from 0.5; values exactly at
/// 0.5 abstain. The larger camp wins and shifts the score from 0.5 by
/// its mass over the full metric count, so A stays in [0, 1]. An even
/// split counts as a loss: neutrality is penalized.
pub fn decide(norm: &NormalizedTable) -> Result<Vec<DecisionScore>, CortexError> {
    let gamma = norm.gamma_count();
    if gamma == 0 {
        return Err(CortexError::NoMetrics);
    }
    let n = norm.n_sentences();
    let mut out = Vec::with_capacity(n);
    for mu in 0..n {
        let mut advantage = 0.0;
        let mut disadvantage = 0.0;
        for row in &norm.values {
            let v = row[mu];
            if v > 0.5 {
                advantage += v - 0.5;
            } else if v < 0.5 {
                disadvantage += 0.5 - v;
            }
        }
        let advantaged = advantage > disadvantage;
        let a = if advantaged {
            0.5 + advantage / gamma as f64
        } else {
            0.5 - disadvantage / gamma as f64
        };
        out.push(DecisionScore { a, advantaged });
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompressionUnit {
    Sentences,
    Words,
}

/// Requested extract size: a percentage of the document's sentences
/// or of its raw words.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CompressionSpec {
    pub tau: u32,
    pub unit: CompressionUnit,
}

impl CompressionSpec {
    pub fn new(tau: u32, unit: CompressionUnit) -> Result<CompressionSpec, CortexError> {
        if tau == 0 || tau > 100 {
            return Err(CortexError::InvalidCompression(tau));
        }
        Ok(CompressionSpec { tau, unit })
    }

    pub fn sentences(tau: u32) -> Result<CompressionSpec, CortexError> {
        Self::new(tau, CompressionUnit::Sentences)
    }
}

/// Sentence indices ordered by score descending, position ascending on
/// ties. Deterministic for equal inputs.
pub fn ranked_indices(scores: &[DecisionScore]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| {
        scores[b]
            .a
            .total_cmp(&scores[a].a)
            .then_with(|| a.cmp(&b))
    });
    order
}

/// Pick the extract at the requested compression rate. The result
/// lists sentence indices in document order.
pub fn select(
    scores: &[DecisionScore],
    doc: &PreprocessedDocument,
    spec: CompressionSpec,
) -> Vec<usize> {
    let n = scores.len();
    debug_assert_eq!(n, doc.sentences.len());
    if n == 0 {
        return Vec::new();
    }
    let order = ranked_indices(scores);
    let tau = spec.tau as u64;

    let mut chosen: Vec<usize> = match spec.unit {
        CompressionUnit::Sentences => {
            // Round half up, floor at one sentence.
            let count = ((tau * n as u64 + 50) / 100).max(1).min(n as u64) as usize;
            order[..count].to_vec()
        }
        CompressionUnit::Words => {
            let budget = tau * doc.counts.raw_words as u64;
            let mut words = 0u64;
            let mut take = Vec::new();
            for &idx in &order {
                if !take.is_empty() && words * 100 >= budget {
                    break;
                }
                take.push(idx);
                words += doc.sentence_word_count(idx) as u64;
            }
            take
        }
    };
    chosen.sort_unstable();
    chosen
}
