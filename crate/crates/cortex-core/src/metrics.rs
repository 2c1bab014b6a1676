//! Per-sentence scoring metrics over a TermMatrix.
//!
//! Every metric is a function of the frequency rows, the presence
//! rows, and a handful of shared column statistics (p, psi, the
//! Hamming matrix). Nothing here looks at sentence position, which is
//! what makes the final decision order-independent.

use alloc::vec::Vec;
use libm::{log2, sqrt};

use crate::matrix::TermMatrix;
use crate::pipeline::PreprocessedDocument;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Metric {
    /// F: occurrences of relevant terms in the sentence.
    Frequency,
    /// I: presence links from the sentence's terms to other sentences.
    Interactivity,
    /// Delta: frequency row weighted by the term probabilities p.
    WeightedFrequency,
    /// E: entropy mass of the terms present in the sentence.
    Entropy,
    /// Psi: Hamming matrix summed over the sentence's term pairs.
    HammingPairs,
    /// phi: number of distinct relevant terms present.
    TermCount,
    /// Theta: total presence count psi_i of the sentence's terms.
    PresenceSum,
    /// Pi: phi * Theta.
    PresenceProduct,
    /// Omega: frequency row weighted by the presence counts psi.
    PresenceWeightedFrequency,
    /// theta: cosine between the sentence vector and a reference
    /// vector (title row or query).
    TitleAngle,
}

impl Metric {
    pub const ALL: [Metric; 10] = [
        Metric::Frequency,
        Metric::Interactivity,
        Metric::WeightedFrequency,
        Metric::Entropy,
        Metric::HammingPairs,
        Metric::TermCount,
        Metric::PresenceSum,
        Metric::PresenceProduct,
        Metric::PresenceWeightedFrequency,
        Metric::TitleAngle,
    ];

    /// Column label in reports and CSV dumps.
    pub fn label(self) -> &'static str {
        match self {
            Metric::Frequency => "F",
            Metric::Interactivity => "I",
            Metric::WeightedFrequency => "Delta",
            Metric::Entropy => "E",
            Metric::HammingPairs => "Psi",
            Metric::TermCount => "Phi",
            Metric::PresenceSum => "Theta",
            Metric::PresenceProduct => "Pi",
            Metric::PresenceWeightedFrequency => "Omega",
            Metric::TitleAngle => "Angle",
        }
    }
}

/// Lower-triangular term-pair matrix: entry (m, n) with n < m counts
/// the sentences containing exactly one of the two terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HammingMatrix {
    n_terms: usize,
    tri: Vec<u32>,
}

impl HammingMatrix {
    pub fn n_terms(&self) -> usize {
        self.n_terms
    }

    /// Symmetric accessor; the diagonal is zero.
    pub fn get(&self, m: usize, n: usize) -> u32 {
        if m == n {
            return 0;
        }
        let (hi, lo) = if m > n { (m, n) } else { (n, m) };
        self.tri[hi * (hi - 1) / 2 + lo]
    }
}

/// Count differing presence bits per term pair via XOR over packed
/// sentence bitsets. Quadratic in N_L, linear in N_S per pair.
pub fn hamming_matrix(m: &TermMatrix) -> HammingMatrix {
    let words = m.n_sentences.div_ceil(64);
    let mut bits = alloc::vec![0u64; m.n_terms * words];
    for (s, present) in m.presence.iter().enumerate() {
        for &i in present {
            bits[i as usize * words + s / 64] |= 1u64 << (s % 64);
        }
    }
    let mut tri = Vec::with_capacity(m.n_terms * m.n_terms.saturating_sub(1) / 2);
    for hi in 1..m.n_terms {
        let hi_bits = &bits[hi * words..(hi + 1) * words];
        for lo in 0..hi {
            let lo_bits = &bits[lo * words..(lo + 1) * words];
            let mut diff = 0u32;
            for w in 0..words {
                diff += (hi_bits[w] ^ lo_bits[w]).count_ones();
            }
            tri.push(diff);
        }
    }
    HammingMatrix {
        n_terms: m.n_terms,
        tri,
    }
}

/// p_i: each column's share of the total term mass T.
pub fn term_probabilities(m: &TermMatrix) -> Vec<f64> {
    let totals = m.column_totals();
    if m.total == 0 {
        return alloc::vec![0.0; m.n_terms];
    }
    let t = m.total as f64;
    totals.iter().map(|&c| c as f64 / t).collect()
}

/// psi_i: in how many sentences each term appears.
pub fn presence_counts(m: &TermMatrix) -> Vec<u32> {
    let mut psi = alloc::vec![0u32; m.n_terms];
    for present in &m.presence {
        for &i in present {
            psi[i as usize] += 1;
        }
    }
    psi
}

pub struct FrequencyMetrics {
    pub f: Vec<f64>,
    pub delta: Vec<f64>,
    pub entropy: Vec<f64>,
}

/// F, Delta and E per sentence. A document with T = 0 yields zeros.
pub fn frequency_metrics(m: &TermMatrix) -> FrequencyMetrics {
    let p = term_probabilities(m);
    let mut f = Vec::with_capacity(m.n_sentences);
    let mut delta = Vec::with_capacity(m.n_sentences);
    let mut entropy = Vec::with_capacity(m.n_sentences);
    for row in &m.rows {
        let mut sum = 0u64;
        let mut weighted = 0.0;
        let mut ent = 0.0;
        for &(i, c) in row {
            sum += c as u64;
            let pi = p[i as usize];
            weighted += pi * c as f64;
            // c > 0 implies p_i > 0; log2 is safe.
            ent -= pi * log2(pi);
        }
        f.push(sum as f64);
        delta.push(weighted);
        entropy.push(ent);
    }
    FrequencyMetrics { f, delta, entropy }
}

pub struct HammingMetrics {
    pub interactivity: Vec<f64>,
    pub pair_sum: Vec<f64>,
    pub term_count: Vec<f64>,
    pub presence_sum: Vec<f64>,
    pub presence_product: Vec<f64>,
    pub weighted_presence: Vec<f64>,
}

/// The presence-derived metrics I, Psi, phi, Theta, Pi, Omega.
pub fn hamming_metrics(m: &TermMatrix, h: &HammingMatrix) -> HammingMetrics {
    let psi = presence_counts(m);
    let mut out = HammingMetrics {
        interactivity: Vec::with_capacity(m.n_sentences),
        pair_sum: Vec::with_capacity(m.n_sentences),
        term_count: Vec::with_capacity(m.n_sentences),
        presence_sum: Vec::with_capacity(m.n_sentences),
        presence_product: Vec::with_capacity(m.n_sentences),
        weighted_presence: Vec::with_capacity(m.n_sentences),
    };
    for (row, present) in m.rows.iter().zip(&m.presence) {
        let phi = present.len() as u64;
        let mut theta_sum = 0u64;
        let mut inter = 0u64;
        for &i in present {
            let count = psi[i as usize] as u64;
            theta_sum += count;
            // The term links this sentence to every other sentence
            // holding it.
            inter += count - 1;
        }
        let mut pairs = 0u64;
        for (a_pos, &a) in present.iter().enumerate() {
            for &b in &present[..a_pos] {
                pairs += h.get(a as usize, b as usize) as u64;
            }
        }
        let mut omega = 0u64;
        for &(i, c) in row {
            omega += psi[i as usize] as u64 * c as u64;
        }
        out.interactivity.push(inter as f64);
        out.pair_sum.push(pairs as f64);
        out.term_count.push(phi as f64);
        out.presence_sum.push(theta_sum as f64);
        out.presence_product.push((phi * theta_sum) as f64);
        out.weighted_presence.push(omega as f64);
    }
    out
}

/// Cosine of each sentence against one reference vector over the same
/// columns. Zero-norm rows or reference give 0.
pub fn title_angle(m: &TermMatrix, reference: &[f64]) -> Vec<f64> {
    debug_assert_eq!(reference.len(), m.n_terms);
    let ref_norm = sqrt(reference.iter().map(|w| w * w).sum::<f64>());
    m.rows.iter().map(|row| angle_one(row, reference, ref_norm)).collect()
}

fn angle_one(row: &[(u32, u32)], reference: &[f64], ref_norm: f64) -> f64 {
    if ref_norm == 0.0 {
        return 0.0;
    }
    let mut dot = 0.0;
    let mut norm_sq = 0.0;
    for &(i, c) in row {
        let c = c as f64;
        dot += c * reference[i as usize];
        norm_sq += c * c;
    }
    if norm_sq == 0.0 {
        return 0.0;
    }
    let value = dot / (sqrt(norm_sq) * ref_norm);
    value.clamp(0.0, 1.0)
}

/// Raw values of a metric set, one row vector per metric, plus the
/// shared column statistics.
#[derive(Debug, Clone)]
pub struct MetricTable {
    pub metrics: Vec<Metric>,
    /// values[k][mu]: metric k on sentence mu.
    pub values: Vec<Vec<f64>>,
    pub p: Vec<f64>,
    pub psi: Vec<u32>,
}

enum Reference<'a> {
    /// Each sentence measured against its governing title row.
    Titles(&'a PreprocessedDocument),
    /// One external vector (an expanded query) for every sentence.
    External(&'a [f64]),
}

impl MetricTable {
    /// Number of voting metrics.
    pub fn gamma_count(&self) -> usize {
        self.metrics.len()
    }

    pub fn value(&self, metric: Metric, sentence: usize) -> Option<f64> {
        let k = self.metrics.iter().position(|&m| m == metric)?;
        Some(self.values[k][sentence])
    }

    /// All ten metrics, titles as the angle reference.
    pub fn generic(m: &TermMatrix, doc: &PreprocessedDocument) -> MetricTable {
        Self::compute(m, Reference::Titles(doc), &Metric::ALL)
    }

    /// The query-biased pair {F, theta} used by the personalized first
    /// pass.
    pub fn query_biased(m: &TermMatrix, reference: &[f64]) -> MetricTable {
        Self::compute(
            m,
            Reference::External(reference),
            &[Metric::Frequency, Metric::TitleAngle],
        )
    }

    /// All ten metrics against an external reference; the re-ranking
    /// pass runs this over the synthetic document.
    pub fn full_with_reference(m: &TermMatrix, reference: &[f64]) -> MetricTable {
        Self::compute(m, Reference::External(reference), &Metric::ALL)
    }

    fn compute(m: &TermMatrix, reference: Reference<'_>, set: &[Metric]) -> MetricTable {
        let p = term_probabilities(m);
        let psi = presence_counts(m);

        let needs_freq = set.iter().any(|k| {
            matches!(
                k,
                Metric::Frequency | Metric::WeightedFrequency | Metric::Entropy
            )
        });
        let freq = needs_freq.then(|| frequency_metrics(m));

        let needs_hamming = set.iter().any(|k| {
            matches!(
                k,
                Metric::Interactivity
                    | Metric::HammingPairs
                    | Metric::TermCount
                    | Metric::PresenceSum
                    | Metric::PresenceProduct
                    | Metric::PresenceWeightedFrequency
            )
        });
        let ham = needs_hamming.then(|| {
            let h = hamming_matrix(m);
            hamming_metrics(m, &h)
        });

        let angles = set
            .contains(&Metric::TitleAngle)
            .then(|| Self::angles(m, &reference));

        let values = set
            .iter()
            .map(|k| match k {
                Metric::Frequency => freq.as_ref().unwrap().f.clone(),
                Metric::WeightedFrequency => freq.as_ref().unwrap().delta.clone(),
                Metric::Entropy => freq.as_ref().unwrap().entropy.clone(),
                Metric::Interactivity => ham.as_ref().unwrap().interactivity.clone(),
                Metric::HammingPairs => ham.as_ref().unwrap().pair_sum.clone(),
                Metric::TermCount => ham.as_ref().unwrap().term_count.clone(),
                Metric::PresenceSum => ham.as_ref().unwrap().presence_sum.clone(),
                Metric::PresenceProduct => ham.as_ref().unwrap().presence_product.clone(),
                Metric::PresenceWeightedFrequency => {
                    ham.as_ref().unwrap().weighted_presence.clone()
                }
                Metric::TitleAngle => angles.as_ref().unwrap().clone(),
            })
            .collect();

        MetricTable {
            metrics: set.to_vec(),
            values,
            p,
            psi,
        }
    }

    fn angles(m: &TermMatrix, reference: &Reference<'_>) -> Vec<f64> {
        match reference {
            Reference::External(vector) => title_angle(m, vector),
            Reference::Titles(doc) => {
                if m.title_rows.is_empty() {
                    return alloc::vec![0.0; m.n_sentences];
                }
                let dense: Vec<Vec<f64>> = m
                    .title_rows
                    .iter()
                    .map(|row| {
                        let mut v = alloc::vec![0.0; m.n_terms];
                        for &(i, c) in row {
                            v[i as usize] = c as f64;
                        }
                        v
                    })
                    .collect();
                let norms: Vec<f64> = dense
                    .iter()
                    .map(|v| sqrt(v.iter().map(|w| w * w).sum::<f64>()))
                    .collect();
                (0..m.n_sentences)
                    .map(|mu| {
                        let t = doc
                            .sentence_title
                            .get(mu)
                            .copied()
                            .flatten()
                            .filter(|&t| t < dense.len())
                            .unwrap_or(0);
                        angle_one(&m.rows[mu], &dense[t], norms[t])
                    })
                    .collect()
            }
        }
    }
}
