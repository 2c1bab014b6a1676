//! Statistical sentence extraction over term–sentence matrices.
//!
//! The engine turns a document into a sparse term–sentence frequency
//! matrix, scores every sentence with a family of frequency, entropy
//! and Hamming metrics, combines the normalized scores through a
//! voting decision algorithm, and selects an extract at a requested
//! compression rate. A query mode substitutes an expanded question
//! vector for the title reference to produce question-biased
//! multi-document extracts, and the evaluation module covers
//! confidence-weighted scoring, precision/recall against reference
//! extracts, and per-metric sensitivity statistics.
//!
//! The crate is `no_std` + `alloc`: everything here is pure
//! computation over in-memory data. IO, resource files, and output
//! formats live in the companion CLI crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod decision;
pub mod error;
pub mod eval;
pub mod lexicon;
pub mod matrix;
pub mod metrics;
pub mod pipeline;
pub mod query;
pub mod retrieval;
pub mod rng;
pub mod summarizer;

#[cfg(test)]
mod testkit;

pub use decision::{CompressionSpec, CompressionUnit, DecisionScore, NormalizedTable};
pub use error::CortexError;
pub use eval::{
    AnswerRecord, MetricStats, PrecisionRecall, QualityScore, ReferenceExtract,
    SensitivityReport, ShuffleReport,
};
pub use lexicon::Lexicon;
pub use matrix::TermMatrix;
pub use metrics::{Metric, MetricTable};
pub use pipeline::{PipelineConfig, PreprocessedDocument, RawDocument};
pub use query::{Query, Thesaurus};
pub use retrieval::{RankedSentence, SentenceIndex};
pub use summarizer::{
    rerank_global, score_generic, summarize_generic, summarize_personalized, Summary,
    SummaryEntry, SummaryMode,
};
