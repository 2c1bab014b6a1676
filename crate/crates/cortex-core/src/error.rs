//! Error type shared by the engine modules.

use alloc::string::String;
use core::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CortexError {
    /// Lexical ratio requested for a document with no raw words.
    NoRawWords,
    /// Decision algorithm invoked with an empty metric set.
    NoMetrics,
    /// Question reduced to nothing by filtering; no searchable content.
    EmptyQuery,
    /// Retrieval index or corpus statistics requested over no data.
    EmptyCorpus,
    /// Precision/recall against an empty reference extract.
    EmptyReference,
    /// Confidence-weighted score over an empty answer list.
    NoAnswers,
    /// Compression rate outside (0, 100].
    InvalidCompression(u32),
    /// Pipeline configuration failed validation.
    InvalidConfig(String),
    /// Document body was empty after trimming.
    EmptyDocument,
}

impl fmt::Display for CortexError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CortexError::NoRawWords => write!(f, "lexical ratio is undefined: document has no raw words"),
            CortexError::NoMetrics => write!(f, "decision algorithm needs at least one metric"),
            CortexError::EmptyQuery => write!(f, "question has no searchable terms after filtering"),
            CortexError::EmptyCorpus => write!(f, "operation requires a non-empty corpus"),
            CortexError::EmptyReference => write!(f, "reference extract is empty"),
            CortexError::NoAnswers => write!(f, "confidence-weighted score needs at least one answer record"),
            CortexError::InvalidCompression(tau) => {
                write!(f, "compression rate {tau} is outside (0, 100]")
            }
            CortexError::InvalidConfig(msg) => write!(f, "invalid pipeline configuration: {msg}"),
            CortexError::EmptyDocument => write!(f, "document body is empty"),
        }
    }
}

impl core::error::Error for CortexError {}
