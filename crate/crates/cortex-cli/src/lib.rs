//! Batch front end for the extraction engine: corpus ingestion,
//! bundled language resources, question answering, reports.

pub mod app;
pub mod input;
pub mod parallel;
pub mod qaas;
pub mod render;
pub mod resources;
