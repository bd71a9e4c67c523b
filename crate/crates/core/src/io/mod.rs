//! Ingestion, configuration, and deterministic emission.

pub mod config;
pub mod plan;
pub mod project;
pub mod records;
pub mod svg;
