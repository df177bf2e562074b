//! Build [`Document`]s from CoNLL-U files or raw plain text.
//!
//! CoNLL-U is the tagged-input contract: any external tagger that writes the
//! 10-column format can feed the engine. Plain-text mode is a degraded path
//! that ships its own splitter and a small heuristic tagger, good enough for
//! the mostly lexical builtin rules but documented as lossy.

mod conllu;
mod plain;

use std::collections::BTreeSet;

pub use conllu::{parse_conllu, serialize_conllu};
pub use plain::ingest_plain;

use crate::error::IngestError;
use crate::text::Document;

/// Configuration for ingestion.
#[derive(Debug, Clone)]
pub struct IngestConfig {
    pub mode: IngestMode,
    /// Abbreviations that suppress a sentence split after their trailing
    /// period. Every entry must end with `'.'`.
    pub abbreviations: BTreeSet<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IngestMode {
    Conllu,
    Plain,
}

impl Default for IngestConfig {
    fn default() -> Self {
        IngestConfig {
            mode: IngestMode::Plain,
            abbreviations: default_abbreviations(),
        }
    }
}

impl IngestConfig {
    pub fn conllu() -> Self {
        IngestConfig {
            mode: IngestMode::Conllu,
            ..IngestConfig::default()
        }
    }
}

fn default_abbreviations() -> BTreeSet<String> {
    [
        "e.g.", "i.e.", "et al.", "etc.", "Fig.", "Figs.", "cf.", "vs.", "Dr.", "No.", "Eq.",
        "Ref.", "Refs.", "Tab.", "approx.", "resp.",
    ]
    .into_iter()
    .map(String::from)
    .collect()
}

/// Ingest `content` according to `config.mode`.
pub fn ingest(content: &str, config: &IngestConfig) -> Result<Document, IngestError> {
    match config.mode {
        IngestMode::Conllu => parse_conllu(content),
        IngestMode::Plain => Ok(ingest_plain(content, config)),
    }
}
