//! Error types for ingestion and rule handling.

use thiserror::Error;

/// Errors raised while building documents from input text.
#[derive(Debug, Error)]
pub enum IngestError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("no sentences in input")]
    NoSentences,
}

impl IngestError {
    pub fn malformed(line: usize, message: impl Into<String>) -> Self {
        IngestError::Malformed {
            line,
            message: message.into(),
        }
    }
}

/// Errors raised while parsing or compiling rule files. Each variant carries
/// a distinct diagnostic code (see [`RuleError::code`]).
#[derive(Debug, Error)]
pub enum RuleError {
    #[error("rule file is not valid JSON: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("duplicate pattern id {0:?}")]
    DuplicateId(String),
    #[error("unknown group name {0:?}")]
    UnknownGroup(String),
    #[error("unknown cancellation kind {0:?} (expected \"rebuttal\" or \"confirmation\")")]
    UnknownKind(String),
    #[error("pattern {pattern_id:?}: invalid regex {source_text:?}: {message}")]
    InvalidRegex {
        pattern_id: String,
        source_text: String,
        message: String,
    },
    #[error("unknown key {key:?} in {context}")]
    UnknownKey { key: String, context: String },
    #[error("pattern {pattern_id:?}: token constraint {index} has no predicate and no quantifier")]
    MissingPredicate { pattern_id: String, index: usize },
    #[error("pattern {pattern_id:?} has no token constraints")]
    EmptyPattern { pattern_id: String },
    #[error("pattern {pattern_id:?} has no required constraint and could match an empty span")]
    NoRequiredConstraint { pattern_id: String },
    #[error("invalid value for {context}: {message}")]
    InvalidValue { context: String, message: String },
    #[error("ruleset version must be non-empty")]
    EmptyVersion,
}

impl RuleError {
    /// Stable diagnostic code for programmatic handling.
    pub fn code(&self) -> &'static str {
        match self {
            RuleError::Syntax(_) => "SYNTAX",
            RuleError::DuplicateId(_) => "DUPLICATE_ID",
            RuleError::UnknownGroup(_) => "UNKNOWN_GROUP",
            RuleError::UnknownKind(_) => "UNKNOWN_KIND",
            RuleError::InvalidRegex { .. } => "INVALID_REGEX",
            RuleError::UnknownKey { .. } => "UNKNOWN_KEY",
            RuleError::MissingPredicate { .. } => "MISSING_PREDICATE",
            RuleError::EmptyPattern { .. } => "EMPTY_PATTERN",
            RuleError::NoRequiredConstraint { .. } => "NO_REQUIRED_CONSTRAINT",
            RuleError::InvalidValue { .. } => "INVALID_VALUE",
            RuleError::EmptyVersion => "EMPTY_VERSION",
        }
    }
}
