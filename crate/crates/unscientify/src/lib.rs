//! unscientify: a sentence-level scientific-uncertainty annotation engine.
//!
//! The engine runs a three-stage workflow over tagged or plain text:
//!
//! 1. **Pattern matching** — declarative token patterns from twelve
//!    uncertainty groups produce candidate spans.
//! 2. **Cancellation checking** — rebuttal and confirmation statements in
//!    the same clause neutralize candidate spans; a sentence with no
//!    surviving span is labeled Non-SU.
//! 3. **Authorial reference checking** — surviving uncertainty is
//!    attributed to the current authors, a previous study, or both, using
//!    citation markers and self-reference phrases.
//!
//! ```
//! use unscientify::builtin::builtin_compiled;
//! use unscientify::ingest::{ingest_plain, IngestConfig};
//! use unscientify::pipeline::annotate_document;
//!
//! let doc = ingest_plain("The mechanism may vary.", &IngestConfig::default());
//! let report = annotate_document(builtin_compiled(), &doc);
//! assert_eq!(report.summary.su_sentences, 1);
//! ```

pub mod authorial;
pub mod builtin;
pub mod error;
pub mod eval;
pub mod ingest;
pub mod matcher;
pub mod output;
pub mod pipeline;
pub mod rules;
pub mod text;

pub use builtin::{builtin_compiled, builtin_ruleset};
pub use error::{IngestError, RuleError};
pub use matcher::{match_sentence, resolve_overlaps, SpanMatch};
pub use pipeline::{
    annotate_document, annotate_document_parallel, annotate_sentence, AnnotationReport,
    SentenceAnnotation, SuLabel,
};
pub use rules::{
    compile_ruleset, parse_ruleset, serialize_ruleset, validate_ruleset, CompiledRuleSet, RuleSet,
};
pub use text::{AuthorialRef, Document, Sentence, SuGroup, Token};
