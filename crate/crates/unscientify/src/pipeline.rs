//! The three-stage annotation workflow: pattern matching, cancellation
//! checking, and authorial-reference classification.
//!
//! Cancellation is clause-local: a rebuttal or confirmation span cancels an
//! SU span only when both touch a common clause, so a contrastive sentence
//! can assert certainty in one clause while staying uncertain in another.
//! Authorial classification runs only on sentences that remain SU.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::authorial::{detect_citations, detect_self_reference, SelfRefKind};
use crate::matcher::{match_sentence, resolve_overlaps, SpanMatch};
use crate::rules::{CompiledAuthorialLexicon, CompiledRuleSet, SpanLabel};
use crate::text::{clause_segments, AuthorialRef, Document, Sentence, SuGroup};

/// Sentence-level verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SuLabel {
    #[serde(rename = "SU")]
    Su,
    #[serde(rename = "NonSU")]
    NonSu,
}

impl SuLabel {
    pub fn name(&self) -> &'static str {
        match self {
            SuLabel::Su => "SU",
            SuLabel::NonSu => "NonSU",
        }
    }
}

/// An SU span together with the cancellation span that neutralized it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CancelledSpan {
    pub span: SpanMatch,
    pub by: SpanMatch,
}

/// The final annotation for one sentence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SentenceAnnotation {
    pub sentence_index: usize,
    pub su_label: SuLabel,
    /// Surviving SU spans; non-empty exactly when `su_label` is `Su`.
    pub final_spans: Vec<SpanMatch>,
    pub cancelled: Vec<CancelledSpan>,
    /// Present exactly when the sentence is SU.
    pub authorial: Option<AuthorialRef>,
    /// One line per final span, one per cancellation, plus one authorial
    /// line on SU sentences.
    pub explanation: Vec<String>,
}

/// Aggregate counts for a document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub sentences: usize,
    pub su_sentences: usize,
    pub non_su_sentences: usize,
    /// Final span counts keyed by group name.
    pub group_spans: BTreeMap<String, usize>,
    /// SU sentence counts keyed by authorial label.
    pub authorial_sentences: BTreeMap<String, usize>,
}

impl Summary {
    pub fn from_annotations(annotations: &[SentenceAnnotation]) -> Summary {
        let mut group_spans = BTreeMap::new();
        let mut authorial_sentences = BTreeMap::new();
        let mut su_sentences = 0;
        for a in annotations {
            if a.su_label == SuLabel::Su {
                su_sentences += 1;
            }
            for span in &a.final_spans {
                if let SpanLabel::Group(g) = span.label {
                    *group_spans.entry(g.name().to_string()).or_insert(0) += 1;
                }
            }
            if let Some(auth) = a.authorial {
                *authorial_sentences
                    .entry(auth.name().to_string())
                    .or_insert(0) += 1;
            }
        }
        Summary {
            sentences: annotations.len(),
            su_sentences,
            non_su_sentences: annotations.len() - su_sentences,
            group_spans,
            authorial_sentences,
        }
    }
}

/// Per-document annotation output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnotationReport {
    pub document_id: String,
    pub ruleset_version: String,
    pub annotations: Vec<SentenceAnnotation>,
    pub summary: Summary,
}

/// Split resolved matches into SU spans and cancellation spans.
fn partition_matches(resolved: Vec<SpanMatch>) -> (Vec<SpanMatch>, Vec<SpanMatch>) {
    resolved
        .into_iter()
        .partition(|m| matches!(m.label, SpanLabel::Group(_)))
}

/// Apply clause-scoped cancellation. An SU span is cancelled exactly when
/// some cancellation span touches one of the clauses the SU span touches.
/// Cancellation never adds spans; `kept` preserves input order.
pub fn apply_cancellation(
    su_spans: &[SpanMatch],
    cx_spans: &[SpanMatch],
    sentence: &Sentence,
) -> (Vec<SpanMatch>, Vec<CancelledSpan>) {
    if cx_spans.is_empty() || su_spans.is_empty() {
        return (su_spans.to_vec(), Vec::new());
    }
    let clauses = clause_segments(sentence);
    let touching = |span: &SpanMatch, clause: &std::ops::Range<usize>| {
        span.token_start < clause.end && clause.start < span.token_end
    };

    let mut kept = Vec::new();
    let mut cancelled = Vec::new();
    for span in su_spans {
        let canceller = cx_spans.iter().find(|cx| {
            clauses
                .iter()
                .any(|clause| touching(span, clause) && touching(cx, clause))
        });
        match canceller {
            Some(cx) => cancelled.push(CancelledSpan {
                span: span.clone(),
                by: cx.clone(),
            }),
            None => kept.push(span.clone()),
        }
    }
    (kept, cancelled)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Signals {
    previous: bool,
    current: bool,
}

impl Signals {
    fn vote(&self) -> Option<AuthorialRef> {
        match (self.previous, self.current) {
            (true, true) => Some(AuthorialRef::Both),
            (true, false) => Some(AuthorialRef::PreviousStudy),
            (false, true) => Some(AuthorialRef::CurrentAuthors),
            (false, false) => None,
        }
    }
}

/// Classify who an SU sentence's uncertainty belongs to.
///
/// Each kept span votes based on the clause(s) it touches: a citation marker
/// or previous-study phrase votes for earlier work, a first-person or
/// present-study marker votes for the current authors, and both kinds
/// together vote "both". A span whose clauses carry no signal falls back to
/// sentence-level signals; with no signal anywhere the claim is treated as
/// the authors' own voice. Disagreeing span votes resolve to `Both`.
pub fn classify_authorial(
    sentence: &Sentence,
    kept: &[SpanMatch],
    lexicon: &CompiledAuthorialLexicon,
) -> AuthorialRef {
    debug_assert!(!kept.is_empty(), "authorial runs on SU sentences only");
    let clauses = clause_segments(sentence);
    let citations = detect_citations(sentence, &lexicon.citation_regexes);
    let self_refs = detect_self_reference(sentence, lexicon);

    let clause_signals: Vec<Signals> = clauses
        .iter()
        .map(|clause| {
            let char_range = sentence.char_range_of(clause);
            let previous = citations
                .iter()
                .any(|c| c.char_start < char_range.end && char_range.start < c.char_end)
                || self_refs.iter().any(|m| {
                    m.kind == SelfRefKind::PreviousStudy
                        && m.token_start < clause.end
                        && clause.start < m.token_end
                });
            let current = self_refs.iter().any(|m| {
                matches!(m.kind, SelfRefKind::FirstPerson | SelfRefKind::PresentStudy)
                    && m.token_start < clause.end
                    && clause.start < m.token_end
            });
            Signals { previous, current }
        })
        .collect();

    let sentence_signals = Signals {
        previous: clause_signals.iter().any(|s| s.previous),
        current: clause_signals.iter().any(|s| s.current),
    };

    let mut votes = Vec::with_capacity(kept.len());
    for span in kept {
        let merged = clauses.iter().zip(&clause_signals).fold(
            Signals {
                previous: false,
                current: false,
            },
            |acc, (clause, signals)| {
                if span.token_start < clause.end && clause.start < span.token_end {
                    Signals {
                        previous: acc.previous || signals.previous,
                        current: acc.current || signals.current,
                    }
                } else {
                    acc
                }
            },
        );
        let vote = merged
            .vote()
            .or_else(|| sentence_signals.vote())
            .unwrap_or(AuthorialRef::CurrentAuthors);
        votes.push(vote);
    }

    let first = votes[0];
    if votes.iter().all(|v| *v == first) {
        first
    } else {
        AuthorialRef::Both
    }
}

fn group_of(span: &SpanMatch) -> Option<SuGroup> {
    match span.label {
        SpanLabel::Group(g) => Some(g),
        SpanLabel::Cancellation(_) => None,
    }
}

fn build_explanation(
    final_spans: &[SpanMatch],
    cancelled: &[CancelledSpan],
    authorial: Option<AuthorialRef>,
) -> Vec<String> {
    let mut lines = Vec::with_capacity(final_spans.len() + cancelled.len() + 1);
    for span in final_spans {
        if let Some(group) = group_of(span) {
            lines.push(format!(
                "SU span \"{}\" [{} / {}]: {}",
                span.matched_text,
                group.name(),
                span.pattern_id,
                group.description()
            ));
        }
    }
    for c in cancelled {
        let kind = match c.by.label {
            SpanLabel::Cancellation(k) => k.name(),
            SpanLabel::Group(_) => "cancellation",
        };
        lines.push(format!(
            "span \"{}\" [{}] cancelled by {} \"{}\" ({})",
            c.span.matched_text,
            c.span.label.name(),
            kind,
            c.by.matched_text,
            c.by.pattern_id
        ));
    }
    if let Some(auth) = authorial {
        let owner = match auth {
            AuthorialRef::CurrentAuthors => "the current authors",
            AuthorialRef::PreviousStudy => "a previous study",
            AuthorialRef::Both => "both the current authors and previous work",
        };
        lines.push(format!("authorial reference: {} ({})", auth.name(), owner));
    }
    lines
}

/// Annotate one sentence: match, resolve overlaps, cancel, classify.
pub fn annotate_sentence(crs: &CompiledRuleSet, sentence: &Sentence) -> SentenceAnnotation {
    let matches = match_sentence(crs, sentence);
    let resolved = resolve_overlaps(&matches);
    let (su_spans, cx_spans) = partition_matches(resolved);
    let (kept, cancelled) = apply_cancellation(&su_spans, &cx_spans, sentence);

    let su_label = if kept.is_empty() {
        SuLabel::NonSu
    } else {
        SuLabel::Su
    };
    let authorial = match su_label {
        SuLabel::Su => Some(classify_authorial(sentence, &kept, &crs.authorial)),
        SuLabel::NonSu => None,
    };
    let explanation = build_explanation(&kept, &cancelled, authorial);

    SentenceAnnotation {
        sentence_index: sentence.doc_index,
        su_label,
        final_spans: kept,
        cancelled,
        authorial,
        explanation,
    }
}

/// Annotate every sentence of a document, in order.
pub fn annotate_document(crs: &CompiledRuleSet, doc: &Document) -> AnnotationReport {
    let annotations: Vec<SentenceAnnotation> = doc
        .sentences
        .iter()
        .map(|s| annotate_sentence(crs, s))
        .collect();
    report_from(crs, doc, annotations)
}

/// Annotate sentences on the rayon thread pool. Output order and content
/// are identical to [`annotate_document`].
pub fn annotate_document_parallel(crs: &CompiledRuleSet, doc: &Document) -> AnnotationReport {
    let annotations: Vec<SentenceAnnotation> = doc
        .sentences
        .par_iter()
        .map(|s| annotate_sentence(crs, s))
        .collect();
    report_from(crs, doc, annotations)
}

fn report_from(
    crs: &CompiledRuleSet,
    doc: &Document,
    annotations: Vec<SentenceAnnotation>,
) -> AnnotationReport {
    AnnotationReport {
        document_id: doc.id.clone(),
        ruleset_version: crs.version.clone(),
        summary: Summary::from_annotations(&annotations),
        annotations,
    }
}
