//! The declarative token-pattern language: rule file parsing, validation
//! diagnostics, and compilation into runnable recognizers.
//!
//! A rule file is UTF-8 JSON with top-level keys `version`, `groups`,
//! `cancellations`, and `authorial`. Each pattern is an ordered sequence of
//! token constraints; each constraint conjoins attribute predicates
//! (`TEXT`, `LOWER`, `LEMMA`, `POS`, `MORPH`, `REGEX`) and carries an
//! optional quantifier `OP` of `"?"`, `"*"`, or `"+"`. `REGEX` is anchored
//! and evaluated against the token's lowercased surface. Unknown keys are
//! hard errors so that typos cannot silently drop constraints.

mod compile;
mod parse;
mod validate;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::text::SuGroup;

pub use compile::{compile_ruleset, CompiledAuthorialLexicon, CompiledPattern, CompiledRuleSet};
pub use parse::{parse_ruleset, serialize_ruleset};
pub use validate::{validate_ruleset, Diagnostic, Severity};

/// Quantifier on a token constraint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Quantifier {
    /// Exactly one token (the default).
    #[default]
    One,
    /// Zero or one token (`"?"`).
    Optional,
    /// Any number of tokens (`"*"`).
    ZeroOrMore,
    /// At least one token (`"+"`).
    OneOrMore,
}

impl Quantifier {
    pub fn symbol(&self) -> Option<&'static str> {
        match self {
            Quantifier::One => None,
            Quantifier::Optional => Some("?"),
            Quantifier::ZeroOrMore => Some("*"),
            Quantifier::OneOrMore => Some("+"),
        }
    }

    pub fn from_symbol(sym: &str) -> Option<Quantifier> {
        match sym {
            "?" => Some(Quantifier::Optional),
            "*" => Some(Quantifier::ZeroOrMore),
            "+" => Some(Quantifier::OneOrMore),
            _ => None,
        }
    }

    /// True if the constraint may consume zero tokens.
    pub fn min_zero(&self) -> bool {
        matches!(self, Quantifier::Optional | Quantifier::ZeroOrMore)
    }
}

/// An exact-or-set predicate on a string attribute.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StringPred {
    Eq(String),
    In(BTreeSet<String>),
}

impl StringPred {
    pub fn matches(&self, value: &str) -> bool {
        match self {
            StringPred::Eq(s) => s == value,
            StringPred::In(set) => set.contains(value),
        }
    }

    /// Values enumerated by this predicate.
    pub fn values(&self) -> Vec<&str> {
        match self {
            StringPred::Eq(s) => vec![s.as_str()],
            StringPred::In(set) => set.iter().map(|s| s.as_str()).collect(),
        }
    }

    /// True if every value admitted by `other` is admitted by `self`.
    pub fn subsumes(&self, other: &StringPred) -> bool {
        other.values().iter().all(|v| self.matches(v))
    }
}

/// A conjunction of attribute predicates on one token, plus a quantifier.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TokenConstraint {
    pub text: Option<StringPred>,
    pub lower: Option<StringPred>,
    pub lemma: Option<StringPred>,
    pub pos: Option<StringPred>,
    /// Every listed `Feature=Value` must be present on the token.
    pub morph: BTreeSet<String>,
    /// Anchored regular expression over the lowercased surface.
    pub lower_regex: Option<String>,
    pub op: Quantifier,
}

impl TokenConstraint {
    pub fn has_predicate(&self) -> bool {
        self.text.is_some()
            || self.lower.is_some()
            || self.lemma.is_some()
            || self.pos.is_some()
            || !self.morph.is_empty()
            || self.lower_regex.is_some()
    }
}

/// One scientific-uncertainty span pattern.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pattern {
    pub id: String,
    pub group: SuGroup,
    pub note: String,
    pub constraints: Vec<TokenConstraint>,
}

/// What a cancellation pattern asserts about the surrounding clause.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CancellationKind {
    /// The uncertainty is denied or dismissed.
    Rebuttal,
    /// The open point is settled affirmatively.
    Confirmation,
}

impl CancellationKind {
    pub fn name(&self) -> &'static str {
        match self {
            CancellationKind::Rebuttal => "rebuttal",
            CancellationKind::Confirmation => "confirmation",
        }
    }

    pub fn from_name(name: &str) -> Option<CancellationKind> {
        match name {
            "rebuttal" => Some(CancellationKind::Rebuttal),
            "confirmation" => Some(CancellationKind::Confirmation),
            _ => None,
        }
    }
}

impl fmt::Display for CancellationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A pattern from the cancellation family (same shape as [`Pattern`] with
/// the group replaced by a kind).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CancellationPattern {
    pub id: String,
    pub kind: CancellationKind,
    pub note: String,
    pub constraints: Vec<TokenConstraint>,
}

/// Label a matched span carries: either one of the twelve SU groups or a
/// cancellation kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SpanLabel {
    Group(SuGroup),
    Cancellation(CancellationKind),
}

impl SpanLabel {
    pub fn name(&self) -> &'static str {
        match self {
            SpanLabel::Group(g) => g.name(),
            SpanLabel::Cancellation(k) => match k {
                CancellationKind::Rebuttal => "Rebuttal",
                CancellationKind::Confirmation => "Confirmation",
            },
        }
    }
}

impl fmt::Display for SpanLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Word lists and citation regexes used by the authorial-reference stage.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AuthorialLexicon {
    /// Whole-token first-person markers, lowercased.
    pub first_person: BTreeSet<String>,
    /// Lowercased phrases referring to the study at hand.
    pub present_study: Vec<String>,
    /// Lowercased markers for earlier work. Single-word entries additionally
    /// require a following research noun (see the authorial module).
    pub previous_study: Vec<String>,
    /// Unanchored regexes matching in-text citation markers.
    pub citation_regexes: Vec<String>,
}

/// A parsed, still-declarative rule set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleSet {
    pub version: String,
    pub patterns: Vec<Pattern>,
    pub cancellations: Vec<CancellationPattern>,
    pub authorial: AuthorialLexicon,
}

impl RuleSet {
    /// Patterns belonging to `group`, in declaration order.
    pub fn patterns_in(&self, group: SuGroup) -> impl Iterator<Item = &Pattern> {
        self.patterns.iter().filter(move |p| p.group == group)
    }
}
