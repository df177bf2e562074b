//! Rule set validation: structural errors plus hygiene warnings.

use std::collections::BTreeSet;
use std::fmt;

use super::{Quantifier, RuleSet, StringPred, TokenConstraint};
use crate::text::SuGroup;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    Error,
    Warning,
}

/// One validation finding. Errors make a rule set uncompilable; warnings
/// flag likely authoring mistakes.
#[derive(Debug, Clone)]
pub struct Diagnostic {
    pub severity: Severity,
    pub code: &'static str,
    pub message: String,
}

impl Diagnostic {
    fn error(code: &'static str, message: String) -> Self {
        Diagnostic {
            severity: Severity::Error,
            code,
            message,
        }
    }

    fn warning(code: &'static str, message: String) -> Self {
        Diagnostic {
            severity: Severity::Warning,
            code,
            message,
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{sev}[{}]: {}", self.code, self.message)
    }
}

/// Validate a rule set. Returns all findings; an empty list means the set is
/// clean. Rule sets built from [`parse_ruleset`](super::parse_ruleset) can
/// only produce warnings here, but programmatically constructed sets are
/// checked for parse-level invariants too.
pub fn validate_ruleset(rs: &RuleSet) -> Vec<Diagnostic> {
    let mut out = Vec::new();

    if rs.version.is_empty() {
        out.push(Diagnostic::error(
            "EMPTY_VERSION",
            "ruleset version must be non-empty".into(),
        ));
    }

    let mut ids: BTreeSet<&str> = BTreeSet::new();
    let all_patterns = rs
        .patterns
        .iter()
        .map(|p| (p.id.as_str(), &p.constraints))
        .chain(
            rs.cancellations
                .iter()
                .map(|c| (c.id.as_str(), &c.constraints)),
        );
    for (id, constraints) in all_patterns {
        if !ids.insert(id) {
            out.push(Diagnostic::error(
                "DUPLICATE_ID",
                format!("pattern id {id:?} is declared twice"),
            ));
        }
        if constraints.is_empty() {
            out.push(Diagnostic::error(
                "EMPTY_PATTERN",
                format!("pattern {id:?} has no token constraints"),
            ));
            continue;
        }
        if constraints.iter().all(|c| c.op.min_zero()) {
            out.push(Diagnostic::error(
                "NO_REQUIRED_CONSTRAINT",
                format!("pattern {id:?} could match an empty token span"),
            ));
        }
        for (i, c) in constraints.iter().enumerate() {
            if let Some(src) = &c.lower_regex {
                if let Err(e) = regex::Regex::new(&format!("^(?:{src})$")) {
                    out.push(Diagnostic::error(
                        "INVALID_REGEX",
                        format!("pattern {id:?} constraint {i}: {e}"),
                    ));
                }
            }
            if !c.has_predicate() && c.op == Quantifier::One {
                out.push(Diagnostic::warning(
                    "PREDICATE_FREE_ONE",
                    format!("pattern {id:?} constraint {i} matches any single token; add a predicate or a quantifier"),
                ));
            }
        }
    }

    for regex_src in &rs.authorial.citation_regexes {
        if let Err(e) = regex::Regex::new(regex_src) {
            out.push(Diagnostic::error(
                "INVALID_REGEX",
                format!("authorial citation regex {regex_src:?}: {e}"),
            ));
        }
    }

    for group in SuGroup::ALL {
        if rs.patterns_in(group).next().is_none() {
            out.push(Diagnostic::warning(
                "EMPTY_GROUP",
                format!("group {group} has no patterns"),
            ));
        }
    }

    // Shadowing: within one group, a pattern whose constraint sequence
    // admits everything another pattern admits makes the narrower one
    // unreachable as a distinct signal. The check is conservative: it
    // compares equal-length sequences with identical quantifiers.
    for group in SuGroup::ALL {
        let members: Vec<_> = rs.patterns_in(group).collect();
        for a in &members {
            for b in &members {
                if a.id != b.id && sequence_subsumes(&a.constraints, &b.constraints) {
                    out.push(Diagnostic::warning(
                        "SHADOWED",
                        format!(
                            "pattern {:?} is generalized by pattern {:?} in group {group}",
                            b.id, a.id
                        ),
                    ));
                }
            }
        }
    }

    out
}

fn sequence_subsumes(a: &[TokenConstraint], b: &[TokenConstraint]) -> bool {
    a.len() == b.len()
        && a.iter()
            .zip(b)
            .all(|(ca, cb)| ca.op == cb.op && constraint_subsumes(ca, cb))
}

/// True if every token admitted by `b` is admitted by `a`.
fn constraint_subsumes(a: &TokenConstraint, b: &TokenConstraint) -> bool {
    fn attr_subsumes(a: &Option<StringPred>, b: &Option<StringPred>) -> bool {
        match (a, b) {
            (None, _) => true,
            (Some(_), None) => false,
            (Some(pa), Some(pb)) => pa.subsumes(pb),
        }
    }
    if !attr_subsumes(&a.text, &b.text)
        || !attr_subsumes(&a.lemma, &b.lemma)
        || !attr_subsumes(&a.pos, &b.pos)
    {
        return false;
    }
    // LOWER can be implied either by b's LOWER predicate or, for the regex
    // case, by every LOWER value of b matching a's anchored regex.
    if !attr_subsumes(&a.lower, &b.lower) {
        return false;
    }
    if !a.morph.is_subset(&b.morph) {
        return false;
    }
    match (&a.lower_regex, &b.lower_regex) {
        (None, _) => true,
        (Some(ra), Some(rb)) if ra == rb => true,
        (Some(ra), _) => match &b.lower {
            Some(pred) => match regex::Regex::new(&format!("^(?:{ra})$")) {
                Ok(re) => pred.values().iter().all(|v| re.is_match(v)),
                Err(_) => false,
            },
            None => false,
        },
    }
}
