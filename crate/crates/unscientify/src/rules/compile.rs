//! Compilation of a validated rule set into runnable recognizers.
//!
//! Each pattern becomes a small NFA over its token constraints. Matching is
//! greedy with full backtracking: a match exists at a start position
//! whenever any assignment of quantifier repetitions satisfies the whole
//! sequence, and only the longest such match is reported per
//! (pattern, start) pair.

use std::collections::HashMap;

use regex::Regex;

use super::{
    AuthorialLexicon, CancellationKind, Quantifier, RuleSet, SpanLabel, StringPred, TokenConstraint,
};
use crate::error::RuleError;
use crate::text::Token;

/// A constraint with its regex pre-compiled.
#[derive(Debug, Clone)]
pub(crate) struct CompiledConstraint {
    text: Option<StringPred>,
    lower: Option<StringPred>,
    lemma: Option<StringPred>,
    pos: Option<StringPred>,
    morph: Vec<String>,
    regex: Option<Regex>,
    pub(crate) op: Quantifier,
}

impl CompiledConstraint {
    fn compile(c: &TokenConstraint, pattern_id: &str) -> Result<Self, RuleError> {
        let regex =
            match &c.lower_regex {
                Some(src) => Some(Regex::new(&format!("^(?:{src})$")).map_err(|e| {
                    RuleError::InvalidRegex {
                        pattern_id: pattern_id.to_string(),
                        source_text: src.clone(),
                        message: e.to_string(),
                    }
                })?),
                None => None,
            };
        Ok(CompiledConstraint {
            text: c.text.clone(),
            lower: c.lower.clone(),
            lemma: c.lemma.clone(),
            pos: c.pos.clone(),
            morph: c.morph.iter().cloned().collect(),
            regex,
            op: c.op,
        })
    }

    /// Does `token` satisfy every predicate of this constraint?
    pub(crate) fn accepts(&self, token: &Token) -> bool {
        if let Some(p) = &self.text {
            if !p.matches(&token.text) {
                return false;
            }
        }
        if let Some(p) = &self.lower {
            if !p.matches(&token.lower) {
                return false;
            }
        }
        if let Some(p) = &self.lemma {
            if !p.matches(&token.lemma) {
                return false;
            }
        }
        if let Some(p) = &self.pos {
            if !p.matches(&token.pos) {
                return false;
            }
        }
        for feature in &self.morph {
            if !token.morph.contains(feature) {
                return false;
            }
        }
        if let Some(re) = &self.regex {
            if !re.is_match(&token.lower) {
                return false;
            }
        }
        true
    }
}

/// One pattern compiled into a recognizer.
#[derive(Debug, Clone)]
pub struct CompiledPattern {
    pub id: String,
    pub label: SpanLabel,
    pub(crate) constraints: Vec<CompiledConstraint>,
    /// Indices of constraints that can consume the first token of a match:
    /// every leading optional constraint plus the first required one.
    anchor: Vec<usize>,
}

impl CompiledPattern {
    fn new(id: String, label: SpanLabel, constraints: Vec<CompiledConstraint>) -> CompiledPattern {
        let mut anchor = Vec::new();
        for (i, c) in constraints.iter().enumerate() {
            anchor.push(i);
            if !c.op.min_zero() {
                break;
            }
        }
        CompiledPattern {
            id,
            label,
            constraints,
            anchor,
        }
    }

    pub fn len(&self) -> usize {
        self.constraints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.constraints.is_empty()
    }

    /// Cheap start filter: a non-empty match beginning at `token` must
    /// consume it with one of the anchor constraints.
    fn can_start(&self, token: &Token) -> bool {
        self.anchor
            .iter()
            .any(|&i| self.constraints[i].accepts(token))
    }

    /// End (exclusive) of the longest match starting exactly at
    /// `tokens[start]`, or `None`. Zero-length matches are not reported.
    pub fn longest_match_at(&self, tokens: &[Token], start: usize) -> Option<usize> {
        if start >= tokens.len() || !self.can_start(&tokens[start]) {
            return None;
        }
        let mut memo: HashMap<(usize, usize), Option<usize>> = HashMap::new();
        let end = self.search(0, start, tokens, &mut memo)?;
        (end > start).then_some(end)
    }

    /// Maximum end position over all repetition assignments from state
    /// (constraint `ci`, token `ti`), or `None` if no assignment satisfies
    /// the remaining sequence.
    fn search(
        &self,
        ci: usize,
        ti: usize,
        tokens: &[Token],
        memo: &mut HashMap<(usize, usize), Option<usize>>,
    ) -> Option<usize> {
        if ci == self.constraints.len() {
            return Some(ti);
        }
        if let Some(cached) = memo.get(&(ci, ti)) {
            return *cached;
        }
        let constraint = &self.constraints[ci];
        let mut best: Option<usize> = None;
        let consider = |candidate: Option<usize>, best: &mut Option<usize>| {
            if let Some(end) = candidate {
                if best.is_none_or(|b| end > b) {
                    *best = Some(end);
                }
            }
        };

        let (min_reps, max_reps) = match constraint.op {
            Quantifier::One => (1, 1),
            Quantifier::Optional => (0, 1),
            Quantifier::ZeroOrMore => (0, usize::MAX),
            Quantifier::OneOrMore => (1, usize::MAX),
        };

        // Consume k tokens with this constraint, longest first.
        let mut k = 0usize;
        let mut pos = ti;
        let mut reachable = vec![ti];
        while k < max_reps && pos < tokens.len() && constraint.accepts(&tokens[pos]) {
            pos += 1;
            k += 1;
            reachable.push(pos);
        }
        for (reps, &next) in reachable.iter().enumerate().rev() {
            if reps >= min_reps {
                consider(self.search(ci + 1, next, tokens, memo), &mut best);
            }
        }

        memo.insert((ci, ti), best);
        best
    }
}

/// Case-folded phrase stored as its whitespace-split tokens.
pub(crate) type PhraseTokens = Vec<String>;

/// The authorial lexicon with regexes compiled and phrases pre-split.
#[derive(Debug, Clone)]
pub struct CompiledAuthorialLexicon {
    pub first_person: Vec<String>,
    pub present_study: Vec<PhraseTokens>,
    pub previous_study: Vec<PhraseTokens>,
    pub citation_regexes: Vec<Regex>,
}

impl CompiledAuthorialLexicon {
    fn compile(lexicon: &AuthorialLexicon) -> Result<Self, RuleError> {
        let split = |phrases: &[String]| -> Vec<PhraseTokens> {
            phrases
                .iter()
                .map(|p| p.split_whitespace().map(String::from).collect())
                .collect()
        };
        let mut citation_regexes = Vec::with_capacity(lexicon.citation_regexes.len());
        for src in &lexicon.citation_regexes {
            citation_regexes.push(Regex::new(src).map_err(|e| RuleError::InvalidRegex {
                pattern_id: "authorial.citation_regexes".into(),
                source_text: src.clone(),
                message: e.to_string(),
            })?);
        }
        Ok(CompiledAuthorialLexicon {
            first_person: lexicon.first_person.iter().cloned().collect(),
            present_study: split(&lexicon.present_study),
            previous_study: split(&lexicon.previous_study),
            citation_regexes,
        })
    }
}

/// A rule set compiled for matching. Immutable and safe to share across
/// threads.
#[derive(Debug, Clone)]
pub struct CompiledRuleSet {
    pub version: String,
    patterns: Vec<CompiledPattern>,
    pub authorial: CompiledAuthorialLexicon,
    index: HashMap<String, SpanLabel>,
}

impl CompiledRuleSet {
    /// All compiled patterns, SU patterns first, in declaration order.
    pub fn patterns(&self) -> &[CompiledPattern] {
        &self.patterns
    }

    pub fn su_patterns(&self) -> impl Iterator<Item = &CompiledPattern> {
        self.patterns
            .iter()
            .filter(|p| matches!(p.label, SpanLabel::Group(_)))
    }

    pub fn cancellation_patterns(&self) -> impl Iterator<Item = &CompiledPattern> {
        self.patterns
            .iter()
            .filter(|p| matches!(p.label, SpanLabel::Cancellation(_)))
    }

    /// Label for a pattern id, if the id exists.
    pub fn label_of(&self, pattern_id: &str) -> Option<SpanLabel> {
        self.index.get(pattern_id).copied()
    }
}

/// Compile a rule set. The set should be validated first; on validated
/// input this cannot fail.
pub fn compile_ruleset(rs: &RuleSet) -> Result<CompiledRuleSet, RuleError> {
    let mut patterns = Vec::with_capacity(rs.patterns.len() + rs.cancellations.len());
    let mut index = HashMap::new();
    for p in &rs.patterns {
        let constraints = p
            .constraints
            .iter()
            .map(|c| CompiledConstraint::compile(c, &p.id))
            .collect::<Result<Vec<_>, _>>()?;
        let label = SpanLabel::Group(p.group);
        if index.insert(p.id.clone(), label).is_some() {
            return Err(RuleError::DuplicateId(p.id.clone()));
        }
        patterns.push(CompiledPattern::new(p.id.clone(), label, constraints));
    }
    for c in &rs.cancellations {
        let constraints = c
            .constraints
            .iter()
            .map(|tc| CompiledConstraint::compile(tc, &c.id))
            .collect::<Result<Vec<_>, _>>()?;
        let label = SpanLabel::Cancellation(c.kind);
        if index.insert(c.id.clone(), label).is_some() {
            return Err(RuleError::DuplicateId(c.id.clone()));
        }
        patterns.push(CompiledPattern::new(c.id.clone(), label, constraints));
    }
    Ok(CompiledRuleSet {
        version: rs.version.clone(),
        patterns,
        authorial: CompiledAuthorialLexicon::compile(&rs.authorial)?,
        index,
    })
}

/// Convenience used by cancellation kinds in match output.
impl From<CancellationKind> for SpanLabel {
    fn from(kind: CancellationKind) -> Self {
        SpanLabel::Cancellation(kind)
    }
}
