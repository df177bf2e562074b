//! Run a compiled rule set over a sentence and resolve overlapping matches.

use serde::{Deserialize, Serialize};

use crate::rules::{CompiledRuleSet, SpanLabel};
use crate::text::Sentence;

/// A matched token range, with the pattern that produced it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpanMatch {
    pub pattern_id: String,
    pub label: SpanLabel,
    /// Token range, end exclusive.
    pub token_start: usize,
    pub token_end: usize,
    /// Byte range into the sentence text.
    pub char_start: usize,
    pub char_end: usize,
    /// The exact sentence substring covered.
    pub matched_text: String,
}

impl SpanMatch {
    pub fn token_len(&self) -> usize {
        self.token_end - self.token_start
    }

    pub fn overlaps(&self, other: &SpanMatch) -> bool {
        self.token_start < other.token_end && other.token_start < self.token_end
    }
}

/// All longest matches for every pattern at every start position, sorted by
/// `(token_start, token_end, pattern_id)`. Matches from different patterns
/// may overlap freely; see [`resolve_overlaps`] for within-group reduction.
pub fn match_sentence(crs: &CompiledRuleSet, sentence: &Sentence) -> Vec<SpanMatch> {
    let tokens = &sentence.tokens;
    let mut out = Vec::new();
    for pattern in crs.patterns() {
        for start in 0..tokens.len() {
            if let Some(end) = pattern.longest_match_at(tokens, start) {
                let char_start = tokens[start].char_start;
                let char_end = tokens[end - 1].char_end;
                out.push(SpanMatch {
                    pattern_id: pattern.id.clone(),
                    label: pattern.label,
                    token_start: start,
                    token_end: end,
                    char_start,
                    char_end,
                    matched_text: sentence.text[char_start..char_end].to_string(),
                });
            }
        }
    }
    out.sort_by(|a, b| {
        (a.token_start, a.token_end, a.pattern_id.as_str()).cmp(&(
            b.token_start,
            b.token_end,
            b.pattern_id.as_str(),
        ))
    });
    out
}

/// Reduce overlaps within each label: longer spans win, ties go to the
/// leftmost span, remaining ties to the lexicographically smaller pattern
/// id. Spans with different labels never suppress each other, so one
/// sentence region may carry several group labels. Idempotent.
pub fn resolve_overlaps(matches: &[SpanMatch]) -> Vec<SpanMatch> {
    // Priority order within a label.
    let mut ordered: Vec<&SpanMatch> = matches.iter().collect();
    ordered.sort_by(|a, b| {
        (
            std::cmp::Reverse(a.token_len()),
            a.token_start,
            a.pattern_id.as_str(),
        )
            .cmp(&(
                std::cmp::Reverse(b.token_len()),
                b.token_start,
                b.pattern_id.as_str(),
            ))
    });

    let mut accepted: Vec<&SpanMatch> = Vec::new();
    for candidate in ordered {
        let blocked = accepted
            .iter()
            .any(|kept| kept.label == candidate.label && kept.overlaps(candidate));
        if !blocked {
            accepted.push(candidate);
        }
    }

    let mut out: Vec<SpanMatch> = accepted.into_iter().cloned().collect();
    out.sort_by(|a, b| {
        (a.token_start, a.token_end, a.pattern_id.as_str()).cmp(&(
            b.token_start,
            b.token_end,
            b.pattern_id.as_str(),
        ))
    });
    out
}
