//! Citation and self-reference detection used by the third pipeline stage.
//!
//! Citation detection is surface-pattern based: the lexicon's regexes run
//! over the raw sentence text and matched markers are classified by shape.
//! There is no bibliography linking and no pronoun co-reference.

use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::rules::CompiledAuthorialLexicon;
use crate::text::Sentence;

/// Surface shape of an in-text citation marker.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CitationKind {
    /// `[6]` or `[6,7]` style reference numbers.
    BracketNumber,
    /// `(Name, 2019)` or `(Name, 2019; Other, 2020)` style.
    ParentheticalAuthorYear,
    /// `Name (2019)` style, with the names in running text.
    NarrativeAuthorYear,
}

/// One detected citation marker.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CitationMarker {
    pub kind: CitationKind,
    pub char_start: usize,
    pub char_end: usize,
    pub raw: String,
}

/// All citation markers in a sentence: non-overlapping, leftmost-longest.
pub fn detect_citations(sentence: &Sentence, citation_regexes: &[Regex]) -> Vec<CitationMarker> {
    let text = &sentence.text;
    let mut candidates: Vec<(usize, usize)> = Vec::new();
    for re in citation_regexes {
        for m in re.find_iter(text) {
            candidates.push((m.start(), m.end()));
        }
    }
    // Leftmost-longest selection over the merged candidate list.
    candidates.sort_by_key(|&(start, end)| (start, std::cmp::Reverse(end)));
    let mut markers: Vec<CitationMarker> = Vec::new();
    for (start, end) in candidates {
        if markers
            .iter()
            .any(|m| start < m.char_end && m.char_start < end)
        {
            continue;
        }
        let raw = text[start..end].to_string();
        let kind = match raw.as_bytes().first() {
            Some(b'[') => CitationKind::BracketNumber,
            Some(b'(') => CitationKind::ParentheticalAuthorYear,
            _ => CitationKind::NarrativeAuthorYear,
        };
        markers.push(CitationMarker {
            kind,
            char_start: start,
            char_end: end,
            raw,
        });
    }
    markers.sort_by_key(|m| m.char_start);
    markers
}

/// Kind of self-reference marker.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SelfRefKind {
    /// A first-person token: we, our, us, ...
    FirstPerson,
    /// A phrase naming the study at hand: "this study", "the present study".
    PresentStudy,
    /// A marker pointing at earlier work: "previous studies", "et al".
    PreviousStudy,
}

/// One detected self-reference.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelfRefMarker {
    pub kind: SelfRefKind,
    pub token_start: usize,
    pub token_end: usize,
    pub char_start: usize,
    pub char_end: usize,
}

/// Research nouns that a single-word previous-study marker (a temporal
/// adjective such as "previous") must be directly followed by.
const RESEARCH_NOUNS: [&str; 16] = [
    "study",
    "studies",
    "research",
    "work",
    "works",
    "meta-analyses",
    "meta-analysis",
    "literature",
    "analyses",
    "analysis",
    "findings",
    "experiments",
    "reports",
    "trials",
    "investigations",
    "publications",
];

/// Detect first-person, present-study, and previous-study markers.
///
/// First-person markers are case-insensitive whole-token lookups. Study
/// phrases are matched over lowered token n-grams. Single-token
/// previous-study entries additionally require an adjacent research noun,
/// so "previous studies" fires but a bare "previous" does not. Within each
/// kind the returned markers are non-overlapping (leftmost-longest).
pub fn detect_self_reference(
    sentence: &Sentence,
    lexicon: &CompiledAuthorialLexicon,
) -> Vec<SelfRefMarker> {
    let tokens = &sentence.tokens;
    let mut out = Vec::new();

    let push_range = |kind: SelfRefKind, start: usize, end: usize, out: &mut Vec<SelfRefMarker>| {
        out.push(SelfRefMarker {
            kind,
            token_start: start,
            token_end: end,
            char_start: tokens[start].char_start,
            char_end: tokens[end - 1].char_end,
        });
    };

    for (i, tok) in tokens.iter().enumerate() {
        if lexicon.first_person.iter().any(|w| w == &tok.lower) {
            push_range(SelfRefKind::FirstPerson, i, i + 1, &mut out);
        }
    }

    let ngram_matches = |phrase: &[String], out: &mut Vec<SelfRefMarker>, kind: SelfRefKind| {
        if phrase.is_empty() {
            return;
        }
        for start in 0..tokens.len().saturating_sub(phrase.len() - 1) {
            let hit = phrase
                .iter()
                .enumerate()
                .all(|(k, word)| tokens[start + k].lower == *word);
            if hit {
                push_range(kind, start, start + phrase.len(), out);
            }
        }
    };

    for phrase in &lexicon.present_study {
        ngram_matches(phrase, &mut out, SelfRefKind::PresentStudy);
    }

    for phrase in &lexicon.previous_study {
        if phrase.len() == 1 {
            // Temporal adjective: require an adjacent research noun.
            let word = &phrase[0];
            for i in 0..tokens.len().saturating_sub(1) {
                if tokens[i].lower == *word
                    && RESEARCH_NOUNS.contains(&tokens[i + 1].lower.as_str())
                {
                    push_range(SelfRefKind::PreviousStudy, i, i + 2, &mut out);
                }
            }
        } else {
            ngram_matches(phrase, &mut out, SelfRefKind::PreviousStudy);
        }
    }

    // Per kind, keep a non-overlapping leftmost-longest subset.
    let mut result = Vec::new();
    for kind in [
        SelfRefKind::FirstPerson,
        SelfRefKind::PresentStudy,
        SelfRefKind::PreviousStudy,
    ] {
        let mut of_kind: Vec<&SelfRefMarker> = out.iter().filter(|m| m.kind == kind).collect();
        of_kind.sort_by_key(|m| (m.token_start, std::cmp::Reverse(m.token_end)));
        let mut kept: Vec<SelfRefMarker> = Vec::new();
        for m in of_kind {
            if kept
                .iter()
                .all(|k| m.token_start >= k.token_end || m.token_end <= k.token_start)
            {
                kept.push(m.clone());
            }
        }
        result.extend(kept);
    }
    result.sort_by_key(|m| (m.token_start, m.token_end));
    result
}
