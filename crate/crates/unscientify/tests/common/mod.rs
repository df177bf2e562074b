#![allow(dead_code)] // each test binary uses a different subset

//! Shared fixtures and oracles for integration tests.

use regex::Regex;
use unscientify::rules::{Quantifier, RuleSet, StringPred, TokenConstraint};
use unscientify::text::{SuGroup, Token};

/// Small deterministic RNG (xorshift64*), so generated corpora are stable
/// across runs and platforms.
pub struct Rng(u64);

impl Rng {
    pub fn new(seed: u64) -> Rng {
        Rng(seed.max(1))
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.0 = x;
        x.wrapping_mul(0x2545_F491_4F6C_DD1D)
    }

    pub fn below(&mut self, bound: usize) -> usize {
        (self.next_u64() % bound as u64) as usize
    }

    pub fn pick<'a, T>(&mut self, items: &'a [T]) -> &'a T {
        &items[self.below(items.len())]
    }
}

/// Words that appear in builtin pattern anchors; sampling them makes
/// generated sentences actually exercise the rules.
pub const ANCHOR_WORDS: &[&str] = &[
    "may",
    "might",
    "could",
    "can",
    "cannot",
    "not",
    "no",
    "evidence",
    "unclear",
    "uncertain",
    "unknown",
    "controversial",
    "hypothesis",
    "hypotheses",
    "assume",
    "we",
    "i",
    "believe",
    "that",
    "seems",
    "appears",
    "to",
    "be",
    "linked",
    "shown",
    "poorly",
    "possibly",
    "probably",
    "perhaps",
    "quite",
    "certain",
    "likely",
    "predicted",
    "projected",
    "expect",
    "expected",
    "generalized",
    "generalisable",
    "extrapolated",
    "if",
    "so",
    "whether",
    "or",
    "it",
    "is",
    "was",
    "remains",
    "open",
    "question",
    "in",
    "contrast",
    "previous",
    "studies",
    "study",
    "on",
    "one",
    "hand",
    "however",
    "possibility",
    "likelihood",
    "of",
    "ruled",
    "rule",
    "out",
    "confirm",
    "confirmed",
    "results",
    "findings",
    "demonstrate",
    "conclusively",
    "fail",
    "failed",
    "support",
    "suggest",
    "lack",
    "consensus",
    "this",
    "the",
    "our",
    "knowledge",
];

/// Neutral filler words.
pub const FILLER_WORDS: &[&str] = &[
    "effect",
    "sample",
    "data",
    "model",
    "group",
    "cells",
    "analysis",
    "method",
    "outcome",
    "participants",
    "trial",
    "measure",
    "value",
    "signal",
    "region",
    "change",
    "level",
    "rate",
    "size",
    "case",
    "and",
    "for",
    "with",
    "were",
    "are",
    "at",
    "by",
    "from",
    "a",
    "an",
];

/// One generated sentence as plain text: 1..=max_tokens lowercase words.
pub fn generate_sentence_text(rng: &mut Rng, max_tokens: usize) -> String {
    let len = 1 + rng.below(max_tokens);
    let mut words = Vec::with_capacity(len);
    for _ in 0..len {
        if rng.below(10) < 6 {
            words.push(*rng.pick(ANCHOR_WORDS));
        } else {
            words.push(*rng.pick(FILLER_WORDS));
        }
    }
    words.join(" ")
}

/// A capitalized, period-terminated sentence for corpus assembly. The last
/// word is padded when it would form a splitter abbreviation (for example
/// "No.").
pub fn generate_corpus_sentence(rng: &mut Rng, max_tokens: usize) -> String {
    let mut raw = generate_sentence_text(rng, max_tokens);
    if raw.rsplit(' ').next() == Some("no") {
        raw.push_str(" effect");
    }
    let mut chars = raw.chars();
    let first = chars.next().unwrap_or('X').to_uppercase().to_string();
    format!("{}{}.", first, chars.as_str())
}

// ---------------------------------------------------------------------------
// Brute-force matching oracle
//
// Re-evaluates token constraints directly from the declarative rule set and
// enumerates every repetition assignment, independent of the compiled
// recognizer it cross-checks.
// ---------------------------------------------------------------------------

pub struct OracleConstraint {
    text: Option<Vec<String>>,
    lower: Option<Vec<String>>,
    lemma: Option<Vec<String>>,
    pos: Option<Vec<String>>,
    morph: Vec<String>,
    regex: Option<Regex>,
    op: Quantifier,
}

pub struct OraclePattern {
    pub id: String,
    pub constraints: Vec<OracleConstraint>,
}

fn pred_values(pred: &Option<StringPred>) -> Option<Vec<String>> {
    pred.as_ref()
        .map(|p| p.values().into_iter().map(String::from).collect())
}

fn oracle_constraint(c: &TokenConstraint) -> OracleConstraint {
    OracleConstraint {
        text: pred_values(&c.text),
        lower: pred_values(&c.lower),
        lemma: pred_values(&c.lemma),
        pos: pred_values(&c.pos),
        morph: c.morph.iter().cloned().collect(),
        regex: c
            .lower_regex
            .as_ref()
            .map(|src| Regex::new(&format!("^(?:{src})$")).expect("oracle regex compiles")),
        op: c.op,
    }
}

/// Oracle patterns for every pattern (SU and cancellation) in a rule set.
pub fn oracle_patterns(rs: &RuleSet) -> Vec<OraclePattern> {
    let su = rs.patterns.iter().map(|p| OraclePattern {
        id: p.id.clone(),
        constraints: p.constraints.iter().map(oracle_constraint).collect(),
    });
    let cx = rs.cancellations.iter().map(|c| OraclePattern {
        id: c.id.clone(),
        constraints: c.constraints.iter().map(oracle_constraint).collect(),
    });
    su.chain(cx).collect()
}

fn accepts(c: &OracleConstraint, t: &Token) -> bool {
    let in_values = |values: &Option<Vec<String>>, actual: &str| match values {
        None => true,
        Some(vs) => vs.iter().any(|v| v == actual),
    };
    in_values(&c.text, &t.text)
        && in_values(&c.lower, &t.lower)
        && in_values(&c.lemma, &t.lemma)
        && in_values(&c.pos, &t.pos)
        && c.morph.iter().all(|f| t.morph.contains(f))
        && c.regex.as_ref().is_none_or(|re| re.is_match(&t.lower))
}

/// Longest non-empty match of `pattern` starting exactly at `start`,
/// computed by exhaustive enumeration of repetition counts.
pub fn oracle_longest(pattern: &OraclePattern, tokens: &[Token], start: usize) -> Option<usize> {
    fn enumerate(
        constraints: &[OracleConstraint],
        ci: usize,
        ti: usize,
        tokens: &[Token],
        best: &mut Option<usize>,
    ) {
        if ci == constraints.len() {
            if best.is_none_or(|b| ti > b) {
                *best = Some(ti);
            }
            return;
        }
        let c = &constraints[ci];
        let (min_reps, unbounded) = match c.op {
            Quantifier::One => (1usize, false),
            Quantifier::Optional => (0, false),
            Quantifier::ZeroOrMore => (0, true),
            Quantifier::OneOrMore => (1, true),
        };
        let max_reps = if unbounded {
            tokens.len().saturating_sub(ti)
        } else {
            1
        };
        for k in min_reps..=max_reps {
            // Deliberately naive: recheck the whole run for every k.
            let fits = ti + k <= tokens.len() && (ti..ti + k).all(|j| accepts(c, &tokens[j]));
            if fits {
                enumerate(constraints, ci + 1, ti + k, tokens, best);
            }
        }
    }

    let mut best = None;
    enumerate(&pattern.constraints, 0, start, tokens, &mut best);
    best.filter(|&end| end > start)
}

// ---------------------------------------------------------------------------
// Golden sentences
// ---------------------------------------------------------------------------

/// The four reference sentences with their expected verdicts: SU label and
/// authorial label ("authors" / "previous"), None for non-SU.
pub const GOLD_FOUR: &[(&str, bool, Option<&str>)] = &[
    (
        "It is possible that corticosteroids prevent some acute gastrointestinal complications.",
        true,
        Some("authors"),
    ),
    (
        "However, we find no evidence to support this hypothesis either.",
        false,
        None,
    ),
    (
        "But, how this kind of coverage might influence the \"we\" feeling among Europeans, still remains somehow an open question.",
        true,
        Some("authors"),
    ),
    (
        "Previous meta-analyses have shown a significant benefit for NaHCO3 in comparison to normal saline (NS) infusion [6,7], although they highlighted the possibility of publication bias.",
        true,
        Some("previous"),
    ),
];

pub struct GroupExample {
    pub group: SuGroup,
    pub text: &'static str,
    /// Substrings that must each be contained in some final span of `group`.
    pub bolds: &'static [&'static str],
}

/// Two reference sentences per group, with the cue substrings their group's
/// spans must cover.
pub const GROUP_EXAMPLES: &[GroupExample] = &[
    GroupExample {
        group: SuGroup::ExplicitSU,
        text: "In addition, the role of the public is often unclear.",
        bolds: &["is often unclear"],
    },
    GroupExample {
        group: SuGroup::ExplicitSU,
        text: "The functional relevance of G4 in vivo in mammalian cells remains controversial.",
        bolds: &["remains controversial"],
    },
    GroupExample {
        group: SuGroup::Modality,
        text: "Different voters might have different interpretations about the policy.",
        bolds: &["might have"],
    },
    GroupExample {
        group: SuGroup::Modality,
        text: "There may also be behavioral effects.",
        bolds: &["may also be"],
    },
    GroupExample {
        group: SuGroup::ConditionalExpression,
        text: "If persons perceive the media as hostile, it is probable that the mere-exposure effect is weakened thus we hypothesize that the effect depends on exposure.",
        bolds: &["If", "it is probable that"],
    },
    GroupExample {
        group: SuGroup::ConditionalExpression,
        text: "If there are any violations, subsequent inferential procedures may be invalid, and if so, the conclusions would be faulty.",
        bolds: &["If", "if so"],
    },
    GroupExample {
        group: SuGroup::Hypothesis,
        text: "Hypotheses predict that aggregate support for markets should be stronger in richer countries.",
        bolds: &["Hypotheses"],
    },
    GroupExample {
        group: SuGroup::Hypothesis,
        text: "We assume that post-materialistic individuals may have differing attitudes towards doctors than those with materialistic orientations.",
        bolds: &["We assume"],
    },
    GroupExample {
        group: SuGroup::Prediction,
        text: "In July 2017, the National Grid's Future Energy Scenarios projected that the UK government would miss its renewable energy targets.",
        bolds: &["projected that"],
    },
    GroupExample {
        group: SuGroup::Prediction,
        text: "Since aging leads to decreased Sir2, we predicted that, in young cells, increasing Sir2 would delay aging.",
        bolds: &["predicted that"],
    },
    GroupExample {
        group: SuGroup::InterrogativeExpression,
        text: "The study aims to determine whether the observed results can be replicated across different populations.",
        bolds: &["whether"],
    },
    GroupExample {
        group: SuGroup::InterrogativeExpression,
        text: "This research literature has also contested whether or not citizens' knowledge about these issues is accurate.",
        bolds: &["whether or not"],
    },
    GroupExample {
        group: SuGroup::NonGeneralizableStatement,
        text: "Our study focuses on high-income countries and thus cannot be directly generalized to low-income nations nor extrapolated into the long-term future.",
        bolds: &["cannot be directly generalized"],
    },
    GroupExample {
        group: SuGroup::NonGeneralizableStatement,
        text: "These estimates may not be generalisable to women in other ancestry groups.",
        bolds: &["may not be generalisable"],
    },
    GroupExample {
        group: SuGroup::AdverbialSU,
        text: "Direct and indirect readout during the transition from search to recognition mode is poorly understood.",
        bolds: &["poorly"],
    },
    GroupExample {
        group: SuGroup::AdverbialSU,
        text: "It will be quite certain that they belong to the subpopulation of gender heterogenous twins.",
        bolds: &["quite"],
    },
    GroupExample {
        group: SuGroup::Negation,
        text: "The identity of C34 modification in mitochondrial tRNAs is not clear.",
        bolds: &["not clear"],
    },
    GroupExample {
        group: SuGroup::Negation,
        text: "There was no consistent evidence for a causal relationship between age at menarche and lifetime number of sexual partners.",
        bolds: &["no consistent"],
    },
    GroupExample {
        group: SuGroup::Subjectivity,
        text: "We believe that there are good reasons for voters to care about the outcome.",
        bolds: &["We believe that"],
    },
    GroupExample {
        group: SuGroup::Subjectivity,
        text: "To our knowledge, this is the first study to provide global estimates.",
        bolds: &["To our knowledge"],
    },
    GroupExample {
        group: SuGroup::Conjectural,
        text: "This belief seems to be typical for moderate religiosity.",
        bolds: &["seems to be"],
    },
    GroupExample {
        group: SuGroup::Conjectural,
        text: "Better performance seems to be linked to life satisfaction.",
        bolds: &["seems to be linked"],
    },
    GroupExample {
        group: SuGroup::Disagreement,
        text: "In contrast to previous studies, our results did not show a significant effect.",
        bolds: &["In contrast to previous studies"],
    },
    GroupExample {
        group: SuGroup::Disagreement,
        text: "On the one hand, some researchers argue that the use of technology in the classroom can enhance learning.",
        bolds: &["On the one hand"],
    },
];

// ---------------------------------------------------------------------------
// Random rule-set generation for differential property tests
// ---------------------------------------------------------------------------

const SAFE_REGEXES: &[&str] = &[
    "[a-z]+",
    "(may|might|could)",
    "\\w+ly",
    "gen\\w*",
    "[a-z]{2,4}",
    "(no|not)",
    "\\w+(ed|en)",
];

const POS_TAGS: &[&str] = &[
    "AUX", "ADV", "DET", "PRON", "NOUN", "VERB", "X", "PUNCT", "ADP",
];

fn random_pred(rng: &mut Rng) -> StringPred {
    if rng.below(2) == 0 {
        StringPred::Eq((*rng.pick(ANCHOR_WORDS)).to_string())
    } else {
        let n = 2 + rng.below(3);
        let mut set = std::collections::BTreeSet::new();
        for _ in 0..n {
            set.insert((*rng.pick(ANCHOR_WORDS)).to_string());
        }
        StringPred::In(set)
    }
}

fn random_constraint(rng: &mut Rng) -> TokenConstraint {
    let op = match rng.below(20) {
        0..=11 => Quantifier::One,
        12..=14 => Quantifier::Optional,
        15..=17 => Quantifier::ZeroOrMore,
        _ => Quantifier::OneOrMore,
    };
    let mut c = TokenConstraint {
        op,
        ..TokenConstraint::default()
    };
    // Sometimes a pure wildcard gap; otherwise one or two predicates.
    if c.op != Quantifier::One && rng.below(5) == 0 {
        return c;
    }
    loop {
        match rng.below(8) {
            0..=2 => c.lower = Some(random_pred(rng)),
            3 => c.text = Some(random_pred(rng)),
            4 => c.lemma = Some(random_pred(rng)),
            5 | 6 => {
                c.pos = Some(if rng.below(2) == 0 {
                    StringPred::Eq((*rng.pick(POS_TAGS)).to_string())
                } else {
                    let mut set = std::collections::BTreeSet::new();
                    set.insert((*rng.pick(POS_TAGS)).to_string());
                    set.insert((*rng.pick(POS_TAGS)).to_string());
                    StringPred::In(set)
                })
            }
            _ => c.lower_regex = Some((*rng.pick(SAFE_REGEXES)).to_string()),
        }
        // Mostly single-predicate constraints, occasionally stacked.
        if rng.below(4) != 0 || (c.lower.is_some() && c.lower_regex.is_some()) {
            break;
        }
    }
    c
}

/// A random pattern of 1..=max_constraints constraints with at least one
/// required constraint.
pub fn random_pattern(
    rng: &mut Rng,
    id: String,
    group: SuGroup,
    max_constraints: usize,
) -> unscientify::rules::Pattern {
    let len = 1 + rng.below(max_constraints);
    let mut constraints: Vec<TokenConstraint> = (0..len).map(|_| random_constraint(rng)).collect();
    if constraints.iter().all(|c| c.op.min_zero()) {
        let fix = rng.below(constraints.len());
        constraints[fix].op = Quantifier::One;
        if !constraints[fix].has_predicate() {
            constraints[fix].lower = Some(random_pred(rng));
        }
    }
    unscientify::rules::Pattern {
        id,
        group,
        note: String::new(),
        constraints,
    }
}

/// A random rule set of `n_patterns` patterns across the twelve groups.
pub fn random_ruleset(rng: &mut Rng, n_patterns: usize) -> RuleSet {
    let patterns = (0..n_patterns)
        .map(|i| {
            random_pattern(
                rng,
                format!("gen-{i:03}"),
                SuGroup::ALL[i % SuGroup::ALL.len()],
                5,
            )
        })
        .collect();
    RuleSet {
        version: "generated-1".to_string(),
        patterns,
        cancellations: Vec::new(),
        authorial: Default::default(),
    }
}
