//! Core linguistic data types shared by every pipeline stage.
//!
//! Everything here is immutable after construction and safe to share across
//! worker threads. Character offsets are byte offsets into the owning
//! sentence's `text`, end exclusive.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::Range;

use serde::{Deserialize, Serialize};

/// The 17-tag universal POS inventory. Tokens carry one of these strings or
/// the sentinel `"X"`.
pub const UPOS_TAGS: [&str; 17] = [
    "ADJ", "ADP", "ADV", "AUX", "CCONJ", "DET", "INTJ", "NOUN", "NUM", "PART", "PRON", "PROPN",
    "PUNCT", "SCONJ", "SYM", "VERB", "X",
];

/// Returns true if `tag` is a member of the UPOS inventory.
pub fn is_upos(tag: &str) -> bool {
    UPOS_TAGS.contains(&tag)
}

/// A single token inside a sentence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    /// 0-based position in the sentence.
    pub index: usize,
    /// Surface string.
    pub text: String,
    /// Case-folded surface string.
    pub lower: String,
    /// Base form.
    pub lemma: String,
    /// UPOS tag or `"X"`.
    pub pos: String,
    /// Morphological features as `Feature=Value` strings.
    pub morph: BTreeSet<String>,
    /// Dependency relation; empty when unknown.
    pub dep: String,
    /// Index of the syntactic head; equals `index` for the root or when unknown.
    pub head: usize,
    /// Byte offset of the first byte, into the sentence text.
    pub char_start: usize,
    /// Byte offset one past the last byte.
    pub char_end: usize,
}

impl Token {
    /// Minimal constructor used by ingestion and tests: derives `lower`,
    /// leaves `dep` empty and `head` pointing at itself.
    pub fn new(
        index: usize,
        text: impl Into<String>,
        lemma: impl Into<String>,
        pos: impl Into<String>,
        char_start: usize,
        char_end: usize,
    ) -> Self {
        let text = text.into();
        let lower = text.to_lowercase();
        Token {
            index,
            text,
            lower,
            lemma: lemma.into(),
            pos: pos.into(),
            morph: BTreeSet::new(),
            dep: String::new(),
            head: index,
            char_start,
            char_end,
        }
    }
}

/// A sentence: the original text plus its tokens.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sentence {
    pub text: String,
    pub tokens: Vec<Token>,
    /// Position within the owning document.
    pub doc_index: usize,
}

impl Sentence {
    /// Byte range of the sentence text covered by the token range
    /// `tokens[range.start..range.end]`.
    pub fn char_range_of(&self, range: &Range<usize>) -> Range<usize> {
        if range.start >= range.end || range.end > self.tokens.len() {
            return 0..0;
        }
        self.tokens[range.start].char_start..self.tokens[range.end - 1].char_end
    }
}

/// Input format a document was built from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SourceFormat {
    Conllu,
    Plain,
}

/// An ordered collection of sentences.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub id: String,
    pub sentences: Vec<Sentence>,
    pub source_format: SourceFormat,
}

/// The twelve scientific-uncertainty pattern groups.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SuGroup {
    ExplicitSU,
    Modality,
    ConditionalExpression,
    Hypothesis,
    Prediction,
    InterrogativeExpression,
    NonGeneralizableStatement,
    AdverbialSU,
    Negation,
    Subjectivity,
    Conjectural,
    Disagreement,
}

impl SuGroup {
    /// All twelve groups, in canonical order.
    pub const ALL: [SuGroup; 12] = [
        SuGroup::ExplicitSU,
        SuGroup::Modality,
        SuGroup::ConditionalExpression,
        SuGroup::Hypothesis,
        SuGroup::Prediction,
        SuGroup::InterrogativeExpression,
        SuGroup::NonGeneralizableStatement,
        SuGroup::AdverbialSU,
        SuGroup::Negation,
        SuGroup::Subjectivity,
        SuGroup::Conjectural,
        SuGroup::Disagreement,
    ];

    /// Stable name used in rule files and serialized output.
    pub fn name(&self) -> &'static str {
        match self {
            SuGroup::ExplicitSU => "ExplicitSU",
            SuGroup::Modality => "Modality",
            SuGroup::ConditionalExpression => "ConditionalExpression",
            SuGroup::Hypothesis => "Hypothesis",
            SuGroup::Prediction => "Prediction",
            SuGroup::InterrogativeExpression => "InterrogativeExpression",
            SuGroup::NonGeneralizableStatement => "NonGeneralizableStatement",
            SuGroup::AdverbialSU => "AdverbialSU",
            SuGroup::Negation => "Negation",
            SuGroup::Subjectivity => "Subjectivity",
            SuGroup::Conjectural => "Conjectural",
            SuGroup::Disagreement => "Disagreement",
        }
    }

    /// Parse a stable name back into a group.
    pub fn from_name(name: &str) -> Option<SuGroup> {
        SuGroup::ALL.iter().copied().find(|g| g.name() == name)
    }

    /// One-line description of what expressions in this group signal,
    /// used in rendered explanations.
    pub fn description(&self) -> &'static str {
        match self {
            SuGroup::ExplicitSU => {
                "an explicit uncertainty keyword states directly that something is unclear, unknown, or disputed"
            }
            SuGroup::Modality => {
                "a modal expression such as 'may', 'might', or 'could' marks the claim as possible rather than established"
            }
            SuGroup::ConditionalExpression => {
                "a condition or contingency must hold for the stated outcome to follow"
            }
            SuGroup::Hypothesis => {
                "a tentative explanation or assumption is proposed that still requires testing"
            }
            SuGroup::Prediction => {
                "a forecast or projection is made that may or may not come true"
            }
            SuGroup::InterrogativeExpression => {
                "a question is posed or embedded, signalling an unsettled point"
            }
            SuGroup::NonGeneralizableStatement => {
                "the claim is restricted in scope and may not carry over to a broader population or setting"
            }
            SuGroup::AdverbialSU => {
                "an adverb weakens or shifts the certainty of the statement"
            }
            SuGroup::Negation => {
                "a negated epistemic word reports missing or inconclusive knowledge"
            }
            SuGroup::Subjectivity => {
                "the claim rests on opinion, belief, or the authors' own vantage point"
            }
            SuGroup::Conjectural => {
                "the claim is framed as a guess or appearance rather than observed fact"
            }
            SuGroup::Disagreement => {
                "conflicting findings or opposing positions leave the matter contested"
            }
        }
    }
}

impl fmt::Display for SuGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Attribution of an uncertain claim.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AuthorialRef {
    /// The authors of the text at hand.
    CurrentAuthors,
    /// The authors of earlier, cited, or referenced work.
    PreviousStudy,
    /// Both the current authors and earlier work.
    Both,
}

impl AuthorialRef {
    /// Name used in serialized output and gold files.
    pub fn name(&self) -> &'static str {
        match self {
            AuthorialRef::CurrentAuthors => "authors",
            AuthorialRef::PreviousStudy => "previous",
            AuthorialRef::Both => "both",
        }
    }

    pub fn from_name(name: &str) -> Option<AuthorialRef> {
        match name {
            "authors" => Some(AuthorialRef::CurrentAuthors),
            "previous" => Some(AuthorialRef::PreviousStudy),
            "both" => Some(AuthorialRef::Both),
            _ => None,
        }
    }
}

impl fmt::Display for AuthorialRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Coordinating conjunctions that open a new clause after a comma.
const COORDINATORS: [&str; 5] = ["and", "but", "or", "yet", "so"];

/// Contrastive adverbs that open a new clause after a comma.
const CONTRASTIVES: [&str; 5] = ["however", "although", "though", "whereas", "while"];

/// Connectives that, when sentence-initial, make the leading comma-terminated
/// prefix its own clause.
const INITIAL_CONNECTIVES: [&str; 24] = [
    "however",
    "although",
    "though",
    "whereas",
    "while",
    "if",
    "since",
    "because",
    "unless",
    "when",
    "moreover",
    "furthermore",
    "nevertheless",
    "nonetheless",
    "therefore",
    "thus",
    "hence",
    "consequently",
    "meanwhile",
    "instead",
    "indeed",
    "additionally",
    "similarly",
    "conversely",
];

/// Split a sentence into maximal contiguous clause-like token ranges.
///
/// Boundaries fall after `;` and `:`, after a comma directly followed by a
/// coordinating conjunction or contrastive adverb, and after the first comma
/// when the sentence opens with an adverb or subordinating connective. The
/// returned ranges partition `0..tokens.len()`. Empty sentences yield an
/// empty list.
///
/// This is punctuation- and lexicon-driven on purpose: it behaves the same
/// whether or not dependency information is available.
pub fn clause_segments(sentence: &Sentence) -> Vec<Range<usize>> {
    let tokens = &sentence.tokens;
    if tokens.is_empty() {
        return Vec::new();
    }

    // Indices i such that a boundary falls between token i and token i+1.
    let mut cuts: BTreeSet<usize> = BTreeSet::new();

    for (i, tok) in tokens.iter().enumerate() {
        if i + 1 >= tokens.len() {
            break;
        }
        match tok.text.as_str() {
            ";" | ":" => {
                cuts.insert(i);
            }
            "," => {
                let next = tokens[i + 1].lower.as_str();
                if COORDINATORS.contains(&next) || CONTRASTIVES.contains(&next) {
                    cuts.insert(i);
                }
            }
            _ => {}
        }
    }

    // Sentence-initial connective prefix: cut after the first comma.
    let first = &tokens[0];
    let initial_trigger = first.pos == "ADV"
        || first.pos == "SCONJ"
        || INITIAL_CONNECTIVES.contains(&first.lower.as_str());
    if initial_trigger {
        if let Some(comma) = tokens.iter().position(|t| t.text == ",") {
            if comma + 1 < tokens.len() {
                cuts.insert(comma);
            }
        }
    }

    let mut ranges = Vec::with_capacity(cuts.len() + 1);
    let mut start = 0;
    for cut in cuts {
        ranges.push(start..cut + 1);
        start = cut + 1;
    }
    ranges.push(start..tokens.len());
    ranges
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::{ingest_plain, IngestConfig};

    fn plain_sentence(text: &str) -> Sentence {
        let doc = ingest_plain(text, &IngestConfig::default());
        assert_eq!(doc.sentences.len(), 1, "expected one sentence in {text:?}");
        doc.sentences.into_iter().next().unwrap()
    }

    fn clause_texts(s: &Sentence) -> Vec<String> {
        clause_segments(s)
            .iter()
            .map(|r| {
                s.tokens[r.clone()]
                    .iter()
                    .map(|t| t.text.as_str())
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect()
    }

    #[test]
    fn initial_adverb_comma_prefix_is_its_own_clause() {
        let s = plain_sentence("However, we find no evidence to support this hypothesis either.");
        let clauses = clause_texts(&s);
        assert_eq!(clauses.len(), 2);
        assert_eq!(clauses[0], "However ,");
        assert!(clauses[1].starts_with("we find"));
        assert!(clauses[1].ends_with("either ."));
    }

    #[test]
    fn sentence_without_boundaries_is_one_clause() {
        let s = plain_sentence(
            "It is possible that corticosteroids prevent some acute gastrointestinal complications.",
        );
        let ranges = clause_segments(&s);
        assert_eq!(ranges, vec![0..s.tokens.len()]);
    }

    #[test]
    fn single_token_sentence() {
        let s = plain_sentence("Yes");
        assert_eq!(clause_segments(&s), vec![0..1]);
    }

    #[test]
    fn initial_subordinator_cuts_at_first_comma() {
        let s = plain_sentence("Although we ruled out bias, the mechanism may vary.");
        let clauses = clause_texts(&s);
        assert_eq!(clauses.len(), 2);
        assert_eq!(clauses[0], "Although we ruled out bias ,");
        assert_eq!(clauses[1], "the mechanism may vary .");
    }

    #[test]
    fn comma_before_contrastive_adverb_cuts() {
        let s = plain_sentence("The effect was strong, although the sample was small.");
        let clauses = clause_texts(&s);
        assert_eq!(clauses.len(), 2);
        assert!(clauses[1].starts_with("although"));
    }

    #[test]
    fn semicolon_cuts() {
        let s = plain_sentence("The data are noisy; the model still converges.");
        let clauses = clause_texts(&s);
        assert_eq!(clauses.len(), 2);
        assert!(clauses[0].ends_with(";"));
    }

    #[test]
    fn plain_comma_does_not_cut() {
        let s = plain_sentence("In addition, the role of the public is often unclear.");
        assert_eq!(clause_segments(&s).len(), 1);
    }

    #[test]
    fn empty_sentence_yields_no_clauses() {
        let s = Sentence {
            text: String::new(),
            tokens: Vec::new(),
            doc_index: 0,
        };
        assert!(clause_segments(&s).is_empty());
    }

    #[test]
    fn clause_ranges_partition_token_span() {
        let samples = [
            "However, we find no evidence to support this hypothesis either.",
            "If there are any violations, subsequent procedures may be invalid, and if so, the conclusions would be faulty.",
            "One; two: three, and four.",
            "Yes",
            "A, b, c, d.",
        ];
        for text in samples {
            let s = plain_sentence(text);
            let ranges = clause_segments(&s);
            let mut covered = 0;
            for r in &ranges {
                assert_eq!(r.start, covered, "ranges must be contiguous in {text:?}");
                assert!(r.start < r.end, "ranges must be non-empty in {text:?}");
                covered = r.end;
            }
            assert_eq!(
                covered,
                s.tokens.len(),
                "ranges must cover all tokens in {text:?}"
            );
            // Deterministic on identical input.
            assert_eq!(ranges, clause_segments(&s));
        }
    }

    #[test]
    fn group_names_round_trip() {
        for g in SuGroup::ALL {
            assert_eq!(SuGroup::from_name(g.name()), Some(g));
        }
        assert_eq!(SuGroup::from_name("NotAGroup"), None);
        assert_eq!(SuGroup::ALL.len(), 12);
    }

    #[test]
    fn authorial_names_round_trip() {
        for a in [
            AuthorialRef::CurrentAuthors,
            AuthorialRef::PreviousStudy,
            AuthorialRef::Both,
        ] {
            assert_eq!(AuthorialRef::from_name(a.name()), Some(a));
        }
    }
}
