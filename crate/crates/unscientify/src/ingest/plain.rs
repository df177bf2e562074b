//! Plain-text ingestion: sentence splitting, tokenization, and a heuristic
//! tagger for closed-class words.
//!
//! The tagger is intentionally small. It covers the closed classes the
//! builtin rules and the clause segmenter care about (modals, conjunctions,
//! connective adverbs) plus a few suffix heuristics; everything else is
//! tagged `X`. Byte offsets satisfy
//! `sentence.text[char_start..char_end] == token.text` for every token.

use std::collections::BTreeSet;
use std::sync::LazyLock;

use std::collections::HashMap;

use super::IngestConfig;
use crate::text::{Document, Sentence, SourceFormat, Token};

/// Ingest raw text. Empty or blank input yields a document with no sentences.
pub fn ingest_plain(text: &str, config: &IngestConfig) -> Document {
    let mut sentences = Vec::new();
    for (i, span) in split_sentences(text, &config.abbreviations)
        .into_iter()
        .enumerate()
    {
        let sentence_text = &text[span.0..span.1];
        sentences.push(tokenize_sentence(sentence_text, i));
    }
    Document {
        id: String::from("plain"),
        sentences,
        source_format: SourceFormat::Plain,
    }
}

/// Byte spans of sentences within `text`, trimmed of surrounding whitespace.
/// A sentence ends at `.`, `?`, or `!` followed by whitespace and an
/// uppercase letter, unless the terminator closes a known abbreviation.
fn split_sentences(text: &str, abbreviations: &BTreeSet<String>) -> Vec<(usize, usize)> {
    let mut spans = Vec::new();
    let mut start = 0usize;
    let bytes = text.char_indices().collect::<Vec<_>>();
    let mut i = 0usize;
    while i < bytes.len() {
        let (pos, ch) = bytes[i];
        if matches!(ch, '.' | '?' | '!') {
            let mut end = pos + ch.len_utf8();
            // Absorb an immediate run of terminators and closing marks.
            let mut j = i + 1;
            while j < bytes.len()
                && matches!(
                    bytes[j].1,
                    '.' | '?' | '!' | '"' | '\'' | ')' | ']' | '\u{201d}' | '\u{2019}'
                )
            {
                end = bytes[j].0 + bytes[j].1.len_utf8();
                j += 1;
            }
            let next_non_ws = bytes[j..].iter().find(|(_, c)| !c.is_whitespace());
            let followed_by_upper = match next_non_ws {
                Some((_, c)) => c.is_uppercase(),
                None => true,
            };
            let has_gap = match bytes.get(j) {
                Some((_, c)) => c.is_whitespace(),
                None => true,
            };
            if followed_by_upper
                && has_gap
                && !(ch == '.' && ends_with_abbreviation(&text[..end], abbreviations))
            {
                if text[start..end].trim().chars().next().is_some() {
                    spans.push(trim_span(text, start, end));
                }
                start = end;
            }
            i = j;
        } else {
            i += 1;
        }
    }
    if text[start..].trim().chars().next().is_some() {
        spans.push(trim_span(text, start, text.len()));
    }
    spans
}

fn trim_span(text: &str, start: usize, end: usize) -> (usize, usize) {
    let slice = &text[start..end];
    let trimmed_start = start + (slice.len() - slice.trim_start().len());
    let trimmed_end = end - (slice.len() - slice.trim_end().len());
    (trimmed_start, trimmed_end)
}

/// True if the text ending at a period closes with a known abbreviation
/// preceded by a word boundary.
fn ends_with_abbreviation(text_up_to_dot: &str, abbreviations: &BTreeSet<String>) -> bool {
    abbreviations.iter().any(|abbr| {
        text_up_to_dot.ends_with(abbr.as_str())
            && match text_up_to_dot[..text_up_to_dot.len() - abbr.len()]
                .chars()
                .next_back()
            {
                None => true,
                Some(c) => c.is_whitespace() || c == '(' || c == '[',
            }
    })
}

fn is_peelable_punct(c: char) -> bool {
    c.is_ascii_punctuation()
        || matches!(
            c,
            '\u{201c}'
                | '\u{201d}'
                | '\u{2018}'
                | '\u{2019}'
                | '\u{2026}'
                | '\u{2013}'
                | '\u{2014}'
                | '\u{ab}'
                | '\u{bb}'
        )
}

fn tokenize_sentence(text: &str, doc_index: usize) -> Sentence {
    // (byte_start, byte_end) of raw whitespace-delimited chunks.
    let mut pieces: Vec<(usize, usize)> = Vec::new();
    let mut chunk_start: Option<usize> = None;
    for (pos, ch) in text.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = chunk_start.take() {
                pieces.push((s, pos));
            }
        } else if chunk_start.is_none() {
            chunk_start = Some(pos);
        }
    }
    if let Some(s) = chunk_start {
        pieces.push((s, text.len()));
    }

    // Peel leading/trailing punctuation characters into their own tokens.
    let mut token_spans: Vec<(usize, usize)> = Vec::new();
    for (start, end) in pieces {
        let mut core_start = start;
        let mut core_end = end;
        let mut leading = Vec::new();
        let mut trailing = Vec::new();
        for (pos, ch) in text[start..end].char_indices() {
            if is_peelable_punct(ch) {
                leading.push((start + pos, start + pos + ch.len_utf8()));
                core_start = start + pos + ch.len_utf8();
            } else {
                break;
            }
        }
        for (pos, ch) in text[core_start..end].char_indices().rev() {
            if is_peelable_punct(ch) {
                trailing.push((core_start + pos, core_start + pos + ch.len_utf8()));
                core_end = core_start + pos;
            } else {
                break;
            }
        }
        token_spans.extend(leading);
        if core_start < core_end {
            token_spans.push((core_start, core_end));
        }
        trailing.reverse();
        token_spans.extend(trailing);
    }

    let mut tokens = Vec::with_capacity(token_spans.len());
    let sentence_initial = true;
    let mut first_word = sentence_initial;
    for (start, end) in token_spans {
        let surface = &text[start..end];
        let index = tokens.len();
        let lower = surface.to_lowercase();
        let pos = assign_pos(surface, &lower, first_word);
        let lemma = lemmatize(&lower);
        if pos != "PUNCT" {
            first_word = false;
        }
        let mut tok = Token::new(index, surface, lemma, pos, start, end);
        tok.lower = lower;
        tokens.push(tok);
    }

    Sentence {
        text: text.to_string(),
        tokens,
        doc_index,
    }
}

static LEXICON: LazyLock<HashMap<&'static str, &'static str>> = LazyLock::new(|| {
    let mut m = HashMap::new();
    let mut add = |words: &[&'static str], tag: &'static str| {
        for w in words {
            m.insert(*w, tag);
        }
    };
    add(
        &[
            "i",
            "we",
            "you",
            "he",
            "she",
            "it",
            "they",
            "me",
            "us",
            "him",
            "her",
            "them",
            "one",
            "who",
            "whom",
            "whose",
            "what",
            "there",
            "itself",
            "themselves",
            "ourselves",
            "myself",
            "something",
            "anything",
            "nothing",
            "everything",
        ],
        "PRON",
    );
    add(
        &[
            "the", "a", "an", "this", "these", "those", "each", "every", "some", "any", "no",
            "all", "both", "either", "neither", "another", "such", "which",
        ],
        "DET",
    );
    add(
        &[
            "may", "might", "could", "can", "cannot", "should", "would", "must", "shall", "will",
            "is", "are", "was", "were", "be", "been", "being", "am", "do", "does", "did", "have",
            "has", "had",
        ],
        "AUX",
    );
    add(&["and", "but", "or", "nor", "yet", "so"], "CCONJ");
    add(
        &[
            "if", "because", "although", "though", "while", "whereas", "since", "unless",
            "whether", "when", "that", "as", "until",
        ],
        "SCONJ",
    );
    add(
        &[
            "in", "on", "at", "of", "for", "with", "from", "by", "about", "into", "over", "under",
            "between", "among", "during", "through", "towards", "toward", "upon", "within",
            "without", "across", "against", "along", "around", "behind", "below", "beneath",
            "beside", "near", "before", "after", "despite", "per",
        ],
        "ADP",
    );
    add(
        &[
            "however",
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
            "also",
            "very",
            "quite",
            "rather",
            "somewhat",
            "somehow",
            "perhaps",
            "often",
            "sometimes",
            "always",
            "never",
            "still",
            "already",
            "here",
            "now",
            "then",
            "too",
            "well",
            "almost",
            "nearly",
            "only",
            "just",
            "even",
            "again",
            "further",
            "more",
            "most",
            "less",
            "least",
            "additionally",
            "similarly",
            "conversely",
            "accordingly",
            "first",
            "finally",
            "overall",
            "together",
            "elsewhere",
        ],
        "ADV",
    );
    add(&["not", "to", "'s", "n't"], "PART");
    add(&["oh", "yes", "okay", "alas"], "INTJ");
    m
});

/// Verb stems recognized by the `-ize/-ed/-ing` suffix heuristic.
static VERB_STEMS: LazyLock<BTreeSet<&'static str>> = LazyLock::new(|| {
    [
        "link",
        "show",
        "predict",
        "project",
        "expect",
        "propos",
        "suggest",
        "observ",
        "report",
        "indicat",
        "find",
        "us",
        "conduct",
        "highlight",
        "perceiv",
        "weaken",
        "associat",
        "relat",
        "bas",
        "compar",
        "test",
        "examin",
        "investigat",
        "measur",
        "confirm",
        "general",
        "generalis",
        "generaliz",
        "extrapolat",
        "hypothesis",
        "hypothesiz",
        "hypothesis",
        "assum",
        "argu",
        "estimat",
        "replicat",
        "contest",
        "rul",
        "fail",
        "support",
        "demonstrat",
        "establish",
        "prov",
        "believ",
        "consider",
        "lead",
        "follow",
        "understand",
        "analys",
        "analyz",
        "caus",
        "increas",
        "decreas",
        "work",
        "study",
    ]
    .into_iter()
    .collect()
});

fn assign_pos(surface: &str, lower: &str, first_word: bool) -> String {
    let mut chars = surface.chars();
    if let Some(c) = chars.next() {
        if chars.as_str().is_empty() && is_peelable_punct(c) {
            return "PUNCT".to_string();
        }
    }
    if lower
        .chars()
        .all(|c| c.is_ascii_digit() || c == '.' || c == ',')
        && lower.chars().any(|c| c.is_ascii_digit())
    {
        return "NUM".to_string();
    }
    if let Some(tag) = LEXICON.get(lower) {
        return (*tag).to_string();
    }
    if lower.len() > 3 && lower.ends_with("ly") {
        return "ADV".to_string();
    }
    for suffix in ["tion", "tions", "ment", "ments", "ness", "nesses"] {
        if lower.len() > suffix.len() + 2 && lower.ends_with(suffix) {
            return "NOUN".to_string();
        }
    }
    for suffix in ["ize", "izes", "ise", "ises", "ed", "ing", "es", "s"] {
        if let Some(stem) = lower.strip_suffix(suffix) {
            if stem.len() >= 2 && VERB_STEMS.contains(stem) {
                return "VERB".to_string();
            }
        }
    }
    // Capitalized mid-sentence word with no other evidence: proper noun.
    if !first_word
        && surface.chars().next().is_some_and(|c| c.is_uppercase())
        && surface.chars().skip(1).all(|c| c.is_lowercase())
        && surface.len() > 1
    {
        return "PROPN".to_string();
    }
    "X".to_string()
}

/// Strip plural and inflection endings with fixed rules. Lossy on irregular
/// forms; rules that need exact forms should constrain `LOWER` instead.
fn lemmatize(lower: &str) -> String {
    let n = lower.len();
    if n > 4 && lower.ends_with("ies") {
        return format!("{}y", &lower[..n - 3]);
    }
    if n > 5 && lower.ends_with("ing") {
        return lower[..n - 3].to_string();
    }
    if n > 4 && lower.ends_with("ed") {
        return lower[..n - 2].to_string();
    }
    if n > 3 && lower.ends_with("es") && {
        let stem_last = lower.as_bytes()[n - 3] as char;
        matches!(stem_last, 's' | 'x' | 'z' | 'h')
    } {
        return lower[..n - 2].to_string();
    }
    if n > 3 && lower.ends_with('s') && !lower.ends_with("ss") && !lower.ends_with("us") {
        return lower[..n - 1].to_string();
    }
    lower.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ingest(text: &str) -> Document {
        ingest_plain(text, &IngestConfig::default())
    }

    #[test]
    fn splits_on_terminator_before_uppercase() {
        let doc = ingest("It may rain. We agree.");
        assert_eq!(doc.sentences.len(), 2);
        assert_eq!(doc.sentences[0].text, "It may rain.");
        assert_eq!(doc.sentences[1].text, "We agree.");
        let may = &doc.sentences[0].tokens[1];
        assert_eq!(may.text, "may");
        assert_eq!(may.pos, "AUX");
    }

    #[test]
    fn abbreviation_suppresses_split() {
        let doc = ingest("See Fig. 3 for details.");
        assert_eq!(doc.sentences.len(), 1);
        let doc = ingest("Compare with Smith et al. Also see the appendix.");
        assert_eq!(doc.sentences.len(), 1, "et al. must not end a sentence");
    }

    #[test]
    fn empty_input_yields_empty_document() {
        let doc = ingest("");
        assert!(doc.sentences.is_empty());
        let doc = ingest("   \n\t ");
        assert!(doc.sentences.is_empty());
    }

    #[test]
    fn question_mark_splits() {
        let doc = ingest("Is it real? Nobody knows.");
        assert_eq!(doc.sentences.len(), 2);
        assert_eq!(doc.sentences[0].text, "Is it real?");
    }

    #[test]
    fn lowercase_after_period_does_not_split() {
        let doc = ingest("The p. value was small and stable.");
        assert_eq!(doc.sentences.len(), 1);
    }

    #[test]
    fn punctuation_is_peeled_into_tokens() {
        let doc = ingest("However, we saw \"results\" (table).");
        let toks: Vec<&str> = doc.sentences[0]
            .tokens
            .iter()
            .map(|t| t.text.as_str())
            .collect();
        assert_eq!(
            toks,
            vec!["However", ",", "we", "saw", "\"", "results", "\"", "(", "table", ")", "."]
        );
    }

    #[test]
    fn internal_punctuation_is_kept() {
        let doc = ingest("The low-income group used [6,7] markers.");
        let toks: Vec<&str> = doc.sentences[0]
            .tokens
            .iter()
            .map(|t| t.text.as_str())
            .collect();
        assert!(toks.contains(&"low-income"));
        assert!(toks.contains(&"6,7"));
    }

    #[test]
    fn offsets_recover_token_text() {
        let doc = ingest("However, the \"we\" feeling [6,7] persisted. See Fig. 3 for details.");
        for s in &doc.sentences {
            for t in &s.tokens {
                assert_eq!(&s.text[t.char_start..t.char_end], t.text);
                assert_eq!(t.lower, t.text.to_lowercase());
            }
            // Offsets strictly increase.
            for pair in s.tokens.windows(2) {
                assert!(pair[0].char_end <= pair[1].char_start);
            }
        }
    }

    #[test]
    fn modal_and_connective_tagging() {
        let doc = ingest("However, results might possibly generalize.");
        let s = &doc.sentences[0];
        let tag_of = |text: &str| {
            s.tokens
                .iter()
                .find(|t| t.text == text)
                .unwrap_or_else(|| panic!("token {text:?} missing"))
                .pos
                .clone()
        };
        assert_eq!(tag_of("However"), "ADV");
        assert_eq!(tag_of("might"), "AUX");
        assert_eq!(tag_of("possibly"), "ADV");
        assert_eq!(tag_of("generalize"), "VERB");
    }

    #[test]
    fn suffix_heuristics() {
        let doc = ingest("the observation arrangement happiness");
        let s = &doc.sentences[0];
        assert_eq!(s.tokens[1].pos, "NOUN");
        assert_eq!(s.tokens[2].pos, "NOUN");
        assert_eq!(s.tokens[3].pos, "NOUN");
    }

    #[test]
    fn lemma_rules() {
        assert_eq!(lemmatize("studies"), "study");
        assert_eq!(lemmatize("linked"), "link");
        assert_eq!(lemmatize("showing"), "show");
        assert_eq!(lemmatize("markers"), "marker");
        assert_eq!(lemmatize("boxes"), "box");
        assert_eq!(lemmatize("was"), "was");
        assert_eq!(lemmatize("class"), "class");
    }

    #[test]
    fn doc_indexes_are_sequential() {
        let doc = ingest("One is here. Two is here. Three is here.");
        for (i, s) in doc.sentences.iter().enumerate() {
            assert_eq!(s.doc_index, i);
        }
    }
}
