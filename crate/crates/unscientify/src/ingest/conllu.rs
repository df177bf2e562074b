//! CoNLL-U reader and writer.
//!
//! One token per line, 10 tab-separated columns:
//! `ID FORM LEMMA UPOS XPOS FEATS HEAD DEPREL DEPS MISC`. Comment lines start
//! with `#`, a blank line terminates a sentence. Multiword-token ranges
//! (`1-2`) and empty nodes (`1.1`) are skipped. Sentence text is rebuilt with
//! single spaces unless `SpaceAfter=No` appears in MISC, and token offsets
//! are byte offsets into that rebuilt text.

use std::collections::BTreeSet;

use crate::error::IngestError;
use crate::text::{is_upos, Document, Sentence, SourceFormat, Token};

struct RawToken {
    form: String,
    lemma: String,
    upos: String,
    feats: BTreeSet<String>,
    head: Option<usize>,
    deprel: String,
    space_after: bool,
}

/// Parse a CoNLL-U document.
pub fn parse_conllu(content: &str) -> Result<Document, IngestError> {
    let mut sentences: Vec<Sentence> = Vec::new();
    let mut pending: Vec<RawToken> = Vec::new();
    let mut expected_id = 1usize;
    let mut doc_id = String::from("conllu");

    let flush =
        |pending: &mut Vec<RawToken>, sentences: &mut Vec<Sentence>, expected_id: &mut usize| {
            if !pending.is_empty() {
                sentences.push(build_sentence(std::mem::take(pending), sentences.len()));
            }
            *expected_id = 1;
        };

    for (line_no, line) in content.lines().enumerate() {
        let line_no = line_no + 1;
        if line.trim().is_empty() {
            flush(&mut pending, &mut sentences, &mut expected_id);
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if let Some(rest) = comment.trim().strip_prefix("newdoc id =") {
                doc_id = rest.trim().to_string();
            }
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 10 {
            return Err(IngestError::malformed(
                line_no,
                format!("expected 10 tab-separated columns, found {}", cols.len()),
            ));
        }
        let id = cols[0];
        // Multiword-token ranges and empty nodes carry no tree position of
        // their own; their component tokens follow.
        if id.contains('-') || id.contains('.') {
            continue;
        }
        let id: usize = id
            .parse()
            .map_err(|_| IngestError::malformed(line_no, format!("non-numeric token ID {id:?}")))?;
        if id != expected_id {
            return Err(IngestError::malformed(
                line_no,
                format!("token ID {id} out of sequence (expected {expected_id})"),
            ));
        }
        expected_id += 1;

        let feats = match cols[5] {
            "_" | "" => BTreeSet::new(),
            s => s.split('|').map(String::from).collect(),
        };
        let head =
            match cols[6] {
                "_" => None,
                s => Some(s.parse::<usize>().map_err(|_| {
                    IngestError::malformed(line_no, format!("non-numeric HEAD {s:?}"))
                })?),
            };
        let upos = match cols[3] {
            tag if is_upos(tag) => tag.to_string(),
            _ => "X".to_string(),
        };
        pending.push(RawToken {
            form: cols[1].to_string(),
            lemma: if cols[2] == "_" {
                String::new()
            } else {
                cols[2].to_string()
            },
            upos,
            feats,
            head,
            deprel: if cols[7] == "_" {
                String::new()
            } else {
                cols[7].to_string()
            },
            space_after: !cols[9].split('|').any(|m| m == "SpaceAfter=No"),
        });
    }
    flush(&mut pending, &mut sentences, &mut expected_id);

    if sentences.is_empty() {
        return Err(IngestError::NoSentences);
    }
    Ok(Document {
        id: doc_id,
        sentences,
        source_format: SourceFormat::Conllu,
    })
}

fn build_sentence(raw: Vec<RawToken>, doc_index: usize) -> Sentence {
    let n = raw.len();
    let mut text = String::new();
    let mut tokens = Vec::with_capacity(n);
    for (i, rt) in raw.into_iter().enumerate() {
        let char_start = text.len();
        text.push_str(&rt.form);
        let char_end = text.len();
        if rt.space_after && i + 1 < n {
            text.push(' ');
        }
        let head = match rt.head {
            // CoNLL-U HEAD is 1-based with 0 for the root; the root points
            // at itself in our model.
            Some(0) | None => i,
            Some(h) => h - 1,
        };
        tokens.push(Token {
            index: i,
            lower: rt.form.to_lowercase(),
            lemma: if rt.lemma.is_empty() {
                rt.form.to_lowercase()
            } else {
                rt.lemma
            },
            text: rt.form,
            pos: rt.upos,
            morph: rt.feats,
            dep: rt.deprel,
            head,
            char_start,
            char_end,
        });
    }
    Sentence {
        text,
        tokens,
        doc_index,
    }
}

/// Serialize a document back to CoNLL-U. `parse_conllu(serialize_conllu(d))`
/// preserves all token fields.
pub fn serialize_conllu(doc: &Document) -> String {
    let mut out = String::new();
    out.push_str(&format!("# newdoc id = {}\n", doc.id));
    for sentence in &doc.sentences {
        out.push_str(&format!("# sent_id = {}\n", sentence.doc_index + 1));
        out.push_str(&format!("# text = {}\n", sentence.text));
        let n = sentence.tokens.len();
        for (i, tok) in sentence.tokens.iter().enumerate() {
            let feats = if tok.morph.is_empty() {
                "_".to_string()
            } else {
                tok.morph.iter().cloned().collect::<Vec<_>>().join("|")
            };
            let head = if tok.head == tok.index {
                0
            } else {
                tok.head + 1
            };
            let deprel = if tok.dep.is_empty() { "_" } else { &tok.dep };
            let space_after = if i + 1 < n && sentence.tokens[i + 1].char_start == tok.char_end {
                "SpaceAfter=No"
            } else {
                "_"
            };
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\t_\t{}\t{}\t{}\t_\t{}\n",
                i + 1,
                tok.text,
                if tok.lemma.is_empty() {
                    "_"
                } else {
                    &tok.lemma
                },
                tok.pos,
                feats,
                head,
                deprel,
                space_after,
            ));
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const TWO_TOKENS: &str = "\
# sent_id = 1
# text = It rains
1\tIt\tit\tPRON\t_\tCase=Nom|Number=Sing\t2\tnsubj\t_\t_
2\trains\train\tVERB\t_\tNumber=Sing\t0\troot\t_\t_

";

    #[test]
    fn parses_two_token_sentence() {
        let doc = parse_conllu(TWO_TOKENS).unwrap();
        assert_eq!(doc.sentences.len(), 1);
        let s = &doc.sentences[0];
        assert_eq!(s.text, "It rains");
        assert_eq!(s.tokens.len(), 2);
        assert_eq!(s.tokens[0].pos, "PRON");
        assert_eq!(s.tokens[1].pos, "VERB");
        assert_eq!(s.tokens[0].lemma, "it");
        assert_eq!(s.tokens[1].head, 1, "root points at itself");
        assert_eq!(s.tokens[0].head, 1, "nsubj attaches to token 2");
        assert!(s.tokens[0].morph.contains("Case=Nom"));
    }

    #[test]
    fn offsets_match_text() {
        let doc = parse_conllu(TWO_TOKENS).unwrap();
        for s in &doc.sentences {
            for t in &s.tokens {
                assert_eq!(&s.text[t.char_start..t.char_end], t.text);
            }
        }
    }

    #[test]
    fn space_after_no_glues_tokens() {
        let input = "1\tdon\tdo\tVERB\t_\t_\t0\troot\t_\tSpaceAfter=No\n2\t't\tnot\tPART\t_\t_\t1\tadvmod\t_\t_\n\n";
        let doc = parse_conllu(input).unwrap();
        assert_eq!(doc.sentences[0].text, "don't");
    }

    #[test]
    fn comments_only_is_no_sentences() {
        let err = parse_conllu("# text = nothing here\n# more\n").unwrap_err();
        assert!(matches!(err, IngestError::NoSentences));
    }

    #[test]
    fn empty_input_is_no_sentences() {
        assert!(matches!(parse_conllu(""), Err(IngestError::NoSentences)));
    }

    #[test]
    fn wrong_column_count_reports_line() {
        let err = parse_conllu("1\tonly\tthree\n\n").unwrap_err();
        match err {
            IngestError::Malformed { line, .. } => assert_eq!(line, 1),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn non_numeric_id_reports_line() {
        let err = parse_conllu("# c\nx\tword\tword\tNOUN\t_\t_\t0\troot\t_\t_\n\n").unwrap_err();
        match err {
            IngestError::Malformed { line, message } => {
                assert_eq!(line, 2);
                assert!(message.contains("non-numeric"));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn multiword_ranges_and_empty_nodes_are_skipped() {
        let input = "\
1-2\tdella\t_\t_\t_\t_\t_\t_\t_\t_
1\tdi\tdi\tADP\t_\t_\t0\troot\t_\t_
2\tla\tla\tDET\t_\t_\t1\tdet\t_\t_
2.1\tghost\tghost\tNOUN\t_\t_\t_\t_\t_\t_

";
        let doc = parse_conllu(input).unwrap();
        assert_eq!(doc.sentences[0].tokens.len(), 2);
        assert_eq!(doc.sentences[0].text, "di la");
    }

    #[test]
    fn unknown_upos_coerces_to_x() {
        let input = "1\tfoo\tfoo\tWEIRD\t_\t_\t0\troot\t_\t_\n\n";
        let doc = parse_conllu(input).unwrap();
        assert_eq!(doc.sentences[0].tokens[0].pos, "X");
    }

    #[test]
    fn round_trip_preserves_token_fields() {
        let doc = parse_conllu(TWO_TOKENS).unwrap();
        let reparsed = parse_conllu(&serialize_conllu(&doc)).unwrap();
        assert_eq!(doc.sentences, reparsed.sentences);
    }

    #[test]
    fn round_trip_preserves_glued_tokens() {
        let input = "1\tdon\tdo\tVERB\t_\t_\t0\troot\t_\tSpaceAfter=No\n2\t't\tnot\tPART\t_\t_\t1\tadvmod\t_\t_\n\n";
        let doc = parse_conllu(input).unwrap();
        let reparsed = parse_conllu(&serialize_conllu(&doc)).unwrap();
        assert_eq!(doc.sentences, reparsed.sentences);
    }
}
