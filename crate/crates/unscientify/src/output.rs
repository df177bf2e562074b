//! Serialized output records and renderers.
//!
//! The JSON schema is stable: keys are emitted in a fixed order with no
//! timestamps, so identical inputs produce byte-identical output. All
//! offsets are byte offsets into the sentence text.

use serde::{Deserialize, Serialize};

use crate::pipeline::SentenceAnnotation;
use crate::text::Sentence;

/// One surviving span as emitted in output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpanRecord {
    pub group: String,
    pub pattern_id: String,
    pub char_start: usize,
    pub char_end: usize,
    pub text: String,
}

/// A cancelled span and the cancellation span responsible.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CancelledRecord {
    pub span: SpanRecord,
    pub by: SpanRecord,
}

/// The per-sentence output record.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SentenceRecord {
    pub index: usize,
    pub text: String,
    pub su_label: String,
    pub spans: Vec<SpanRecord>,
    pub cancelled: Vec<CancelledRecord>,
    pub authorial: Option<String>,
    pub explanation: Vec<String>,
}

impl SentenceRecord {
    pub fn from_annotation(annotation: &SentenceAnnotation, sentence: &Sentence) -> Self {
        let span_record = |m: &crate::matcher::SpanMatch| SpanRecord {
            group: m.label.name().to_string(),
            pattern_id: m.pattern_id.clone(),
            char_start: m.char_start,
            char_end: m.char_end,
            text: m.matched_text.clone(),
        };
        SentenceRecord {
            index: annotation.sentence_index,
            text: sentence.text.clone(),
            su_label: annotation.su_label.name().to_string(),
            spans: annotation.final_spans.iter().map(span_record).collect(),
            cancelled: annotation
                .cancelled
                .iter()
                .map(|c| CancelledRecord {
                    span: span_record(&c.span),
                    by: span_record(&c.by),
                })
                .collect(),
            authorial: annotation.authorial.map(|a| a.name().to_string()),
            explanation: annotation.explanation.clone(),
        }
    }

    /// Group names carried by the surviving spans, deduplicated.
    pub fn groups(&self) -> Vec<&str> {
        let mut seen = Vec::new();
        for span in &self.spans {
            if !seen.contains(&span.group.as_str()) {
                seen.push(span.group.as_str());
            }
        }
        seen
    }
}

/// Build records for a document's annotations, in sentence order.
pub fn records_for(
    annotations: &[SentenceAnnotation],
    sentences: &[Sentence],
) -> Vec<SentenceRecord> {
    annotations
        .iter()
        .zip(sentences)
        .map(|(a, s)| SentenceRecord::from_annotation(a, s))
        .collect()
}

/// One JSON object per line.
pub fn to_jsonl(records: &[SentenceRecord]) -> String {
    let mut out = String::new();
    for r in records {
        out.push_str(&serde_json::to_string(r).expect("record serialization cannot fail"));
        out.push('\n');
    }
    out
}

/// A pretty-printed JSON array of records.
pub fn to_json(records: &[SentenceRecord]) -> String {
    let mut out = serde_json::to_string_pretty(records).expect("record serialization cannot fail");
    out.push('\n');
    out
}

/// ANSI 256-color codes per group, in `SuGroup::ALL` order; cycled by the
/// renderers below.
const GROUP_COLORS: [(&str, u8); 12] = [
    ("ExplicitSU", 167),
    ("Modality", 68),
    ("ConditionalExpression", 136),
    ("Hypothesis", 71),
    ("Prediction", 98),
    ("InterrogativeExpression", 30),
    ("NonGeneralizableStatement", 131),
    ("AdverbialSU", 97),
    ("Negation", 160),
    ("Subjectivity", 32),
    ("Conjectural", 64),
    ("Disagreement", 130),
];

fn color_of(group: &str) -> u8 {
    GROUP_COLORS
        .iter()
        .find(|(name, _)| *name == group)
        .map(|(_, c)| *c)
        .unwrap_or(244)
}

/// Cut points where span coverage changes, for segment-based highlighting.
fn segment_boundaries(text: &str, spans: &[SpanRecord]) -> Vec<usize> {
    let mut cuts: Vec<usize> = vec![0, text.len()];
    for s in spans {
        cuts.push(s.char_start.min(text.len()));
        cuts.push(s.char_end.min(text.len()));
    }
    cuts.sort_unstable();
    cuts.dedup();
    // Guard against offsets that split a UTF-8 character.
    cuts.retain(|&c| text.is_char_boundary(c));
    cuts
}

/// Render annotations for a terminal, with colored span highlights.
pub fn render_tty(records: &[SentenceRecord], color: bool) -> String {
    let mut out = String::new();
    for r in records {
        let tag = if r.su_label == "SU" {
            "[SU]   "
        } else {
            "[non]  "
        };
        out.push_str(tag);
        let cuts = segment_boundaries(&r.text, &r.spans);
        for window in cuts.windows(2) {
            let (a, b) = (window[0], window[1]);
            let covering: Vec<&SpanRecord> = r
                .spans
                .iter()
                .filter(|s| s.char_start <= a && b <= s.char_end)
                .collect();
            let segment = &r.text[a..b];
            if let Some(first) = covering.first() {
                if color {
                    out.push_str(&format!(
                        "\x1b[1;38;5;{}m{}\x1b[0m",
                        color_of(&first.group),
                        segment
                    ));
                } else {
                    out.push_str(&format!("«{segment}»"));
                }
            } else {
                out.push_str(segment);
            }
        }
        out.push('\n');
        for line in &r.explanation {
            out.push_str("       - ");
            out.push_str(line);
            out.push('\n');
        }
        out.push('\n');
    }
    out
}

fn html_escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

const HTML_PALETTE: [(&str, &str); 12] = [
    ("ExplicitSU", "#f4a8a8"),
    ("Modality", "#a8c6f4"),
    ("ConditionalExpression", "#f4d9a8"),
    ("Hypothesis", "#b5e3b5"),
    ("Prediction", "#d3b5f0"),
    ("InterrogativeExpression", "#a8e4e0"),
    ("NonGeneralizableStatement", "#e8b9c8"),
    ("AdverbialSU", "#cfc2ef"),
    ("Negation", "#f2b4b4"),
    ("Subjectivity", "#b4d9f2"),
    ("Conjectural", "#c9e0a9"),
    ("Disagreement", "#ecca9e"),
];

fn html_color(group: &str) -> &'static str {
    HTML_PALETTE
        .iter()
        .find(|(name, _)| *name == group)
        .map(|(_, c)| *c)
        .unwrap_or("#dddddd")
}

/// Render annotations as a standalone HTML page with per-group highlight
/// colors and a legend.
pub fn render_html(records: &[SentenceRecord], title: &str) -> String {
    let mut body = String::new();
    body.push_str("<ul class=\"legend\">\n");
    for (group, color) in HTML_PALETTE {
        body.push_str(&format!(
            "  <li><span class=\"chip\" style=\"background:{color}\"></span>{group}</li>\n"
        ));
    }
    body.push_str("</ul>\n");

    for r in records {
        let label_class = if r.su_label == "SU" { "su" } else { "non-su" };
        body.push_str(&format!(
            "<div class=\"sentence {label_class}\">\n  <span class=\"verdict\">{}</span>\n  <p>",
            r.su_label
        ));
        let cuts = segment_boundaries(&r.text, &r.spans);
        for window in cuts.windows(2) {
            let (a, b) = (window[0], window[1]);
            let covering: Vec<&SpanRecord> = r
                .spans
                .iter()
                .filter(|s| s.char_start <= a && b <= s.char_end)
                .collect();
            let segment = html_escape(&r.text[a..b]);
            if covering.is_empty() {
                body.push_str(&segment);
            } else {
                let groups: Vec<&str> = covering.iter().map(|s| s.group.as_str()).collect();
                let title_attr = html_escape(&groups.join(", "));
                body.push_str(&format!(
                    "<mark style=\"background:{}\" title=\"{}\">{}</mark>",
                    html_color(groups[0]),
                    title_attr,
                    segment
                ));
            }
        }
        body.push_str("</p>\n");
        if !r.explanation.is_empty() {
            body.push_str("  <ul class=\"explanation\">\n");
            for line in &r.explanation {
                body.push_str(&format!("    <li>{}</li>\n", html_escape(line)));
            }
            body.push_str("  </ul>\n");
        }
        body.push_str("</div>\n");
    }

    format!(
        "<!doctype html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\">\n<title>{}</title>\n<style>\n\
         body {{ font-family: Georgia, serif; max-width: 56rem; margin: 2rem auto; line-height: 1.6; }}\n\
         .legend {{ list-style: none; padding: 0; }}\n\
         .legend li {{ display: inline-block; margin-right: 1rem; font-size: 0.85rem; }}\n\
         .chip {{ display: inline-block; width: 0.9rem; height: 0.9rem; margin-right: 0.3rem; vertical-align: middle; border-radius: 2px; }}\n\
         .sentence {{ border-left: 4px solid #ccc; padding: 0.2rem 1rem; margin: 1rem 0; }}\n\
         .sentence.su {{ border-color: #c0392b; }}\n\
         .verdict {{ font-size: 0.75rem; font-weight: bold; color: #666; }}\n\
         .explanation {{ font-size: 0.85rem; color: #444; }}\n\
         mark {{ padding: 0 2px; border-radius: 2px; }}\n\
         </style>\n</head>\n<body>\n<h1>{}</h1>\n{}\n</body>\n</html>\n",
        html_escape(title),
        html_escape(title),
        body
    )
}
