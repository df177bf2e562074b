//! Precision/recall/F1 harness for comparing predictions against a gold
//! corpus.
//!
//! Degenerate-class convention: a precision or recall with zero positives in
//! its denominator is reported as 1.0, and F1 is 0 when precision + recall
//! is 0, otherwise their harmonic mean. Evaluating a gold file against
//! itself therefore yields 1.0 on every metric.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::output::SentenceRecord;
use crate::text::SuGroup;

/// One gold-standard sentence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldRecord {
    pub text: String,
    pub su: bool,
    #[serde(default)]
    pub groups: Vec<String>,
    #[serde(default)]
    pub authorial: Option<String>,
    /// Optional gold spans for the relaxed span metric.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spans: Option<Vec<GoldSpan>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldSpan {
    pub start: usize,
    pub end: usize,
    pub group: String,
}

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("record count mismatch: {gold} gold records vs {predictions} predictions")]
    CountMismatch { gold: usize, predictions: usize },
    #[error("gold record {index}: unknown group name {group:?}")]
    UnknownGroup { index: usize, group: String },
    #[error("gold record {index}: su=false records must have no groups and no authorial label")]
    InconsistentNegative { index: usize },
    #[error("gold record {index}: span {start}..{end} outside text bounds")]
    SpanOutOfBounds {
        index: usize,
        start: usize,
        end: usize,
    },
}

/// Precision/recall/F1 with the underlying counts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Prf {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub tp: usize,
    pub fp: usize,
    pub false_neg: usize,
}

impl Prf {
    fn from_counts(tp: usize, fp: usize, false_neg: usize) -> Prf {
        let precision = if tp + fp == 0 {
            1.0
        } else {
            tp as f64 / (tp + fp) as f64
        };
        let recall = if tp + false_neg == 0 {
            1.0
        } else {
            tp as f64 / (tp + false_neg) as f64
        };
        Prf {
            precision,
            recall,
            f1: f1_of(precision, recall),
            tp,
            fp,
            false_neg,
        }
    }
}

fn f1_of(precision: f64, recall: f64) -> f64 {
    if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    }
}

/// Unweighted averages across the twelve groups.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MacroAverage {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

/// Relaxed span metric: a predicted span counts when it overlaps a gold
/// span of the same group; a gold span counts as found when any predicted
/// span of its group overlaps it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpanOverlapMetrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub predicted: usize,
    pub matched_predicted: usize,
    pub gold: usize,
    pub matched_gold: usize,
}

/// The full evaluation report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub records: usize,
    /// Sentence-level SU detection, SU as the positive class.
    pub su: Prf,
    pub su_true_neg: usize,
    pub su_accuracy: f64,
    /// Per-group sentence-level multi-label metrics, keyed by group name.
    pub per_group: BTreeMap<String, Prf>,
    pub micro_groups: Prf,
    pub macro_groups: MacroAverage,
    /// Accuracy over sentences gold-labeled SU with an authorial label.
    pub authorial_accuracy: f64,
    pub authorial_correct: usize,
    pub authorial_total: usize,
    /// Present when at least one gold record carries spans.
    pub span_overlap: Option<SpanOverlapMetrics>,
}

fn validate_gold(gold: &[GoldRecord]) -> Result<(), EvalError> {
    for (index, g) in gold.iter().enumerate() {
        for group in &g.groups {
            if SuGroup::from_name(group).is_none() {
                return Err(EvalError::UnknownGroup {
                    index,
                    group: group.clone(),
                });
            }
        }
        if !g.su && (!g.groups.is_empty() || g.authorial.is_some()) {
            return Err(EvalError::InconsistentNegative { index });
        }
        if let Some(spans) = &g.spans {
            for s in spans {
                if SuGroup::from_name(&s.group).is_none() {
                    return Err(EvalError::UnknownGroup {
                        index,
                        group: s.group.clone(),
                    });
                }
                if s.start >= s.end || s.end > g.text.len() {
                    return Err(EvalError::SpanOutOfBounds {
                        index,
                        start: s.start,
                        end: s.end,
                    });
                }
            }
        }
    }
    Ok(())
}

/// Score `predictions` against `gold`. Records are paired by position and
/// the counts must match.
pub fn evaluate(
    gold: &[GoldRecord],
    predictions: &[SentenceRecord],
) -> Result<EvalReport, EvalError> {
    if gold.len() != predictions.len() {
        return Err(EvalError::CountMismatch {
            gold: gold.len(),
            predictions: predictions.len(),
        });
    }
    validate_gold(gold)?;

    // Sentence-level SU.
    let (mut tp, mut fp, mut false_neg, mut tn) = (0usize, 0usize, 0usize, 0usize);
    for (g, p) in gold.iter().zip(predictions) {
        let predicted_su = p.su_label == "SU";
        match (g.su, predicted_su) {
            (true, true) => tp += 1,
            (false, true) => fp += 1,
            (true, false) => false_neg += 1,
            (false, false) => tn += 1,
        }
    }
    let su = Prf::from_counts(tp, fp, false_neg);
    let su_accuracy = if gold.is_empty() {
        1.0
    } else {
        (tp + tn) as f64 / gold.len() as f64
    };

    // Per-group multi-label metrics at the sentence level.
    let mut per_group = BTreeMap::new();
    let (mut micro_tp, mut micro_fp, mut micro_fn) = (0usize, 0usize, 0usize);
    for group in SuGroup::ALL {
        let name = group.name();
        let (mut gtp, mut gfp, mut gfn) = (0usize, 0usize, 0usize);
        for (g, p) in gold.iter().zip(predictions) {
            let in_gold = g.groups.iter().any(|x| x == name);
            let in_pred = p.groups().contains(&name);
            match (in_gold, in_pred) {
                (true, true) => gtp += 1,
                (false, true) => gfp += 1,
                (true, false) => gfn += 1,
                (false, false) => {}
            }
        }
        micro_tp += gtp;
        micro_fp += gfp;
        micro_fn += gfn;
        per_group.insert(name.to_string(), Prf::from_counts(gtp, gfp, gfn));
    }
    let micro_groups = Prf::from_counts(micro_tp, micro_fp, micro_fn);
    let n_groups = per_group.len() as f64;
    let macro_groups = MacroAverage {
        precision: per_group.values().map(|m| m.precision).sum::<f64>() / n_groups,
        recall: per_group.values().map(|m| m.recall).sum::<f64>() / n_groups,
        f1: per_group.values().map(|m| m.f1).sum::<f64>() / n_groups,
    };

    // Authorial accuracy over gold-SU sentences carrying a label.
    let (mut auth_correct, mut auth_total) = (0usize, 0usize);
    for (g, p) in gold.iter().zip(predictions) {
        if let (true, Some(gold_auth)) = (g.su, g.authorial.as_deref()) {
            auth_total += 1;
            if p.authorial.as_deref() == Some(gold_auth) {
                auth_correct += 1;
            }
        }
    }
    let authorial_accuracy = if auth_total == 0 {
        1.0
    } else {
        auth_correct as f64 / auth_total as f64
    };

    // Relaxed span overlap, only over records that carry gold spans.
    let mut span_overlap = None;
    if gold.iter().any(|g| g.spans.is_some()) {
        let overlaps = |a: (usize, usize), b: (usize, usize)| a.0 < b.1 && b.0 < a.1;
        let (mut predicted, mut matched_predicted, mut gold_total, mut matched_gold) =
            (0usize, 0usize, 0usize, 0usize);
        for (g, p) in gold.iter().zip(predictions) {
            let Some(gold_spans) = &g.spans else { continue };
            predicted += p.spans.len();
            gold_total += gold_spans.len();
            for ps in &p.spans {
                if gold_spans.iter().any(|gs| {
                    gs.group == ps.group
                        && overlaps((ps.char_start, ps.char_end), (gs.start, gs.end))
                }) {
                    matched_predicted += 1;
                }
            }
            for gs in gold_spans {
                if p.spans.iter().any(|ps| {
                    gs.group == ps.group
                        && overlaps((ps.char_start, ps.char_end), (gs.start, gs.end))
                }) {
                    matched_gold += 1;
                }
            }
        }
        let precision = if predicted == 0 {
            1.0
        } else {
            matched_predicted as f64 / predicted as f64
        };
        let recall = if gold_total == 0 {
            1.0
        } else {
            matched_gold as f64 / gold_total as f64
        };
        span_overlap = Some(SpanOverlapMetrics {
            precision,
            recall,
            f1: f1_of(precision, recall),
            predicted,
            matched_predicted,
            gold: gold_total,
            matched_gold,
        });
    }

    Ok(EvalReport {
        records: gold.len(),
        su,
        su_true_neg: tn,
        su_accuracy,
        per_group,
        micro_groups,
        macro_groups,
        authorial_accuracy,
        authorial_correct: auth_correct,
        authorial_total: auth_total,
        span_overlap,
    })
}

/// Turn gold records into the prediction records a perfect system would
/// emit. Used for self-evaluation and tests.
pub fn predictions_from_gold(gold: &[GoldRecord]) -> Vec<SentenceRecord> {
    gold.iter()
        .enumerate()
        .map(|(i, g)| SentenceRecord {
            index: i,
            text: g.text.clone(),
            su_label: if g.su { "SU" } else { "NonSU" }.to_string(),
            spans: g
                .spans
                .iter()
                .flatten()
                .map(|s| crate::output::SpanRecord {
                    group: s.group.clone(),
                    pattern_id: String::from("gold"),
                    char_start: s.start,
                    char_end: s.end,
                    text: g.text.get(s.start..s.end).unwrap_or_default().to_string(),
                })
                .chain(
                    g.spans
                        .is_none()
                        .then(|| {
                            // Without gold spans, synthesize one whole-text span per
                            // gold group so group metrics see the right labels.
                            g.groups.iter().map(|group| crate::output::SpanRecord {
                                group: group.clone(),
                                pattern_id: String::from("gold"),
                                char_start: 0,
                                char_end: g.text.len(),
                                text: g.text.clone(),
                            })
                        })
                        .into_iter()
                        .flatten(),
                )
                .collect(),
            cancelled: Vec::new(),
            authorial: g.authorial.clone(),
            explanation: Vec::new(),
        })
        .collect()
}

/// Human-readable table for terminals.
pub fn render_report(report: &EvalReport) -> String {
    let mut out = String::new();
    out.push_str(&format!("records evaluated: {}\n\n", report.records));
    out.push_str("metric                         P        R       F1\n");
    out.push_str(&format!(
        "sentence SU             {:8.4} {:8.4} {:8.4}   (tp={}, fp={}, fn={}, tn={}, acc={:.4})\n",
        report.su.precision,
        report.su.recall,
        report.su.f1,
        report.su.tp,
        report.su.fp,
        report.su.false_neg,
        report.su_true_neg,
        report.su_accuracy,
    ));
    out.push_str(&format!(
        "groups (micro)          {:8.4} {:8.4} {:8.4}\n",
        report.micro_groups.precision, report.micro_groups.recall, report.micro_groups.f1
    ));
    out.push_str(&format!(
        "groups (macro)          {:8.4} {:8.4} {:8.4}\n",
        report.macro_groups.precision, report.macro_groups.recall, report.macro_groups.f1
    ));
    for (name, m) in &report.per_group {
        out.push_str(&format!(
            "  {name:<24} {:7.4} {:8.4} {:8.4}   (tp={}, fp={}, fn={})\n",
            m.precision, m.recall, m.f1, m.tp, m.fp, m.false_neg
        ));
    }
    out.push_str(&format!(
        "authorial accuracy      {:8.4}   ({}/{} gold-SU sentences)\n",
        report.authorial_accuracy, report.authorial_correct, report.authorial_total
    ));
    if let Some(s) = &report.span_overlap {
        out.push_str(&format!(
            "span overlap (relaxed)  {:8.4} {:8.4} {:8.4}   ({}/{} predicted, {}/{} gold)\n",
            s.precision, s.recall, s.f1, s.matched_predicted, s.predicted, s.matched_gold, s.gold
        ));
    }
    out
}
