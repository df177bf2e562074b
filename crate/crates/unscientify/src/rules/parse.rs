//! Rule file reader and writer.
//!
//! Parsing walks the JSON tree by hand so that unknown keys, bad group
//! names, duplicate ids, and broken regexes are each reported with their
//! own diagnostic code instead of being silently dropped.

use std::collections::BTreeSet;

use serde_json::{json, Map, Value};

use super::{
    AuthorialLexicon, CancellationKind, CancellationPattern, Pattern, Quantifier, RuleSet,
    StringPred, TokenConstraint,
};
use crate::error::RuleError;
use crate::text::SuGroup;

/// Parse a rule file. The input must be UTF-8 JSON.
pub fn parse_ruleset(content: &[u8]) -> Result<RuleSet, RuleError> {
    let value: Value = serde_json::from_slice(content)?;
    let obj = expect_object(&value, "top level")?;
    check_keys(
        obj,
        &["version", "groups", "cancellations", "authorial"],
        "top level",
    )?;

    let version = match obj.get("version") {
        Some(Value::String(s)) if !s.is_empty() => s.clone(),
        Some(Value::String(_)) | None => return Err(RuleError::EmptyVersion),
        Some(_) => {
            return Err(RuleError::InvalidValue {
                context: "version".into(),
                message: "expected a string".into(),
            })
        }
    };

    let mut seen_ids: BTreeSet<String> = BTreeSet::new();
    let mut patterns = Vec::new();
    if let Some(groups) = obj.get("groups") {
        let groups = expect_array(groups, "groups")?;
        for entry in groups {
            let entry = expect_object(entry, "groups[] entry")?;
            check_keys(entry, &["group", "patterns"], "group entry")?;
            let group_name = expect_string(
                entry
                    .get("group")
                    .ok_or_else(|| missing("group", "group entry"))?,
                "group",
            )?;
            let group = SuGroup::from_name(group_name)
                .ok_or_else(|| RuleError::UnknownGroup(group_name.to_string()))?;
            let pats = expect_array(
                entry
                    .get("patterns")
                    .ok_or_else(|| missing("patterns", "group entry"))?,
                "patterns",
            )?;
            for raw in pats {
                let (id, note, constraints) = parse_pattern_body(raw, &mut seen_ids)?;
                patterns.push(Pattern {
                    id,
                    group,
                    note,
                    constraints,
                });
            }
        }
    }

    let mut cancellations = Vec::new();
    if let Some(cx) = obj.get("cancellations") {
        let cx = expect_array(cx, "cancellations")?;
        for raw in cx {
            let entry = expect_object(raw, "cancellations[] entry")?;
            check_keys(
                entry,
                &["kind", "id", "note", "tokens"],
                "cancellation entry",
            )?;
            let kind_name = expect_string(
                entry
                    .get("kind")
                    .ok_or_else(|| missing("kind", "cancellation entry"))?,
                "kind",
            )?;
            let kind = CancellationKind::from_name(kind_name)
                .ok_or_else(|| RuleError::UnknownKind(kind_name.to_string()))?;
            let (id, note, constraints) = parse_pattern_body(raw, &mut seen_ids)?;
            cancellations.push(CancellationPattern {
                id,
                kind,
                note,
                constraints,
            });
        }
    }

    let authorial = match obj.get("authorial") {
        Some(raw) => parse_authorial(raw)?,
        None => AuthorialLexicon::default(),
    };

    Ok(RuleSet {
        version,
        patterns,
        cancellations,
        authorial,
    })
}

fn parse_pattern_body(
    raw: &Value,
    seen_ids: &mut BTreeSet<String>,
) -> Result<(String, String, Vec<TokenConstraint>), RuleError> {
    let obj = expect_object(raw, "pattern")?;
    // "kind" is validated by the caller for cancellation entries; group
    // patterns must not carry it.
    check_keys(obj, &["id", "note", "tokens", "kind"], "pattern")?;
    let id =
        expect_string(obj.get("id").ok_or_else(|| missing("id", "pattern"))?, "id")?.to_string();
    if !seen_ids.insert(id.clone()) {
        return Err(RuleError::DuplicateId(id));
    }
    let note = match obj.get("note") {
        Some(v) => expect_string(v, "note")?.to_string(),
        None => String::new(),
    };
    let tokens = expect_array(
        obj.get("tokens")
            .ok_or_else(|| missing("tokens", "pattern"))?,
        "tokens",
    )?;
    if tokens.is_empty() {
        return Err(RuleError::EmptyPattern { pattern_id: id });
    }
    let constraints = tokens
        .iter()
        .enumerate()
        .map(|(i, c)| parse_constraint(c, &id, i))
        .collect::<Result<Vec<_>, _>>()?;
    if constraints.iter().all(|c| c.op.min_zero()) {
        return Err(RuleError::NoRequiredConstraint { pattern_id: id });
    }
    Ok((id, note, constraints))
}

fn parse_constraint(
    raw: &Value,
    pattern_id: &str,
    index: usize,
) -> Result<TokenConstraint, RuleError> {
    let obj = expect_object(raw, "token constraint")?;
    check_keys(
        obj,
        &["TEXT", "LOWER", "LEMMA", "POS", "MORPH", "REGEX", "OP"],
        "token constraint",
    )?;

    let mut constraint = TokenConstraint::default();
    if let Some(v) = obj.get("TEXT") {
        constraint.text = Some(parse_string_pred(v, "TEXT")?);
    }
    if let Some(v) = obj.get("LOWER") {
        constraint.lower = Some(parse_string_pred(v, "LOWER")?);
    }
    if let Some(v) = obj.get("LEMMA") {
        constraint.lemma = Some(parse_string_pred(v, "LEMMA")?);
    }
    if let Some(v) = obj.get("POS") {
        constraint.pos = Some(parse_string_pred(v, "POS")?);
    }
    if let Some(v) = obj.get("MORPH") {
        let items = expect_array(v, "MORPH")?;
        for item in items {
            constraint
                .morph
                .insert(expect_string(item, "MORPH entry")?.to_string());
        }
    }
    if let Some(v) = obj.get("REGEX") {
        let source = expect_string(v, "REGEX")?;
        // Compile eagerly so a broken regex is a parse-time diagnostic.
        regex::Regex::new(&format!("^(?:{source})$")).map_err(|e| RuleError::InvalidRegex {
            pattern_id: pattern_id.to_string(),
            source_text: source.to_string(),
            message: e.to_string(),
        })?;
        constraint.lower_regex = Some(source.to_string());
    }
    if let Some(v) = obj.get("OP") {
        let sym = expect_string(v, "OP")?;
        constraint.op = Quantifier::from_symbol(sym).ok_or_else(|| RuleError::InvalidValue {
            context: "OP".into(),
            message: format!("expected \"?\", \"*\", or \"+\", found {sym:?}"),
        })?;
    }

    if !constraint.has_predicate() && constraint.op == Quantifier::One {
        return Err(RuleError::MissingPredicate {
            pattern_id: pattern_id.to_string(),
            index,
        });
    }
    Ok(constraint)
}

fn parse_string_pred(raw: &Value, context: &str) -> Result<StringPred, RuleError> {
    match raw {
        Value::String(s) => Ok(StringPred::Eq(s.clone())),
        Value::Object(obj) => {
            check_keys(obj, &["IN"], context)?;
            let items = expect_array(
                obj.get("IN").ok_or_else(|| missing("IN", context))?,
                context,
            )?;
            let mut set = BTreeSet::new();
            for item in items {
                set.insert(expect_string(item, context)?.to_string());
            }
            if set.is_empty() {
                return Err(RuleError::InvalidValue {
                    context: context.to_string(),
                    message: "IN list must not be empty".into(),
                });
            }
            Ok(StringPred::In(set))
        }
        _ => Err(RuleError::InvalidValue {
            context: context.to_string(),
            message: "expected a string or {\"IN\": [...]}".into(),
        }),
    }
}

fn parse_authorial(raw: &Value) -> Result<AuthorialLexicon, RuleError> {
    let obj = expect_object(raw, "authorial")?;
    check_keys(
        obj,
        &[
            "first_person",
            "present_study",
            "previous_study",
            "citation_regexes",
        ],
        "authorial",
    )?;
    let mut lexicon = AuthorialLexicon::default();
    if let Some(v) = obj.get("first_person") {
        for item in expect_array(v, "first_person")? {
            lexicon
                .first_person
                .insert(expect_string(item, "first_person entry")?.to_lowercase());
        }
    }
    if let Some(v) = obj.get("present_study") {
        for item in expect_array(v, "present_study")? {
            lexicon
                .present_study
                .push(expect_string(item, "present_study entry")?.to_lowercase());
        }
    }
    if let Some(v) = obj.get("previous_study") {
        for item in expect_array(v, "previous_study")? {
            lexicon
                .previous_study
                .push(expect_string(item, "previous_study entry")?.to_lowercase());
        }
    }
    if let Some(v) = obj.get("citation_regexes") {
        for item in expect_array(v, "citation_regexes")? {
            let source = expect_string(item, "citation_regexes entry")?;
            regex::Regex::new(source).map_err(|e| RuleError::InvalidRegex {
                pattern_id: "authorial.citation_regexes".into(),
                source_text: source.to_string(),
                message: e.to_string(),
            })?;
            lexicon.citation_regexes.push(source.to_string());
        }
    }
    Ok(lexicon)
}

/// Serialize a rule set in the rule file format. The output parses back to
/// an equal [`RuleSet`]. Consecutive patterns of one group are emitted as a
/// single `groups` entry, preserving pattern order.
pub fn serialize_ruleset(rs: &RuleSet) -> String {
    let mut groups: Vec<Value> = Vec::new();
    let mut i = 0;
    while i < rs.patterns.len() {
        let group = rs.patterns[i].group;
        let mut pats = Vec::new();
        while i < rs.patterns.len() && rs.patterns[i].group == group {
            pats.push(pattern_body_json(
                &rs.patterns[i].id,
                &rs.patterns[i].note,
                &rs.patterns[i].constraints,
                None,
            ));
            i += 1;
        }
        groups.push(json!({ "group": group.name(), "patterns": pats }));
    }

    let cancellations: Vec<Value> = rs
        .cancellations
        .iter()
        .map(|c| pattern_body_json(&c.id, &c.note, &c.constraints, Some(c.kind)))
        .collect();

    let authorial = json!({
        "first_person": rs.authorial.first_person.iter().collect::<Vec<_>>(),
        "present_study": rs.authorial.present_study,
        "previous_study": rs.authorial.previous_study,
        "citation_regexes": rs.authorial.citation_regexes,
    });

    let doc = json!({
        "version": rs.version,
        "groups": groups,
        "cancellations": cancellations,
        "authorial": authorial,
    });
    serde_json::to_string_pretty(&doc).expect("ruleset serialization cannot fail")
}

fn pattern_body_json(
    id: &str,
    note: &str,
    constraints: &[TokenConstraint],
    kind: Option<CancellationKind>,
) -> Value {
    let tokens: Vec<Value> = constraints.iter().map(constraint_json).collect();
    let mut obj = Map::new();
    if let Some(kind) = kind {
        obj.insert("kind".into(), json!(kind.name()));
    }
    obj.insert("id".into(), json!(id));
    if !note.is_empty() {
        obj.insert("note".into(), json!(note));
    }
    obj.insert("tokens".into(), Value::Array(tokens));
    Value::Object(obj)
}

fn constraint_json(c: &TokenConstraint) -> Value {
    let mut obj = Map::new();
    let pred = |p: &StringPred| match p {
        StringPred::Eq(s) => json!(s),
        StringPred::In(set) => json!({ "IN": set.iter().collect::<Vec<_>>() }),
    };
    if let Some(p) = &c.text {
        obj.insert("TEXT".into(), pred(p));
    }
    if let Some(p) = &c.lower {
        obj.insert("LOWER".into(), pred(p));
    }
    if let Some(p) = &c.lemma {
        obj.insert("LEMMA".into(), pred(p));
    }
    if let Some(p) = &c.pos {
        obj.insert("POS".into(), pred(p));
    }
    if !c.morph.is_empty() {
        obj.insert("MORPH".into(), json!(c.morph.iter().collect::<Vec<_>>()));
    }
    if let Some(r) = &c.lower_regex {
        obj.insert("REGEX".into(), json!(r));
    }
    if let Some(sym) = c.op.symbol() {
        obj.insert("OP".into(), json!(sym));
    }
    Value::Object(obj)
}

fn expect_object<'a>(v: &'a Value, context: &str) -> Result<&'a Map<String, Value>, RuleError> {
    v.as_object().ok_or_else(|| RuleError::InvalidValue {
        context: context.to_string(),
        message: "expected an object".into(),
    })
}

fn expect_array<'a>(v: &'a Value, context: &str) -> Result<&'a Vec<Value>, RuleError> {
    v.as_array().ok_or_else(|| RuleError::InvalidValue {
        context: context.to_string(),
        message: "expected an array".into(),
    })
}

fn expect_string<'a>(v: &'a Value, context: &str) -> Result<&'a str, RuleError> {
    v.as_str().ok_or_else(|| RuleError::InvalidValue {
        context: context.to_string(),
        message: "expected a string".into(),
    })
}

fn missing(key: &str, context: &str) -> RuleError {
    RuleError::InvalidValue {
        context: context.to_string(),
        message: format!("missing required key {key:?}"),
    }
}

fn check_keys(obj: &Map<String, Value>, allowed: &[&str], context: &str) -> Result<(), RuleError> {
    for key in obj.keys() {
        if !allowed.contains(&key.as_str()) {
            return Err(RuleError::UnknownKey {
                key: key.clone(),
                context: context.to_string(),
            });
        }
    }
    Ok(())
}
