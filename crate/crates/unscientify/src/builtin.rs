//! The builtin rule set shipped with the engine.
//!
//! The resource lives in `resources/builtin_rules.json` in the rule file
//! format, so it can be exported, inspected, and forked. Lexicons are
//! deliberately conservative: they are seeded from documented example
//! expressions plus morphological variants (tense, British/American
//! spelling), and users extend coverage through external rule files.

use std::sync::LazyLock;

use crate::rules::{compile_ruleset, parse_ruleset, CompiledRuleSet, RuleSet};

/// The builtin rule file, verbatim.
pub const BUILTIN_RULES_JSON: &str = include_str!("../resources/builtin_rules.json");

static PARSED: LazyLock<RuleSet> = LazyLock::new(|| {
    parse_ruleset(BUILTIN_RULES_JSON.as_bytes()).expect("builtin ruleset must parse")
});

static COMPILED: LazyLock<CompiledRuleSet> =
    LazyLock::new(|| compile_ruleset(&PARSED).expect("builtin ruleset must compile"));

/// A copy of the builtin rule set, version `builtin-1`.
pub fn builtin_ruleset() -> RuleSet {
    PARSED.clone()
}

/// The compiled builtin rule set, shared process-wide.
pub fn builtin_compiled() -> &'static CompiledRuleSet {
    &COMPILED
}
