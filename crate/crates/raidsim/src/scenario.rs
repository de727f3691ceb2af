//! Scenario documents: JSON loading with full validation and path context,
//! plus the canonical serialization used for the bundled default.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use raidsim_core::content::{
    validate_skill, validate_stat_block, ClassSpec, GenParam, RawMap, RawValue, RewardCoefficients,
    ScenarioConfig, SkillSpec, StatBlock,
};
use serde_json::Value;

/// Schema version this loader understands.
pub const SCHEMA_VERSION: i64 = 1;

/// The scenario document shipped with the binary: the benchmark encounter
/// with the default player skill range.
pub const BUNDLED_DEFAULT: &str = include_str!("../data/benchmark_default.json");

#[derive(Debug)]
pub enum ScenarioError {
    /// The document is not syntactically valid JSON.
    Parse(String),
    /// The document parsed but failed validation; each entry is
    /// "path: problem".
    Invalid(Vec<String>),
}

impl fmt::Display for ScenarioError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScenarioError::Parse(msg) => write!(f, "scenario parse error: {msg}"),
            ScenarioError::Invalid(issues) => {
                writeln!(f, "scenario validation failed:")?;
                for issue in issues {
                    writeln!(f, "  {issue}")?;
                }
                Ok(())
            }
        }
    }
}

impl std::error::Error for ScenarioError {}

/// Collects "path: problem" strings while walking the document.
struct Issues(Vec<String>);

impl Issues {
    fn push(&mut self, path: &str, problem: impl fmt::Display) {
        self.0.push(format!("{path}: {problem}"));
    }
}

fn as_object<'a>(
    v: &'a Value,
    path: &str,
    issues: &mut Issues,
) -> Option<&'a serde_json::Map<String, Value>> {
    match v.as_object() {
        Some(m) => Some(m),
        None => {
            issues.push(path, "expected an object");
            None
        }
    }
}

fn as_f64(v: &Value, path: &str, issues: &mut Issues) -> Option<f64> {
    match v.as_f64() {
        Some(x) => Some(x),
        None => {
            issues.push(path, "expected a number");
            None
        }
    }
}

/// Converts a JSON object into the loosely-typed map the core validators
/// take. Nested containers are reported rather than silently dropped.
fn to_raw_map(obj: &serde_json::Map<String, Value>, path: &str, issues: &mut Issues) -> RawMap {
    let mut raw = RawMap::new();
    for (key, value) in obj {
        let entry = match value {
            Value::Number(n) => match n.as_f64() {
                Some(x) => RawValue::Number(x),
                None => {
                    issues.push(&format!("{path}.{key}"), "number out of f64 range");
                    continue;
                }
            },
            Value::String(s) => RawValue::Text(s.clone()),
            Value::Bool(b) => RawValue::Flag(*b),
            _ => {
                issues.push(&format!("{path}.{key}"), "expected a number, string, or bool");
                continue;
            }
        };
        raw.insert(key.clone(), entry);
    }
    raw
}

fn walk_stats(v: &Value, path: &str, issues: &mut Issues) -> StatBlock {
    let Some(obj) = as_object(v, path, issues) else {
        return StatBlock::default();
    };
    let raw = to_raw_map(obj, path, issues);
    match validate_stat_block(&raw) {
        Ok(stats) => stats,
        Err(found) => {
            for issue in found {
                issues.push(path, issue);
            }
            StatBlock::default()
        }
    }
}

fn walk_skill(v: &Value, path: &str, issues: &mut Issues) -> SkillSpec {
    let Some(obj) = as_object(v, path, issues) else {
        return SkillSpec::default();
    };
    let raw = to_raw_map(obj, path, issues);
    match validate_skill(&raw) {
        Ok(skill) => skill,
        Err(found) => {
            for issue in found {
                issues.push(path, issue);
            }
            SkillSpec::default()
        }
    }
}

fn walk_class(v: &Value, path: &str, issues: &mut Issues) -> ClassSpec {
    let mut class = ClassSpec { stats: StatBlock::default(), skills: Vec::new() };
    let Some(obj) = as_object(v, path, issues) else {
        return class;
    };
    for key in obj.keys() {
        if key != "stats" && key != "skills" {
            issues.push(&format!("{path}.{key}"), "unknown field");
        }
    }
    if let Some(stats) = obj.get("stats") {
        class.stats = walk_stats(stats, &format!("{path}.stats"), issues);
    }
    match obj.get("skills") {
        Some(Value::Array(items)) => {
            for (i, item) in items.iter().enumerate() {
                class.skills.push(walk_skill(item, &format!("{path}.skills[{i}]"), issues));
            }
        }
        Some(_) => issues.push(&format!("{path}.skills"), "expected an array"),
        None => issues.push(&format!("{path}.skills"), "missing required field"),
    }
    class
}

fn walk_sampling(
    v: &Value,
    path: &str,
    issues: &mut Issues,
) -> BTreeMap<GenParam, Vec<f64>> {
    let mut out = BTreeMap::new();
    let Some(obj) = as_object(v, path, issues) else {
        return out;
    };
    for (key, value) in obj {
        let entry_path = format!("{path}.{key}");
        let Some(param) = GenParam::parse(key) else {
            issues.push(&entry_path, "not a generated parameter name");
            continue;
        };
        match value {
            Value::Array(items) => {
                let mut values = Vec::new();
                for (i, item) in items.iter().enumerate() {
                    if let Some(x) = as_f64(item, &format!("{entry_path}[{i}]"), issues) {
                        values.push(x);
                    }
                }
                out.insert(param, values);
            }
            _ => issues.push(&entry_path, "expected an array of numbers"),
        }
    }
    out
}

fn walk_rewards(v: &Value, path: &str, issues: &mut Issues) -> RewardCoefficients {
    let mut out = RewardCoefficients::default();
    let Some(obj) = as_object(v, path, issues) else {
        return out;
    };
    for (key, value) in obj {
        let entry_path = format!("{path}.{key}");
        let slot = match key.as_str() {
            "damage" => &mut out.damage,
            "back_attack" => &mut out.back_attack,
            "group_win" => &mut out.group_win,
            _ => {
                issues.push(&entry_path, "unknown field");
                continue;
            }
        };
        if let Some(x) = as_f64(value, &entry_path, issues) {
            *slot = x;
        }
    }
    out
}

const TOP_LEVEL_FIELDS: [&str; 9] = [
    "schema_version",
    "arena_radius",
    "tick_dt",
    "episode_time_limit",
    "boss",
    "boss_hp_multiplier",
    "players",
    "content_sampling",
    "reward_coefficients",
];

/// Parses and fully validates a scenario document. Every problem is reported
/// with the path of the offending field; validation walks the whole document
/// rather than stopping at the first issue.
pub fn load_scenario(text: &str) -> Result<ScenarioConfig, ScenarioError> {
    let doc: Value =
        serde_json::from_str(text).map_err(|e| ScenarioError::Parse(e.to_string()))?;
    let mut issues = Issues(Vec::new());
    let Some(obj) = doc.as_object() else {
        return Err(ScenarioError::Invalid(vec!["document: expected an object".to_string()]));
    };

    for key in obj.keys() {
        if !TOP_LEVEL_FIELDS.contains(&key.as_str()) {
            issues.push(key, "unknown field");
        }
    }

    match obj.get("schema_version").and_then(Value::as_i64) {
        Some(SCHEMA_VERSION) => {}
        Some(v) => issues.push(
            "schema_version",
            format!("version {v} not supported (expected {SCHEMA_VERSION})"),
        ),
        None => issues.push("schema_version", format!("missing (expected {SCHEMA_VERSION})")),
    }

    let mut scalar = |field: &str, issues: &mut Issues| -> f64 {
        match obj.get(field) {
            Some(v) => as_f64(v, field, issues).unwrap_or(1.0),
            None => {
                issues.push(field, "missing required field");
                1.0
            }
        }
    };
    let arena_radius = scalar("arena_radius", &mut issues);
    let tick_dt = scalar("tick_dt", &mut issues);
    let episode_time_limit = scalar("episode_time_limit", &mut issues);
    let boss_hp_multiplier = scalar("boss_hp_multiplier", &mut issues);

    let boss = match obj.get("boss") {
        Some(v) => walk_class(v, "boss", &mut issues),
        None => {
            issues.push("boss", "missing required field");
            ClassSpec { stats: StatBlock::default(), skills: vec![SkillSpec::default()] }
        }
    };

    let mut players = Vec::new();
    match obj.get("players") {
        Some(Value::Array(items)) => {
            for (i, item) in items.iter().enumerate() {
                players.push(walk_class(item, &format!("players[{i}]"), &mut issues));
            }
        }
        Some(_) => issues.push("players", "expected an array"),
        None => issues.push("players", "missing required field"),
    }

    let content_sampling = match obj.get("content_sampling") {
        Some(v) => walk_sampling(v, "content_sampling", &mut issues),
        None => BTreeMap::new(),
    };
    let reward_coefficients = match obj.get("reward_coefficients") {
        Some(v) => walk_rewards(v, "reward_coefficients", &mut issues),
        None => RewardCoefficients::default(),
    };

    let scenario = ScenarioConfig {
        arena_radius,
        tick_dt,
        episode_time_limit,
        boss,
        boss_hp_multiplier,
        players,
        content_sampling,
        reward_coefficients,
    };
    // Cross-field checks on the assembled record (player count, positivity…).
    // Field-level problems were already reported with their own paths.
    if issues.0.is_empty() {
        for issue in scenario.check() {
            issues.push("scenario", issue);
        }
    }

    if issues.0.is_empty() {
        Ok(scenario)
    } else {
        Err(ScenarioError::Invalid(issues.0))
    }
}

/// Loads a scenario from a file path, mapping IO problems to ParseError.
pub fn load_scenario_path(path: &Path) -> Result<ScenarioConfig, ScenarioError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ScenarioError::Parse(format!("{}: {e}", path.display())))?;
    load_scenario(&text)
}

/// Canonical document form: schema version header plus the configuration,
/// pretty-printed with sorted map keys and a trailing newline. Writing the
/// same scenario always yields identical bytes.
pub fn scenario_to_json(scenario: &ScenarioConfig) -> String {
    let mut doc = serde_json::Map::new();
    doc.insert("schema_version".to_string(), Value::from(SCHEMA_VERSION));
    let body = serde_json::to_value(scenario).expect("scenario serialization cannot fail");
    if let Value::Object(fields) = body {
        for (k, v) in fields {
            doc.insert(k, v);
        }
    }
    let mut text = serde_json::to_string_pretty(&Value::Object(doc))
        .expect("scenario serialization cannot fail");
    text.push('\n');
    text
}

#[cfg(test)]
mod tests {
    use super::*;
    use raidsim_core::content::benchmark_scenario;

    #[test]
    fn bundled_default_loads_and_matches_generated() {
        let loaded = load_scenario(BUNDLED_DEFAULT).expect("bundled default must validate");
        assert_eq!(loaded, benchmark_scenario(13.0));
    }

    #[test]
    fn bundled_default_is_canonical_serialization() {
        assert_eq!(BUNDLED_DEFAULT, scenario_to_json(&benchmark_scenario(13.0)));
    }

    #[test]
    fn bundled_default_has_expected_shape() {
        let sc = load_scenario(BUNDLED_DEFAULT).unwrap();
        assert_eq!(sc.players.len(), 3);
        let mut ranges: Vec<f64> = sc.boss.skills.iter().map(|s| s.range).collect();
        ranges.sort_by(f64::total_cmp);
        assert_eq!(ranges, vec![6.0, 12.0]);
    }

    #[test]
    fn roundtrip_preserves_scenario() {
        let sc = benchmark_scenario(9.0);
        let text = scenario_to_json(&sc);
        assert_eq!(load_scenario(&text).unwrap(), sc);
    }

    #[test]
    fn missing_schema_version_is_rejected() {
        let text = scenario_to_json(&benchmark_scenario(13.0))
            .replace("\"schema_version\": 1,\n", "");
        let err = load_scenario(&text).unwrap_err();
        let ScenarioError::Invalid(issues) = err else { panic!("expected Invalid") };
        assert!(issues.iter().any(|i| i.contains("schema_version")), "{issues:?}");
    }

    #[test]
    fn wrong_schema_version_is_rejected() {
        let text =
            scenario_to_json(&benchmark_scenario(13.0)).replace("\"schema_version\": 1", "\"schema_version\": 2");
        assert!(load_scenario(&text).is_err());
    }

    #[test]
    fn unknown_top_level_field_is_rejected_with_name() {
        let text = scenario_to_json(&benchmark_scenario(13.0))
            .replacen("\"arena_radius\"", "\"arena_radius_x\"", 1);
        let ScenarioError::Invalid(issues) = load_scenario(&text).unwrap_err() else {
            panic!("expected Invalid")
        };
        assert!(issues.iter().any(|i| i.contains("arena_radius_x")), "{issues:?}");
        // The original field is now missing too.
        assert!(issues.iter().any(|i| i.contains("arena_radius: missing")), "{issues:?}");
    }

    #[test]
    fn missing_players_is_rejected() {
        let mut doc: Value = serde_json::from_str(BUNDLED_DEFAULT).unwrap();
        doc.as_object_mut().unwrap().remove("players");
        let err = load_scenario(&doc.to_string()).unwrap_err();
        let ScenarioError::Invalid(issues) = err else { panic!("expected Invalid") };
        assert!(issues.iter().any(|i| i.starts_with("players")), "{issues:?}");
    }

    #[test]
    fn empty_players_is_rejected_by_cross_field_check() {
        let mut doc: Value = serde_json::from_str(BUNDLED_DEFAULT).unwrap();
        doc["players"] = Value::Array(vec![]);
        let ScenarioError::Invalid(issues) = load_scenario(&doc.to_string()).unwrap_err() else {
            panic!("expected Invalid")
        };
        assert!(issues.iter().any(|i| i.contains("players")), "{issues:?}");
    }

    #[test]
    fn nested_issue_reports_full_path() {
        let mut doc: Value = serde_json::from_str(BUNDLED_DEFAULT).unwrap();
        doc["players"][1]["skills"][0]["range"] = Value::from(25.0);
        let ScenarioError::Invalid(issues) = load_scenario(&doc.to_string()).unwrap_err() else {
            panic!("expected Invalid")
        };
        assert!(
            issues.iter().any(|i| i.contains("players[1].skills[0]") && i.contains("range")),
            "{issues:?}"
        );
    }

    #[test]
    fn unknown_stat_field_is_rejected() {
        let mut doc: Value = serde_json::from_str(BUNDLED_DEFAULT).unwrap();
        doc["boss"]["stats"]["mana_pool"] = Value::from(5.0);
        let ScenarioError::Invalid(issues) = load_scenario(&doc.to_string()).unwrap_err() else {
            panic!("expected Invalid")
        };
        assert!(issues.iter().any(|i| i.contains("mana_pool")), "{issues:?}");
    }

    #[test]
    fn content_sampling_parses_parameter_names() {
        let mut doc: Value = serde_json::from_str(BUNDLED_DEFAULT).unwrap();
        doc["content_sampling"] =
            serde_json::json!({ "range": [5.0, 9.0, 13.0], "cool_time": [3.0] });
        let sc = load_scenario(&doc.to_string()).unwrap();
        assert_eq!(sc.content_sampling[&GenParam::Range], vec![5.0, 9.0, 13.0]);
        assert_eq!(sc.content_sampling[&GenParam::CoolTime], vec![3.0]);
    }

    #[test]
    fn content_sampling_rejects_unknown_parameter() {
        let mut doc: Value = serde_json::from_str(BUNDLED_DEFAULT).unwrap();
        doc["content_sampling"] = serde_json::json!({ "mana": [1.0] });
        assert!(load_scenario(&doc.to_string()).is_err());
    }

    #[test]
    fn malformed_json_is_a_parse_error() {
        match load_scenario("{ not json") {
            Err(ScenarioError::Parse(_)) => {}
            other => panic!("expected Parse, got {other:?}"),
        }
    }

    #[test]
    fn non_object_document_is_invalid() {
        assert!(matches!(load_scenario("[1,2,3]"), Err(ScenarioError::Invalid(_))));
    }
}
