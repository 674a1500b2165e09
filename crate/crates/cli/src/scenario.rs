//! Scenario files: TOML (`[[scenario]]` tables) or JSON (`{"scenario": [...]}`).

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::checks::Check;
use crate::UsageError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Expect {
    #[default]
    Pass,
    Fail,
}

/// A golden value at a JSON pointer into the payload. Numbers compare within
/// `tol` (or the global tolerance), everything else exactly.
#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct Golden {
    pub pointer: String,
    pub value: Value,
    #[serde(default)]
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    name: String,
    check: String,
    #[serde(default)]
    params: Option<Value>,
    #[serde(default)]
    expect: Expect,
    #[serde(default)]
    golden: Vec<Golden>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    scenario: Vec<RawScenario>,
}

#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    pub check: Check,
    pub expect: Expect,
    pub golden: Vec<Golden>,
    pub source: PathBuf,
}

/// Line of the first `key = ...` or `"key":` in `text`.
fn line_of_key(text: &str, key: &str) -> Option<usize> {
    text.lines().position(|l| {
        let t = l.trim_start();
        t.strip_prefix(key).is_some_and(|r| r.trim_start().starts_with('='))
            || t.starts_with(&format!("\"{key}\""))
    })
    .map(|i| i + 1)
}

/// Name in backticks after `unknown field`, as serde reports it.
fn unknown_field(msg: &str) -> Option<&str> {
    let rest = msg.split_once("unknown field `")?.1;
    rest.split_once('`').map(|(k, _)| k)
}

fn build(raw: RawScenario, text: &str, path: &Path) -> Result<Scenario, UsageError> {
    let params = raw.params.unwrap_or_else(|| Value::Object(Default::default()));
    let tagged = serde_json::json!({ "check": raw.check, "params": params });
    let check: Check = serde_json::from_value(tagged).map_err(|e| {
        let msg = e.to_string();
        let line = unknown_field(&msg).and_then(|k| line_of_key(text, k));
        let at = line.map_or(String::new(), |l| format!(" line {l}:"));
        UsageError(format!("{}:{at} scenario {:?}: {msg}", path.display(), raw.name))
    })?;
    Ok(Scenario { name: raw.name, check, expect: raw.expect, golden: raw.golden, source: path.to_path_buf() })
}

/// Parses scenario text; the format follows the extension (`.json` or TOML).
pub fn parse_scenarios(text: &str, path: &Path) -> Result<Vec<Scenario>, UsageError> {
    let file: ScenarioFile = if path.extension().is_some_and(|e| e == "json") {
        serde_json::from_str(text).map_err(|e| UsageError(format!("{}: {e}", path.display())))?
    } else {
        toml::from_str(text).map_err(|e| UsageError(format!("{}: {e}", path.display())))?
    };
    file.scenario.into_iter().map(|raw| build(raw, text, path)).collect()
}

pub fn load_file(path: &Path) -> Result<Vec<Scenario>, UsageError> {
    let text = std::fs::read_to_string(path).map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
    parse_scenarios(&text, path)
}

/// All `.toml` and `.json` files of `dir`, in name order.
pub fn load_dir(dir: &Path) -> Result<Vec<Scenario>, UsageError> {
    let entries = std::fs::read_dir(dir).map_err(|e| UsageError(format!("{}: {e}", dir.display())))?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|e| e == "toml" || e == "json"))
        .collect();
    files.sort();
    let mut out = Vec::new();
    for f in files {
        out.extend(load_file(&f)?);
    }
    if out.is_empty() {
        return Err(UsageError(format!("{}: no scenarios found", dir.display())));
    }
    let mut names: Vec<&str> = out.iter().map(|s| s.name.as_str()).collect();
    names.sort_unstable();
    if let Some(w) = names.windows(2).find(|w| w[0] == w[1]) {
        return Err(UsageError(format!("duplicate scenario name {:?}", w[0])));
    }
    Ok(out)
}
