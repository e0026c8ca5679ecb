//! The bundled verification corpus: each `name.toml` scenario sits next to
//! a golden `name.json` document, and a check passes when the rerun document
//! is byte-identical to the golden one.

use std::fs;
use std::path::{Path, PathBuf};

use crate::document::to_text;
use crate::{run_bytes, HarnessError, Overrides};

pub const CORPUS_ENV: &str = "OKBODY_CORPUS";

pub fn default_corpus() -> PathBuf {
    std::env::var_os(CORPUS_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus"))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckResult {
    pub anchor: String,
    pub file: String,
    pub passed: bool,
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Summary {
    pub checks: Vec<CheckResult>,
}

impl Summary {
    pub fn all_passed(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.passed)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let status = if c.passed { "PASS" } else { "FAIL" };
            out.push_str(&format!("{status}  {:<40} {}", c.anchor, c.file));
            if let Some(d) = &c.detail {
                out.push_str(&format!("  ({d})"));
            }
            out.push('\n');
        }
        let passed = self.checks.iter().filter(|c| c.passed).count();
        out.push_str(&format!("{passed}/{} checks passed\n", self.checks.len()));
        out
    }
}

fn anchor_of(text: &str, fallback: &str) -> String {
    crate::scenario::Scenario::parse(text)
        .ok()
        .and_then(|s| s.anchor)
        .unwrap_or_else(|| fallback.to_string())
}

fn first_difference(expected: &str, actual: &str) -> String {
    for (i, (e, a)) in expected.lines().zip(actual.lines()).enumerate() {
        if e != a {
            return format!("line {}: expected `{}`, got `{}`", i + 1, e.trim(), a.trim());
        }
    }
    "documents differ in length".into()
}

fn check(scenario: &Path) -> Result<CheckResult, HarnessError> {
    let file = scenario
        .file_name()
        .map(|f| f.to_string_lossy().into_owned())
        .unwrap_or_default();
    let bytes = fs::read(scenario).map_err(|e| HarnessError::Io(format!("{}: {e}", scenario.display())))?;
    let anchor = anchor_of(&String::from_utf8_lossy(&bytes), &file);
    let golden_path = scenario.with_extension("json");
    let fail = |detail: String| CheckResult {
        anchor: anchor.clone(),
        file: file.clone(),
        passed: false,
        detail: Some(detail),
    };
    let golden = match fs::read_to_string(&golden_path) {
        Ok(g) => g,
        Err(e) => return Ok(fail(format!("golden document: {e}"))),
    };
    let actual = match run_bytes(&bytes, &Overrides::default()) {
        Ok(doc) => to_text(&doc),
        Err(e) => return Ok(fail(e.to_string())),
    };
    if actual == golden {
        Ok(CheckResult {
            anchor,
            file,
            passed: true,
            detail: None,
        })
    } else {
        Ok(fail(first_difference(&golden, &actual)))
    }
}

/// Runs every scenario in `dir`, in file-name order.
pub fn verify_corpus(dir: &Path) -> Result<Summary, HarnessError> {
    let mut scenarios: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| HarnessError::Io(format!("{}: {e}", dir.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "toml"))
        .collect();
    scenarios.sort();
    let checks = scenarios.iter().map(|p| check(p)).collect::<Result<Vec<_>, _>>()?;
    Ok(Summary { checks })
}
