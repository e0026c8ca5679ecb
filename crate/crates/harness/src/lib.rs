//! Scenario runner for `okbody-core`: reads TOML scenarios, dispatches to the
//! library and renders deterministic JSON documents, plots and the bundled
//! verification corpus.

pub mod document;
pub mod plot;
pub mod scenario;
pub mod verify;

use okbody_core::semigroup::{
    self, body_estimate, build, is_generated_up_to, level_one_generators, stabilized_body,
    volume_denominator_check,
};
use okbody_core::surface::{
    chamber_scan, okounkov_body_surface, translate_decomposition, volume_surface, zariski,
    DEFAULT_CHAMBER_CAP,
};
use serde_json::{json, Map, Value};
use thiserror::Error;

use scenario::{resolve, resolve_denominator, Command, Resolved, Scenario};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid scenario at {path}: {message}")]
    Validation { path: String, message: String },
    #[error("computation failed: {0}")]
    Computation(String),
    #[error("{0}")]
    Io(String),
}

impl HarnessError {
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Parse(_) | HarnessError::Io(_) => 2,
            HarnessError::Validation { .. } => 3,
            HarnessError::Computation(_) => 4,
        }
    }

    /// The machine-readable error object written to stderr.
    pub fn to_json(&self) -> Value {
        let (kind, path, message) = match self {
            HarnessError::Parse(m) => ("parse", None, m.clone()),
            HarnessError::Io(m) => ("io", None, m.clone()),
            HarnessError::Validation { path, message } => ("validation", Some(path.clone()), message.clone()),
            HarnessError::Computation(m) => ("computation", None, m.clone()),
        };
        json!({ "error": { "kind": kind, "path": path, "message": message, "exit_code": self.exit_code() } })
    }
}

fn computation(e: impl std::fmt::Display) -> HarnessError {
    HarnessError::Computation(e.to_string())
}

/// Command-line settings that take precedence over the scenario's options.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub command: Option<Command>,
    pub max_degree: Option<u32>,
    pub point_mode: Option<String>,
}

/// Parses and runs a scenario, returning the result document.
pub fn run_bytes(bytes: &[u8], overrides: &Overrides) -> Result<Value, HarnessError> {
    let text = std::str::from_utf8(bytes).map_err(|e| HarnessError::Parse(e.to_string()))?;
    let scenario = Scenario::parse(text)?;
    let command = overrides
        .command
        .or(scenario.command)
        .ok_or_else(|| HarnessError::Validation {
            path: "command".into(),
            message: "missing".into(),
        })?;
    let body = execute(&scenario, command, overrides)?;
    Ok(document::finish(command.name(), body, bytes))
}

fn execute(
    scenario: &Scenario,
    command: Command,
    overrides: &Overrides,
) -> Result<Map<String, Value>, HarnessError> {
    let mut out = Map::new();
    if command == Command::Denominator {
        let (vol, d, n) = resolve_denominator(scenario)?;
        out.insert("volume".into(), document::rational(&vol));
        out.insert("d".into(), json!(d));
        out.insert("n".into(), json!(n));
        out.insert("divides".into(), json!(volume_denominator_check(&vol, d, n)));
        return Ok(out);
    }
    let max_degree = overrides
        .max_degree
        .or(scenario.options.max_degree)
        .unwrap_or(semigroup::DEFAULT_MAX_DEGREE);
    match resolve(scenario, overrides.point_mode.as_deref())? {
        Resolved::Sections { model, flag } => match command {
            Command::Body => {
                let s = stabilized_body(&model, &flag, max_degree).map_err(computation)?;
                out.insert("body".into(), document::polytope(&s.body));
                out.insert("stabilized".into(), json!(s.stabilized));
                out.insert("stabilized_at".into(), json!(s.at));
                out.insert(
                    "self_intersection".into(),
                    Value::String(model.self_intersection().to_string()),
                );
            }
            Command::Semigroup => {
                let gamma = build(&model, &flag, max_degree).map_err(computation)?;
                let mut levels = Map::new();
                for (m, level) in gamma.levels() {
                    levels.insert(m.to_string(), json!(level.iter().collect::<Vec<_>>()));
                }
                out.insert("levels".into(), Value::Object(levels));
                out.insert("closure_violations".into(), json!(gamma.closure_violations().len()));
                out.insert(
                    "body_estimate".into(),
                    document::polytope(&body_estimate(&gamma).map_err(computation)?),
                );
            }
            Command::Certify => {
                let gamma = build(&model, &flag, max_degree).map_err(computation)?;
                let gens = level_one_generators(&gamma);
                let report =
                    is_generated_up_to(&gamma, &gens, max_degree).map_err(computation)?;
                out.insert(
                    "body_estimate".into(),
                    document::polytope(&body_estimate(&gamma).map_err(computation)?),
                );
                out.insert("generation".into(), document::generation(&report, max_degree));
            }
            other => {
                return Err(HarnessError::Validation {
                    path: "command".into(),
                    message: format!("{} needs a surface model", other.name()),
                })
            }
        },
        Resolved::Surface {
            model,
            divisor,
            flag,
            mode,
        } => {
            let need_flag = || {
                flag.clone().ok_or_else(|| HarnessError::Validation {
                    path: "flag".into(),
                    message: "missing".into(),
                })
            };
            out.insert("divisor".into(), document::class(&divisor));
            match command {
                Command::Zariski => {
                    let z = zariski(&model, &divisor).map_err(computation)?;
                    let vol = volume_surface(&model, &divisor).map_err(computation)?;
                    out.insert("zariski".into(), document::zariski(&model, &z, &vol));
                }
                Command::Scan => {
                    let f = need_flag()?;
                    let s = chamber_scan(&model, &divisor, &f, DEFAULT_CHAMBER_CAP)
                        .map_err(computation)?;
                    out.insert("scan".into(), document::scan(&model, &s));
                }
                Command::Body => {
                    let f = need_flag()?;
                    let b = okounkov_body_surface(&model, &divisor, &f, &mode).map_err(computation)?;
                    out.insert("body".into(), document::surface_body(&b));
                    let vol = volume_surface(&model, &divisor).map_err(computation)?;
                    out.insert("volume_surface".into(), document::rational(&vol));
                }
                Command::Translate => {
                    let f = need_flag()?;
                    let t = translate_decomposition(&model, &divisor, &f, &mode).map_err(computation)?;
                    let vol = volume_surface(&model, &divisor).map_err(computation)?;
                    out.insert("zariski".into(), document::zariski(&model, &t.decomposition, &vol));
                    out.insert("body_of_p".into(), document::surface_body(&t.body_of_p));
                    out.insert("body_of_d".into(), document::surface_body(&t.body_of_d));
                    out.insert("shift".into(), document::vector(&t.shift));
                }
                other => {
                    return Err(HarnessError::Validation {
                        path: "command".into(),
                        message: format!("{} needs a section model", other.name()),
                    })
                }
            }
        }
    }
    Ok(out)
}

/// Runs a scenario and returns the 2D polytope its `body` command produces.
pub fn body_polytope(
    bytes: &[u8],
    overrides: &Overrides,
) -> Result<okbody_core::exactgeom::QPolytope, HarnessError> {
    let text = std::str::from_utf8(bytes).map_err(|e| HarnessError::Parse(e.to_string()))?;
    let scenario = Scenario::parse(text)?;
    let max_degree = overrides
        .max_degree
        .or(scenario.options.max_degree)
        .unwrap_or(semigroup::DEFAULT_MAX_DEGREE);
    match resolve(&scenario, overrides.point_mode.as_deref())? {
        Resolved::Sections { model, flag } => Ok(stabilized_body(&model, &flag, max_degree)
            .map_err(computation)?
            .body),
        Resolved::Surface {
            model,
            divisor,
            flag,
            mode,
        } => {
            let f = flag.ok_or_else(|| HarnessError::Validation {
                path: "flag".into(),
                message: "missing".into(),
            })?;
            Ok(okounkov_body_surface(&model, &divisor, &f, &mode)
                .map_err(computation)?
                .polytope)
        }
    }
}
