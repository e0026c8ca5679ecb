//! Scenario files: TOML describing a model, a flag, a divisor and a command.
//!
//! Rationals are written either as TOML integers or as strings `"p/q"`.

use std::collections::BTreeMap;

use okbody_core::rational::{parse_rational, Rational};
use okbody_core::sections::{LatticePolytope, SectionModel};
use okbody_core::surface::{Curve, DivisorClass, PointMode, SurfaceError, SurfaceModel};
use okbody_core::valuation::{CurveParam, FlagChart, GraphFlag, MPoly, SurfaceCurveFlag, ToricFlag};
use serde::Deserialize;

use crate::HarnessError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Body,
    Zariski,
    Scan,
    Semigroup,
    Certify,
    Translate,
    Denominator,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Body => "body",
            Command::Zariski => "zariski",
            Command::Scan => "scan",
            Command::Semigroup => "semigroup",
            Command::Certify => "certify",
            Command::Translate => "translate",
            Command::Denominator => "denominator",
        }
    }
}

/// An integer or a `"p/q"` string.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum Num {
    Int(i64),
    Text(String),
}

impl Num {
    fn resolve(&self, path: &str) -> Result<Rational, HarnessError> {
        match self {
            Num::Int(n) => Ok(Rational::from_integer((*n).into())),
            Num::Text(s) => parse_rational(s).map_err(|e| invalid(path, e.to_string())),
        }
    }
}

fn invalid(path: impl Into<String>, message: impl Into<String>) -> HarnessError {
    HarnessError::Validation {
        path: path.into(),
        message: message.into(),
    }
}

fn resolve_all(xs: &[Num], path: &str) -> Result<Vec<Rational>, HarnessError> {
    xs.iter()
        .enumerate()
        .map(|(i, x)| x.resolve(&format!("{path}[{i}]")))
        .collect()
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    /// Label printed by the verification suite.
    pub anchor: Option<String>,
    pub command: Option<Command>,
    pub model: Option<ModelSpec>,
    pub flag: Option<FlagSpec>,
    pub divisor: Option<DivisorSpec>,
    #[serde(default)]
    pub options: Options,
    pub denominator: Option<DenominatorSpec>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ModelSpec {
    Veronese,
    Projective {
        n: usize,
        d: u32,
    },
    Curve {
        c: u32,
    },
    Toric {
        vertices: Vec<Vec<i64>>,
    },
    Surface {
        classes: Vec<String>,
        gram: Vec<Vec<Num>>,
        #[serde(default)]
        curves: Vec<CurveSpec>,
    },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveSpec {
    pub name: String,
    pub class: Vec<Num>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum FlagSpec {
    /// Coordinate hyperplanes through the origin of the first affine chart.
    Coordinate,
    /// The triangular flag `z_k = y_k + z_{k+1}^degree`.
    General { degree: Option<u32> },
    /// A curve `{divisor = 0}` on a surface with a parametrization at a point.
    SurfaceCurve {
        divisor: String,
        param: Vec<String>,
        #[serde(default = "zero_num")]
        base_point: Num,
    },
    Toric {
        vertex: Vec<i64>,
        basis: Vec<Vec<i64>>,
    },
    /// Flag curve on a surface model, by declared curve name or by class.
    Curve {
        name: Option<String>,
        class: Option<Vec<Num>>,
    },
}

fn zero_num() -> Num {
    Num::Int(0)
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DivisorSpec {
    pub class: Vec<Num>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    pub max_degree: Option<u32>,
    pub point_mode: Option<String>,
    #[serde(default)]
    pub ord: BTreeMap<String, Num>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DenominatorSpec {
    pub volume: Num,
    pub d: u32,
    pub n: u32,
}

impl Scenario {
    pub fn parse(text: &str) -> Result<Scenario, HarnessError> {
        toml::from_str(text).map_err(|e| HarnessError::Parse(e.to_string()))
    }
}

/// A scenario resolved into library values.
pub enum Resolved {
    Sections {
        model: SectionModel,
        flag: FlagChart,
    },
    Surface {
        model: SurfaceModel,
        divisor: DivisorClass,
        flag: Option<DivisorClass>,
        mode: PointMode,
    },
}

pub fn resolve(scenario: &Scenario, point_mode: Option<&str>) -> Result<Resolved, HarnessError> {
    let model = scenario
        .model
        .as_ref()
        .ok_or_else(|| invalid("model", "missing"))?;
    if let ModelSpec::Surface {
        classes,
        gram,
        curves,
    } = model
    {
        return resolve_surface(scenario, classes, gram, curves, point_mode);
    }
    let sections = match model {
        ModelSpec::Veronese => SectionModel::VeroneseSurface,
        ModelSpec::Projective { n, d } => {
            SectionModel::projective_twist(*n, *d).map_err(|e| invalid("model", e.to_string()))?
        }
        ModelSpec::Curve { c } => {
            SectionModel::curve_divisor(*c).map_err(|e| invalid("model.c", e.to_string()))?
        }
        ModelSpec::Toric { vertices } => SectionModel::ToricPolytope(
            LatticePolytope::new(vertices).map_err(|e| invalid("model.vertices", e.to_string()))?,
        ),
        ModelSpec::Surface { .. } => unreachable!("handled above"),
    };
    let flag_spec = scenario.flag.as_ref().ok_or_else(|| invalid("flag", "missing"))?;
    let flag = section_flag(&sections, flag_spec)?;
    Ok(Resolved::Sections {
        model: sections,
        flag,
    })
}

fn section_flag(model: &SectionModel, spec: &FlagSpec) -> Result<FlagChart, HarnessError> {
    let err = |path: &str, e: &dyn std::fmt::Display| invalid(path, e.to_string());
    match spec {
        FlagSpec::Coordinate => Ok(FlagChart::Coordinate { n: model.dim() }),
        FlagSpec::General { degree } => {
            let degree = match (degree, model) {
                (Some(d), _) => *d,
                (None, SectionModel::ProjectiveTwist { d, .. }) => *d,
                (None, SectionModel::VeroneseSurface) => 2,
                (None, _) => return Err(invalid("flag.degree", "required for this model")),
            };
            let vars = model.variables();
            if vars.len() < 2 {
                return Err(invalid("flag.kind", "graph flags need a projective chart"));
            }
            GraphFlag::general_type(&vars[1..], degree)
                .map(FlagChart::Graph)
                .map_err(|e| err("flag", &e))
        }
        FlagSpec::SurfaceCurve {
            divisor,
            param,
            base_point,
        } => {
            let vars = model.variables();
            let q = MPoly::parse(divisor, &vars).map_err(|e| err("flag.divisor", &e))?;
            let components = param
                .iter()
                .enumerate()
                .map(|(i, s)| MPoly::parse(s, &["t"]).map_err(|e| err(&format!("flag.param[{i}]"), &e)))
                .collect::<Result<Vec<_>, _>>()?;
            let base = base_point.resolve("flag.base_point")?;
            let param = CurveParam::new(components, base).map_err(|e| err("flag.param", &e))?;
            SurfaceCurveFlag::new(q, param)
                .map(FlagChart::SurfaceCurve)
                .map_err(|e| err("flag", &e))
        }
        FlagSpec::Toric { vertex, basis } => ToricFlag::new(vertex.clone(), basis.clone())
            .map(FlagChart::Toric)
            .map_err(|e| err("flag", &e)),
        FlagSpec::Curve { .. } => Err(invalid("flag.kind", "curve flags need a surface model")),
    }
}

fn resolve_surface(
    scenario: &Scenario,
    classes: &[String],
    gram: &[Vec<Num>],
    curves: &[CurveSpec],
    point_mode: Option<&str>,
) -> Result<Resolved, HarnessError> {
    let gram = gram
        .iter()
        .enumerate()
        .map(|(i, row)| resolve_all(row, &format!("model.gram[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    let curves = curves
        .iter()
        .enumerate()
        .map(|(k, c)| {
            Ok(Curve {
                name: c.name.clone(),
                class: DivisorClass(resolve_all(&c.class, &format!("model.curves[{k}].class"))?),
            })
        })
        .collect::<Result<Vec<_>, HarnessError>>()?;
    let model = SurfaceModel::new(classes.to_vec(), gram, curves).map_err(|e| match e {
        SurfaceError::InvalidModel { path, message } => invalid(format!("model.{path}"), message),
        other => invalid("model", other.to_string()),
    })?;
    let divisor = scenario
        .divisor
        .as_ref()
        .ok_or_else(|| invalid("divisor", "missing"))?;
    let divisor = DivisorClass(resolve_all(&divisor.class, "divisor.class")?);
    if divisor.len() != model.rank() {
        return Err(invalid(
            "divisor.class",
            format!("expected {} coefficients, found {}", model.rank(), divisor.len()),
        ));
    }
    let flag = match &scenario.flag {
        None => None,
        Some(FlagSpec::Curve { name, class }) => Some(match (name, class) {
            (Some(name), None) => {
                let i = model
                    .curve_index(name)
                    .ok_or_else(|| invalid("flag.name", format!("no declared curve {name}")))?;
                model.curves()[i].class.clone()
            }
            (None, Some(class)) => {
                let c = DivisorClass(resolve_all(class, "flag.class")?);
                if c.len() != model.rank() {
                    return Err(invalid(
                        "flag.class",
                        format!("expected {} coefficients, found {}", model.rank(), c.len()),
                    ));
                }
                c
            }
            _ => return Err(invalid("flag", "give exactly one of name and class")),
        }),
        Some(_) => return Err(invalid("flag.kind", "surface models take a curve flag")),
    };
    let mode_name = point_mode
        .or(scenario.options.point_mode.as_deref())
        .unwrap_or("generic");
    let mode = match mode_name {
        "generic" => PointMode::Generic,
        "explicit" => {
            let mut ords = BTreeMap::new();
            for (name, v) in &scenario.options.ord {
                if model.curve_index(name).is_none() {
                    return Err(invalid(format!("options.ord.{name}"), "no such declared curve"));
                }
                ords.insert(name.clone(), v.resolve(&format!("options.ord.{name}"))?);
            }
            PointMode::Explicit(ords)
        }
        other => {
            return Err(invalid(
                "options.point_mode",
                format!("expected generic or explicit, found {other}"),
            ))
        }
    };
    Ok(Resolved::Surface {
        model,
        divisor,
        flag,
        mode,
    })
}

pub fn resolve_denominator(scenario: &Scenario) -> Result<(Rational, u32, u32), HarnessError> {
    let spec = scenario
        .denominator
        .as_ref()
        .ok_or_else(|| invalid("denominator", "missing"))?;
    let vol = spec.volume.resolve("denominator.volume")?;
    if vol <= Rational::from_integer(0.into()) {
        return Err(invalid("denominator.volume", "must be positive"));
    }
    Ok((vol, spec.d, spec.n))
}
