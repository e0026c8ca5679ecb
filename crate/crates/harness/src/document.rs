//! JSON result documents. Objects use `serde_json`'s sorted map, so the same
//! values always serialize to the same bytes.

use okbody_core::exactgeom::{volume, QPolytope, QVector};
use okbody_core::rational::{format_rational, Rational};
use okbody_core::semigroup::GenerationReport;
use okbody_core::surface::{
    Affine, ChamberScan, DivisorClass, OkBody2D, SurfaceModel, ZariskiDecomp,
};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

pub fn rational(x: &Rational) -> Value {
    Value::String(format_rational(x))
}

pub fn vector(v: &QVector) -> Value {
    Value::Array(v.coords().iter().map(rational).collect())
}

pub fn class(d: &DivisorClass) -> Value {
    Value::Array(d.coeffs().iter().map(rational).collect())
}

pub fn polytope(p: &QPolytope) -> Value {
    let halfspaces: Vec<Value> = p
        .halfspaces()
        .iter()
        .map(|h| json!({ "normal": vector(&h.normal), "offset": rational(&h.offset) }))
        .collect();
    json!({
        "ambient_dim": p.dim(),
        "affine_dim": p.affine_dim(),
        "vertices": p.vertices().iter().map(vector).collect::<Vec<_>>(),
        "halfspaces": halfspaces,
        "volume": rational(&volume(p)),
    })
}

fn affine(a: &Affine) -> Value {
    json!({ "constant": rational(&a.constant), "slope": rational(&a.slope) })
}

pub fn surface_body(b: &OkBody2D) -> Value {
    json!({
        "a": rational(&b.a),
        "mu": rational(&b.mu),
        "nodes": b.nodes.iter().map(rational).collect::<Vec<_>>(),
        "alpha": b.alpha.iter().map(rational).collect::<Vec<_>>(),
        "beta": b.beta.iter().map(rational).collect::<Vec<_>>(),
        "polytope": polytope(&b.polytope),
    })
}

pub fn zariski(model: &SurfaceModel, z: &ZariskiDecomp, vol: &Rational) -> Value {
    let mut coeffs = Map::new();
    for (&i, a) in &z.coefficients {
        coeffs.insert(model.curves()[i].name.clone(), rational(a));
    }
    json!({
        "p": class(&z.p),
        "n": class(&z.n),
        "negative_part": coeffs,
        "volume": rational(vol),
    })
}

pub fn scan(model: &SurfaceModel, s: &ChamberScan) -> Value {
    let chambers: Vec<Value> = s
        .chambers
        .iter()
        .map(|c| {
            let mut coeffs = Map::new();
            for (&i, f) in &c.coefficients {
                coeffs.insert(model.curves()[i].name.clone(), affine(f));
            }
            json!({
                "start": rational(&c.start),
                "end": rational(&c.end),
                "negative_part": coeffs,
                "beta": affine(&c.beta),
            })
        })
        .collect();
    json!({
        "breakpoints": s.breakpoints().iter().map(rational).collect::<Vec<_>>(),
        "mu": rational(&s.mu()),
        "chambers": chambers,
    })
}

pub fn generation(r: &GenerationReport, bound: u32) -> Value {
    let missing: Vec<Value> = r
        .witnesses_missing
        .iter()
        .take(16)
        .map(|(m, nu)| json!({ "degree": m, "value": nu }))
        .collect();
    json!({
        "bound": bound,
        "generated_up_to": r.generated_up_to,
        "missing_count": r.witnesses_missing.len(),
        "missing_sample": missing,
        "vertex_hit": r.vertex_hit,
        "certified": r.vertex_hit && r.generated_up_to == bound,
    })
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Adds the command echo and the provenance block.
pub fn finish(command: &str, mut body: Map<String, Value>, scenario: &[u8]) -> Value {
    body.insert("command".into(), Value::String(command.into()));
    body.insert(
        "provenance".into(),
        json!({
            "library": "okbody",
            "version": env!("CARGO_PKG_VERSION"),
            "scenario_sha256": sha256_hex(scenario),
        }),
    );
    Value::Object(body)
}

/// Pretty JSON with a trailing newline.
pub fn to_text(doc: &Value) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}
