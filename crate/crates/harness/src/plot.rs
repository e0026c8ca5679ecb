//! Plot output for planar bodies: SVG for viewing (floats), CSV for exact
//! vertex coordinates.

use okbody_core::exactgeom::{hull, QPolytope, QVector};
use okbody_core::rational::{format_rational, parse_rational, to_f64};

use crate::HarnessError;

fn require_planar(p: &QPolytope) -> Result<(), HarnessError> {
    if p.dim() != 2 {
        return Err(HarnessError::Computation(format!(
            "plots need a planar body, got ambient dimension {}",
            p.dim()
        )));
    }
    Ok(())
}

/// One `x,y` row per vertex in boundary order, exact rationals.
pub fn csv(p: &QPolytope) -> Result<String, HarnessError> {
    require_planar(p)?;
    let mut out = String::new();
    for v in p.cyclic_vertices() {
        let c = v.coords();
        out.push_str(&format!("{},{}\n", format_rational(&c[0]), format_rational(&c[1])));
    }
    Ok(out)
}

/// Reads rows written by [`csv`] and re-hulls them.
pub fn parse_csv(text: &str) -> Result<QPolytope, HarnessError> {
    let mut points = Vec::new();
    for (i, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 2 {
            return Err(HarnessError::Parse(format!("line {}: expected two fields", i + 1)));
        }
        let coords = fields
            .iter()
            .map(|f| parse_rational(f.trim()).map_err(|e| HarnessError::Parse(format!("line {}: {e}", i + 1))))
            .collect::<Result<Vec<_>, _>>()?;
        points.push(QVector::new(coords));
    }
    hull(&points).map_err(|e| HarnessError::Parse(e.to_string()))
}

pub fn svg(p: &QPolytope) -> Result<String, HarnessError> {
    require_planar(p)?;
    const SIZE: f64 = 400.0;
    const MARGIN: f64 = 20.0;
    let pts: Vec<(f64, f64)> = p
        .cyclic_vertices()
        .iter()
        .map(|v| (to_f64(&v.coords()[0]), to_f64(&v.coords()[1])))
        .collect();
    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for &(x, y) in &pts {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    let span = (x1 - x0).max(y1 - y0).max(1e-9);
    let scale = (SIZE - 2.0 * MARGIN) / span;
    // SVG's y axis points down.
    let map = |(x, y): (f64, f64)| (MARGIN + (x - x0) * scale, SIZE - MARGIN - (y - y0) * scale);
    let coords: Vec<String> = pts
        .iter()
        .map(|&q| {
            let (x, y) = map(q);
            format!("{x:.3},{y:.3}")
        })
        .collect();
    let shape = match p.affine_dim() {
        0 => {
            let (x, y) = map(pts[0]);
            format!(r#"<circle cx="{x:.3}" cy="{y:.3}" r="3" fill="black"/>"#)
        }
        1 => format!(
            r#"<polyline points="{}" fill="none" stroke="black" stroke-width="2"/>"#,
            coords.join(" ")
        ),
        _ => format!(
            r#"<polygon points="{}" fill="lightsteelblue" stroke="black" stroke-width="1.5"/>"#,
            coords.join(" ")
        ),
    };
    Ok(format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SIZE}\" height=\"{SIZE}\" viewBox=\"0 0 {SIZE} {SIZE}\">\n  {shape}\n</svg>\n"
    ))
}
