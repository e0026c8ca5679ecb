//! Intersection theory on a declared Picard lattice, Zariski decomposition,
//! chamber scans along `D - tC` and Okounkov polygons of big divisors.
//!
//! Correctness is relative to the declared curve list: nefness and
//! pseudo-effectivity are tested against those curves only (plus `P² ≥ 0`).
//! A model that omits a negative curve gets wrong answers, not errors.

mod scan;
mod zariski;

use std::fmt;

use num_traits::Zero;
use thiserror::Error;

use crate::exactgeom::GeomError;
use crate::linalg::{self, Matrix};
use crate::rational::Rational;

pub use scan::{
    chamber_scan, mu, okounkov_body_surface, translate_decomposition, Affine, Chamber,
    ChamberScan, OkBody2D, PointMode, Translate, DEFAULT_CHAMBER_CAP,
};
pub use zariski::{volume_surface, zariski, ZariskiDecomp};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurfaceError {
    #[error("{path}: {message}")]
    InvalidModel { path: String, message: String },
    #[error("class has length {found}, lattice rank is {rank}")]
    WrongLength { found: usize, rank: usize },
    #[error("not pseudo-effective relative to declared curves ({0})")]
    NotPseudoEffective(String),
    #[error("divisor is not big (P² = {0})")]
    NotBig(Rational),
    #[error("chamber cap exceeded ({0} chambers)")]
    ChamberCapExceeded(usize),
    #[error("the end of the scan is irrational (root of {0})")]
    IrrationalEnd(String),
    #[error("flag curve class never leaves the big cone along the scan")]
    UnboundedScan,
    #[error("missing local intersection data for curve {0}")]
    MissingOrdData(String),
    #[error("translate check failed: body(D) is not body(P) shifted by {0}")]
    TranslateMismatch(String),
    #[error(transparent)]
    Geometry(#[from] GeomError),
}

/// A rational divisor class in the basis of the model's classes.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DivisorClass(pub Vec<Rational>);

impl DivisorClass {
    pub fn from_ints(c: &[i64]) -> Self {
        DivisorClass(c.iter().map(|&x| Rational::from_integer(x.into())).collect())
    }

    pub fn zero(rank: usize) -> Self {
        DivisorClass(vec![Rational::zero(); rank])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &DivisorClass) -> DivisorClass {
        DivisorClass(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &DivisorClass) -> DivisorClass {
        DivisorClass(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, s: &Rational) -> DivisorClass {
        DivisorClass(self.0.iter().map(|a| a * s).collect())
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Curve {
    pub name: String,
    pub class: DivisorClass,
}

/// A smooth projective surface presented by its intersection form and a list
/// of effective irreducible curves, which must include every curve of
/// negative self-intersection relevant to the divisors studied.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceModel {
    class_names: Vec<String>,
    gram: Matrix,
    curves: Vec<Curve>,
    warnings: Vec<String>,
}

impl SurfaceModel {
    pub fn new(
        class_names: Vec<String>,
        gram: Matrix,
        curves: Vec<Curve>,
    ) -> Result<Self, SurfaceError> {
        let r = class_names.len();
        let invalid = |path: String, message: String| SurfaceError::InvalidModel { path, message };
        if r == 0 {
            return Err(invalid("classes".into(), "at least one class is required".into()));
        }
        if gram.len() != r {
            return Err(invalid("gram".into(), format!("expected {r} rows, found {}", gram.len())));
        }
        for (i, row) in gram.iter().enumerate() {
            if row.len() != r {
                return Err(invalid(
                    format!("gram[{i}]"),
                    format!("expected {r} entries, found {}", row.len()),
                ));
            }
        }
        for i in 0..r {
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(invalid(
                        format!("gram[{i}][{j}]"),
                        format!("not symmetric: {} vs {}", gram[i][j], gram[j][i]),
                    ));
                }
            }
        }
        for (k, c) in curves.iter().enumerate() {
            if c.class.len() != r {
                return Err(invalid(
                    format!("curves[{k}].class"),
                    format!("expected {r} coefficients, found {}", c.class.len()),
                ));
            }
            if c.class.is_zero() {
                return Err(invalid(format!("curves[{k}].class"), "zero class".into()));
            }
        }
        let mut warnings = Vec::new();
        let positive = (0..r).any(|i| gram[i][i] > Rational::zero())
            || curves.iter().any(|c| linalg::dot(&c.class.0, &mat_vec(&gram, &c.class.0)) > Rational::zero());
        if !positive {
            warnings.push("no class of positive self-intersection among the supplied classes".into());
        }
        Ok(SurfaceModel {
            class_names,
            gram,
            curves,
            warnings,
        })
    }

    pub fn rank(&self) -> usize {
        self.class_names.len()
    }

    pub fn class_names(&self) -> &[String] {
        &self.class_names
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn curves(&self) -> &[Curve] {
        &self.curves
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn curve_index(&self, name: &str) -> Option<usize> {
        self.curves.iter().position(|c| c.name == name)
    }

    /// A copy with the curve list permuted: `order[k]` is the old index of
    /// the new `k`-th curve.
    pub fn with_curve_order(&self, order: &[usize]) -> SurfaceModel {
        SurfaceModel {
            curves: order.iter().map(|&i| self.curves[i].clone()).collect(),
            ..self.clone()
        }
    }

    pub fn check(&self, d: &DivisorClass) -> Result<(), SurfaceError> {
        if d.len() != self.rank() {
            return Err(SurfaceError::WrongLength {
                found: d.len(),
                rank: self.rank(),
            });
        }
        Ok(())
    }

    /// Positive on every declared curve and of positive square.
    pub fn is_ample_relative(&self, d: &DivisorClass) -> bool {
        intersect(self, d, d) > Rational::zero()
            && self
                .curves
                .iter()
                .all(|c| intersect(self, d, &c.class) > Rational::zero())
    }
}

fn mat_vec(m: &Matrix, v: &[Rational]) -> Vec<Rational> {
    m.iter().map(|row| linalg::dot(row, v)).collect()
}

/// `D1ᵀ · G · D2`.
pub fn intersect(model: &SurfaceModel, d1: &DivisorClass, d2: &DivisorClass) -> Rational {
    linalg::dot(&d1.0, &mat_vec(&model.gram, &d2.0))
}
