//! Graded section bases `H^0(X, mL)` for closed-form model families.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::exactgeom::{corner_simplex, hull, volume, QPolytope, QVector};
use crate::rational::{int, is_integer, Rational};
use crate::valuation::{Exponent, MPoly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SectionError {
    #[error("polytope vertex {0} is not a lattice point")]
    NonLatticeVertex(QVector),
    #[error("polytope must be full-dimensional (affine dimension {affine}, ambient {ambient})")]
    NotFullDimensional { affine: usize, ambient: usize },
    #[error("model dimension must be at least 1")]
    ZeroDimension,
    #[error("degree parameter must be at least 1")]
    ZeroDegree,
    #[error(transparent)]
    Geometry(#[from] crate::exactgeom::GeomError),
}

/// A full-dimensional lattice polytope in dimension ≤ 3.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticePolytope {
    polytope: QPolytope,
}

impl LatticePolytope {
    pub fn new(vertices: &[Vec<i64>]) -> Result<Self, SectionError> {
        let points: Vec<QVector> = vertices.iter().map(|v| QVector::from_ints(v)).collect();
        let polytope = hull(&points)?;
        Self::from_polytope(polytope)
    }

    pub fn from_polytope(polytope: QPolytope) -> Result<Self, SectionError> {
        if let Some(v) = polytope
            .vertices()
            .iter()
            .find(|v| !v.coords().iter().all(is_integer))
        {
            return Err(SectionError::NonLatticeVertex(v.clone()));
        }
        if !polytope.is_full_dimensional() {
            return Err(SectionError::NotFullDimensional {
                affine: polytope.affine_dim(),
                ambient: polytope.dim(),
            });
        }
        Ok(LatticePolytope { polytope })
    }

    pub fn polytope(&self) -> &QPolytope {
        &self.polytope
    }

    pub fn dim(&self) -> usize {
        self.polytope.dim()
    }

    /// Lattice points of `m·P`, sorted lexicographically.
    pub fn lattice_points(&self, m: u32) -> Vec<Vec<i64>> {
        let scale = int(m as i64);
        let n = self.dim();
        let ranges: Vec<(i64, i64)> = (0..n)
            .map(|axis| {
                let (lo, hi) = self.polytope.projection(axis);
                let lo = (lo * &scale).ceil().to_integer().to_i64().unwrap();
                let hi = (hi * &scale).floor().to_integer().to_i64().unwrap();
                (lo, hi)
            })
            .collect();
        let mut out = Vec::new();
        let mut current = vec![0i64; n];
        self.enumerate_box(&ranges, 0, &mut current, &scale, &mut out);
        out
    }

    fn enumerate_box(
        &self,
        ranges: &[(i64, i64)],
        axis: usize,
        current: &mut Vec<i64>,
        scale: &Rational,
        out: &mut Vec<Vec<i64>>,
    ) {
        if axis == ranges.len() {
            let p = QVector::from_ints(current);
            let inside = self
                .polytope
                .halfspaces()
                .iter()
                .all(|h| h.normal.dot(&p) <= &h.offset * scale);
            if inside {
                out.push(current.clone());
            }
            return;
        }
        for x in ranges[axis].0..=ranges[axis].1 {
            current[axis] = x;
            self.enumerate_box(ranges, axis + 1, current, scale, out);
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SectionModel {
    /// `(P^n, O(d))`.
    ProjectiveTwist { n: usize, d: u32 },
    /// `(P^2, O(2))`, the Veronese surface in `P^5`.
    VeroneseSurface,
    /// A degree-`c` divisor on a rational curve.
    CurveDivisor { c: u32 },
    ToricPolytope(LatticePolytope),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GradedBasis {
    Polys { degree: u32, elements: Vec<MPoly> },
    Points { degree: u32, elements: Vec<Vec<i64>> },
}

impl GradedBasis {
    pub fn degree(&self) -> u32 {
        match self {
            GradedBasis::Polys { degree, .. } | GradedBasis::Points { degree, .. } => *degree,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            GradedBasis::Polys { elements, .. } => elements.len(),
            GradedBasis::Points { elements, .. } => elements.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// All exponent vectors of total degree `d` in `k` variables, in descending
/// lexicographic order.
pub fn monomial_exponents(k: usize, d: u32) -> Vec<Exponent> {
    if k == 1 {
        return vec![vec![d]];
    }
    let mut out = Vec::new();
    for a in (0..=d).rev() {
        for mut rest in monomial_exponents(k - 1, d - a) {
            rest.insert(0, a);
            out.push(rest);
        }
    }
    out
}

impl SectionModel {
    pub fn projective_twist(n: usize, d: u32) -> Result<Self, SectionError> {
        if n == 0 {
            return Err(SectionError::ZeroDimension);
        }
        if d == 0 {
            return Err(SectionError::ZeroDegree);
        }
        Ok(SectionModel::ProjectiveTwist { n, d })
    }

    pub fn curve_divisor(c: u32) -> Result<Self, SectionError> {
        if c == 0 {
            return Err(SectionError::ZeroDegree);
        }
        Ok(SectionModel::CurveDivisor { c })
    }

    pub fn dim(&self) -> usize {
        match self {
            SectionModel::ProjectiveTwist { n, .. } => *n,
            SectionModel::VeroneseSurface => 2,
            SectionModel::CurveDivisor { .. } => 1,
            SectionModel::ToricPolytope(p) => p.dim(),
        }
    }

    /// Homogeneous coordinate names of polynomial models: `u, v, w` on the
    /// plane, `x0, …, xn` otherwise; `t` for the curve model.
    pub fn variables(&self) -> Vec<String> {
        match self {
            SectionModel::ProjectiveTwist { n: 2, .. } | SectionModel::VeroneseSurface => {
                ["u", "v", "w"].iter().map(|s| s.to_string()).collect()
            }
            SectionModel::ProjectiveTwist { n, .. } => (0..=*n).map(|i| format!("x{i}")).collect(),
            SectionModel::CurveDivisor { .. } => vec!["t".to_string()],
            SectionModel::ToricPolytope(_) => Vec::new(),
        }
    }

    /// Degree of the sections of `mL` as homogeneous polynomials.
    fn poly_degree(&self, m: u32) -> u32 {
        match self {
            SectionModel::ProjectiveTwist { d, .. } => m * d,
            SectionModel::VeroneseSurface => 2 * m,
            SectionModel::CurveDivisor { c } => m * c,
            SectionModel::ToricPolytope(_) => unreachable!("toric bases are lattice points"),
        }
    }

    /// Basis of `H^0(mL)`: monomials in descending lex order (`t^k` with `k`
    /// ascending for the curve) or lattice points of `mP` in ascending order.
    pub fn basis(&self, m: u32) -> GradedBasis {
        assert!(m >= 1, "degree must be positive");
        match self {
            SectionModel::ToricPolytope(p) => GradedBasis::Points {
                degree: m,
                elements: p.lattice_points(m),
            },
            SectionModel::CurveDivisor { .. } => {
                let vars = self.variables();
                let elements = (0..=self.poly_degree(m))
                    .map(|k| MPoly::monomial(&vars, vec![k], Rational::one()))
                    .collect();
                GradedBasis::Polys { degree: m, elements }
            }
            _ => {
                let vars = self.variables();
                let elements = monomial_exponents(vars.len(), self.poly_degree(m))
                    .into_iter()
                    .map(|e| MPoly::monomial(&vars, e, Rational::one()))
                    .collect();
                GradedBasis::Polys { degree: m, elements }
            }
        }
    }

    /// `(L^n)`.
    pub fn self_intersection(&self) -> BigInt {
        match self {
            SectionModel::ProjectiveTwist { n, d } => BigInt::from(*d).pow(*n as u32),
            SectionModel::VeroneseSurface => BigInt::from(4),
            SectionModel::CurveDivisor { c } => BigInt::from(*c),
            SectionModel::ToricPolytope(p) => {
                let normalized = volume(p.polytope()) * int(factorial(p.dim()));
                debug_assert!(is_integer(&normalized));
                normalized.to_integer()
            }
        }
    }

    /// The simplex with vertices `0, e_1, …, e_{n-1}, c·e_n` for
    /// `c = (L^n)`.
    pub fn predicted_simplex(&self) -> QPolytope {
        corner_simplex(self.dim(), &Rational::from_integer(self.self_intersection()))
    }
}

pub fn factorial(n: usize) -> i64 {
    (1..=n as i64).product()
}

/// `binom(a, b)` as a big integer.
pub fn binomial(a: u64, b: u64) -> BigInt {
    if b > a {
        return BigInt::zero();
    }
    (0..b).fold(BigInt::one(), |acc, i| acc * BigInt::from(a - i) / BigInt::from(i + 1))
}
