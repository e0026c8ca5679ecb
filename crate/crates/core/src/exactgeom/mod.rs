//! Exact rational polytopes in ambient dimension ≤ 3.
//!
//! A [`QPolytope`] is stored in canonical form: the minimal vertex list sorted
//! lexicographically. Two polytopes are equal exactly when their canonical
//! forms are equal, which is what the golden tests rely on. Lower-dimensional
//! hulls (points, segments, polygons in space) are ordinary values that carry
//! their affine dimension.

mod hull;
mod vector;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::rational::{int, Rational};

pub use hull::hull;
pub use vector::QVector;
use vector::orient3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeomError {
    #[error("no points")]
    NoPoints,
    #[error("mixed dimensions: expected {expected}, found {found}")]
    MixedDimensions { expected: usize, found: usize },
    #[error("empty slice: {axis}-th coordinate {t} lies outside the projection")]
    EmptySlice { axis: usize, t: Rational },
    #[error("axis {axis} out of range for dimension {dim}")]
    AxisOutOfRange { axis: usize, dim: usize },
    #[error("cannot slice a polytope of ambient dimension 1")]
    SliceOfSegment,
    #[error("scale factor must be positive, got {0}")]
    NonPositiveScale(Rational),
}

/// The closed halfspace `normal · x ≤ offset`. Normals are primitive integer
/// vectors.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Halfspace {
    pub normal: QVector,
    pub offset: Rational,
}

impl Halfspace {
    pub fn contains(&self, p: &QVector) -> bool {
        self.normal.dot(p) <= self.offset
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QPolytope {
    dim: usize,
    affine_dim: usize,
    vertices: Vec<QVector>,
    halfspaces: Vec<Halfspace>,
}

impl QPolytope {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn affine_dim(&self) -> usize {
        self.affine_dim
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.affine_dim == self.dim
    }

    /// Canonical (sorted, minimal) vertex list.
    pub fn vertices(&self) -> &[QVector] {
        &self.vertices
    }

    /// Inequalities `normal · x ≤ offset` cutting out the polytope. For
    /// lower-dimensional polytopes the affine hull appears as pairs of
    /// opposite inequalities.
    pub fn halfspaces(&self) -> &[Halfspace] {
        &self.halfspaces
    }

    pub fn contains(&self, p: &QVector) -> bool {
        p.dim() == self.dim && self.halfspaces.iter().all(|h| h.contains(p))
    }

    pub fn contains_polytope(&self, other: &QPolytope) -> bool {
        other.vertices.iter().all(|v| self.contains(v))
    }

    /// Vertices of a 2-dimensional polygon in counter-clockwise order,
    /// starting from the first canonical vertex.
    pub fn cyclic_vertices(&self) -> Vec<QVector> {
        if self.affine_dim < 2 || self.dim != 2 {
            return self.vertices.clone();
        }
        let cycle = hull::planar_cycle(&self.vertices);
        let start = cycle.iter().position(|&i| i == 0).unwrap_or(0);
        (0..cycle.len())
            .map(|k| self.vertices[cycle[(start + k) % cycle.len()]].clone())
            .collect()
    }

    /// Range of coordinate `axis` over the polytope.
    pub fn projection(&self, axis: usize) -> (Rational, Rational) {
        let lo = self.vertices.iter().map(|v| &v[axis]).min().unwrap().clone();
        let hi = self.vertices.iter().map(|v| &v[axis]).max().unwrap().clone();
        (lo, hi)
    }

    pub fn scaled(&self, s: &Rational) -> Result<QPolytope, GeomError> {
        affine_image(self, s, &QVector::zero(self.dim))
    }
}

/// Exact Euclidean volume (length, area or volume by ambient dimension).
/// Lower-dimensional polytopes have volume zero.
pub fn volume(p: &QPolytope) -> Rational {
    if !p.is_full_dimensional() {
        return Rational::zero();
    }
    let v0 = &p.vertices[0];
    match p.dim {
        1 => {
            let (lo, hi) = p.projection(0);
            hi - lo
        }
        2 => {
            let cyc = p.cyclic_vertices();
            let twice: Rational = cyc
                .windows(2)
                .map(|w| vector::orient2(v0, &w[0], &w[1]))
                .sum();
            twice.abs() / int(2)
        }
        _ => {
            // Fan from v0 over every facet, each facet fanned from its own
            // first vertex.
            let mut six = Rational::zero();
            for facet in &p.halfspaces {
                let on: Vec<QVector> = p
                    .vertices
                    .iter()
                    .filter(|v| facet.normal.dot(v) == facet.offset)
                    .cloned()
                    .collect();
                if on.contains(v0) || on.len() < 3 {
                    continue;
                }
                let cycle = hull::planar_cycle(&on);
                for k in 1..cycle.len() - 1 {
                    six += orient3(&on[cycle[0]], &on[cycle[k]], &on[cycle[k + 1]], v0).abs();
                }
            }
            six / int(6)
        }
    }
}

/// `{x ∈ P : x[axis] = t}` with coordinate `axis` (0-based) removed.
pub fn slice(p: &QPolytope, axis: usize, t: &Rational) -> Result<QPolytope, GeomError> {
    if p.dim == 1 {
        return Err(GeomError::SliceOfSegment);
    }
    if axis >= p.dim {
        return Err(GeomError::AxisOutOfRange { axis, dim: p.dim });
    }
    let (lo, hi) = p.projection(axis);
    if t < &lo || t > &hi {
        return Err(GeomError::EmptySlice {
            axis,
            t: t.clone(),
        });
    }
    // The slice is the hull of the hyperplane's intersections with all
    // segments between vertices.
    let vs = &p.vertices;
    let mut points: Vec<QVector> = vs.iter().filter(|v| &v[axis] == t).cloned().collect();
    for (i, u) in vs.iter().enumerate() {
        for w in &vs[i + 1..] {
            let (a, b) = if u[axis] < w[axis] { (u, w) } else { (w, u) };
            if &a[axis] < t && t < &b[axis] {
                let lambda = (t - &a[axis]) / (&b[axis] - &a[axis]);
                points.push(a.add(&b.sub(a).scale(&lambda)));
            }
        }
    }
    let dropped: Vec<QVector> = points.iter().map(|q| q.drop_axis(axis)).collect();
    hull(&dropped)
}

/// `{λ x + v : x ∈ P}` for `λ > 0`.
pub fn affine_image(
    p: &QPolytope,
    scale: &Rational,
    translate: &QVector,
) -> Result<QPolytope, GeomError> {
    if !scale.is_positive() {
        return Err(GeomError::NonPositiveScale(scale.clone()));
    }
    if translate.dim() != p.dim {
        return Err(GeomError::MixedDimensions {
            expected: p.dim,
            found: translate.dim(),
        });
    }
    let image: Vec<QVector> = p
        .vertices
        .iter()
        .map(|v| v.scale(scale).add(translate))
        .collect();
    hull(&image)
}

pub fn is_simplex(p: &QPolytope) -> bool {
    p.vertices.len() == p.affine_dim + 1
}

pub fn minkowski_sum(p: &QPolytope, q: &QPolytope) -> Result<QPolytope, GeomError> {
    if p.dim != q.dim {
        return Err(GeomError::MixedDimensions {
            expected: p.dim,
            found: q.dim,
        });
    }
    let sums: Vec<QVector> = p
        .vertices
        .iter()
        .flat_map(|a| q.vertices.iter().map(move |b| a.add(b)))
        .collect();
    hull(&sums)
}

/// The simplex with vertices `0, e_1, …, e_{n-1}, c·e_n`.
pub fn corner_simplex(n: usize, c: &Rational) -> QPolytope {
    let mut pts = vec![QVector::zero(n)];
    for i in 0..n {
        let mut e = vec![Rational::zero(); n];
        e[i] = if i + 1 == n { c.clone() } else { Rational::one() };
        pts.push(QVector::new(e));
    }
    hull(&pts).expect("nonempty point list of one dimension")
}

#[cfg(test)]
mod tests;
