//! Exact convex hulls in ambient dimension ≤ 3.
//!
//! Points are deduplicated, their affine dimension is determined exactly, and
//! the hull is computed in that dimension: extremes along a line, Andrew's
//! monotone chain in a plane (projected to a coordinate plane when the
//! ambient space is 3-dimensional), and an incremental beneath-beyond hull for
//! full-dimensional point sets in space.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::ops::{Add, Mul, Sub};

use super::vector::{cross, orient2, QVector};
use super::{GeomError, Halfspace, QPolytope};
use crate::linalg;
use crate::rational::{common_denominator, Rational};

pub fn hull(points: &[QVector]) -> Result<QPolytope, GeomError> {
    let first = points.first().ok_or(GeomError::NoPoints)?;
    let dim = first.dim();
    if let Some(p) = points.iter().find(|p| p.dim() != dim) {
        return Err(GeomError::MixedDimensions {
            expected: dim,
            found: p.dim(),
        });
    }
    let pts: Vec<QVector> = points
        .iter()
        .cloned()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();

    let directions: linalg::Matrix = pts[1..]
        .iter()
        .map(|p| p.sub(&pts[0]).into_coords())
        .collect();
    let affine_dim = linalg::rank(&directions);

    let (vertices, facets) = match affine_dim {
        0 => (vec![pts[0].clone()], Vec::new()),
        1 => (segment_ends(&pts), Vec::new()),
        2 => (planar_cycle(&pts).into_iter().map(|i| pts[i].clone()).collect(), Vec::new()),
        _ => spatial_hull(&pts),
    };
    Ok(assemble(dim, affine_dim, vertices, facets))
}

fn segment_ends(pts: &[QVector]) -> Vec<QVector> {
    // Lexicographic order is monotone along any line.
    vec![pts[0].clone(), pts[pts.len() - 1].clone()]
}

/// Indices of the extreme points of a planar (affine dim 2) point set in
/// cyclic order. `pts` must be sorted and deduplicated.
pub(crate) fn planar_cycle(pts: &[QVector]) -> Vec<usize> {
    let projected: Vec<QVector> = if pts[0].dim() == 2 {
        pts.to_vec()
    } else {
        let normal = plane_normal(pts);
        let axis = (0..3).find(|&a| !normal[a].is_zero()).unwrap();
        pts.iter().map(|p| p.drop_axis(axis)).collect()
    };
    let mut order: Vec<usize> = (0..pts.len()).collect();
    order.sort_by(|&a, &b| projected[a].cmp(&projected[b]));
    monotone_chain(&projected, &order)
}

fn plane_normal(pts: &[QVector]) -> QVector {
    let d1 = pts[1].sub(&pts[0]);
    pts[2..]
        .iter()
        .map(|p| cross(&d1, &p.sub(&pts[0])))
        .find(|n| !n.is_zero())
        .expect("planar point set has a non-collinear triple")
}

/// Counter-clockwise strict hull (collinear points dropped).
fn monotone_chain(p: &[QVector], order: &[usize]) -> Vec<usize> {
    let mut lower: Vec<usize> = Vec::new();
    for &i in order {
        while lower.len() >= 2
            && !orient2(&p[lower[lower.len() - 2]], &p[lower[lower.len() - 1]], &p[i]).is_positive()
        {
            lower.pop();
        }
        lower.push(i);
    }
    let mut upper: Vec<usize> = Vec::new();
    for &i in order.iter().rev() {
        while upper.len() >= 2
            && !orient2(&p[upper[upper.len() - 2]], &p[upper[upper.len() - 1]], &p[i]).is_positive()
        {
            upper.pop();
        }
        upper.push(i);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Incremental hull of a full-dimensional point set in space. Returns the
/// true vertices and the facet inequalities.
fn spatial_hull(pts: &[QVector]) -> (Vec<QVector>, Vec<Halfspace>) {
    // Clear denominators and run on integers, in machine words when the
    // coordinates are small enough for triple products to fit.
    let all: Vec<Rational> = pts.iter().flat_map(|p| p.coords().iter().cloned()).collect();
    let den = Rational::from_integer(common_denominator(&all));
    let ints: Vec<[BigInt; 3]> = pts
        .iter()
        .map(|p| std::array::from_fn(|i| (&p[i] * &den).to_integer()))
        .collect();
    let small = ints.iter().flatten().all(|x| x.bits() <= 38);
    let faces = if small {
        let words: Vec<[i128; 3]> = ints
            .iter()
            .map(|p| std::array::from_fn(|i| p[i].to_i128().expect("38-bit value")))
            .collect();
        incremental_faces(&words)
    } else {
        incremental_faces(&ints)
    };

    // Coplanar triangles share a normalized plane; a point is a vertex iff it
    // touches at least three distinct planes.
    let mut planes: BTreeMap<Halfspace, Vec<usize>> = BTreeMap::new();
    let mut incident: BTreeMap<usize, BTreeSet<Halfspace>> = BTreeMap::new();
    for f in &faces {
        let normal = cross(&pts[f[1]].sub(&pts[f[0]]), &pts[f[2]].sub(&pts[f[0]]));
        let hs = Halfspace::normalized(normal, &pts[f[0]]);
        planes.entry(hs.clone()).or_default().extend(f);
        for &i in f {
            incident.entry(i).or_default().insert(hs.clone());
        }
    }
    let vertices: Vec<QVector> = incident
        .iter()
        .filter(|(_, hs)| hs.len() >= 3)
        .map(|(&i, _)| pts[i].clone())
        .collect();
    (vertices, planes.into_keys().collect())
}

trait Exact:
    Clone + Ord + Zero + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self>
{
}

impl<T> Exact for T where
    T: Clone + Ord + Zero + Add<Output = T> + Sub<Output = T> + Mul<Output = T>
{
}

fn sub3<T: Exact>(a: &[T; 3], b: &[T; 3]) -> [T; 3] {
    std::array::from_fn(|i| a[i].clone() - b[i].clone())
}

fn cross3<T: Exact>(a: &[T; 3], b: &[T; 3]) -> [T; 3] {
    [
        a[1].clone() * b[2].clone() - a[2].clone() * b[1].clone(),
        a[2].clone() * b[0].clone() - a[0].clone() * b[2].clone(),
        a[0].clone() * b[1].clone() - a[1].clone() * b[0].clone(),
    ]
}

fn dot3<T: Exact>(a: &[T; 3], b: &[T; 3]) -> T {
    a[0].clone() * b[0].clone() + a[1].clone() * b[1].clone() + a[2].clone() * b[2].clone()
}

/// Outward plane `normal · x = offset` through a triangle oriented so that
/// the hull lies on the non-positive side.
fn plane<T: Exact>(p: &[[T; 3]], f: &[usize; 3]) -> ([T; 3], T) {
    let n = cross3(&sub3(&p[f[1]], &p[f[0]]), &sub3(&p[f[2]], &p[f[0]]));
    let off = dot3(&n, &p[f[0]]);
    (n, off)
}

/// Beneath-beyond insertion; returns oriented triangles of the boundary.
fn incremental_faces<T: Exact>(p: &[[T; 3]]) -> Vec<[usize; 3]> {
    let orient = |a: usize, b: usize, c: usize, d: usize| {
        dot3(&cross3(&sub3(&p[b], &p[a]), &sub3(&p[c], &p[a])), &sub3(&p[d], &p[a]))
    };
    let a = 0;
    let b = p.len() - 1;
    let c = (0..p.len())
        .find(|&i| cross3(&sub3(&p[b], &p[a]), &sub3(&p[i], &p[a])).iter().any(|x| !x.is_zero()))
        .unwrap();
    let d = (0..p.len()).find(|&i| !orient(a, b, c, i).is_zero()).unwrap();

    let initial = if orient(a, b, c, d) > T::zero() {
        [[a, c, b], [a, b, d], [b, c, d], [c, a, d]]
    } else {
        [[a, b, c], [a, d, b], [b, d, c], [c, d, a]]
    };
    let mut faces: Vec<([usize; 3], [T; 3], T)> = initial
        .iter()
        .map(|f| {
            let (n, o) = plane(p, f);
            (*f, n, o)
        })
        .collect();

    for (q, point) in p.iter().enumerate() {
        if [a, b, c, d].contains(&q) {
            continue;
        }
        let visible: Vec<bool> = faces.iter().map(|(_, n, o)| dot3(n, point) > *o).collect();
        if !visible.contains(&true) {
            continue;
        }
        let mut edges: HashSet<(usize, usize)> = HashSet::new();
        for ((f, _, _), _) in faces.iter().zip(&visible).filter(|(_, v)| **v) {
            for k in 0..3 {
                edges.insert((f[k], f[(k + 1) % 3]));
            }
        }
        let mut next: Vec<([usize; 3], [T; 3], T)> = faces
            .into_iter()
            .zip(&visible)
            .filter(|(_, v)| !**v)
            .map(|(f, _)| f)
            .collect();
        for &(u, v) in &edges {
            if !edges.contains(&(v, u)) {
                let f = [u, v, q];
                let (n, o) = plane(p, &f);
                next.push((f, n, o));
            }
        }
        faces = next;
    }
    faces.into_iter().map(|(f, _, _)| f).collect()
}

impl Halfspace {
    /// `normal · x ≤ normal · anchor`, with `normal` scaled to a primitive
    /// integer vector so that equal planes compare equal.
    pub(crate) fn normalized(normal: QVector, anchor: &QVector) -> Halfspace {
        let den = common_denominator(normal.coords());
        let ints: Vec<BigInt> = normal
            .coords()
            .iter()
            .map(|x| (x * Rational::from_integer(den.clone())).to_integer())
            .collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        let g = if g.is_zero() { BigInt::one() } else { g };
        let normal = QVector::new(
            ints.into_iter()
                .map(|x| Rational::from_integer(x / &g))
                .collect(),
        );
        let offset = normal.dot(anchor);
        Halfspace { normal, offset }
    }
}

/// Derives the inequality description and packages the polytope.
fn assemble(
    dim: usize,
    affine_dim: usize,
    mut vertices: Vec<QVector>,
    facets: Vec<Halfspace>,
) -> QPolytope {
    vertices.sort();
    let mut halfspaces: BTreeSet<Halfspace> = facets.into_iter().collect();

    // Equations of the affine hull, as pairs of opposite inequalities.
    let directions: linalg::Matrix = vertices[1..]
        .iter()
        .map(|v| v.sub(&vertices[0]).into_coords())
        .collect();
    let directions = if directions.is_empty() {
        vec![vec![Rational::zero(); dim]]
    } else {
        directions
    };
    for n in linalg::nullspace(&directions, dim) {
        let n = QVector::new(n);
        halfspaces.insert(Halfspace::normalized(n.clone(), &vertices[0]));
        halfspaces.insert(Halfspace::normalized(n.scale(&-Rational::one()), &vertices[0]));
    }

    match affine_dim {
        1 => {
            let d = vertices[1].sub(&vertices[0]);
            halfspaces.insert(Halfspace::normalized(d.clone(), &vertices[1]));
            halfspaces.insert(Halfspace::normalized(d.scale(&-Rational::one()), &vertices[0]));
        }
        2 => {
            let cycle = planar_cycle(&vertices);
            let k = cycle.len();
            for i in 0..k {
                let p = &vertices[cycle[i]];
                let q = &vertices[cycle[(i + 1) % k]];
                let r = &vertices[cycle[(i + 2) % k]];
                let e = q.sub(p);
                let mut n = if dim == 2 {
                    QVector::new(vec![e[1].clone(), -e[0].clone()])
                } else {
                    let plane = cross(&e, &r.sub(p));
                    cross(&e, &plane)
                };
                if n.dot(r) > n.dot(p) {
                    n = n.scale(&-Rational::one());
                }
                halfspaces.insert(Halfspace::normalized(n, p));
            }
        }
        _ => {}
    }

    QPolytope {
        dim,
        affine_dim,
        vertices,
        halfspaces: halfspaces.into_iter().collect(),
    }
}
