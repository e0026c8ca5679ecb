use std::fmt;
use std::ops::Index;

use num_traits::Zero;

use crate::rational::{int, Rational};

/// A point with exact rational coordinates in ambient dimension 1, 2 or 3.
///
/// Ordering is lexicographic on the coordinates; canonical vertex lists are
/// sorted with it.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QVector(Vec<Rational>);

impl QVector {
    /// Panics unless `1 <= coords.len() <= 3`.
    pub fn new(coords: Vec<Rational>) -> Self {
        assert!(
            (1..=3).contains(&coords.len()),
            "QVector dimension must be 1, 2 or 3 (got {})",
            coords.len()
        );
        QVector(coords)
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        QVector::new(coords.iter().map(|&c| int(c)).collect())
    }

    pub fn zero(dim: usize) -> Self {
        QVector::new(vec![Rational::zero(); dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<Rational> {
        self.0
    }

    pub fn add(&self, other: &QVector) -> QVector {
        QVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &QVector) -> QVector {
        QVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, s: &Rational) -> QVector {
        QVector(self.0.iter().map(|a| a * s).collect())
    }

    pub fn dot(&self, other: &QVector) -> Rational {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    /// Drops coordinate `axis`. The result must still have dimension ≥ 1.
    pub fn drop_axis(&self, axis: usize) -> QVector {
        let mut c = self.0.clone();
        c.remove(axis);
        QVector::new(c)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }
}

impl Index<usize> for QVector {
    type Output = Rational;

    fn index(&self, i: usize) -> &Rational {
        &self.0[i]
    }
}

impl fmt::Display for QVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

pub(crate) fn cross(a: &QVector, b: &QVector) -> QVector {
    QVector(vec![
        &a[1] * &b[2] - &a[2] * &b[1],
        &a[2] * &b[0] - &a[0] * &b[2],
        &a[0] * &b[1] - &a[1] * &b[0],
    ])
}

/// `det(b - a, c - a, d - a)`; positive when `d` lies on the side of the
/// plane `abc` that the right-hand normal points to.
pub(crate) fn orient3(a: &QVector, b: &QVector, c: &QVector, d: &QVector) -> Rational {
    cross(&b.sub(a), &c.sub(a)).dot(&d.sub(a))
}

/// Twice the signed area of the triangle `abc` in the plane.
pub(crate) fn orient2(a: &QVector, b: &QVector, c: &QVector) -> Rational {
    (&b[0] - &a[0]) * (&c[1] - &a[1]) - (&b[1] - &a[1]) * (&c[0] - &a[0])
}
