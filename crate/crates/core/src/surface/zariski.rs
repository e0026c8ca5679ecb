use std::collections::BTreeMap;

use num_traits::Zero;

use super::{intersect, DivisorClass, SurfaceError, SurfaceModel};
use crate::linalg::{self, Matrix};
use crate::rational::Rational;

/// `D = P + N` with `P` nef relative to the declared curves, `N` an
/// effective combination of declared curves with negative definite support,
/// and `P · C = 0` on the support.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZariskiDecomp {
    pub p: DivisorClass,
    pub n: DivisorClass,
    /// Positive coefficients of `N`, keyed by curve index.
    pub coefficients: BTreeMap<usize, Rational>,
}

impl ZariskiDecomp {
    pub fn support(&self) -> Vec<usize> {
        self.coefficients.keys().copied().collect()
    }

    pub fn coefficient(&self, curve: usize) -> Rational {
        self.coefficients.get(&curve).cloned().unwrap_or_else(Rational::zero)
    }

    /// Coefficient of `N` summed over declared curves of class `c`.
    pub fn coefficient_of_class(&self, model: &SurfaceModel, c: &DivisorClass) -> Rational {
        self.coefficients
            .iter()
            .filter(|(&i, _)| &model.curves()[i].class == c)
            .map(|(_, a)| a.clone())
            .sum()
    }
}

/// Decomposition of `D + εE` for an infinitesimal `ε > 0`. Numbers
/// `x + εy` are compared lexicographically, so the support found here is the
/// one valid on a right neighbourhood of `ε = 0`.
#[derive(Debug, Clone)]
pub(crate) struct GermDecomp {
    pub support: Vec<usize>,
    pub value: Vec<Rational>,
    pub slope: Vec<Rational>,
}

fn lex_negative(x: &Rational, y: &Rational) -> bool {
    x < &Rational::zero() || (x.is_zero() && y < &Rational::zero())
}

fn curve_class(model: &SurfaceModel, i: usize) -> &DivisorClass {
    &model.curves()[i].class
}

pub(crate) fn zariski_germ(
    model: &SurfaceModel,
    d: &DivisorClass,
    e: &DivisorClass,
) -> Result<GermDecomp, SurfaceError> {
    model.check(d)?;
    model.check(e)?;
    let mut support: Vec<usize> = Vec::new();
    loop {
        let (value, slope) = solve_on(model, &support, d, e)?;
        let p0 = subtract_combination(model, d, &support, &value);
        let p1 = subtract_combination(model, e, &support, &slope);
        let entering: Vec<usize> = (0..model.curves().len())
            .filter(|i| !support.contains(i))
            .filter(|&i| {
                let c = curve_class(model, i);
                lex_negative(&intersect(model, &p0, c), &intersect(model, &p1, c))
            })
            .collect();
        if entering.is_empty() {
            for (k, &i) in support.iter().enumerate() {
                if lex_negative(&value[k], &slope[k]) {
                    return Err(SurfaceError::NotPseudoEffective(format!(
                        "negative coefficient on {}",
                        model.curves()[i].name
                    )));
                }
            }
            let square = [
                intersect(model, &p0, &p0),
                intersect(model, &p0, &p1) * Rational::from_integer(2.into()),
                intersect(model, &p1, &p1),
            ];
            if let Some(first) = square.iter().find(|x| !x.is_zero()) {
                if first < &Rational::zero() {
                    return Err(SurfaceError::NotPseudoEffective(
                        "nef part has negative square".into(),
                    ));
                }
            }
            return Ok(GermDecomp {
                support,
                value,
                slope,
            });
        }
        support.extend(entering);
        support.sort_unstable();
    }
}

/// Coefficients `a` on `support` with `(D - Σ a_C C) · C' = 0` for all
/// `C'` in the support, for both `D` and the perturbation `E`.
fn solve_on(
    model: &SurfaceModel,
    support: &[usize],
    d: &DivisorClass,
    e: &DivisorClass,
) -> Result<(Vec<Rational>, Vec<Rational>), SurfaceError> {
    if support.is_empty() {
        return Ok((Vec::new(), Vec::new()));
    }
    let g: Matrix = support
        .iter()
        .map(|&i| {
            support
                .iter()
                .map(|&j| intersect(model, curve_class(model, i), curve_class(model, j)))
                .collect()
        })
        .collect();
    if !linalg::is_negative_definite(&g) {
        let names: Vec<&str> = support.iter().map(|&i| model.curves()[i].name.as_str()).collect();
        return Err(SurfaceError::NotPseudoEffective(format!(
            "Gram matrix of {names:?} is not negative definite"
        )));
    }
    let rhs = |x: &DivisorClass| -> Vec<Rational> {
        support
            .iter()
            .map(|&i| intersect(model, x, curve_class(model, i)))
            .collect()
    };
    let value = linalg::solve(&g, &rhs(d)).expect("definite matrices are invertible");
    let slope = linalg::solve(&g, &rhs(e)).expect("definite matrices are invertible");
    Ok((value, slope))
}

fn subtract_combination(
    model: &SurfaceModel,
    d: &DivisorClass,
    support: &[usize],
    coeffs: &[Rational],
) -> DivisorClass {
    support
        .iter()
        .zip(coeffs)
        .fold(d.clone(), |acc, (&i, a)| acc.sub(&curve_class(model, i).scale(a)))
}

/// Zariski decomposition relative to the declared curves.
pub fn zariski(model: &SurfaceModel, d: &DivisorClass) -> Result<ZariskiDecomp, SurfaceError> {
    let germ = zariski_germ(model, d, &DivisorClass::zero(model.rank()))?;
    let coefficients: BTreeMap<usize, Rational> = germ
        .support
        .iter()
        .zip(&germ.value)
        .filter(|(_, a)| !a.is_zero())
        .map(|(&i, a)| (i, a.clone()))
        .collect();
    let n = coefficients
        .iter()
        .fold(DivisorClass::zero(model.rank()), |acc, (&i, a)| {
            acc.add(&curve_class(model, i).scale(a))
        });
    Ok(ZariskiDecomp {
        p: d.sub(&n),
        n,
        coefficients,
    })
}

/// `vol(D) = P²`.
pub fn volume_surface(model: &SurfaceModel, d: &DivisorClass) -> Result<Rational, SurfaceError> {
    let z = zariski(model, d)?;
    Ok(intersect(model, &z.p, &z.p))
}
