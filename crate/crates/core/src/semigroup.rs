//! Value semigroups, body estimates and finite generation certificates.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use rayon::prelude::*;
use thiserror::Error;

use crate::exactgeom::{corner_simplex, hull, GeomError, QPolytope, QVector};
use crate::rational::{int, is_integer, Rational};
use crate::sections::{GradedBasis, SectionModel};
use crate::valuation::{
    toric_flag_valuation, value_set, AffineCoordinate, ChartCoordinate, ChartGraph, FlagChart,
    PolyValuation, ValuationError,
};

pub const DEFAULT_MAX_DEGREE: u32 = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemigroupError {
    #[error("flag of rank {flag} does not fit a model of dimension {model}")]
    DimensionMismatch { flag: usize, model: usize },
    #[error("flag kind not supported for this model: {0}")]
    IncompatibleFlag(String),
    #[error(transparent)]
    Valuation(#[from] ValuationError),
    #[error(transparent)]
    Geometry(#[from] GeomError),
    #[error("generator ({m}, {nu:?}) is not in the semigroup")]
    GeneratorOutside { m: u32, nu: Vec<i64> },
    #[error("degree bound {requested} exceeds the computed bound {available}")]
    BoundTooLarge { requested: u32, available: u32 },
    #[error("degree bound must be at least {0}")]
    BoundTooSmall(u32),
    #[error("level {0} is empty")]
    EmptyLevel(u32),
}

/// Graded value sets `{ν(s) : s ∈ H^0(mL) \ 0}` for `m = 1..=bound`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValueSemigroup {
    rank: usize,
    levels: BTreeMap<u32, BTreeSet<Vec<i64>>>,
}

impl ValueSemigroup {
    /// Levels must be exactly `1..=M`, nonempty, with vectors of length
    /// `rank`. Used for synthetic semigroups.
    pub fn from_levels(
        rank: usize,
        levels: BTreeMap<u32, BTreeSet<Vec<i64>>>,
    ) -> Result<Self, SemigroupError> {
        for (i, (m, set)) in levels.iter().enumerate() {
            if *m != i as u32 + 1 || set.is_empty() {
                return Err(SemigroupError::EmptyLevel(i as u32 + 1));
            }
            if let Some(v) = set.iter().find(|v| v.len() != rank) {
                return Err(SemigroupError::DimensionMismatch {
                    flag: v.len(),
                    model: rank,
                });
            }
        }
        Ok(ValueSemigroup { rank, levels })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn bound(&self) -> u32 {
        self.levels.keys().next_back().copied().unwrap_or(0)
    }

    pub fn level(&self, m: u32) -> Option<&BTreeSet<Vec<i64>>> {
        self.levels.get(&m)
    }

    pub fn levels(&self) -> &BTreeMap<u32, BTreeSet<Vec<i64>>> {
        &self.levels
    }

    pub fn contains(&self, m: u32, nu: &[i64]) -> bool {
        self.levels.get(&m).is_some_and(|s| s.contains(nu))
    }

    /// Pairs `(m1, ν1), (m2, ν2)` in the semigroup whose sum is missing.
    pub fn closure_violations(&self) -> Vec<((u32, Vec<i64>), (u32, Vec<i64>))> {
        let mut out = Vec::new();
        let bound = self.bound();
        for (&m1, s1) in &self.levels {
            for (&m2, s2) in self.levels.range(m1..) {
                if m1 + m2 > bound {
                    break;
                }
                let target = &self.levels[&(m1 + m2)];
                for a in s1 {
                    for b in s2 {
                        let sum: Vec<i64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                        if !target.contains(&sum) {
                            out.push(((m1, a.clone()), (m2, b.clone())));
                        }
                    }
                }
            }
        }
        out
    }
}

enum Evaluator {
    Poly(Box<dyn PolyValuation>),
    Toric(crate::valuation::ToricFlag),
}

fn evaluator(model: &SectionModel, flag: &FlagChart) -> Result<Evaluator, SemigroupError> {
    let dim = model.dim();
    if flag.rank() != dim {
        return Err(SemigroupError::DimensionMismatch {
            flag: flag.rank(),
            model: dim,
        });
    }
    let incompatible = |what: &str| Err(SemigroupError::IncompatibleFlag(what.to_string()));
    match (model, flag) {
        (SectionModel::ToricPolytope(_), FlagChart::Toric(t)) => Ok(Evaluator::Toric(t.clone())),
        (SectionModel::ToricPolytope(_), _) => incompatible("toric models need a toric flag"),
        (_, FlagChart::Toric(_)) => incompatible("toric flags need a toric model"),
        (SectionModel::CurveDivisor { .. }, FlagChart::Coordinate { n }) => {
            Ok(Evaluator::Poly(Box::new(AffineCoordinate { n: *n })))
        }
        (SectionModel::CurveDivisor { .. }, _) => {
            incompatible("the curve model takes the coordinate flag at t = 0")
        }
        (_, FlagChart::Coordinate { n }) => Ok(Evaluator::Poly(Box::new(ChartCoordinate { n: *n }))),
        (_, FlagChart::Graph(g)) => {
            let chart: Vec<String> = model.variables()[1..].to_vec();
            if g.graphs()[0].vars() != chart.as_slice() {
                return incompatible(&format!("graph flag must use chart variables {chart:?}"));
            }
            Ok(Evaluator::Poly(Box::new(ChartGraph(g.clone()))))
        }
        (_, FlagChart::SurfaceCurve(s)) => {
            if s.divisor().vars() != model.variables().as_slice() {
                return incompatible(&format!(
                    "flag divisor must use the model variables {:?}",
                    model.variables()
                ));
            }
            Ok(Evaluator::Poly(Box::new(s.clone())))
        }
    }
}

/// Values at level `m`, each with a witness: a section attaining it (in the
/// valuation's working coordinates) or a lattice point.
pub fn level_witnesses(
    model: &SectionModel,
    flag: &FlagChart,
    m: u32,
) -> Result<BTreeMap<Vec<i64>, String>, SemigroupError> {
    match (evaluator(model, flag)?, model.basis(m)) {
        (Evaluator::Poly(val), GradedBasis::Polys { elements, .. }) => Ok(value_set(
            val.as_ref(),
            &elements,
        )?
        .into_iter()
        .map(|(v, p)| (v, p.to_string()))
        .collect()),
        (Evaluator::Toric(t), GradedBasis::Points { elements, .. }) => elements
            .iter()
            .map(|p| {
                let v = toric_flag_valuation(p, &t, m as i64)?;
                Ok((v, format!("{p:?}")))
            })
            .collect(),
        _ => unreachable!("evaluator kind follows the model kind"),
    }
}

pub fn level_values(
    model: &SectionModel,
    flag: &FlagChart,
    m: u32,
) -> Result<BTreeSet<Vec<i64>>, SemigroupError> {
    Ok(level_witnesses(model, flag, m)?.into_keys().collect())
}

/// Levels `1..=bound`, computed concurrently.
pub fn build(
    model: &SectionModel,
    flag: &FlagChart,
    bound: u32,
) -> Result<ValueSemigroup, SemigroupError> {
    if bound < 1 {
        return Err(SemigroupError::BoundTooSmall(1));
    }
    evaluator(model, flag)?;
    let levels: Vec<BTreeSet<Vec<i64>>> = (1..=bound)
        .into_par_iter()
        .map(|m| level_values(model, flag, m))
        .collect::<Result<_, _>>()?;
    ValueSemigroup::from_levels(
        flag.rank(),
        levels.into_iter().enumerate().map(|(i, s)| (i as u32 + 1, s)).collect(),
    )
}

fn scaled_points(m: u32, level: &BTreeSet<Vec<i64>>) -> Vec<QVector> {
    let den = int(m as i64);
    level
        .iter()
        .map(|v| QVector::new(v.iter().map(|&x| int(x) / &den).collect()))
        .collect()
}

/// Hull of `ν/m` over all levels.
pub fn body_estimate(gamma: &ValueSemigroup) -> Result<QPolytope, SemigroupError> {
    let points: Vec<QVector> = gamma
        .levels
        .iter()
        .flat_map(|(&m, level)| scaled_points(m, level))
        .collect();
    Ok(hull(&points)?)
}

#[derive(Debug, Clone)]
pub struct StabilizedBody {
    pub body: QPolytope,
    pub stabilized: bool,
    /// The first degree whose hull equals the previous one, or the last
    /// degree computed when the hull never stopped growing.
    pub at: u32,
    pub semigroup: ValueSemigroup,
}

/// Computes levels one at a time until the hull of `ν/m` stops changing
/// between consecutive degrees.
pub fn stabilized_body(
    model: &SectionModel,
    flag: &FlagChart,
    max_degree: u32,
) -> Result<StabilizedBody, SemigroupError> {
    if max_degree < 2 {
        return Err(SemigroupError::BoundTooSmall(2));
    }
    evaluator(model, flag)?;
    let mut levels = BTreeMap::new();
    let mut points = Vec::new();
    let mut previous: Option<QPolytope> = None;
    for m in 1..=max_degree {
        let level = level_values(model, flag, m)?;
        points.extend(scaled_points(m, &level));
        levels.insert(m, level);
        let body = hull(&points)?;
        if previous.as_ref() == Some(&body) || m == max_degree {
            let stabilized = previous.as_ref() == Some(&body);
            return Ok(StabilizedBody {
                body,
                stabilized,
                at: m,
                semigroup: ValueSemigroup::from_levels(flag.rank(), levels)?,
            });
        }
        previous = Some(body);
    }
    unreachable!("loop returns at max_degree")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenerationReport {
    /// Largest `M'` such that every level `≤ M'` is reachable.
    pub generated_up_to: u32,
    pub witnesses_missing: Vec<(u32, Vec<i64>)>,
    pub vertex_hit: bool,
}

/// Checks which elements of levels `1..=bound` are sums of generators.
pub fn is_generated_up_to(
    gamma: &ValueSemigroup,
    gens: &[(u32, Vec<i64>)],
    bound: u32,
) -> Result<GenerationReport, SemigroupError> {
    if bound > gamma.bound() {
        return Err(SemigroupError::BoundTooLarge {
            requested: bound,
            available: gamma.bound(),
        });
    }
    for (m, nu) in gens {
        if !gamma.contains(*m, nu) {
            return Err(SemigroupError::GeneratorOutside {
                m: *m,
                nu: nu.clone(),
            });
        }
    }
    let mut reachable: BTreeMap<u32, BTreeSet<Vec<i64>>> = BTreeMap::new();
    let mut missing = Vec::new();
    let mut generated_up_to = 0;
    for m in 1..=bound {
        let mut here: BTreeSet<Vec<i64>> = BTreeSet::new();
        for (gm, g) in gens {
            if *gm == m {
                here.insert(g.clone());
            } else if *gm < m {
                for r in &reachable[&(m - gm)] {
                    here.insert(g.iter().zip(r).map(|(a, b)| a + b).collect());
                }
            }
        }
        let level = gamma.level(m).expect("levels 1..=bound exist");
        let before = missing.len();
        missing.extend(level.difference(&here).map(|v| (m, v.clone())));
        if missing.len() == before && generated_up_to == m - 1 {
            generated_up_to = m;
        }
        reachable.insert(m, here);
    }
    let body = body_estimate(gamma)?;
    Ok(GenerationReport {
        generated_up_to,
        witnesses_missing: missing,
        vertex_hit: vertex_hit_check(gamma, &body),
    })
}

/// Level 1 as a generator list.
pub fn level_one_generators(gamma: &ValueSemigroup) -> Vec<(u32, Vec<i64>)> {
    gamma
        .level(1)
        .map(|s| s.iter().map(|v| (1, v.clone())).collect())
        .unwrap_or_default()
}

/// True iff every vertex of `body` is the value of a degree-1 section.
pub fn vertex_hit_check(gamma: &ValueSemigroup, body: &QPolytope) -> bool {
    let Some(level) = gamma.level(1) else {
        return false;
    };
    body.vertices().iter().all(|v| {
        v.coords().iter().all(is_integer)
            && level.contains(
                &v.coords()
                    .iter()
                    .map(|x| crate::rational::to_i64(x).expect("integral coordinate"))
                    .collect::<Vec<_>>(),
            )
    })
}

/// The simplex of the weighted projective space `P(1, …, 1, c)`.
pub fn weighted_projective_data(n: usize, c: &Rational) -> QPolytope {
    corner_simplex(n, c)
}

/// True iff the reduced denominator of `vol` divides `d^n`.
pub fn volume_denominator_check(vol: &Rational, d: u32, n: u32) -> bool {
    let power = BigInt::from(d).pow(n);
    power.is_multiple_of(vol.denom()) && !power.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactgeom::{affine_image, minkowski_sum, volume};
    use crate::rational::ratio;
    use crate::sections::{factorial, LatticePolytope};
    use crate::valuation::{
        surface_flag_valuation, CurveParam, GraphFlag, MPoly, SurfaceCurveFlag, ToricFlag,
    };
    use proptest::prelude::*;

    fn conic_flag() -> FlagChart {
        let t = ["t"];
        let param = CurveParam::new(
            ["1", "t", "t^2"].iter().map(|s| MPoly::parse(s, &t).unwrap()).collect(),
            int(0),
        )
        .unwrap();
        let q = MPoly::parse("v^2 - u*w", &["u", "v", "w"]).unwrap();
        FlagChart::SurfaceCurve(SurfaceCurveFlag::new(q, param).unwrap())
    }

    fn general_flag(model: &SectionModel) -> FlagChart {
        let SectionModel::ProjectiveTwist { d, .. } = model else {
            panic!("not a twist")
        };
        FlagChart::Graph(GraphFlag::general_type(&model.variables()[1..], *d).unwrap())
    }

    fn set(vs: &[&[i64]]) -> BTreeSet<Vec<i64>> {
        vs.iter().map(|v| v.to_vec()).collect()
    }

    fn verts(vs: &[&[i64]]) -> Vec<QVector> {
        let mut out: Vec<QVector> = vs.iter().map(|v| QVector::from_ints(v)).collect();
        out.sort();
        out
    }

    #[test]
    fn veronese_level_one() {
        let gamma = build(&SectionModel::VeroneseSurface, &conic_flag(), 1).unwrap();
        assert_eq!(
            gamma.level(1).unwrap(),
            &set(&[&[0, 0], &[0, 1], &[0, 2], &[0, 3], &[0, 4], &[1, 0]])
        );
        // Independent oracle: each monomial through the two-step valuation.
        let FlagChart::SurfaceCurve(flag) = conic_flag() else { unreachable!() };
        let GradedBasis::Polys { elements, .. } = SectionModel::VeroneseSurface.basis(1) else {
            unreachable!()
        };
        for e in &elements {
            assert!(gamma.level(1).unwrap().contains(&surface_flag_valuation(e, &flag).unwrap()));
        }
    }

    #[test]
    fn curve_and_plane_levels() {
        for c in [1u32, 3, 7] {
            let gamma = build(&SectionModel::curve_divisor(c).unwrap(), &FlagChart::Coordinate { n: 1 }, 1)
                .unwrap();
            let expected: BTreeSet<Vec<i64>> = (0..=c as i64).map(|k| vec![k]).collect();
            assert_eq!(gamma.level(1).unwrap(), &expected);
        }
        let plane = SectionModel::projective_twist(2, 1).unwrap();
        let gamma = build(&plane, &FlagChart::Coordinate { n: 2 }, 2).unwrap();
        let expected: BTreeSet<Vec<i64>> =
            (0..=2).flat_map(|a| (0..=2 - a).map(move |b| vec![a, b])).collect();
        assert_eq!(gamma.level(2).unwrap(), &expected);
    }

    #[test]
    fn flag_compatibility() {
        let plane = SectionModel::projective_twist(2, 1).unwrap();
        assert!(matches!(
            build(&plane, &FlagChart::Coordinate { n: 3 }, 1),
            Err(SemigroupError::DimensionMismatch { .. })
        ));
        let toric = FlagChart::Toric(ToricFlag::new(vec![0, 0], vec![vec![1, 0], vec![0, 1]]).unwrap());
        assert!(matches!(build(&plane, &toric, 1), Err(SemigroupError::IncompatibleFlag(_))));
        let wrong_vars = FlagChart::Graph(GraphFlag::general_type(&["a", "b"], 1).unwrap());
        assert!(matches!(build(&plane, &wrong_vars, 1), Err(SemigroupError::IncompatibleFlag(_))));
    }

    #[test]
    fn body_estimates() {
        let plane = SectionModel::projective_twist(2, 1).unwrap();
        let gamma = build(&plane, &FlagChart::Coordinate { n: 2 }, 1).unwrap();
        assert_eq!(body_estimate(&gamma).unwrap().vertices(), verts(&[&[0, 0], &[1, 0], &[0, 1]]));
        let gamma = build(&SectionModel::VeroneseSurface, &conic_flag(), 3).unwrap();
        assert_eq!(body_estimate(&gamma).unwrap().vertices(), verts(&[&[0, 0], &[1, 0], &[0, 4]]));
        let gamma = build(&SectionModel::curve_divisor(7).unwrap(), &FlagChart::Coordinate { n: 1 }, 1).unwrap();
        assert_eq!(body_estimate(&gamma).unwrap().vertices(), verts(&[&[0], &[7]]));
    }

    #[test]
    fn stabilized_bodies() {
        let twist = SectionModel::projective_twist(2, 2).unwrap();
        let s = stabilized_body(&twist, &general_flag(&twist), 6).unwrap();
        assert!(s.stabilized);
        assert_eq!(s.body.vertices(), verts(&[&[0, 0], &[1, 0], &[0, 4]]));

        let curve = SectionModel::curve_divisor(5).unwrap();
        let s = stabilized_body(&curve, &FlagChart::Coordinate { n: 1 }, 6).unwrap();
        assert!(s.stabilized);
        assert_eq!(s.at, 2);
        assert_eq!(s.body.vertices(), verts(&[&[0], &[5]]));
    }

    #[test]
    fn toric_body_is_the_image_of_the_polytope() {
        let trapezoid = LatticePolytope::new(&[vec![0, 0], vec![2, 0], vec![1, 1], vec![0, 1]]).unwrap();
        let flag = ToricFlag::new(vec![0, 1], vec![vec![1, 0], vec![0, -1]]).unwrap();
        let model = SectionModel::ToricPolytope(trapezoid.clone());
        let s = stabilized_body(&model, &FlagChart::Toric(flag.clone()), 6).unwrap();
        assert!(s.stabilized);
        // Oracle: the affine flag map applied to the lattice points of P.
        let images: Vec<QVector> = trapezoid
            .lattice_points(1)
            .iter()
            .map(|p| QVector::from_ints(&toric_flag_valuation(p, &flag, 1).unwrap()))
            .collect();
        assert_eq!(s.body, hull(&images).unwrap());
    }

    #[test]
    fn generation_reports() {
        let plane = SectionModel::projective_twist(2, 1).unwrap();
        let gamma = build(&plane, &FlagChart::Coordinate { n: 2 }, 4).unwrap();
        let report = is_generated_up_to(&gamma, &level_one_generators(&gamma), 4).unwrap();
        assert_eq!(report.generated_up_to, 4);
        assert!(report.witnesses_missing.is_empty() && report.vertex_hit);

        let gamma = build(&SectionModel::VeroneseSurface, &conic_flag(), 5).unwrap();
        let report = is_generated_up_to(&gamma, &level_one_generators(&gamma), 5).unwrap();
        assert_eq!(report.generated_up_to, 5);
        // Brute-force oracle: every element of level m is a sum of m level-1
        // values.
        let one: Vec<Vec<i64>> = gamma.level(1).unwrap().iter().cloned().collect();
        let mut sums: BTreeSet<Vec<i64>> = one.iter().cloned().collect();
        for m in 2..=5 {
            sums = sums
                .iter()
                .flat_map(|s| one.iter().map(move |g| vec![s[0] + g[0], s[1] + g[1]]))
                .collect();
            assert!(gamma.level(m).unwrap().is_subset(&sums));
        }

        let curve = build(&SectionModel::curve_divisor(2).unwrap(), &FlagChart::Coordinate { n: 1 }, 2).unwrap();
        let report = is_generated_up_to(&curve, &[(1, vec![0]), (1, vec![1])], 2).unwrap();
        assert!(report.witnesses_missing.contains(&(1, vec![2])));
        assert_eq!(report.generated_up_to, 0);
        assert!(matches!(
            is_generated_up_to(&curve, &[(1, vec![3])], 2),
            Err(SemigroupError::GeneratorOutside { .. })
        ));
        assert!(is_generated_up_to(&curve, &[], 3).is_err());
    }

    #[test]
    fn vertex_hits() {
        let gamma = build(&SectionModel::VeroneseSurface, &conic_flag(), 2).unwrap();
        assert!(vertex_hit_check(&gamma, &body_estimate(&gamma).unwrap()));
        let curve = build(&SectionModel::curve_divisor(3).unwrap(), &FlagChart::Coordinate { n: 1 }, 2).unwrap();
        assert!(vertex_hit_check(&curve, &body_estimate(&curve).unwrap()));

        // Drop (0,4) from level 1; level 2 still carries (0,8).
        let mut levels = gamma.levels().clone();
        levels.get_mut(&1).unwrap().remove(&vec![0, 4]);
        let truncated = ValueSemigroup::from_levels(2, levels).unwrap();
        assert!(!vertex_hit_check(&truncated, &body_estimate(&truncated).unwrap()));
    }

    #[test]
    fn weighted_projective_simplices() {
        assert_eq!(weighted_projective_data(2, &int(4)).vertices(), verts(&[&[0, 0], &[1, 0], &[0, 4]]));
        assert_eq!(weighted_projective_data(1, &int(1)).vertices(), verts(&[&[0], &[1]]));
        assert_eq!(
            weighted_projective_data(3, &int(2)).vertices(),
            verts(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 2]])
        );
    }

    #[test]
    fn denominator_checks() {
        assert!(volume_denominator_check(&ratio(1, 4), 2, 2));
        assert!(!volume_denominator_check(&ratio(1, 3), 2, 2));
        for p in [5i64, 7, 11] {
            for d in 1..p as u32 {
                for n in 1..=3 {
                    assert!(!volume_denominator_check(&ratio(1, p), d, n));
                }
            }
        }
    }

    fn instances() -> Vec<(SectionModel, FlagChart)> {
        let mut out = vec![
            (SectionModel::VeroneseSurface, conic_flag()),
            (SectionModel::curve_divisor(3).unwrap(), FlagChart::Coordinate { n: 1 }),
            (
                SectionModel::ToricPolytope(
                    LatticePolytope::new(&[vec![0, 0], vec![2, 0], vec![1, 1], vec![0, 1]]).unwrap(),
                ),
                FlagChart::Toric(ToricFlag::new(vec![0, 0], vec![vec![1, 0], vec![0, 1]]).unwrap()),
            ),
        ];
        for (n, d) in [(1, 3), (2, 1), (2, 3)] {
            let m = SectionModel::projective_twist(n, d).unwrap();
            let f = general_flag(&m);
            out.push((m, f));
        }
        out
    }

    #[test]
    fn semigroups_are_closed_under_addition() {
        for (model, flag) in instances() {
            let gamma = build(&model, &flag, 6).unwrap();
            assert!(gamma.closure_violations().is_empty(), "{model:?}");
        }
    }

    #[test]
    fn hulls_grow_with_the_bound() {
        for (model, flag) in instances() {
            let gamma = build(&model, &flag, 5).unwrap();
            let mut prev: Option<QPolytope> = None;
            for bound in 1..=5 {
                let levels = gamma.levels().range(..=bound).map(|(k, v)| (*k, v.clone())).collect();
                let body = body_estimate(&ValueSemigroup::from_levels(gamma.rank(), levels).unwrap()).unwrap();
                if let Some(p) = &prev {
                    assert!(body.contains_polytope(p));
                }
                prev = Some(body);
            }
        }
    }

    #[test]
    fn vertex_hit_implies_generation() {
        for (model, flag) in instances() {
            let gamma = build(&model, &flag, 5).unwrap();
            let report = is_generated_up_to(&gamma, &level_one_generators(&gamma), 5).unwrap();
            if report.vertex_hit {
                assert_eq!(report.generated_up_to, 5, "{model:?}");
            }
        }
    }

    #[test]
    fn homogeneity_under_twisting() {
        for (n, d) in [(1usize, 1u32), (1, 2), (2, 1), (3, 1)] {
            let flag = FlagChart::Coordinate { n };
            let base = SectionModel::projective_twist(n, d).unwrap();
            let body = stabilized_body(&base, &flag, 8).unwrap().body;
            for p in [2u32, 3] {
                let twisted = SectionModel::projective_twist(n, p * d).unwrap();
                let tbody = stabilized_body(&twisted, &flag, 8).unwrap().body;
                assert_eq!(tbody, affine_image(&body, &int(p as i64), &QVector::zero(n)).unwrap());
            }
        }
    }

    #[test]
    fn volume_identity_on_very_ample_instances() {
        for (n, d) in [(1usize, 1u32), (1, 3), (2, 1), (2, 2), (2, 3)] {
            let model = SectionModel::projective_twist(n, d).unwrap();
            let s = stabilized_body(&model, &general_flag(&model), 6).unwrap();
            assert_eq!(
                volume(&s.body) * int(factorial(n)),
                Rational::from_integer(model.self_intersection())
            );
        }
    }

    /// `(1/m)·Δ(mL + D)` on the toric model of the polytope `mP_L + P_D`,
    /// with the flag at the vertex `m·v_L + v_D`.
    fn nested_body(pl: &QPolytope, pd: &QPolytope, vl: &[i64], vd: &[i64], m: u32) -> QPolytope {
        let mpl = pl.scaled(&int(m as i64)).unwrap();
        let sum = LatticePolytope::from_polytope(minkowski_sum(&mpl, pd).unwrap()).unwrap();
        let vertex: Vec<i64> = vl.iter().zip(vd).map(|(a, b)| a * m as i64 + b).collect();
        let flag = ToricFlag::new(vertex, vec![vec![1, 0], vec![-1, -1]]).unwrap();
        let body = stabilized_body(&SectionModel::ToricPolytope(sum), &FlagChart::Toric(flag), 4)
            .unwrap()
            .body;
        body.scaled(&ratio(1, m as i64)).unwrap()
    }

    #[test]
    fn nested_bodies_shrink_to_the_body_of_l() {
        let pl = LatticePolytope::new(&[vec![0, 0], vec![1, 0], vec![0, 1]]).unwrap();
        let pd = LatticePolytope::new(&[vec![1, 0], vec![2, 0], vec![0, 2], vec![0, 1]]).unwrap();
        let (vl, vd) = ([0i64, 1], [0i64, 2]);
        let body_of = |p: &LatticePolytope, v: &[i64]| {
            let flag = ToricFlag::new(v.to_vec(), vec![vec![1, 0], vec![-1, -1]]).unwrap();
            stabilized_body(&SectionModel::ToricPolytope(p.clone()), &FlagChart::Toric(flag), 4)
                .unwrap()
                .body
        };
        let (lbody, dbody) = (body_of(&pl, &vl), body_of(&pd, &vd));
        assert!(dbody.contains(&QVector::zero(2)));
        let bodies: Vec<QPolytope> = (1..=6)
            .map(|m| nested_body(pl.polytope(), pd.polytope(), &vl, &vd, m))
            .collect();
        for w in bodies.windows(2) {
            assert!(w[0].contains_polytope(&w[1]));
        }
        for (m, b) in (1..=6).zip(&bodies) {
            assert!(b.contains_polytope(&lbody));
            let expected = minkowski_sum(&lbody, &dbody.scaled(&ratio(1, m)).unwrap()).unwrap();
            assert_eq!(b, &expected);
        }
    }

    proptest! {
        #[test]
        fn denominator_check_matches_divisibility(p in 1i64..50, q in 1i64..200, d in 1u32..12, n in 1u32..4) {
            let vol = ratio(p, q);
            let reduced: u128 = vol.denom().to_string().parse().unwrap();
            let power = (d as u128).pow(n);
            prop_assert_eq!(volume_denominator_check(&vol, d, n), power % reduced == 0);
        }
    }
}
