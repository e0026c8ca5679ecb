//! Flag valuations on explicit sections.
//!
//! A section is an [`MPoly`]; a flag is a [`FlagChart`]. Valuation vectors
//! are compared lexicographically. For a finite family of sections the set of
//! values taken on their span is computed by [`value_set`], which runs
//! Gaussian elimination keyed on leading values.

mod mpoly;

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::linalg;
use crate::rational::{int, Rational};

pub use mpoly::{Exponent, MPoly, PolyParseError, Substitution};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValuationError {
    #[error("zero section")]
    ZeroSection,
    #[error("section vanishes on flag curve")]
    VanishesOnFlagCurve,
    #[error("divisor polynomial must be nonconstant")]
    ConstantDivisor,
    #[error("not a quadratic form: {0}")]
    NotQuadratic(String),
    #[error("degenerate conic: Gram matrix has rank {rank}")]
    DegenerateConic { rank: usize },
    #[error("curve parametrization: {0}")]
    BadParametrization(String),
    #[error("parametrized curve does not lie on the flag divisor")]
    CurveNotOnDivisor,
    #[error("flag vertex/basis inconsistent with polytope at point {point:?}")]
    ToricInconsistent { point: Vec<i64> },
    #[error("edge basis is not unimodular (determinant {det})")]
    NotUnimodular { det: Rational },
    #[error("graph flag: {0}")]
    BadGraphFlag(String),
    #[error("expected {expected} variables, found {found}")]
    RingMismatch { expected: usize, found: usize },
}

/// Rational curve through the flag point: projective coordinates as
/// polynomials in one parameter, with the point at `t = base_point`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveParam {
    components: Vec<MPoly>,
    base_point: Rational,
}

impl CurveParam {
    /// Common factors `(t - t0)^e` of all components are cleared, so the
    /// parametrization is defined at `t0`.
    pub fn new(components: Vec<MPoly>, base_point: Rational) -> Result<Self, ValuationError> {
        let first = components
            .first()
            .ok_or_else(|| ValuationError::BadParametrization("no components".into()))?;
        if first.nvars() != 1 || components.iter().any(|c| !c.same_ring(first)) {
            return Err(ValuationError::BadParametrization(
                "components must be polynomials in one shared parameter".into(),
            ));
        }
        let common = components
            .iter()
            .filter_map(|c| c.order_at(&base_point).map(|(k, _)| k))
            .min()
            .ok_or_else(|| ValuationError::BadParametrization("all components are zero".into()))?;
        let components = if common == 0 {
            components
        } else {
            let t = MPoly::var(first.vars(), 0);
            let factor = (&t - &MPoly::constant(first.vars(), base_point.clone())).pow(common);
            components
                .iter()
                .map(|c| c.div_exact(&factor).expect("order bounds the factor"))
                .collect()
        };
        Ok(CurveParam {
            components,
            base_point,
        })
    }

    pub fn components(&self) -> &[MPoly] {
        &self.components
    }

    pub fn base_point(&self) -> &Rational {
        &self.base_point
    }

    /// Coordinates of the flag point.
    pub fn point(&self) -> Vec<Rational> {
        self.components
            .iter()
            .map(|c| c.eval(std::slice::from_ref(&self.base_point)))
            .collect()
    }

    pub fn pullback(&self, f: &MPoly) -> Result<MPoly, ValuationError> {
        if f.nvars() != self.components.len() {
            return Err(ValuationError::RingMismatch {
                expected: self.components.len(),
                found: f.nvars(),
            });
        }
        Ok(f.substitute(&self.components))
    }
}

/// Flag given by an irreducible curve `{divisor = 0}` on a surface and a
/// rational parametrization of it through the flag point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceCurveFlag {
    divisor: MPoly,
    param: CurveParam,
}

impl SurfaceCurveFlag {
    /// Quadratic divisors must be nondegenerate conics. Irreducibility of
    /// other divisors is the caller's responsibility.
    pub fn new(divisor: MPoly, param: CurveParam) -> Result<Self, ValuationError> {
        if divisor.is_constant() {
            return Err(ValuationError::ConstantDivisor);
        }
        if divisor.homogeneous_degree() == Some(2) && divisor.nvars() == 3 {
            let rank = conic_rank(&divisor)?;
            if rank < 3 {
                return Err(ValuationError::DegenerateConic { rank });
            }
        }
        if !param.pullback(&divisor)?.is_zero() {
            return Err(ValuationError::CurveNotOnDivisor);
        }
        Ok(SurfaceCurveFlag { divisor, param })
    }

    pub fn divisor(&self) -> &MPoly {
        &self.divisor
    }

    pub fn param(&self) -> &CurveParam {
        &self.param
    }
}

/// Torus-invariant flag of a toric surface or threefold, made into a
/// coordinate flag by the unimodular map `x ↦ B (x - m·vertex)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToricFlag {
    vertex: Vec<i64>,
    basis: Vec<Vec<i64>>,
}

impl ToricFlag {
    pub fn new(vertex: Vec<i64>, basis: Vec<Vec<i64>>) -> Result<Self, ValuationError> {
        let n = vertex.len();
        if basis.len() != n || basis.iter().any(|r| r.len() != n) {
            return Err(ValuationError::RingMismatch {
                expected: n,
                found: basis.len(),
            });
        }
        let m: linalg::Matrix = basis
            .iter()
            .map(|r| r.iter().map(|&x| int(x)).collect())
            .collect();
        let det = linalg::determinant(&m);
        if det.abs() != Rational::one() {
            return Err(ValuationError::NotUnimodular { det });
        }
        Ok(ToricFlag { vertex, basis })
    }

    pub fn vertex(&self) -> &[i64] {
        &self.vertex
    }

    pub fn basis(&self) -> &[Vec<i64>] {
        &self.basis
    }
}

/// Flag of the graphs `z_k = h_k(z_{k+1}, …, z_n)` in an affine chart, where
/// `h_k` depends only on the later coordinates. The triangular coordinate
/// change `y_k = z_k - h_k` turns it into the coordinate flag at the origin,
/// so the valuation is the lex-min exponent after substitution.
#[derive(Debug, Clone)]
pub struct GraphFlag {
    graphs: Vec<MPoly>,
    images: Vec<MPoly>,
}

impl GraphFlag {
    pub fn new(graphs: Vec<MPoly>) -> Result<Self, ValuationError> {
        let n = graphs.len();
        let first = graphs
            .first()
            .ok_or_else(|| ValuationError::BadGraphFlag("no graphs".into()))?;
        let vars = first.vars().to_vec();
        for (k, h) in graphs.iter().enumerate() {
            if h.nvars() != n || !h.same_ring(first) {
                return Err(ValuationError::BadGraphFlag(format!(
                    "graph {k} must live in the {n} chart variables"
                )));
            }
            if h.terms().any(|(e, _)| e[..=k].iter().any(|&x| x > 0)) {
                return Err(ValuationError::BadGraphFlag(format!(
                    "graph {k} may only involve variables after {}",
                    vars[k]
                )));
            }
            if !h.coeff(&vec![0; n]).is_zero() {
                return Err(ValuationError::BadGraphFlag(format!(
                    "graph {k} must pass through the origin"
                )));
            }
        }
        let mut images: Vec<MPoly> = (0..n).map(|k| MPoly::var(&vars, k)).collect();
        for k in (0..n).rev() {
            let shifted = graphs[k].substitute(&images);
            images[k] = &MPoly::var(&vars, k) + &shifted;
        }
        Ok(GraphFlag { graphs, images })
    }

    /// The flag `z_k = z_{k+1}^d` (`z_n = 0`), whose members are smooth
    /// complete intersections of degree-`d` hypersurfaces with the chart
    /// closure. For `n = 2, d = 2` this is a conic through the point.
    pub fn general_type<S: AsRef<str>>(vars: &[S], d: u32) -> Result<Self, ValuationError> {
        let n = vars.len();
        let graphs = (0..n)
            .map(|k| {
                if k + 1 < n {
                    MPoly::var(vars, k + 1).pow(d)
                } else {
                    MPoly::zero(vars)
                }
            })
            .collect();
        GraphFlag::new(graphs)
    }

    pub fn graphs(&self) -> &[MPoly] {
        &self.graphs
    }

    pub fn rank(&self) -> usize {
        self.graphs.len()
    }

    pub fn substitution(&self) -> Substitution {
        Substitution::new(self.images.clone())
    }
}

#[derive(Debug, Clone)]
pub enum FlagChart {
    /// Coordinate flag `Y_k = {x_1 = … = x_k = 0}` of an affine chart.
    Coordinate { n: usize },
    SurfaceCurve(SurfaceCurveFlag),
    Toric(ToricFlag),
    Graph(GraphFlag),
}

impl FlagChart {
    pub fn rank(&self) -> usize {
        match self {
            FlagChart::Coordinate { n } => *n,
            FlagChart::SurfaceCurve(_) => 2,
            FlagChart::Toric(t) => t.vertex.len(),
            FlagChart::Graph(g) => g.rank(),
        }
    }
}

fn lex_min_vector(f: &MPoly) -> Result<(Vec<i64>, Rational), ValuationError> {
    let (e, c) = f.lex_min().ok_or(ValuationError::ZeroSection)?;
    Ok((e.iter().map(|&x| x as i64).collect(), c.clone()))
}

/// Largest `k` with `g^k | f`.
pub fn divisor_order(f: &MPoly, g: &MPoly) -> Result<u32, ValuationError> {
    Ok(divide_out(f, g)?.0)
}

fn divide_out(f: &MPoly, g: &MPoly) -> Result<(u32, MPoly), ValuationError> {
    if f.is_zero() {
        return Err(ValuationError::ZeroSection);
    }
    if g.is_constant() {
        return Err(ValuationError::ConstantDivisor);
    }
    let mut k = 0;
    let mut rest = f.clone();
    while let Some(q) = rest.div_exact(g) {
        rest = q;
        k += 1;
    }
    Ok((k, rest))
}

/// Lex-min exponent of `f` truncated to the first `n` variables.
pub fn coord_flag_valuation(f: &MPoly, n: usize) -> Result<Vec<i64>, ValuationError> {
    if f.nvars() < n {
        return Err(ValuationError::RingMismatch {
            expected: n,
            found: f.nvars(),
        });
    }
    let (mut v, _) = lex_min_vector(f)?;
    v.truncate(n);
    Ok(v)
}

fn restriction_leading(f: &MPoly, param: &CurveParam) -> Result<(u32, Rational), ValuationError> {
    if f.is_zero() {
        return Err(ValuationError::ZeroSection);
    }
    param
        .pullback(f)?
        .order_at(&param.base_point)
        .ok_or(ValuationError::VanishesOnFlagCurve)
}

/// Order at the flag point of `f` restricted to the parametrized curve.
pub fn restriction_order(f: &MPoly, param: &CurveParam) -> Result<u32, ValuationError> {
    Ok(restriction_leading(f, param)?.0)
}

/// Intersection multiplicity at the flag point of `{s = 0}` with a unibranch
/// parametrized curve, read off as the order of the pullback.
pub fn local_multiplicity(s: &MPoly, param: &CurveParam) -> Result<u32, ValuationError> {
    restriction_order(s, param)
}

pub fn surface_flag_valuation(
    f: &MPoly,
    flag: &SurfaceCurveFlag,
) -> Result<Vec<i64>, ValuationError> {
    Ok(surface_leading(f, flag)?.0)
}

fn surface_leading(
    f: &MPoly,
    flag: &SurfaceCurveFlag,
) -> Result<(Vec<i64>, Rational), ValuationError> {
    let (k, rest) = divide_out(f, &flag.divisor)?;
    let (j, c) = restriction_leading(&rest, &flag.param)?;
    Ok((vec![k as i64, j as i64], c))
}

pub fn graph_flag_valuation(f: &MPoly, flag: &GraphFlag) -> Result<Vec<i64>, ValuationError> {
    if f.nvars() != flag.rank() {
        return Err(ValuationError::RingMismatch {
            expected: flag.rank(),
            found: f.nvars(),
        });
    }
    Ok(lex_min_vector(&flag.substitution().apply(f))?.0)
}

/// `B (point - degree·vertex)`.
pub fn toric_flag_valuation(
    point: &[i64],
    flag: &ToricFlag,
    degree: i64,
) -> Result<Vec<i64>, ValuationError> {
    if point.len() != flag.vertex.len() {
        return Err(ValuationError::RingMismatch {
            expected: flag.vertex.len(),
            found: point.len(),
        });
    }
    let shifted: Vec<i64> = point
        .iter()
        .zip(&flag.vertex)
        .map(|(p, v)| p - degree * v)
        .collect();
    let image: Vec<i64> = flag
        .basis
        .iter()
        .map(|row| row.iter().zip(&shifted).map(|(a, b)| a * b).sum())
        .collect();
    if image.iter().any(|&x| x < 0) {
        return Err(ValuationError::ToricInconsistent {
            point: point.to_vec(),
        });
    }
    Ok(image)
}

/// Rank of the symmetric Gram matrix of a quadratic form.
pub fn conic_rank(q: &MPoly) -> Result<usize, ValuationError> {
    if q.homogeneous_degree() != Some(2) {
        return Err(ValuationError::NotQuadratic(q.to_string()));
    }
    let n = q.nvars();
    let mut gram = vec![vec![Rational::zero(); n]; n];
    for (e, c) in q.terms() {
        let idx: Vec<usize> = (0..n).flat_map(|i| std::iter::repeat_n(i, e[i] as usize)).collect();
        let (i, j) = (idx[0], idx[1]);
        if i == j {
            gram[i][i] = c.clone();
        } else {
            let half = c / int(2);
            gram[i][j] = half.clone();
            gram[j][i] = half;
        }
    }
    Ok(linalg::rank(&gram))
}

/// A valuation on polynomial sections, split into a linear change of
/// representation (`prepare`) and a leading-term query on prepared
/// polynomials. `leading` returns the value and a coefficient such that for
/// prepared `f`, `g` with equal values `v`, `f - (c_f / c_g) g` is zero or
/// has value strictly greater than `v`.
pub trait PolyValuation: Sync {
    fn rank(&self) -> usize;

    fn prepare_all(&self, sections: &[MPoly]) -> Result<Vec<MPoly>, ValuationError> {
        Ok(sections.to_vec())
    }

    fn leading(&self, f: &MPoly) -> Result<(Vec<i64>, Rational), ValuationError>;

    /// True when `leading` is the lex-min term of the prepared polynomial.
    /// Then the span splits along groups of polynomials with disjoint
    /// supports, and each group can be eliminated on its own.
    fn is_monomial_order(&self) -> bool {
        false
    }

    fn value(&self, f: &MPoly) -> Result<Vec<i64>, ValuationError> {
        let prepared = self.prepare_all(std::slice::from_ref(f))?;
        Ok(self.leading(&prepared[0])?.0)
    }
}

/// Coordinate flag on sections already written in affine coordinates.
#[derive(Debug, Clone)]
pub struct AffineCoordinate {
    pub n: usize,
}

impl PolyValuation for AffineCoordinate {
    fn rank(&self) -> usize {
        self.n
    }

    fn prepare_all(&self, sections: &[MPoly]) -> Result<Vec<MPoly>, ValuationError> {
        if let Some(f) = sections.iter().find(|f| f.nvars() != self.n) {
            return Err(ValuationError::RingMismatch {
                expected: self.n,
                found: f.nvars(),
            });
        }
        Ok(sections.to_vec())
    }

    fn is_monomial_order(&self) -> bool {
        true
    }

    fn leading(&self, f: &MPoly) -> Result<(Vec<i64>, Rational), ValuationError> {
        lex_min_vector(f)
    }
}

/// Coordinate flag in the chart where the first variable is 1; sections are
/// homogeneous in `n + 1` variables.
#[derive(Debug, Clone)]
pub struct ChartCoordinate {
    pub n: usize,
}

impl PolyValuation for ChartCoordinate {
    fn rank(&self) -> usize {
        self.n
    }

    fn prepare_all(&self, sections: &[MPoly]) -> Result<Vec<MPoly>, ValuationError> {
        sections.iter().map(|f| dehomogenize_checked(f, self.n)).collect()
    }

    fn is_monomial_order(&self) -> bool {
        true
    }

    fn leading(&self, f: &MPoly) -> Result<(Vec<i64>, Rational), ValuationError> {
        lex_min_vector(f)
    }
}

fn dehomogenize_checked(f: &MPoly, n: usize) -> Result<MPoly, ValuationError> {
    if f.nvars() != n + 1 {
        return Err(ValuationError::RingMismatch {
            expected: n + 1,
            found: f.nvars(),
        });
    }
    Ok(f.dehomogenize(0))
}

/// Graph flag in the chart where the first variable is 1.
#[derive(Debug, Clone)]
pub struct ChartGraph(pub GraphFlag);

impl PolyValuation for ChartGraph {
    fn rank(&self) -> usize {
        self.0.rank()
    }

    fn prepare_all(&self, sections: &[MPoly]) -> Result<Vec<MPoly>, ValuationError> {
        let mut sub = self.0.substitution();
        sections
            .iter()
            .map(|f| {
                let affine = dehomogenize_checked(f, self.0.rank())?;
                if !affine.same_ring(&self.0.graphs[0]) {
                    return Err(ValuationError::BadGraphFlag(format!(
                        "chart variables {:?} do not match the flag's {:?}",
                        affine.vars(),
                        self.0.graphs[0].vars()
                    )));
                }
                Ok(sub.apply(&affine))
            })
            .collect()
    }

    fn is_monomial_order(&self) -> bool {
        true
    }

    fn leading(&self, f: &MPoly) -> Result<(Vec<i64>, Rational), ValuationError> {
        lex_min_vector(f)
    }
}

impl PolyValuation for SurfaceCurveFlag {
    fn rank(&self) -> usize {
        2
    }

    fn leading(&self, f: &MPoly) -> Result<(Vec<i64>, Rational), ValuationError> {
        surface_leading(f, self)
    }
}

/// Values of `val` on the nonzero elements of the span of `sections`, each
/// with a witness (a prepared polynomial attaining it). Since the span has
/// dimension equal to the number of distinct values, linearly independent
/// sections yield exactly `sections.len()` values.
pub fn value_set(
    val: &dyn PolyValuation,
    sections: &[MPoly],
) -> Result<BTreeMap<Vec<i64>, MPoly>, ValuationError> {
    let prepared = val.prepare_all(sections)?;
    if !val.is_monomial_order() {
        return eliminate(val, prepared);
    }
    let mut out = BTreeMap::new();
    for group in support_components(prepared) {
        out.extend(eliminate(val, group)?);
    }
    Ok(out)
}

fn eliminate(
    val: &dyn PolyValuation,
    polys: Vec<MPoly>,
) -> Result<BTreeMap<Vec<i64>, MPoly>, ValuationError> {
    let mut pivots: BTreeMap<Vec<i64>, (MPoly, Rational)> = BTreeMap::new();
    for mut f in polys {
        while !f.is_zero() {
            let (v, c) = val.leading(&f)?;
            match pivots.get(&v) {
                Some((p, pc)) => f = &f - &p.scale(&(c / pc)),
                None => {
                    pivots.insert(v, (f, c));
                    break;
                }
            }
        }
    }
    Ok(pivots.into_iter().map(|(v, (p, _))| (v, p)).collect())
}

/// Groups polynomials into connected components of the relation "share a
/// monomial", preserving input order within each group.
fn support_components(polys: Vec<MPoly>) -> Vec<Vec<MPoly>> {
    fn find(parent: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while parent[r] != r {
            r = parent[r];
        }
        let mut i = i;
        while parent[i] != r {
            let next = parent[i];
            parent[i] = r;
            i = next;
        }
        r
    }
    let mut parent: Vec<usize> = (0..polys.len()).collect();
    let mut owner: std::collections::HashMap<&Exponent, usize> = std::collections::HashMap::new();
    for (i, f) in polys.iter().enumerate() {
        for (e, _) in f.terms() {
            match owner.get(e) {
                Some(&j) => {
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    parent[a.max(b)] = a.min(b);
                }
                None => {
                    owner.insert(e, i);
                }
            }
        }
    }
    let roots: Vec<usize> = (0..polys.len()).map(|i| find(&mut parent, i)).collect();
    let mut groups: BTreeMap<usize, Vec<MPoly>> = BTreeMap::new();
    for (f, r) in polys.into_iter().zip(roots) {
        groups.entry(r).or_default().push(f);
    }
    groups.into_values().collect()
}
