use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use super::zariski::{zariski, zariski_germ};
use super::{intersect, DivisorClass, SurfaceError, SurfaceModel, ZariskiDecomp};
use crate::exactgeom::{self, affine_image, hull, QPolytope, QVector};
use crate::rational::{format_rational, sqrt_exact, Rational};

pub const DEFAULT_CHAMBER_CAP: usize = 64;

/// `t ↦ constant + slope·t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Affine {
    pub constant: Rational,
    pub slope: Rational,
}

impl Affine {
    /// The affine function through `value` at `t0` with the given slope.
    fn through(t0: &Rational, value: &Rational, slope: &Rational) -> Affine {
        Affine {
            constant: value - slope * t0,
            slope: slope.clone(),
        }
    }

    pub fn eval(&self, t: &Rational) -> Rational {
        &self.constant + &self.slope * t
    }

    pub fn is_zero(&self) -> bool {
        self.constant.is_zero() && self.slope.is_zero()
    }
}

/// One Zariski chamber of the ray `D - tC` for `t ∈ [start, end]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chamber {
    pub start: Rational,
    pub end: Rational,
    /// Negative-part coefficients, keyed by curve index; only curves whose
    /// coefficient is not identically zero on the chamber are listed.
    pub coefficients: BTreeMap<usize, Affine>,
    /// `P_t · C`.
    pub beta: Affine,
}

impl Chamber {
    pub fn support(&self) -> Vec<usize> {
        self.coefficients.keys().copied().collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChamberScan {
    pub divisor: DivisorClass,
    pub flag: DivisorClass,
    pub chambers: Vec<Chamber>,
}

impl ChamberScan {
    pub fn breakpoints(&self) -> Vec<Rational> {
        let mut out = vec![self.chambers[0].start.clone()];
        out.extend(self.chambers.iter().map(|c| c.end.clone()));
        out
    }

    pub fn mu(&self) -> Rational {
        self.chambers.last().expect("scan has a chamber").end.clone()
    }

    /// The chamber containing `t`; at a breakpoint the earlier one.
    pub fn chamber_at(&self, t: &Rational) -> Option<&Chamber> {
        self.chambers.iter().find(|c| &c.start <= t && t <= &c.end)
    }

    pub fn coefficient_at(&self, curve: usize, t: &Rational) -> Option<Rational> {
        let c = self.chamber_at(t)?;
        Some(
            c.coefficients
                .get(&curve)
                .map(|a| a.eval(t))
                .unwrap_or_else(Rational::zero),
        )
    }

    pub fn beta_at(&self, t: &Rational) -> Option<Rational> {
        self.chamber_at(t).map(|c| c.beta.eval(t))
    }
}

/// Smallest `s > 0` with `a + 2bs + cs² = 0`, given `a > 0`.
fn first_positive_root(a: &Rational, b: &Rational, c: &Rational) -> Result<Option<Rational>, SurfaceError> {
    let two = Rational::from_integer(2.into());
    if c.is_zero() {
        if b.is_negative() {
            return Ok(Some(-a / (&two * b)));
        }
        return Ok(None);
    }
    let disc = b * b - a * c;
    if disc.is_negative() {
        return Ok(None);
    }
    let root = sqrt_exact(&disc).ok_or_else(|| {
        SurfaceError::IrrationalEnd(format!(
            "{} + {}·s + {}·s²",
            format_rational(a),
            format_rational(&(&two * b)),
            format_rational(c)
        ))
    })?;
    let candidates = [(-b - &root) / c, (-b + &root) / c];
    Ok(candidates.into_iter().filter(|s| s.is_positive()).min())
}

/// Scan `D_t = D - tC` from `t = 0` until `D_t` stops being big, splitting
/// `[0, μ]` into Zariski chambers.
pub fn chamber_scan(
    model: &SurfaceModel,
    d: &DivisorClass,
    flag: &DivisorClass,
    cap: usize,
) -> Result<ChamberScan, SurfaceError> {
    model.check(d)?;
    model.check(flag)?;
    let z = zariski(model, d)?;
    let vol = intersect(model, &z.p, &z.p);
    if !vol.is_positive() {
        return Err(SurfaceError::NotBig(vol));
    }
    let neg_flag = flag.scale(&-Rational::one());
    let mut chambers = Vec::new();
    let mut t = Rational::zero();
    loop {
        if chambers.len() == cap {
            return Err(SurfaceError::ChamberCapExceeded(cap));
        }
        let dt = d.sub(&flag.scale(&t));
        let germ = zariski_germ(model, &dt, &neg_flag)?;
        let mut p0 = dt.clone();
        let mut p1 = neg_flag.clone();
        for (k, &i) in germ.support.iter().enumerate() {
            let c = &model.curves()[i].class;
            p0 = p0.sub(&c.scale(&germ.value[k]));
            p1 = p1.sub(&c.scale(&germ.slope[k]));
        }

        // Linear events, as offsets s = t' - t > 0.
        let mut events: Vec<Rational> = Vec::new();
        for (v, sl) in germ.value.iter().zip(&germ.slope) {
            if sl.is_negative() && v.is_positive() {
                events.push(-v / sl);
            }
        }
        for (i, curve) in model.curves().iter().enumerate() {
            if germ.support.contains(&i) {
                continue;
            }
            let f0 = intersect(model, &p0, &curve.class);
            let f1 = intersect(model, &p1, &curve.class);
            if f1.is_negative() && f0.is_positive() {
                events.push(-f0 / f1);
            }
        }
        let linear = events.into_iter().min();

        let qa = intersect(model, &p0, &p0);
        let qb = intersect(model, &p0, &p1);
        let qc = intersect(model, &p1, &p1);
        let q_at = |s: &Rational| &qa + Rational::from_integer(2.into()) * &qb * s + &qc * s * s;
        let (offset, last) = match &linear {
            Some(s) if q_at(s).is_positive() => (s.clone(), false),
            _ => match first_positive_root(&qa, &qb, &qc)? {
                Some(s) => (s, true),
                None => return Err(SurfaceError::UnboundedScan),
            },
        };
        let end = &t + &offset;
        let coefficients = germ
            .support
            .iter()
            .zip(germ.value.iter().zip(&germ.slope))
            .map(|(&i, (v, sl))| (i, Affine::through(&t, v, sl)))
            .filter(|(_, a)| !a.is_zero())
            .collect();
        let beta = Affine::through(
            &t,
            &intersect(model, &p0, flag),
            &intersect(model, &p1, flag),
        );
        chambers.push(Chamber {
            start: t.clone(),
            end: end.clone(),
            coefficients,
            beta,
        });
        if last {
            break;
        }
        t = end;
    }
    Ok(ChamberScan {
        divisor: d.clone(),
        flag: flag.clone(),
        chambers,
    })
}

/// `μ_C(D) = sup { t : D - tC big }`.
pub fn mu(model: &SurfaceModel, d: &DivisorClass, flag: &DivisorClass) -> Result<Rational, SurfaceError> {
    Ok(chamber_scan(model, d, flag, DEFAULT_CHAMBER_CAP)?.mu())
}

/// How the point `x` on the flag curve is chosen.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PointMode {
    /// `x` outside every declared negative curve: all local orders vanish.
    Generic,
    /// `ord_x(C_i|_{C})` per curve name.
    Explicit(BTreeMap<String, Rational>),
}

/// The polygon `{ a ≤ t ≤ μ, α(t) ≤ y ≤ β(t) }` with `α`, `β` piecewise
/// linear, sampled at `nodes`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OkBody2D {
    pub a: Rational,
    pub mu: Rational,
    pub nodes: Vec<Rational>,
    pub alpha: Vec<Rational>,
    pub beta: Vec<Rational>,
    pub polytope: QPolytope,
}

impl OkBody2D {
    fn interpolate(&self, values: &[Rational], t: &Rational) -> Option<Rational> {
        if t < &self.a || t > &self.mu {
            return None;
        }
        for k in 0..self.nodes.len() {
            if &self.nodes[k] == t {
                return Some(values[k].clone());
            }
            if k + 1 < self.nodes.len() && &self.nodes[k] < t && t < &self.nodes[k + 1] {
                let w = (t - &self.nodes[k]) / (&self.nodes[k + 1] - &self.nodes[k]);
                return Some(&values[k] + w * (&values[k + 1] - &values[k]));
            }
        }
        None
    }

    pub fn alpha_at(&self, t: &Rational) -> Option<Rational> {
        self.interpolate(&self.alpha, t)
    }

    pub fn beta_at(&self, t: &Rational) -> Option<Rational> {
        self.interpolate(&self.beta, t)
    }

    pub fn area(&self) -> Rational {
        exactgeom::volume(&self.polytope)
    }
}

fn flag_coefficient(model: &SurfaceModel, z: &ZariskiDecomp, flag: &DivisorClass) -> Rational {
    z.coefficient_of_class(model, flag)
}

/// `ord_x(N|_C)` for `N = Σ coeffs_i C_i`, skipping curves of the flag class.
fn local_order<'a>(
    model: &SurfaceModel,
    flag: &DivisorClass,
    mode: &PointMode,
    coeffs: impl Iterator<Item = (usize, &'a Rational)>,
) -> Result<Rational, SurfaceError> {
    let ords = match mode {
        PointMode::Generic => return Ok(Rational::zero()),
        PointMode::Explicit(ords) => ords,
    };
    let mut total = Rational::zero();
    for (i, a) in coeffs {
        let curve = &model.curves()[i];
        if &curve.class == flag || a.is_zero() {
            continue;
        }
        let ord = ords
            .get(&curve.name)
            .ok_or_else(|| SurfaceError::MissingOrdData(curve.name.clone()))?;
        total += a * ord;
    }
    Ok(total)
}

/// Okounkov polygon of a big class `D` with respect to a flag `C ∋ x`.
pub fn okounkov_body_surface(
    model: &SurfaceModel,
    d: &DivisorClass,
    flag: &DivisorClass,
    mode: &PointMode,
) -> Result<OkBody2D, SurfaceError> {
    let scan = chamber_scan(model, d, flag, DEFAULT_CHAMBER_CAP)?;
    let z = zariski(model, d)?;
    let a = flag_coefficient(model, &z, flag);
    let mu = scan.mu();
    let mut nodes = vec![a.clone()];
    nodes.extend(scan.breakpoints().into_iter().filter(|t| t > &a && t < &mu));
    if mu > a {
        nodes.push(mu.clone());
    }

    let mut alpha = Vec::with_capacity(nodes.len());
    let mut beta = Vec::with_capacity(nodes.len());
    for t in &nodes {
        // At a breakpoint both adjacent chambers agree by continuity.
        let chamber = scan.chamber_at(t).expect("node lies in the scanned range");
        let values: Vec<(usize, Rational)> = chamber
            .coefficients
            .iter()
            .map(|(&i, f)| (i, f.eval(t)))
            .collect();
        let lower = local_order(model, flag, mode, values.iter().map(|(i, v)| (*i, v)))?;
        beta.push(&lower + chamber.beta.eval(t));
        alpha.push(lower);
    }

    let mut points = Vec::with_capacity(2 * nodes.len());
    for k in 0..nodes.len() {
        points.push(QVector::new(vec![nodes[k].clone(), alpha[k].clone()]));
        points.push(QVector::new(vec![nodes[k].clone(), beta[k].clone()]));
    }
    let polytope = hull(&points)?;
    Ok(OkBody2D {
        a,
        mu,
        nodes,
        alpha,
        beta,
        polytope,
    })
}

/// The bodies of `D` and of its nef part, and the shift relating them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Translate {
    pub decomposition: ZariskiDecomp,
    pub body_of_p: OkBody2D,
    pub shift: QVector,
    pub body_of_d: OkBody2D,
}

/// Computes `Δ(D)` and `Δ(P)` independently and checks
/// `Δ(D) = Δ(P) + (ord_C N, ord_x(N|_C))`.
pub fn translate_decomposition(
    model: &SurfaceModel,
    d: &DivisorClass,
    flag: &DivisorClass,
    mode: &PointMode,
) -> Result<Translate, SurfaceError> {
    let z = zariski(model, d)?;
    let body_of_p = okounkov_body_surface(model, &z.p, flag, mode)?;
    let body_of_d = okounkov_body_surface(model, d, flag, mode)?;
    let first = flag_coefficient(model, &z, flag);
    let second = local_order(model, flag, mode, z.coefficients.iter().map(|(&i, a)| (i, a)))?;
    let shift = QVector::new(vec![first, second]);
    let moved = affine_image(&body_of_p.polytope, &Rational::one(), &shift)?;
    if moved != body_of_d.polytope {
        return Err(SurfaceError::TranslateMismatch(shift.to_string()));
    }
    Ok(Translate {
        decomposition: z,
        body_of_p,
        shift,
        body_of_d,
    })
}
