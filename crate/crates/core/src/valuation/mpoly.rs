//! Sparse multivariate polynomials with rational coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::rational::{int, Rational};

pub type Exponent = Vec<u32>;

/// A polynomial over the rationals in a fixed, ordered list of named
/// variables. Zero coefficients are never stored. Terms are kept in a
/// `BTreeMap`, so iteration is in ascending lexicographic order of exponent
/// vectors (first variable most significant).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MPoly {
    vars: Arc<[String]>,
    terms: BTreeMap<Exponent, Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyParseError {
    #[error("unexpected character {ch:?} at offset {at} in {input:?}")]
    UnexpectedChar { input: String, at: usize, ch: char },
    #[error("unexpected end of input in {0:?}")]
    UnexpectedEnd(String),
    #[error("unknown variable {name:?} (known: {known:?})")]
    UnknownVariable { name: String, known: Vec<String> },
    #[error("bad number {0:?}")]
    BadNumber(String),
}

impl MPoly {
    pub fn zero<S: AsRef<str>>(vars: &[S]) -> Self {
        MPoly {
            vars: vars.iter().map(|s| s.as_ref().to_string()).collect(),
            terms: BTreeMap::new(),
        }
    }

    fn empty_like(&self) -> Self {
        MPoly {
            vars: self.vars.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant<S: AsRef<str>>(vars: &[S], c: Rational) -> Self {
        let mut p = MPoly::zero(vars);
        let n = p.nvars();
        p.add_term(vec![0; n], c);
        p
    }

    /// The `i`-th variable as a polynomial.
    pub fn var<S: AsRef<str>>(vars: &[S], i: usize) -> Self {
        let mut e = vec![0; vars.len()];
        e[i] = 1;
        MPoly::monomial(vars, e, Rational::one())
    }

    pub fn monomial<S: AsRef<str>>(vars: &[S], exponent: Exponent, coeff: Rational) -> Self {
        assert_eq!(exponent.len(), vars.len(), "exponent length must match variables");
        let mut p = MPoly::zero(vars);
        p.add_term(exponent, coeff);
        p
    }

    pub fn from_terms<S: AsRef<str>>(
        vars: &[S],
        terms: impl IntoIterator<Item = (Exponent, Rational)>,
    ) -> Self {
        let mut p = MPoly::zero(vars);
        for (e, c) in terms {
            assert_eq!(e.len(), vars.len(), "exponent length must match variables");
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: Exponent, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn same_ring(&self, other: &MPoly) -> bool {
        self.vars == other.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending lexicographic order of exponents.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exponent, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &[u32]) -> Rational {
        self.terms.get(e).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// The common degree of all terms, if the polynomial is homogeneous and
    /// nonzero.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degs = self.terms.keys().map(|e| e.iter().sum::<u32>());
        let d = degs.next()?;
        degs.all(|x| x == d).then_some(d)
    }

    /// Lexicographically smallest exponent and its coefficient.
    pub fn lex_min(&self) -> Option<(&Exponent, &Rational)> {
        self.terms.iter().next()
    }

    pub fn lex_max(&self) -> Option<(&Exponent, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn scale(&self, c: &Rational) -> MPoly {
        if c.is_zero() {
            return self.empty_like();
        }
        MPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> MPoly {
        let mut result = MPoly::constant(&self.vars, Rational::one());
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// `self / g` when `g` divides `self` exactly.
    ///
    /// Uses lexicographic division: if `g | f`, the leading term of every
    /// intermediate remainder is divisible by the leading term of `g`.
    pub fn div_exact(&self, g: &MPoly) -> Option<MPoly> {
        assert!(self.same_ring(g), "polynomials live in different rings");
        let (ge, gc) = g.lex_max()?;
        let mut rem = self.clone();
        let mut quot = self.empty_like();
        while let Some((re, rc)) = rem.lex_max() {
            if re.iter().zip(ge).any(|(a, b)| a < b) {
                return None;
            }
            let qe: Exponent = re.iter().zip(ge).map(|(a, b)| a - b).collect();
            let qc = rc / gc;
            let term = MPoly::monomial(&self.vars, qe.clone(), qc.clone());
            rem = &rem - &(&term * g);
            quot.add_term(qe, qc);
        }
        Some(quot)
    }

    /// Substitutes `images[i]` for the `i`-th variable. The result lives in
    /// the ring of the images, which must all share one ring.
    pub fn substitute(&self, images: &[MPoly]) -> MPoly {
        Substitution::new(images.to_vec()).apply(self)
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.nvars());
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter()
                    .zip(point)
                    .fold(c.clone(), |acc, (&k, x)| acc * num_traits::pow(x.clone(), k as usize))
            })
            .sum()
    }

    pub fn derivative(&self, i: usize) -> MPoly {
        let mut out = self.empty_like();
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut ne = e.clone();
                ne[i] -= 1;
                out.add_term(ne, c * int(e[i] as i64));
            }
        }
        out
    }

    /// Sets variable `i` to 1 and removes it from the ring.
    pub fn dehomogenize(&self, i: usize) -> MPoly {
        let vars: Vec<String> = self
            .vars
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, v)| v.clone())
            .collect();
        let mut out = MPoly::zero(&vars);
        for (e, c) in &self.terms {
            let mut ne = e.clone();
            ne.remove(i);
            out.add_term(ne, c.clone());
        }
        out
    }

    /// For a univariate polynomial: order of vanishing at `t0` together with
    /// the leading Taylor coefficient there. `None` for the zero polynomial.
    pub fn order_at(&self, t0: &Rational) -> Option<(u32, Rational)> {
        assert_eq!(self.nvars(), 1, "order_at needs a univariate polynomial");
        if self.is_zero() {
            return None;
        }
        let shifted = if t0.is_zero() {
            self.clone()
        } else {
            let var = MPoly::var(&self.vars, 0);
            let image = &var + &MPoly::constant(&self.vars, t0.clone());
            self.substitute(&[image])
        };
        shifted.lex_min().map(|(e, c)| (e[0], c.clone()))
    }

    /// Parses expressions such as `"v^2 - u*w"` or `"3/2*x0^2*x1 + 1"` over
    /// the given variables.
    pub fn parse<S: AsRef<str>>(input: &str, vars: &[S]) -> Result<MPoly, PolyParseError> {
        let vars: Vec<String> = vars.iter().map(|s| s.as_ref().to_string()).collect();
        let mut p = Parser {
            input,
            chars: input.char_indices().collect(),
            pos: 0,
            vars: &vars,
        };
        let poly = p.expr()?;
        p.skip_ws();
        if let Some(&(at, ch)) = p.chars.get(p.pos) {
            return Err(PolyParseError::UnexpectedChar {
                input: input.to_string(),
                at,
                ch,
            });
        }
        Ok(poly)
    }
}

/// A ring map given by the images of the variables. Powers of the images are
/// cached, so applying one substitution to many polynomials is cheap.
#[derive(Clone, Debug)]
pub struct Substitution {
    target: Arc<[String]>,
    images: Vec<MPoly>,
    powers: Vec<Vec<MPoly>>,
}

impl Substitution {
    /// Panics if `images` is empty or the images live in different rings.
    pub fn new(images: Vec<MPoly>) -> Self {
        let target = images
            .first()
            .map(|p| p.vars.clone())
            .expect("substitution needs at least one image");
        assert!(images.iter().all(|p| p.vars == target), "images must share one ring");
        let powers = images
            .iter()
            .map(|_| vec![MPoly::constant(&target, Rational::one())])
            .collect();
        Substitution {
            target,
            images,
            powers,
        }
    }

    fn power(&mut self, i: usize, k: u32) -> &MPoly {
        while self.powers[i].len() <= k as usize {
            let next = self.powers[i].last().unwrap() * &self.images[i];
            self.powers[i].push(next);
        }
        &self.powers[i][k as usize]
    }

    pub fn apply(&mut self, f: &MPoly) -> MPoly {
        assert_eq!(self.images.len(), f.nvars(), "one image per variable");
        let mut out = MPoly {
            vars: self.target.clone(),
            terms: BTreeMap::new(),
        };
        for (e, c) in &f.terms {
            let mut term = MPoly::constant(&self.target, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    term = &term * self.power(i, k);
                }
            }
            for (te, tc) in term.terms {
                out.add_term(te, tc);
            }
        }
        out
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms.iter().rev().enumerate() {
            let monomial: Vec<String> = e
                .iter()
                .zip(self.vars.iter())
                .filter(|(&x, _)| x > 0)
                .map(|(&x, v)| if x == 1 { v.clone() } else { format!("{v}^{x}") })
                .collect();
            let sign = if c.is_negative() { "-" } else { "+" };
            let mag = c.abs();
            if k == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            if monomial.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", monomial.join("*"))?;
            } else {
                write!(f, "{mag}*{}", monomial.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MPoly[{}]({})", self.vars.join(","), self)
    }
}

impl<'a> Add<&'a MPoly> for &'a MPoly {
    type Output = MPoly;

    fn add(self, rhs: &MPoly) -> MPoly {
        assert!(self.same_ring(rhs), "polynomials live in different rings");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a MPoly> for &'a MPoly {
    type Output = MPoly;

    fn sub(self, rhs: &MPoly) -> MPoly {
        assert!(self.same_ring(rhs), "polynomials live in different rings");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }
}

impl<'a> Mul<&'a MPoly> for &'a MPoly {
    type Output = MPoly;

    fn mul(self, rhs: &MPoly) -> MPoly {
        assert!(self.same_ring(rhs), "polynomials live in different rings");
        let mut out = self.empty_like();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e: Exponent = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

impl Neg for &MPoly {
    type Output = MPoly;

    fn neg(self) -> MPoly {
        self.scale(&-Rational::one())
    }
}

struct Parser<'a> {
    input: &'a str,
    chars: Vec<(usize, char)>,
    pos: usize,
    vars: &'a [String],
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|(_, c)| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn unexpected(&self) -> PolyParseError {
        match self.chars.get(self.pos) {
            Some(&(at, ch)) => PolyParseError::UnexpectedChar {
                input: self.input.to_string(),
                at,
                ch,
            },
            None => PolyParseError::UnexpectedEnd(self.input.to_string()),
        }
    }

    fn expr(&mut self) -> Result<MPoly, PolyParseError> {
        let mut acc = self.term()?;
        while let Some(c) = self.peek() {
            match c {
                '+' => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                '-' => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<MPoly, PolyParseError> {
        let negate = match self.peek() {
            Some('-') => {
                self.pos += 1;
                true
            }
            Some('+') => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        let mut acc = self.factor()?;
        while self.peek() == Some('*') {
            self.pos += 1;
            acc = &acc * &self.factor()?;
        }
        Ok(if negate { -&acc } else { acc })
    }

    fn factor(&mut self) -> Result<MPoly, PolyParseError> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            let k = self.digits()?;
            let k: u32 = k.parse().map_err(|_| PolyParseError::BadNumber(k))?;
            return Ok(base.pow(k));
        }
        Ok(base)
    }

    fn digits(&mut self) -> Result<String, PolyParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|(_, c)| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.unexpected());
        }
        Ok(self.chars[start..self.pos].iter().map(|&(_, c)| c).collect())
    }

    fn atom(&mut self) -> Result<MPoly, PolyParseError> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.unexpected());
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.digits()?;
                let mut literal = num;
                // A slash directly after digits belongs to the literal.
                if self.chars.get(self.pos).is_some_and(|&(_, c)| c == '/') {
                    self.pos += 1;
                    literal.push('/');
                    literal.push_str(&self.digits()?);
                }
                let value = crate::rational::parse_rational(&literal)
                    .map_err(|_| PolyParseError::BadNumber(literal.clone()))?;
                Ok(MPoly::constant(self.vars, value))
            }
            Some(c) if c.is_alphabetic() || c == '_' => {
                let start = self.pos;
                while self
                    .chars
                    .get(self.pos)
                    .is_some_and(|(_, c)| c.is_alphanumeric() || *c == '_')
                {
                    self.pos += 1;
                }
                let name: String = self.chars[start..self.pos].iter().map(|&(_, c)| c).collect();
                let i = self.vars.iter().position(|v| *v == name).ok_or_else(|| {
                    PolyParseError::UnknownVariable {
                        name: name.clone(),
                        known: self.vars.to_vec(),
                    }
                })?;
                Ok(MPoly::var(self.vars, i))
            }
            _ => Err(self.unexpected()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    const UVW: [&str; 3] = ["u", "v", "w"];

    fn p(s: &str) -> MPoly {
        MPoly::parse(s, &UVW).unwrap()
    }

    #[test]
    fn parse_and_display() {
        let q = p("v^2 - u*w");
        assert_eq!(q.len(), 2);
        assert_eq!(q.to_string(), "-u*w + v^2");
        assert_eq!(p("3/2*u^2 - (v + w)^2 + 1").to_string(), "3/2*u^2 - v^2 - 2*v*w - w^2 + 1");
        assert_eq!(p("-u + u"), MPoly::zero(&UVW));
        assert!(matches!(
            MPoly::parse("x + 1", &UVW),
            Err(PolyParseError::UnknownVariable { .. })
        ));
        assert!(MPoly::parse("u +", &UVW).is_err());
        assert!(MPoly::parse("u ) ", &UVW).is_err());
    }

    #[test]
    fn display_round_trips() {
        for s in ["u^3*v - 7/3*w + 2", "-v", "0", "(u - v)*(u + v)*w^2"] {
            let a = p(s);
            assert_eq!(p(&a.to_string()), a);
        }
    }

    #[test]
    fn exact_division() {
        let q = p("v^2 - u*w");
        let f = &q.pow(3) * &p("u + w");
        assert_eq!(f.div_exact(&q).unwrap(), &q.pow(2) * &p("u + w"));
        assert!(p("u^2").div_exact(&q).is_none());
        assert!(p("u^2 + v").div_exact(&p("u")).is_none());
        assert_eq!(MPoly::zero(&UVW).div_exact(&q), Some(MPoly::zero(&UVW)));
    }

    #[test]
    fn substitution_and_order() {
        let t = ["t"];
        let param = [
            MPoly::parse("1", &t).unwrap(),
            MPoly::parse("t", &t).unwrap(),
            MPoly::parse("t^2", &t).unwrap(),
        ];
        assert_eq!(p("w^2").substitute(&param), MPoly::parse("t^4", &t).unwrap());
        assert_eq!(p("v^2 - u*w").substitute(&param), MPoly::zero(&t));
        let f = MPoly::parse("(t - 2)^3*(t + 1)", &t).unwrap();
        assert_eq!(f.order_at(&int(2)), Some((3, int(3))));
        assert_eq!(f.order_at(&int(0)), Some((0, int(-8))));
        assert_eq!(MPoly::zero(&t).order_at(&int(0)), None);
    }

    #[test]
    fn homogeneity_and_derivatives() {
        assert_eq!(p("u*v + w^2").homogeneous_degree(), Some(2));
        assert_eq!(p("u*v + w").homogeneous_degree(), None);
        assert_eq!(p("u^2*v").derivative(0), p("2*u*v"));
        assert_eq!(p("u^2*v + w").dehomogenize(0).to_string(), "v + w");
        assert_eq!(p("u^2 - v").eval(&[int(3), ratio(1, 2), int(0)]), ratio(17, 2));
    }
}
