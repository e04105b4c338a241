//! Sparse multivariate polynomials over exact rationals.
//!
//! Generators are the weight `lambda`, the central charge `c` and the
//! coefficient coordinates `a_m`, `abar_m`. Monomials are ordered
//! graded-lexicographically with the variable order
//! `a1 > a2 > ... > abar1 > abar2 > ... > lambda > c`; terms are stored in
//! ascending order, which is also the order of the canonical text form.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::rational::{format_rational, parse_rational, Rational};

/// A polynomial generator.
///
/// The derived order (all `A` before all `Abar`, then `Lambda`, then `CC`)
/// is the variable order used by the monomial order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    A(u32),
    Abar(u32),
    Lambda,
    CC,
}

impl Generator {
    /// Swaps `a_m` and `abar_m`; fixes `lambda` and `c`.
    pub fn mirror(self) -> Generator {
        match self {
            Generator::A(m) => Generator::Abar(m),
            Generator::Abar(m) => Generator::A(m),
            g => g,
        }
    }

    pub fn index(self) -> u32 {
        match self {
            Generator::A(m) | Generator::Abar(m) => m,
            _ => 0,
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::A(m) => write!(f, "a{m}"),
            Generator::Abar(m) => write!(f, "abar{m}"),
            Generator::Lambda => write!(f, "lambda"),
            Generator::CC => write!(f, "c"),
        }
    }
}

/// Exponent vector with finite support, sorted by generator, exponents > 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(Generator, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(g: Generator) -> Self {
        Monomial(vec![(g, 1)])
    }

    /// Builds a monomial from arbitrary `(generator, exponent)` pairs.
    pub fn from_pairs<I: IntoIterator<Item = (Generator, u32)>>(pairs: I) -> Self {
        let mut map: BTreeMap<Generator, u32> = BTreeMap::new();
        for (g, e) in pairs {
            if e > 0 {
                *map.entry(g).or_insert(0) += e;
            }
        }
        Monomial(map.into_iter().collect())
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn factors(&self) -> &[(Generator, u32)] {
        &self.0
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&(_, e)| e as u64).sum()
    }

    pub fn exponent(&self, g: Generator) -> u32 {
        match self.0.binary_search_by(|(h, _)| h.cmp(&g)) {
            Ok(i) => self.0[i].1,
            Err(_) => 0,
        }
    }

    /// Weighted degree in the `a` block, `sum m * deg_{a_m}`.
    pub fn left_weight(&self) -> u64 {
        self.0
            .iter()
            .filter_map(|&(g, e)| match g {
                Generator::A(m) => Some(m as u64 * e as u64),
                _ => None,
            })
            .sum()
    }

    /// Weighted degree in the `abar` block.
    pub fn right_weight(&self) -> u64 {
        self.0
            .iter()
            .filter_map(|&(g, e)| match g {
                Generator::Abar(m) => Some(m as u64 * e as u64),
                _ => None,
            })
            .sum()
    }

    pub fn has_parameters(&self) -> bool {
        self.0
            .iter()
            .any(|(g, _)| matches!(g, Generator::Lambda | Generator::CC))
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// `self / other` if `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut j = 0;
        for &(g, e) in &self.0 {
            if j < other.0.len() && other.0[j].0 < g {
                return None;
            }
            if j < other.0.len() && other.0[j].0 == g {
                let f = other.0[j].1;
                j += 1;
                if f > e {
                    return None;
                }
                if e > f {
                    out.push((g, e - f));
                }
            } else {
                out.push((g, e));
            }
        }
        if j < other.0.len() {
            return None;
        }
        Some(Monomial(out))
    }

    /// Lowers the exponent of `g` by one; `None` if `g` is absent.
    pub fn lower(&self, g: Generator) -> Option<(u32, Monomial)> {
        let i = self.0.binary_search_by(|(h, _)| h.cmp(&g)).ok()?;
        let e = self.0[i].1;
        let mut v = self.0.clone();
        if e == 1 {
            v.remove(i);
        } else {
            v[i].1 -= 1;
        }
        Some((e, Monomial(v)))
    }

    pub fn map_generators<F: Fn(Generator) -> Generator>(&self, f: F) -> Monomial {
        Monomial::from_pairs(self.0.iter().map(|&(g, e)| (f(g), e)))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            o => return o,
        }
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j) = (0, 0);
        loop {
            match (a.get(i), b.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some(&(ga, ea)), Some(&(gb, eb))) => match ga.cmp(&gb) {
                    // earlier variable present only in `a`
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal => {
                        if ea != eb {
                            return ea.cmp(&eb);
                        }
                        i += 1;
                        j += 1;
                    }
                },
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (k, (g, e)) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            if *e == 1 {
                write!(f, "{g}")?;
            } else {
                write!(f, "{g}^{e}")?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("polynomial involves lambda or c where a pure state is required")]
    NotAState,
    #[error("parse error: {0}")]
    Parse(String),
}

/// Polynomial with rational coefficients; no zero coefficients are stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct CoeffPoly {
    terms: BTreeMap<Monomial, Rational>,
}

impl CoeffPoly {
    pub fn zero() -> Self {
        CoeffPoly::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(r: Rational) -> Self {
        Self::term(r, Monomial::one())
    }

    pub fn int(n: i64) -> Self {
        Self::constant(crate::rational::int(n))
    }

    pub fn var(g: Generator) -> Self {
        Self::term(Rational::one(), Monomial::var(g))
    }

    pub fn lambda() -> Self {
        Self::var(Generator::Lambda)
    }

    pub fn cc() -> Self {
        Self::var(Generator::CC)
    }

    pub fn a(m: u32) -> Self {
        if m == 0 {
            Self::one()
        } else {
            Self::var(Generator::A(m))
        }
    }

    pub fn abar(m: u32) -> Self {
        if m == 0 {
            Self::one()
        } else {
            Self::var(Generator::Abar(m))
        }
    }

    pub fn term(c: Rational, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        CoeffPoly { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rational)>>(it: I) -> Self {
        let mut p = CoeffPoly::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
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

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    /// The value if the polynomial is constant.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
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

    pub fn add_assign_ref(&mut self, other: &CoeffPoly) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    pub fn sub_assign_ref(&mut self, other: &CoeffPoly) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), -c.clone());
        }
    }

    /// `self += c * m * other`.
    pub fn add_scaled(&mut self, other: &CoeffPoly, c: &Rational, m: &Monomial) {
        if c.is_zero() {
            return;
        }
        for (om, oc) in &other.terms {
            self.add_term(om.mul(m), oc * c);
        }
    }

    pub fn add(&self, other: &CoeffPoly) -> CoeffPoly {
        let mut r = self.clone();
        r.add_assign_ref(other);
        r
    }

    pub fn sub(&self, other: &CoeffPoly) -> CoeffPoly {
        let mut r = self.clone();
        r.sub_assign_ref(other);
        r
    }

    pub fn neg(&self) -> CoeffPoly {
        CoeffPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> CoeffPoly {
        if c.is_zero() {
            return CoeffPoly::zero();
        }
        CoeffPoly {
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn mul(&self, other: &CoeffPoly) -> CoeffPoly {
        let (small, big) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut r = CoeffPoly::zero();
        for (m, c) in &small.terms {
            r.add_scaled(big, c, m);
        }
        r
    }

    pub fn pow(&self, e: u32) -> CoeffPoly {
        let mut r = CoeffPoly::one();
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }

    pub fn derivative(&self, g: Generator) -> CoeffPoly {
        let mut r = CoeffPoly::zero();
        for (m, c) in &self.terms {
            if let Some((e, rest)) = m.lower(g) {
                r.add_term(rest, c * Rational::from_integer(e.into()));
            }
        }
        r
    }

    /// Generators occurring in the polynomial, ascending.
    pub fn generators(&self) -> Vec<Generator> {
        let mut v: Vec<Generator> = self
            .terms
            .keys()
            .flat_map(|m| m.factors().iter().map(|&(g, _)| g))
            .collect();
        v.sort();
        v.dedup();
        v
    }

    /// Largest coordinate index `m` of any `a_m` or `abar_m`.
    pub fn max_index(&self) -> u32 {
        self.terms
            .keys()
            .flat_map(|m| m.factors().iter().map(|&(g, _)| g.index()))
            .max()
            .unwrap_or(0)
    }

    pub fn degree_in(&self, g: Generator) -> u32 {
        self.terms.keys().map(|m| m.exponent(g)).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u64 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    pub fn depends_on_parameters(&self) -> bool {
        self.terms.keys().any(|m| m.has_parameters())
    }

    /// Maximum left and right weighted degrees over monomials.
    ///
    /// With `strict`, polynomials containing `lambda` or `c` are rejected.
    pub fn bidegree(&self, strict: bool) -> Result<(u64, u64), PolyError> {
        if strict && self.depends_on_parameters() {
            return Err(PolyError::NotAState);
        }
        let l = self
            .terms
            .keys()
            .map(|m| m.left_weight())
            .max()
            .unwrap_or(0);
        let r = self
            .terms
            .keys()
            .map(|m| m.right_weight())
            .max()
            .unwrap_or(0);
        Ok((l, r))
    }

    /// Evaluates the generators in `assignment`, keeping the others symbolic.
    pub fn substitute(&self, assignment: &BTreeMap<Generator, Rational>) -> CoeffPoly {
        let mut r = CoeffPoly::zero();
        for (m, c) in &self.terms {
            let mut coef = c.clone();
            let mut rest = Vec::new();
            for &(g, e) in m.factors() {
                match assignment.get(&g) {
                    Some(v) => coef *= num_traits::pow(v.clone(), e as usize),
                    None => rest.push((g, e)),
                }
            }
            r.add_term(Monomial(rest), coef);
        }
        r
    }

    /// Replaces generator `g` by the polynomial `value`.
    pub fn substitute_poly(&self, g: Generator, value: &CoeffPoly) -> CoeffPoly {
        let mut powers: Vec<CoeffPoly> = vec![CoeffPoly::one()];
        let mut r = CoeffPoly::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(g) as usize;
            while powers.len() <= e {
                let next = powers.last().unwrap().mul(value);
                powers.push(next);
            }
            let rest = Monomial::from_pairs(m.factors().iter().copied().filter(|&(h, _)| h != g));
            r.add_scaled(&powers[e], c, &rest);
        }
        r
    }

    pub fn map_generators<F: Fn(Generator) -> Generator + Copy>(&self, f: F) -> CoeffPoly {
        CoeffPoly::from_terms(
            self.terms
                .iter()
                .map(|(m, c)| (m.map_generators(f), c.clone())),
        )
    }

    /// Exchanges `a_m` and `abar_m`.
    pub fn mirror(&self) -> CoeffPoly {
        self.map_generators(Generator::mirror)
    }

    /// Keeps only the terms accepted by `keep`.
    pub fn filter_terms<F: Fn(&Monomial) -> bool>(&self, keep: F) -> CoeffPoly {
        CoeffPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Splits into coefficients of the monomials in `gens`, the remaining
    /// generators going into the coefficient polynomials.
    pub fn collect_by(&self, gens: &dyn Fn(Generator) -> bool) -> BTreeMap<Monomial, CoeffPoly> {
        let mut out: BTreeMap<Monomial, CoeffPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let (inner, outer): (Vec<_>, Vec<_>) = m.factors().iter().partition(|(g, _)| gens(*g));
            out.entry(Monomial(inner))
                .or_default()
                .add_term(Monomial(outer), c.clone());
        }
        out
    }

    /// Exact quotient, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &CoeffPoly) -> Option<CoeffPoly> {
        let (dm, dc) = d.leading()?;
        let (dm, dc) = (dm.clone(), dc.clone());
        let mut r = self.clone();
        let mut q = CoeffPoly::zero();
        while let Some((rm, rc)) = r.leading() {
            let tm = rm.div(&dm)?;
            let tc = rc / &dc;
            r.add_scaled(d, &-tc.clone(), &tm);
            q.add_term(tm, tc);
        }
        Some(q)
    }

    /// Multiplies every coefficient so that the leading one becomes 1.
    pub fn monic(&self) -> CoeffPoly {
        match self.leading() {
            Some((_, c)) => self.scale(&(Rational::one() / c)),
            None => CoeffPoly::zero(),
        }
    }

    pub fn parse(s: &str) -> Result<CoeffPoly, PolyError> {
        parse_poly(s)
    }
}

impl fmt::Display for CoeffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            if m.is_one() {
                write!(f, "{}", format_rational(c))?;
            } else {
                write!(f, "{}*{}", format_rational(c), m)?;
            }
        }
        Ok(())
    }
}

impl FromStr for CoeffPoly {
    type Err = PolyError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_poly(s)
    }
}

const MAX_PARSE_EXPONENT: u32 = 1 << 16;

fn parse_generator(s: &str) -> Result<Generator, PolyError> {
    let index = |digits: &str| -> Result<u32, PolyError> {
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(PolyError::Parse(format!("bad generator `{s}`")));
        }
        match digits.parse::<u32>() {
            Ok(m) if m >= 1 => Ok(m),
            _ => Err(PolyError::Parse(format!("bad generator index `{s}`"))),
        }
    };
    match s {
        "lambda" => Ok(Generator::Lambda),
        "c" => Ok(Generator::CC),
        _ => {
            if let Some(d) = s.strip_prefix("abar") {
                Ok(Generator::Abar(index(d)?))
            } else if let Some(d) = s.strip_prefix('a') {
                Ok(Generator::A(index(d)?))
            } else {
                Err(PolyError::Parse(format!("unknown generator `{s}`")))
            }
        }
    }
}

fn parse_factor(s: &str) -> Result<(Option<Rational>, Option<(Generator, u32)>), PolyError> {
    let s = s.trim();
    if s.is_empty() {
        return Err(PolyError::Parse("empty factor".into()));
    }
    if s.starts_with(|c: char| c.is_ascii_digit() || c == '-') {
        let r = parse_rational(s).map_err(|e| PolyError::Parse(e.to_string()))?;
        return Ok((Some(r), None));
    }
    let (name, exp) = match s.split_once('^') {
        Some((n, e)) => {
            let e = e.trim();
            if e.is_empty() || !e.bytes().all(|b| b.is_ascii_digit()) {
                return Err(PolyError::Parse(format!("bad exponent in `{s}`")));
            }
            match e.parse::<u32>() {
                Ok(v) if v <= MAX_PARSE_EXPONENT => (n.trim(), v),
                _ => return Err(PolyError::Parse(format!("exponent out of range in `{s}`"))),
            }
        }
        None => (s, 1),
    };
    Ok((None, Some((parse_generator(name)?, exp))))
}

fn parse_poly(s: &str) -> Result<CoeffPoly, PolyError> {
    let s = s.trim();
    if s.is_empty() {
        return Err(PolyError::Parse("empty polynomial".into()));
    }
    if s == "0" {
        return Ok(CoeffPoly::zero());
    }
    let mut p = CoeffPoly::zero();
    // the printed form only uses " + ", but hand-written " - " is accepted
    let mut terms = Vec::new();
    for plus in s.split(" + ") {
        let mut parts = plus.split(" - ");
        terms.push((false, parts.next().unwrap_or("")));
        terms.extend(parts.map(|t| (true, t)));
    }
    for (negated, term) in terms {
        let mut coef = if negated {
            -Rational::one()
        } else {
            Rational::one()
        };
        let mut pairs = Vec::new();
        let mut term = term.trim();
        // `-a1` is shorthand for `-1*a1`
        if let Some(rest) = term.strip_prefix('-') {
            if rest.starts_with(|c: char| c.is_ascii_alphabetic()) {
                coef = -coef;
                term = rest;
            }
        }
        for factor in term.split('*') {
            match parse_factor(factor)? {
                (Some(r), _) => coef *= r,
                (_, Some(pair)) => pairs.push(pair),
                _ => unreachable!(),
            }
        }
        p.add_term(Monomial::from_pairs(pairs), coef);
    }
    Ok(p)
}

impl std::ops::Add for &CoeffPoly {
    type Output = CoeffPoly;
    fn add(self, rhs: &CoeffPoly) -> CoeffPoly {
        CoeffPoly::add(self, rhs)
    }
}

impl std::ops::Sub for &CoeffPoly {
    type Output = CoeffPoly;
    fn sub(self, rhs: &CoeffPoly) -> CoeffPoly {
        CoeffPoly::sub(self, rhs)
    }
}

impl std::ops::Mul for &CoeffPoly {
    type Output = CoeffPoly;
    fn mul(self, rhs: &CoeffPoly) -> CoeffPoly {
        CoeffPoly::mul(self, rhs)
    }
}

impl std::ops::Neg for &CoeffPoly {
    type Output = CoeffPoly;
    fn neg(self) -> CoeffPoly {
        CoeffPoly::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn lam() -> CoeffPoly {
        CoeffPoly::lambda()
    }

    #[test]
    fn difference_of_squares() {
        let p = lam().add(&CoeffPoly::one());
        let q = lam().sub(&CoeffPoly::one());
        let expected = lam().pow(2).sub(&CoeffPoly::one());
        assert_eq!(p.mul(&q), expected);
    }

    #[test]
    fn mixed_product_is_single_monomial() {
        let p = CoeffPoly::a(1).mul(&CoeffPoly::abar(1));
        assert_eq!(p.len(), 1);
        assert_eq!(p, CoeffPoly::abar(1).mul(&CoeffPoly::a(1)));
    }

    #[test]
    fn additive_inverse_cancels() {
        let p = CoeffPoly::a(2).sub(&CoeffPoly::a(1).pow(2));
        let q = CoeffPoly::a(1).pow(2).sub(&CoeffPoly::a(2));
        assert!(p.add(&q).is_zero());
    }

    #[test]
    fn bidegree_examples() {
        let p = CoeffPoly::a(1).pow(2).mul(&CoeffPoly::abar(3));
        assert_eq!(p.bidegree(true).unwrap(), (2, 3));
        let q = CoeffPoly::a(2).sub(&CoeffPoly::a(1).pow(2));
        assert_eq!(q.bidegree(true).unwrap(), (2, 0));
        assert_eq!(CoeffPoly::one().bidegree(true).unwrap(), (0, 0));
        assert_eq!(lam().bidegree(true), Err(PolyError::NotAState));
        assert_eq!(lam().bidegree(false).unwrap(), (0, 0));
    }

    #[test]
    fn monomial_order_is_graded_then_a_block_first() {
        let a1 = Monomial::var(Generator::A(1));
        let a2 = Monomial::var(Generator::A(2));
        let b1 = Monomial::var(Generator::Abar(1));
        let l = Monomial::var(Generator::Lambda);
        let a1sq = Monomial::from_pairs([(Generator::A(1), 2)]);
        assert!(a1 > a2);
        assert!(a2 > b1);
        assert!(b1 > l);
        assert!(a1sq > a1);
        assert!(Monomial::one() < l);
    }

    #[test]
    fn substitute_central_charge() {
        // c(kappa) = 13 - 24/kappa - 3 kappa / 2 written with kappa as lambda
        let k = lam();
        let num = CoeffPoly::int(13)
            .mul(&k)
            .sub(&CoeffPoly::int(24))
            .sub(&k.pow(2).scale(&rat(3, 2)));
        let eval = |kv: Rational| {
            let mut asg = BTreeMap::new();
            asg.insert(Generator::Lambda, kv.clone());
            num.substitute(&asg).as_constant().unwrap() / kv
        };
        assert_eq!(eval(rat(8, 3)), int(0));
        assert_eq!(eval(int(2)), int(-2));
        assert_eq!(eval(int(4)), int(1));
    }

    #[test]
    fn exact_division() {
        let p = lam().sub(&CoeffPoly::one());
        let q = lam().add(&CoeffPoly::cc());
        let prod = p.mul(&q);
        assert_eq!(prod.div_exact(&p), Some(q.clone()));
        assert_eq!(prod.div_exact(&q), Some(p));
        assert_eq!(q.div_exact(&lam()), None);
    }

    #[test]
    fn text_round_trip() {
        let p = CoeffPoly::a(1)
            .pow(2)
            .scale(&rat(-3, 2))
            .add(&CoeffPoly::abar(2).mul(&lam()))
            .add(&CoeffPoly::int(7));
        let s = p.to_string();
        assert_eq!(s, "7/1 + 1/1*abar2*lambda + -3/2*a1^2");
        assert_eq!(CoeffPoly::parse(&s).unwrap(), p);
        assert_eq!(CoeffPoly::parse("0").unwrap(), CoeffPoly::zero());
        assert_eq!(
            CoeffPoly::parse("a1*a1 + -1/1*a1^2").unwrap(),
            CoeffPoly::zero()
        );
        assert!(CoeffPoly::parse("a0").is_err());
        assert!(CoeffPoly::parse("x1").is_err());
        assert!(CoeffPoly::parse("").is_err());
    }

    #[test]
    fn derivative_lowers_exponent() {
        let p = CoeffPoly::a(1).pow(3).mul(&CoeffPoly::abar(2));
        let d = p.derivative(Generator::A(1));
        assert_eq!(
            d,
            CoeffPoly::a(1)
                .pow(2)
                .mul(&CoeffPoly::abar(2))
                .scale(&int(3))
        );
        assert!(p.derivative(Generator::A(2)).is_zero());
    }
}
