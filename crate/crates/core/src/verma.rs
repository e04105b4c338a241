//! Verma modules of the Virasoro algebra: normal ordering, Shapovalov Gram
//! matrices, Kac determinants and singular vectors.
//!
//! Basis vectors are `e_k = L_{-k} e = ... L_{-2}^{k_2} L_{-1}^{k_1} e`, so the
//! largest mode sits leftmost. A [`Verma`] carries a memo table keyed by
//! `(mode, partition)`; it is meant to be owned by one worker at a time.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{self, RatMatrix};
use crate::partition::{partitions_of, Partition};
use crate::poly::{CoeffPoly, Generator, PolyError};
use crate::rational::{int, rat, Rational};
use crate::series::LaurentSeries;

#[derive(Debug, Error)]
pub enum VermaError {
    #[error("level {level} exceeds the configured maximum {max}")]
    LevelTooHigh { level: u32, max: u32 },
    #[error("invalid Gram matrix JSON: {0}")]
    BadJson(String),
}

/// Central charge `13 - 24/kappa - 3 kappa/2`.
pub fn central_charge(kappa: &Rational) -> Rational {
    int(13) - int(24) / kappa - rat(3, 2) * kappa
}

/// Kac table entry `(r^2-1) kappa/16 + (s^2-1)/kappa + (1-rs)/2`.
pub fn kac_lambda(r: u32, s: u32, kappa: &Rational) -> Rational {
    let (r, s) = (r as i64, s as i64);
    int(r * r - 1) * kappa / int(16) + int(s * s - 1) / kappa + rat(1 - r * s, 2)
}

/// `sum_k c_k e_k`, possibly mixing levels.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct VermaElement {
    terms: BTreeMap<Partition, CoeffPoly>,
}

impl VermaElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(k: Partition) -> Self {
        Self::term(k, CoeffPoly::one())
    }

    pub fn term(k: Partition, c: CoeffPoly) -> Self {
        let mut e = Self::zero();
        e.add_term(k, &c);
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Partition, &CoeffPoly)> {
        self.terms.iter()
    }

    pub fn coeff(&self, k: &Partition) -> CoeffPoly {
        self.terms.get(k).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, k: Partition, c: &CoeffPoly) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(k) {
            Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            Entry::Occupied(mut o) => {
                o.get_mut().add_assign_ref(c);
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &VermaElement, c: &CoeffPoly) {
        for (k, v) in &other.terms {
            self.add_term(k.clone(), &v.mul(c));
        }
    }

    pub fn add(&self, other: &VermaElement) -> VermaElement {
        let mut r = self.clone();
        r.add_scaled(other, &CoeffPoly::one());
        r
    }

    pub fn scale(&self, c: &CoeffPoly) -> VermaElement {
        let mut r = VermaElement::zero();
        r.add_scaled(self, c);
        r
    }

    pub fn substitute(&self, asg: &BTreeMap<Generator, Rational>) -> VermaElement {
        let mut r = VermaElement::zero();
        for (k, v) in &self.terms {
            r.add_term(k.clone(), &v.substitute(asg));
        }
        r
    }
}

/// Highest-weight module with weight and central charge in the coefficient ring.
pub struct Verma {
    weight: CoeffPoly,
    cc: CoeffPoly,
    max_level: u32,
    memo: HashMap<(i32, Partition), VermaElement>,
}

impl Default for Verma {
    fn default() -> Self {
        Self::symbolic()
    }
}

pub const DEFAULT_MAX_LEVEL: u32 = 6;

impl Verma {
    /// Weight `lambda` and central charge `c` kept as formal generators.
    pub fn symbolic() -> Self {
        Self::with_parameters(CoeffPoly::lambda(), CoeffPoly::cc())
    }

    pub fn specialized(weight: Rational, cc: Rational) -> Self {
        Self::with_parameters(CoeffPoly::constant(weight), CoeffPoly::constant(cc))
    }

    pub fn with_parameters(weight: CoeffPoly, cc: CoeffPoly) -> Self {
        Verma {
            weight,
            cc,
            max_level: DEFAULT_MAX_LEVEL,
            memo: HashMap::new(),
        }
    }

    pub fn with_max_level(mut self, max_level: u32) -> Self {
        self.max_level = max_level;
        self
    }

    pub fn max_level(&self) -> u32 {
        self.max_level
    }

    /// `L_n e_k` in the PBW basis.
    pub fn act(&mut self, n: i32, k: &Partition) -> VermaElement {
        if let Some(v) = self.memo.get(&(n, k.clone())) {
            return v.clone();
        }
        let v = self.act_uncached(n, k);
        self.memo.insert((n, k.clone()), v.clone());
        v
    }

    fn act_uncached(&mut self, n: i32, k: &Partition) -> VermaElement {
        let level = k.weight() as i64;
        if n == 0 {
            let c = self.weight.add(&CoeffPoly::int(level));
            return VermaElement::term(k.clone(), c);
        }
        if n > 0 && n as i64 > level {
            return VermaElement::zero();
        }
        let j = match k.largest_part() {
            None => {
                // n < 0 here
                return VermaElement::basis(Partition::single((-n) as u32));
            }
            Some(j) => j as i32,
        };
        if n < 0 && -n >= j {
            return VermaElement::basis(k.with_part((-n) as u32));
        }
        // L_n L_{-j} X = L_{-j} L_n X + (n + j) L_{n-j} X + (c/12)(n^3 - n) delta_{n,j} X
        let rest = k.without_part(j as u32).expect("largest part present");
        let mut out = VermaElement::zero();
        let inner = self.act(n, &rest);
        let lifted = self.apply(-j, &inner);
        out.add_scaled(&lifted, &CoeffPoly::one());
        let shifted = self.act(n - j, &rest);
        out.add_scaled(&shifted, &CoeffPoly::int((n + j) as i64));
        if n == j {
            let n = n as i64;
            let central = self.cc.scale(&rat(n * n * n - n, 12));
            out.add_term(rest, &central);
        }
        out
    }

    pub fn apply(&mut self, n: i32, v: &VermaElement) -> VermaElement {
        let mut out = VermaElement::zero();
        for (k, c) in v.terms.clone() {
            let img = self.act(n, &k);
            out.add_scaled(&img, &c);
        }
        out
    }

    /// Evaluates the operator word `L_{n_1} L_{n_2} ... L_{n_r}` on `e`.
    pub fn normal_order(&mut self, word: &[i32]) -> VermaElement {
        let mut v = VermaElement::basis(Partition::empty());
        for &n in word.iter().rev() {
            v = self.apply(n, &v);
        }
        v
    }

    /// `L_{-k} e` for a word of lowering operators, i.e. the basis vector itself.
    pub fn lowering(&mut self, k: &Partition) -> VermaElement {
        let mut v = VermaElement::basis(Partition::empty());
        for part in k.parts_descending().into_iter().rev() {
            v = self.apply(-(part as i32), &v);
        }
        v
    }

    /// `L_k v = L_1^{k_1} L_2^{k_2} ... v`: the largest modes act first.
    pub fn raising(&mut self, k: &Partition, v: &VermaElement) -> VermaElement {
        let mut v = v.clone();
        for part in k.parts_descending() {
            v = self.apply(part as i32, &v);
        }
        v
    }

    pub fn gram_entry(&mut self, k: &Partition, kp: &Partition) -> CoeffPoly {
        let v = self.raising(kp, &VermaElement::basis(k.clone()));
        v.coeff(&Partition::empty())
    }

    pub fn gram(&mut self, level: u32) -> GramMatrix {
        let basis = partitions_of(level);
        let entries = basis
            .iter()
            .map(|k| basis.iter().map(|kp| self.gram_entry(k, kp)).collect())
            .collect();
        GramMatrix {
            level,
            basis,
            entries,
        }
    }

    /// Determinant of the level-`n` Gram matrix by fraction-free elimination.
    pub fn kac_det(&mut self, level: u32) -> Result<CoeffPoly, VermaError> {
        if level > self.max_level {
            return Err(VermaError::LevelTooHigh {
                level,
                max: self.max_level,
            });
        }
        Ok(self.gram(level).determinant())
    }
}

/// `B(k, k')` on the level-`N` partitions, in the order of [`partitions_of`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GramMatrix {
    pub level: u32,
    pub basis: Vec<Partition>,
    pub entries: Vec<Vec<CoeffPoly>>,
}

#[derive(Serialize, Deserialize)]
struct GramJson {
    level: u32,
    basis: Vec<Vec<u32>>,
    entries: Vec<Vec<String>>,
}

/// Largest level accepted when importing Gram matrices (p(24) = 1575 rows).
const MAX_IMPORT_LEVEL: u32 = 24;

impl GramMatrix {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..i).all(|j| self.entries[i][j] == self.entries[j][i]))
    }

    pub fn determinant(&self) -> CoeffPoly {
        linalg::bareiss_det(&self.entries)
    }

    pub fn specialize(&self, weight: &Rational, cc: &Rational) -> RatMatrix {
        let asg = parameter_assignment(weight, cc);
        self.entries
            .iter()
            .map(|row| {
                row.iter()
                    .map(|e| {
                        e.substitute(&asg)
                            .as_constant()
                            .expect("Gram entries depend only on lambda and c")
                    })
                    .collect()
            })
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let j = GramJson {
            level: self.level,
            basis: self
                .basis
                .iter()
                .map(|p| p.multiplicities().to_vec())
                .collect(),
            entries: self
                .entries
                .iter()
                .map(|r| r.iter().map(|e| e.to_string()).collect())
                .collect(),
        };
        serde_json::to_value(j).expect("serializable")
    }

    /// Parses and validates the JSON export.
    pub fn from_json(text: &str) -> Result<GramMatrix, VermaError> {
        let j: GramJson =
            serde_json::from_str(text).map_err(|e| VermaError::BadJson(e.to_string()))?;
        if j.level > MAX_IMPORT_LEVEL {
            return Err(VermaError::BadJson(format!("level {} too large", j.level)));
        }
        let expected = partitions_of(j.level);
        let basis: Vec<Partition> = j
            .basis
            .into_iter()
            .map(|m| Partition::try_from(m).map_err(VermaError::BadJson))
            .collect::<Result<_, _>>()?;
        if basis != expected {
            return Err(VermaError::BadJson(
                "basis is not the ordered partition list of the level".into(),
            ));
        }
        let n = basis.len();
        if j.entries.len() != n || j.entries.iter().any(|r| r.len() != n) {
            return Err(VermaError::BadJson(
                "entries are not a square matrix of basis size".into(),
            ));
        }
        let entries = j
            .entries
            .iter()
            .map(|r| {
                r.iter()
                    .map(|s| {
                        let p = CoeffPoly::parse(s)
                            .map_err(|e: PolyError| VermaError::BadJson(e.to_string()))?;
                        if p.max_index() > 0 {
                            return Err(VermaError::BadJson(
                                "entries may only involve lambda and c".into(),
                            ));
                        }
                        Ok(p)
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(GramMatrix {
            level: j.level,
            basis,
            entries,
        })
    }
}

pub fn parameter_assignment(weight: &Rational, cc: &Rational) -> BTreeMap<Generator, Rational> {
    let mut asg = BTreeMap::new();
    asg.insert(Generator::Lambda, weight.clone());
    asg.insert(Generator::CC, cc.clone());
    asg
}

/// A root of the specialized Kac determinant with the Kac labels producing it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KacRoot {
    pub value: Rational,
    pub multiplicity: u32,
    pub labels: Vec<(u32, u32)>,
}

#[derive(Clone, Debug)]
pub struct KacRoots {
    pub determinant: CoeffPoly,
    pub roots: Vec<KacRoot>,
    /// Degree in lambda of what remains after dividing out all found roots.
    pub residual_degree: u32,
    pub residual: CoeffPoly,
}

/// Roots in `lambda` of the level-`N` determinant at `c = c(kappa)`, found by
/// testing each Kac weight with `rs <= N` and dividing it out exactly.
pub fn kac_roots(verma: &mut Verma, level: u32, kappa: &Rational) -> Result<KacRoots, VermaError> {
    let det = verma.kac_det(level)?;
    let mut asg = BTreeMap::new();
    asg.insert(Generator::CC, central_charge(kappa));
    let det = det.substitute(&asg);
    let mut candidates: Vec<(Rational, Vec<(u32, u32)>)> = Vec::new();
    for r in 1..=level.max(1) {
        for s in 1..=level.max(1) {
            if r * s > level.max(1) {
                continue;
            }
            let v = kac_lambda(r, s, kappa);
            match candidates.iter_mut().find(|(x, _)| *x == v) {
                Some((_, labels)) => labels.push((r, s)),
                None => candidates.push((v, vec![(r, s)])),
            }
        }
    }
    candidates.sort_by(|a, b| a.0.cmp(&b.0));
    let mut rest = det.clone();
    let mut roots = Vec::new();
    for (v, labels) in candidates {
        let factor = CoeffPoly::lambda().sub(&CoeffPoly::constant(v.clone()));
        let mut mult = 0;
        if rest.is_zero() {
            break;
        }
        while let Some(q) = rest.div_exact(&factor) {
            rest = q;
            mult += 1;
        }
        if mult > 0 {
            roots.push(KacRoot {
                value: v,
                multiplicity: mult,
                labels,
            });
        }
    }
    Ok(KacRoots {
        determinant: det,
        residual_degree: rest.degree_in(Generator::Lambda),
        residual: rest,
        roots,
    })
}

/// Kernel of the specialized level-`N` Gram matrix, each vector scaled so that
/// its first nonzero coordinate is 1.
pub fn singular_vectors(
    verma: &mut Verma,
    level: u32,
    weight: &Rational,
    cc: &Rational,
) -> Vec<VermaElement> {
    let g = verma.gram(level);
    let m = g.specialize(weight, cc);
    linalg::kernel(&m, g.dim())
        .into_iter()
        .map(|v| {
            let lead = v
                .iter()
                .find(|x| !x.is_zero())
                .cloned()
                .unwrap_or_else(Rational::one);
            let mut e = VermaElement::zero();
            for (k, x) in g.basis.iter().zip(v) {
                e.add_term(k.clone(), &CoeffPoly::constant(x / &lead));
            }
            e
        })
        .collect()
}

/// Exact inverse of the specialized Gram matrix, `None` on the Kac locus.
pub fn gram_inverse(g: &GramMatrix, weight: &Rational, cc: &Rational) -> Option<RatMatrix> {
    linalg::inverse(&g.specialize(weight, cc))
}

/// `res(v_n''' v_m)` with `v_n = -z^{n+1}`.
pub fn cocycle(n: i32, m: i32) -> Rational {
    let (n, m) = (n as i64, m as i64);
    // both factors are exact monomials; carry enough order to reach z^-1
    let extra = 2 * (n.abs() + m.abs()) + 8;
    let vn = LaurentSeries::monomial(CoeffPoly::int(-1), n + 1, n + 1 + extra);
    let vm = LaurentSeries::monomial(CoeffPoly::int(-1), m + 1, m + 1 + extra);
    let d3 = vn.derivative().derivative().derivative();
    let r = d3.mul(&vm).residue().expect("residue within precision");
    r.as_constant().expect("constant residue")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lam() -> CoeffPoly {
        CoeffPoly::lambda()
    }

    #[test]
    fn small_words() {
        let mut v = Verma::symbolic();
        let e = Partition::empty();
        assert_eq!(
            v.normal_order(&[1, -1]),
            VermaElement::term(e.clone(), lam().scale(&int(2)))
        );
        let expect = lam().scale(&int(4)).add(&CoeffPoly::cc().scale(&rat(1, 2)));
        assert_eq!(
            v.normal_order(&[2, -2]),
            VermaElement::term(e.clone(), expect)
        );
        assert_eq!(v.normal_order(&[0]), VermaElement::term(e.clone(), lam()));
        assert!(v.normal_order(&[3]).is_zero());
    }

    #[test]
    fn lowering_words_reorder() {
        let mut v = Verma::symbolic();
        // L_{-1} L_{-2} e = L_{-2} L_{-1} e + L_{-3} e
        let got = v.normal_order(&[-1, -2]);
        let mut expect = VermaElement::basis(Partition::from_parts(&[2, 1]));
        expect.add_term(Partition::single(3), &CoeffPoly::one());
        assert_eq!(got, expect);
    }

    #[test]
    fn gram_levels_zero_to_two() {
        let mut v = Verma::symbolic();
        assert_eq!(v.gram(0).entries, vec![vec![CoeffPoly::one()]]);
        assert_eq!(v.gram(1).entries, vec![vec![lam().scale(&int(2))]]);
        let g = v.gram(2);
        assert_eq!(
            g.basis,
            vec![Partition::from_parts(&[1, 1]), Partition::single(2)]
        );
        let b11 = lam()
            .scale(&int(4))
            .mul(&lam().scale(&int(2)).add(&CoeffPoly::one()));
        let b12 = lam().scale(&int(6));
        let b22 = lam().scale(&int(4)).add(&CoeffPoly::cc().scale(&rat(1, 2)));
        assert_eq!(g.entries, vec![vec![b11, b12.clone()], vec![b12, b22]]);
    }

    #[test]
    fn gram_is_symmetric() {
        let mut v = Verma::symbolic();
        for n in 0..=5 {
            assert!(v.gram(n).is_symmetric(), "level {n}");
        }
    }

    #[test]
    fn kac_values() {
        let k = int(3);
        assert_eq!(kac_lambda(1, 1, &k), int(0));
        assert_eq!(kac_lambda(1, 2, &k), rat(1, 2));
        assert_eq!(kac_lambda(2, 1, &k), rat(1, 16));
        assert_eq!(kac_lambda(1, 3, &k), rat(5, 3));
        for kappa in [int(2), rat(8, 3), int(3), int(4)] {
            assert_eq!(
                kac_lambda(1, 2, &kappa),
                (int(6) - &kappa) / (int(2) * &kappa)
            );
            assert_eq!(
                kac_lambda(2, 1, &kappa),
                (int(3) * &kappa - int(8)) / int(16)
            );
        }
        assert_eq!(central_charge(&rat(8, 3)), int(0));
        assert_eq!(central_charge(&int(2)), int(-2));
        assert_eq!(central_charge(&int(3)), rat(1, 2));
        assert_eq!(central_charge(&int(4)), int(1));
    }

    #[test]
    fn low_determinants() {
        let mut v = Verma::symbolic();
        assert_eq!(v.kac_det(0).unwrap(), CoeffPoly::one());
        assert_eq!(v.kac_det(1).unwrap(), lam().scale(&int(2)));
        assert!(matches!(v.kac_det(7), Err(VermaError::LevelTooHigh { .. })));
    }

    #[test]
    fn level_two_roots_at_kappa_three() {
        let mut v = Verma::symbolic();
        let r = kac_roots(&mut v, 2, &int(3)).unwrap();
        let vals: Vec<Rational> = r.roots.iter().map(|x| x.value.clone()).collect();
        assert_eq!(vals, vec![int(0), rat(1, 16), rat(1, 2)]);
        assert_eq!(r.residual_degree, 0);
    }

    #[test]
    fn singular_vector_examples() {
        let mut v = Verma::symbolic();
        let sv = singular_vectors(&mut v, 2, &rat(1, 2), &rat(1, 2));
        assert_eq!(sv.len(), 1);
        assert_eq!(
            sv[0].coeff(&Partition::from_parts(&[1, 1])),
            CoeffPoly::one()
        );
        assert_eq!(
            sv[0].coeff(&Partition::single(2)),
            CoeffPoly::constant(rat(-4, 3))
        );
        let sv1 = singular_vectors(&mut v, 1, &int(0), &rat(1, 2));
        assert_eq!(sv1, vec![VermaElement::basis(Partition::single(1))]);
        assert!(singular_vectors(&mut v, 2, &rat(1, 3), &rat(1, 2)).is_empty());
    }

    #[test]
    fn kernel_vectors_are_annihilated() {
        let mut spec = Verma::specialized(rat(1, 2), rat(1, 2));
        let mut sym = Verma::symbolic();
        for s in singular_vectors(&mut sym, 2, &rat(1, 2), &rat(1, 2)) {
            let mut vec = VermaElement::zero();
            for (k, c) in s.terms() {
                vec.add_scaled(&spec.lowering(k), c);
            }
            assert!(spec.apply(1, &vec).is_zero());
            assert!(spec.apply(2, &vec).is_zero());
        }
    }

    #[test]
    fn cocycle_values() {
        assert_eq!(cocycle(2, -2), int(6));
        assert_eq!(cocycle(1, -1), int(0));
        assert_eq!(cocycle(3, 2), int(0));
        for n in -8..=8 {
            for m in -8..=8 {
                let expect = if n + m == 0 {
                    int((n * n * n - n) as i64)
                } else {
                    int(0)
                };
                assert_eq!(cocycle(n, m), expect);
            }
        }
    }

    #[test]
    fn gram_json_round_trip() {
        let mut v = Verma::symbolic();
        let g = v.gram(3);
        let text = g.to_json().to_string();
        assert_eq!(GramMatrix::from_json(&text).unwrap(), g);
        assert!(
            GramMatrix::from_json("{\"level\":2,\"basis\":[[2]],\"entries\":[[\"1\"]]}").is_err()
        );
        assert!(GramMatrix::from_json("not json").is_err());
    }

    #[test]
    fn inverse_off_kac_and_singular_on_kac() {
        let mut v = Verma::symbolic();
        let g = v.gram(2);
        let c = central_charge(&int(3));
        let inv = gram_inverse(&g, &rat(1, 3), &c).unwrap();
        assert_eq!(
            linalg::mat_mul(&g.specialize(&rat(1, 3), &c), &inv),
            linalg::identity(2)
        );
        assert!(gram_inverse(&g, &rat(1, 2), &c).is_none());
    }

    #[test]
    fn zero_is_neutral() {
        let mut e = VermaElement::basis(Partition::single(1));
        e.add_term(Partition::single(1), &CoeffPoly::int(-1));
        assert!(e.is_zero());
    }
}
