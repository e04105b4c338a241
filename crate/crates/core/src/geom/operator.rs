//! First-order differential operators on `Q[lambda, c][(a_m, abar_m)]` with a
//! grading term.
//!
//! An operator of mode `n` acts on a state `(s, T)` carrying the level label
//! `T` as
//!
//! ```text
//! s  |->  alpha (2 lambda + T) s + beta s + sum_m pa_m d s/d a_m + pb_m d s/d abar_m
//! ```
//!
//! and relabels the result with level `T - n`. The label is part of the state
//! because the states built by lowering operators are not homogeneous in the
//! monomial grading once both families are involved.

use super::GeomError;
use crate::poly::{CoeffPoly, Generator};
use crate::rational::{int, Rational};

/// Which family an operator belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    Holomorphic,
    Anti,
}

impl Family {
    pub fn flip(self) -> Family {
        match self {
            Family::Holomorphic => Family::Anti,
            Family::Anti => Family::Holomorphic,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffOperator {
    pub mode: i32,
    pub family: Family,
    /// Coefficient of the grading scalar `2 lambda + T`.
    pub alpha: CoeffPoly,
    /// Multiplicative part.
    pub beta: CoeffPoly,
    /// `pa[m - 1]` multiplies `d/d a_m`.
    pub pa: Vec<CoeffPoly>,
    /// `pb[m - 1]` multiplies `d/d abar_m`.
    pub pb: Vec<CoeffPoly>,
}

/// A polynomial state together with its level label.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct State {
    pub poly: CoeffPoly,
    pub level: i64,
}

impl State {
    pub fn one() -> Self {
        State {
            poly: CoeffPoly::one(),
            level: 0,
        }
    }

    pub fn new(poly: CoeffPoly, level: i64) -> Self {
        State { poly, level }
    }

    /// A homogeneous polynomial labelled by its weighted degree.
    pub fn homogeneous(poly: CoeffPoly) -> Self {
        let level = poly
            .terms()
            .map(|(m, _)| (m.left_weight() + m.right_weight()) as i64)
            .max()
            .unwrap_or(0);
        State { poly, level }
    }
}

impl DiffOperator {
    pub fn zero(mode: i32, family: Family, max_index: u32) -> Self {
        DiffOperator {
            mode,
            family,
            alpha: CoeffPoly::zero(),
            beta: CoeffPoly::zero(),
            pa: vec![CoeffPoly::zero(); max_index as usize],
            pb: vec![CoeffPoly::zero(); max_index as usize],
        }
    }

    /// Largest `m` for which both `d/d a_m` and `d/d abar_m` coefficients are known.
    pub fn max_index(&self) -> u32 {
        self.pa.len().min(self.pb.len()) as u32
    }

    pub fn coeff_a(&self, m: u32) -> &CoeffPoly {
        &self.pa[m as usize - 1]
    }

    pub fn coeff_abar(&self, m: u32) -> &CoeffPoly {
        &self.pb[m as usize - 1]
    }

    /// Restricts the coefficient lists to indices `<= max_index`.
    pub fn truncated(&self, max_index: u32) -> DiffOperator {
        let k = (max_index as usize).min(self.max_index() as usize);
        DiffOperator {
            mode: self.mode,
            family: self.family,
            alpha: self.alpha.clone(),
            beta: self.beta.clone(),
            pa: self.pa[..k].to_vec(),
            pb: self.pb[..k].to_vec(),
        }
    }

    /// The other family: exchange `a` and `abar` everywhere.
    pub fn mirror(&self) -> DiffOperator {
        DiffOperator {
            mode: self.mode,
            family: self.family.flip(),
            alpha: self.alpha.mirror(),
            beta: self.beta.mirror(),
            pa: self.pb.iter().map(|p| p.mirror()).collect(),
            pb: self.pa.iter().map(|p| p.mirror()).collect(),
        }
    }

    fn check_index(&self, p: &CoeffPoly) -> Result<(), GeomError> {
        let needed = p.max_index();
        if needed > self.max_index() {
            return Err(GeomError::InsufficientIndex {
                mode: self.mode,
                needed,
                available: self.max_index(),
            });
        }
        Ok(())
    }

    /// The vector-field part applied to a polynomial.
    pub fn derive(&self, p: &CoeffPoly) -> Result<CoeffPoly, GeomError> {
        self.check_index(p)?;
        let mut out = CoeffPoly::zero();
        for (mono, c) in p.terms() {
            for &(g, e) in mono.factors() {
                let coeff = match g {
                    Generator::A(m) => &self.pa[m as usize - 1],
                    Generator::Abar(m) => &self.pb[m as usize - 1],
                    _ => continue,
                };
                if coeff.is_zero() {
                    continue;
                }
                let (_, rest) = mono.lower(g).expect("factor present");
                out.add_scaled(coeff, &(c * int(e as i64)), &rest);
            }
        }
        Ok(out)
    }

    pub fn apply(&self, s: &State) -> Result<State, GeomError> {
        let mut out = self.derive(&s.poly)?;
        if !self.alpha.is_zero() {
            let grading = CoeffPoly::lambda()
                .scale(&int(2))
                .add(&CoeffPoly::int(s.level));
            out.add_assign_ref(&self.alpha.mul(&grading).mul(&s.poly));
        }
        if !self.beta.is_zero() {
            out.add_assign_ref(&self.beta.mul(&s.poly));
        }
        Ok(State {
            poly: out,
            level: s.level - self.mode as i64,
        })
    }

    /// Commutator `[self, other]` as an operator of mode `n_self + n_other`.
    ///
    /// The result knows the coefficients up to the largest index for which
    /// every derivative taken is covered by both inputs.
    pub fn commutator(&self, other: &DiffOperator) -> Result<DiffOperator, GeomError> {
        let (a, b) = (self, other);
        let na = int(a.mode as i64);
        let nb = int(b.mode as i64);
        let alpha = a
            .alpha
            .mul(&b.alpha)
            .scale(&(&na - &nb))
            .add(&a.derive(&b.alpha)?)
            .sub(&b.derive(&a.alpha)?);
        let beta = b
            .alpha
            .mul(&a.beta)
            .scale(&na)
            .sub(&a.alpha.mul(&b.beta).scale(&nb))
            .add(&a.derive(&b.beta)?)
            .sub(&b.derive(&a.beta)?);
        let limit = a.max_index().min(b.max_index());
        let mut pa = Vec::new();
        let mut pb = Vec::new();
        for m in 1..=limit {
            let (ca, cb) = (a.coeff_a(m), b.coeff_a(m));
            let (da, db) = (a.coeff_abar(m), b.coeff_abar(m));
            if ca.max_index().max(da.max_index()) > b.max_index()
                || cb.max_index().max(db.max_index()) > a.max_index()
            {
                break;
            }
            let combine = |pa_m: &CoeffPoly, pb_m: &CoeffPoly| -> Result<CoeffPoly, GeomError> {
                Ok(a.derive(pb_m)?
                    .sub(&b.derive(pa_m)?)
                    .add(&pa_m.mul(&b.alpha).scale(&na))
                    .sub(&pb_m.mul(&a.alpha).scale(&nb)))
            };
            pa.push(combine(ca, cb)?);
            pb.push(combine(da, db)?);
        }
        Ok(DiffOperator {
            mode: a.mode + b.mode,
            family: a.family,
            alpha,
            beta,
            pa,
            pb,
        })
    }

    pub fn scale(&self, r: &Rational) -> DiffOperator {
        DiffOperator {
            mode: self.mode,
            family: self.family,
            alpha: self.alpha.scale(r),
            beta: self.beta.scale(r),
            pa: self.pa.iter().map(|p| p.scale(r)).collect(),
            pb: self.pb.iter().map(|p| p.scale(r)).collect(),
        }
    }

    /// Adds a constant to the multiplicative part.
    pub fn plus_constant(&self, c: &CoeffPoly) -> DiffOperator {
        let mut r = self.clone();
        r.beta = r.beta.add(c);
        r
    }

    /// First coefficient where the two operators differ, comparing indices
    /// up to the smaller of the two ranges.
    pub fn first_difference(&self, other: &DiffOperator) -> Option<String> {
        if self.alpha != other.alpha {
            return Some(format!(
                "grading coefficient: {} vs {}",
                self.alpha, other.alpha
            ));
        }
        if self.beta != other.beta {
            return Some(format!(
                "multiplicative part: {} vs {}",
                self.beta, other.beta
            ));
        }
        let k = self.max_index().min(other.max_index());
        for m in 1..=k {
            if self.coeff_a(m) != other.coeff_a(m) {
                return Some(format!(
                    "d/da{m}: {} vs {}",
                    self.coeff_a(m),
                    other.coeff_a(m)
                ));
            }
            if self.coeff_abar(m) != other.coeff_abar(m) {
                return Some(format!(
                    "d/dabar{m}: {} vs {}",
                    self.coeff_abar(m),
                    other.coeff_abar(m)
                ));
            }
        }
        None
    }

    pub fn is_zero_up_to(&self, k: u32) -> bool {
        self.alpha.is_zero()
            && self.beta.is_zero()
            && (1..=k.min(self.max_index()))
                .all(|m| self.coeff_a(m).is_zero() && self.coeff_abar(m).is_zero())
    }
}
