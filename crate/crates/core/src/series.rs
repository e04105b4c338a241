//! Truncated Laurent series with polynomial coefficients.
//!
//! A series stores the coefficients of `z^val, ..., z^(prec-1)` and stands
//! for `sum c_k z^k + O(z^prec)`. Every operation computes the precision it
//! can guarantee, and coefficient queries beyond it fail instead of
//! returning silently truncated data.

use num_traits::{One, Zero};
use thiserror::Error;

use crate::poly::CoeffPoly;
use crate::rational::Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("series order exhausted: coefficient of z^{requested} requested, reliable below z^{available}")]
    OrderExhausted { requested: i64, available: i64 },
    #[error("series is not invertible: leading coefficient is not a nonzero rational constant")]
    NotInvertible,
    #[error("reversion needs f = z + O(z^2): {0}")]
    BadReversion(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentSeries {
    val: i64,
    prec: i64,
    coeffs: Vec<CoeffPoly>,
}

impl LaurentSeries {
    /// `O(z^prec)`.
    pub fn zero(prec: i64) -> Self {
        LaurentSeries {
            val: prec,
            prec,
            coeffs: Vec::new(),
        }
    }

    /// Series whose coefficient of `z^(val + k)` is `coeffs[k]`, known up to `O(z^prec)`.
    ///
    /// Coefficients beyond `prec` are dropped; missing ones below it are zero.
    pub fn new(val: i64, coeffs: Vec<CoeffPoly>, prec: i64) -> Self {
        let mut coeffs = coeffs;
        let want = (prec - val).max(0) as usize;
        coeffs.resize(want, CoeffPoly::zero());
        let mut s = LaurentSeries {
            val: val.min(prec),
            prec,
            coeffs,
        };
        s.normalize();
        s
    }

    /// `c z^k + O(z^prec)`.
    pub fn monomial(c: CoeffPoly, k: i64, prec: i64) -> Self {
        if k >= prec {
            return Self::zero(prec);
        }
        Self::new(k, vec![c], prec)
    }

    /// `z + O(z^prec)`.
    pub fn z(prec: i64) -> Self {
        Self::monomial(CoeffPoly::one(), 1, prec)
    }

    fn normalize(&mut self) {
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.val += lead as i64;
        }
    }

    /// Valuation; equals `prec` for a series that is zero to its precision.
    pub fn valuation(&self) -> i64 {
        self.val
    }

    pub fn precision(&self) -> i64 {
        self.prec
    }

    pub fn is_zero_to_precision(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `z^k`.
    pub fn coeff(&self, k: i64) -> Result<CoeffPoly, SeriesError> {
        if k >= self.prec {
            return Err(SeriesError::OrderExhausted {
                requested: k,
                available: self.prec,
            });
        }
        if k < self.val {
            return Ok(CoeffPoly::zero());
        }
        Ok(self.coeffs[(k - self.val) as usize].clone())
    }

    fn c(&self, k: i64) -> Option<&CoeffPoly> {
        if k < self.val || k >= self.prec {
            None
        } else {
            Some(&self.coeffs[(k - self.val) as usize])
        }
    }

    /// Drops coefficients from `z^prec` on; fails if `prec` exceeds the precision.
    pub fn truncate(&self, prec: i64) -> Result<Self, SeriesError> {
        if prec > self.prec {
            return Err(SeriesError::OrderExhausted {
                requested: prec - 1,
                available: self.prec,
            });
        }
        let keep = (prec - self.val).max(0) as usize;
        Ok(LaurentSeries::new(
            self.val,
            self.coeffs.iter().take(keep).cloned().collect(),
            prec,
        ))
    }

    pub fn add(&self, other: &Self) -> Self {
        let prec = self.prec.min(other.prec);
        let val = self.val.min(other.val).min(prec);
        let coeffs = (val..prec)
            .map(|k| match (self.c(k), other.c(k)) {
                (Some(a), Some(b)) => a.add(b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => CoeffPoly::zero(),
            })
            .collect();
        LaurentSeries::new(val, coeffs, prec)
    }

    pub fn neg(&self) -> Self {
        LaurentSeries {
            val: self.val,
            prec: self.prec,
            coeffs: self.coeffs.iter().map(|c| c.neg()).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &CoeffPoly) -> Self {
        LaurentSeries::new(
            self.val,
            self.coeffs.iter().map(|x| x.mul(c)).collect(),
            self.prec,
        )
    }

    pub fn scale_rational(&self, c: &Rational) -> Self {
        LaurentSeries::new(
            self.val,
            self.coeffs.iter().map(|x| x.scale(c)).collect(),
            self.prec,
        )
    }

    /// Multiplication by `z^k`.
    pub fn shift(&self, k: i64) -> Self {
        LaurentSeries {
            val: self.val + k,
            prec: self.prec + k,
            coeffs: self.coeffs.clone(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let val = self.val + other.val;
        let prec = (self.prec + other.val).min(other.prec + self.val);
        if prec <= val {
            return LaurentSeries::zero(prec);
        }
        let mut coeffs = vec![CoeffPoly::zero(); (prec - val) as usize];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                let k = i + j;
                if k >= coeffs.len() {
                    break;
                }
                if b.is_zero() {
                    continue;
                }
                let prod = a.mul(b);
                coeffs[k].add_assign_ref(&prod);
            }
        }
        LaurentSeries::new(val, coeffs, prec)
    }

    /// Multiplicative inverse; the leading coefficient must be a nonzero rational.
    pub fn inverse(&self) -> Result<Self, SeriesError> {
        let lead = self
            .coeffs
            .first()
            .and_then(|c| c.as_constant())
            .filter(|c| !c.is_zero())
            .ok_or(SeriesError::NotInvertible)?;
        let inv_lead = Rational::one() / lead;
        let n = self.coeffs.len();
        // (c0 + c1 z + ...)^{-1} = d0 + d1 z + ..., relative precision n
        let mut d: Vec<CoeffPoly> = Vec::with_capacity(n);
        d.push(CoeffPoly::constant(inv_lead.clone()));
        for k in 1..n {
            let mut acc = CoeffPoly::zero();
            for j in 1..=k {
                if self.coeffs[j].is_zero() || d[k - j].is_zero() {
                    continue;
                }
                acc.add_assign_ref(&self.coeffs[j].mul(&d[k - j]));
            }
            d.push(acc.scale(&-inv_lead.clone()));
        }
        Ok(LaurentSeries::new(-self.val, d, -self.val + n as i64))
    }

    pub fn div(&self, other: &Self) -> Result<Self, SeriesError> {
        Ok(self.mul(&other.inverse()?))
    }

    /// Integer power; negative exponents go through [`LaurentSeries::inverse`].
    pub fn powi(&self, e: i64) -> Result<Self, SeriesError> {
        if e == 0 {
            return Ok(LaurentSeries::monomial(
                CoeffPoly::one(),
                0,
                self.prec - self.val,
            ));
        }
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut k = e.unsigned_abs();
        let mut result: Option<LaurentSeries> = None;
        let mut b = base;
        while k > 0 {
            if k & 1 == 1 {
                result = Some(match result {
                    None => b.clone(),
                    Some(r) => r.mul(&b),
                });
            }
            k >>= 1;
            if k > 0 {
                b = b.mul(&b);
            }
        }
        let result = result.expect("nonzero exponent");
        Ok(result)
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c.scale(&crate::rational::int(self.val + i as i64)))
            .collect();
        LaurentSeries::new(self.val - 1, coeffs, self.prec - 1)
    }

    /// `self(g(z))` for `g = O(z)`.
    pub fn compose(&self, g: &Self) -> Result<Self, SeriesError> {
        if g.val < 1 {
            return Err(SeriesError::NotInvertible);
        }
        // truncation of self contributes O(g^prec) = O(z^(prec * val(g)))
        let cap = if self.prec > 0 {
            self.prec.saturating_mul(g.val)
        } else {
            self.prec
        };
        let mut acc = LaurentSeries::zero(cap);
        for k in self.val..self.prec {
            let c = match self.c(k) {
                Some(c) if !c.is_zero() => c,
                _ => continue,
            };
            let term = g.powi(k)?.scale(c);
            acc = acc.add(&term);
        }
        Ok(acc)
    }

    /// Compositional inverse of `f = z + O(z^2)` by Lagrange inversion.
    pub fn reversion(&self) -> Result<Self, SeriesError> {
        if self.val != 1 {
            return Err(SeriesError::BadReversion(format!(
                "valuation is {}",
                self.val
            )));
        }
        if self.coeffs[0].as_constant() != Some(Rational::one()) {
            return Err(SeriesError::BadReversion(
                "leading coefficient is not 1".into(),
            ));
        }
        // phi = z / f, then [z^n] g = (1/n) [w^(n-1)] phi^n
        let phi = self.shift(-1).inverse()?;
        let prec = self.prec;
        let mut coeffs = Vec::new();
        let mut power = phi.clone();
        for n in 1..prec {
            let c = power.coeff(n - 1)?;
            coeffs.push(c.scale(&crate::rational::rat(1, n)));
            power = power.mul(&phi);
        }
        Ok(LaurentSeries::new(1, coeffs, prec))
    }

    /// Pre-Schwarzian `f''/f'`.
    pub fn pre_schwarzian(&self) -> Result<Self, SeriesError> {
        let d1 = self.derivative();
        if d1.val != 0 {
            return Err(SeriesError::NotInvertible);
        }
        if d1.prec - d1.val < 2 {
            return Err(SeriesError::OrderExhausted {
                requested: 2,
                available: self.prec,
            });
        }
        d1.derivative().div(&d1)
    }

    /// Schwarzian derivative `(f''/f')' - (f''/f')^2 / 2`.
    pub fn schwarzian(&self) -> Result<Self, SeriesError> {
        let d1 = self.derivative();
        if d1.val != 0 {
            return Err(SeriesError::NotInvertible);
        }
        if d1.prec - d1.val < 3 {
            return Err(SeriesError::OrderExhausted {
                requested: 3,
                available: self.prec,
            });
        }
        let a = self.pre_schwarzian()?;
        let half = crate::rational::rat(1, 2);
        Ok(a.derivative().sub(&a.mul(&a).scale_rational(&half)))
    }

    /// Coefficient of `z^-1`.
    pub fn residue(&self) -> Result<CoeffPoly, SeriesError> {
        self.coeff(-1)
    }

    /// Coefficient list from `z^from` up to and including `z^to`.
    pub fn coeffs_range(&self, from: i64, to: i64) -> Result<Vec<CoeffPoly>, SeriesError> {
        (from..=to).map(|k| self.coeff(k)).collect()
    }

    pub fn map_coeffs<F: Fn(&CoeffPoly) -> CoeffPoly>(&self, f: F) -> Self {
        LaurentSeries::new(self.val, self.coeffs.iter().map(f).collect(), self.prec)
    }

    /// Applies an arbitrary filter on exponents, keeping precision.
    pub fn filter_exponents<F: Fn(i64) -> bool>(&self, keep: F) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                if keep(self.val + i as i64) {
                    c.clone()
                } else {
                    CoeffPoly::zero()
                }
            })
            .collect();
        LaurentSeries::new(self.val, coeffs, self.prec)
    }
}

/// `z (1 + sum_{j=1}^{k} a_j z^j)` with `k = prec - 2`, known to `O(z^prec)`.
pub fn univalent_series(prec: i64, bar: bool) -> LaurentSeries {
    let coeffs = (0..(prec - 1).max(0))
        .map(|j| {
            let j = j as u32;
            if bar {
                CoeffPoly::abar(j)
            } else {
                CoeffPoly::a(j)
            }
        })
        .collect();
    LaurentSeries::new(1, coeffs, prec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn a(m: u32) -> CoeffPoly {
        CoeffPoly::a(m)
    }

    #[test]
    fn reversion_of_identity() {
        let z = LaurentSeries::z(8);
        assert_eq!(z.reversion().unwrap(), z);
    }

    #[test]
    fn reversion_one_coefficient() {
        // f = z(1 + a1 z)
        let f = LaurentSeries::new(1, vec![CoeffPoly::one(), a(1)], 6);
        let g = f.reversion().unwrap();
        let expect = [
            CoeffPoly::one(),
            a(1).neg(),
            a(1).pow(2).scale(&int(2)),
            a(1).pow(3).scale(&int(-5)),
            a(1).pow(4).scale(&int(14)),
        ];
        for (k, e) in expect.iter().enumerate() {
            assert_eq!(&g.coeff(k as i64 + 1).unwrap(), e);
        }
        assert!(g.coeff(6).is_err());
        let id = f.compose(&g).unwrap();
        assert_eq!(id.truncate(6).unwrap(), LaurentSeries::z(6));
    }

    #[test]
    fn reversion_two_coefficients() {
        let f = univalent_series(5, false);
        let g = f.reversion().unwrap();
        assert_eq!(g.coeff(2).unwrap(), a(1).neg());
        assert_eq!(g.coeff(3).unwrap(), a(1).pow(2).scale(&int(2)).sub(&a(2)));
    }

    #[test]
    fn reversion_rejects_bad_input() {
        let f = LaurentSeries::new(2, vec![CoeffPoly::one()], 6);
        assert!(matches!(f.reversion(), Err(SeriesError::BadReversion(_))));
        let f = LaurentSeries::new(1, vec![CoeffPoly::int(2)], 6);
        assert!(matches!(f.reversion(), Err(SeriesError::BadReversion(_))));
    }

    #[test]
    fn schwarzian_values_at_zero() {
        let f = univalent_series(8, false);
        let s = f.schwarzian().unwrap();
        let six = a(2).sub(&a(1).pow(2)).scale(&int(6));
        assert_eq!(s.coeff(0).unwrap(), six);
        let g = f.reversion().unwrap();
        assert_eq!(g.schwarzian().unwrap().coeff(0).unwrap(), six.neg());
        assert_eq!(
            f.pre_schwarzian().unwrap().coeff(0).unwrap(),
            a(1).scale(&int(2))
        );
        assert_eq!(
            g.pre_schwarzian().unwrap().coeff(0).unwrap(),
            a(1).scale(&int(-2))
        );
    }

    #[test]
    fn schwarzian_of_identity_vanishes() {
        let s = LaurentSeries::z(8).schwarzian().unwrap();
        assert!(s.is_zero_to_precision());
    }

    #[test]
    fn schwarzian_needs_enough_order() {
        let f = LaurentSeries::new(1, vec![CoeffPoly::one(), a(1)], 3);
        assert!(matches!(
            f.schwarzian(),
            Err(SeriesError::OrderExhausted { .. })
        ));
    }

    #[test]
    fn residue_examples() {
        let s = LaurentSeries::monomial(CoeffPoly::one(), -1, 4);
        assert_eq!(s.residue().unwrap(), CoeffPoly::one());
        let f = univalent_series(6, false);
        assert!(f.residue().unwrap().is_zero());
        // residue of S(f^-1)(z) / z is S(f^-1)(0)
        let g = f.reversion().unwrap();
        let sg = g.schwarzian().unwrap();
        let r = sg.shift(-1).residue().unwrap();
        assert_eq!(r, sg.coeff(0).unwrap());
        assert_eq!(r, a(2).sub(&a(1).pow(2)).scale(&int(-6)));
    }

    #[test]
    fn precision_is_tracked_through_products() {
        let f = univalent_series(5, false);
        let g = f.mul(&f);
        assert_eq!(g.valuation(), 2);
        assert_eq!(g.precision(), 6);
        let inv = f.inverse().unwrap();
        assert_eq!(inv.valuation(), -1);
        assert_eq!(inv.precision(), 3);
        assert!(f.truncate(9).is_err());
    }

    #[test]
    fn inverse_requires_constant_lead() {
        let s = LaurentSeries::new(0, vec![a(1)], 4);
        assert_eq!(s.inverse(), Err(SeriesError::NotInvertible));
    }
}
