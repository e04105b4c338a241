//! Constructions of the geometric generators.
//!
//! Write `f(z) = z (1 + sum_j a_j z^j)` and let `h = -f^(n+1) / f'` be the
//! pull-back of the vector field `-z^(n+1) d/dz` through `f`, with Taylor
//! coefficients `h_k`. The residue construction of mode `n` reads
//!
//! ```text
//! alpha  = -varpi(n)
//! beta   = -(c/12) vartheta(n)
//! pa_m   = [z^(m+1)] ( f' (h_{>=2} + (h_1/2) z) - (h_1/2) f )
//! pb_m   = [z^(m+1)] ( fbar' ((h_1/2) z + sum_{k<=0} h_k z^(2-k)) - (h_1/2) fbar )
//! ```
//!
//! where `varpi(n) = -1/2 res[(g'/g)^2 z^(n+1)]` and
//! `vartheta(n) = res[Sg(z) (-z^(n+1))]` with `g` the reversion of `f`, and
//! `varpi(n) = h_1 / 2`. The Laurent part of `h` (powers `<= 1`) moves the
//! anti-holomorphic coefficients, its holomorphic part the holomorphic ones;
//! the `h_1` rotation is split evenly between both sides and absorbed into
//! the grading term.
//!
//! Positive modes reduce to `pa_m = -[z^(m+1)] f^(n+1)`. The grading and
//! lowering generators `L_0`, `L_{-1}` have short closed forms, and modes
//! `<= -3` default to the recursion `(l-1) L_{-l-1} = [L_{-1}, L_{-l}]`.

use std::collections::BTreeMap;

use super::operator::{DiffOperator, Family};
use super::GeomError;
use crate::poly::CoeffPoly;
use crate::rational::{int, rat};
use crate::series::{univalent_series, LaurentSeries};

/// How an operator in a table was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Construction {
    /// `-[z^(m+1)] f^(n+1)` for positive modes.
    Direct,
    /// Closed form of the grading operator.
    Grading,
    /// Closed form of `L_{-1}`.
    Lowering,
    /// Residue construction.
    Residue,
    /// Commutator recursion from `L_{-1}` and the previous mode.
    Recursion,
}

impl Construction {
    pub fn tag(self) -> u8 {
        match self {
            Construction::Direct => 0,
            Construction::Grading => 1,
            Construction::Lowering => 2,
            Construction::Residue => 3,
            Construction::Recursion => 4,
        }
    }

    pub fn from_tag(t: u8) -> Option<Self> {
        Some(match t {
            0 => Construction::Direct,
            1 => Construction::Grading,
            2 => Construction::Lowering,
            3 => Construction::Residue,
            4 => Construction::Recursion,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Construction::Direct => "direct",
            Construction::Grading => "grading",
            Construction::Lowering => "lowering",
            Construction::Residue => "residue",
            Construction::Recursion => "recursion",
        }
    }
}

/// Series order used by the residue construction of mode `n` up to `max_index`.
pub fn default_series_order(n: i32, max_index: u32) -> i64 {
    max_index as i64 + n.unsigned_abs() as i64 + 4
}

fn f_series(order: i64, family_bar: bool) -> LaurentSeries {
    univalent_series(order, family_bar)
}

/// `varpi(n) = -1/2 res[(g'/g)^2 z^(n+1)]`, `g` the reversion of `f`.
pub fn varpi(n: i32) -> Result<CoeffPoly, GeomError> {
    varpi_at_order(n, default_series_order(n, 1))
}

pub fn varpi_at_order(n: i32, order: i64) -> Result<CoeffPoly, GeomError> {
    let g = f_series(order, false).reversion()?;
    let log_d = g.derivative().div(&g)?;
    let kernel = log_d.mul(&log_d).shift(n as i64 + 1);
    Ok(kernel.residue()?.scale(&rat(-1, 2)))
}

/// `vartheta(n) = res[Sg(z) (-z^(n+1))]`, `g` the reversion of `f`.
pub fn vartheta(n: i32) -> Result<CoeffPoly, GeomError> {
    vartheta_at_order(n, default_series_order(n, 1))
}

pub fn vartheta_at_order(n: i32, order: i64) -> Result<CoeffPoly, GeomError> {
    let g = f_series(order, false).reversion()?;
    let s = g.schwarzian()?;
    Ok(s.shift(n as i64 + 1).residue()?.neg())
}

/// `L_n` for `n >= 1`: `pa_m = -[z^(m+1)] f^(n+1)`.
pub fn positive_mode(n: i32, max_index: u32) -> Result<DiffOperator, GeomError> {
    assert!(n >= 1, "positive_mode needs n >= 1");
    let f = f_series(max_index as i64 + 2, false);
    let power = f.powi(n as i64 + 1)?;
    let mut op = DiffOperator::zero(n, Family::Holomorphic, max_index);
    for m in 1..=max_index {
        op.pa[m as usize - 1] = power.coeff(m as i64 + 1)?.neg();
    }
    Ok(op)
}

/// `L_0`: acts on a state of level `T` made of monomials of bidegree
/// `(N, Nbar)` as `lambda + (T + N - Nbar) / 2`.
pub fn grading_mode(max_index: u32) -> DiffOperator {
    let mut op = DiffOperator::zero(0, Family::Holomorphic, max_index);
    op.alpha = CoeffPoly::constant(rat(1, 2));
    for m in 1..=max_index {
        op.pa[m as usize - 1] = CoeffPoly::a(m).scale(&rat(m as i64, 2));
        op.pb[m as usize - 1] = CoeffPoly::abar(m).scale(&rat(-(m as i64), 2));
    }
    op
}

/// `L_{-1} = -a_1 E + sum_m (m+2)(a_{m+1} - a_1 a_m) d/da_m + m (a_1 abar_m - abar_{m-1}) d/dabar_m`
/// with `a_0 = abar_0 = 1`.
pub fn lowering_mode(max_index: u32) -> DiffOperator {
    let mut op = DiffOperator::zero(-1, Family::Holomorphic, max_index);
    let a1 = CoeffPoly::a(1);
    op.alpha = a1.neg();
    for m in 1..=max_index {
        let pa = CoeffPoly::a(m + 1).sub(&a1.mul(&CoeffPoly::a(m)));
        op.pa[m as usize - 1] = pa.scale(&int(m as i64 + 2));
        let pb = a1.mul(&CoeffPoly::abar(m)).sub(&CoeffPoly::abar(m - 1));
        op.pb[m as usize - 1] = pb.scale(&int(m as i64));
    }
    op
}

/// Residue construction of `L_n` for any `n`, using series order `order`.
pub fn residue_mode(n: i32, max_index: u32, order: i64) -> Result<DiffOperator, GeomError> {
    let k = max_index as i64;
    let f = f_series(order, false);
    let fbar = f_series(order, true);
    let df = f.derivative();
    let h = f.powi(n as i64 + 1)?.div(&df)?.neg();
    let h1 = h.coeff(1)?;
    let half = h1.scale(&rat(1, 2));

    let alpha = varpi_at_order(n, order)?.neg();
    if alpha != half.neg() {
        return Err(GeomError::Build(format!(
            "grading coefficient of mode {n} disagrees with h_1/2"
        )));
    }
    let beta = vartheta_at_order(n, order)?
        .mul(&CoeffPoly::cc())
        .scale(&rat(-1, 12));

    // holomorphic side: f' (h_{>=2} + (h_1/2) z) - (h_1/2) f
    let mut upper = h.filter_exponents(|e| e >= 2);
    upper = upper.add(&LaurentSeries::monomial(half.clone(), 1, upper.precision()));
    let side_a = df.mul(&upper).sub(&f.scale(&half));

    // anti-holomorphic side: fbar' ((h_1/2) z + sum_{j>=2} h_{2-j} z^j) - (h_1/2) fbar
    let val = h.valuation();
    let mut reflected = vec![CoeffPoly::zero(); (2 - val).max(2) as usize + 1];
    reflected[1] = half.clone();
    for kk in val..=0 {
        reflected[(2 - kk) as usize] = h.coeff(kk)?;
    }
    let lower = LaurentSeries::new(0, reflected, k + 3);
    let side_b = fbar.derivative().mul(&lower).sub(&fbar.scale(&half));

    let mut op = DiffOperator::zero(n, Family::Holomorphic, max_index);
    op.alpha = alpha;
    op.beta = beta;
    for m in 1..=max_index {
        op.pa[m as usize - 1] = side_a.coeff(m as i64 + 1)?;
        op.pb[m as usize - 1] = side_b.coeff(m as i64 + 1)?;
    }
    Ok(op)
}

/// `L_{-l-1} = [L_{-1}, L_{-l}] / (l - 1)` for `l >= 2`.
///
/// The result is exact up to index `M` when `L_{-1}` is known up to `M + l`
/// and `L_{-l}` up to `M + 1`.
pub fn recursion_step(
    lower: &DiffOperator,
    prev: &DiffOperator,
    max_index: u32,
) -> Result<DiffOperator, GeomError> {
    let l = -prev.mode;
    assert!(
        lower.mode == -1 && l >= 2,
        "recursion needs L_-1 and L_-l with l >= 2"
    );
    let c = lower.commutator(prev)?.scale(&rat(1, l as i64 - 1));
    if c.max_index() < max_index {
        return Err(GeomError::InsufficientIndex {
            mode: -l - 1,
            needed: max_index,
            available: c.max_index(),
        });
    }
    Ok(c.truncated(max_index))
}

#[derive(Clone, Debug, PartialEq)]
pub struct TableEntry {
    pub op: DiffOperator,
    pub mirror: DiffOperator,
    pub construction: Construction,
    /// Series order used, for residue and direct constructions.
    pub series_order: Option<i64>,
}

/// Lazily built generators, keyed by mode.
///
/// Requests for an index beyond what is stored rebuild the entry. Modes
/// `<= -3` are built by recursion unless `residue_only` is set.
#[derive(Clone, Debug, Default)]
pub struct OperatorTable {
    entries: BTreeMap<i32, TableEntry>,
    extra_order: i64,
    residue_only: bool,
}

impl OperatorTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `extra` to every series order used by residue constructions.
    pub fn with_extra_order(mut self, extra: i64) -> Self {
        self.extra_order = extra;
        self
    }

    /// Builds every negative mode by the residue construction.
    pub fn residue_only(mut self) -> Self {
        self.residue_only = true;
        self
    }

    pub fn entries(&self) -> impl Iterator<Item = (&i32, &TableEntry)> {
        self.entries.iter()
    }

    pub fn insert(&mut self, entry: TableEntry) {
        self.entries.insert(entry.op.mode, entry);
    }

    pub fn clear(&mut self) {
        self.entries.clear();
    }

    /// Makes sure mode `n` is known up to `max_index` and returns its entry.
    pub fn ensure(&mut self, n: i32, max_index: u32) -> Result<&TableEntry, GeomError> {
        let have = self.entries.get(&n).map(|e| e.op.max_index());
        if have.is_none_or(|h| h < max_index) {
            let entry = self.build(n, max_index)?;
            self.entries.insert(n, entry);
        }
        Ok(&self.entries[&n])
    }

    pub fn get(
        &mut self,
        family: Family,
        n: i32,
        max_index: u32,
    ) -> Result<&DiffOperator, GeomError> {
        let e = self.ensure(n, max_index)?;
        Ok(match family {
            Family::Holomorphic => &e.op,
            Family::Anti => &e.mirror,
        })
    }

    fn build(&mut self, n: i32, max_index: u32) -> Result<TableEntry, GeomError> {
        let (op, construction, series_order) = if n >= 1 {
            (
                positive_mode(n, max_index)?,
                Construction::Direct,
                Some(max_index as i64 + 2),
            )
        } else if n == 0 {
            (grading_mode(max_index), Construction::Grading, None)
        } else if n == -1 {
            (lowering_mode(max_index), Construction::Lowering, None)
        } else if n == -2 || self.residue_only {
            let order = default_series_order(n, max_index) + self.extra_order;
            (
                residue_mode(n, max_index, order)?,
                Construction::Residue,
                Some(order),
            )
        } else {
            let l = -n - 1;
            let lower = self.ensure(-1, max_index + l as u32)?.op.clone();
            let prev = self.ensure(-l, max_index + 1)?.op.clone();
            (
                recursion_step(&lower, &prev, max_index)?,
                Construction::Recursion,
                None,
            )
        };
        let mirror = op.mirror();
        Ok(TableEntry {
            op,
            mirror,
            construction,
            series_order,
        })
    }
}
