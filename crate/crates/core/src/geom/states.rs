//! States `Psi_{k, kbar} = L_{-k} Lbar_{-kbar} 1` and the module-structure
//! checks built on them.

use std::collections::BTreeMap;

use num_traits::Zero;

use super::operator::{Family, State};
use super::{GeomError, OperatorTable};
use crate::linalg::{rank, RatMatrix};
use crate::partition::{partitions_of, Partition};
use crate::poly::{CoeffPoly, Monomial};
use crate::rational::{int, Rational};
use crate::verma::parameter_assignment;

/// Applies `L_{-k}` of the given family: the smallest parts act first.
pub fn lower(
    table: &mut OperatorTable,
    family: Family,
    k: &Partition,
    state: &State,
) -> Result<State, GeomError> {
    let mut s = state.clone();
    let target = (s.level.max(0) as u32) + k.weight();
    for part in k.parts_descending().into_iter().rev() {
        let idx = target.max(s.poly.max_index()).max(1);
        s = table.get(family, -(part as i32), idx)?.apply(&s)?;
    }
    Ok(s)
}

/// Applies `L_k = L_1^{k_1} L_2^{k_2} ...`: the largest parts act first.
pub fn raise(
    table: &mut OperatorTable,
    family: Family,
    k: &Partition,
    state: &State,
) -> Result<State, GeomError> {
    let mut s = state.clone();
    for part in k.parts_descending() {
        let idx = s.poly.max_index().max(1);
        s = table.get(family, part as i32, idx)?.apply(&s)?;
    }
    Ok(s)
}

pub fn psi(table: &mut OperatorTable, k: &Partition, kbar: &Partition) -> Result<State, GeomError> {
    let s = lower(table, Family::Anti, kbar, &State::one())?;
    lower(table, Family::Holomorphic, k, &s)
}

/// `a^k abar^kbar` labelled by its level `|k| + |kbar|`.
pub fn monomial_state(k: &Partition, kbar: &Partition) -> State {
    let mut pairs = Vec::new();
    for (i, &e) in k.multiplicities().iter().enumerate() {
        if e > 0 {
            pairs.push((crate::poly::Generator::A(i as u32 + 1), e));
        }
    }
    for (i, &e) in kbar.multiplicities().iter().enumerate() {
        if e > 0 {
            pairs.push((crate::poly::Generator::Abar(i as u32 + 1), e));
        }
    }
    State::new(
        CoeffPoly::term(int(1), Monomial::from_pairs(pairs)),
        (k.weight() + kbar.weight()) as i64,
    )
}

/// `L_k (a^k)`, a constant.
pub fn duality_pairing(table: &mut OperatorTable, k: &Partition) -> Result<CoeffPoly, GeomError> {
    let s = raise(
        table,
        Family::Holomorphic,
        k,
        &monomial_state(k, &Partition::empty()),
    )?;
    Ok(s.poly)
}

/// `prod_m (-1)^{k_m} k_m!`.
pub fn expected_pairing(k: &Partition) -> Rational {
    let mut acc = int(1);
    for &km in k.multiplicities() {
        for j in 1..=km {
            acc *= int(-(j as i64));
        }
    }
    acc
}

/// Rank over the rationals of `{Psi_{k, 0} : k in T_N}` at specialized parameters.
pub fn level_rank(
    table: &mut OperatorTable,
    weight: &Rational,
    cc: &Rational,
    level: u32,
) -> Result<usize, GeomError> {
    let assignment = parameter_assignment(weight, cc);
    let vectors: Vec<CoeffPoly> = partitions_of(level)
        .iter()
        .map(|k| {
            Ok(psi(table, k, &Partition::empty())?
                .poly
                .substitute(&assignment))
        })
        .collect::<Result<_, GeomError>>()?;
    let mut columns: BTreeMap<Monomial, usize> = BTreeMap::new();
    for v in &vectors {
        for (m, _) in v.terms() {
            let next = columns.len();
            columns.entry(m.clone()).or_insert(next);
        }
    }
    let mut mat: RatMatrix = vec![vec![Rational::zero(); columns.len()]; vectors.len()];
    for (row, v) in vectors.iter().enumerate() {
        for (m, c) in v.terms() {
            mat[row][columns[m]] = c.clone();
        }
    }
    Ok(if columns.is_empty() { 0 } else { rank(&mat) })
}
