//! Independent determination of `L_{-2}` from commutation relations.
//!
//! The grading and multiplicative parts are read off the anchor
//! `L_{-2} 1 = 3 lambda a_1^2 - (4 lambda + c/2)(a_2 - a_1^2)`. The vector
//! field coefficients up to index `M` are unknown rational combinations of
//! the monomials allowed by the degree structure, and are fixed by
//!
//! ```text
//! [L_1, L_{-2}] = 3 L_{-1}        [L_2, L_{-2}] = 4 L_0 + c/2
//! [Lbar_1, L_{-2}] = 0            [Lbar_2, L_{-2}] = 0
//! [Lbar_{-1}, L_{-2}] = 0
//! ```
//!
//! compared coefficient by coefficient up to index `M`. Only the closed forms
//! of `L_1, L_2, L_0, L_{-1}` enter; no residue is taken.

use std::collections::BTreeMap;

use num_traits::Zero;

use super::build::{grading_mode, lowering_mode, positive_mode};
use super::operator::{DiffOperator, Family};
use super::states::monomial_state;
use super::GeomError;
use crate::linalg::{solve, RatMatrix};
use crate::partition::partitions_of;
use crate::poly::{CoeffPoly, Monomial};
use crate::rational::{int, rat, Rational};

/// Result of the constraint solve.
#[derive(Clone, Debug)]
pub struct SolvedOperator {
    pub op: DiffOperator,
    pub unknowns: usize,
    pub equations: usize,
    pub rank: usize,
}

impl SolvedOperator {
    /// The solution is unique when every unknown is pinned down.
    pub fn is_unique(&self) -> bool {
        self.rank == self.unknowns
    }
}

// (is the abar side, index m, monomial)
type Slot = (bool, u32, Monomial);

fn unknown_slots(max_index: u32) -> Vec<Slot> {
    let mut slots = Vec::new();
    for m in 1..=max_index {
        for k in partitions_of(m + 2) {
            let mono = monomial_state(&k, &Default::default()).poly;
            slots.push((false, m, mono.terms().next().unwrap().0.clone()));
        }
        // |k| - |kbar| = 2 - m, |k| + |kbar| <= m + 2
        let mi = m as i64;
        for left in 0..=(mi + 2) {
            let right = left - (2 - mi);
            if right < 0 || left + right > mi + 2 {
                continue;
            }
            for k in partitions_of(left as u32) {
                for kb in partitions_of(right as u32) {
                    let mono = monomial_state(&k, &kb).poly;
                    slots.push((true, m, mono.terms().next().unwrap().0.clone()));
                }
            }
        }
    }
    slots
}

fn anchor_part(max_index: u32) -> DiffOperator {
    let a1sq = CoeffPoly::a(1).pow(2);
    let s2 = CoeffPoly::a(2).sub(&a1sq);
    let mut op = DiffOperator::zero(-2, Family::Holomorphic, max_index);
    op.alpha = a1sq.scale(&rat(3, 2)).sub(&s2.scale(&int(2)));
    op.beta = s2.mul(&CoeffPoly::cc()).scale(&rat(-1, 2));
    op
}

fn single(slot: &Slot, max_index: u32) -> DiffOperator {
    let mut op = DiffOperator::zero(-2, Family::Holomorphic, max_index);
    let p = CoeffPoly::term(int(1), slot.2.clone());
    if slot.0 {
        op.pb[slot.1 as usize - 1] = p;
    } else {
        op.pa[slot.1 as usize - 1] = p;
    }
    op
}

// (component, generator monomial including lambda and c) -> coefficient
fn flatten(op: &DiffOperator, max_index: u32) -> BTreeMap<(u32, Monomial), Rational> {
    let mut out = BTreeMap::new();
    let mut push = |slot: u32, p: &CoeffPoly| {
        for (m, c) in p.terms() {
            out.insert((slot, m.clone()), c.clone());
        }
    };
    push(0, &op.alpha);
    push(1, &op.beta);
    for m in 1..=max_index.min(op.max_index()) {
        push(2 * m, op.coeff_a(m));
        push(2 * m + 1, op.coeff_abar(m));
    }
    out
}

/// Solves for `L_{-2}` up to index `max_index`.
pub fn solve_lowering_two(max_index: u32) -> Result<SolvedOperator, GeomError> {
    let wide = max_index + 3;
    let l1 = positive_mode(1, wide)?;
    let l2 = positive_mode(2, wide)?;
    let lb1 = l1.mirror();
    let lb2 = l2.mirror();
    let lbm1 = lowering_mode(wide).mirror();
    let half_c = CoeffPoly::cc().scale(&rat(1, 2));
    let constraints: Vec<(DiffOperator, DiffOperator)> = vec![
        (l1, lowering_mode(wide).scale(&int(3))),
        (l2, grading_mode(wide).scale(&int(4)).plus_constant(&half_c)),
        (lb1, DiffOperator::zero(-1, Family::Holomorphic, wide)),
        (lb2, DiffOperator::zero(0, Family::Holomorphic, wide)),
        (lbm1, DiffOperator::zero(-3, Family::Holomorphic, wide)),
    ];

    let slots = unknown_slots(max_index);
    let base = anchor_part(max_index);
    let singles: Vec<DiffOperator> = slots.iter().map(|s| single(s, max_index)).collect();

    let mut rows: RatMatrix = Vec::new();
    let mut rhs: Vec<Rational> = Vec::new();
    for (a, target) in &constraints {
        // [A, base] - target + sum t_u [A, X_u] = 0, compared up to max_index
        let fixed = a.commutator(&base)?;
        let brackets: Vec<DiffOperator> = singles
            .iter()
            .map(|x| a.commutator(x))
            .collect::<Result<_, GeomError>>()?;
        let limit = brackets
            .iter()
            .map(|b| b.max_index())
            .fold(fixed.max_index().min(max_index), u32::min);
        let mut affine = flatten(&fixed, limit);
        for (key, c) in flatten(target, limit) {
            let e = affine.entry(key).or_insert_with(Rational::zero);
            *e -= c;
        }
        let columns: Vec<BTreeMap<(u32, Monomial), Rational>> =
            brackets.iter().map(|b| flatten(b, limit)).collect();
        let mut keys: Vec<(u32, Monomial)> = affine.keys().cloned().collect();
        for col in &columns {
            keys.extend(col.keys().cloned());
        }
        keys.sort();
        keys.dedup();
        for key in keys {
            let row: Vec<Rational> = columns
                .iter()
                .map(|col| col.get(&key).cloned().unwrap_or_else(Rational::zero))
                .collect();
            let b = -affine.get(&key).cloned().unwrap_or_else(Rational::zero);
            rows.push(row);
            rhs.push(b);
        }
    }
    let equations = rows.len();
    let (x, rank) = solve(&rows, &rhs).map_err(|rank| {
        GeomError::Build(format!(
            "L_-2 constraint system is inconsistent (rank {rank}, {equations} equations)"
        ))
    })?;
    let mut op = base;
    for (slot, t) in slots.iter().zip(&x) {
        if t.is_zero() {
            continue;
        }
        let p = CoeffPoly::term(t.clone(), slot.2.clone());
        let target = if slot.0 {
            &mut op.pb[slot.1 as usize - 1]
        } else {
            &mut op.pa[slot.1 as usize - 1]
        };
        *target = target.add(&p);
    }
    Ok(SolvedOperator {
        op,
        unknowns: slots.len(),
        equations,
        rank,
    })
}
