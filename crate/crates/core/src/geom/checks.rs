//! Verification sweeps over the geometric generators.

use std::collections::HashMap;

use super::build::{default_series_order, residue_mode, OperatorTable};
use super::operator::{DiffOperator, Family, State};
use super::states::{duality_pairing, expected_pairing, level_rank, psi, raise};
use super::GeomError;
use crate::partition::{bipartitions_up_to, partitions_of, Partition};
use crate::poly::{CoeffPoly, Generator};
use crate::rational::{int, rat, Rational};
use crate::verma::Verma;

/// Outcome of one named check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub name: String,
    pub passed: bool,
    /// First failure, or a short summary of what was checked.
    pub witness: String,
}

impl Outcome {
    fn pass(name: String, witness: String) -> Self {
        Outcome {
            name,
            passed: true,
            witness,
        }
    }

    fn fail(name: String, witness: String) -> Self {
        Outcome {
            name,
            passed: false,
            witness,
        }
    }
}

fn family_prefix(f: Family) -> &'static str {
    match f {
        Family::Holomorphic => "L",
        Family::Anti => "Lbar",
    }
}

/// Every monomial `a^k abar^kbar` with `|k| + |kbar| <= max_degree`, as states.
pub fn test_monomials(max_degree: u32) -> Vec<State> {
    bipartitions_up_to(max_degree)
        .iter()
        .map(|(k, kb)| super::states::monomial_state(k, kb))
        .collect()
}

/// Checks `[L_n, L_m] = (n - m) L_{n+m} + c/12 (n^3 - n) delta_{n,-m}` and
/// `[L_n, Lbar_m] = 0` on every monomial of total degree `<= max_degree`,
/// for all `|n|, |m| <= max_mode`.
///
/// Both sides are computed by applying the operators to each monomial; the
/// images `L_m s` are shared between pairs.
pub fn commutator_sweep(
    table: &mut OperatorTable,
    max_mode: i32,
    max_degree: u32,
) -> Result<Vec<Outcome>, GeomError> {
    let inner = max_degree.max(1);
    let outer = inner + max_mode.max(0) as u32;
    let modes: Vec<i32> = (-max_mode..=max_mode).collect();
    let families = [Family::Holomorphic, Family::Anti];
    let mut ops: HashMap<(Family, i32), DiffOperator> = HashMap::new();
    for &f in &families {
        for &n in &modes {
            ops.insert((f, n), table.get(f, n, outer)?.clone());
        }
        for n in -2 * max_mode..=2 * max_mode {
            if !ops.contains_key(&(f, n)) {
                ops.insert((f, n), table.get(f, n, inner)?.clone());
            }
        }
    }
    let monomials = test_monomials(max_degree);
    // first failure per (family of n, n, family of m, m)
    let mut failures: HashMap<(Family, i32, Family, i32), String> = HashMap::new();
    for s in &monomials {
        let mut images: HashMap<(Family, i32), State> = HashMap::new();
        for &f in &families {
            for &n in &modes {
                images.insert((f, n), ops[&(f, n)].apply(s)?);
            }
        }
        for &fa in &families {
            for &n in &modes {
                for &fb in &families {
                    for &m in &modes {
                        let key = (fa, n, fb, m);
                        if failures.contains_key(&key) {
                            continue;
                        }
                        let lhs = ops[&(fa, n)]
                            .apply(&images[&(fb, m)])?
                            .poly
                            .sub(&ops[&(fb, m)].apply(&images[&(fa, n)])?.poly);
                        let rhs = if fa == fb {
                            let mut r =
                                ops[&(fa, n + m)].apply(s)?.poly.scale(&int((n - m) as i64));
                            if n == -m {
                                let central =
                                    CoeffPoly::cc().scale(&rat((n * n * n - n) as i64, 12));
                                r = r.add(&central.mul(&s.poly));
                            }
                            r
                        } else {
                            CoeffPoly::zero()
                        };
                        if lhs != rhs {
                            failures
                                .insert(key, format!("on {}: lhs {} vs rhs {}", s.poly, lhs, rhs));
                        }
                    }
                }
            }
        }
    }
    let mut out = Vec::new();
    for &fa in &families {
        for &n in &modes {
            for &fb in &families {
                for &m in &modes {
                    // only one ordering of mixed families is reported
                    if fa == Family::Anti && fb == Family::Holomorphic {
                        continue;
                    }
                    let name = format!("[{}_{n}, {}_{m}]", family_prefix(fa), family_prefix(fb));
                    match failures.get(&(fa, n, fb, m)) {
                        Some(w) => out.push(Outcome::fail(name, w.clone())),
                        None => out.push(Outcome::pass(
                            name,
                            format!(
                                "{} monomials of total degree <= {max_degree}",
                                monomials.len()
                            ),
                        )),
                    }
                }
            }
        }
    }
    Ok(out)
}

/// `L_n 1 = Lbar_n 1 = 0` for `1 <= n <= max_mode` and `L_0 1 = Lbar_0 1 = lambda`.
pub fn highest_weight(table: &mut OperatorTable, max_mode: i32) -> Result<Outcome, GeomError> {
    let name = "highest-weight".to_string();
    for f in [Family::Holomorphic, Family::Anti] {
        for n in 0..=max_mode {
            let s = table.get(f, n, 1)?.apply(&State::one())?;
            let expected = if n == 0 {
                CoeffPoly::lambda()
            } else {
                CoeffPoly::zero()
            };
            if s.poly != expected {
                return Ok(Outcome::fail(
                    name,
                    format!("{}_{n} 1 = {}", family_prefix(f), s.poly),
                ));
            }
        }
    }
    Ok(Outcome::pass(
        name,
        format!("modes 0..={max_mode}, both families"),
    ))
}

/// `L_{k'} Psi_{k, 0} = B(k, k') 1` for all `k, k'` of level `level`.
pub fn gram_consistency(
    table: &mut OperatorTable,
    verma: &mut Verma,
    level: u32,
) -> Result<Outcome, GeomError> {
    let name = format!("gram-consistency level {level}");
    let basis = partitions_of(level);
    let gram = verma.gram(level);
    for (i, k) in basis.iter().enumerate() {
        let state = psi(table, k, &Partition::empty())?;
        for (j, kp) in basis.iter().enumerate() {
            let r = raise(table, Family::Holomorphic, kp, &state)?;
            if r.level != 0 || r.poly != gram.entries[i][j] {
                return Ok(Outcome::fail(
                    name,
                    format!(
                        "k = {k}, k' = {kp}: geometric {} vs gram {}",
                        r.poly, gram.entries[i][j]
                    ),
                ));
            }
        }
    }
    Ok(Outcome::pass(
        name,
        format!("{} entries", basis.len() * basis.len()),
    ))
}

pub fn duality_check(table: &mut OperatorTable, max_level: u32) -> Result<Outcome, GeomError> {
    let name = format!("duality pairing |k| <= {max_level}");
    let mut count = 0;
    for n in 0..=max_level {
        for k in partitions_of(n) {
            let v = duality_pairing(table, &k)?;
            let e = CoeffPoly::constant(expected_pairing(&k));
            if v != e {
                return Ok(Outcome::fail(name, format!("k = {k}: {v} vs {e}")));
            }
            count += 1;
        }
    }
    Ok(Outcome::pass(name, format!("{count} partitions")))
}

/// Rank of `{Psi_{k,0}}` at level `level`, compared with an expectation.
pub fn rank_check(
    table: &mut OperatorTable,
    weight: &Rational,
    cc: &Rational,
    level: u32,
    expect_full: bool,
) -> Result<Outcome, GeomError> {
    let r = level_rank(table, weight, cc, level)?;
    let p = partitions_of(level).len();
    let name = format!(
        "rank level {level} at weight {}",
        crate::rational::format_rational(weight)
    );
    let ok = if expect_full { r == p } else { r < p };
    let witness = format!("rank {r}, p({level}) = {p}");
    Ok(if ok {
        Outcome::pass(name, witness)
    } else {
        Outcome::fail(name, witness)
    })
}

/// Degrees of the coefficients of `L_n`, `|n| <= max_mode`, `m <= max_index`:
///
/// * `d/da_m` coefficients are pure in `a`, homogeneous of weighted degree
///   `m - n` (zero when `m < n`);
/// * `d/dabar_m` monomials satisfy `leftdeg - rightdeg = -(n + m)` and total
///   weighted degree `<= m - n`.
pub fn degree_constraints(
    table: &mut OperatorTable,
    max_mode: i32,
    max_index: u32,
) -> Result<Outcome, GeomError> {
    let name = format!("degree constraints |n| <= {max_mode}, m <= {max_index}");
    for n in -max_mode..=max_mode {
        let op = table.get(Family::Holomorphic, n, max_index)?.clone();
        for m in 1..=max_index {
            let (mi, ni) = (m as i64, n as i64);
            for (mono, _) in op.coeff_a(m).terms() {
                let ok = !mono.has_parameters()
                    && mono.right_weight() == 0
                    && mono.left_weight() as i64 == mi - ni;
                if !ok {
                    return Ok(Outcome::fail(
                        name,
                        format!("mode {n}, d/da{m}: monomial {mono}"),
                    ));
                }
            }
            for (mono, _) in op.coeff_abar(m).terms() {
                let (l, r) = (mono.left_weight() as i64, mono.right_weight() as i64);
                let ok = !mono.has_parameters() && l - r == -(ni + mi) && l + r <= mi - ni;
                if !ok {
                    return Ok(Outcome::fail(
                        name,
                        format!("mode {n}, d/dabar{m}: monomial {mono}"),
                    ));
                }
            }
        }
    }
    Ok(Outcome::pass(name, "all coefficients".into()))
}

/// `(l - 1) L_{-l-1} = [L_{-1}, L_{-l}]` with both sides built by the residue
/// construction.
pub fn recursion_vs_residue(l: i32, max_index: u32) -> Result<Outcome, GeomError> {
    let name = format!("recursion vs residue l = {l}");
    let order = |n: i32, k: u32| default_series_order(n, k);
    let lower = residue_mode(-1, max_index + l as u32, order(-1, max_index + l as u32))?;
    let prev = residue_mode(-l, max_index + 1, order(-l, max_index + 1))?;
    let next = residue_mode(-l - 1, max_index, order(-l - 1, max_index))?;
    let comm = lower.commutator(&prev)?.truncated(max_index);
    let lhs = next.scale(&int(l as i64 - 1));
    Ok(match lhs.first_difference(&comm) {
        None if comm.max_index() == max_index => {
            Outcome::pass(name, format!("coefficients up to index {max_index}"))
        }
        None => Outcome::fail(
            name,
            format!("commutator known only to index {}", comm.max_index()),
        ),
        Some(d) => Outcome::fail(name, d),
    })
}

/// Residue construction of mode `n` at order `o` and `o + extra` agree.
pub fn order_independence(n: i32, max_index: u32, extra: i64) -> Result<Outcome, GeomError> {
    let name = format!("series-order independence mode {n}");
    let o = default_series_order(n, max_index);
    let a = residue_mode(n, max_index, o)?;
    let b = residue_mode(n, max_index, o + extra)?;
    Ok(match a.first_difference(&b) {
        None => Outcome::pass(name, format!("orders {o} and {}", o + extra)),
        Some(d) => Outcome::fail(name, d),
    })
}

/// `((L_{-1})^2 - 2/3 (2 lambda + 1) L_{-2}) 1` as a polynomial in `lambda, c, a`.
pub fn level_two_null_state(table: &mut OperatorTable) -> Result<CoeffPoly, GeomError> {
    let one = State::one();
    let l1 = table.get(Family::Holomorphic, -1, 2)?.clone();
    let l2 = table.get(Family::Holomorphic, -2, 2)?.clone();
    let first = l1.apply(&l1.apply(&one)?)?.poly;
    let second = l2.apply(&one)?.poly;
    let factor = CoeffPoly::lambda()
        .scale(&int(2))
        .add(&CoeffPoly::one())
        .scale(&rat(2, 3));
    Ok(first.sub(&factor.mul(&second)))
}

/// The null state vanishes after `lambda -> weight(kappa)`, `c -> c(kappa)` at
/// every sample `kappa`.
///
/// The result is a rational function of `kappa` whose numerator has degree
/// at most `2 d` where `d` is the total degree in `lambda, c`; vanishing at
/// more points than that proves it vanishes identically. `samples` should
/// contain at least that many distinct nonzero values.
pub fn singular_vector_identity<F>(
    table: &mut OperatorTable,
    branch: &str,
    weight: F,
    samples: &[Rational],
) -> Result<Outcome, GeomError>
where
    F: Fn(&Rational) -> Rational,
{
    let name = format!("level-2 singular vector, weight {branch}");
    let null = level_two_null_state(table)?;
    let d = null.degree_in(Generator::Lambda) + null.degree_in(Generator::CC);
    let needed = 2 * d as usize + 1;
    let mut distinct = samples.to_vec();
    distinct.sort();
    distinct.dedup();
    if distinct.len() < needed {
        return Ok(Outcome::fail(
            name,
            format!("{} samples, {needed} needed", distinct.len()),
        ));
    }
    for kappa in &distinct {
        let w = weight(kappa);
        let c = crate::verma::central_charge(kappa);
        let v = null.substitute(&crate::verma::parameter_assignment(&w, &c));
        if !v.is_zero() {
            return Ok(Outcome::fail(
                name,
                format!("kappa = {}: {v}", crate::rational::format_rational(kappa)),
            ));
        }
    }
    Ok(Outcome::pass(
        name,
        format!("{} values of kappa", distinct.len()),
    ))
}
