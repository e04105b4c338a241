use std::collections::BTreeMap;

use num_traits::Zero;
use proptest::prelude::*;

use loopvir::partition::{partitions_of, Partition};
use loopvir::poly::{CoeffPoly, Generator, Monomial};
use loopvir::rational::{format_rational, int, parse_rational, rat, Rational};
use loopvir::series::{univalent_series, LaurentSeries};

fn gen() -> impl Strategy<Value = Generator> {
    prop_oneof![
        Just(Generator::Lambda),
        Just(Generator::CC),
        (1u32..4).prop_map(Generator::A),
        (1u32..4).prop_map(Generator::Abar),
    ]
}

fn small_rat() -> impl Strategy<Value = Rational> {
    (-9i64..10, 1i64..6).prop_map(|(n, d)| rat(n, d))
}

fn poly() -> impl Strategy<Value = CoeffPoly> {
    let term = (small_rat(), prop::collection::vec((gen(), 1u32..3), 0..3));
    prop::collection::vec(term, 0..5).prop_map(|terms| {
        CoeffPoly::from_terms(terms.into_iter().map(|(c, f)| (Monomial::from_pairs(f), c)))
    })
}

/// Random `z (1 + sum b_j z^j)` with rational coefficients.
fn rational_univalent(coeffs: &[Rational], prec: i64) -> LaurentSeries {
    let mut c = vec![CoeffPoly::one()];
    c.extend(coeffs.iter().map(|r| CoeffPoly::constant(r.clone())));
    LaurentSeries::new(1, c, prec)
}

fn partition_count_oracle(n: u32, max: u32) -> u64 {
    if n == 0 {
        return 1;
    }
    (1..=max.min(n))
        .map(|p| partition_count_oracle(n - p, p))
        .sum()
}

#[test]
fn partition_counts_up_to_twenty() {
    for n in 0..=20 {
        let ps = partitions_of(n);
        assert_eq!(ps.len() as u64, partition_count_oracle(n, n), "N = {n}");
        assert!(ps.iter().all(|p| p.weight() == n));
    }
    assert_eq!(partitions_of(0), vec![Partition::empty()]);
    assert_eq!(partitions_of(4).len(), 5);
    assert_eq!(partitions_of(8).len(), 22);
}

#[test]
fn reversion_examples_by_composition() {
    let a1 = CoeffPoly::a(1);
    let f = LaurentSeries::new(1, vec![CoeffPoly::one(), a1.clone()], 6);
    let g = f.reversion().unwrap();
    let expected = ["1", "-1*a1", "2*a1^2", "-5*a1^3"];
    for (k, e) in expected.iter().enumerate() {
        assert_eq!(
            g.coeff(k as i64 + 1).unwrap(),
            e.parse::<CoeffPoly>().unwrap()
        );
    }
    let back = f.compose(&g).unwrap();
    assert_eq!(back.truncate(5).unwrap(), LaurentSeries::z(5));
}

#[test]
fn residue_of_schwarzian_over_z() {
    let f = univalent_series(8, false);
    let g = f.reversion().unwrap();
    let s = g.schwarzian().unwrap().shift(-1);
    let r = s.residue().unwrap();
    assert_eq!(r, "-6*a2 + 6*a1^2".parse::<CoeffPoly>().unwrap());
    assert_eq!(r, g.schwarzian().unwrap().coeff(0).unwrap());
}

#[test]
fn hand_written_polynomials() {
    let p = |s: &str| s.parse::<CoeffPoly>();
    let a1 = CoeffPoly::a(1);
    let a2 = CoeffPoly::a(2);
    assert_eq!(p("a1 - a2").unwrap(), a1.sub(&a2));
    assert_eq!(
        p("-a1^2 + lambda").unwrap(),
        CoeffPoly::lambda().sub(&a1.mul(&a1))
    );
    assert_eq!(p("-6*a2 + 6*a1^2").unwrap(), p("6*a1^2 - 6*a2").unwrap());
    assert_eq!(
        p("abar1*a2^3 - 3/7*lambda*c")
            .unwrap()
            .to_string()
            .parse::<CoeffPoly>()
            .unwrap(),
        p("abar1*a2^3 + -3/7*c*lambda").unwrap()
    );
    for bad in [
        "",
        "a1 +",
        "a1 - - a2",
        "* a1",
        "a0",
        "b1",
        "a1^",
        "a1^x",
        "1/0",
        "lambda^99999999",
    ] {
        assert!(p(bad).is_err(), "{bad:?} accepted");
    }
}

#[test]
fn central_charge_samples() {
    use loopvir::verma::central_charge;
    assert_eq!(central_charge(&rat(8, 3)), int(0));
    assert_eq!(central_charge(&int(2)), int(-2));
    assert_eq!(central_charge(&int(4)), int(1));
}

proptest! {
    #[test]
    fn ring_laws(p in poly(), q in poly(), r in poly()) {
        prop_assert_eq!(p.mul(&q).mul(&r), p.mul(&q.mul(&r)));
        prop_assert_eq!(p.mul(&q.add(&r)), p.mul(&q).add(&p.mul(&r)));
        prop_assert_eq!(p.add(&q), q.add(&p));
        prop_assert_eq!(p.mul(&q), q.mul(&p));
        prop_assert!(p.sub(&p).is_zero());
        prop_assert_eq!(p.mul(&CoeffPoly::one()), p.clone());
    }

    #[test]
    fn text_round_trip(p in poly()) {
        let s = p.to_string();
        prop_assert_eq!(s.parse::<CoeffPoly>().unwrap(), p);
    }

    #[test]
    fn rational_round_trip(n in any::<i64>(), d in 1i64..i64::MAX) {
        let r = rat(n, d);
        prop_assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
    }

    #[test]
    fn substitution_is_a_ring_map(p in poly(), q in poly(), v in small_rat(), w in small_rat()) {
        let mut asg = BTreeMap::new();
        asg.insert(Generator::Lambda, v);
        asg.insert(Generator::A(1), w);
        prop_assert_eq!(
            p.mul(&q).substitute(&asg),
            p.substitute(&asg).mul(&q.substitute(&asg))
        );
    }

    #[test]
    fn reversion_composes_to_identity(cs in prop::collection::vec(small_rat(), 5)) {
        let f = rational_univalent(&cs, 7);
        let g = f.reversion().unwrap();
        let fg = f.compose(&g).unwrap();
        let gf = g.compose(&f).unwrap();
        prop_assert_eq!(fg.truncate(7).unwrap(), LaurentSeries::z(7));
        prop_assert_eq!(gf.truncate(7).unwrap(), LaurentSeries::z(7));
    }

    #[test]
    fn schwarzian_mobius_invariance(
        cs in prop::collection::vec(small_rat(), 5),
        al in small_rat(), be in small_rat(), ga in small_rat(),
    ) {
        // M(w) = (al w + be) / (ga w + 1) expanded around w = 0, so M o f
        // is a series in z; post-composition leaves the Schwarzian fixed
        let prec = 7;
        let f = rational_univalent(&cs, prec);
        prop_assume!(&al - &be * &ga != Rational::zero());
        let w = LaurentSeries::z(prec);
        let num = w.scale_rational(&al).add(&LaurentSeries::monomial(CoeffPoly::constant(be), 0, prec));
        let den = w.scale_rational(&ga).add(&LaurentSeries::monomial(CoeffPoly::one(), 0, prec));
        let m = num.div(&den).unwrap();
        let mf = m.compose(&f).unwrap();
        let s1 = f.schwarzian().unwrap();
        let s2 = mf.schwarzian().unwrap();
        let top = s1.precision().min(s2.precision());
        prop_assert!(top >= 3);
        prop_assert_eq!(s1.truncate(top).unwrap(), s2.truncate(top).unwrap());
    }

    #[test]
    fn residue_linear_and_kills_derivatives(
        xs in prop::collection::vec(small_rat(), 8),
        ys in prop::collection::vec(small_rat(), 8),
        v in -4i64..0, k in small_rat(),
    ) {
        let to = |cs: &[Rational]| LaurentSeries::new(v, cs.iter().cloned().map(CoeffPoly::constant).collect(), v + 8);
        let (s, t) = (to(&xs), to(&ys));
        prop_assert!(s.derivative().residue().unwrap().is_zero());
        let lhs = s.scale_rational(&k).add(&t).residue().unwrap();
        let rhs = s.residue().unwrap().scale(&k).add(&t.residue().unwrap());
        prop_assert_eq!(lhs, rhs);
    }
}
