//! Reference values for the constructions, checked end to end.

use std::collections::BTreeSet;

use num_rational::Rational64;

use scattered::cbengine::{derive_full, is_scattered, rank_of_point, stage_contains};
use scattered::classify::{homeomorphic, ms_characteristic, pairwise_distinct, MSCharacteristic, Selector, Verdict};
use scattered::families::{prop2_closure, prop2_order_variant, prop2_space, prop3_y, prop4_z, thm1_space, thm2_g, thm2_h};
use scattered::invariants::{condensation_points, default_kappas, gamma, omega_kappa_sup, psi, sigma, sigma_kappa, singular_union};
use scattered::oracle::{def_derive_n, rect_derive, DefSet, RectUnion};
use scattered::ordinal::{CardinalSym, Ordinal};
use scattered::spaces::{parse_expr, tower_point, PointName, SpaceExpr};
use scattered::ultrametric::{de_order, hedgehog_metric, validate_ultra};

fn o(s: &str) -> Ordinal {
    s.parse().unwrap()
}

fn x(s: &str) -> SpaceExpr {
    parse_expr(s).unwrap()
}

fn p(s: &str) -> PointName {
    s.parse().unwrap()
}

fn set(v: &[&str]) -> BTreeSet<Ordinal> {
    v.iter().map(|s| o(s)).collect()
}

fn k(n: u64) -> CardinalSym {
    CardinalSym::aleph(n)
}

#[test]
fn top_of_a_power_has_its_exponent_as_rank() {
    for xi in ["1", "2", "3", "w"] {
        let top = Ordinal::omega_pow(&o(xi));
        assert_eq!(top.point_rank(), o(xi));
        assert_eq!(rank_of_point(&SpaceExpr::ord(top.clone()), &PointName::ord(top)).unwrap(), o(xi));
    }
}

#[test]
fn z_has_one_limit_point() {
    let t = derive_full(&SpaceExpr::ZAtom).unwrap();
    assert_eq!(t.stage_at(&o("1")).points, vec!["w".to_string()]);
    assert!(t.stage_at(&o("1")).regions.is_empty());
    assert_eq!(t.height, o("2"));
}

#[test]
fn stages_of_w_squared() {
    let x = SpaceExpr::ord(o("w^2"));
    assert!(stage_contains(&x, &p("w*3"), &o("1")).unwrap());
    assert!(!stage_contains(&x, &p("w*3+1"), &o("1")).unwrap());
    assert!(!stage_contains(&x, &p("w*3"), &o("2")).unwrap());
    assert!(stage_contains(&x, &p("w^2"), &o("2")).unwrap());
    assert!(derive_full(&x).unwrap().stage_at(&o("3")).is_empty());
}

#[test]
fn first_stage_of_z_times_z() {
    let x = x("prod(z,ord[w])");
    for (pt, survives) in [("(w;5)", true), ("(3;w)", true), ("(w;w)", true), ("(3;5)", false)] {
        assert_eq!(stage_contains(&x, &p(pt), &o("1")).unwrap(), survives, "{pt}");
    }
    assert_eq!(rank_of_point(&x, &p("(w;w)")).unwrap(), o("2"));
}

#[test]
fn hedgehog_body_ranks() {
    assert_eq!(rank_of_point(&x("hedge((z,w),(z,w),(z,w))"), &PointName::body()).unwrap(), o("1"));
    let y = prop3_y(&k(1)).unwrap();
    assert_eq!(rank_of_point(&y, &PointName::body()).unwrap(), o("1"));
    let cps = condensation_points(&y, &k(1)).unwrap();
    assert_eq!(cps.len(), 1);
    assert_eq!(cps[0].0.to_string(), "o");
    assert_eq!(sigma_kappa(&y, &k(1)).unwrap(), set(&["1"]));
}

#[test]
fn tower_points() {
    assert_eq!(prop4_z(&o("1")).unwrap(), SpaceExpr::ZAtom);
    for a in ["1", "3", "w", "w+2"] {
        let z = prop4_z(&o(a)).unwrap();
        assert_eq!(rank_of_point(&z, &tower_point(&o(a))).unwrap(), o(a));
    }
}

#[test]
fn ladder_sums() {
    let g = prop2_space(&[2, 5]).unwrap();
    assert_eq!(sigma(&g).unwrap(), [2, 5].into_iter().collect());
    assert_eq!(sigma(&prop2_space(&[7]).unwrap()).unwrap(), [7].into_iter().collect());
    let tops: Vec<String> = gamma(&g).unwrap().iter().map(|r| r.to_string()).collect();
    assert_eq!(tops, vec!["#0/#0/w^2", "#1/#0/w^5"]);
    for n in 2..=4 {
        assert_eq!(ms_characteristic(&prop2_closure(&[n]).unwrap()).unwrap(), MSCharacteristic { alpha: Ordinal::nat(n), n: 1 });
    }
    let d = homeomorphic(&g, &prop2_space(&[2, 7]).unwrap(), &default_kappas()).unwrap();
    assert_eq!(d.verdict, Verdict::Distinct);
    assert_eq!((d.left_value.as_str(), d.right_value.as_str()), ("{2, 5}", "{2, 7}"));
}

#[test]
fn closure_and_order_variant_agree() {
    for s in [vec![2], vec![3, 4], vec![2, 5, 6]] {
        let c = homeomorphic(&prop2_closure(&s).unwrap(), &prop2_order_variant(&s).unwrap(), &default_kappas()).unwrap();
        assert_eq!(c.verdict, Verdict::Homeomorphic, "{s:?}");
    }
}

#[test]
fn small_families_are_distinct() {
    let sets = [vec![2], vec![3], vec![2, 3], vec![4, 9], vec![5, 6, 7], vec![12], vec![2, 12], vec![8], vec![10, 11], vec![3, 6]];
    let fam: Vec<SpaceExpr> = sets.iter().map(|s| prop2_space(s).unwrap()).collect();
    assert!(pairwise_distinct(&fam, &default_kappas(), Selector::Sigma).unwrap().all_distinct);
    let ls = ["w", "w+1", "w*2", "w^2", "w^3+w", "w*5", "w^2*2", "w+7", "w^4", "w^2+w"];
    let fam: Vec<SpaceExpr> = ls.iter().map(|l| thm1_space(&[o(l)], &k(1)).unwrap()).collect();
    assert!(pairwise_distinct(&fam, &default_kappas(), Selector::SigmaKappa).unwrap().all_distinct);
}

#[test]
fn initial_ordinal_intervals() {
    let x = SpaceExpr::ord(o("o(aleph_1)"));
    let cps = condensation_points(&x, &k(1)).unwrap();
    assert_eq!(cps.len(), 1);
    assert_eq!(cps[0].0.to_string(), "o(aleph_1)");
    assert_eq!(psi(&x, &k(1)).unwrap(), set(&["0"]));
    assert_eq!(psi(&SpaceExpr::ord(o("o(aleph_1)").mul(&o("w"))), &k(1)).unwrap(), set(&["0", "o(aleph_1)"]));
}

#[test]
fn regular_lex_sums() {
    let h = thm2_h(&[o("w+1")], &k(1)).unwrap();
    assert_eq!(omega_kappa_sup(&h, &p("@w+1/w^(w+1)"), &k(1)).unwrap(), o("w+1"));
    assert_eq!(omega_kappa_sup(&h, &p("@o(aleph_1)"), &k(1)).unwrap(), o("0"));
    let mut got = psi(&h, &k(1)).unwrap();
    got.remove(&o("0"));
    got.remove(&o("o(aleph_1)"));
    assert_eq!(got, set(&["w+1"]));
    let cps: Vec<String> = condensation_points(&h, &k(1)).unwrap().iter().map(|c| c.0.to_string()).collect();
    assert!(cps.contains(&"@w+1/w^(w+1)".to_string()), "{cps:?}");
    assert!(is_scattered(&h).unwrap().0);
    assert!(derive_full(&h).unwrap().stages.last().unwrap().is_empty());

    let h2 = thm2_h(&[o("w+1"), o("w*2+1")], &k(2)).unwrap();
    let mut got = psi(&h2, &k(2)).unwrap();
    got.remove(&o("0"));
    got.remove(&o("o(aleph_2)"));
    assert_eq!(got, set(&["w+1", "w*2+1"]));
}

#[test]
fn singular_lex_sum() {
    let g = thm2_g(&[o("w+1"), o("w^2+1")], &"aleph_w".parse().unwrap()).unwrap();
    assert_eq!(singular_union(&g, &"aleph_w".parse().unwrap()).unwrap(), set(&["w+1", "w^2+1"]));
}

#[test]
fn thm1_signatures() {
    assert_eq!(sigma_kappa(&thm1_space(&[o("w"), o("w+3")], &k(1)).unwrap(), &k(1)).unwrap(), set(&["w", "w+3"]));
    assert_eq!(sigma_kappa(&thm1_space(&[o("w")], &k(1)).unwrap(), &k(1)).unwrap(), set(&["w"]));
    let l = ["w", "w*2", "w^2"];
    let v: Vec<Ordinal> = l.iter().map(|s| o(s)).collect();
    assert_eq!(sigma_kappa(&thm1_space(&v, &k(2)).unwrap(), &k(2)).unwrap(), set(&l));
    // the body of each summand sits at its exponent
    let s = thm1_space(&[o("w*2")], &k(1)).unwrap();
    assert_eq!(rank_of_point(&s, &p("#0/o")).unwrap(), o("w*2"));
}

#[test]
fn oracle_reference_sets() {
    for xi in 1..=4u64 {
        let top = Ordinal::omega_pow(&Ordinal::nat(xi));
        let last = def_derive_n(&DefSet::interval(Ordinal::zero(), top.clone()), xi);
        assert_eq!(last.sample_points(16), vec![top]);
    }
    let z = DefSet::interval(Ordinal::zero(), o("w"));
    let r = rect_derive(&RectUnion::new(vec![(z.clone(), z)]));
    assert!(r.contains(&o("w"), &o("4")) && r.contains(&o("4"), &o("w")) && !r.contains(&o("4"), &o("4")));
}

#[test]
fn hedgehog_metric_clauses() {
    let r = Rational64::new;
    let z = r(0, 1);
    let s1 = validate_ultra(vec!["b".into(), "x".into()], vec![vec![z, r(1, 2)], vec![r(1, 2), z]]).unwrap();
    let s2 = validate_ultra(vec!["b".into(), "y".into()], vec![vec![z, r(1, 4)], vec![r(1, 4), z]]).unwrap();
    let h = hedgehog_metric(&[(s1, "b".into()), (s2, "b".into())]).unwrap();
    let at = |l: &str| h.index_of(l).unwrap();
    assert_eq!(h.d(at("1:x"), at("2:y")), r(1, 2));
    assert_eq!(h.d(at("o"), at("1:x")), r(1, 2));
    assert_eq!(h.d(at("o"), at("2:y")), r(1, 4));
    assert_eq!(de_order(&["B1", "B2", "B3"]).unwrap(), vec!["B1", "B2", "B3"]);
}
