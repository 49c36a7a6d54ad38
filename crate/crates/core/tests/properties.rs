use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use scattered::cbengine::is_scattered;
use scattered::classify::ms_characteristic;
use scattered::oracle::{check_expr, def_derive, Atom, DefSet};
use scattered::ordinal::Ordinal;
use scattered::spaces::{parse_expr, SpaceExpr};
use scattered::ultrametric::{hedgehog_metric, prop1_order, random_spines, random_ultra, spine_isometry, verify_interval_property};

/// Plain ordinals below `w^(max_exp+1)`, as CNF term lists.
fn ordinal(max_exp: u64) -> impl Strategy<Value = Ordinal> {
    prop::collection::vec((0..=max_exp, 1..4u64), 0..4).prop_map(|mut terms| {
        terms.sort_by_key(|t| std::cmp::Reverse(t.0));
        terms.iter().fold(Ordinal::zero(), |acc, (e, c)| acc.add(&Ordinal::monomial(&Ordinal::nat(*e), *c)))
    })
}

fn infinite(max_exp: u64) -> impl Strategy<Value = Ordinal> {
    ordinal(max_exp).prop_map(|a| Ordinal::omega().add(&a))
}

fn atom() -> impl Strategy<Value = Atom> {
    (0..3u64, ordinal(2), ordinal(2), any::<bool>(), any::<bool>()).prop_map(|(xi, a, b, lo, hi)| {
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        Atom::new(Ordinal::nat(xi), a, b).with_bounds(lo, hi)
    })
}

fn defset() -> impl Strategy<Value = DefSet> {
    prop::collection::vec(atom(), 1..4).prop_map(DefSet::from_atoms)
}

/// Probe points: endpoints of both sets and their first few elements.
fn probes(sets: &[&DefSet]) -> Vec<Ordinal> {
    let mut v: Vec<Ordinal> = sets.iter().flat_map(|s| s.endpoints().into_iter().chain(s.sample_points(4))).collect();
    v.extend(v.clone().iter().map(|p| p.add(&Ordinal::omega())));
    v.sort();
    v.dedup();
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn addition_is_associative(a in ordinal(3), b in ordinal(3), c in ordinal(3)) {
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
    }

    #[test]
    fn multiplication_distributes_on_the_left(a in ordinal(2), b in ordinal(2), c in ordinal(2)) {
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
    }

    #[test]
    fn left_subtraction_inverts_addition(a in ordinal(3), b in ordinal(3)) {
        let s = a.add(&b);
        prop_assert!(s >= b);
        prop_assert!(s >= a);
        prop_assert_eq!(a.sub_left(&s), Some(b));
    }

    #[test]
    fn ordinal_text_round_trips(a in ordinal(4)) {
        prop_assert_eq!(a.to_string().parse::<Ordinal>().unwrap(), a);
    }

    #[test]
    fn interval_ranks_match_the_oracle(theta in ordinal(4)) {
        let r = check_expr(&SpaceExpr::ord(theta.clone()), 2).unwrap();
        prop_assert!(r.agrees(), "{}: {:?}", theta, r.divergence);
    }

    #[test]
    fn open_interval_ranks_match_the_oracle(theta in infinite(3)) {
        let r = check_expr(&SpaceExpr::ord_open(theta.clone()), 2).unwrap();
        prop_assert!(r.agrees(), "{}: {:?}", theta, r.divergence);
    }

    #[test]
    fn product_ranks_match_the_oracle(theta in ordinal(2), z_left in any::<bool>()) {
        let left = if z_left { SpaceExpr::ZAtom } else { SpaceExpr::ord(Ordinal::nat(3)) };
        let r = check_expr(&SpaceExpr::prod(left, SpaceExpr::ord(theta.clone())), 2).unwrap();
        prop_assert!(r.agrees(), "{}: {:?}", theta, r.divergence);
    }

    #[test]
    fn derivative_is_monotone(s in defset(), extra in defset()) {
        let t = s.union(&extra);
        let (ds, dt) = (def_derive(&s), def_derive(&t));
        for p in probes(&[&s, &t, &ds]) {
            prop_assert!(!ds.contains(&p) || dt.contains(&p), "{} in {} but not in {}", p, ds, dt);
        }
    }

    #[test]
    fn derived_sets_are_closed(s in defset()) {
        let d1 = def_derive(&s);
        let d2 = def_derive(&d1);
        for p in probes(&[&s, &d1, &d2]) {
            prop_assert!(!d2.contains(&p) || d1.contains(&p), "{} in {} but not in {}", p, d2, d1);
        }
    }

    #[test]
    fn derived_points_are_limits(s in defset()) {
        let d = def_derive(&s);
        for p in probes(&[&s, &d]) {
            if d.contains(&p) {
                prop_assert!(p.is_limit(), "{} is a successor in {}", p, d);
            }
        }
    }

    #[test]
    fn reversal_keeps_the_characteristic(theta in ordinal(4)) {
        let x = SpaceExpr::ord(theta.clone());
        let r = SpaceExpr::rev(x.clone());
        prop_assert_eq!(ms_characteristic(&r).unwrap(), ms_characteristic(&x).unwrap());
        prop_assert_eq!(is_scattered(&r).unwrap(), is_scattered(&x).unwrap());
    }

    #[test]
    fn finite_tails_are_absorbed(theta in infinite(3), k in 0..20u64) {
        let x = SpaceExpr::ord(theta.clone());
        let c = SpaceExpr::concat(vec![x.clone(), SpaceExpr::ord(Ordinal::nat(k))]);
        prop_assert_eq!(ms_characteristic(&c).unwrap(), ms_characteristic(&x).unwrap());
    }

    #[test]
    fn doubling_doubles_the_top_count(theta in infinite(3)) {
        let x = SpaceExpr::ord(theta.clone());
        let c = SpaceExpr::concat(vec![x.clone(), x.clone()]);
        let (a, b) = (ms_characteristic(&x).unwrap(), ms_characteristic(&c).unwrap());
        prop_assert_eq!(&a.alpha, &b.alpha);
        prop_assert_eq!(2 * a.n, b.n);
    }

    #[test]
    fn expressions_round_trip(theta in ordinal(3), k in 1..5u64) {
        let text = format!("msum(concat(ord[{theta}],rev(ord[w^2))),prod(z,ord[{theta}+{k}]),hedge((z,w)*{k}))");
        let x = parse_expr(&text).unwrap();
        prop_assert_eq!(parse_expr(&x.to_string()).unwrap(), x);
    }

    #[test]
    fn ball_orders_have_the_interval_property(seed in any::<u64>(), n in 1..40usize) {
        let m = random_ultra(&mut ChaCha8Rng::seed_from_u64(seed), n);
        let o = prop1_order(&m);
        prop_assert!(verify_interval_property(&m, &o).is_ok());
    }

    #[test]
    fn hedgehogs_are_ultrametric(seed in any::<u64>()) {
        let spines = random_spines(&mut ChaCha8Rng::seed_from_u64(seed), 40);
        let h = hedgehog_metric(&spines).unwrap();
        for (i, (s, b)) in spines.iter().enumerate() {
            prop_assert!(spine_isometry(&h, s, b, i + 1));
        }
    }
}
