mod common;

use common::*;
use proptest::prelude::*;
use worddomain::corpus::valid_chains_above;
use worddomain::formal_balls::{
    approximation_chain, ball_leq, downset_directedness_check, lub_chain, way_below_refute,
    way_below_sufficient_qb, way_below_witness_check, witness_scan_bound, Directedness,
    LengthSchedule, WayBelowVerdict, WitnessVerdict,
};
use worddomain::{ChainPresentation, FormalBall, Metric, Ratio, SequencePresentation};

const Q: Metric = Metric::Qb;

/// `(x, r) ⊑ (y, s)` evaluated with the oracle distance.
fn oracle_leq(sx: &Spec, r: &Ratio, sy: &Spec, s: &Ratio) -> bool {
    &oracle_qb(sx, sy) + s <= *r
}

/// A parametric chain together with an independent description of its centers.
#[derive(Debug, Clone)]
struct ParamCase {
    centers: CentersSpec,
    base: Ratio,
    coeff: Ratio,
}

#[derive(Debug, Clone)]
enum CentersSpec {
    Stabilized(Vec<Spec>),
    Cyclic(Vec<Spec>),
    Prefix(Spec, u64, u64),
}

impl ParamCase {
    fn center(&self, n: u64) -> Spec {
        match &self.centers {
            CentersSpec::Stabilized(ws) => ws[(n as usize).min(ws.len() - 1)].clone(),
            CentersSpec::Cyclic(ws) => ws[n as usize % ws.len()].clone(),
            CentersSpec::Prefix(t, a, b) => Spec::Finite(t.expand((a * n + b) as usize)),
        }
    }

    fn radius(&self, n: u64) -> Ratio {
        &self.base + &(&self.coeff * &p2(Some(n as usize)))
    }

    fn presentation(&self) -> (SequencePresentation, ChainPresentation) {
        let a = ab();
        let seq = match &self.centers {
            CentersSpec::Stabilized(ws) => {
                SequencePresentation::explicit(ws.iter().map(|s| s.word(&a)).collect(), true)
                    .unwrap()
            }
            CentersSpec::Cyclic(ws) => {
                SequencePresentation::explicit(ws.iter().map(|s| s.word(&a)).collect(), false)
                    .unwrap()
            }
            CentersSpec::Prefix(t, s, o) => SequencePresentation::prefix_schedule(
                t.word(&a),
                LengthSchedule::new(*s, *o).unwrap(),
            )
            .unwrap(),
        };
        let chain =
            ChainPresentation::parametric(seq.clone(), self.base.clone(), self.coeff.clone())
                .unwrap();
        (seq, chain)
    }
}

fn arb_periodic() -> impl Strategy<Value = Spec> {
    arb_spec().prop_filter("infinite", |s| s.len().is_none())
}

fn arb_param() -> impl Strategy<Value = ParamCase> {
    let centers = prop_oneof![
        prop::collection::vec(arb_spec(), 1..4).prop_map(CentersSpec::Stabilized),
        prop::collection::vec(arb_spec(), 1..4).prop_map(CentersSpec::Cyclic),
        (arb_periodic(), 1u64..=3, 0u64..=3).prop_map(|(t, a, b)| CentersSpec::Prefix(t, a, b)),
    ];
    let coeff = prop::sample::select(vec![(1u64, 2u64), (1, 1), (2, 1), (3, 1), (1, 3)])
        .prop_map(|(p, q)| Ratio::new(p, q));
    (centers, arb_radius(), coeff).prop_map(|(centers, base, coeff)| ParamCase {
        centers,
        base,
        coeff,
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn ball_order_matches_oracle((b1, s1) in arb_ball(), (b2, s2) in arb_ball()) {
        prop_assert_eq!(
            ball_leq(&Q, &b1, &b2).unwrap(),
            oracle_leq(&s1, &b1.radius, &s2, &b2.radius)
        );
    }

    #[test]
    fn ball_order_is_a_partial_order((b1, _) in arb_ball(), (b2, _) in arb_ball(), (b3, _) in arb_ball()) {
        prop_assert!(ball_leq(&Q, &b1, &b1).unwrap());
        let (l12, l21) = (ball_leq(&Q, &b1, &b2).unwrap(), ball_leq(&Q, &b2, &b1).unwrap());
        if l12 && l21 {
            prop_assert_eq!(&b1, &b2);
        }
        if l12 && ball_leq(&Q, &b2, &b3).unwrap() {
            prop_assert!(ball_leq(&Q, &b1, &b3).unwrap());
        }
        if l12 {
            prop_assert!(b1.radius >= b2.radius);
        }
    }

    #[test]
    fn refutation_matches_strict_bound((b1, s1) in arb_ball(), (b2, s2) in arb_ball()) {
        let refuted = way_below_refute(&Q, &b1, &b2).unwrap().is_refuted();
        let strict = &oracle_qb(&s1, &s2) + &b2.radius < b1.radius;
        prop_assert_eq!(refuted, !strict);
    }

    #[test]
    fn certified_is_never_refuted((b1, _) in arb_ball(), (b2, _) in arb_ball()) {
        let v = way_below_sufficient_qb(&b1, &b2).unwrap();
        if v.is_certified() {
            prop_assert!(!way_below_refute(&Q, &b1, &b2).unwrap().is_refuted());
        }
        if let WayBelowVerdict::CertifiedBelow(c) = &v {
            if let Some(p) = &c.via {
                prop_assert!(ball_leq(&Q, &b1, p).unwrap());
                prop_assert!(way_below_sufficient_qb(p, &b2).unwrap().is_certified());
            }
        }
    }

    #[test]
    fn approximation_round_trip((b, _) in arb_ball()) {
        let chain = approximation_chain(&b);
        prop_assert_eq!(lub_chain(&Q, &chain).unwrap(), b.clone());
        for n in 0..24 {
            let e = chain.element(n).unwrap();
            prop_assert!(way_below_sufficient_qb(&e, &b).unwrap().is_certified(), "{}", e);
        }
    }

    #[test]
    fn witness_bound_covers_exhaustive_scan(
        (b1, s1) in arb_ball(),
        case in arb_param(),
    ) {
        let (seq, _) = case.presentation();
        let bound = witness_scan_bound(&b1, &seq, &case.base, &case.coeff).unwrap();
        let above = |n: u64| oracle_leq(&s1, &b1.radius, &case.center(n), &case.radius(n));
        let far = (0..=bound.max(64)).any(above);
        let near = (0..=bound).any(above);
        prop_assert_eq!(far, near, "bound {}", bound);
    }

    #[test]
    fn chain_elements_match_description(case in arb_param(), n in 0u64..40) {
        let (_, chain) = case.presentation();
        let e = chain.element(n).unwrap();
        prop_assert!(e.center.equals(&case.center(n).word(&ab())).unwrap());
        prop_assert_eq!(e.radius, case.radius(n));
    }

    #[test]
    fn lub_is_least_upper_bound(case in arb_param(), (c, sc) in arb_ball()) {
        let (_, chain) = case.presentation();
        let Ok(lub) = lub_chain(&Q, &chain) else { return Ok(()) };
        for n in 0..=64 {
            prop_assert!(ball_leq(&Q, &chain.element(n).unwrap(), &lub).unwrap());
        }
        let bounds = (0..=64).all(|n| oracle_leq(&case.center(n), &case.radius(n), &sc, &c.radius));
        if bounds {
            prop_assert!(ball_leq(&Q, &lub, &c).unwrap(), "{} bounds the chain but not {}", c, lub);
        }
    }

    #[test]
    fn certified_pairs_have_witnesses((b1, _) in arb_ball(), (b2, _) in arb_ball()) {
        if way_below_sufficient_qb(&b1, &b2).unwrap().is_certified() {
            let chains = valid_chains_above(&b2).unwrap();
            prop_assert!(chains.len() >= 10);
            for c in &chains {
                let v = way_below_witness_check(&b1, &b2, c).unwrap();
                prop_assert!(matches!(v, WitnessVerdict::WitnessFound { .. }), "{}: {:?}", c, v);
            }
        }
    }

    #[test]
    fn certified_sets_are_directed(
        (b, _) in arb_ball(),
        candidates in prop::collection::vec(arb_ball(), 1..12),
    ) {
        let elems: Vec<FormalBall> = candidates
            .into_iter()
            .map(|(e, _)| e)
            .filter(|e| way_below_sufficient_qb(e, &b).unwrap().is_certified())
            .collect();
        match downset_directedness_check(&b, &elems).unwrap() {
            Directedness::Vacuous => prop_assert!(elems.is_empty()),
            Directedness::UpperBoundInDownset(u) => {
                prop_assert!(way_below_sufficient_qb(&u, &b).unwrap().is_certified());
                for e in &elems {
                    prop_assert!(ball_leq(&Q, e, &u).unwrap());
                }
            }
            Directedness::Fail(x, y) => prop_assert!(false, "no bound for {} and {}", x, y),
        }
    }
}

#[test]
fn certified_chain_elements_are_not_always_way_below_at_the_boundary() {
    // (take(x, n), r + 2^-n) meets the strict bound with equality, so no
    // radius-1 approximation of an infinite center is way-below it
    let a = ab();
    let b = FormalBall::parse("((a)^w, 0)", &a).unwrap();
    for n in 0..8 {
        let e = FormalBall::new(b.center.take(n), Ratio::new(1, 1u64 << n));
        assert!(way_below_refute(&Q, &e, &b).unwrap().is_refuted());
    }
    // the chain of those balls has lub b, but none of its elements lies above (a, 1/2)
    let chain =
        ChainPresentation::parse("param: target=(a)^w lengths=n+1 radii=0+2*2^-n", &a).unwrap();
    assert_eq!(lub_chain(&Q, &chain).unwrap(), b);
    let e = FormalBall::parse("(a, 1/2)", &a).unwrap();
    assert_eq!(
        way_below_witness_check(&e, &b, &chain).unwrap(),
        WitnessVerdict::NoWitness
    );
}
