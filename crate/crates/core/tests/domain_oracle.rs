use proptest::prelude::*;
use worddomain::corpus::{antichain_poset, chain_poset, diamond_poset, random_poset, rng};
use worddomain::domain_oracle::{
    directed_subsets, is_continuous, is_dcpo, lub, members, sample_ball_poset, validate_poset,
    FinitePoset, Oracle, OracleError,
};
use worddomain::metrics::BaseMetric;
use worddomain::{Alphabet, Exec, Metric, Ratio, Word};

fn assert_way_below_is_leq(p: &FinitePoset) {
    let table = Oracle::default().way_below_table(p).unwrap();
    let n = p.len();
    for (k, &wb) in table.iter().enumerate() {
        assert_eq!(wb, p.le(k / n, k % n), "{:?} at {k}", p.labels());
    }
}

#[test]
fn chains_and_antichains() {
    for n in 1..=12 {
        let c = chain_poset(n);
        assert_eq!(directed_subsets(&c).unwrap().len(), (1 << n) - 1);
        assert!(is_dcpo(&c).unwrap() && is_continuous(&c).unwrap());
        let a = antichain_poset(n);
        assert_eq!(directed_subsets(&a).unwrap().len(), n);
        assert!(is_dcpo(&a).unwrap() && is_continuous(&a).unwrap());
    }
    assert_way_below_is_leq(&chain_poset(6));
    assert_way_below_is_leq(&antichain_poset(6));
}

#[test]
fn diamond() {
    let p = diamond_poset();
    assert_way_below_is_leq(&p);
    let l = p.index_of("l").unwrap();
    let r = p.index_of("r").unwrap();
    assert_eq!(lub(&p, (1 << l) | (1 << r)), p.index_of("top"));
    assert!(!directed_subsets(&p)
        .unwrap()
        .contains(&((1 << l) | (1 << r))));
}

#[test]
fn subsets_are_directed_by_definition() {
    let p = random_poset(9, 0.25, &mut rng(11)).unwrap();
    let ds = directed_subsets(&p).unwrap();
    for s in 1u32..(1 << p.len()) {
        let elems: Vec<usize> = members(s).collect();
        let directed = elems.iter().all(|&i| {
            elems
                .iter()
                .all(|&j| elems.iter().any(|&k| p.le(i, k) && p.le(j, k)))
        });
        assert_eq!(ds.contains(&s), directed);
    }
}

#[test]
fn order_axiom_witnesses() {
    assert_eq!(
        validate_poset(
            &["x", "y"],
            &[("x", "x"), ("y", "y"), ("x", "y"), ("y", "x")]
        ),
        Err(OracleError::NotAntisymmetric("x".into(), "y".into()))
    );
    assert_eq!(
        validate_poset(&["x"], &[]),
        Err(OracleError::NotReflexive("x".into()))
    );
}

#[test]
fn ball_samples_validate_for_every_metric() {
    let a = Alphabet::parse("ab").unwrap();
    let words: Vec<Word> = worddomain::corpus::word_corpus(&a, 4);
    let radii = worddomain::corpus::grid_radii();
    for b in BaseMetric::ALL {
        let (p, _) = sample_ball_poset(&Metric::from(b), &words, &radii, Exec::default()).unwrap();
        assert_eq!(p.len(), 204);
    }
    let small: Vec<Word> = ["eps", "a", "ab"]
        .iter()
        .map(|s| Word::parse(s, &a).unwrap())
        .collect();
    let r: Vec<Ratio> = ["0", "1/4", "1/2", "1"]
        .iter()
        .map(|s| s.parse().unwrap())
        .collect();
    let (p, _) = sample_ball_poset(&Metric::Qb, &small, &r, Exec::Sequential).unwrap();
    assert_eq!(p.len(), 12);
    assert_way_below_is_leq(&p);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn random_posets_are_continuous(seed in any::<u64>(), n in 1usize..=12, density in 0.05f64..0.6) {
        let p = random_poset(n, density, &mut rng(seed)).unwrap();
        prop_assert!(is_dcpo(&p).unwrap());
        prop_assert!(is_continuous(&p).unwrap());
        let table = Oracle::default().way_below_table(&p).unwrap();
        for (k, &wb) in table.iter().enumerate() {
            prop_assert_eq!(wb, p.le(k / n, k % n));
        }
    }

    #[test]
    fn strategies_agree(seed in any::<u64>(), n in 1usize..=10) {
        let p = random_poset(n, 0.3, &mut rng(seed)).unwrap();
        let seq = Oracle { exec: Exec::Sequential, ..Oracle::default() };
        let par = Oracle { exec: Exec::Parallel, ..Oracle::default() };
        prop_assert_eq!(seq.way_below_table(&p).unwrap(), par.way_below_table(&p).unwrap());
        prop_assert_eq!(seq.directed_subsets(&p).unwrap(), par.directed_subsets(&p).unwrap());
    }
}
