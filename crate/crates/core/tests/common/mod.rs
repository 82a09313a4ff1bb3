#![allow(dead_code)]

use num_bigint::BigUint;
use proptest::prelude::*;
use worddomain::{Alphabet, FormalBall, Ratio, Word};

/// How a test word was generated. Oracles below read symbols from this
/// description and never call the library's word algorithms.
#[derive(Debug, Clone)]
pub enum Spec {
    Finite(Vec<char>),
    Periodic(Vec<char>, Vec<char>),
}

/// Far beyond any point where two generated words can first differ.
pub const SCAN: usize = 200;

impl Spec {
    pub fn sym(&self, i: usize) -> Option<char> {
        match self {
            Spec::Finite(v) => v.get(i).copied(),
            Spec::Periodic(pre, per) => Some(if i < pre.len() {
                pre[i]
            } else {
                per[(i - pre.len()) % per.len()]
            }),
        }
    }

    pub fn len(&self) -> Option<usize> {
        match self {
            Spec::Finite(v) => Some(v.len()),
            Spec::Periodic(..) => None,
        }
    }

    pub fn expand(&self, n: usize) -> Vec<char> {
        (0..n).map_while(|i| self.sym(i)).collect()
    }

    pub fn word(&self, a: &Alphabet) -> Word {
        match self {
            Spec::Finite(v) => Word::finite(a, v.clone()).unwrap(),
            Spec::Periodic(p, q) => Word::periodic(a, p.clone(), q.clone()).unwrap(),
        }
    }
}

/// Index of the first disagreement, `None` when the words are equal and infinite.
pub fn lcp_len(x: &Spec, y: &Spec) -> Option<usize> {
    (0..SCAN).find(|&i| x.sym(i) != y.sym(i) || x.sym(i).is_none())
}

pub fn equal(x: &Spec, y: &Spec) -> bool {
    match lcp_len(x, y) {
        None => true,
        Some(i) => x.sym(i).is_none() && y.sym(i).is_none(),
    }
}

pub fn is_prefix(x: &Spec, y: &Spec) -> bool {
    match x.len() {
        Some(l) => (0..l).all(|i| x.sym(i) == y.sym(i)),
        None => equal(x, y),
    }
}

fn big_pow2(a: usize) -> BigUint {
    BigUint::from(1u8) << a
}

/// `2^-a`, with `None` standing for infinity.
pub fn p2(a: Option<usize>) -> Ratio {
    match a {
        Some(a) => Ratio::from_big(BigUint::from(1u8), big_pow2(a)),
        None => Ratio::new(0, 1),
    }
}

/// `2^-a - 2^-b` for `a ≤ b`.
pub fn p2_diff(a: Option<usize>, b: Option<usize>) -> Ratio {
    match (a, b) {
        (None, _) => Ratio::new(0, 1),
        (Some(a), None) => p2(Some(a)),
        (Some(a), Some(b)) => Ratio::from_big(big_pow2(b - a) - 1u8, big_pow2(b)),
    }
}

pub fn oracle_baire(x: &Spec, y: &Spec) -> Ratio {
    if equal(x, y) {
        Ratio::new(0, 1)
    } else {
        p2(lcp_len(x, y))
    }
}

pub fn oracle_dw(x: &Spec, y: &Spec) -> Ratio {
    let l = if equal(x, y) { x.len() } else { lcp_len(x, y) };
    p2_diff(l, x.len())
}

pub fn oracle_d0(x: &Spec, y: &Spec) -> Ratio {
    if is_prefix(x, y) {
        Ratio::new(0, 1)
    } else {
        p2(lcp_len(x, y))
    }
}

pub fn oracle_qb(x: &Spec, y: &Spec) -> Ratio {
    if is_prefix(x, y) {
        p2_diff(x.len(), y.len())
    } else {
        Ratio::new(1, 1)
    }
}

pub fn ab() -> Alphabet {
    Alphabet::parse("ab").unwrap()
}

fn symbols(max: usize) -> impl Strategy<Value = Vec<char>> {
    prop::collection::vec(prop::sample::select(vec!['a', 'b']), 0..=max)
}

pub fn arb_spec() -> impl Strategy<Value = Spec> {
    prop_oneof![
        symbols(6).prop_map(Spec::Finite),
        (
            symbols(3),
            prop::collection::vec(prop::sample::select(vec!['a', 'b']), 1..=3)
        )
            .prop_map(|(p, q)| Spec::Periodic(p, q)),
    ]
}

/// A word and the description it was built from.
pub fn arb_word() -> impl Strategy<Value = (Word, Spec)> {
    arb_spec().prop_map(|s| (s.word(&ab()), s))
}

/// Radii `k/8` for `k ≤ 12` plus a few non-dyadic values.
pub fn arb_radius() -> impl Strategy<Value = Ratio> {
    prop_oneof![
        (0u64..=12).prop_map(|k| Ratio::new(k, 8)),
        prop::sample::select(vec![(1, 3), (2, 3), (5, 7), (7, 5)])
            .prop_map(|(p, q)| Ratio::new(p, q)),
    ]
}

pub fn arb_ball() -> impl Strategy<Value = (FormalBall, Spec)> {
    (arb_word(), arb_radius()).prop_map(|((w, s), r)| (FormalBall::new(w, r), s))
}
