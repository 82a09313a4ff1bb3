//! Deterministic test corpora: exhaustive word lists, the ball grid, and
//! seeded families of sequences, chains, probes and posets.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::domain_oracle::{FinitePoset, OracleError};
use crate::exec::Exec;
use crate::formal_balls::{
    ball_leq, lub_chain, BallError, ChainPresentation, FormalBall, LengthSchedule,
    SequencePresentation,
};
use crate::metrics::Metric;
use crate::ratio::Ratio;
use crate::words::{Alphabet, ExtNat, Word};

pub type CorpusRng = ChaCha8Rng;

pub fn rng(seed: u64) -> CorpusRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// All finite words of length at most `max_len`, shortest first.
pub fn finite_words(alphabet: &Alphabet, max_len: usize) -> Vec<Word> {
    let mut out = vec![Word::empty(alphabet)];
    let mut layer = vec![Vec::new()];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|w: &Vec<char>| {
                alphabet.symbols().iter().map(move |&c| {
                    let mut v = w.clone();
                    v.push(c);
                    v
                })
            })
            .collect();
        out.extend(
            layer
                .iter()
                .map(|v| Word::finite(alphabet, v.iter().copied()).expect("symbols from alphabet")),
        );
    }
    out
}

/// `(a)^w`, `(b)^w` and `(ab)^w` over the first two symbols.
pub fn periodic_extras(alphabet: &Alphabet) -> Vec<Word> {
    let s = alphabet.symbols();
    let mut periods = vec![vec![s[0]]];
    if s.len() > 1 {
        periods.push(vec![s[1]]);
        periods.push(vec![s[0], s[1]]);
    }
    periods
        .into_iter()
        .map(|p| Word::periodic(alphabet, Vec::new(), p).expect("symbols from alphabet"))
        .collect()
}

/// Finite words up to `max_len` followed by the periodic extras.
pub fn word_corpus(alphabet: &Alphabet, max_len: usize) -> Vec<Word> {
    let mut words = finite_words(alphabet, max_len);
    words.extend(periodic_extras(alphabet));
    words
}

pub fn grid_radii() -> Vec<Ratio> {
    ["0", "1/8", "1/4", "1/2", "3/4", "1"]
        .iter()
        .map(|s| s.parse().expect("grid radius"))
        .collect()
}

pub fn ball_grid(words: &[Word], radii: &[Ratio]) -> Vec<FormalBall> {
    words
        .iter()
        .flat_map(|w| {
            radii
                .iter()
                .map(move |r| FormalBall::new(w.clone(), r.clone()))
        })
        .collect()
}

/// An eventually periodic word with preperiod length `< 4` and period length in `1..=3`.
pub fn random_infinite_word(alphabet: &Alphabet, rng: &mut CorpusRng) -> Word {
    let pre_len = rng.gen_range(0..4);
    let period_len = rng.gen_range(1..=3);
    let pre = random_symbols(alphabet, pre_len, rng);
    let period = random_symbols(alphabet, period_len, rng);
    Word::periodic(alphabet, pre, period).expect("symbols from alphabet")
}

pub fn random_finite_word(alphabet: &Alphabet, max_len: usize, rng: &mut CorpusRng) -> Word {
    let len = rng.gen_range(0..=max_len);
    Word::finite(alphabet, random_symbols(alphabet, len, rng)).expect("symbols from alphabet")
}

fn random_symbols(alphabet: &Alphabet, len: usize, rng: &mut CorpusRng) -> Vec<char> {
    (0..len)
        .map(|_| *alphabet.symbols().choose(rng).expect("non-empty alphabet"))
        .collect()
}

/// Eventually constant presentations: a few arbitrary words, then the last repeats.
pub fn stabilized_family(
    alphabet: &Alphabet,
    count: usize,
    rng: &mut CorpusRng,
) -> Vec<SequencePresentation> {
    (0..count)
        .map(|_| {
            let k = rng.gen_range(1..=5);
            let mut words: Vec<Word> = (0..k)
                .map(|_| random_finite_word(alphabet, 5, rng))
                .collect();
            if rng.gen_bool(0.3) {
                *words.last_mut().expect("k >= 1") = random_infinite_word(alphabet, rng);
            }
            SequencePresentation::explicit(words, true).expect("non-empty")
        })
        .collect()
}

/// Prefix schedules of random eventually periodic targets.
pub fn prefix_family(
    alphabet: &Alphabet,
    count: usize,
    rng: &mut CorpusRng,
) -> Vec<SequencePresentation> {
    (0..count)
        .map(|_| {
            let target = random_infinite_word(alphabet, rng);
            let lengths = LengthSchedule::new(rng.gen_range(1..=3), rng.gen_range(0..=3))
                .expect("slope at least 1");
            SequencePresentation::prefix_schedule(target, lengths).expect("infinite target")
        })
        .collect()
}

/// Probes for a limit: itself, its short prefixes, words that branch off it,
/// a different infinite word, and a few random words.
pub fn probe_set(limit: &Word, rng: &mut CorpusRng) -> Vec<Word> {
    let alphabet = limit.alphabet().clone();
    let mut probes = vec![limit.clone()];
    let reach = match limit.length() {
        ExtNat::Nat(l) => l.min(4),
        ExtNat::Infinity => 4,
    };
    for k in 0..=reach {
        let prefix = limit.take(k);
        if k < reach || !limit.is_finite() {
            probes.push(prefix.clone());
        }
        // branch off at position k with every other symbol
        let next = limit.symbol_at(k).ok();
        for &c in alphabet.symbols() {
            if Some(c) != next {
                let mut v = prefix.as_finite().expect("finite prefix").to_vec();
                v.push(c);
                probes.push(Word::finite(&alphabet, v).expect("symbols from alphabet"));
            }
        }
    }
    loop {
        let other = random_infinite_word(&alphabet, rng);
        if other != *limit {
            probes.push(other);
            break;
        }
    }
    probes.push(random_finite_word(&alphabet, 6, rng));
    probes.push(random_infinite_word(&alphabet, rng));
    probes.sort_by_key(|w| w.to_string());
    probes.dedup();
    probes
}

/// Chains presented in several shapes whose least upper bound lies above `b`.
///
/// Shapes: the constant-center chain at several coefficients, prefix
/// schedules of an infinite center (coefficient at least 2 so they ascend),
/// finite chains ending at `b`, chains climbing through the prefixes of the
/// center, and chains whose limit extends the center when the radius allows.
pub fn chains_above(b: &FormalBall) -> Vec<ChainPresentation> {
    let alphabet = b.center.alphabet().clone();
    let (x, s) = (&b.center, &b.radius);
    let mut out = Vec::new();
    let param = |centers: SequencePresentation, base: &Ratio, coeff: &str| {
        ChainPresentation::parametric(centers, base.clone(), coeff.parse().expect("coefficient"))
            .expect("valid chain shape")
    };
    let constant =
        |w: &Word| SequencePresentation::explicit(vec![w.clone()], true).expect("non-empty");

    match x.length() {
        ExtNat::Nat(l) => {
            for c in ["1/2", "1", "2", "3"] {
                out.push(param(constant(x), s, c));
            }
            // climb through every prefix of x, then stay at x
            let prefixes: Vec<Word> = (0..=l).map(|k| x.take(k)).collect();
            for c in ["2", "4"] {
                out.push(param(
                    SequencePresentation::explicit(prefixes.clone(), true).expect("non-empty"),
                    s,
                    c,
                ));
            }
            for k in 1..=3u64 {
                let mut balls: Vec<FormalBall> = (0..k)
                    .map(|j| FormalBall::new(x.clone(), s + &Ratio::pow2_neg(j)))
                    .collect();
                balls.push(b.clone());
                out.push(ChainPresentation::Finite(balls));
            }
            out.push(ChainPresentation::Finite(vec![b.clone()]));
            for &c in alphabet.symbols() {
                let mut v = x.as_finite().expect("finite").to_vec();
                // one-step extension y = xc: q_b(x, y) = 2^-(l+1)
                v.push(c);
                let y = Word::finite(&alphabet, v).expect("symbols from alphabet");
                if let Some(t) = s.checked_sub(&Ratio::pow2_neg(l + 1)) {
                    out.push(ChainPresentation::Finite(vec![
                        b.clone(),
                        FormalBall::new(y, t),
                    ]));
                }
                // infinite extension z = x c^w: q_b(x, z) = 2^-l
                let z = Word::periodic(&alphabet, x.as_finite().expect("finite").to_vec(), vec![c])
                    .expect("symbols from alphabet");
                if let Some(t) = s.checked_sub(&Ratio::pow2_neg(l)) {
                    for (sched, c) in [("n", "2"), ("2n", "2"), ("n+1", "3")] {
                        let lengths = LengthSchedule::parse(sched).expect("schedule");
                        out.push(param(
                            SequencePresentation::prefix_schedule(z.clone(), lengths)
                                .expect("infinite"),
                            &t,
                            c,
                        ));
                    }
                }
            }
        }
        ExtNat::Infinity => {
            for sched in ["n", "2n", "n+1", "3n+2"] {
                for c in ["2", "3"] {
                    let lengths = LengthSchedule::parse(sched).expect("schedule");
                    out.push(param(
                        SequencePresentation::prefix_schedule(x.clone(), lengths)
                            .expect("infinite"),
                        s,
                        c,
                    ));
                }
            }
            out.push(param(constant(x), s, "1"));
            for k in 1..=3u64 {
                let mut balls: Vec<FormalBall> = (0..k)
                    .map(|j| {
                        let r = s + &(&Ratio::integer(2) * &Ratio::pow2_neg(j));
                        FormalBall::new(x.take(j), r)
                    })
                    .collect();
                balls.push(b.clone());
                out.push(ChainPresentation::Finite(balls));
            }
        }
    }
    out
}

/// `chains_above(b)` restricted to chains that are valid and whose lub is above `b`.
pub fn valid_chains_above(b: &FormalBall) -> Result<Vec<ChainPresentation>, BallError> {
    let q = Metric::Qb;
    let mut out = Vec::new();
    for c in chains_above(b) {
        match lub_chain(&q, &c) {
            Ok(lub) if ball_leq(&q, b, &lub)? => out.push(c),
            Ok(_) | Err(BallError::NotAscending { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

/// A random partial order on `n` elements: a random relation compatible with
/// the index order, closed under transitivity.
pub fn random_poset(
    n: usize,
    density: f64,
    rng: &mut CorpusRng,
) -> Result<FinitePoset, OracleError> {
    let mut leq = vec![false; n * n];
    for i in 0..n {
        leq[i * n + i] = true;
        for j in i + 1..n {
            leq[i * n + j] = rng.gen_bool(density);
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if leq[i * n + k] && leq[k * n + j] {
                    leq[i * n + j] = true;
                }
            }
        }
    }
    // shuffle labels so the order is not aligned with label order
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let labels = (0..n).map(|i| format!("p{}", perm[i])).collect();
    FinitePoset::from_matrix(labels, leq, Exec::Sequential)
}

pub fn chain_poset(n: usize) -> FinitePoset {
    let leq = (0..n * n).map(|k| k / n <= k % n).collect();
    FinitePoset::from_matrix(
        (0..n).map(|i| format!("c{i}")).collect(),
        leq,
        Exec::Sequential,
    )
    .expect("a chain is a partial order")
}

pub fn antichain_poset(n: usize) -> FinitePoset {
    let leq = (0..n * n).map(|k| k / n == k % n).collect();
    FinitePoset::from_matrix(
        (0..n).map(|i| format!("a{i}")).collect(),
        leq,
        Exec::Sequential,
    )
    .expect("an antichain is a partial order")
}

pub fn diamond_poset() -> FinitePoset {
    FinitePoset::parse(DIAMOND).expect("diamond is a partial order")
}

pub const DIAMOND: &str = "element bot\nelement l\nelement r\nelement top\n\
leq bot l\nleq bot r\nleq l top\nleq r top\nleq bot top\n";

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Alphabet {
        Alphabet::parse("ab").unwrap()
    }

    #[test]
    fn corpus_sizes() {
        assert_eq!(finite_words(&ab(), 4).len(), 31);
        let corpus = word_corpus(&ab(), 4);
        assert_eq!(corpus.len(), 34);
        assert_eq!(ball_grid(&corpus, &grid_radii()).len(), 204);
        assert_eq!(periodic_extras(&Alphabet::parse("a").unwrap()).len(), 1);
    }

    #[test]
    fn generation_is_seeded() {
        let a = prefix_family(&ab(), 5, &mut rng(7));
        let b = prefix_family(&ab(), 5, &mut rng(7));
        assert_eq!(a, b);
        let a = stabilized_family(&ab(), 5, &mut rng(7));
        assert!(a.iter().all(|s| matches!(
            s,
            SequencePresentation::Explicit {
                stabilized: true,
                ..
            }
        )));
    }

    #[test]
    fn probes_cover_limit_and_branches() {
        let limit = Word::parse("(a)^w", &ab()).unwrap();
        let probes = probe_set(&limit, &mut rng(1));
        for s in ["(a)^w", "eps", "aa", "b", "ab", "aab"] {
            assert!(probes.contains(&Word::parse(s, &ab()).unwrap()), "{s}");
        }
        assert!(probes.iter().filter(|w| !w.is_finite()).count() >= 2);
    }

    #[test]
    fn every_grid_ball_has_ten_chains() {
        let grid = ball_grid(&word_corpus(&ab(), 4), &grid_radii());
        for b in &grid {
            let chains = valid_chains_above(b).unwrap();
            assert!(chains.len() >= 10, "{b}: {}", chains.len());
        }
    }

    #[test]
    fn random_posets_validate() {
        let mut r = rng(3);
        for n in 1..=12 {
            assert_eq!(random_poset(n, 0.3, &mut r).unwrap().len(), n);
        }
        assert_eq!(chain_poset(4).len(), 4);
        assert_eq!(antichain_poset(3).len(), 3);
        assert_eq!(diamond_poset().len(), 4);
    }
}
