//! Way-below verdicts on `(BΣ^∞, ⊑_{q_b})`.
//!
//! Two sources of information are available:
//!
//! * a necessary condition: `(x,r) ≪_d (y,s)` implies `d(x,y) < r - s`, so a
//!   pair with `d(x,y) ≥ r - s` is refuted;
//! * two sufficient families for `q_b`: `(x, u+v) ≪ (x, u)` for finite `x` and
//!   `v > 0` (P1), and `(take(x,n), ρ) ≪ (x, r)` for infinite `x` and
//!   `ρ > r + 2^-n` (P2), closed under `w ⊑ p ≪ q ⊑ z ⇒ w ≪ z`.
//!
//! Everything else is [`WayBelowVerdict::Unknown`].

use std::fmt;

use crate::metrics::{qb, Distance, Metric};
use crate::ratio::{format_gap, Gap, Ratio};
use crate::words::{ExtNat, Word, WordError};

use super::chain::lub_chain;
use super::{ball_leq, BallError, ChainPresentation, FormalBall, SequencePresentation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pattern {
    /// Same finite center, larger radius.
    P1,
    /// Prefix of length `n` of an infinite center, radius above `r + 2^-n`.
    P2 { n: u64 },
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pattern::P1 => f.write_str("P1"),
            Pattern::P2 { n } => write!(f, "P2(n={n})"),
        }
    }
}

/// How a way-below pair was certified. `via` is the intermediate ball `p`
/// with `b1 ⊑ p ≪ b2` when the order closure was needed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub pattern: Pattern,
    pub via: Option<FormalBall>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WayBelowVerdict {
    CertifiedBelow(Certificate),
    /// `d(x,y) ≥ r - s`.
    Refuted {
        distance: Ratio,
        gap: Gap,
    },
    Unknown,
}

impl WayBelowVerdict {
    pub fn is_certified(&self) -> bool {
        matches!(self, WayBelowVerdict::CertifiedBelow(_))
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, WayBelowVerdict::Refuted { .. })
    }
}

impl fmt::Display for WayBelowVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WayBelowVerdict::CertifiedBelow(c) => {
                write!(f, "CertifiedBelow({})", c.pattern)?;
                if let Some(p) = &c.via {
                    write!(f, " via {p}")?;
                }
                Ok(())
            }
            WayBelowVerdict::Refuted { distance, gap } => {
                write!(f, "Refuted(d={distance}, r-s={})", format_gap(gap))
            }
            WayBelowVerdict::Unknown => f.write_str("Unknown"),
        }
    }
}

pub fn way_below_refute<D: Distance + ?Sized>(
    d: &D,
    b1: &FormalBall,
    b2: &FormalBall,
) -> Result<WayBelowVerdict, WordError> {
    let distance = d.distance(&b1.center, &b2.center)?;
    let gap = b1.radius.signed_sub(&b2.radius);
    if distance.to_signed() >= gap {
        Ok(WayBelowVerdict::Refuted { distance, gap })
    } else {
        Ok(WayBelowVerdict::Unknown)
    }
}

/// Smallest `n` with `2^-n < bound`; `bound` must be positive.
fn first_power_strictly_below(bound: &Ratio) -> u64 {
    let mut n = 0;
    while Ratio::pow2_neg(n) >= *bound {
        n += 1;
    }
    n
}

/// The "effective distance" of `x1` to the infinite word `x2` through its
/// finite prefixes: `2^-ℓ(x1)` for a finite prefix, `1` otherwise.
fn prefix_cost(x1: &Word, x2: &Word) -> Result<Ratio, WordError> {
    Ok(match x1.length() {
        ExtNat::Nat(l) if x1.is_prefix_of(x2)? => Ratio::pow2_neg(l),
        _ => Ratio::one(),
    })
}

pub fn way_below_sufficient_qb(
    b1: &FormalBall,
    b2: &FormalBall,
) -> Result<WayBelowVerdict, WordError> {
    let (x1, x2) = (&b1.center, &b2.center);
    let Some(gap) = b1.radius.checked_sub(&b2.radius).filter(|g| !g.is_zero()) else {
        return Ok(WayBelowVerdict::Unknown);
    };
    let certified = |pattern, via| {
        Ok(WayBelowVerdict::CertifiedBelow(Certificate {
            pattern,
            via,
        }))
    };
    match x2.length() {
        ExtNat::Nat(_) => {
            if x1.equals(x2)? {
                return certified(Pattern::P1, None);
            }
            // p = (x2, r1 - q_b(x1,x2)) sits above b1 and strictly above b2's radius
            let dist = qb(x1, x2)?;
            if dist < gap {
                let via = FormalBall::new(x2.clone(), b1.radius.saturating_sub(&dist));
                return certified(Pattern::P1, Some(via));
            }
            Ok(WayBelowVerdict::Unknown)
        }
        ExtNat::Infinity => {
            let cost = prefix_cost(x1, x2)?;
            if cost >= gap {
                return Ok(WayBelowVerdict::Unknown);
            }
            match x1.length() {
                ExtNat::Nat(l) if x1.is_prefix_of(x2)? => certified(Pattern::P2 { n: l }, None),
                _ => {
                    // p = (take(x2, n), r1 - 1) with 1 + 2^-n < gap
                    let slack = gap.checked_sub(&Ratio::one()).expect("cost is 1 here");
                    let n = first_power_strictly_below(&slack);
                    let via = FormalBall::new(x2.take(n), b1.radius.saturating_sub(&Ratio::one()));
                    certified(Pattern::P2 { n }, Some(via))
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WitnessVerdict {
    WitnessFound {
        index: u64,
        element: FormalBall,
    },
    NoWitness,
    /// `b2 ⋢ ⊔D`, so `D` says nothing about `b1 ≪ b2`.
    NotAboveB2,
}

/// An index `N` such that if any element of the parametric chain lies above
/// `b1`, one with index `≤ N` does.
///
/// Element `n` is `(x_n, s + c·2^-n)` and lies above `b1 = (x, r)` iff
/// `q_b(x, x_n) + c·2^-n ≤ r - s`. Past the point where `x_n` stops changing
/// (explicit centers) or `x ⊑ x_n` is settled (prefix schedules) both sides
/// are explicit in `n`, which gives the bound below.
pub fn witness_scan_bound(
    b1: &FormalBall,
    centers: &SequencePresentation,
    base: &Ratio,
    coeff: &Ratio,
) -> Result<u64, WordError> {
    let Some(avail) = b1.radius.checked_sub(base).filter(|a| !a.is_zero()) else {
        return Ok(0);
    };
    let x = &b1.center;
    // smallest n >= from with c·2^-n <= avail - fixed, if fixed < avail
    let settle = |fixed: &Ratio, from: u64| -> Option<u64> {
        avail
            .checked_sub(fixed)
            .and_then(|room| Ratio::first_power_below(coeff, &room, from))
    };
    Ok(match centers {
        SequencePresentation::Explicit {
            words,
            stabilized: true,
        } => {
            let last = words.len() as u64 - 1;
            let fixed = qb(x, &words[last as usize])?;
            settle(&fixed, last).unwrap_or(last)
        }
        SequencePresentation::Explicit { words, .. } => {
            // residue class j repeats w_j with shrinking radius: monotone per class
            let m = words.len() as u64;
            let mut bound = m - 1;
            for w in words {
                if let Some(n) = settle(&qb(x, w)?, 0) {
                    bound = bound.max(n + m);
                }
            }
            bound
        }
        SequencePresentation::PrefixSchedule { target, lengths } => match x.length() {
            ExtNat::Nat(l) if x.is_prefix_of(target)? => {
                let from = lengths.first_index_at_least(l);
                let head = Ratio::pow2_neg(l);
                match head.cmp(&avail) {
                    std::cmp::Ordering::Less => settle(&head, from).expect("head < avail"),
                    // c·2^-n ≤ 2^-f(n) holds on an initial segment of indices
                    std::cmp::Ordering::Equal => from,
                    // once 2^-n drops below head - avail nothing more can fit
                    std::cmp::Ordering::Greater => {
                        let excess = head.checked_sub(&avail).expect("head > avail");
                        from.max(first_power_strictly_below(&excess))
                    }
                }
            }
            _ => settle(&Ratio::one(), 0).unwrap_or(0),
        },
    })
}

/// Searches the presented directed set `D` for an element above `b1`,
/// provided `b2 ⊑ ⊔D`.
pub fn way_below_witness_check(
    b1: &FormalBall,
    b2: &FormalBall,
    chain: &ChainPresentation,
) -> Result<WitnessVerdict, BallError> {
    let lub = lub_chain(&Metric::Qb, chain)?;
    witness_check_with_lub(b1, b2, chain, &lub)
}

/// [`way_below_witness_check`] with `⊔D` already computed.
pub fn witness_check_with_lub(
    b1: &FormalBall,
    b2: &FormalBall,
    chain: &ChainPresentation,
    lub: &FormalBall,
) -> Result<WitnessVerdict, BallError> {
    let q = Metric::Qb;
    if !ball_leq(&q, b2, lub)? {
        return Ok(WitnessVerdict::NotAboveB2);
    }
    let last = match chain {
        ChainPresentation::Finite(balls) => balls.len() as u64 - 1,
        ChainPresentation::Parametric {
            centers,
            base,
            coeff,
        } => witness_scan_bound(b1, centers, base, coeff)?,
    };
    for index in 0..=last {
        let element = chain.element(index).expect("index within chain");
        if ball_leq(&q, b1, &element)? {
            return Ok(WitnessVerdict::WitnessFound { index, element });
        }
    }
    Ok(WitnessVerdict::NoWitness)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Directedness {
    /// No elements were given.
    Vacuous,
    /// A ball certified way-below `b` that lies above every given element.
    UpperBoundInDownset(FormalBall),
    /// The element that the candidate bound fails to dominate, and the candidate.
    Fail(FormalBall, FormalBall),
}

/// Produces a common upper bound inside `⇓b` for elements certified way-below `b`.
///
/// For a finite center the bound is `(x, r + ε)` with `ε` half the smallest
/// slack `r_i - r - q_b(y_i, x)`. For an infinite center it is the first
/// element `(take(x,k), r + 2·2^-k)` of the approximation chain above every
/// input.
pub fn downset_directedness_check(
    b: &FormalBall,
    elems: &[FormalBall],
) -> Result<Directedness, BallError> {
    if elems.is_empty() {
        return Ok(Directedness::Vacuous);
    }
    let mut slacks = Vec::with_capacity(elems.len());
    for e in elems {
        if !way_below_sufficient_qb(e, b)?.is_certified() {
            return Err(BallError::PreconditionViolated(format!(
                "{e} is not certified way-below {b}"
            )));
        }
        let cost = match b.center.length() {
            ExtNat::Nat(_) => qb(&e.center, &b.center)?,
            ExtNat::Infinity => prefix_cost(&e.center, &b.center)?,
        };
        let slack = e
            .radius
            .checked_sub(&b.radius)
            .and_then(|g| g.checked_sub(&cost))
            .expect("certified elements have positive slack");
        slacks.push(slack);
    }
    let min_slack = slacks.iter().min().expect("non-empty").clone();
    let q = Metric::Qb;
    let candidate = match b.center.length() {
        ExtNat::Nat(_) => FormalBall::new(b.center.clone(), &b.radius + &min_slack.half()),
        ExtNat::Infinity => {
            let longest_prefix = elems
                .iter()
                .filter_map(|e| e.center.length().finite())
                .max()
                .unwrap_or(0);
            let limit = longest_prefix.max(
                Ratio::first_power_below(&Ratio::one(), &min_slack.half(), 0).expect("slack > 0"),
            );
            let at = |k: u64| {
                FormalBall::new(
                    b.center.take(k),
                    &b.radius + &(&Ratio::integer(2) * &Ratio::pow2_neg(k)),
                )
            };
            let mut found = at(limit);
            for k in 0..limit {
                let c = at(k);
                if elems.iter().all(|e| ball_leq(&q, e, &c).unwrap_or(false)) {
                    found = c;
                    break;
                }
            }
            found
        }
    };
    for e in elems {
        if !ball_leq(&q, e, &candidate)? {
            return Ok(Directedness::Fail(e.clone(), candidate));
        }
    }
    if !way_below_sufficient_qb(&candidate, b)?.is_certified() {
        return Ok(Directedness::Fail(b.clone(), candidate));
    }
    Ok(Directedness::UpperBoundInDownset(candidate))
}
