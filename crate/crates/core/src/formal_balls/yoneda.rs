//! Left K-Cauchy sequences in `(Σ^∞, q_b)` and their Yoneda-limits.
//!
//! A left K-Cauchy sequence under `q_b` is eventually prefix-ascending, because
//! `q_b(x, y) < 1` forces `x ⊑ y`. Either the tail becomes constant, and the
//! constant is the limit, or it grows without bound inside one infinite word,
//! and that word is the limit.

use crate::metrics::{qb, AxiomReport, Distance, Violation};
use crate::ratio::Ratio;
use crate::words::Word;

use super::{BallError, SequencePresentation};

pub fn is_left_k_cauchy_qb(seq: &SequencePresentation) -> Result<bool, BallError> {
    seq.validate()?;
    Ok(match seq {
        SequencePresentation::Explicit {
            stabilized: true, ..
        } => true,
        // a cyclic list is Cauchy only when every cycle is constant
        SequencePresentation::Explicit { words, .. } => words.iter().all(|w| *w == words[0]),
        SequencePresentation::PrefixSchedule { .. } => true,
    })
}

pub fn yoneda_limit_qb(seq: &SequencePresentation) -> Result<Word, BallError> {
    if !is_left_k_cauchy_qb(seq)? {
        return Err(BallError::NotLeftKCauchy);
    }
    Ok(match seq {
        SequencePresentation::Explicit { words, .. } => words.last().expect("validated").clone(),
        SequencePresentation::PrefixSchedule { target, .. } => target.clone(),
    })
}

/// `inf_n sup_{m ≥ n} q_b(x_m, y)`, evaluated from the shape of the tail.
pub fn tail_limit_qb(seq: &SequencePresentation, probe: &Word) -> Result<Ratio, BallError> {
    if !is_left_k_cauchy_qb(seq)? {
        return Err(BallError::NotLeftKCauchy);
    }
    match seq {
        SequencePresentation::Explicit { words, .. } => {
            Ok(qb(words.last().expect("validated"), probe)?)
        }
        SequencePresentation::PrefixSchedule { target, .. } => {
            // sup over the tail is 2^-lengths(n) when probe = target (inf 0),
            // and 1 otherwise once x_m leaves the common prefix with probe
            Ok(if target.equals(probe)? {
                Ratio::zero()
            } else {
                Ratio::one()
            })
        }
    }
}

/// Compares `d(limit, y)` against the tail value for every probe `y`.
pub fn verify_yoneda_limit<D: Distance + ?Sized>(
    d: &D,
    seq: &SequencePresentation,
    limit: &Word,
    probes: &[Word],
) -> Result<AxiomReport, BallError> {
    let mut violations = Vec::new();
    for y in probes {
        let tail = tail_limit_qb(seq, y)?;
        let direct = d.distance(limit, y)?;
        if tail != direct {
            violations.push(Violation::new(
                "yoneda-limit",
                vec![seq.to_string(), limit.to_string(), y.to_string()],
                format!("inf-sup = {tail} but d(limit, probe) = {direct}"),
            ));
        }
    }
    Ok(AxiomReport::new(probes.len(), violations))
}
