use crate::metrics::Distance;
use crate::ratio::Ratio;
use crate::words::ExtNat;

use super::yoneda::yoneda_limit_qb;
use super::{
    ball_leq, BallError, ChainPresentation, FormalBall, LengthSchedule, SequencePresentation,
    VALIDATION_HORIZON,
};

/// Least upper bound `(z, s)` of a presented chain: `s` is the radius
/// infimum and `z` the limit of the centers.
///
/// Only distances whose chain limits are prefix-unions are accepted
/// (`q_b` and the Baire metric). Parametric chains are checked to ascend on
/// their first [`VALIDATION_HORIZON`] steps.
pub fn lub_chain<D: Distance + ?Sized>(
    d: &D,
    chain: &ChainPresentation,
) -> Result<FormalBall, BallError> {
    if !d.has_prefix_limits() {
        return Err(BallError::UnsupportedMetric(d.label()));
    }
    chain.validate_shape()?;
    match chain {
        ChainPresentation::Finite(balls) => {
            for (i, pair) in balls.windows(2).enumerate() {
                if !ball_leq(d, &pair[0], &pair[1])? {
                    return Err(BallError::NotAscending { index: i });
                }
            }
            Ok(balls.last().expect("validated non-empty").clone())
        }
        ChainPresentation::Parametric { centers, base, .. } => {
            let mut prev = chain.element(0).expect("parametric chains are infinite");
            for n in 1..=VALIDATION_HORIZON as u64 {
                let next = chain.element(n).expect("parametric chains are infinite");
                if !ball_leq(d, &prev, &next)? {
                    return Err(BallError::NotAscending {
                        index: n as usize - 1,
                    });
                }
                prev = next;
            }
            let center = yoneda_limit_qb(centers).map_err(|e| match e {
                BallError::NotLeftKCauchy => {
                    BallError::MalformedPresentation("chain centers do not converge".into())
                }
                other => other,
            })?;
            Ok(FormalBall::new(center, base.clone()))
        }
    }
}

/// The canonical cofinal chain of balls way-below `b` with least upper bound `b`.
///
/// A finite center `x` gives `(x, r + 2^-n)`. An infinite center gives
/// `(take(x, n), r + 2·2^-n)`; the factor 2 keeps the distance to the
/// center strictly under the radius gap, `q_b(take(x,n), x) = 2^-n < 2·2^-n`.
pub fn approximation_chain(b: &FormalBall) -> ChainPresentation {
    let (centers, coeff) = match b.center.length() {
        ExtNat::Nat(_) => (
            SequencePresentation::Explicit {
                words: vec![b.center.clone()],
                stabilized: true,
            },
            Ratio::one(),
        ),
        ExtNat::Infinity => (
            SequencePresentation::PrefixSchedule {
                target: b.center.clone(),
                lengths: LengthSchedule::identity(),
            },
            Ratio::integer(2),
        ),
    };
    ChainPresentation::Parametric {
        centers,
        base: b.radius.clone(),
        coeff,
    }
}
