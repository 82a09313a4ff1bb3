//! The poset of formal balls `(x, r)` ordered by `(x,r) ⊑_d (y,s) ⇔ d(x,y) ≤ r - s`.
//!
//! Directed sets are handled through finite presentations: finite chains and
//! parametric chains `(x_n, s + c·2^-n)` whose radius infimum `s` is known in
//! closed form. Way-below is not decidable in general on this poset, so
//! verdicts are three-valued (see [`WayBelowVerdict`]).

use std::fmt;

use crate::metrics::Distance;
use crate::ratio::Ratio;
use crate::words::{Alphabet, Word, WordError};

mod chain;
mod presentation;
mod way_below;
mod yoneda;

pub use chain::{approximation_chain, lub_chain};
pub use presentation::{ChainPresentation, LengthSchedule, SequencePresentation};
pub use way_below::{
    downset_directedness_check, way_below_refute, way_below_sufficient_qb, way_below_witness_check,
    witness_check_with_lub, witness_scan_bound, Certificate, Directedness, Pattern,
    WayBelowVerdict, WitnessVerdict,
};
pub use yoneda::{is_left_k_cauchy_qb, tail_limit_qb, verify_yoneda_limit, yoneda_limit_qb};

/// Number of consecutive pairs checked when validating a parametric chain.
pub const VALIDATION_HORIZON: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BallError {
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("malformed presentation: {0}")]
    MalformedPresentation(String),
    #[error("chain is not ascending at index {index}")]
    NotAscending { index: usize },
    #[error("sequence is not left K-Cauchy")]
    NotLeftKCauchy,
    #[error("metric `{0}` is not supported here")]
    UnsupportedMetric(String),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl BallError {
    /// Stable error name, as reported by the command-line tool.
    pub fn name(&self) -> &'static str {
        match self {
            BallError::Word(WordError::AlphabetMismatch) => "AlphabetMismatch",
            BallError::Word(WordError::Parse { .. }) => "ParseError",
            BallError::Word(_) => "WordError",
            BallError::MalformedPresentation(_) => "MalformedPresentation",
            BallError::NotAscending { .. } => "NotAscending",
            BallError::NotLeftKCauchy => "NotLeftKCauchy",
            BallError::UnsupportedMetric(_) => "UnsupportedMetric",
            BallError::PreconditionViolated(_) => "PreconditionViolated",
            BallError::Parse(_) => "ParseError",
        }
    }

    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            BallError::Parse(_)
                | BallError::Word(WordError::Parse { .. })
                | BallError::Word(WordError::UnknownSymbol(_))
                | BallError::Word(WordError::EmptyPeriod)
                | BallError::Word(WordError::InvalidAlphabet(_))
        )
    }
}

/// A formal ball: a center word and a non-negative radius.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FormalBall {
    pub center: Word,
    pub radius: Ratio,
}

impl FormalBall {
    pub fn new(center: Word, radius: Ratio) -> Self {
        FormalBall { center, radius }
    }

    /// Parses `(word, p/q)`.
    pub fn parse(text: &str, alphabet: &Alphabet) -> Result<Self, BallError> {
        let t = text.trim();
        let inner = t
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .ok_or_else(|| {
                BallError::Parse(format!("ball literal `{t}` must be `(word, radius)`"))
            })?;
        let (w, r) = inner
            .rsplit_once(',')
            .ok_or_else(|| BallError::Parse(format!("ball literal `{t}` lacks a radius")))?;
        let center = Word::parse(w, alphabet)?;
        let radius = r
            .trim()
            .parse()
            .map_err(|e| BallError::Parse(format!("{e}")))?;
        Ok(FormalBall { center, radius })
    }
}

impl fmt::Display for FormalBall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.center, self.radius)
    }
}

impl fmt::Debug for FormalBall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `b1 ⊑_d b2`, i.e. `d(x, y) ≤ r - s`; false whenever `s > r`.
pub fn ball_leq<D: Distance + ?Sized>(
    d: &D,
    b1: &FormalBall,
    b2: &FormalBall,
) -> Result<bool, WordError> {
    if b2.radius > b1.radius {
        return Ok(false);
    }
    let dist = d.distance(&b1.center, &b2.center)?;
    Ok(&dist + &b2.radius <= b1.radius)
}
