//! Finite presentations of infinite sequences of words and chains of balls,
//! with their line-oriented text forms.

use std::fmt;

use crate::ratio::Ratio;
use crate::words::{Alphabet, ExtNat, Word};

use super::{BallError, FormalBall};

/// Strictly increasing affine length schedule `n ↦ slope·n + offset`, `slope ≥ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LengthSchedule {
    slope: u64,
    offset: u64,
}

impl LengthSchedule {
    pub fn new(slope: u64, offset: u64) -> Result<Self, BallError> {
        if slope == 0 {
            return Err(BallError::MalformedPresentation(
                "length schedule must be strictly increasing".into(),
            ));
        }
        Ok(LengthSchedule { slope, offset })
    }

    /// `n ↦ n`.
    pub fn identity() -> Self {
        LengthSchedule {
            slope: 1,
            offset: 0,
        }
    }

    pub fn slope(&self) -> u64 {
        self.slope
    }

    pub fn offset(&self) -> u64 {
        self.offset
    }

    pub fn at(&self, n: u64) -> u64 {
        self.slope * n + self.offset
    }

    /// Smallest `n` with `at(n) ≥ len`.
    pub fn first_index_at_least(&self, len: u64) -> u64 {
        len.saturating_sub(self.offset).div_ceil(self.slope)
    }

    /// Parses `n`, `2n`, `n+3`, `2n+1`.
    pub fn parse(text: &str) -> Result<Self, BallError> {
        let err = || {
            BallError::Parse(format!(
                "bad length schedule `{text}` (expected e.g. `n` or `2n+1`)"
            ))
        };
        let t = text.trim();
        let (lin, off) = match t.split_once('+') {
            Some((l, o)) => (l.trim(), o.trim().parse::<u64>().map_err(|_| err())?),
            None => (t, 0),
        };
        let slope = match lin.strip_suffix('n').ok_or_else(err)? {
            "" => 1,
            k => k.parse::<u64>().map_err(|_| err())?,
        };
        LengthSchedule::new(slope, off)
    }
}

impl fmt::Display for LengthSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.slope != 1 {
            write!(f, "{}", self.slope)?;
        }
        f.write_str("n")?;
        if self.offset != 0 {
            write!(f, "+{}", self.offset)?;
        }
        Ok(())
    }
}

/// A finitely presented infinite sequence of words `(x_n)_{n ≥ 0}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SequencePresentation {
    /// With `stabilized`, the last word repeats forever; otherwise the whole
    /// list repeats cyclically.
    Explicit { words: Vec<Word>, stabilized: bool },
    /// `x_n = take(target, lengths(n))` for an infinite target.
    PrefixSchedule {
        target: Word,
        lengths: LengthSchedule,
    },
}

impl SequencePresentation {
    pub fn explicit(words: Vec<Word>, stabilized: bool) -> Result<Self, BallError> {
        let s = SequencePresentation::Explicit { words, stabilized };
        s.validate()?;
        Ok(s)
    }

    pub fn prefix_schedule(target: Word, lengths: LengthSchedule) -> Result<Self, BallError> {
        let s = SequencePresentation::PrefixSchedule { target, lengths };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<(), BallError> {
        match self {
            SequencePresentation::Explicit { words, .. } => {
                let first = words.first().ok_or_else(|| {
                    BallError::MalformedPresentation("explicit sequence is empty".into())
                })?;
                if words.iter().any(|w| w.alphabet() != first.alphabet()) {
                    return Err(crate::words::WordError::AlphabetMismatch.into());
                }
                Ok(())
            }
            SequencePresentation::PrefixSchedule { target, lengths } => {
                if target.length() != ExtNat::Infinity {
                    return Err(BallError::MalformedPresentation(format!(
                        "prefix schedule target `{target}` must be infinite"
                    )));
                }
                if lengths.slope == 0 {
                    return Err(BallError::MalformedPresentation(
                        "length schedule must be strictly increasing".into(),
                    ));
                }
                Ok(())
            }
        }
    }

    /// The `n`-th term `x_n`.
    pub fn term(&self, n: u64) -> Word {
        match self {
            SequencePresentation::Explicit { words, stabilized } => {
                let len = words.len() as u64;
                let i = if *stabilized { n.min(len - 1) } else { n % len };
                words[i as usize].clone()
            }
            SequencePresentation::PrefixSchedule { target, lengths } => target.take(lengths.at(n)),
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        match self {
            SequencePresentation::Explicit { words, .. } => words[0].alphabet(),
            SequencePresentation::PrefixSchedule { target, .. } => target.alphabet(),
        }
    }

    /// Parses `explicit: w1 w2 ...` (cyclic; a trailing `...` marks the last
    /// word as repeated forever) or `prefix: target=<word> lengths=<schedule>`.
    pub fn parse(text: &str, alphabet: &Alphabet) -> Result<Self, BallError> {
        let t = text.trim();
        if let Some(rest) = t.strip_prefix("explicit:") {
            let mut tokens: Vec<&str> = rest.split_whitespace().collect();
            let stabilized = tokens.last() == Some(&"...");
            if stabilized {
                tokens.pop();
            }
            let words = tokens
                .iter()
                .map(|w| Word::parse(w, alphabet))
                .collect::<Result<Vec<_>, _>>()?;
            if words.is_empty() {
                return Err(BallError::Parse("explicit sequence lists no words".into()));
            }
            return SequencePresentation::explicit(words, stabilized);
        }
        if let Some(rest) = t.strip_prefix("prefix:") {
            let kv = key_values(rest)?;
            let target = Word::parse(required(&kv, "target")?, alphabet)?;
            let lengths = match lookup(&kv, "lengths") {
                Some(l) => LengthSchedule::parse(l)?,
                None => LengthSchedule::identity(),
            };
            return SequencePresentation::prefix_schedule(target, lengths);
        }
        Err(BallError::Parse(format!(
            "sequence `{t}` must start with `explicit:` or `prefix:`"
        )))
    }
}

impl fmt::Display for SequencePresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SequencePresentation::Explicit { words, stabilized } => {
                f.write_str("explicit:")?;
                for w in words {
                    write!(f, " {w}")?;
                }
                if *stabilized {
                    f.write_str(" ...")?;
                }
                Ok(())
            }
            SequencePresentation::PrefixSchedule { target, lengths } => {
                write!(f, "prefix: target={target} lengths={lengths}")
            }
        }
    }
}

/// A finitely presented ascending chain of formal balls.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ChainPresentation {
    Finite(Vec<FormalBall>),
    /// Elements `(x_n, base + coeff·2^-n)` for `n ≥ 0`; the radius infimum is `base`.
    Parametric {
        centers: SequencePresentation,
        base: Ratio,
        coeff: Ratio,
    },
}

impl ChainPresentation {
    pub fn parametric(
        centers: SequencePresentation,
        base: Ratio,
        coeff: Ratio,
    ) -> Result<Self, BallError> {
        let c = ChainPresentation::Parametric {
            centers,
            base,
            coeff,
        };
        c.validate_shape()?;
        Ok(c)
    }

    pub(crate) fn validate_shape(&self) -> Result<(), BallError> {
        match self {
            ChainPresentation::Finite(balls) if balls.is_empty() => Err(
                BallError::MalformedPresentation("finite chain is empty".into()),
            ),
            ChainPresentation::Finite(_) => Ok(()),
            ChainPresentation::Parametric { centers, coeff, .. } => {
                centers.validate()?;
                if coeff.is_zero() {
                    return Err(BallError::MalformedPresentation(
                        "radius coefficient must be positive".into(),
                    ));
                }
                Ok(())
            }
        }
    }

    /// Element `n` of a parametric chain, or of a finite chain when `n` is in range.
    pub fn element(&self, n: u64) -> Option<FormalBall> {
        match self {
            ChainPresentation::Finite(balls) => balls.get(n as usize).cloned(),
            ChainPresentation::Parametric {
                centers,
                base,
                coeff,
            } => Some(FormalBall::new(
                centers.term(n),
                base + &(coeff * &Ratio::pow2_neg(n)),
            )),
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ChainPresentation::Finite(_))
    }

    /// Parses `finite: (w1, r1) (w2, r2) ...`,
    /// `param: target=<word> lengths=<schedule> radii=<s>+<c>*2^-n`, or
    /// `param: centers=<w1>,<w2>,... radii=<s>+<c>*2^-n` (last center repeated).
    pub fn parse(text: &str, alphabet: &Alphabet) -> Result<Self, BallError> {
        let t = text.trim();
        if let Some(rest) = t.strip_prefix("finite:") {
            let balls = split_balls(rest)?
                .into_iter()
                .map(|b| FormalBall::parse(b, alphabet))
                .collect::<Result<Vec<_>, _>>()?;
            let chain = ChainPresentation::Finite(balls);
            chain.validate_shape()?;
            return Ok(chain);
        }
        if let Some(rest) = t.strip_prefix("param:") {
            let kv = key_values(rest)?;
            let centers = match (lookup(&kv, "target"), lookup(&kv, "centers")) {
                (Some(target), None) => {
                    let lengths = match lookup(&kv, "lengths") {
                        Some(l) => LengthSchedule::parse(l)?,
                        None => LengthSchedule::identity(),
                    };
                    SequencePresentation::prefix_schedule(Word::parse(target, alphabet)?, lengths)?
                }
                (None, Some(list)) => {
                    let words = list
                        .split(',')
                        .map(|w| Word::parse(w, alphabet))
                        .collect::<Result<Vec<_>, _>>()?;
                    SequencePresentation::explicit(words, true)?
                }
                _ => {
                    return Err(BallError::Parse(
                        "parametric chain needs exactly one of `target=` or `centers=`".into(),
                    ))
                }
            };
            let (base, coeff) = parse_radius_rule(required(&kv, "radii")?)?;
            return ChainPresentation::parametric(centers, base, coeff);
        }
        Err(BallError::Parse(format!(
            "chain `{t}` must start with `finite:` or `param:`"
        )))
    }
}

impl fmt::Display for ChainPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChainPresentation::Finite(balls) => {
                f.write_str("finite:")?;
                for b in balls {
                    write!(f, " {b}")?;
                }
                Ok(())
            }
            ChainPresentation::Parametric {
                centers,
                base,
                coeff,
            } => {
                f.write_str("param: ")?;
                match centers {
                    SequencePresentation::PrefixSchedule { target, lengths } => {
                        write!(f, "target={target} lengths={lengths}")?
                    }
                    SequencePresentation::Explicit { words, .. } => {
                        let list: Vec<String> = words.iter().map(|w| w.to_string()).collect();
                        write!(f, "centers={}", list.join(","))?
                    }
                }
                write!(f, " radii={base}+{coeff}*2^-n")
            }
        }
    }
}

fn parse_radius_rule(text: &str) -> Result<(Ratio, Ratio), BallError> {
    let err = || BallError::Parse(format!("bad radius rule `{text}` (expected `s+c*2^-n`)"));
    let (s, rest) = text.split_once('+').ok_or_else(err)?;
    let c = rest.strip_suffix("*2^-n").ok_or_else(err)?;
    let s: Ratio = s.parse().map_err(|_| err())?;
    let c: Ratio = c.parse().map_err(|_| err())?;
    Ok((s, c))
}

fn key_values(text: &str) -> Result<Vec<(&str, &str)>, BallError> {
    text.split_whitespace()
        .map(|tok| {
            tok.split_once('=')
                .ok_or_else(|| BallError::Parse(format!("expected `key=value`, found `{tok}`")))
        })
        .collect()
}

fn lookup<'a>(kv: &[(&str, &'a str)], key: &str) -> Option<&'a str> {
    kv.iter().find(|(k, _)| *k == key).map(|(_, v)| *v)
}

fn required<'a>(kv: &[(&str, &'a str)], key: &str) -> Result<&'a str, BallError> {
    lookup(kv, key).ok_or_else(|| BallError::Parse(format!("missing `{key}=`")))
}

/// Splits `(w1, r1) (w2, r2)` into ball literals by parenthesis depth.
fn split_balls(text: &str) -> Result<Vec<&str>, BallError> {
    let mut out = Vec::new();
    let mut depth = 0usize;
    let mut start = None;
    for (i, c) in text.char_indices() {
        match c {
            '(' => {
                if depth == 0 {
                    start = Some(i);
                }
                depth += 1;
            }
            ')' => {
                depth = depth
                    .checked_sub(1)
                    .ok_or_else(|| BallError::Parse(format!("unbalanced `)` at {i}")))?;
                if depth == 0 {
                    out.push(&text[start.take().expect("open paren recorded")..=i]);
                }
            }
            c if depth == 0 && !c.is_whitespace() => {
                return Err(BallError::Parse(format!("unexpected `{c}` between balls")))
            }
            _ => {}
        }
    }
    if depth != 0 {
        return Err(BallError::Parse("unbalanced `(`".into()));
    }
    Ok(out)
}
