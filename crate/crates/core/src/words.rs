//! Finite and eventually-periodic infinite words over a declared alphabet.
//!
//! An infinite word is stored as `pre · period^ω`. Restricting infinite words
//! to this shape makes equality, the prefix order and longest common prefixes
//! exactly decidable: two eventually periodic words that agree on their first
//! `max(|pre1|, |pre2|) + lcm(|period1|, |period2|)` symbols agree everywhere.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::ratio::lcm_u64;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WordError {
    #[error("words are over different alphabets")]
    AlphabetMismatch,
    #[error("symbol `{0}` is not in the alphabet")]
    UnknownSymbol(char),
    #[error("index {index} out of range for word of length {len}")]
    IndexOutOfRange { index: u64, len: u64 },
    #[error("the period of an infinite word must be non-empty")]
    EmptyPeriod,
    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

/// A natural number or infinity. `Nat(n) < Infinity` for every `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtNat {
    Nat(u64),
    Infinity,
}

impl ExtNat {
    pub fn is_finite(self) -> bool {
        matches!(self, ExtNat::Nat(_))
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            ExtNat::Nat(n) => Some(n),
            ExtNat::Infinity => None,
        }
    }
}

impl fmt::Display for ExtNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtNat::Nat(n) => write!(f, "{n}"),
            ExtNat::Infinity => f.write_str("inf"),
        }
    }
}

/// An ordered, duplicate-free, non-empty set of single-character symbols.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Alphabet(Arc<[char]>);

impl Alphabet {
    pub fn new(symbols: impl IntoIterator<Item = char>) -> Result<Self, WordError> {
        let symbols: Vec<char> = symbols.into_iter().collect();
        if symbols.is_empty() {
            return Err(WordError::InvalidAlphabet("alphabet is empty".into()));
        }
        for (i, c) in symbols.iter().enumerate() {
            if symbols[..i].contains(c) {
                return Err(WordError::InvalidAlphabet(format!(
                    "duplicate symbol `{c}`"
                )));
            }
            if matches!(c, '(' | ')' | '^' | ',' | ' ') || c.is_whitespace() {
                return Err(WordError::InvalidAlphabet(format!("reserved symbol `{c}`")));
            }
        }
        Ok(Alphabet(symbols.into()))
    }

    /// Parses an alphabet spec such as `ab`, `a-z0-9` or `01`.
    pub fn parse(spec: &str) -> Result<Self, WordError> {
        let chars: Vec<char> = spec.chars().collect();
        let mut out = Vec::new();
        let mut i = 0;
        while i < chars.len() {
            if i + 2 < chars.len() && chars[i + 1] == '-' {
                let (lo, hi) = (chars[i], chars[i + 2]);
                if lo > hi {
                    return Err(WordError::InvalidAlphabet(format!("bad range `{lo}-{hi}`")));
                }
                out.extend(lo..=hi);
                i += 3;
            } else {
                out.push(chars[i]);
                i += 1;
            }
        }
        Alphabet::new(out)
    }

    /// The default alphabet `a-z0-9`.
    pub fn default_alphabet() -> Self {
        Alphabet::parse("a-z0-9").expect("default alphabet is valid")
    }

    pub fn symbols(&self) -> &[char] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, c: char) -> bool {
        self.0.contains(&c)
    }

    fn same(&self, other: &Alphabet) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Alphabet({})", self.0.iter().collect::<String>())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Body {
    Finite(Vec<char>),
    Periodic { pre: Vec<char>, period: Vec<char> },
}

/// A finite word, or an infinite word of the form `pre · period^ω`.
///
/// Equality (`==`) is semantic: two words are equal iff they denote the same
/// sequence over the same alphabet, whatever their stored form.
#[derive(Clone)]
pub struct Word {
    alphabet: Alphabet,
    body: Body,
}

impl Word {
    /// The empty word φ.
    pub fn empty(alphabet: &Alphabet) -> Self {
        Word {
            alphabet: alphabet.clone(),
            body: Body::Finite(Vec::new()),
        }
    }

    pub fn finite(
        alphabet: &Alphabet,
        symbols: impl IntoIterator<Item = char>,
    ) -> Result<Self, WordError> {
        let symbols = checked(alphabet, symbols)?;
        Ok(Word {
            alphabet: alphabet.clone(),
            body: Body::Finite(symbols),
        })
    }

    /// `pre · period^ω`, stored exactly as given (see [`Word::canonicalize`]).
    pub fn periodic(
        alphabet: &Alphabet,
        pre: impl IntoIterator<Item = char>,
        period: impl IntoIterator<Item = char>,
    ) -> Result<Self, WordError> {
        let pre = checked(alphabet, pre)?;
        let period = checked(alphabet, period)?;
        if period.is_empty() {
            return Err(WordError::EmptyPeriod);
        }
        Ok(Word {
            alphabet: alphabet.clone(),
            body: Body::Periodic { pre, period },
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn length(&self) -> ExtNat {
        match &self.body {
            Body::Finite(s) => ExtNat::Nat(s.len() as u64),
            Body::Periodic { .. } => ExtNat::Infinity,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self.body, Body::Finite(_))
    }

    pub fn is_empty(&self) -> bool {
        matches!(&self.body, Body::Finite(s) if s.is_empty())
    }

    /// The finite symbols, or `None` for an infinite word.
    pub fn as_finite(&self) -> Option<&[char]> {
        match &self.body {
            Body::Finite(s) => Some(s),
            Body::Periodic { .. } => None,
        }
    }

    /// `(pre, period)` for an infinite word.
    pub fn as_periodic(&self) -> Option<(&[char], &[char])> {
        match &self.body {
            Body::Finite(_) => None,
            Body::Periodic { pre, period } => Some((pre, period)),
        }
    }

    pub fn symbol_at(&self, i: u64) -> Result<char, WordError> {
        match &self.body {
            Body::Finite(s) => s
                .get(i as usize)
                .copied()
                .ok_or(WordError::IndexOutOfRange {
                    index: i,
                    len: s.len() as u64,
                }),
            Body::Periodic { .. } => Ok(self.at(i)),
        }
    }

    /// Symbol at `i`; the caller guarantees `i < length`.
    fn at(&self, i: u64) -> char {
        match &self.body {
            Body::Finite(s) => s[i as usize],
            Body::Periodic { pre, period } => {
                let p = pre.len() as u64;
                if i < p {
                    pre[i as usize]
                } else {
                    period[((i - p) % period.len() as u64) as usize]
                }
            }
        }
    }

    /// The finite prefix of length `min(n, length)`.
    pub fn take(&self, n: u64) -> Word {
        let symbols = match &self.body {
            Body::Finite(s) => s[..(n as usize).min(s.len())].to_vec(),
            Body::Periodic { .. } => (0..n).map(|i| self.at(i)).collect(),
        };
        Word {
            alphabet: self.alphabet.clone(),
            body: Body::Finite(symbols),
        }
    }

    fn same_alphabet(&self, other: &Word) -> Result<(), WordError> {
        if self.alphabet.same(&other.alphabet) {
            Ok(())
        } else {
            Err(WordError::AlphabetMismatch)
        }
    }

    /// Number of leading symbols that decide equality of two infinite words.
    fn agreement_bound(&self, other: &Word) -> u64 {
        match (&self.body, &other.body) {
            (
                Body::Periodic {
                    pre: p1,
                    period: q1,
                },
                Body::Periodic {
                    pre: p2,
                    period: q2,
                },
            ) => (p1.len().max(p2.len()) as u64) + lcm_u64(q1.len() as u64, q2.len() as u64),
            _ => self
                .length()
                .finite()
                .unwrap_or(0)
                .max(other.length().finite().unwrap_or(0)),
        }
    }

    /// Length of the longest common prefix, `None` when the words are equal and infinite.
    fn common_prefix_len(&self, other: &Word) -> Option<u64> {
        let limit = match (self.length(), other.length()) {
            (ExtNat::Nat(a), ExtNat::Nat(b)) => a.min(b),
            (ExtNat::Nat(a), ExtNat::Infinity) | (ExtNat::Infinity, ExtNat::Nat(a)) => a,
            (ExtNat::Infinity, ExtNat::Infinity) => {
                let bound = self.agreement_bound(other);
                return (0..bound).find(|&i| self.at(i) != other.at(i));
            }
        };
        Some(
            (0..limit)
                .find(|&i| self.at(i) != other.at(i))
                .unwrap_or(limit),
        )
    }

    /// Semantic equality of two words.
    pub fn equals(&self, other: &Word) -> Result<bool, WordError> {
        self.same_alphabet(other)?;
        if self.length() != other.length() {
            return Ok(false);
        }
        Ok(match self.length() {
            ExtNat::Nat(n) => self.common_prefix_len(other) == Some(n),
            ExtNat::Infinity => self.common_prefix_len(other).is_none(),
        })
    }

    /// `self ⊑ other` in the prefix order.
    pub fn is_prefix_of(&self, other: &Word) -> Result<bool, WordError> {
        self.same_alphabet(other)?;
        match self.length() {
            ExtNat::Infinity => self.equals(other),
            ExtNat::Nat(n) => {
                if other.length() < ExtNat::Nat(n) {
                    return Ok(false);
                }
                Ok((0..n).all(|i| self.at(i) == other.at(i)))
            }
        }
    }

    /// `self ⊏ other`: a prefix and not equal.
    pub fn is_strict_prefix_of(&self, other: &Word) -> Result<bool, WordError> {
        Ok(self.is_prefix_of(other)? && self.length() < other.length())
    }

    /// The longest common prefix `self ⊓ other`.
    ///
    /// Equal infinite words return the shared infinite word itself.
    pub fn lcp(&self, other: &Word) -> Result<Word, WordError> {
        self.same_alphabet(other)?;
        match self.common_prefix_len(other) {
            None => Ok(self.clone()),
            Some(n) => Ok(self.take(n)),
        }
    }

    /// Length of `self ⊓ other` without materializing it.
    pub fn lcp_length(&self, other: &Word) -> Result<ExtNat, WordError> {
        self.same_alphabet(other)?;
        Ok(match self.common_prefix_len(other) {
            None => ExtNat::Infinity,
            Some(n) => ExtNat::Nat(n),
        })
    }

    /// The canonical representative: minimal period, then minimal preperiod.
    pub fn canonicalize(&self) -> Word {
        match &self.body {
            Body::Finite(_) => self.clone(),
            Body::Periodic { pre, period } => {
                let p = primitive_root_len(period);
                let mut period: Vec<char> = period[..p].to_vec();
                let mut pre = pre.clone();
                while let (Some(&a), Some(&b)) = (pre.last(), period.last()) {
                    if a != b {
                        break;
                    }
                    pre.pop();
                    period.rotate_right(1);
                }
                Word {
                    alphabet: self.alphabet.clone(),
                    body: Body::Periodic { pre, period },
                }
            }
        }
    }

    pub fn is_canonical(&self) -> bool {
        self.canonicalize().body == self.body
    }

    /// Parses a word literal: `eps`, `abc`, `(ab)^w` or `ab(cd)^w`.
    pub fn parse(text: &str, alphabet: &Alphabet) -> Result<Word, WordError> {
        let text = text.trim();
        if text == "eps" {
            return Ok(Word::empty(alphabet));
        }
        let chars: Vec<char> = text.chars().collect();
        let perr = |pos: usize, msg: &str| WordError::Parse {
            pos,
            msg: msg.to_string(),
        };
        if chars.is_empty() {
            return Err(perr(0, "empty literal (use `eps` for the empty word)"));
        }
        let symbol = |pos: usize| -> Result<char, WordError> {
            let c = chars[pos];
            if alphabet.contains(c) {
                Ok(c)
            } else if matches!(c, '(' | ')' | '^') {
                Err(perr(pos, &format!("unexpected `{c}`")))
            } else {
                Err(WordError::Parse {
                    pos,
                    msg: format!("symbol `{c}` is not in the alphabet"),
                })
            }
        };
        let open = chars.iter().position(|&c| c == '(');
        match open {
            None => {
                let symbols = (0..chars.len())
                    .map(symbol)
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(Word {
                    alphabet: alphabet.clone(),
                    body: Body::Finite(symbols),
                })
            }
            Some(o) => {
                let pre = (0..o).map(symbol).collect::<Result<Vec<_>, _>>()?;
                let close = chars[o + 1..]
                    .iter()
                    .position(|&c| c == ')')
                    .map(|p| p + o + 1)
                    .ok_or_else(|| perr(chars.len(), "missing `)`"))?;
                if close == o + 1 {
                    return Err(perr(close, "empty period"));
                }
                let period = (o + 1..close).map(symbol).collect::<Result<Vec<_>, _>>()?;
                let rest: String = chars[close + 1..].iter().collect();
                if rest != "^w" {
                    return Err(perr(close + 1, "expected `^w` after the period"));
                }
                Ok(Word {
                    alphabet: alphabet.clone(),
                    body: Body::Periodic { pre, period },
                }
                .canonicalize())
            }
        }
    }
}

fn checked(
    alphabet: &Alphabet,
    symbols: impl IntoIterator<Item = char>,
) -> Result<Vec<char>, WordError> {
    symbols
        .into_iter()
        .map(|c| {
            if alphabet.contains(c) {
                Ok(c)
            } else {
                Err(WordError::UnknownSymbol(c))
            }
        })
        .collect()
}

/// Length of the shortest `u` with `w = u^k`.
fn primitive_root_len(w: &[char]) -> usize {
    let n = w.len();
    (1..=n)
        .filter(|p| n.is_multiple_of(*p))
        .find(|&p| (p..n).all(|i| w[i] == w[i - p]))
        .unwrap_or(n)
}

impl PartialEq for Word {
    fn eq(&self, other: &Word) -> bool {
        self.equals(other).unwrap_or(false)
    }
}

impl Eq for Word {}

impl Hash for Word {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.alphabet.hash(state);
        self.canonicalize().body.hash(state);
    }
}

/// Canonical text form; parsing it back yields an equal word.
impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.canonicalize().body {
            Body::Finite(s) if s.is_empty() => f.write_str("eps"),
            Body::Finite(s) => f.write_str(&s.iter().collect::<String>()),
            Body::Periodic { pre, period } => write!(
                f,
                "{}({})^w",
                pre.iter().collect::<String>(),
                period.iter().collect::<String>()
            ),
        }
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}
