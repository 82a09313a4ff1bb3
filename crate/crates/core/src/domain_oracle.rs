//! Brute-force order theory on explicit finite posets.
//!
//! Directed subsets, least upper bounds, the way-below relation, and the dcpo
//! and continuity properties are evaluated literally from their definitions
//! by enumerating subsets. Verdicts are relative to the finite poset at hand
//! and say nothing about the infinite ball poset a sample was drawn from.

use std::collections::HashMap;
use std::fmt;

use crate::exec::Exec;
use crate::formal_balls::{ball_leq, FormalBall};
use crate::metrics::Distance;
use crate::ratio::Ratio;
use crate::words::{Word, WordError};

/// Largest poset whose subsets are enumerated.
pub const DEFAULT_SIZE_BOUND: usize = 12;

/// Largest poset built from a ball sample.
pub const SAMPLE_BOUND: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("not reflexive: `{0}` ≤ `{0}` is missing")]
    NotReflexive(String),
    #[error("not antisymmetric: `{0}` ≤ `{1}` and `{1}` ≤ `{0}`")]
    NotAntisymmetric(String, String),
    #[error("not transitive: `{0}` ≤ `{1}` ≤ `{2}` but not `{0}` ≤ `{2}`")]
    NotTransitive(String, String, String),
    #[error("poset has {size} elements, bound is {bound}")]
    TooLarge { size: usize, bound: usize },
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("duplicate element `{0}`")]
    DuplicateElement(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Word(#[from] WordError),
}

impl OracleError {
    pub fn is_order_violation(&self) -> bool {
        matches!(
            self,
            OracleError::NotReflexive(_)
                | OracleError::NotAntisymmetric(..)
                | OracleError::NotTransitive(..)
        )
    }
}

/// A validated finite partial order.
#[derive(Clone, PartialEq, Eq)]
pub struct FinitePoset {
    labels: Vec<String>,
    leq: Vec<bool>,
}

impl fmt::Debug for FinitePoset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FinitePoset({} elements)", self.labels.len())
    }
}

impl FinitePoset {
    /// Validates a relation given as a row-major `n × n` matrix.
    pub fn from_matrix(
        labels: Vec<String>,
        leq: Vec<bool>,
        exec: Exec,
    ) -> Result<Self, OracleError> {
        let n = labels.len();
        assert_eq!(leq.len(), n * n, "matrix size must match the element count");
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(OracleError::DuplicateElement(l.clone()));
            }
        }
        let p = FinitePoset { labels, leq };
        if let Some(i) = (0..n).find(|&i| !p.le(i, i)) {
            return Err(OracleError::NotReflexive(p.labels[i].clone()));
        }
        for i in 0..n {
            for j in i + 1..n {
                if p.le(i, j) && p.le(j, i) {
                    return Err(OracleError::NotAntisymmetric(
                        p.labels[i].clone(),
                        p.labels[j].clone(),
                    ));
                }
            }
        }
        let broken = exec.map_range(n, |i| {
            for j in 0..n {
                if !p.le(i, j) || i == j {
                    continue;
                }
                for k in 0..n {
                    if p.le(j, k) && !p.le(i, k) {
                        return Some((i, j, k));
                    }
                }
            }
            None
        });
        if let Some((i, j, k)) = broken.into_iter().flatten().next() {
            return Err(OracleError::NotTransitive(
                p.labels[i].clone(),
                p.labels[j].clone(),
                p.labels[k].clone(),
            ));
        }
        Ok(p)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn le(&self, i: usize, j: usize) -> bool {
        self.leq[i * self.labels.len() + j]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Parses the `element <label>` / `leq <a> <b>` text format. Reflexive
    /// pairs are added; no other closure is applied.
    pub fn parse(text: &str) -> Result<Self, OracleError> {
        let mut labels: Vec<String> = Vec::new();
        let mut pairs = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let toks: Vec<&str> = content.split_whitespace().collect();
            match toks.as_slice() {
                ["element", l] => labels.push(l.to_string()),
                ["leq", a, b] => pairs.push((a.to_string(), b.to_string(), line)),
                _ => {
                    return Err(OracleError::Parse {
                        line,
                        msg: format!(
                            "expected `element <label>` or `leq <a> <b>`, found `{content}`"
                        ),
                    })
                }
            }
        }
        let n = labels.len();
        let index: HashMap<&str, usize> = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.as_str(), i))
            .collect();
        let mut leq = vec![false; n * n];
        for i in 0..n {
            leq[i * n + i] = true;
        }
        for (a, b, _) in &pairs {
            let i = *index
                .get(a.as_str())
                .ok_or_else(|| OracleError::UnknownElement(a.clone()))?;
            let j = *index
                .get(b.as_str())
                .ok_or_else(|| OracleError::UnknownElement(b.clone()))?;
            leq[i * n + j] = true;
        }
        FinitePoset::from_matrix(labels, leq, Exec::default())
    }
}

/// Validates `elements` with the listed pairs as the complete order relation.
pub fn validate_poset(
    elements: &[&str],
    pairs: &[(&str, &str)],
) -> Result<FinitePoset, OracleError> {
    let n = elements.len();
    let labels: Vec<String> = elements.iter().map(|s| s.to_string()).collect();
    let mut leq = vec![false; n * n];
    for (a, b) in pairs {
        let i = elements
            .iter()
            .position(|e| e == a)
            .ok_or_else(|| OracleError::UnknownElement(a.to_string()))?;
        let j = elements
            .iter()
            .position(|e| e == b)
            .ok_or_else(|| OracleError::UnknownElement(b.to_string()))?;
        leq[i * n + j] = true;
    }
    FinitePoset::from_matrix(labels, leq, Exec::default())
}

/// A subset of a small poset, as a bit mask over element indices.
pub type Subset = u32;

pub fn members(s: Subset) -> impl Iterator<Item = usize> {
    (0..Subset::BITS as usize).filter(move |&i| s & (1 << i) != 0)
}

/// Brute-force evaluator with a size bound and an execution strategy.
#[derive(Debug, Clone, Copy)]
pub struct Oracle {
    pub bound: usize,
    pub exec: Exec,
}

impl Default for Oracle {
    fn default() -> Self {
        Oracle {
            bound: DEFAULT_SIZE_BOUND,
            exec: Exec::default(),
        }
    }
}

impl Oracle {
    fn check_size(&self, p: &FinitePoset) -> Result<(), OracleError> {
        let bound = self.bound.min(Subset::BITS as usize - 1);
        if p.len() > bound {
            return Err(OracleError::TooLarge {
                size: p.len(),
                bound,
            });
        }
        Ok(())
    }

    fn is_directed(p: &FinitePoset, s: Subset) -> bool {
        s != 0
            && members(s).all(|i| members(s).all(|j| members(s).any(|k| p.le(i, k) && p.le(j, k))))
    }

    /// Every non-empty subset in which each pair has an upper bound inside the subset.
    pub fn directed_subsets(&self, p: &FinitePoset) -> Result<Vec<Subset>, OracleError> {
        self.check_size(p)?;
        let total = 1usize << p.len();
        Ok(self
            .exec
            .map_range(total, |s| {
                Self::is_directed(p, s as Subset).then_some(s as Subset)
            })
            .into_iter()
            .flatten()
            .collect())
    }

    /// Directed subsets paired with their least upper bounds.
    fn directed_with_lubs(
        &self,
        p: &FinitePoset,
    ) -> Result<Vec<(Subset, Option<usize>)>, OracleError> {
        Ok(self
            .directed_subsets(p)?
            .into_iter()
            .map(|s| (s, lub(p, s)))
            .collect())
    }

    pub fn is_dcpo(&self, p: &FinitePoset) -> Result<bool, OracleError> {
        Ok(self.directed_with_lubs(p)?.iter().all(|(_, l)| l.is_some()))
    }

    /// `x ≪ y`: every directed `D` with `y ⊑ ⊔D` contains some `u ⊒ x`.
    pub fn way_below(&self, p: &FinitePoset, x: usize, y: usize) -> Result<bool, OracleError> {
        let directed = self.directed_with_lubs(p)?;
        Ok(way_below_in(p, &directed, x, y))
    }

    /// The full way-below relation as a row-major matrix.
    pub fn way_below_table(&self, p: &FinitePoset) -> Result<Vec<bool>, OracleError> {
        let directed = self.directed_with_lubs(p)?;
        let n = p.len();
        Ok(self
            .exec
            .map_range(n * n, |k| way_below_in(p, &directed, k / n, k % n)))
    }

    /// Every `⇓x` is directed with least upper bound `x`.
    pub fn is_continuous(&self, p: &FinitePoset) -> Result<bool, OracleError> {
        let table = self.way_below_table(p)?;
        let n = p.len();
        Ok((0..n).all(|x| {
            let down: Subset = (0..n)
                .filter(|&y| table[y * n + x])
                .fold(0, |acc, y| acc | (1 << y));
            Self::is_directed(p, down) && lub(p, down) == Some(x)
        }))
    }
}

fn way_below_in(p: &FinitePoset, directed: &[(Subset, Option<usize>)], x: usize, y: usize) -> bool {
    directed.iter().all(|&(d, l)| match l {
        Some(l) if p.le(y, l) => members(d).any(|u| p.le(x, u)),
        _ => true,
    })
}

/// The unique minimum of the upper bounds of `s`, if any.
pub fn lub(p: &FinitePoset, s: Subset) -> Option<usize> {
    let n = p.len();
    let uppers: Vec<usize> = (0..n).filter(|&u| members(s).all(|i| p.le(i, u))).collect();
    uppers
        .iter()
        .copied()
        .find(|&u| uppers.iter().all(|&v| p.le(u, v)))
}

pub fn directed_subsets(p: &FinitePoset) -> Result<Vec<Subset>, OracleError> {
    Oracle::default().directed_subsets(p)
}

pub fn is_dcpo(p: &FinitePoset) -> Result<bool, OracleError> {
    Oracle::default().is_dcpo(p)
}

pub fn way_below(p: &FinitePoset, x: usize, y: usize) -> Result<bool, OracleError> {
    Oracle::default().way_below(p, x, y)
}

pub fn is_continuous(p: &FinitePoset) -> Result<bool, OracleError> {
    Oracle::default().is_continuous(p)
}

/// The finite poset of all balls `(w, r)` for `w ∈ words`, `r ∈ radii`,
/// ordered by `⊑_d`. Fails with an order-axiom witness if `⊑_d` is not a
/// partial order on the sample.
pub fn sample_ball_poset<D: Distance + ?Sized>(
    d: &D,
    words: &[Word],
    radii: &[Ratio],
    exec: Exec,
) -> Result<(FinitePoset, Vec<FormalBall>), OracleError> {
    let size = words.len() * radii.len();
    if size > SAMPLE_BOUND {
        return Err(OracleError::TooLarge {
            size,
            bound: SAMPLE_BOUND,
        });
    }
    let balls: Vec<FormalBall> = words
        .iter()
        .flat_map(|w| {
            radii
                .iter()
                .map(move |r| FormalBall::new(w.clone(), r.clone()))
        })
        .collect();
    let n = balls.len();
    let leq = exec
        .map_range(n * n, |k| ball_leq(d, &balls[k / n], &balls[k % n]))
        .into_iter()
        .collect::<Result<Vec<bool>, _>>()?;
    let labels = balls.iter().map(|b| b.to_string()).collect();
    Ok((FinitePoset::from_matrix(labels, leq, exec)?, balls))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::Metric;
    use crate::words::Alphabet;

    fn chain2() -> FinitePoset {
        validate_poset(
            &["bot", "top"],
            &[("bot", "bot"), ("top", "top"), ("bot", "top")],
        )
        .unwrap()
    }

    fn antichain2() -> FinitePoset {
        validate_poset(&["a", "b"], &[("a", "a"), ("b", "b")]).unwrap()
    }

    fn diamond() -> FinitePoset {
        FinitePoset::parse(
            "element bot\nelement l\nelement r\nelement top\n\
             leq bot l\nleq bot r\nleq l top\nleq r top\nleq bot top\n",
        )
        .unwrap()
    }

    fn set(p: &FinitePoset, labels: &[&str]) -> Subset {
        labels
            .iter()
            .map(|l| 1 << p.index_of(l).unwrap())
            .fold(0, |a, b| a | b)
    }

    #[test]
    fn validation_examples() {
        assert_eq!(chain2().len(), 2);
        assert_eq!(
            validate_poset(
                &["a", "b"],
                &[("a", "a"), ("b", "b"), ("a", "b"), ("b", "a")]
            ),
            Err(OracleError::NotAntisymmetric("a".into(), "b".into()))
        );
        assert_eq!(
            validate_poset(&["a"], &[]),
            Err(OracleError::NotReflexive("a".into()))
        );
        let e = FinitePoset::parse("element a\nelement b\nelement c\nleq a b\nleq b c\n");
        assert_eq!(
            e,
            Err(OracleError::NotTransitive(
                "a".into(),
                "b".into(),
                "c".into()
            ))
        );
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            FinitePoset::parse("element a\nlt a a\n"),
            Err(OracleError::Parse { line: 2, .. })
        ));
        assert_eq!(
            FinitePoset::parse("element a\nleq a z\n"),
            Err(OracleError::UnknownElement("z".into()))
        );
        assert_eq!(
            FinitePoset::parse("element a\nelement a\n"),
            Err(OracleError::DuplicateElement("a".into()))
        );
        // antichain with reflexive pairs omitted is closed and validates
        assert_eq!(
            FinitePoset::parse("element a\nelement b # none\n")
                .unwrap()
                .len(),
            2
        );
    }

    #[test]
    fn directed_examples() {
        let p = antichain2();
        assert_eq!(
            directed_subsets(&p).unwrap(),
            vec![set(&p, &["a"]), set(&p, &["b"])]
        );
        let p = chain2();
        assert_eq!(directed_subsets(&p).unwrap().len(), 3);
        let p = diamond();
        let ds = directed_subsets(&p).unwrap();
        assert!(!ds.contains(&set(&p, &["l", "r"])));
        assert!(ds.contains(&set(&p, &["l", "r", "top"])));
        // every subset containing top is directed, plus the 3 singletons below
        // it and {bot,l}, {bot,r}
        assert_eq!(ds.len(), 8 + 3 + 2);
    }

    #[test]
    fn lub_examples() {
        let p = chain2();
        assert_eq!(lub(&p, set(&p, &["bot", "top"])), p.index_of("top"));
        let p = antichain2();
        assert_eq!(lub(&p, set(&p, &["a", "b"])), None);
        let p = diamond();
        assert_eq!(lub(&p, set(&p, &["l", "r"])), p.index_of("top"));
    }

    #[test]
    fn finite_way_below_is_leq() {
        for p in [chain2(), antichain2(), diamond()] {
            assert!(is_dcpo(&p).unwrap());
            assert!(is_continuous(&p).unwrap());
            let n = p.len();
            for x in 0..n {
                for y in 0..n {
                    assert_eq!(way_below(&p, x, y).unwrap(), p.le(x, y));
                }
            }
        }
    }

    #[test]
    fn size_bound() {
        let labels: Vec<String> = (0..13).map(|i| format!("e{i}")).collect();
        let mut leq = vec![false; 169];
        for i in 0..13 {
            leq[i * 13 + i] = true;
        }
        let p = FinitePoset::from_matrix(labels, leq, Exec::Sequential).unwrap();
        assert_eq!(
            directed_subsets(&p),
            Err(OracleError::TooLarge {
                size: 13,
                bound: 12
            })
        );
    }

    #[test]
    fn ball_samples() {
        let ab = Alphabet::parse("ab").unwrap();
        let words: Vec<Word> = ["eps", "a", "ab"]
            .iter()
            .map(|s| Word::parse(s, &ab).unwrap())
            .collect();
        let radii: Vec<Ratio> = ["0", "1/4", "1/2", "1"]
            .iter()
            .map(|s| s.parse().unwrap())
            .collect();
        let (p, _) = sample_ball_poset(&Metric::Qb, &words, &radii, Exec::Sequential).unwrap();
        assert_eq!(p.len(), 12);
        assert!(sample_ball_poset(&Metric::Baire, &words, &radii, Exec::Sequential).is_ok());

        let words: Vec<Word> = ["a", "b"]
            .iter()
            .map(|s| Word::parse(s, &ab).unwrap())
            .collect();
        let (p, _) =
            sample_ball_poset(&Metric::Qb, &words, &[Ratio::zero()], Exec::Sequential).unwrap();
        assert!(!p.le(0, 1) && !p.le(1, 0));
    }
}
