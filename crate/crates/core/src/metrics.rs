//! The four distances on words and executable checks of the quasi-metric axioms.
//!
//! * `baire(x, y)  = 2^-ℓ(x⊓y)` for `x != y`, `0` otherwise;
//! * `dw(x, y)     = 2^-ℓ(x⊓y) - 2^-ℓ(x)`;
//! * `d0(x, y)     = 0` if `x ⊑ y`, else `2^-ℓ(x⊓y)`;
//! * `qb(x, y)     = 2^-ℓ(x) - 2^-ℓ(y)` if `x ⊑ y`, else `1`.
//!
//! All values are exact dyadic rationals in `[0, 1]`, with `2^-∞ = 0`.

use std::fmt;
use std::str::FromStr;

use crate::exec::Exec;
use crate::ratio::{pow2_neg, Ratio};
use crate::words::{Word, WordError};

pub fn baire(x: &Word, y: &Word) -> Result<Ratio, WordError> {
    if x.equals(y)? {
        return Ok(Ratio::zero());
    }
    Ok(pow2_neg(x.lcp_length(y)?))
}

pub fn dw(x: &Word, y: &Word) -> Result<Ratio, WordError> {
    let common = pow2_neg(x.lcp_length(y)?);
    Ok(common
        .checked_sub(&pow2_neg(x.length()))
        .expect("lcp is never longer than its arguments"))
}

pub fn d0(x: &Word, y: &Word) -> Result<Ratio, WordError> {
    if x.is_prefix_of(y)? {
        return Ok(Ratio::zero());
    }
    Ok(pow2_neg(x.lcp_length(y)?))
}

pub fn qb(x: &Word, y: &Word) -> Result<Ratio, WordError> {
    if x.is_prefix_of(y)? {
        return Ok(pow2_neg(x.length())
            .checked_sub(&pow2_neg(y.length()))
            .expect("a prefix is never longer than the word"));
    }
    Ok(Ratio::one())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BaseMetric {
    Baire,
    Dw,
    D0,
    Qb,
}

impl BaseMetric {
    pub const ALL: [BaseMetric; 4] = [
        BaseMetric::Baire,
        BaseMetric::Dw,
        BaseMetric::D0,
        BaseMetric::Qb,
    ];

    pub fn eval(self, x: &Word, y: &Word) -> Result<Ratio, WordError> {
        match self {
            BaseMetric::Baire => baire(x, y),
            BaseMetric::Dw => dw(x, y),
            BaseMetric::D0 => d0(x, y),
            BaseMetric::Qb => qb(x, y),
        }
    }

    fn name(self) -> &'static str {
        match self {
            BaseMetric::Baire => "baire",
            BaseMetric::Dw => "dw",
            BaseMetric::D0 => "d0",
            BaseMetric::Qb => "qb",
        }
    }
}

/// A distance tag. Symmetrization nests at most once, which the type enforces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Metric {
    Baire,
    Dw,
    D0,
    Qb,
    /// `d^s(x, y) = max(d(x, y), d(y, x))`.
    SymOf(BaseMetric),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MetricError {
    #[error("symmetrization cannot be nested")]
    NestedSymmetrization,
    #[error("unknown metric `{0}` (expected baire, dw, d0, qb, sym-dw, sym-d0, sym-qb)")]
    Unknown(String),
}

impl Metric {
    pub const BASE: [Metric; 4] = [Metric::Baire, Metric::Dw, Metric::D0, Metric::Qb];

    pub fn sym(self) -> Result<Metric, MetricError> {
        match self.base() {
            Some(b) => Ok(Metric::SymOf(b)),
            None => Err(MetricError::NestedSymmetrization),
        }
    }

    /// The underlying quasi-metric, `None` for a symmetrization.
    pub fn base(self) -> Option<BaseMetric> {
        match self {
            Metric::Baire => Some(BaseMetric::Baire),
            Metric::Dw => Some(BaseMetric::Dw),
            Metric::D0 => Some(BaseMetric::D0),
            Metric::Qb => Some(BaseMetric::Qb),
            Metric::SymOf(_) => None,
        }
    }

    pub fn dist(self, x: &Word, y: &Word) -> Result<Ratio, WordError> {
        match self {
            Metric::SymOf(m) => Ok(m.eval(x, y)?.max(m.eval(y, x)?)),
            other => other.base().expect("non-symmetrized").eval(x, y),
        }
    }
}

impl From<BaseMetric> for Metric {
    fn from(b: BaseMetric) -> Self {
        match b {
            BaseMetric::Baire => Metric::Baire,
            BaseMetric::Dw => Metric::Dw,
            BaseMetric::D0 => Metric::D0,
            BaseMetric::Qb => Metric::Qb,
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Metric::SymOf(b) => write!(f, "sym-{}", b.name()),
            other => f.write_str(other.base().expect("non-symmetrized").name()),
        }
    }
}

impl FromStr for Metric {
    type Err = MetricError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let base = |name: &str| {
            BaseMetric::ALL
                .into_iter()
                .find(|b| b.name() == name)
                .ok_or_else(|| MetricError::Unknown(s.to_string()))
        };
        match s.strip_prefix("sym-") {
            Some(rest) if rest.starts_with("sym-") => Err(MetricError::NestedSymmetrization),
            Some(rest) => Ok(Metric::SymOf(base(rest)?)),
            None => Ok(base(s)?.into()),
        }
    }
}

/// Anything that assigns exact distances to pairs of words.
///
/// [`Metric`] is the canonical implementation; the ball and limit machinery is
/// generic so that instrumented distances can be substituted.
pub trait Distance: Sync {
    fn distance(&self, x: &Word, y: &Word) -> Result<Ratio, WordError>;

    fn label(&self) -> String;

    /// Whether presented chains under this distance have their least upper
    /// bound at the prefix-union of their centers.
    fn has_prefix_limits(&self) -> bool {
        false
    }
}

impl Distance for Metric {
    fn distance(&self, x: &Word, y: &Word) -> Result<Ratio, WordError> {
        self.dist(x, y)
    }

    fn label(&self) -> String {
        self.to_string()
    }

    fn has_prefix_limits(&self) -> bool {
        matches!(self, Metric::Qb | Metric::Baire)
    }
}

/// Renders a distance as `p/q`, adding `(= 2^-k)` or `(= 2^-a - 2^-b)` when
/// the value has that exact shape.
pub fn describe_distance(v: &Ratio) -> String {
    if v.is_zero() || v.is_one() {
        return v.to_string();
    }
    if let Some(k) = v.as_pow2_neg() {
        return format!("{v} (= 2^-{k})");
    }
    if let Some((a, b)) = v.as_pow2_difference() {
        return format!("{v} (= 2^-{a} - 2^-{b})");
    }
    v.to_string()
}

/// The value of `m(x, y)` followed by the closed form it was computed from,
/// e.g. `1/4 (= 2^-1 - 2^-2)` for `qb(a, ab)`. Values `0` and `1` print bare.
pub fn explain_distance(m: Metric, x: &Word, y: &Word) -> Result<String, WordError> {
    let value = m.dist(x, y)?;
    if value.is_zero() || value.is_one() {
        return Ok(value.to_string());
    }
    let (base, x, y) = match m {
        Metric::SymOf(b) => {
            if b.eval(x, y)? >= b.eval(y, x)? {
                (b, x, y)
            } else {
                (b, y, x)
            }
        }
        other => (other.base().expect("non-symmetrized"), x, y),
    };
    let term = |e: crate::words::ExtNat| e.finite().map(|k| format!("2^-{k}"));
    let form = match base {
        BaseMetric::Baire | BaseMetric::D0 => term(x.lcp_length(y)?),
        BaseMetric::Dw => match (term(x.lcp_length(y)?), term(x.length())) {
            (Some(a), Some(b)) => Some(format!("{a} - {b}")),
            (a, _) => a,
        },
        BaseMetric::Qb => match (term(x.length()), term(y.length())) {
            (Some(a), Some(b)) => Some(format!("{a} - {b}")),
            (a, _) => a,
        },
    };
    Ok(match form {
        Some(f) => format!("{value} (= {f})"),
        None => describe_distance(&value),
    })
}

/// One failed instance of a checked property.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Violation {
    pub axiom: String,
    pub witness: Vec<String>,
    pub detail: String,
}

impl Violation {
    pub fn new(axiom: &str, witness: Vec<String>, detail: impl Into<String>) -> Self {
        Violation {
            axiom: axiom.to_string(),
            witness,
            detail: detail.into(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] ({})", self.axiom, self.witness.join(", "))?;
        if !self.detail.is_empty() {
            write!(f, ": {}", self.detail)?;
        }
        Ok(())
    }
}

/// Count of checked instances plus every violation, sorted canonically.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AxiomReport {
    pub checked: usize,
    pub violations: Vec<Violation>,
}

impl AxiomReport {
    pub fn new(checked: usize, mut violations: Vec<Violation>) -> Self {
        violations.sort();
        AxiomReport {
            checked,
            violations,
        }
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn merge(mut self, other: AxiomReport) -> Self {
        self.checked += other.checked;
        self.violations.extend(other.violations);
        self.violations.sort();
        self
    }
}

pub(crate) fn distance_matrix<D: Distance + ?Sized>(
    d: &D,
    words: &[Word],
    exec: Exec,
) -> Result<Vec<Ratio>, WordError> {
    let n = words.len();
    exec.map_range(n * n, |k| d.distance(&words[k / n], &words[k % n]))
        .into_iter()
        .collect()
}

/// Axiom (i) `x = y ⇔ d(x,y) = d(y,x) = 0` on every ordered pair and axiom (ii)
/// `d(x,y) ≤ d(x,z) + d(z,y)` on every ordered triple of the corpus.
pub fn check_quasi_metric_axioms<D: Distance + ?Sized>(
    d: &D,
    words: &[Word],
    exec: Exec,
) -> Result<AxiomReport, WordError> {
    let n = words.len();
    let m = distance_matrix(d, words, exec)?;
    let at = |i: usize, j: usize| &m[i * n + j];
    let separation = exec.flat_map_range(n * n, |k| {
        let (i, j) = (k / n, k % n);
        let equal = words[i] == words[j];
        let both_zero = at(i, j).is_zero() && at(j, i).is_zero();
        if equal == both_zero {
            vec![]
        } else {
            vec![Violation::new(
                "separation",
                vec![words[i].to_string(), words[j].to_string()],
                format!("d(x,y)={}, d(y,x)={}", at(i, j), at(j, i)),
            )]
        }
    });
    let triangle = exec.flat_map_range(n, |i| {
        let mut out = Vec::new();
        for j in 0..n {
            for k in 0..n {
                let via = at(i, k) + at(k, j);
                if *at(i, j) > via {
                    out.push(Violation::new(
                        "triangle",
                        vec![
                            words[i].to_string(),
                            words[j].to_string(),
                            words[k].to_string(),
                        ],
                        format!("d(x,y)={} > d(x,z)+d(z,y)={}", at(i, j), via),
                    ));
                }
            }
        }
        out
    });
    let mut violations = separation;
    violations.extend(triangle);
    Ok(AxiomReport::new(n * n + n * n * n, violations))
}

/// The T1 axiom (i') `x = y ⇔ d(x,y) = 0` on every ordered pair.
pub fn check_t1<D: Distance + ?Sized>(
    d: &D,
    words: &[Word],
    exec: Exec,
) -> Result<AxiomReport, WordError> {
    let n = words.len();
    let m = distance_matrix(d, words, exec)?;
    let violations = exec.flat_map_range(n * n, |k| {
        let (i, j) = (k / n, k % n);
        if (words[i] == words[j]) == m[k].is_zero() {
            vec![]
        } else {
            vec![Violation::new(
                "t1",
                vec![words[i].to_string(), words[j].to_string()],
                format!("d(x,y)={}", m[k]),
            )]
        }
    });
    Ok(AxiomReport::new(n * n, violations))
}

/// `d(x,y) = d(y,x)` on every ordered pair.
pub fn check_symmetry<D: Distance + ?Sized>(
    d: &D,
    words: &[Word],
    exec: Exec,
) -> Result<AxiomReport, WordError> {
    let n = words.len();
    let m = distance_matrix(d, words, exec)?;
    let violations = exec.flat_map_range(n * n, |k| {
        let (i, j) = (k / n, k % n);
        if m[k] == m[j * n + i] {
            vec![]
        } else {
            vec![Violation::new(
                "symmetry",
                vec![words[i].to_string(), words[j].to_string()],
                format!("d(x,y)={}, d(y,x)={}", m[k], m[j * n + i]),
            )]
        }
    });
    Ok(AxiomReport::new(n * n, violations))
}

/// Every value is a dyadic rational in `[0, 1]`.
pub fn check_range<D: Distance + ?Sized>(
    d: &D,
    words: &[Word],
    exec: Exec,
) -> Result<AxiomReport, WordError> {
    let n = words.len();
    let m = distance_matrix(d, words, exec)?;
    let violations = exec.flat_map_range(n * n, |k| {
        let v = &m[k];
        if v.is_dyadic() && *v <= Ratio::one() {
            vec![]
        } else {
            vec![Violation::new(
                "range",
                vec![words[k / n].to_string(), words[k % n].to_string()],
                format!("value {v} is not a dyadic rational in [0,1]"),
            )]
        }
    });
    Ok(AxiomReport::new(n * n, violations))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::Alphabet;

    fn w(s: &str) -> Word {
        Word::parse(s, &Alphabet::parse("abcd").unwrap()).unwrap()
    }

    fn r(s: &str) -> Ratio {
        s.parse().unwrap()
    }

    #[test]
    fn baire_examples() {
        assert_eq!(baire(&w("ab"), &w("ac")), Ok(r("1/2")));
        assert_eq!(baire(&w("(ab)^w"), &w("(ab)^w")), Ok(r("0")));
        assert_eq!(baire(&w("ab"), &w("cd")), Ok(r("1")));
    }

    #[test]
    fn dw_examples() {
        assert_eq!(dw(&w("a"), &w("ab")), Ok(r("0")));
        assert_eq!(dw(&w("ab"), &w("a")), Ok(r("1/4")));
        assert_eq!(dw(&w("(a)^w"), &w("b")), Ok(r("1")));
    }

    #[test]
    fn d0_examples() {
        assert_eq!(d0(&w("a"), &w("ab")), Ok(r("0")));
        assert_eq!(d0(&w("ab"), &w("a")), Ok(r("1/2")));
        assert_eq!(d0(&w("ba"), &w("bb")), Ok(r("1/2")));
    }

    #[test]
    fn qb_examples() {
        assert_eq!(qb(&w("a"), &w("ab")), Ok(r("1/4")));
        assert_eq!(qb(&w("ab"), &w("a")), Ok(r("1")));
        assert_eq!(qb(&w("eps"), &w("(a)^w")), Ok(r("1")));
        assert_eq!(qb(&w("(a)^w"), &w("(a)^w")), Ok(r("0")));
    }

    #[test]
    fn dist_examples() {
        let d0s = Metric::D0.sym().unwrap();
        assert_eq!(d0s.dist(&w("a"), &w("ab")), Ok(r("1/2")));
        let dws = Metric::Dw.sym().unwrap();
        assert_eq!(dws.dist(&w("a"), &w("ab")), Ok(r("1/4")));
        assert_eq!(Metric::Qb.dist(&w("abc"), &w("abc")), Ok(r("0")));
    }

    #[test]
    fn symmetrization_does_not_nest() {
        let s = Metric::Qb.sym().unwrap();
        assert_eq!(s.sym(), Err(MetricError::NestedSymmetrization));
        assert_eq!(
            "sym-sym-qb".parse::<Metric>(),
            Err(MetricError::NestedSymmetrization)
        );
    }

    #[test]
    fn metric_names_round_trip() {
        for name in ["baire", "dw", "d0", "qb", "sym-dw", "sym-d0", "sym-qb"] {
            assert_eq!(name.parse::<Metric>().unwrap().to_string(), name);
        }
        assert!("euclid".parse::<Metric>().is_err());
    }

    #[test]
    fn describe_forms() {
        assert_eq!(describe_distance(&r("1/4")), "1/4 (= 2^-2)");
        assert_eq!(describe_distance(&r("3/8")), "3/8 (= 2^-1 - 2^-3)");
        assert_eq!(describe_distance(&r("1")), "1");
        assert_eq!(describe_distance(&r("0")), "0");
        assert_eq!(describe_distance(&r("1/3")), "1/3");
    }

    #[test]
    fn explain_forms() {
        let ex = |m: Metric, x: &str, y: &str| explain_distance(m, &w(x), &w(y)).unwrap();
        assert_eq!(ex(Metric::Qb, "a", "ab"), "1/4 (= 2^-1 - 2^-2)");
        assert_eq!(ex(Metric::Baire, "ab", "ac"), "1/2 (= 2^-1)");
        assert_eq!(ex(Metric::Qb, "eps", "(a)^w"), "1");
        assert_eq!(ex(Metric::Qb, "ab", "(ab)^w"), "1/4 (= 2^-2)");
        assert_eq!(ex(Metric::Dw, "ab", "a"), "1/4 (= 2^-1 - 2^-2)");
        assert_eq!(ex(Metric::SymOf(BaseMetric::D0), "a", "ab"), "1/2 (= 2^-1)");
    }

    #[test]
    fn t1_witnesses_for_dw_and_d0() {
        let corpus = vec![w("a"), w("ab")];
        for m in [Metric::Dw, Metric::D0] {
            let rep = check_t1(&m, &corpus, Exec::Sequential).unwrap();
            assert_eq!(rep.violations.len(), 1);
            assert_eq!(rep.violations[0].witness, vec!["a", "ab"]);
        }
        assert!(check_t1(&Metric::Qb, &corpus, Exec::Sequential)
            .unwrap()
            .passed());
    }
}
