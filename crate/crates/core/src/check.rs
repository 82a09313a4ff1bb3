//! Property suites over the word corpus and the ball grid.
//!
//! Each suite returns its sections with counts and every violation found.
//! Sampled parts draw from a ChaCha stream seeded by [`RunConfig::seed`], so
//! a report is a pure function of its configuration.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;

use crate::corpus;
use crate::domain_oracle::sample_ball_poset;
use crate::exec::Exec;
use crate::formal_balls::{
    approximation_chain, ball_leq, downset_directedness_check, lub_chain, tail_limit_qb,
    verify_yoneda_limit, way_below_refute, way_below_sufficient_qb, witness_check_with_lub,
    yoneda_limit_qb, BallError, ChainPresentation, Directedness, FormalBall, Pattern,
    SequencePresentation, WayBelowVerdict, WitnessVerdict, VALIDATION_HORIZON,
};
use crate::metrics::{
    check_quasi_metric_axioms, check_range, check_symmetry, check_t1, distance_matrix, qb,
    AxiomReport, BaseMetric, Distance, Metric, Violation,
};
use crate::ratio::Ratio;
use crate::words::{Alphabet, Word, WordError};

pub const DEFAULT_SEED: u64 = 1729;
pub const DEFAULT_MAX_LEN: usize = 4;
/// Presentations generated per family in the Yoneda suite.
pub const FAMILY_SIZE: usize = 64;
/// Last index `n` at which the inf-sup tail is evaluated term by term.
pub const TAIL_HORIZON: u64 = 64;
/// Approximation-chain elements checked for certification per ball.
pub const APPROXIMATION_SCAN: u64 = 16;
pub const DIRECTEDNESS_BALLS: usize = 20;
pub const MIN_CHAINS: usize = 10;
pub const MIN_PATTERN_USES: usize = 25;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CheckError {
    #[error("unknown suite `{0}` (expected axioms, t1, remarks, balls, yoneda, theorem)")]
    UnknownSuite(String),
    #[error("unknown fault `{0}` (expected qb-prefix-flip)")]
    UnknownFault(String),
    #[error(transparent)]
    Ball(#[from] BallError),
}

impl From<WordError> for CheckError {
    fn from(e: WordError) -> Self {
        CheckError::Ball(e.into())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suite {
    Axioms,
    T1,
    Remarks,
    Balls,
    Yoneda,
    Theorem,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Axioms,
        Suite::T1,
        Suite::Remarks,
        Suite::Balls,
        Suite::Yoneda,
        Suite::Theorem,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Axioms => "axioms",
            Suite::T1 => "t1",
            Suite::Remarks => "remarks",
            Suite::Balls => "balls",
            Suite::Yoneda => "yoneda",
            Suite::Theorem => "theorem",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = CheckError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| CheckError::UnknownSuite(s.to_string()))
    }
}

/// Deliberate defects used to confirm that the suites detect broken distances.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Fault {
    /// `q_b` answers 1 on prefix pairs instead of `2^-ℓ(x) - 2^-ℓ(y)`.
    QbPrefixFlip,
}

impl fmt::Display for Fault {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("qb-prefix-flip")
    }
}

impl FromStr for Fault {
    type Err = CheckError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "qb-prefix-flip" => Ok(Fault::QbPrefixFlip),
            other => Err(CheckError::UnknownFault(other.to_string())),
        }
    }
}

/// A metric, optionally with a fault spliced into its `q_b` evaluations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Instrumented {
    pub metric: Metric,
    pub fault: Option<Fault>,
}

fn flipped_qb(x: &Word, y: &Word) -> Result<Ratio, WordError> {
    if x.is_prefix_of(y)? {
        Ok(Ratio::one())
    } else {
        qb(x, y)
    }
}

impl Distance for Instrumented {
    fn distance(&self, x: &Word, y: &Word) -> Result<Ratio, WordError> {
        match (self.fault, self.metric) {
            (Some(Fault::QbPrefixFlip), Metric::Qb) => flipped_qb(x, y),
            (Some(Fault::QbPrefixFlip), Metric::SymOf(BaseMetric::Qb)) => {
                Ok(flipped_qb(x, y)?.max(flipped_qb(y, x)?))
            }
            (_, m) => m.dist(x, y),
        }
    }

    fn label(&self) -> String {
        match self.fault {
            Some(f) => format!("{}[{f}]", self.metric),
            None => self.metric.to_string(),
        }
    }

    fn has_prefix_limits(&self) -> bool {
        self.metric.has_prefix_limits()
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub alphabet: Alphabet,
    pub max_len: usize,
    pub seed: u64,
    /// Restricts metric-generic suites to one metric.
    pub metric: Option<Metric>,
    pub fault: Option<Fault>,
    pub exec: Exec,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            alphabet: Alphabet::parse("ab").expect("valid alphabet"),
            max_len: DEFAULT_MAX_LEN,
            seed: DEFAULT_SEED,
            metric: None,
            fault: None,
            exec: Exec::default(),
        }
    }
}

impl RunConfig {
    pub fn words(&self) -> Vec<Word> {
        corpus::word_corpus(&self.alphabet, self.max_len)
    }

    pub fn grid(&self) -> Vec<FormalBall> {
        corpus::ball_grid(&self.words(), &corpus::grid_radii())
    }

    pub fn distance(&self, metric: Metric) -> Instrumented {
        Instrumented {
            metric,
            fault: self.fault,
        }
    }

    fn metrics_or_all(&self) -> Vec<Metric> {
        match self.metric {
            Some(m) => vec![m],
            None => BaseMetric::ALL.into_iter().map(Metric::from).collect(),
        }
    }

    /// `a` and `ab` for the alphabet `ab`: a strict prefix pair of distinct words.
    fn prefix_witness(&self) -> (Word, Word) {
        let s = self.alphabet.symbols();
        let x = Word::finite(&self.alphabet, [s[0]]).expect("alphabet symbol");
        let y =
            Word::finite(&self.alphabet, [s[0], s[s.len().min(2) - 1]]).expect("alphabet symbol");
        (x, y)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Section {
    pub name: String,
    pub checked: usize,
    pub violations: Vec<Violation>,
    pub notes: Vec<String>,
}

impl Section {
    pub fn new(name: impl Into<String>, checked: usize, mut violations: Vec<Violation>) -> Self {
        violations.sort();
        Section {
            name: name.into(),
            checked,
            violations,
            notes: Vec::new(),
        }
    }

    fn from_report(name: impl Into<String>, report: AxiomReport) -> Self {
        Section::new(name, report.checked, report.violations)
    }

    fn note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteReport {
    pub suite: Suite,
    pub seed: u64,
    pub sections: Vec<Section>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.sections.iter().all(Section::passed)
    }

    pub fn checked(&self) -> usize {
        self.sections.iter().map(|s| s.checked).sum()
    }

    pub fn violation_count(&self) -> usize {
        self.sections.iter().map(|s| s.violations.len()).sum()
    }

    pub fn section(&self, name: &str) -> Option<&Section> {
        self.sections.iter().find(|s| s.name == name)
    }

    /// Human-readable report listing at most `limit` witnesses per section.
    pub fn render(&self, limit: Option<usize>) -> String {
        let mut out = format!("suite {} (seed {})\n", self.suite, self.seed);
        for s in &self.sections {
            out += &format!(
                "  {}: {} checked, {} violations\n",
                s.name,
                s.checked,
                s.violations.len()
            );
            for n in &s.notes {
                out += &format!("    note: {n}\n");
            }
            let shown = limit.unwrap_or(usize::MAX).min(s.violations.len());
            for v in &s.violations[..shown] {
                out += &format!("    {v}\n");
            }
            if shown < s.violations.len() {
                out += &format!("    ... {} more\n", s.violations.len() - shown);
            }
        }
        out += &format!(
            "result: {} ({} checked, {} violations)\n",
            if self.passed() { "PASS" } else { "FAIL" },
            self.checked(),
            self.violation_count()
        );
        out
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(None))
    }
}

pub fn run_suite(suite: Suite, cfg: &RunConfig) -> Result<SuiteReport, CheckError> {
    let sections = match suite {
        Suite::Axioms => axioms(cfg)?,
        Suite::T1 => t1(cfg)?,
        Suite::Remarks => remarks(cfg)?,
        Suite::Balls => balls(cfg)?,
        Suite::Yoneda => yoneda(cfg)?,
        Suite::Theorem => theorem(cfg)?,
    };
    Ok(SuiteReport {
        suite,
        seed: cfg.seed,
        sections,
    })
}

/// Separation, triangle inequality and range for each metric, plus symmetry
/// for the metrics expected to be symmetric.
pub fn axioms(cfg: &RunConfig) -> Result<Vec<Section>, CheckError> {
    let words = cfg.words();
    let mut out = Vec::new();
    for m in cfg.metrics_or_all() {
        let d = cfg.distance(m);
        let report = check_quasi_metric_axioms(&d, &words, cfg.exec)?
            .merge(check_range(&d, &words, cfg.exec)?);
        out.push(Section::from_report(format!("quasi-metric[{m}]"), report));
        if matches!(m, Metric::Baire | Metric::SymOf(_)) {
            out.push(Section::from_report(
                format!("symmetry[{m}]"),
                check_symmetry(&d, &words, cfg.exec)?,
            ));
        }
    }
    Ok(out)
}

/// `d(x, y) = 0 ⇒ x = y`. By default `q_b` must pass, and `d_w`, `d_0` must
/// fail on the fixed pair `(a, ab)`.
pub fn t1(cfg: &RunConfig) -> Result<Vec<Section>, CheckError> {
    let mut words = cfg.words();
    if let Some(m) = cfg.metric {
        let report = check_t1(&cfg.distance(m), &words, cfg.exec)?;
        return Ok(vec![Section::from_report(format!("t1[{m}]"), report)]);
    }
    let (x, y) = cfg.prefix_witness();
    for w in [&x, &y] {
        if !words.contains(w) {
            words.push(w.clone());
        }
    }
    let mut out = vec![Section::from_report(
        "t1[qb]",
        check_t1(&cfg.distance(Metric::Qb), &words, cfg.exec)?,
    )];
    let witness = vec![x.to_string(), y.to_string()];
    for m in [Metric::Dw, Metric::D0] {
        let report = check_t1(&cfg.distance(m), &words, cfg.exec)?;
        let recorded = report.violations.iter().any(|v| v.witness == witness);
        let missing = (!recorded).then(|| {
            Violation::new(
                "t1-witness",
                witness.clone(),
                format!("expected {m}(x, y) = 0 with x != y"),
            )
        });
        out.push(
            Section::new(format!("t1-fails[{m}]"), 1, missing.into_iter().collect()).note(format!(
                "{} of {} pairs violate t1, including ({x}, {y})",
                report.violations.len(),
                report.checked
            )),
        );
    }
    Ok(out)
}

/// Symmetrizations against the Baire metric, and the prefix behaviour of `q_b`.
pub fn remarks(cfg: &RunConfig) -> Result<Vec<Section>, CheckError> {
    let words = cfg.words();
    let n = words.len();
    let baire = cfg.distance(Metric::Baire);
    let d = cfg.distance(Metric::Qb);
    let mut out = Vec::new();

    let sym_d0 = cfg.distance(Metric::SymOf(BaseMetric::D0));
    let s = distance_matrix(&sym_d0, &words, cfg.exec)?;
    let b = distance_matrix(&baire, &words, cfg.exec)?;
    let mut v = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if s[i * n + j] != b[i * n + j] {
                v.push(Violation::new(
                    "sym-d0-is-baire",
                    vec![words[i].to_string(), words[j].to_string()],
                    format!("sym-d0 = {}, baire = {}", s[i * n + j], b[i * n + j]),
                ));
            }
        }
    }
    out.push(Section::new("sym-d0-is-baire", n * n, v));

    let (x, y) = cfg.prefix_witness();
    let sym_dw = cfg
        .distance(Metric::SymOf(BaseMetric::Dw))
        .distance(&x, &y)?;
    let bxy = baire.distance(&x, &y)?;
    let v = (sym_dw == bxy).then(|| {
        Violation::new(
            "sym-dw-differs",
            vec![x.to_string(), y.to_string()],
            format!("sym-dw = baire = {bxy}"),
        )
    });
    out.push(
        Section::new("sym-dw-differs", 1, v.into_iter().collect()).note(format!(
            "sym-dw({x}, {y}) = {sym_dw}, baire({x}, {y}) = {bxy}"
        )),
    );

    let q = distance_matrix(&d, &words, cfg.exec)?;
    let strict: Vec<bool> = cfg
        .exec
        .map_range(n * n, |k| words[k / n].is_strict_prefix_of(&words[k % n]))
        .into_iter()
        .collect::<Result<_, _>>()?;
    let triples = cfg.exec.flat_map_range(n, |i| {
        let mut found = Vec::new();
        for j in (0..n).filter(|&j| strict[i * n + j]) {
            for k in (0..n).filter(|&k| strict[j * n + k]) {
                let ok = q[j * n + k] < q[i * n + k];
                found.push((!ok).then(|| {
                    Violation::new(
                        "discrimination",
                        vec![
                            words[i].to_string(),
                            words[j].to_string(),
                            words[k].to_string(),
                        ],
                        format!(
                            "q(y,z) = {} not below q(x,z) = {}",
                            q[j * n + k],
                            q[i * n + k]
                        ),
                    )
                }));
            }
        }
        found
    });
    let checked = triples.len();
    out.push(Section::new(
        "discrimination",
        checked,
        triples.into_iter().flatten().collect(),
    ));

    let mut v = Vec::new();
    let mut checked = 0;
    for i in (0..n).filter(|&i| !words[i].is_empty()) {
        for j in 0..n {
            checked += 1;
            let prefix = words[i].is_prefix_of(&words[j])?;
            if prefix != (q[i * n + j] < Ratio::one()) {
                v.push(Violation::new(
                    "prefix-detection",
                    vec![words[i].to_string(), words[j].to_string()],
                    format!("prefix = {prefix} but q = {}", q[i * n + j]),
                ));
            }
        }
    }
    out.push(Section::new("prefix-detection", checked, v));

    let eps = Word::empty(&cfg.alphabet);
    let first = cfg.alphabet.symbols()[0];
    let omega = Word::periodic(&cfg.alphabet, [], [first]).expect("alphabet symbol");
    let value = d.distance(&eps, &omega)?;
    let v = (!value.is_one()).then(|| {
        Violation::new(
            "empty-edge",
            vec![eps.to_string(), omega.to_string()],
            format!("q = {value}, expected 1"),
        )
    });
    out.push(
        Section::new("empty-edge", 1, v.into_iter().collect()).note(format!(
            "q({eps}, {omega}) = {value} although {eps} is a prefix"
        )),
    );
    Ok(out)
}

/// Order axioms of `⊑` on the ball grid and order validation of the sampled
/// ball posets for all four metrics.
pub fn balls(cfg: &RunConfig) -> Result<Vec<Section>, CheckError> {
    let m = cfg.metric.unwrap_or(Metric::Qb);
    let d = cfg.distance(m);
    let grid = cfg.grid();
    let n = grid.len();
    let leq: Vec<bool> = cfg
        .exec
        .map_range(n * n, |k| ball_leq(&d, &grid[k / n], &grid[k % n]))
        .into_iter()
        .collect::<Result<_, _>>()?;
    let at = |i: usize, j: usize| leq[i * n + j];
    let name = |i: usize| grid[i].to_string();

    let mut v = Vec::new();
    for i in (0..n).filter(|&i| !at(i, i)) {
        v.push(Violation::new(
            "reflexive",
            vec![name(i)],
            "b is not below itself",
        ));
    }
    for i in 0..n {
        for j in i + 1..n {
            if at(i, j) && at(j, i) {
                v.push(Violation::new(
                    "antisymmetric",
                    vec![name(i), name(j)],
                    "mutually below but distinct",
                ));
            }
        }
    }
    v.extend(cfg.exec.flat_map_range(n, |i| {
        let mut found = Vec::new();
        for j in (0..n).filter(|&j| at(i, j) && j != i) {
            for k in (0..n).filter(|&k| at(j, k) && !at(i, k)) {
                found.push(Violation::new(
                    "transitive",
                    vec![name(i), name(j), name(k)],
                    "b1 ⊑ b2 ⊑ b3 but not b1 ⊑ b3",
                ));
            }
        }
        found
    }));
    let mut out = vec![
        Section::new(format!("partial-order[{m}]"), n + n * n + n * n * n, v)
            .note(format!("{n} grid balls")),
    ];

    let mut v = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if at(i, j) && grid[i].radius < grid[j].radius {
                v.push(Violation::new(
                    "monotone-radii",
                    vec![name(i), name(j)],
                    "b1 ⊑ b2 with a smaller radius",
                ));
            }
        }
    }
    out.push(Section::new(format!("monotone-radii[{m}]"), n * n, v));

    let words = cfg.words();
    let radii = corpus::grid_radii();
    let mut v = Vec::new();
    for base in BaseMetric::ALL {
        let m = Metric::from(base);
        if let Err(e) = sample_ball_poset(&cfg.distance(m), &words, &radii, cfg.exec) {
            v.push(Violation::new(
                "ball-poset",
                vec![m.to_string()],
                e.to_string(),
            ));
        }
    }
    out.push(Section::new("ball-posets", BaseMetric::ALL.len(), v));
    Ok(out)
}

/// Both generated families of left K-Cauchy presentations, in a fixed order.
pub fn cauchy_presentations(cfg: &RunConfig) -> Vec<SequencePresentation> {
    let mut rng = corpus::rng(cfg.seed);
    let mut family = corpus::stabilized_family(&cfg.alphabet, FAMILY_SIZE, &mut rng);
    family.extend(corpus::prefix_family(&cfg.alphabet, FAMILY_SIZE, &mut rng));
    family
}

/// `min_{n ≤ H} max_{n ≤ m ≤ 2H} d(x_m, y)`, the inf-sup truncated at horizon `H`.
pub fn horizon_tail<D: Distance + ?Sized>(
    d: &D,
    seq: &SequencePresentation,
    probe: &Word,
    horizon: u64,
) -> Result<Ratio, WordError> {
    let values = (0..=2 * horizon)
        .map(|m| d.distance(&seq.term(m), probe))
        .collect::<Result<Vec<_>, _>>()?;
    let mut suffix_max = Ratio::zero();
    let mut best: Option<Ratio> = None;
    for (m, v) in values.iter().enumerate().rev() {
        if *v > suffix_max {
            suffix_max = v.clone();
        }
        if m as u64 <= horizon && best.as_ref().is_none_or(|b| suffix_max < *b) {
            best = Some(suffix_max.clone());
        }
    }
    Ok(best.expect("index 0 is within the horizon"))
}

/// Largest gap allowed between the truncated tail and its limit.
fn horizon_slack(seq: &SequencePresentation, horizon: u64) -> Ratio {
    match seq {
        SequencePresentation::Explicit { .. } => Ratio::zero(),
        SequencePresentation::PrefixSchedule { lengths, .. } => {
            Ratio::pow2_neg(lengths.at(horizon))
        }
    }
}

/// Limits of generated Cauchy presentations, checked through probes and
/// against the truncated inf-sup, and uniqueness of limits over the corpus.
pub fn yoneda(cfg: &RunConfig) -> Result<Vec<Section>, CheckError> {
    let d = cfg.distance(Metric::Qb);
    let family = cauchy_presentations(cfg);
    let mut rng = corpus::rng(cfg.seed ^ 0x9e37_79b9_7f4a_7c15);
    let cases: Vec<(Word, Vec<Word>)> = family
        .iter()
        .map(|seq| {
            let limit = yoneda_limit_qb(seq)?;
            let probes = corpus::probe_set(&limit, &mut rng);
            Ok((limit, probes))
        })
        .collect::<Result<_, BallError>>()?;

    let reports = cfg.exec.map_range(family.len(), |i| {
        verify_yoneda_limit(&d, &family[i], &cases[i].0, &cases[i].1)
    });
    let mut law = AxiomReport::new(0, Vec::new());
    for r in reports {
        law = law.merge(r?);
    }
    let stabilized = family
        .iter()
        .filter(|s| matches!(s, SequencePresentation::Explicit { .. }))
        .count();
    let mut out = vec![Section::from_report("yoneda-law", law).note(format!(
        "{} presentations: {} eventually constant, {} prefix schedules",
        family.len(),
        stabilized,
        family.len() - stabilized
    ))];

    let horizon = cfg.exec.flat_map_range(family.len(), |i| {
        let seq = &family[i];
        let slack = horizon_slack(seq, TAIL_HORIZON);
        cases[i]
            .1
            .iter()
            .map(|y| -> Result<Option<Violation>, CheckError> {
                let closed = tail_limit_qb(seq, y)?;
                let truncated = horizon_tail(&d, seq, y, TAIL_HORIZON)?;
                let ok = if closed.is_one() {
                    truncated.is_one()
                } else {
                    truncated >= closed && truncated <= &closed + &slack
                };
                Ok((!ok).then(|| {
                    Violation::new(
                        "tail-horizon",
                        vec![seq.to_string(), y.to_string()],
                        format!("closed form {closed}, truncated tail {truncated}"),
                    )
                }))
            })
            .collect::<Vec<_>>()
    });
    let checked = horizon.len();
    let v = horizon.into_iter().collect::<Result<Vec<_>, _>>()?;
    out.push(
        Section::new("tail-horizon", checked, v.into_iter().flatten().collect()).note(format!(
            "truncated at n <= {TAIL_HORIZON}, m <= {}",
            2 * TAIL_HORIZON
        )),
    );

    let words = cfg.words();
    let n = words.len();
    let dm = distance_matrix(&d, &words, cfg.exec)?;
    let unique = cfg
        .exec
        .map_range(family.len(), |s| -> Result<Vec<Violation>, CheckError> {
            let tails = words
                .iter()
                .map(|y| tail_limit_qb(&family[s], y))
                .collect::<Result<Vec<_>, _>>()?;
            // candidate l passes on probes {p, q}
            let passes = |l: usize, p: usize, q: usize| {
                dm[l * n + p] == tails[p] && dm[l * n + q] == tails[q]
            };
            let mut v = Vec::new();
            for i in 0..n {
                for j in i + 1..n {
                    if passes(i, i, j) && passes(j, i, j) {
                        v.push(Violation::new(
                            "limit-uniqueness",
                            vec![
                                family[s].to_string(),
                                words[i].to_string(),
                                words[j].to_string(),
                            ],
                            "two distinct words both pass as limit",
                        ));
                    }
                }
            }
            Ok(v)
        });
    let mut v = Vec::new();
    for u in unique {
        v.extend(u?);
    }
    out.push(Section::new(
        "limit-uniqueness",
        family.len() * n * (n - 1) / 2,
        v,
    ));
    Ok(out)
}

/// Approximation round trip, least upper bounds, way-below consistency and
/// witnesses, and directedness of down-sets.
pub fn theorem(cfg: &RunConfig) -> Result<Vec<Section>, CheckError> {
    let mut out = round_trip(cfg)?;
    out.extend(way_below(cfg)?);
    out.push(directedness(cfg)?);
    Ok(out)
}

/// `⊔ approximation_chain(b) = b`, its elements are certified below `b`, and
/// the lub lies below every grid ball that bounds the chain.
pub fn round_trip(cfg: &RunConfig) -> Result<Vec<Section>, CheckError> {
    let d = cfg.distance(cfg.metric.unwrap_or(Metric::Qb));
    let grid = cfg.grid();
    let per_ball = cfg
        .exec
        .map_range(grid.len(), |i| -> Result<_, CheckError> {
            let b = &grid[i];
            let chain = approximation_chain(b);
            let mut trip = Vec::new();
            let lub = match lub_chain(&d, &chain) {
                Ok(l) if l == *b => Some(l),
                Ok(l) => {
                    trip.push(Violation::new(
                        "round-trip",
                        vec![b.to_string()],
                        format!("lub is {l}"),
                    ));
                    Some(l)
                }
                Err(e) => {
                    trip.push(Violation::new(
                        "round-trip",
                        vec![b.to_string()],
                        format!("{}: {e}", e.name()),
                    ));
                    None
                }
            };

            let mut below = Vec::new();
            for n in 0..=APPROXIMATION_SCAN {
                let e = chain.element(n).expect("parametric chain");
                if !way_below_sufficient_qb(&e, b)?.is_certified() {
                    below.push(Violation::new(
                        "approximation-below",
                        vec![b.to_string(), e.to_string()],
                        format!("element {n} is not certified below"),
                    ));
                }
            }

            let mut least = Vec::new();
            let mut competitors = 0;
            if let Some(lub) = lub {
                let elements: Vec<FormalBall> = (0..=VALIDATION_HORIZON as u64)
                    .rev()
                    .map(|n| chain.element(n).expect("parametric chain"))
                    .collect();
                for c in &grid {
                    let mut bounds = true;
                    for e in &elements {
                        if !ball_leq(&d, e, c)? {
                            bounds = false;
                            break;
                        }
                    }
                    if bounds {
                        competitors += 1;
                        if !ball_leq(&d, &lub, c)? {
                            least.push(Violation::new(
                                "lub-least",
                                vec![b.to_string(), c.to_string()],
                                format!("{c} bounds the chain but not its lub {lub}"),
                            ));
                        }
                    }
                }
            }
            Ok((trip, below, least, competitors))
        });
    let (mut trip, mut below, mut least, mut competitors) = (Vec::new(), Vec::new(), Vec::new(), 0);
    for r in per_ball {
        let (t, b, l, c) = r?;
        trip.extend(t);
        below.extend(b);
        least.extend(l);
        competitors += c;
    }
    let n = grid.len();
    Ok(vec![
        Section::new("round-trip", n, trip),
        Section::new(
            "approximation-below",
            n * (APPROXIMATION_SCAN as usize + 1),
            below,
        ),
        Section::new("lub-least", competitors, least)
            .note(format!("{competitors} grid competitors bound a chain")),
    ])
}

/// Certified pairs on the grid: never refuted, and witnessed in every
/// generated chain whose lub lies above the right-hand ball.
pub fn way_below(cfg: &RunConfig) -> Result<Vec<Section>, CheckError> {
    let d = cfg.distance(Metric::Qb);
    let grid = cfg.grid();
    let n = grid.len();
    let verdicts = cfg.exec.map_range(n * n, |k| -> Result<_, CheckError> {
        let (b1, b2) = (&grid[k / n], &grid[k % n]);
        let suff = way_below_sufficient_qb(b1, b2)?;
        let refuted = way_below_refute(&d, b1, b2)?;
        Ok((suff, refuted))
    });
    let mut clash = Vec::new();
    let mut certified: Vec<(usize, usize, Pattern)> = Vec::new();
    for (k, v) in verdicts.into_iter().enumerate() {
        let (suff, refuted) = v?;
        if let WayBelowVerdict::CertifiedBelow(cert) = &suff {
            certified.push((k / n, k % n, cert.pattern));
            if refuted.is_refuted() {
                clash.push(Violation::new(
                    "certified-and-refuted",
                    vec![grid[k / n].to_string(), grid[k % n].to_string()],
                    format!("{suff} but {refuted}"),
                ));
            }
        }
    }
    let mut out = vec![Section::new("way-below-consistency", n * n, clash)
        .note(format!("{} certified pairs", certified.len()))];

    let q = Metric::Qb;
    let chains = cfg.exec.map_range(
        n,
        |j| -> Result<Vec<(ChainPresentation, FormalBall)>, CheckError> {
            corpus::valid_chains_above(&grid[j])?
                .into_iter()
                .map(|c| {
                    let lub = lub_chain(&q, &c)?;
                    Ok((c, lub))
                })
                .collect()
        },
    );
    let chains = chains.into_iter().collect::<Result<Vec<_>, _>>()?;

    let results = cfg.exec.map(
        &certified,
        |&(i, j, _)| -> Result<Vec<Violation>, CheckError> {
            let (b1, b2) = (&grid[i], &grid[j]);
            let mut v = Vec::new();
            if chains[j].len() < MIN_CHAINS {
                v.push(Violation::new(
                    "chain-count",
                    vec![b2.to_string()],
                    format!("only {} chains generated", chains[j].len()),
                ));
            }
            for (chain, lub) in &chains[j] {
                match witness_check_with_lub(b1, b2, chain, lub)? {
                    WitnessVerdict::WitnessFound { .. } => {}
                    other => v.push(Violation::new(
                        "witness",
                        vec![b1.to_string(), b2.to_string(), chain.to_string()],
                        format!("{other:?}"),
                    )),
                }
            }
            Ok(v)
        },
    );
    let mut v = Vec::new();
    for r in results {
        v.extend(r?);
    }
    let checked: usize = certified.iter().map(|&(_, j, _)| chains[j].len()).sum();
    let mut uses: BTreeMap<&str, usize> = BTreeMap::new();
    for (_, _, p) in &certified {
        *uses
            .entry(match p {
                Pattern::P1 => "P1",
                Pattern::P2 { .. } => "P2",
            })
            .or_default() += 1;
    }
    for p in ["P1", "P2"] {
        let count = uses.get(p).copied().unwrap_or(0);
        if count < MIN_PATTERN_USES {
            v.push(Violation::new(
                "pattern-coverage",
                vec![p.to_string()],
                format!("{count} certified pairs, need {MIN_PATTERN_USES}"),
            ));
        }
    }
    let min_chains = certified
        .iter()
        .map(|&(_, j, _)| chains[j].len())
        .min()
        .unwrap_or(0);
    out.push(
        Section::new("witness", checked, v)
            .note(format!(
                "pattern uses: P1 {}, P2 {}",
                uses.get("P1").copied().unwrap_or(0),
                uses.get("P2").copied().unwrap_or(0)
            ))
            .note(format!("at least {min_chains} chains per right-hand ball")),
    );
    Ok(out)
}

/// Every pair of grid balls certified below a selected ball has a common
/// upper bound that is itself certified below it.
pub fn directedness(cfg: &RunConfig) -> Result<Section, CheckError> {
    let grid = cfg.grid();
    let below = cfg.exec.map(&grid, |b| -> Result<Vec<usize>, CheckError> {
        let mut v = Vec::new();
        for (i, e) in grid.iter().enumerate() {
            if way_below_sufficient_qb(e, b)?.is_certified() {
                v.push(i);
            }
        }
        Ok(v)
    });
    let below = below.into_iter().collect::<Result<Vec<_>, _>>()?;
    let (mut finite, mut infinite): (Vec<usize>, Vec<usize>) = (0..grid.len())
        .filter(|&i| below[i].len() >= 2)
        .partition(|&i| grid[i].center.is_finite());
    let mut rng = corpus::rng(cfg.seed);
    finite.shuffle(&mut rng);
    infinite.shuffle(&mut rng);
    let half = DIRECTEDNESS_BALLS / 2;
    let take_inf = infinite
        .len()
        .min(half.max(DIRECTEDNESS_BALLS.saturating_sub(finite.len())));
    let take_fin = finite.len().min(DIRECTEDNESS_BALLS - take_inf);
    let mut selected: Vec<usize> = finite[..take_fin].to_vec();
    selected.extend(&infinite[..take_inf]);
    selected.sort_unstable();

    let results = cfg.exec.map(
        &selected,
        |&bi| -> Result<(usize, Vec<Violation>), CheckError> {
            let b = &grid[bi];
            let elems = &below[bi];
            let mut v = Vec::new();
            let mut checked = 0;
            let mut check = |group: Vec<FormalBall>| -> Result<(), CheckError> {
                checked += 1;
                let verdict = downset_directedness_check(b, &group)?;
                let ok = match &verdict {
                    Directedness::UpperBoundInDownset(u) => {
                        let mut ok = way_below_sufficient_qb(u, b)?.is_certified();
                        for e in &group {
                            ok &= ball_leq(&Metric::Qb, e, u)?;
                        }
                        ok
                    }
                    _ => false,
                };
                if !ok {
                    let mut w = vec![b.to_string()];
                    w.extend(group.iter().map(|e| e.to_string()));
                    v.push(Violation::new("directedness", w, format!("{verdict:?}")));
                }
                Ok(())
            };
            for (x, &i) in elems.iter().enumerate() {
                for &j in &elems[x + 1..] {
                    check(vec![grid[i].clone(), grid[j].clone()])?;
                }
            }
            check(elems.iter().map(|&i| grid[i].clone()).collect())?;
            Ok((checked, v))
        },
    );
    let mut v = Vec::new();
    let mut checked = 0;
    for r in results {
        let (c, vs) = r?;
        checked += c;
        v.extend(vs);
    }
    if take_fin == 0 || take_inf == 0 {
        v.push(Violation::new(
            "directedness-coverage",
            vec![],
            format!("{take_fin} finite-center and {take_inf} infinite-center balls selected"),
        ));
    }
    Ok(Section::new("directedness", checked, v).note(format!(
        "{} balls: {take_fin} finite-center, {take_inf} infinite-center",
        selected.len()
    )))
}
