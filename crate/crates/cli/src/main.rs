//! `worddomain`: distances on words, formal balls, limits, way-below verdicts,
//! property suites and a finite-poset oracle from the command line.
//!
//! Exit codes: 0 success, 1 property or contract violation, 2 input error.

mod output;

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use worddomain::check::{self, CheckError, Fault, RunConfig, Suite};
use worddomain::domain_oracle::{sample_ball_poset, FinitePoset, Oracle, OracleError};
use worddomain::formal_balls::{
    approximation_chain, ball_leq, lub_chain, way_below_refute, way_below_sufficient_qb,
    way_below_witness_check, yoneda_limit_qb, WitnessVerdict,
};
use worddomain::metrics::{describe_distance, explain_distance, MetricError};
use worddomain::{
    Alphabet, BallError, ChainPresentation, Distance, Exec, FormalBall, Metric, Ratio,
    SequencePresentation, Word, WordError,
};

use output::{Output, ReportOut, WitnessOut};

#[derive(Parser, Debug)]
#[command(
    name = "worddomain",
    version,
    about = "Quasi-metrics on words and their formal balls"
)]
struct Cli {
    /// Alphabet spec such as `ab` or `a-z0-9` (default `a-z0-9`; `ab` for `check`).
    #[arg(long, global = true)]
    alphabet: Option<String>,

    /// Metric for `check` and `oracle`: baire, dw, d0, qb, sym-dw, sym-d0, sym-qb.
    #[arg(long, global = true)]
    metric: Option<String>,

    /// Longest finite word in the `check` corpus.
    #[arg(long, global = true, default_value_t = check::DEFAULT_MAX_LEN)]
    max_len: usize,

    /// Seed for sampled corpora.
    #[arg(long, global = true, default_value_t = check::DEFAULT_SEED)]
    seed: u64,

    /// Emit one JSON object instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Evaluate on one thread.
    #[arg(long, global = true)]
    sequential: bool,

    #[arg(long, global = true, hide = true)]
    inject_fault: Option<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact distance between two words.
    Dist {
        metric: String,
        x: String,
        y: String,
    },
    /// Whether `b1 ⊑ b2` under the metric.
    BallLeq {
        metric: String,
        b1: String,
        b2: String,
    },
    /// Least upper bound of a presented chain.
    ChainLub { metric: String, chain: String },
    /// Limit of a left K-Cauchy sequence under q_b.
    YonedaLimit { sequence: String },
    /// The canonical chain of balls way-below a ball with the ball as lub.
    ApproxChain {
        ball: String,
        /// Number of chain elements to list.
        #[arg(long, default_value_t = 4)]
        elements: u64,
    },
    /// Way-below verdict for `b1 ≪ b2` under q_b, optionally searched for in a chain.
    WayBelow {
        b1: String,
        b2: String,
        #[arg(long)]
        chain: Option<String>,
    },
    /// Run a property suite: axioms, t1, remarks, balls, yoneda, theorem, or all.
    Check {
        suite: String,
        /// Witnesses listed per section in text mode.
        #[arg(long, default_value_t = 20)]
        max_witnesses: usize,
    },
    /// Brute-force order theory on a poset file or a sampled ball grid.
    Oracle {
        file: Option<PathBuf>,
        /// Comma-separated centers for the ball grid.
        #[arg(long, default_value = "eps,a,ab")]
        words: String,
        /// Comma-separated radii for the ball grid.
        #[arg(long, default_value = "0,1/4,1/2,1")]
        radii: String,
    },
}

/// An error with its exit code and stable name.
#[derive(Debug)]
struct Failure {
    code: u8,
    name: String,
    message: String,
}

impl Failure {
    fn input(name: &str, message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            name: name.to_string(),
            message: message.into(),
        }
    }
}

impl From<BallError> for Failure {
    fn from(e: BallError) -> Self {
        Failure {
            code: if e.is_input_error() { 2 } else { 1 },
            name: e.name().to_string(),
            message: e.to_string(),
        }
    }
}

impl From<WordError> for Failure {
    fn from(e: WordError) -> Self {
        BallError::from(e).into()
    }
}

impl From<MetricError> for Failure {
    fn from(e: MetricError) -> Self {
        let name = match e {
            MetricError::NestedSymmetrization => "NestedSymmetrization",
            MetricError::Unknown(_) => "UnknownMetric",
        };
        Failure::input(name, e.to_string())
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Self {
        let name = match &e {
            OracleError::NotReflexive(_) => "NotReflexive",
            OracleError::NotAntisymmetric(..) => "NotAntisymmetric",
            OracleError::NotTransitive(..) => "NotTransitive",
            OracleError::TooLarge { .. } => "TooLarge",
            OracleError::UnknownElement(_) => "UnknownElement",
            OracleError::DuplicateElement(_) => "DuplicateElement",
            OracleError::Parse { .. } => "ParseError",
            OracleError::Word(w) => return w.clone().into(),
        };
        Failure {
            code: if e.is_order_violation() { 1 } else { 2 },
            name: name.to_string(),
            message: e.to_string(),
        }
    }
}

impl From<CheckError> for Failure {
    fn from(e: CheckError) -> Self {
        match &e {
            CheckError::Ball(b) => b.clone().into(),
            CheckError::UnknownSuite(_) => Failure::input("UnknownSuite", e.to_string()),
            CheckError::UnknownFault(_) => Failure::input("UnknownFault", e.to_string()),
        }
    }
}

/// What a command produced: the structured result, its text rendering, and
/// whether it reports a violation.
struct Outcome {
    output: Output,
    text: String,
    violation: bool,
}

impl Outcome {
    fn ok(output: Output, text: impl Into<String>) -> Self {
        Outcome {
            output,
            text: text.into(),
            violation: false,
        }
    }
}

struct Context {
    alphabet: Option<Alphabet>,
    metric: Option<Metric>,
    fault: Option<Fault>,
    max_len: usize,
    seed: u64,
    exec: Exec,
}

impl Context {
    fn from_cli(cli: &Cli) -> Result<Self, Failure> {
        let alphabet = cli.alphabet.as_deref().map(Alphabet::parse).transpose()?;
        let metric = cli.metric.as_deref().map(str::parse).transpose()?;
        let fault = cli
            .inject_fault
            .as_deref()
            .map(str::parse::<Fault>)
            .transpose()?;
        Ok(Context {
            alphabet,
            metric,
            fault,
            max_len: cli.max_len,
            seed: cli.seed,
            exec: if cli.sequential {
                Exec::Sequential
            } else {
                Exec::Parallel
            },
        })
    }

    fn literal_alphabet(&self) -> Alphabet {
        self.alphabet
            .clone()
            .unwrap_or_else(Alphabet::default_alphabet)
    }

    fn word(&self, s: &str) -> Result<Word, Failure> {
        Ok(Word::parse(s, &self.literal_alphabet())?)
    }

    fn ball(&self, s: &str) -> Result<FormalBall, Failure> {
        Ok(FormalBall::parse(s, &self.literal_alphabet())?)
    }

    fn distance(&self, metric: Metric) -> check::Instrumented {
        check::Instrumented {
            metric,
            fault: self.fault,
        }
    }

    fn run_config(&self) -> Result<RunConfig, Failure> {
        let alphabet = match &self.alphabet {
            Some(a) => a.clone(),
            None => Alphabet::parse("ab")?,
        };
        Ok(RunConfig {
            alphabet,
            max_len: self.max_len,
            seed: self.seed,
            metric: self.metric,
            fault: self.fault,
            exec: self.exec,
        })
    }
}

fn parse_metric(s: &str) -> Result<Metric, Failure> {
    Ok(s.parse::<Metric>()?)
}

fn run(cx: &Context, command: &Command) -> Result<Outcome, Failure> {
    match command {
        Command::Dist { metric, x, y } => {
            let m = parse_metric(metric)?;
            let (wx, wy) = (cx.word(x)?, cx.word(y)?);
            let value = cx.distance(m).distance(&wx, &wy)?;
            let form = match cx.fault {
                None => explain_distance(m, &wx, &wy)?,
                Some(_) => describe_distance(&value),
            };
            Ok(Outcome::ok(
                Output::Dist {
                    metric: m.to_string(),
                    x: wx.to_string(),
                    y: wy.to_string(),
                    value: value.to_string(),
                    form: form.clone(),
                },
                form,
            ))
        }
        Command::BallLeq { metric, b1, b2 } => {
            let m = parse_metric(metric)?;
            let (p, q) = (cx.ball(b1)?, cx.ball(b2)?);
            let verdict = ball_leq(&cx.distance(m), &p, &q)?;
            Ok(Outcome::ok(
                Output::BallLeq {
                    metric: m.to_string(),
                    b1: p.to_string(),
                    b2: q.to_string(),
                    verdict,
                },
                verdict.to_string(),
            ))
        }
        Command::ChainLub { metric, chain } => {
            let m = parse_metric(metric)?;
            let c = ChainPresentation::parse(chain, &cx.literal_alphabet())?;
            let lub = lub_chain(&cx.distance(m), &c)?;
            Ok(Outcome::ok(
                Output::ChainLub {
                    metric: m.to_string(),
                    chain: c.to_string(),
                    center: lub.center.to_string(),
                    radius: lub.radius.to_string(),
                },
                lub.to_string(),
            ))
        }
        Command::YonedaLimit { sequence } => {
            let s = SequencePresentation::parse(sequence, &cx.literal_alphabet())?;
            let limit = yoneda_limit_qb(&s)?;
            Ok(Outcome::ok(
                Output::YonedaLimit {
                    sequence: s.to_string(),
                    limit: limit.to_string(),
                },
                limit.to_string(),
            ))
        }
        Command::ApproxChain { ball, elements } => {
            let b = cx.ball(ball)?;
            let c = approximation_chain(&b);
            let shown: Vec<String> = (0..*elements)
                .map(|n| c.element(n).expect("parametric chain").to_string())
                .collect();
            let mut text = c.to_string();
            for (n, e) in shown.iter().enumerate() {
                write!(text, "\n  {n}: {e}").expect("write to string");
            }
            Ok(Outcome::ok(
                Output::ApproxChain {
                    ball: b.to_string(),
                    chain: c.to_string(),
                    elements: shown,
                },
                text,
            ))
        }
        Command::WayBelow { b1, b2, chain } => {
            let (p, q) = (cx.ball(b1)?, cx.ball(b2)?);
            let mut verdict = way_below_sufficient_qb(&p, &q)?;
            if !verdict.is_certified() {
                verdict = way_below_refute(&cx.distance(Metric::Qb), &p, &q)?;
            }
            let mut text = verdict.to_string();
            let witness = match chain {
                None => None,
                Some(c) => {
                    let c = ChainPresentation::parse(c, &cx.literal_alphabet())?;
                    let w = way_below_witness_check(&p, &q, &c)?;
                    let (name, index, element) = match &w {
                        WitnessVerdict::WitnessFound { index, element } => {
                            ("WitnessFound", Some(*index), Some(element.to_string()))
                        }
                        WitnessVerdict::NoWitness => ("NoWitness", None, None),
                        WitnessVerdict::NotAboveB2 => ("NotAboveB2", None, None),
                    };
                    match (&index, &element) {
                        (Some(i), Some(e)) => write!(text, "\n{name} at index {i}: {e}"),
                        _ => write!(text, "\n{name}"),
                    }
                    .expect("write to string");
                    Some(WitnessOut {
                        chain: c.to_string(),
                        verdict: name.to_string(),
                        index,
                        element,
                    })
                }
            };
            Ok(Outcome::ok(
                Output::WayBelow {
                    b1: p.to_string(),
                    b2: q.to_string(),
                    verdict: verdict.to_string(),
                    witness,
                },
                text,
            ))
        }
        Command::Check {
            suite,
            max_witnesses,
        } => {
            let suites: Vec<Suite> = if suite == "all" {
                Suite::ALL.to_vec()
            } else {
                vec![suite.parse::<Suite>()?]
            };
            let cfg = cx.run_config()?;
            let mut reports = Vec::new();
            for s in suites {
                reports.push(check::run_suite(s, &cfg)?);
            }
            let passed = reports.iter().all(|r| r.passed());
            let text = reports
                .iter()
                .map(|r| r.render(Some(*max_witnesses)))
                .collect::<Vec<_>>()
                .join("\n");
            Ok(Outcome {
                output: Output::Check {
                    passed,
                    reports: reports.iter().map(ReportOut::from).collect(),
                },
                text: text.trim_end().to_string(),
                violation: !passed,
            })
        }
        Command::Oracle { file, words, radii } => {
            let (poset, source) = match file {
                Some(path) => {
                    let text = std::fs::read_to_string(path).map_err(|e| {
                        Failure::input("IoError", format!("{}: {e}", path.display()))
                    })?;
                    (FinitePoset::parse(&text)?, path.display().to_string())
                }
                None => {
                    let m = cx.metric.unwrap_or(Metric::Qb);
                    let ws = split_list(words)
                        .map(|w| cx.word(w))
                        .collect::<Result<Vec<_>, _>>()?;
                    let rs = split_list(radii)
                        .map(|r| {
                            r.parse::<Ratio>().map_err(|e| {
                                Failure::input("ParseError", format!("radius `{r}`: {e}"))
                            })
                        })
                        .collect::<Result<Vec<_>, _>>()?;
                    let (p, _) = sample_ball_poset(&cx.distance(m), &ws, &rs, cx.exec)?;
                    (p, format!("grid[{m}]"))
                }
            };
            oracle_report(&poset, source, cx.exec)
        }
    }
}

fn split_list(s: &str) -> impl Iterator<Item = &str> {
    s.split(',').map(str::trim).filter(|t| !t.is_empty())
}

fn oracle_report(p: &FinitePoset, source: String, exec: Exec) -> Result<Outcome, Failure> {
    let oracle = Oracle {
        exec,
        ..Oracle::default()
    };
    let dcpo = oracle.is_dcpo(p)?;
    let continuous = dcpo && oracle.is_continuous(p)?;
    let table = oracle.way_below_table(p)?;
    let n = p.len();
    let labels = p.labels();
    let way_below_is_leq = (0..n * n).all(|k| table[k] == p.le(k / n, k % n));
    let pairs: Vec<[String; 2]> = (0..n * n)
        .filter(|&k| table[k])
        .map(|k| [labels[k / n].clone(), labels[k % n].clone()])
        .collect();
    let yes = |b: bool| if b { "yes" } else { "no" };
    let mut text = format!("order: valid ({n} elements)\n");
    writeln!(text, "dcpo: {}, continuous: {}", yes(dcpo), yes(continuous))
        .expect("write to string");
    writeln!(text, "way-below equals leq: {}", yes(way_below_is_leq)).expect("write to string");
    text.push_str("way-below:");
    for (x, label) in labels.iter().enumerate() {
        let above: Vec<&str> = (0..n)
            .filter(|&y| table[x * n + y])
            .map(|y| labels[y].as_str())
            .collect();
        write!(text, "\n  {label} << {}", above.join(" ")).expect("write to string");
    }
    Ok(Outcome::ok(
        Output::Oracle {
            source,
            elements: labels.to_vec(),
            dcpo,
            continuous,
            way_below_is_leq,
            way_below: pairs,
        },
        text,
    ))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = Context::from_cli(&cli).and_then(|cx| run(&cx, &cli.command));
    match result {
        Ok(outcome) => {
            if cli.json {
                println!(
                    "{}",
                    serde_json::to_string(&outcome.output).expect("serializable output")
                );
            } else {
                println!("{}", outcome.text);
            }
            ExitCode::from(if outcome.violation { 1 } else { 0 })
        }
        Err(f) => {
            if cli.json {
                let out = Output::Error {
                    error: f.name.clone(),
                    message: f.message.clone(),
                    exit_code: f.code,
                };
                println!(
                    "{}",
                    serde_json::to_string(&out).expect("serializable output")
                );
            }
            eprintln!("error: {}: {}", f.name, f.message);
            ExitCode::from(f.code)
        }
    }
}
