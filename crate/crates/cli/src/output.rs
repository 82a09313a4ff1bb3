//! Machine-readable results: one JSON object per invocation.

use serde::{Deserialize, Serialize};

use worddomain::check::{Section, SuiteReport};
use worddomain::metrics::Violation;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Output {
    Dist {
        metric: String,
        x: String,
        y: String,
        value: String,
        form: String,
    },
    BallLeq {
        metric: String,
        b1: String,
        b2: String,
        verdict: bool,
    },
    ChainLub {
        metric: String,
        chain: String,
        center: String,
        radius: String,
    },
    YonedaLimit {
        sequence: String,
        limit: String,
    },
    ApproxChain {
        ball: String,
        chain: String,
        elements: Vec<String>,
    },
    WayBelow {
        b1: String,
        b2: String,
        verdict: String,
        witness: Option<WitnessOut>,
    },
    Check {
        passed: bool,
        reports: Vec<ReportOut>,
    },
    Oracle {
        source: String,
        elements: Vec<String>,
        dcpo: bool,
        continuous: bool,
        way_below_is_leq: bool,
        way_below: Vec<[String; 2]>,
    },
    Error {
        error: String,
        message: String,
        exit_code: u8,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessOut {
    pub chain: String,
    pub verdict: String,
    pub index: Option<u64>,
    pub element: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportOut {
    pub suite: String,
    pub seed: u64,
    pub passed: bool,
    pub checked: usize,
    pub violations: usize,
    pub sections: Vec<SectionOut>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectionOut {
    pub name: String,
    pub checked: usize,
    pub notes: Vec<String>,
    pub violations: Vec<ViolationOut>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ViolationOut {
    pub axiom: String,
    pub witness: Vec<String>,
    pub detail: String,
}

impl From<&Violation> for ViolationOut {
    fn from(v: &Violation) -> Self {
        ViolationOut {
            axiom: v.axiom.clone(),
            witness: v.witness.clone(),
            detail: v.detail.clone(),
        }
    }
}

impl From<&Section> for SectionOut {
    fn from(s: &Section) -> Self {
        SectionOut {
            name: s.name.clone(),
            checked: s.checked,
            notes: s.notes.clone(),
            violations: s.violations.iter().map(ViolationOut::from).collect(),
        }
    }
}

impl From<&SuiteReport> for ReportOut {
    fn from(r: &SuiteReport) -> Self {
        ReportOut {
            suite: r.suite.to_string(),
            seed: r.seed,
            passed: r.passed(),
            checked: r.checked(),
            violations: r.violation_count(),
            sections: r.sections.iter().map(SectionOut::from).collect(),
        }
    }
}
