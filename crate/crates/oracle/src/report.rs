use std::fmt;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

/// Result of one case of a property.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    /// The case could not exercise the property, e.g. an uninhabited type.
    Vacuous,
    /// A counterexample, already minimized.
    Fail(String),
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub name: String,
    pub cases: usize,
    pub vacuous: usize,
    pub failures: usize,
    /// The minimized counterexample of the lowest-numbered failing case.
    pub counterexample: Option<String>,
    pub millis: u128,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    pub fn elapsed(&self) -> Duration {
        Duration::from_millis(self.millis as u64)
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "ok" } else { "FAILED" };
        write!(
            f,
            "{:<32} {status:<6} {} cases, {} vacuous, {} failures ({} ms)",
            self.name, self.cases, self.vacuous, self.failures, self.millis
        )?;
        if let Some(c) = &self.counterexample {
            write!(f, "\n    counterexample: {c}")?;
        }
        Ok(())
    }
}

/// Runs `cases` independent cases in parallel.
pub fn run_cases(
    name: &str,
    cases: usize,
    case: impl Fn(usize) -> Outcome + Sync + Send,
) -> SuiteReport {
    let start = Instant::now();
    let outcomes: Vec<Outcome> = (0..cases).into_par_iter().map(case).collect();
    summarize(name, outcomes, start)
}

pub(crate) fn summarize(name: &str, outcomes: Vec<Outcome>, start: Instant) -> SuiteReport {
    let vacuous = outcomes.iter().filter(|o| **o == Outcome::Vacuous).count();
    let mut failures = 0;
    let mut counterexample = None;
    for o in &outcomes {
        if let Outcome::Fail(msg) = o {
            failures += 1;
            counterexample.get_or_insert_with(|| msg.clone());
        }
    }
    SuiteReport {
        name: name.to_string(),
        cases: outcomes.len(),
        vacuous,
        failures,
        counterexample,
        millis: start.elapsed().as_millis(),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub seed: u64,
    pub suites: Vec<SuiteReport>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(SuiteReport::passed)
    }

    pub fn failures(&self) -> usize {
        self.suites.iter().map(|s| s.failures).sum()
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "seed {}", self.seed)?;
        for s in &self.suites {
            writeln!(f, "{s}")?;
        }
        let total: usize = self.suites.iter().map(|s| s.cases).sum();
        write!(
            f,
            "{} suites, {total} cases, {} failures",
            self.suites.len(),
            self.failures()
        )
    }
}
