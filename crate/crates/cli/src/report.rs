use flux_core::{Diagnostic, Severity};
use flux_oracle::SuiteReport;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Error,
}

/// Machine-readable result of any subcommand. `status`, `type` and
/// `diagnostics` are always present; the rest only when relevant.
#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub status: Status,
    #[serde(rename = "type")]
    pub ty: Option<String>,
    pub diagnostics: Vec<Diagnostic>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subtype: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub suites: Option<Vec<SuiteReport>>,
}

impl CheckReport {
    pub fn new(diagnostics: Vec<Diagnostic>) -> CheckReport {
        let mut report = CheckReport {
            status: Status::Ok,
            ty: None,
            diagnostics,
            value: None,
            subtype: None,
            witness: None,
            suites: None,
        };
        report.refresh_status();
        report
    }

    /// Recomputes `status` after diagnostics were added.
    pub fn refresh_status(&mut self) {
        self.status = if self
            .diagnostics
            .iter()
            .any(|d| d.severity == Severity::Error)
        {
            Status::Error
        } else {
            Status::Ok
        };
    }

    pub fn ok() -> CheckReport {
        CheckReport::new(Vec::new())
    }

    pub fn failed(d: Diagnostic) -> CheckReport {
        CheckReport::new(vec![d])
    }

    pub fn is_ok(&self) -> bool {
        self.status == Status::Ok
    }
}
