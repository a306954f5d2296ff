use std::fmt;
use std::sync::Arc;

use serde::Serialize;

/// Source location of an AST node.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct Span {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub file: Option<Arc<str>>,
    pub start: usize,
    pub end: usize,
    pub start_line: u32,
    pub start_col: u32,
    pub end_line: u32,
    pub end_col: u32,
}

impl Span {
    /// Smallest span covering both.
    pub fn to(&self, other: &Span) -> Span {
        let first = if self.start <= other.start {
            self
        } else {
            other
        };
        let last = if self.end >= other.end { self } else { other };
        Span {
            file: self.file.clone(),
            start: first.start,
            end: last.end,
            start_line: first.start_line,
            start_col: first.start_col,
            end_line: last.end_line,
            end_col: last.end_col,
        }
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(file) = &self.file {
            write!(f, "{file}:")?;
        }
        write!(f, "{}:{}", self.start_line, self.start_col)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

/// Names the judgment or rule a diagnostic comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Rule {
    #[serde(rename = "syntax")]
    Syntax,
    #[serde(rename = "sig-undeclared-var")]
    SigUndeclaredVar,
    #[serde(rename = "sig-top-level-var")]
    SigTopLevelVar,
    #[serde(rename = "type-var")]
    TypeVar,
    #[serde(rename = "q-var")]
    QueryVar,
    #[serde(rename = "q-child")]
    QueryChild,
    #[serde(rename = "q-if")]
    QueryIf,
    #[serde(rename = "q-call")]
    QueryCall,
    #[serde(rename = "q-ascription")]
    QueryAscription,
    #[serde(rename = "q-env")]
    QueryEnv,
    #[serde(rename = "prog-duplicate")]
    ProgDuplicate,
    #[serde(rename = "u-multiplicity")]
    UpdMultiplicity,
    #[serde(rename = "u-insert")]
    UpdInsert,
    #[serde(rename = "u-element")]
    UpdElement,
    #[serde(rename = "u-call")]
    UpdCall,
    #[serde(rename = "u-ascription")]
    UpdAscription,
    /// Evaluation failures and inputs that do not conform to their types.
    #[serde(rename = "runtime")]
    Runtime,
}

impl Rule {
    pub fn as_str(self) -> &'static str {
        match self {
            Rule::Syntax => "syntax",
            Rule::SigUndeclaredVar => "sig-undeclared-var",
            Rule::SigTopLevelVar => "sig-top-level-var",
            Rule::TypeVar => "type-var",
            Rule::QueryVar => "q-var",
            Rule::QueryChild => "q-child",
            Rule::QueryIf => "q-if",
            Rule::QueryCall => "q-call",
            Rule::QueryAscription => "q-ascription",
            Rule::QueryEnv => "q-env",
            Rule::ProgDuplicate => "prog-duplicate",
            Rule::UpdMultiplicity => "u-multiplicity",
            Rule::UpdInsert => "u-insert",
            Rule::UpdElement => "u-element",
            Rule::UpdCall => "u-call",
            Rule::UpdAscription => "u-ascription",
            Rule::Runtime => "runtime",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub message: String,
    pub rule: Rule,
    pub span: Option<Span>,
}

impl Diagnostic {
    pub fn error(rule: Rule, message: impl Into<String>) -> Diagnostic {
        Diagnostic {
            severity: Severity::Error,
            message: message.into(),
            rule,
            span: None,
        }
    }

    pub fn with_span(mut self, span: Option<Span>) -> Diagnostic {
        self.span = span;
        self
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        if let Some(span) = &self.span {
            write!(f, "{span}: ")?;
        }
        write!(f, "{sev}[{}]: {}", self.rule, self.message)
    }
}
