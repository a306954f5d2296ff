use crate::ast::Multiplicity;
use crate::diag::{Diagnostic, Rule, Span};
use crate::types::{Atom, Type};

/// Failure of one of the algorithmic judgments.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TypeError {
    #[error("undeclared type variable {0}")]
    UndeclaredTypeVar(String),

    #[error("top-level variable {var} in definition of {name}")]
    UnguardedTypeVar { name: String, var: String },

    #[error("unbound variable ${name}")]
    UnboundVariable {
        name: String,
        span: Option<Box<Span>>,
    },

    #[error("${name} is a forest variable; a tree variable is required here")]
    NotTreeVariable {
        name: String,
        span: Option<Box<Span>>,
    },

    #[error("tree variable ${name} must be bound to an atomic type, found {found}")]
    TreeVarNotAtomic {
        name: String,
        found: Type,
        span: Option<Box<Span>>,
    },

    #[error("${name}/child requires an element type, but ${name} has type {found}")]
    ChildOfNonElement {
        name: String,
        found: Atom,
        span: Option<Box<Span>>,
    },

    #[error("condition has type {found}, which is not a subtype of bool")]
    ConditionNotBool {
        found: Type,
        span: Option<Box<Span>>,
    },

    #[error("undeclared function {name}")]
    UndeclaredFunction {
        name: String,
        span: Option<Box<Span>>,
    },

    #[error("undeclared procedure {name}")]
    UndeclaredProcedure {
        name: String,
        span: Option<Box<Span>>,
    },

    #[error("{name} expects {expected} argument(s), got {found}")]
    Arity {
        name: String,
        expected: usize,
        found: usize,
        span: Option<Box<Span>>,
    },

    #[error("argument {index} of {name}: {found} is not a subtype of {expected}")]
    Argument {
        name: String,
        index: usize,
        expected: Type,
        found: Type,
        span: Option<Box<Span>>,
    },

    #[error("input of procedure {name}: focus type {found} is not a subtype of {expected}")]
    ProcedureInput {
        name: String,
        expected: Type,
        found: Type,
        span: Option<Box<Span>>,
    },

    #[error("{context}: {found} is not a subtype of {expected}")]
    Ascription {
        context: String,
        expected: Type,
        found: Type,
        span: Option<Box<Span>>,
        update: bool,
    },

    #[error("{construct} requires {expected} focus")]
    Multiplicity {
        construct: &'static str,
        expected: Multiplicity,
        span: Option<Box<Span>>,
    },

    #[error("singular focus must be atomic, found {found}")]
    SingularNotAtomic {
        found: Type,
        span: Option<Box<Span>>,
    },

    #[error("insert requires the empty focus (), found {found}; use left[..] or right[..] to reach an empty position")]
    InsertNonEmpty {
        found: Type,
        span: Option<Box<Span>>,
    },

    #[error("{construct} requires an element focus, found {found}")]
    NotElement {
        construct: &'static str,
        found: Atom,
        span: Option<Box<Span>>,
    },

    #[error("{kind} {name} is declared more than once")]
    Duplicate {
        kind: &'static str,
        name: String,
        span: Option<Box<Span>>,
    },
}

impl TypeError {
    pub fn rule(&self) -> Rule {
        use TypeError::*;
        match self {
            UndeclaredTypeVar(_) => Rule::TypeVar,
            UnguardedTypeVar { .. } => Rule::SigTopLevelVar,
            UnboundVariable { .. } | NotTreeVariable { .. } => Rule::QueryVar,
            TreeVarNotAtomic { .. } => Rule::QueryEnv,
            ChildOfNonElement { .. } => Rule::QueryChild,
            ConditionNotBool { .. } => Rule::QueryIf,
            UndeclaredFunction { .. } | Arity { .. } | Argument { .. } => Rule::QueryCall,
            UndeclaredProcedure { .. } | ProcedureInput { .. } => Rule::UpdCall,
            Ascription { update: false, .. } => Rule::QueryAscription,
            Ascription { update: true, .. } => Rule::UpdAscription,
            Multiplicity { .. } | SingularNotAtomic { .. } => Rule::UpdMultiplicity,
            InsertNonEmpty { .. } => Rule::UpdInsert,
            NotElement { .. } => Rule::UpdElement,
            Duplicate { .. } => Rule::ProgDuplicate,
        }
    }

    pub fn span(&self) -> Option<&Span> {
        use TypeError::*;
        match self {
            UndeclaredTypeVar(_) | UnguardedTypeVar { .. } => None,
            UnboundVariable { span, .. }
            | NotTreeVariable { span, .. }
            | TreeVarNotAtomic { span, .. }
            | ChildOfNonElement { span, .. }
            | ConditionNotBool { span, .. }
            | UndeclaredFunction { span, .. }
            | UndeclaredProcedure { span, .. }
            | Arity { span, .. }
            | Argument { span, .. }
            | ProcedureInput { span, .. }
            | Ascription { span, .. }
            | Multiplicity { span, .. }
            | SingularNotAtomic { span, .. }
            | InsertNonEmpty { span, .. }
            | NotElement { span, .. }
            | Duplicate { span, .. } => span.as_deref(),
        }
    }

    pub fn to_diagnostic(&self) -> Diagnostic {
        Diagnostic::error(self.rule(), self.to_string()).with_span(self.span().cloned())
    }
}
