//! Regular-expression types for XML forests, with typecheckers for a small
//! query language and a small update language.
//!
//! Types are regular expressions over atoms (`bool`, `string`, `n[t]`),
//! values are forests, and subtyping is language inclusion. Queries are
//! typed by synthesis with explicit ascription; updates are typed by
//! transforming the type of the focus.

pub mod ast;
pub(crate) mod deriv;
pub mod diag;
pub mod enumerate;
pub mod env;
pub mod error;
pub mod eval;
pub mod member;
pub mod program;
pub mod query;
pub mod subtype;
pub mod syntax;
pub mod types;
pub mod update;
pub mod value;

pub use ast::{Expr, ExprKind, Main, Multiplicity, Program, Stmt, StmtKind};
pub use diag::{Diagnostic, Rule, Severity, Span};
pub use enumerate::{
    subtype_oracle, values_upto, words_upto, Bounds, OracleVerdict, ValueEnumerator,
};
pub use env::{Binding, FunctionSig, GlobalDecls, ProcedureSig, TypeEnv};
pub use error::TypeError;
pub use eval::{apply_update, conforms, eval_query, EvalError, Runtime, ValueBinding, ValueEnv};
pub use member::{member, Matcher};
pub use program::{check_program, ProgramReport};
pub use query::{check_expr, filter_label, synth_expr, synth_for, Checker};
pub use subtype::{atom_subtype, env_subtype, subtype, test_subtype, Subtyper, TestKind};
pub use syntax::{
    parse_expr, parse_program, parse_signature, parse_stmt, parse_type, parse_value, SyntaxError,
};
pub use types::{check_signature, syntactic_atoms, Atom, Label, Signature, Type};
pub use update::{check_stmt, synth_iter, synth_stmt};
pub use value::{Forest, Tree, Value};
