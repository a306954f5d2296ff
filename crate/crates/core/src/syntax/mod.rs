//! Concrete syntax: lexer, recursive-descent parser, and pretty-printer.

mod lexer;
mod parser;
mod printer;

use std::sync::Arc;

use crate::ast::{Expr, Program, Stmt};
use crate::diag::{Diagnostic, Rule, Span};
use crate::env::TypeEnv;
use crate::types::{Signature, Type};
use crate::value::Forest;

use parser::Parser;

pub use printer::{print_expr, print_program, print_stmt, print_type_param};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{span}: {message}")]
pub struct SyntaxError {
    pub message: String,
    pub span: Span,
    /// Token classes that would have been accepted.
    pub expected: Vec<String>,
}

impl SyntaxError {
    pub fn offset(&self) -> usize {
        self.span.start
    }

    pub fn to_diagnostic(&self) -> Diagnostic {
        Diagnostic::error(Rule::Syntax, self.message.clone()).with_span(Some(self.span.clone()))
    }
}

fn whole<T>(
    src: &str,
    f: impl FnOnce(&mut Parser) -> Result<T, SyntaxError>,
) -> Result<T, SyntaxError> {
    let mut p = Parser::new(src, None)?;
    let out = f(&mut p)?;
    p.finish()?;
    Ok(out)
}

pub fn parse_type(src: &str) -> Result<Type, SyntaxError> {
    whole(src, |p| p.ty())
}

/// A sequence of `type X = t` declarations, optionally separated by `;`.
pub fn parse_signature(src: &str) -> Result<Signature, SyntaxError> {
    whole(src, |p| p.signature())
}

pub fn parse_value(src: &str) -> Result<Forest, SyntaxError> {
    whole(src, |p| p.forest())
}

pub fn parse_expr(src: &str) -> Result<Expr, SyntaxError> {
    whole(src, |p| p.expr())
}

/// Parses an expression whose free variables are bound by `env`, so that
/// tree and forest variables are told apart.
pub fn parse_expr_in(src: &str, env: &TypeEnv) -> Result<Expr, SyntaxError> {
    let mut p = Parser::new(src, None)?.with_env(env);
    let e = p.expr()?;
    p.finish()?;
    Ok(e)
}

pub fn parse_stmt(src: &str) -> Result<Stmt, SyntaxError> {
    whole(src, |p| p.stmt())
}

pub fn parse_stmt_in(src: &str, env: &TypeEnv) -> Result<Stmt, SyntaxError> {
    let mut p = Parser::new(src, None)?.with_env(env);
    let s = p.stmt()?;
    p.finish()?;
    Ok(s)
}

/// Parses a whole `.muxq` or `.flux` program. The signature is the one
/// formed by its `type` declarations.
pub fn parse_program(src: &str) -> Result<(Program, Signature), SyntaxError> {
    parse_program_file(src, None)
}

pub fn parse_program_file(
    src: &str,
    file: Option<&str>,
) -> Result<(Program, Signature), SyntaxError> {
    let mut p = Parser::new(src, file.map(Arc::from))?;
    let prog = p.program()?;
    let sig = prog.signature();
    Ok((prog, sig))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ast::{ExprKind, Main, StmtKind};
    use crate::types::Label;

    #[test]
    fn type_precedence() {
        let t = parse_type("a[] | b[], c[]*").unwrap();
        assert_eq!(t.to_string(), "a[]|b[],c[]*");
        assert!(matches!(t, Type::Or(..)));
        assert_eq!(parse_type("n[()]").unwrap(), parse_type("n[]").unwrap());
        assert_eq!(
            parse_type("a[]+").unwrap(),
            Type::seq(parse_type("a[]").unwrap(), parse_type("a[]*").unwrap())
        );
        assert_eq!(
            parse_type("c[]?").unwrap(),
            Type::or(parse_type("c[]").unwrap(), Type::Empty)
        );
        assert!(parse_type("foo").is_err());
    }

    #[test]
    fn unfinished_query_reports_offset() {
        let err = parse_program("query (").unwrap_err();
        assert_eq!(err.offset(), 7);
        assert!(!err.expected.is_empty());
    }

    #[test]
    fn empty_query_program() {
        let (p, sig) = parse_program("query () : ()").unwrap();
        assert!(sig.is_empty());
        assert_eq!(
            p.main.clone(),
            Main::Query {
                expr: Expr::at(
                    ExprKind::Empty,
                    match &p.main {
                        Main::Query { expr, .. } => expr.span.clone(),
                        _ => unreachable!(),
                    }
                ),
                ty: Type::Empty
            }
        );
    }

    #[test]
    fn child_paths_on_tree_and_forest_variables() {
        let mut env = TypeEnv::new();
        env.insert("x", crate::env::Binding::Tree(crate::types::Atom::Bool));
        let e = parse_expr_in("$x/child", &env).unwrap();
        assert_eq!(e.without_spans(), Expr::children("x"));
        let e = parse_expr("let $v = () in $v/leaf")
            .unwrap()
            .without_spans();
        let leaf = Label::new("leaf").unwrap();
        assert_eq!(
            e,
            Expr::let_in(
                "v",
                Expr::empty(),
                Expr::for_in(
                    "y_1",
                    Expr::var("v"),
                    Expr::filter(Expr::children("y_1"), leaf)
                )
            )
        );
    }

    #[test]
    fn shadowing_binders_are_renamed() {
        let e = parse_expr("for $y in () return for $y in $y return $y").unwrap();
        assert_eq!(
            e.without_spans(),
            Expr::for_in(
                "y",
                Expr::empty(),
                Expr::for_in("y_1", Expr::var("y"), Expr::var("y_1"))
            )
        );
    }

    #[test]
    fn test_binds_tighter_than_sequence() {
        let s = parse_stmt("a?skip; delete").unwrap();
        assert!(matches!(s.kind, StmtKind::Seq(..)));
        let s = parse_stmt("iter[a?children[iter[b?right[insert c[]]]]]").unwrap();
        assert!(matches!(
            s.kind,
            StmtKind::Nav(crate::ast::Direction::Iter, _)
        ));
    }

    #[test]
    fn values() {
        let v = parse_value("a[b[], \"x\"], true").unwrap();
        assert_eq!(v.to_string(), "a[b[],\"x\"],true");
        assert!(parse_value("()").unwrap().is_empty());
    }
}
