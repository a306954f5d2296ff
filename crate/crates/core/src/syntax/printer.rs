//! Pretty-printer producing text that parses back to the same AST.

use std::fmt::Write;

use crate::ast::{Expr, ExprKind, Main, Param, Program, Stmt, StmtKind};
use crate::subtype::TestKind;
use crate::types::Type;
use crate::value::write_string_literal;

const E_SEQ: u8 = 0;
const E_ITEM: u8 = 1;
const E_POSTFIX: u8 = 2;

pub fn print_expr(e: &Expr) -> String {
    let mut out = String::new();
    expr_at(&mut out, e, E_SEQ);
    out
}

fn expr_prec(e: &Expr) -> u8 {
    match e.kind {
        ExprKind::Concat(..) => E_SEQ,
        ExprKind::Let(..) | ExprKind::If(..) | ExprKind::For(..) => E_ITEM,
        _ => E_POSTFIX,
    }
}

fn expr_at(out: &mut String, e: &Expr, min: u8) {
    if expr_prec(e) < min {
        out.push('(');
        expr_at(out, e, E_SEQ);
        out.push(')');
        return;
    }
    match &e.kind {
        ExprKind::Empty => out.push_str("()"),
        ExprKind::Concat(l, r) => {
            expr_at(out, l, E_SEQ);
            out.push_str(", ");
            expr_at(out, r, E_ITEM);
        }
        ExprKind::Elem(n, c) => {
            write!(out, "{n}[").unwrap();
            if c.kind != ExprKind::Empty {
                expr_at(out, c, E_SEQ);
            }
            out.push(']');
        }
        ExprKind::Str(w) => write_string_literal(out, w).unwrap(),
        ExprKind::Bool(b) => write!(out, "{b}").unwrap(),
        ExprKind::Var(x) => write!(out, "${x}").unwrap(),
        ExprKind::Let(x, bound, body) => {
            write!(out, "let ${x} = ").unwrap();
            expr_at(out, bound, E_SEQ);
            out.push_str(" in ");
            expr_at(out, body, E_ITEM);
        }
        ExprKind::If(c, t, f) => {
            out.push_str("if ");
            expr_at(out, c, E_SEQ);
            out.push_str(" then ");
            expr_at(out, t, E_ITEM);
            out.push_str(" else ");
            expr_at(out, f, E_ITEM);
        }
        ExprKind::Children(x) => write!(out, "${x}/child").unwrap(),
        ExprKind::Filter(e, n) => {
            expr_at(out, e, E_POSTFIX);
            write!(out, "::{n}").unwrap();
        }
        ExprKind::For(x, src, body) => {
            write!(out, "for ${x} in ").unwrap();
            expr_at(out, src, E_SEQ);
            out.push_str(" return ");
            expr_at(out, body, E_ITEM);
        }
        ExprKind::Call(f, args) => {
            write!(out, "{f}(").unwrap();
            args_into(out, args);
            out.push(')');
        }
    }
}

fn args_into(out: &mut String, args: &[Expr]) {
    for (i, a) in args.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        expr_at(out, a, E_ITEM);
    }
}

// Statement contexts. `let` and `snapshot` bodies extend as far as possible,
// so they may only appear where nothing follows them.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Ctx {
    Top,
    SeqLeft,
    SeqRight,
    Item,
}

pub fn print_stmt(s: &Stmt) -> String {
    let mut out = String::new();
    stmt_at(&mut out, s, Ctx::Top);
    out
}

fn stmt_at(out: &mut String, s: &Stmt, ctx: Ctx) {
    let needs_parens = match &s.kind {
        StmtKind::Seq(..) => matches!(ctx, Ctx::SeqRight | Ctx::Item),
        StmtKind::Let(..) | StmtKind::Snapshot(..) => matches!(ctx, Ctx::SeqLeft | Ctx::Item),
        _ => false,
    };
    if needs_parens {
        out.push('(');
        stmt_at(out, s, Ctx::Top);
        out.push(')');
        return;
    }
    match &s.kind {
        StmtKind::Skip => out.push_str("skip"),
        StmtKind::Delete => out.push_str("delete"),
        StmtKind::Seq(l, r) => {
            stmt_at(out, l, Ctx::SeqLeft);
            out.push_str("; ");
            let rc = if ctx == Ctx::Top {
                Ctx::SeqRight
            } else {
                Ctx::Item
            };
            stmt_at(out, r, rc);
        }
        StmtKind::If(c, t, f) => {
            out.push_str("if ");
            expr_at(out, c, E_SEQ);
            out.push_str(" then ");
            stmt_at(out, t, Ctx::Item);
            out.push_str(" else ");
            stmt_at(out, f, Ctx::Item);
        }
        StmtKind::Let(x, e, body) => {
            write!(out, "let ${x} = ").unwrap();
            expr_at(out, e, E_SEQ);
            out.push_str(" in ");
            stmt_at(out, body, Ctx::Top);
        }
        StmtKind::Call(p, args) => {
            write!(out, "{p}(").unwrap();
            args_into(out, args);
            out.push(')');
        }
        StmtKind::Insert(e) => {
            out.push_str("insert ");
            expr_at(out, e, E_SEQ);
        }
        StmtKind::Rename(n) => write!(out, "rename {n}").unwrap(),
        StmtKind::Snapshot(x, body) => {
            write!(out, "snapshot ${x} in ").unwrap();
            stmt_at(out, body, Ctx::Top);
        }
        StmtKind::Test(phi, body) => {
            match phi {
                TestKind::Label(n) => write!(out, "{n}?").unwrap(),
                TestKind::Wildcard => out.push_str("*?"),
                TestKind::Bool => out.push_str("bool?"),
                TestKind::String => out.push_str("string?"),
            }
            stmt_at(out, body, Ctx::Item);
        }
        StmtKind::Nav(d, body) => {
            write!(out, "{}[", d.keyword()).unwrap();
            stmt_at(out, body, Ctx::Top);
            out.push(']');
        }
    }
}

/// A type in a position where `,` separates items.
pub fn print_type_param(t: &Type) -> String {
    match t {
        Type::Or(..) | Type::Seq(..) => format!("({t})"),
        _ => t.to_string(),
    }
}

fn params_into(out: &mut String, params: &[Param]) {
    for (i, p) in params.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        write!(out, "${} : {}", p.name, print_type_param(&p.ty)).unwrap();
    }
}

pub fn print_program(p: &Program) -> String {
    let mut out = String::new();
    for d in &p.types {
        writeln!(out, "type {} = {};", d.name, d.body).unwrap();
    }
    for v in &p.variables {
        let tree = if v.tree { "tree " } else { "" };
        writeln!(out, "declare {tree}variable ${} : {};", v.name, v.ty).unwrap();
    }
    for f in &p.functions {
        write!(out, "declare function {}(", f.name).unwrap();
        params_into(&mut out, &f.params);
        writeln!(out, ") : {} {{\n  {}\n}};", f.ret, print_expr(&f.body)).unwrap();
    }
    for d in &p.procedures {
        write!(out, "declare procedure {}(", d.name).unwrap();
        params_into(&mut out, &d.params);
        writeln!(
            out,
            ") : {} => {} {{\n  {}\n}};",
            d.input,
            d.output,
            print_stmt(&d.body)
        )
        .unwrap();
    }
    match &p.main {
        Main::Query { expr, ty } => writeln!(out, "query {} : {}", print_expr(expr), ty).unwrap(),
        Main::Update {
            stmt,
            input,
            output,
        } => writeln!(out, "update {} : {} => {}", print_stmt(stmt), input, output).unwrap(),
    }
    out
}
