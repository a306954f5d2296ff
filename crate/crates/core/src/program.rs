//! Whole-program checking: headers are collected into Δ first, then every
//! body and the main query or update are checked against their annotations.

use crate::ast::{Main, Multiplicity, Program};
use crate::diag::{Diagnostic, Rule, Span};
use crate::env::{Binding, FunctionSig, GlobalDecls, ProcedureSig, TypeEnv};
use crate::error::TypeError;
use crate::query::Checker;
use crate::types::{check_signature, Signature, Type};

#[derive(Clone, Debug)]
pub struct ProgramReport {
    pub diagnostics: Vec<Diagnostic>,
    /// Synthesized type of the main query, or output type of the main update.
    pub main_type: Option<Type>,
}

impl ProgramReport {
    pub fn is_ok(&self) -> bool {
        !self.diagnostics.iter().any(Diagnostic::is_error)
    }
}

/// Pass 1: function and procedure headers, with duplicates diagnosed.
pub fn collect_decls(p: &Program) -> (GlobalDecls, Vec<Diagnostic>) {
    let mut decls = GlobalDecls::new();
    let mut diags = Vec::new();
    for f in &p.functions {
        let sig = FunctionSig {
            params: f.params.iter().map(|p| p.ty.clone()).collect(),
            ret: f.ret.clone(),
        };
        if let Err(e) = decls.declare_function(&f.name, sig) {
            diags.push(with_span(e, &f.span).to_diagnostic());
        }
    }
    for d in &p.procedures {
        let sig = ProcedureSig {
            params: d.params.iter().map(|p| p.ty.clone()).collect(),
            input: d.input.clone(),
            output: d.output.clone(),
        };
        if let Err(e) = decls.declare_procedure(&d.name, sig) {
            diags.push(with_span(e, &d.span).to_diagnostic());
        }
    }
    (decls, diags)
}

fn with_span(e: TypeError, span: &Span) -> TypeError {
    match e {
        TypeError::Duplicate { kind, name, .. } => TypeError::Duplicate {
            kind,
            name,
            span: Some(Box::new(span.clone())),
        },
        other => other,
    }
}

/// Γ formed by the program's `declare variable` entries.
pub fn global_env(p: &Program) -> Result<TypeEnv, TypeError> {
    let mut env = TypeEnv::new();
    for v in &p.variables {
        let b = if v.tree {
            match v.ty.as_atom() {
                Some(a) => Binding::Tree(a.clone()),
                None => {
                    return Err(TypeError::TreeVarNotAtomic {
                        name: v.name.clone(),
                        found: v.ty.clone(),
                        span: Some(Box::new(v.span.clone())),
                    })
                }
            }
        } else {
            Binding::Forest(v.ty.clone())
        };
        env.insert(v.name.clone(), b);
    }
    Ok(env)
}

fn annotations(p: &Program) -> Vec<(&Type, &Span)> {
    let mut out = Vec::new();
    for v in &p.variables {
        out.push((&v.ty, &v.span));
    }
    for f in &p.functions {
        out.extend(f.params.iter().map(|x| (&x.ty, &f.span)));
        out.push((&f.ret, &f.span));
    }
    for d in &p.procedures {
        out.extend(d.params.iter().map(|x| (&x.ty, &d.span)));
        out.push((&d.input, &d.span));
        out.push((&d.output, &d.span));
    }
    match &p.main {
        Main::Query { ty, .. } => out.push((ty, &p.main_span)),
        Main::Update { input, output, .. } => {
            out.push((input, &p.main_span));
            out.push((output, &p.main_span));
        }
    }
    out
}

fn in_context(context: &str, e: &TypeError) -> Diagnostic {
    let d = e.to_diagnostic();
    if matches!(e, TypeError::Ascription { .. }) {
        d
    } else {
        Diagnostic {
            message: format!("in {context}: {}", d.message),
            ..d
        }
    }
}

pub fn check_program(sig: &Signature, p: &Program) -> ProgramReport {
    let mut diagnostics = check_signature(sig);
    if !diagnostics.is_empty() {
        return ProgramReport {
            diagnostics,
            main_type: None,
        };
    }
    for (t, span) in annotations(p) {
        for x in sig.undeclared_in(t) {
            diagnostics.push(
                Diagnostic::error(Rule::TypeVar, format!("undeclared type variable {x}"))
                    .with_span(Some(span.clone())),
            );
        }
    }
    let (decls, dups) = collect_decls(p);
    diagnostics.extend(dups);
    let env = match global_env(p) {
        Ok(env) => env,
        Err(e) => {
            diagnostics.push(e.to_diagnostic());
            TypeEnv::new()
        }
    };
    if !diagnostics.is_empty() {
        return ProgramReport {
            diagnostics,
            main_type: None,
        };
    }

    let mut ck = Checker::new(sig, &decls);
    for f in &p.functions {
        let mut g = env.clone();
        for x in &f.params {
            g.insert(x.name.clone(), Binding::Forest(x.ty.clone()));
        }
        let context = format!("function {}", f.name);
        if let Err(e) = ck.check_expr_in(&g, &f.body, &f.ret, &format!("body of {context}")) {
            diagnostics.push(in_context(&context, &e));
        }
    }
    for d in &p.procedures {
        let mut g = env.clone();
        for x in &d.params {
            g.insert(x.name.clone(), Binding::Forest(x.ty.clone()));
        }
        let context = format!("procedure {}", d.name);
        let r = ck.check_stmt_in(
            &g,
            Multiplicity::Plural,
            &d.input,
            &d.body,
            &d.output,
            &format!("body of {context}"),
        );
        if let Err(e) = r {
            diagnostics.push(in_context(&context, &e));
        }
    }

    let (synth, expected, span) = match &p.main {
        Main::Query { expr, ty } => (ck.synth_expr(&env, expr), ty, &expr.span),
        Main::Update {
            stmt,
            input,
            output,
        } => (
            ck.synth_stmt(&env, Multiplicity::Plural, input, stmt),
            output,
            &stmt.span,
        ),
    };
    let context = if p.is_query() {
        "main query"
    } else {
        "main update"
    };
    let main_type = match synth {
        Ok(t) => {
            match ck.is_subtype(&t, expected) {
                Ok(true) => {}
                Ok(false) => diagnostics.push(
                    TypeError::Ascription {
                        context: context.to_string(),
                        expected: expected.clone(),
                        found: t.clone(),
                        span: Some(Box::new(span.clone())),
                        update: !p.is_query(),
                    }
                    .to_diagnostic(),
                ),
                Err(e) => diagnostics.push(in_context(context, &e)),
            }
            Some(t)
        }
        Err(e) => {
            diagnostics.push(in_context(context, &e));
            None
        }
    };
    ProgramReport {
        diagnostics,
        main_type,
    }
}
