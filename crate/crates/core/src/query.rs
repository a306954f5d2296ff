//! Algorithmic typing of queries: the filter function f_n, synthesis g_e,
//! and the for-iteration function h. No subsumption; subtyping is used only
//! for call arguments, conditions, and ascriptions.

use crate::ast::{Expr, ExprKind, Program};
use crate::diag::{Diagnostic, Span};
use crate::env::{Binding, GlobalDecls, TypeEnv};
use crate::error::TypeError;
use crate::subtype::Subtyper;
use crate::types::{unfold, Atom, Label, Signature, Type};

/// `τ::n ⇒ τ'`: keeps element atoms labelled `n`, maps every other atom
/// to `()`, and is homomorphic elsewhere.
pub fn filter_label(sig: &Signature, t: &Type, n: &Label) -> Result<Type, TypeError> {
    Ok(match t {
        Type::Empty => Type::Empty,
        Type::Atom(Atom::Element(m, _)) if m == n => t.clone(),
        Type::Atom(_) => Type::Empty,
        Type::Or(l, r) => Type::or(filter_label(sig, l, n)?, filter_label(sig, r, n)?),
        Type::Seq(l, r) => Type::seq(filter_label(sig, l, n)?, filter_label(sig, r, n)?),
        Type::Star(t) => Type::star(filter_label(sig, t, n)?),
        Type::Var(x) => filter_label(sig, unfold(sig, x)?, n)?,
    })
}

/// Shared state for the query and update judgments: the declarations Δ and
/// a subtyping engine whose cache persists across checks.
pub struct Checker<'a> {
    pub(crate) decls: &'a GlobalDecls,
    pub(crate) sub: Subtyper<'a>,
}

impl<'a> Checker<'a> {
    pub fn new(sig: &'a Signature, decls: &'a GlobalDecls) -> Checker<'a> {
        Checker {
            decls,
            sub: Subtyper::new(sig),
        }
    }

    pub fn signature(&self) -> &'a Signature {
        self.sub.signature()
    }

    pub fn decls(&self) -> &'a GlobalDecls {
        self.decls
    }

    pub fn is_subtype(&mut self, t1: &Type, t2: &Type) -> Result<bool, TypeError> {
        self.sub.is_subtype(t1, t2)
    }

    /// g_e(Γ): the unique type of `e`.
    pub fn synth_expr(&mut self, g: &TypeEnv, e: &Expr) -> Result<Type, TypeError> {
        let span = || Some(Box::new(e.span.clone()));
        Ok(match &e.kind {
            ExprKind::Empty => Type::Empty,
            ExprKind::Concat(l, r) => Type::seq(self.synth_expr(g, l)?, self.synth_expr(g, r)?),
            ExprKind::Elem(n, c) => Type::element(n.clone(), self.synth_expr(g, c)?),
            ExprKind::Str(_) => Type::string(),
            ExprKind::Bool(_) => Type::bool(),
            ExprKind::Var(x) => match g.get(x) {
                Some(b) => b.as_type(),
                None => {
                    return Err(TypeError::UnboundVariable {
                        name: x.clone(),
                        span: span(),
                    })
                }
            },
            ExprKind::Let(x, bound, body) => {
                let t1 = self.synth_expr(g, bound)?;
                self.synth_expr(&g.extended(x, Binding::Forest(t1)), body)?
            }
            ExprKind::If(c, t, f) => {
                self.check_condition(g, c)?;
                Type::or(self.synth_expr(g, t)?, self.synth_expr(g, f)?)
            }
            ExprKind::Children(x) => match g.get(x) {
                Some(Binding::Tree(Atom::Element(_, content))) => (**content).clone(),
                Some(Binding::Tree(a)) => {
                    return Err(TypeError::ChildOfNonElement {
                        name: x.clone(),
                        found: a.clone(),
                        span: span(),
                    })
                }
                Some(Binding::Forest(_)) => {
                    return Err(TypeError::NotTreeVariable {
                        name: x.clone(),
                        span: span(),
                    })
                }
                None => {
                    return Err(TypeError::UnboundVariable {
                        name: x.clone(),
                        span: span(),
                    })
                }
            },
            ExprKind::Filter(inner, n) => {
                let t = self.synth_expr(g, inner)?;
                filter_label(self.signature(), &t, n)?
            }
            ExprKind::For(x, src, body) => {
                let t1 = self.synth_expr(g, src)?;
                self.synth_for(g, x, &t1, body)?
            }
            ExprKind::Call(f, args) => {
                let decls = self.decls;
                let Some(sig) = decls.function(f) else {
                    return Err(TypeError::UndeclaredFunction {
                        name: f.clone(),
                        span: span(),
                    });
                };
                self.check_args(g, f, &sig.params, args, &e.span)?;
                sig.ret.clone()
            }
        })
    }

    pub(crate) fn check_condition(&mut self, g: &TypeEnv, c: &Expr) -> Result<(), TypeError> {
        let tc = self.synth_expr(g, c)?;
        if self.sub.is_subtype(&tc, &Type::bool())? {
            Ok(())
        } else {
            Err(TypeError::ConditionNotBool {
                found: tc,
                span: Some(Box::new(c.span.clone())),
            })
        }
    }

    /// Arguments are checked left to right; the first failure is reported.
    pub(crate) fn check_args(
        &mut self,
        g: &TypeEnv,
        name: &str,
        params: &[Type],
        args: &[Expr],
        call_span: &Span,
    ) -> Result<(), TypeError> {
        if params.len() != args.len() {
            return Err(TypeError::Arity {
                name: name.to_string(),
                expected: params.len(),
                found: args.len(),
                span: Some(Box::new(call_span.clone())),
            });
        }
        for (i, (p, a)) in params.iter().zip(args).enumerate() {
            let ta = self.synth_expr(g, a)?;
            if !self.sub.is_subtype(&ta, p)? {
                return Err(TypeError::Argument {
                    name: name.to_string(),
                    index: i + 1,
                    expected: p.clone(),
                    found: ta,
                    span: Some(Box::new(a.span.clone())),
                });
            }
        }
        Ok(())
    }

    /// h_{x̄,e}(Γ, τ1): types `body` once per atom of `t1`, recombining the
    /// results along the structure of `t1`.
    pub fn synth_for(
        &mut self,
        g: &TypeEnv,
        x: &str,
        t1: &Type,
        body: &Expr,
    ) -> Result<Type, TypeError> {
        Ok(match t1 {
            Type::Empty => Type::Empty,
            Type::Atom(a) => self.synth_expr(&g.extended(x, Binding::Tree(a.clone())), body)?,
            Type::Or(l, r) => Type::or(
                self.synth_for(g, x, l, body)?,
                self.synth_for(g, x, r, body)?,
            ),
            Type::Seq(l, r) => Type::seq(
                self.synth_for(g, x, l, body)?,
                self.synth_for(g, x, r, body)?,
            ),
            Type::Star(t) => Type::star(self.synth_for(g, x, t, body)?),
            Type::Var(v) => {
                let def = unfold(self.signature(), v)?;
                self.synth_for(g, x, def, body)?
            }
        })
    }

    /// Synthesis followed by one subtype check; returns the synthesized type.
    pub fn check_expr(&mut self, g: &TypeEnv, e: &Expr, t: &Type) -> Result<Type, TypeError> {
        self.check_expr_in(g, e, t, "expression")
    }

    pub(crate) fn check_expr_in(
        &mut self,
        g: &TypeEnv,
        e: &Expr,
        t: &Type,
        context: &str,
    ) -> Result<Type, TypeError> {
        let found = self.synth_expr(g, e)?;
        if self.sub.is_subtype(&found, t)? {
            Ok(found)
        } else {
            Err(TypeError::Ascription {
                context: context.to_string(),
                expected: t.clone(),
                found,
                span: Some(Box::new(e.span.clone())),
                update: false,
            })
        }
    }
}

pub fn synth_expr(
    decls: &GlobalDecls,
    sig: &Signature,
    g: &TypeEnv,
    e: &Expr,
) -> Result<Type, TypeError> {
    Checker::new(sig, decls).synth_expr(g, e)
}

pub fn synth_for(
    decls: &GlobalDecls,
    sig: &Signature,
    g: &TypeEnv,
    x: &str,
    t1: &Type,
    body: &Expr,
) -> Result<Type, TypeError> {
    Checker::new(sig, decls).synth_for(g, x, t1, body)
}

pub fn check_expr(
    decls: &GlobalDecls,
    sig: &Signature,
    g: &TypeEnv,
    e: &Expr,
    t: &Type,
) -> Result<Type, TypeError> {
    Checker::new(sig, decls).check_expr(g, e, t)
}

/// Checks a program ending in a query; see [`crate::program::check_program`].
pub fn check_query_program(sig: &Signature, p: &Program) -> Vec<Diagnostic> {
    crate::program::check_program(sig, p).diagnostics
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::env::FunctionSig;
    use crate::syntax::{parse_expr_in, parse_program, parse_signature, parse_type};

    fn ty(s: &str) -> Type {
        parse_type(s).unwrap()
    }

    fn label(s: &str) -> Label {
        Label::new(s).unwrap()
    }

    fn tree_env(x: &str, t: &str) -> TypeEnv {
        TypeEnv::new().with_tree(x, ty(t).as_atom().unwrap().clone())
    }

    #[test]
    fn filter_examples() {
        let e = Signature::new();
        assert_eq!(
            filter_label(&e, &ty("n[bool]"), &label("n")).unwrap(),
            ty("n[bool]")
        );
        assert_eq!(
            filter_label(&e, &Type::Empty, &label("n")).unwrap(),
            Type::Empty
        );
        let f = filter_label(&e, &ty("b[]*,c[]?"), &label("b")).unwrap();
        assert_eq!(f.to_string(), "b[]*,()?");
    }

    #[test]
    fn filter_unfolds_variables() {
        let sig = parse_signature("type X = nil[] | cons[a[], X]").unwrap();
        let f = filter_label(&sig, &Type::var("X"), &label("cons")).unwrap();
        assert_eq!(f, ty("() | cons[a[], X]"));
    }

    #[test]
    fn flagship_for_loop() {
        let g = tree_env("x", "a[b[]*,c[]?]");
        let e = parse_expr_in("for $y in $x/child return $y", &g).unwrap();
        let sig = Signature::new();
        let d = GlobalDecls::new();
        assert_eq!(synth_expr(&d, &sig, &g, &e).unwrap(), ty("b[]*,c[]?"));
        assert!(check_expr(&d, &sig, &g, &e, &ty("(b[]|c[])*")).is_ok());
        assert!(matches!(
            check_expr(&d, &sig, &g, &e, &ty("c[]*")),
            Err(TypeError::Ascription { .. })
        ));
    }

    #[test]
    fn synth_for_cases() {
        let sig = Signature::new();
        let d = GlobalDecls::new();
        let g = TypeEnv::new();
        let body = parse_expr_in("$y/child", &tree_env("y", "b[]")).unwrap();
        let t = synth_for(&d, &sig, &g, "y", &ty("b[]|c[]"), &body).unwrap();
        assert_eq!(t, ty("()|()"));
        let t = synth_for(&d, &sig, &g, "y", &Type::Empty, &body).unwrap();
        assert_eq!(t, Type::Empty);
    }

    #[test]
    fn literals_and_conditions() {
        let sig = Signature::new();
        let d = GlobalDecls::new();
        let g = TypeEnv::new().with_forest("c", ty("bool|bool"));
        let e = parse_expr_in("\"hello\"", &g).unwrap();
        assert_eq!(synth_expr(&d, &sig, &g, &e).unwrap(), Type::string());
        let e = parse_expr_in("if $c then a[] else ()", &g).unwrap();
        assert_eq!(synth_expr(&d, &sig, &g, &e).unwrap(), ty("a[]|()"));
        let e = parse_expr_in("if \"no\" then () else ()", &g).unwrap();
        assert!(matches!(
            synth_expr(&d, &sig, &g, &e),
            Err(TypeError::ConditionNotBool { .. })
        ));
    }

    #[test]
    fn children_of_scalar_is_an_error() {
        let g = tree_env("x", "string");
        let e = parse_expr_in("$x/child", &g).unwrap();
        assert!(matches!(
            synth_expr(&GlobalDecls::new(), &Signature::new(), &g, &e),
            Err(TypeError::ChildOfNonElement { .. })
        ));
    }

    #[test]
    fn calls_check_arguments_left_to_right() {
        let sig = Signature::new();
        let mut d = GlobalDecls::new();
        d.declare_function(
            "f",
            FunctionSig {
                params: vec![ty("a[]*"), ty("bool")],
                ret: ty("c[]"),
            },
        )
        .unwrap();
        let g = TypeEnv::new();
        let ok = parse_expr_in("f((a[], a[]), true)", &g).unwrap();
        assert_eq!(synth_expr(&d, &sig, &g, &ok).unwrap(), ty("c[]"));
        let bad = parse_expr_in("f(b[], \"s\")", &g).unwrap();
        match synth_expr(&d, &sig, &g, &bad) {
            Err(TypeError::Argument { index, .. }) => assert_eq!(index, 1),
            other => panic!("{other:?}"),
        }
        let arity = parse_expr_in("f(())", &g).unwrap();
        assert!(matches!(
            synth_expr(&d, &sig, &g, &arity),
            Err(TypeError::Arity { .. })
        ));
    }

    #[test]
    fn leaves_body_follows_the_rules() {
        let src = "type Tree = tree[leaf[string] | node[Tree*]];
            declare function leaves($x : Tree) : leaf[string]* {
              $x/leaf, for $z in $x/node/* return leaves($z)
            };
            declare variable $t : Tree;
            query leaves($t) : leaf[string]*";
        let (p, sig) = parse_program(src).unwrap();
        assert!(check_query_program(&sig, &p).is_empty());
        let f = &p.functions[0];
        let mut d = GlobalDecls::new();
        d.declare_function(
            "leaves",
            FunctionSig {
                params: vec![Type::var("Tree")],
                ret: ty("leaf[string]*"),
            },
        )
        .unwrap();
        let g = TypeEnv::new().with_forest("x", Type::var("Tree"));
        let t = synth_expr(&d, &sig, &g, &f.body).unwrap();
        assert_eq!(t, ty("(leaf[string]|()),(()|(leaf[string]*)*)"));
    }

    #[test]
    fn wrong_return_type_is_reported() {
        let (p, sig) =
            parse_program("declare function f() : string { true }; query () : ()").unwrap();
        let diags = check_query_program(&sig, &p);
        assert_eq!(diags.len(), 1);
        assert!(
            diags[0].message.contains("function f"),
            "{}",
            diags[0].message
        );
    }
}
