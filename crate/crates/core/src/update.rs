//! Algorithmic typing of updates: the statement judgment j_{a,s} with
//! multiplicities and the iteration judgment k_s.

use crate::ast::{Direction, Multiplicity, Program, Stmt, StmtKind};
use crate::diag::Diagnostic;
use crate::env::{Binding, GlobalDecls, TypeEnv};
use crate::error::TypeError;
use crate::query::Checker;
use crate::subtype::test_subtype;
use crate::types::{unfold, Atom, Signature, Type};

/// The focused input of a statement. A singular focus is always atomic.
#[derive(Clone, Copy, Debug)]
enum Focus<'t> {
    Singular(&'t Atom),
    Plural(&'t Type),
}

impl Focus<'_> {
    fn ty(&self) -> Type {
        match self {
            Focus::Singular(a) => Type::Atom((*a).clone()),
            Focus::Plural(t) => (*t).clone(),
        }
    }
}

fn focus<'t>(a: Multiplicity, t: &'t Type, s: &Stmt) -> Result<Focus<'t>, TypeError> {
    match a {
        Multiplicity::Plural => Ok(Focus::Plural(t)),
        Multiplicity::Singular => match t.as_atom() {
            Some(atom) => Ok(Focus::Singular(atom)),
            None => Err(TypeError::SingularNotAtomic {
                found: t.clone(),
                span: Some(Box::new(s.span.clone())),
            }),
        },
    }
}

fn require(
    construct: &'static str,
    expected: Multiplicity,
    f: Focus<'_>,
    s: &Stmt,
) -> Result<(), TypeError> {
    let ok = matches!(
        (expected, f),
        (Multiplicity::Singular, Focus::Singular(_)) | (Multiplicity::Plural, Focus::Plural(_))
    );
    if ok {
        Ok(())
    } else {
        Err(TypeError::Multiplicity {
            construct,
            expected,
            span: Some(Box::new(s.span.clone())),
        })
    }
}

impl<'a> Checker<'a> {
    /// j_{a,s}(Γ, τ): the unique output type of `s` on input `t`.
    pub fn synth_stmt(
        &mut self,
        g: &TypeEnv,
        a: Multiplicity,
        t: &Type,
        s: &Stmt,
    ) -> Result<Type, TypeError> {
        let f = focus(a, t, s)?;
        self.synth_focus(g, a, f, s)
    }

    fn synth_focus(
        &mut self,
        g: &TypeEnv,
        a: Multiplicity,
        f: Focus<'_>,
        s: &Stmt,
    ) -> Result<Type, TypeError> {
        let span = || Some(Box::new(s.span.clone()));
        Ok(match &s.kind {
            StmtKind::Skip => f.ty(),
            StmtKind::Seq(s1, s2) => {
                let mid = self.synth_focus(g, a, f, s1)?;
                self.synth_stmt(g, a, &mid, s2)?
            }
            StmtKind::If(c, s1, s2) => {
                self.check_condition(g, c)?;
                Type::or(
                    self.synth_focus(g, a, f, s1)?,
                    self.synth_focus(g, a, f, s2)?,
                )
            }
            StmtKind::Let(x, e, body) => {
                let te = self.synth_expr(g, e)?;
                self.synth_focus(&g.extended(x, Binding::Forest(te)), a, f, body)?
            }
            StmtKind::Snapshot(x, body) => {
                self.synth_focus(&g.extended(x, Binding::Forest(f.ty())), a, f, body)?
            }
            StmtKind::Insert(e) => {
                require("insert", Multiplicity::Plural, f, s)?;
                let t = f.ty();
                if t != Type::Empty {
                    return Err(TypeError::InsertNonEmpty {
                        found: t,
                        span: span(),
                    });
                }
                self.synth_expr(g, e)?
            }
            StmtKind::Delete => Type::Empty,
            StmtKind::Rename(n) => {
                require("rename", Multiplicity::Singular, f, s)?;
                match f {
                    Focus::Singular(Atom::Element(_, c)) => Type::element(n.clone(), (**c).clone()),
                    Focus::Singular(other) => {
                        return Err(TypeError::NotElement {
                            construct: "rename",
                            found: other.clone(),
                            span: span(),
                        })
                    }
                    Focus::Plural(_) => unreachable!(),
                }
            }
            StmtKind::Test(phi, body) => {
                require("a test", Multiplicity::Singular, f, s)?;
                let Focus::Singular(alpha) = f else {
                    unreachable!()
                };
                if test_subtype(alpha, phi) {
                    self.synth_focus(g, Multiplicity::Singular, f, body)?
                } else {
                    Type::Atom(alpha.clone())
                }
            }
            StmtKind::Nav(Direction::Left, body) => {
                let inserted = self.synth_stmt(g, Multiplicity::Plural, &Type::Empty, body)?;
                Type::seq(inserted, f.ty())
            }
            StmtKind::Nav(Direction::Right, body) => {
                let inserted = self.synth_stmt(g, Multiplicity::Plural, &Type::Empty, body)?;
                Type::seq(f.ty(), inserted)
            }
            StmtKind::Nav(Direction::Children, body) => {
                require("children", Multiplicity::Singular, f, s)?;
                match f {
                    Focus::Singular(Atom::Element(n, c)) => {
                        let out = self.synth_stmt(g, Multiplicity::Plural, c, body)?;
                        Type::element(n.clone(), out)
                    }
                    Focus::Singular(other) => {
                        return Err(TypeError::NotElement {
                            construct: "children",
                            found: other.clone(),
                            span: span(),
                        })
                    }
                    Focus::Plural(_) => unreachable!(),
                }
            }
            StmtKind::Nav(Direction::Iter, body) => {
                require("iter", Multiplicity::Plural, f, s)?;
                let Focus::Plural(t) = f else { unreachable!() };
                self.synth_iter(g, t, body)?
            }
            StmtKind::Call(p, args) => {
                let decls = self.decls;
                let Some(sig) = decls.procedure(p) else {
                    return Err(TypeError::UndeclaredProcedure {
                        name: p.clone(),
                        span: span(),
                    });
                };
                let input = f.ty();
                if !self.sub.is_subtype(&input, &sig.input)? {
                    return Err(TypeError::ProcedureInput {
                        name: p.clone(),
                        expected: sig.input.clone(),
                        found: input,
                        span: span(),
                    });
                }
                self.check_args(g, p, &sig.params, args, &s.span)?;
                sig.output.clone()
            }
        })
    }

    /// k_s(Γ, τ): applies the singular judgment to each atom of `t`.
    pub fn synth_iter(&mut self, g: &TypeEnv, t: &Type, s: &Stmt) -> Result<Type, TypeError> {
        Ok(match t {
            Type::Empty => Type::Empty,
            Type::Atom(a) => self.synth_focus(g, Multiplicity::Singular, Focus::Singular(a), s)?,
            Type::Or(l, r) => Type::or(self.synth_iter(g, l, s)?, self.synth_iter(g, r, s)?),
            Type::Seq(l, r) => Type::seq(self.synth_iter(g, l, s)?, self.synth_iter(g, r, s)?),
            Type::Star(t) => Type::star(self.synth_iter(g, t, s)?),
            Type::Var(x) => {
                let def = unfold(self.signature(), x)?;
                self.synth_iter(g, def, s)?
            }
        })
    }

    /// Synthesis followed by one subtype check; returns the synthesized type.
    pub fn check_stmt(
        &mut self,
        g: &TypeEnv,
        a: Multiplicity,
        t: &Type,
        s: &Stmt,
        expected: &Type,
    ) -> Result<Type, TypeError> {
        self.check_stmt_in(g, a, t, s, expected, "update")
    }

    pub(crate) fn check_stmt_in(
        &mut self,
        g: &TypeEnv,
        a: Multiplicity,
        t: &Type,
        s: &Stmt,
        expected: &Type,
        context: &str,
    ) -> Result<Type, TypeError> {
        let found = self.synth_stmt(g, a, t, s)?;
        if self.sub.is_subtype(&found, expected)? {
            Ok(found)
        } else {
            Err(TypeError::Ascription {
                context: context.to_string(),
                expected: expected.clone(),
                found,
                span: Some(Box::new(s.span.clone())),
                update: true,
            })
        }
    }
}

pub fn synth_stmt(
    decls: &GlobalDecls,
    sig: &Signature,
    g: &TypeEnv,
    a: Multiplicity,
    t: &Type,
    s: &Stmt,
) -> Result<Type, TypeError> {
    Checker::new(sig, decls).synth_stmt(g, a, t, s)
}

pub fn synth_iter(
    decls: &GlobalDecls,
    sig: &Signature,
    g: &TypeEnv,
    t: &Type,
    s: &Stmt,
) -> Result<Type, TypeError> {
    Checker::new(sig, decls).synth_iter(g, t, s)
}

pub fn check_stmt(
    decls: &GlobalDecls,
    sig: &Signature,
    g: &TypeEnv,
    a: Multiplicity,
    t: &Type,
    s: &Stmt,
    expected: &Type,
) -> Result<Type, TypeError> {
    Checker::new(sig, decls).check_stmt(g, a, t, s, expected)
}

/// Checks a program ending in an update; see [`crate::program::check_program`].
pub fn check_update_program(sig: &Signature, p: &Program) -> Vec<Diagnostic> {
    crate::program::check_program(sig, p).diagnostics
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::env::ProcedureSig;
    use crate::syntax::{parse_program, parse_stmt, parse_type};
    use crate::types::Label;

    fn ty(s: &str) -> Type {
        parse_type(s).unwrap()
    }

    fn synth(a: Multiplicity, t: &str, s: &str) -> Result<Type, TypeError> {
        synth_stmt(
            &GlobalDecls::new(),
            &Signature::new(),
            &TypeEnv::new(),
            a,
            &ty(t),
            &parse_stmt(s).unwrap(),
        )
    }

    use Multiplicity::{Plural, Singular};

    #[test]
    fn insert_after_every_b() {
        let out = synth(
            Plural,
            "a[b[]*,c[]],d[]",
            "iter[a?children[iter[b?right[insert c[]]]]]",
        )
        .unwrap();
        assert_eq!(out, ty("a[(b[],c[])*,c[]],d[]"));
        let inner = synth_iter(
            &GlobalDecls::new(),
            &Signature::new(),
            &TypeEnv::new(),
            &ty("b[]*,c[]"),
            &parse_stmt("b?right[insert c[]]").unwrap(),
        )
        .unwrap();
        assert_eq!(inner, ty("(b[],c[])*,c[]"));
    }

    #[test]
    fn basic_rules() {
        assert_eq!(synth(Plural, "b[]|c[]", "skip").unwrap(), ty("b[]|c[]"));
        assert_eq!(synth(Singular, "m[b[]]", "rename n").unwrap(), ty("n[b[]]"));
        assert_eq!(synth(Singular, "c[]", "b?delete").unwrap(), ty("c[]"));
        assert_eq!(synth(Plural, "()", "insert c[]").unwrap(), ty("c[]"));
        assert_eq!(synth(Plural, "a[]*", "delete").unwrap(), Type::Empty);
        assert_eq!(
            synth(Singular, "b[]", "left[insert a[]]").unwrap(),
            ty("a[],b[]")
        );
    }

    #[test]
    fn multiplicity_discipline() {
        assert!(matches!(
            synth(Plural, "b[]", "b?skip"),
            Err(TypeError::Multiplicity { .. })
        ));
        assert!(matches!(
            synth(Singular, "b[]", "iter[skip]"),
            Err(TypeError::Multiplicity { .. })
        ));
        assert!(matches!(
            synth(Singular, "b[]*", "skip"),
            Err(TypeError::SingularNotAtomic { .. })
        ));
        assert!(matches!(
            synth(Plural, "b[]", "insert c[]"),
            Err(TypeError::InsertNonEmpty { .. })
        ));
        assert!(matches!(
            synth(Singular, "string", "rename n"),
            Err(TypeError::NotElement { .. })
        ));
        // The first step leaves a plural type behind.
        assert!(matches!(
            synth(Singular, "b[]", "right[insert c[]]; skip"),
            Err(TypeError::SingularNotAtomic { .. })
        ));
    }

    #[test]
    fn check_against_expected() {
        let d = GlobalDecls::new();
        let e = Signature::new();
        let g = TypeEnv::new();
        let skip = parse_stmt("skip").unwrap();
        assert!(check_stmt(&d, &e, &g, Plural, &ty("b[]"), &skip, &ty("c[]")).is_err());
        let del = parse_stmt("delete").unwrap();
        assert!(check_stmt(&d, &e, &g, Plural, &ty("a[]*"), &del, &Type::Empty).is_ok());
    }

    #[test]
    fn leafupd_recursive_call() {
        let sig =
            crate::syntax::parse_signature("type Tree = tree[leaf[string] | node[Tree*]]").unwrap();
        let mut d = GlobalDecls::new();
        d.declare_procedure(
            "leafupd",
            ProcedureSig {
                params: vec![Type::string()],
                input: Type::var("Tree"),
                output: Type::var("Tree"),
            },
        )
        .unwrap();
        let g = TypeEnv::new().with_forest("x", Type::string());
        let call = parse_stmt("leafupd($x)").unwrap();
        let out = synth_iter(&d, &sig, &g, &ty("Tree*"), &call).unwrap();
        assert_eq!(out, ty("Tree*"));
        let s = parse_stmt("node?children[iter[leafupd($x)]]").unwrap();
        let node = ty("node[Tree*]");
        let out = synth_stmt(&d, &sig, &g, Singular, &node, &s).unwrap();
        assert_eq!(out, node);
        let _ = Label::new("node").unwrap();
    }

    #[test]
    fn programs() {
        let (p, sig) = parse_program("update skip : b[] => b[]*").unwrap();
        assert!(check_update_program(&sig, &p).is_empty());
        let (p, sig) = parse_program(
            "declare procedure p() : a[] => () { skip };
             update skip : () => ()",
        )
        .unwrap();
        let diags = check_update_program(&sig, &p);
        assert_eq!(diags.len(), 1, "{diags:?}");
        assert!(diags[0].message.contains("procedure p"));
    }
}
