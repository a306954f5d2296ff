//! Type-directed generation of well-typed queries and updates. Every term
//! handed out has been accepted by the checker.

use flux_core::ast::Direction;
use flux_core::{
    syntactic_atoms, Atom, Binding, Checker, Expr, Forest, Label, Multiplicity, Stmt, TestKind,
    Tree, Type, TypeEnv,
};
use rand::seq::SliceRandom;
use rand::Rng;

use crate::config::GenConfig;
use crate::gen::{sample_values, TypeGen};
use crate::library::Library;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("no well-typed {what} found after {attempts} attempts")]
pub struct GenFailure {
    pub what: &'static str,
    pub attempts: usize,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Kind {
    Tree,
    Forest,
}

/// Variables visible to the expression generator. Tree variables bound by
/// the environment carry their atom; those bound by `for` do not.
#[derive(Clone, Default)]
struct Scope {
    vars: Vec<(String, Kind, Option<Atom>)>,
}

impl Scope {
    fn of(g: &TypeEnv) -> Scope {
        Scope {
            vars: g
                .iter()
                .map(|(x, b)| match b {
                    Binding::Tree(a) => (x.to_string(), Kind::Tree, Some(a.clone())),
                    Binding::Forest(_) => (x.to_string(), Kind::Forest, None),
                })
                .collect(),
        }
    }

    fn with(&self, x: &str, kind: Kind) -> Scope {
        let mut s = self.clone();
        s.vars.retain(|(y, _, _)| y != x);
        s.vars.push((x.to_string(), kind, None));
        s
    }

    fn pick<R: Rng>(&self, rng: &mut R, kind: Option<Kind>) -> Option<&str> {
        let vs: Vec<&str> = self
            .vars
            .iter()
            .filter(|(_, k, _)| kind.is_none_or(|want| *k == want))
            .map(|(x, _, _)| x.as_str())
            .collect();
        vs.choose(rng).copied()
    }

    /// Tree variables that are not known to hold a scalar.
    fn parents<R: Rng>(&self, rng: &mut R) -> Option<&str> {
        let vs: Vec<&str> = self
            .vars
            .iter()
            .filter(|(_, k, a)| *k == Kind::Tree && !matches!(a, Some(Atom::Bool | Atom::String)))
            .map(|(x, _, _)| x.as_str())
            .collect();
        vs.choose(rng).copied()
    }
}

pub struct TermGen<'a> {
    cfg: &'a GenConfig,
    lib: &'a Library,
    types: TypeGen<'a>,
    labels: Vec<Label>,
}

impl<'a> TermGen<'a> {
    pub fn new(cfg: &'a GenConfig, lib: &'a Library) -> TermGen<'a> {
        let mut labels = cfg.labels.clone();
        for extra in ["leaf", "tree", "node"] {
            labels.push(Label::new(extra).unwrap());
        }
        TermGen {
            cfg,
            lib,
            types: TypeGen::new(cfg, &lib.sig),
            labels,
        }
    }

    pub fn types(&self) -> &TypeGen<'a> {
        &self.types
    }

    fn checker(&self) -> Checker<'a> {
        Checker::new(&self.lib.sig, &self.lib.decls)
    }

    fn label<R: Rng>(&self, rng: &mut R) -> Label {
        if rng.gen_bool(0.8) {
            self.cfg.labels.choose(rng).unwrap().clone()
        } else {
            self.labels.choose(rng).unwrap().clone()
        }
    }

    /// A query that typechecks under `g`, with its synthesized type.
    pub fn gen_typed_expr<R: Rng>(
        &self,
        rng: &mut R,
        g: &TypeEnv,
    ) -> Result<(Expr, Type), GenFailure> {
        let mut ck = self.checker();
        let scope = Scope::of(g);
        for _ in 0..self.cfg.retries {
            let size = rng.gen_range(1..=self.cfg.max_term_size.max(1));
            let mut fresh = 0;
            let e = self.expr(rng, &scope, size, &mut fresh);
            if let Ok(t) = ck.synth_expr(g, &e) {
                return Ok((e, t));
            }
        }
        Err(GenFailure {
            what: "query",
            attempts: self.cfg.retries,
        })
    }

    /// An update that typechecks at multiplicity `a` on input `t`, with its
    /// output type. At `Singular`, `t` must be an atom.
    pub fn gen_typed_stmt<R: Rng>(
        &self,
        rng: &mut R,
        g: &TypeEnv,
        a: Multiplicity,
        t: &Type,
    ) -> Result<(Stmt, Type), GenFailure> {
        let mut ck = self.checker();
        for _ in 0..self.cfg.retries {
            let size = rng.gen_range(1..=self.cfg.max_term_size.max(1));
            let mut fresh = 0;
            let s = self.stmt(rng, &mut ck, g, a, t, size, &mut fresh);
            if let Ok(out) = ck.synth_stmt(g, a, t, &s) {
                return Ok((s, out));
            }
        }
        Err(GenFailure {
            what: "update",
            attempts: self.cfg.retries,
        })
    }

    /// A body for `for $x in ... return body` or `iter[body]`: a query with
    /// `x` bound as a tree variable, or a statement at singular focus.
    pub fn gen_for_body<R: Rng>(&self, rng: &mut R, g: &TypeEnv, x: &str) -> Expr {
        let scope = Scope::of(g).with(x, Kind::Tree);
        let size = rng.gen_range(1..=self.cfg.max_term_size.max(1));
        let mut fresh = 0;
        if rng.gen_bool(0.3) {
            return Expr::var(x);
        }
        self.expr(rng, &scope, size, &mut fresh)
    }

    pub fn gen_iter_body<R: Rng>(&self, rng: &mut R, g: &TypeEnv, hint: &Atom) -> Stmt {
        let mut ck = self.checker();
        let size = rng.gen_range(1..=self.cfg.max_term_size.max(1));
        let mut fresh = 0;
        self.stmt(
            rng,
            &mut ck,
            g,
            Multiplicity::Singular,
            &Type::Atom(hint.clone()),
            size,
            &mut fresh,
        )
    }

    fn fresh(&self, fresh: &mut usize) -> String {
        *fresh += 1;
        format!("v{fresh}")
    }

    fn literal<R: Rng>(&self, rng: &mut R, t: &Type) -> Expr {
        let bounds = flux_core::Bounds { depth: 3, width: 2 };
        match sample_values(rng, &self.lib.sig, t, bounds, 4).choose(rng) {
            Some(v) => forest_expr(v),
            None => Expr::empty(),
        }
    }

    fn leaf<R: Rng>(&self, rng: &mut R, scope: &Scope) -> Expr {
        match rng.gen_range(0..10) {
            0 => Expr::empty(),
            1 => Expr::str(if rng.gen_bool(0.5) { "" } else { "a" }),
            2 => Expr::bool(rng.gen()),
            3 | 4 => match scope.parents(rng) {
                Some(x) => Expr::children(x),
                None => Expr::empty(),
            },
            5 => Expr::elem(self.label(rng), Expr::empty()),
            _ => match scope.pick(rng, None) {
                Some(x) => Expr::var(x),
                None => Expr::elem(self.label(rng), Expr::empty()),
            },
        }
    }

    fn condition<R: Rng>(
        &self,
        rng: &mut R,
        scope: &Scope,
        size: usize,
        fresh: &mut usize,
    ) -> Expr {
        match rng.gen_range(0..6) {
            0 | 1 => Expr::bool(rng.gen()),
            2 => Expr::call("yes", vec![]),
            3 => scope
                .pick(rng, Some(Kind::Forest))
                .map(Expr::var)
                .unwrap_or_else(|| Expr::bool(true)),
            _ => self.expr(rng, scope, size.min(3), fresh),
        }
    }

    fn call<R: Rng>(&self, rng: &mut R, scope: &Scope, fresh: &mut usize) -> Expr {
        let fs: Vec<_> = self.lib.decls.functions().collect();
        let (name, sig) = fs.choose(rng).expect("library has functions");
        let args = sig
            .params
            .iter()
            .map(|p| {
                if rng.gen_bool(0.7) {
                    self.literal(rng, p)
                } else {
                    self.expr(rng, scope, 2, fresh)
                }
            })
            .collect();
        Expr::call(*name, args)
    }

    fn expr<R: Rng>(&self, rng: &mut R, scope: &Scope, size: usize, fresh: &mut usize) -> Expr {
        if size <= 1 {
            return self.leaf(rng, scope);
        }
        match rng.gen_range(0..16) {
            0 | 1 => Expr::elem(self.label(rng), self.expr(rng, scope, size - 1, fresh)),
            2..=4 => {
                let k = rng.gen_range(1..size);
                Expr::concat(
                    self.expr(rng, scope, k, fresh),
                    self.expr(rng, scope, (size - k).max(1), fresh),
                )
            }
            5 => Expr::filter(self.expr(rng, scope, size - 1, fresh), self.label(rng)),
            6..=9 => {
                let x = self.fresh(fresh);
                let k = rng.gen_range(1..size);
                let src = self.source(rng, scope, k, fresh);
                let inner = scope.with(&x, Kind::Tree);
                let body = if rng.gen_bool(0.25) {
                    Expr::var(&x)
                } else {
                    self.expr(rng, &inner, (size - k).max(1), fresh)
                };
                Expr::for_in(x, src, body)
            }
            10 | 11 => {
                let x = self.fresh(fresh);
                let k = rng.gen_range(1..size);
                let bound = self.expr(rng, scope, k, fresh);
                let body = self.expr(rng, &scope.with(&x, Kind::Forest), (size - k).max(1), fresh);
                Expr::let_in(x, bound, body)
            }
            12 | 13 => {
                let c = self.condition(rng, scope, size, fresh);
                let half = (size / 2).max(1);
                Expr::if_then_else(
                    c,
                    self.expr(rng, scope, half, fresh),
                    self.expr(rng, scope, half, fresh),
                )
            }
            _ => self.call(rng, scope, fresh),
        }
    }

    /// Sources for `for` favour children and forest variables.
    fn source<R: Rng>(&self, rng: &mut R, scope: &Scope, size: usize, fresh: &mut usize) -> Expr {
        match rng.gen_range(0..4) {
            0 => scope.parents(rng).map(Expr::children),
            1 => scope.pick(rng, Some(Kind::Forest)).map(Expr::var),
            _ => None,
        }
        .unwrap_or_else(|| self.expr(rng, scope, size, fresh))
    }

    #[allow(clippy::too_many_arguments)]
    fn stmt<R: Rng>(
        &self,
        rng: &mut R,
        ck: &mut Checker<'_>,
        g: &TypeEnv,
        a: Multiplicity,
        t: &Type,
        size: usize,
        fresh: &mut usize,
    ) -> Stmt {
        match (a, t.as_atom()) {
            (Multiplicity::Singular, Some(alpha)) => self.singular(rng, ck, g, alpha, size, fresh),
            _ => self.plural(rng, ck, g, t, size, fresh),
        }
    }

    fn typed_expr<R: Rng>(
        &self,
        rng: &mut R,
        ck: &mut Checker<'_>,
        g: &TypeEnv,
        size: usize,
        fresh: &mut usize,
    ) -> (Expr, Type) {
        let scope = Scope::of(g);
        for _ in 0..20 {
            let e = self.expr(rng, &scope, size, fresh);
            if let Ok(t) = ck.synth_expr(g, &e) {
                return (e, t);
            }
        }
        (Expr::empty(), Type::Empty)
    }

    fn inserted<R: Rng>(
        &self,
        rng: &mut R,
        ck: &mut Checker<'_>,
        g: &TypeEnv,
        size: usize,
        fresh: &mut usize,
    ) -> Stmt {
        Stmt::insert(self.typed_expr(rng, ck, g, size, fresh).0)
    }

    fn plural<R: Rng>(
        &self,
        rng: &mut R,
        ck: &mut Checker<'_>,
        g: &TypeEnv,
        t: &Type,
        size: usize,
        fresh: &mut usize,
    ) -> Stmt {
        if size <= 1 {
            return match rng.gen_range(0..3) {
                0 => Stmt::delete(),
                1 if *t == Type::Empty => self.inserted(rng, ck, g, 2, fresh),
                _ => Stmt::skip(),
            };
        }
        let sub = size - 1;
        match rng.gen_range(0..14) {
            0 | 1 if *t == Type::Empty => self.inserted(rng, ck, g, sub, fresh),
            0..=3 => {
                let atoms: Vec<Atom> = syntactic_atoms(&self.lib.sig, t)
                    .map(|s| s.into_iter().collect())
                    .unwrap_or_default();
                let hint = atoms.choose(rng).cloned().unwrap_or(Atom::Bool);
                Stmt::nav(
                    Direction::Iter,
                    self.singular(rng, ck, g, &hint, sub, fresh),
                )
            }
            4 => Stmt::nav(
                Direction::Left,
                self.plural(rng, ck, g, &Type::Empty, sub, fresh),
            ),
            5 => Stmt::nav(
                Direction::Right,
                self.plural(rng, ck, g, &Type::Empty, sub, fresh),
            ),
            6 | 7 => {
                let k = rng.gen_range(1..size);
                let s1 = self.plural(rng, ck, g, t, k, fresh);
                let mid = ck
                    .synth_stmt(g, Multiplicity::Plural, t, &s1)
                    .unwrap_or(Type::Empty);
                let s2 = self.plural(rng, ck, g, &mid, (size - k).max(1), fresh);
                Stmt::seq(s1, s2)
            }
            8 => {
                let c = self.condition(rng, &Scope::of(g), 2, fresh);
                let half = (sub / 2).max(1);
                Stmt::if_then_else(
                    c,
                    self.plural(rng, ck, g, t, half, fresh),
                    self.plural(rng, ck, g, t, half, fresh),
                )
            }
            9 => {
                let x = self.fresh(fresh);
                let (e, te) = self.typed_expr(rng, ck, g, 3, fresh);
                let g2 = g.extended(&x, Binding::Forest(te));
                Stmt::let_in(x, e, self.plural(rng, ck, &g2, t, sub, fresh))
            }
            10 => {
                let x = self.fresh(fresh);
                let g2 = g.extended(&x, Binding::Forest(t.clone()));
                Stmt::snapshot(x, self.plural(rng, ck, &g2, t, sub, fresh))
            }
            11 => self.procedure(rng, ck, t).unwrap_or_else(Stmt::delete),
            _ => Stmt::skip(),
        }
    }

    fn procedure<R: Rng>(&self, rng: &mut R, ck: &mut Checker<'_>, t: &Type) -> Option<Stmt> {
        let usable: Vec<_> = self
            .lib
            .decls
            .procedures()
            .filter(|(_, p)| ck.is_subtype(t, &p.input).unwrap_or(false))
            .collect();
        let (name, sig) = usable.choose(rng)?;
        let args = sig.params.iter().map(|p| self.literal(rng, p)).collect();
        Some(Stmt::call(*name, args))
    }

    fn singular<R: Rng>(
        &self,
        rng: &mut R,
        ck: &mut Checker<'_>,
        g: &TypeEnv,
        alpha: &Atom,
        size: usize,
        fresh: &mut usize,
    ) -> Stmt {
        let t = Type::Atom(alpha.clone());
        let element = match alpha {
            Atom::Element(n, c) => Some((n.clone(), (**c).clone())),
            _ => None,
        };
        if size <= 1 {
            return match (rng.gen_range(0..4), &element) {
                (0, _) => Stmt::delete(),
                (1, Some(_)) => Stmt::rename(self.label(rng)),
                _ => Stmt::skip(),
            };
        }
        let sub = size - 1;
        match rng.gen_range(0..12) {
            0..=2 => {
                let phi = match (rng.gen_range(0..4), alpha) {
                    (0, _) => TestKind::Wildcard,
                    (1, _) => TestKind::Bool,
                    (2, _) => TestKind::String,
                    (_, Atom::Element(n, _)) => TestKind::Label(n.clone()),
                    (_, _) => TestKind::Label(self.label(rng)),
                };
                Stmt::test(phi, self.singular(rng, ck, g, alpha, sub, fresh))
            }
            3..=5 => match element {
                Some((_, c)) => {
                    Stmt::nav(Direction::Children, self.plural(rng, ck, g, &c, sub, fresh))
                }
                None => Stmt::skip(),
            },
            6 => Stmt::nav(
                Direction::Right,
                self.plural(rng, ck, g, &Type::Empty, sub, fresh),
            ),
            7 => Stmt::nav(
                Direction::Left,
                self.plural(rng, ck, g, &Type::Empty, sub, fresh),
            ),
            8 => {
                let k = rng.gen_range(1..size);
                let s1 = self.singular(rng, ck, g, alpha, k, fresh);
                match ck.synth_stmt(g, Multiplicity::Singular, &t, &s1) {
                    Ok(Type::Atom(mid)) => {
                        let s2 = self.singular(rng, ck, g, &mid, (size - k).max(1), fresh);
                        Stmt::seq(s1, s2)
                    }
                    _ => s1,
                }
            }
            9 => {
                let c = self.condition(rng, &Scope::of(g), 2, fresh);
                let half = (sub / 2).max(1);
                Stmt::if_then_else(
                    c,
                    self.singular(rng, ck, g, alpha, half, fresh),
                    self.singular(rng, ck, g, alpha, half, fresh),
                )
            }
            10 => {
                let x = self.fresh(fresh);
                let g2 = g.extended(&x, Binding::Forest(t.clone()));
                Stmt::snapshot(x, self.singular(rng, ck, &g2, alpha, sub, fresh))
            }
            _ => self.procedure(rng, ck, &t).unwrap_or_else(Stmt::skip),
        }
    }
}

/// A constructor expression that evaluates to `v`.
pub fn forest_expr(v: &Forest) -> Expr {
    v.iter()
        .map(tree_expr)
        .reduce(Expr::concat)
        .unwrap_or_else(Expr::empty)
}

fn tree_expr(t: &Tree) -> Expr {
    match t {
        Tree::Bool(b) => Expr::bool(*b),
        Tree::Str(s) => Expr::str(s.clone()),
        Tree::Node(n, kids) => Expr::elem(n.clone(), forest_expr(kids)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use flux_core::{eval_query, parse_type, ValueEnv};

    #[test]
    fn generated_queries_typecheck() {
        let cfg = GenConfig::default();
        let lib = Library::load();
        let tg = TermGen::new(&cfg, &lib);
        let mut ok = 0;
        for i in 0..100 {
            let mut rng = cfg.rng(10, i);
            let g = tg.types().gen_env(&mut rng);
            if let Ok((e, t)) = tg.gen_typed_expr(&mut rng, &g) {
                let mut ck = Checker::new(&lib.sig, &lib.decls);
                assert_eq!(ck.synth_expr(&g, &e).unwrap(), t);
                ok += 1;
            }
        }
        assert!(ok >= 95, "only {ok} of 100 generated");
    }

    #[test]
    fn generated_updates_typecheck() {
        let cfg = GenConfig::default();
        let lib = Library::load();
        let tg = TermGen::new(&cfg, &lib);
        let mut ok = 0;
        for i in 0..100 {
            let mut rng = cfg.rng(11, i);
            let g = tg.types().gen_env(&mut rng);
            let t = tg.types().gen_type(&mut rng);
            if tg
                .gen_typed_stmt(&mut rng, &g, Multiplicity::Plural, &t)
                .is_ok()
            {
                ok += 1;
            }
        }
        assert!(ok >= 95, "only {ok} of 100 generated");
    }

    #[test]
    fn singular_generation_on_an_element() {
        let cfg = GenConfig::default();
        let lib = Library::load();
        let tg = TermGen::new(&cfg, &lib);
        let t = parse_type("b[]").unwrap();
        let (s, _) = tg
            .gen_typed_stmt(
                &mut cfg.rng(12, 0),
                &TypeEnv::new(),
                Multiplicity::Singular,
                &t,
            )
            .unwrap();
        let mut ck = Checker::new(&lib.sig, &lib.decls);
        assert!(ck
            .synth_stmt(&TypeEnv::new(), Multiplicity::Singular, &t, &s)
            .is_ok());
    }

    #[test]
    fn literals_evaluate_to_their_value() {
        let v = flux_core::parse_value("a[\"x\", true], b[]").unwrap();
        let e = forest_expr(&v);
        assert_eq!(
            eval_query(&flux_core::Runtime::new(), &ValueEnv::new(), &e).unwrap(),
            v
        );
    }
}
