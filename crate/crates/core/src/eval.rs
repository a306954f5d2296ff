//! Reference interpreter for queries and updates.
//!
//! This is a reconstruction from the informal description of the two
//! languages: `x̄/child` returns the children of a tree, `e::n` keeps the
//! trees labelled `n`, `for` maps over a forest and concatenates, and each
//! update acts on the part of the store that is in focus.

use std::collections::HashMap;
use std::sync::Arc;

use indexmap::IndexMap;

use crate::ast::{Direction, Expr, ExprKind, FunctionDecl, ProcedureDecl, Program, Stmt, StmtKind};
use crate::env::{Binding, FunctionSig, GlobalDecls, TypeEnv};
use crate::error::TypeError;
use crate::member::Matcher;
use crate::program::collect_decls;
use crate::subtype::TestKind;
use crate::types::Signature;
use crate::value::{Forest, Tree};

pub const DEFAULT_RECURSION_LIMIT: usize = 256;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EvalError {
    #[error("unbound variable ${0}")]
    UnboundVariable(String),
    #[error("${name} must hold a single tree, found {found}")]
    NotATree { name: String, found: Forest },
    #[error("condition evaluated to {0}, not a boolean")]
    ConditionNotBool(Forest),
    #[error("undeclared function {0}")]
    UndeclaredFunction(String),
    #[error("undeclared procedure {0}")]
    UndeclaredProcedure(String),
    #[error("{name} expects {expected} argument(s), got {found}")]
    Arity {
        name: String,
        expected: usize,
        found: usize,
    },
    #[error("recursion limit of {0} calls exceeded")]
    RecursionLimit(usize),
    #[error("{construct} cannot be applied to focus {found}")]
    Focus {
        construct: &'static str,
        found: Forest,
    },
    #[error("built-in {name} failed: {message}")]
    Builtin { name: String, message: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ValueBinding {
    Tree(Tree),
    Forest(Forest),
}

impl ValueBinding {
    pub fn to_forest(&self) -> Forest {
        match self {
            ValueBinding::Tree(t) => Forest::single(t.clone()),
            ValueBinding::Forest(f) => f.clone(),
        }
    }
}

/// σ: tree variables hold exactly one tree, forest variables any forest.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValueEnv {
    vars: IndexMap<String, ValueBinding>,
}

impl ValueEnv {
    pub fn new() -> ValueEnv {
        ValueEnv::default()
    }

    pub fn get(&self, x: &str) -> Option<&ValueBinding> {
        self.vars.get(x)
    }

    pub fn insert(&mut self, x: impl Into<String>, b: ValueBinding) {
        let x = x.into();
        self.vars.shift_remove(&x);
        self.vars.insert(x, b);
    }

    pub fn with_tree(mut self, x: impl Into<String>, t: Tree) -> ValueEnv {
        self.insert(x, ValueBinding::Tree(t));
        self
    }

    pub fn with_forest(mut self, x: impl Into<String>, f: Forest) -> ValueEnv {
        self.insert(x, ValueBinding::Forest(f));
        self
    }

    fn extended(&self, x: &str, b: ValueBinding) -> ValueEnv {
        let mut env = self.clone();
        env.insert(x, b);
        env
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &ValueBinding)> {
        self.vars.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }
}

impl std::fmt::Display for ValueEnv {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.vars.is_empty() {
            return f.write_str("{}");
        }
        for (i, (x, b)) in self.vars.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            match b {
                ValueBinding::Tree(t) => write!(f, "${x} = {t}")?,
                ValueBinding::Forest(v) => write!(f, "${x} = {v}")?,
            }
        }
        Ok(())
    }
}

/// A pure built-in function over forests.
pub type Builtin = Arc<dyn Fn(&[Forest]) -> Result<Forest, String> + Send + Sync>;

/// Declarations with bodies, global variable values, and the recursion limit.
#[derive(Clone)]
pub struct Runtime {
    decls: GlobalDecls,
    functions: HashMap<String, FunctionDecl>,
    procedures: HashMap<String, ProcedureDecl>,
    builtins: HashMap<String, Builtin>,
    globals: ValueEnv,
    pub recursion_limit: usize,
}

impl Default for Runtime {
    fn default() -> Runtime {
        Runtime {
            decls: GlobalDecls::new(),
            functions: HashMap::new(),
            procedures: HashMap::new(),
            builtins: HashMap::new(),
            globals: ValueEnv::new(),
            recursion_limit: DEFAULT_RECURSION_LIMIT,
        }
    }
}

impl Runtime {
    pub fn new() -> Runtime {
        Runtime::default()
    }

    /// Bodies of every function and procedure declared in `p`. Duplicate
    /// names keep the first declaration.
    pub fn from_program(p: &Program) -> Runtime {
        let (decls, _) = collect_decls(p);
        let mut rt = Runtime {
            decls,
            ..Runtime::default()
        };
        for f in &p.functions {
            rt.functions
                .entry(f.name.clone())
                .or_insert_with(|| f.clone());
        }
        for d in &p.procedures {
            rt.procedures
                .entry(d.name.clone())
                .or_insert_with(|| d.clone());
        }
        rt
    }

    pub fn with_recursion_limit(mut self, limit: usize) -> Runtime {
        self.recursion_limit = limit;
        self
    }

    /// Values visible inside every function and procedure body.
    pub fn with_globals(mut self, globals: ValueEnv) -> Runtime {
        self.globals = globals;
        self
    }

    pub fn add_function(&mut self, f: FunctionDecl) -> Result<(), TypeError> {
        self.decls.declare_function(
            &f.name,
            FunctionSig {
                params: f.params.iter().map(|p| p.ty.clone()).collect(),
                ret: f.ret.clone(),
            },
        )?;
        self.functions.insert(f.name.clone(), f);
        Ok(())
    }

    pub fn add_procedure(&mut self, d: ProcedureDecl) -> Result<(), TypeError> {
        self.decls.declare_procedure(
            &d.name,
            crate::env::ProcedureSig {
                params: d.params.iter().map(|p| p.ty.clone()).collect(),
                input: d.input.clone(),
                output: d.output.clone(),
            },
        )?;
        self.procedures.insert(d.name.clone(), d);
        Ok(())
    }

    /// Registers a built-in under a declared header, so the typechecker
    /// sees it in Δ.
    pub fn register_builtin(
        &mut self,
        name: &str,
        header: FunctionSig,
        f: Builtin,
    ) -> Result<(), TypeError> {
        self.decls.declare_function(name, header)?;
        self.builtins.insert(name.to_string(), f);
        Ok(())
    }

    pub fn decls(&self) -> &GlobalDecls {
        &self.decls
    }

    fn enter(&self, depth: usize) -> Result<usize, EvalError> {
        if depth >= self.recursion_limit {
            Err(EvalError::RecursionLimit(self.recursion_limit))
        } else {
            Ok(depth + 1)
        }
    }

    fn call_env(&self, params: &[crate::ast::Param], args: Vec<Forest>) -> ValueEnv {
        let mut env = self.globals.clone();
        for (p, v) in params.iter().zip(args) {
            env.insert(p.name.clone(), ValueBinding::Forest(v));
        }
        env
    }

    fn args(&self, env: &ValueEnv, args: &[Expr], depth: usize) -> Result<Vec<Forest>, EvalError> {
        args.iter().map(|a| self.eval(env, a, depth)).collect()
    }

    fn eval(&self, env: &ValueEnv, e: &Expr, depth: usize) -> Result<Forest, EvalError> {
        Ok(match &e.kind {
            ExprKind::Empty => Forest::empty(),
            ExprKind::Concat(l, r) => self.eval(env, l, depth)?.concat(self.eval(env, r, depth)?),
            ExprKind::Elem(n, c) => {
                Forest::single(Tree::Node(n.clone(), self.eval(env, c, depth)?))
            }
            ExprKind::Str(w) => Forest::single(Tree::Str(w.clone())),
            ExprKind::Bool(b) => Forest::single(Tree::Bool(*b)),
            ExprKind::Var(x) => env
                .get(x)
                .ok_or_else(|| EvalError::UnboundVariable(x.clone()))?
                .to_forest(),
            ExprKind::Let(x, bound, body) => {
                let v = self.eval(env, bound, depth)?;
                self.eval(&env.extended(x, ValueBinding::Forest(v)), body, depth)?
            }
            ExprKind::If(c, t, f) => {
                if self.condition(env, c, depth)? {
                    self.eval(env, t, depth)?
                } else {
                    self.eval(env, f, depth)?
                }
            }
            ExprKind::Children(x) => match self.tree_var(env, x)? {
                Tree::Node(_, kids) => kids,
                _ => Forest::empty(),
            },
            ExprKind::Filter(inner, n) => self
                .eval(env, inner, depth)?
                .into_iter()
                .filter(|t| matches!(t, Tree::Node(m, _) if m == n))
                .collect(),
            ExprKind::For(x, src, body) => {
                let mut out = Vec::new();
                for t in self.eval(env, src, depth)? {
                    let env2 = env.extended(x, ValueBinding::Tree(t));
                    out.extend(self.eval(&env2, body, depth)?);
                }
                Forest(out)
            }
            ExprKind::Call(f, args) => {
                let vals = self.args(env, args, depth)?;
                if let Some(b) = self.builtins.get(f) {
                    return b(&vals).map_err(|message| EvalError::Builtin {
                        name: f.clone(),
                        message,
                    });
                }
                let decl = self
                    .functions
                    .get(f)
                    .ok_or_else(|| EvalError::UndeclaredFunction(f.clone()))?;
                check_arity(f, decl.params.len(), vals.len())?;
                let depth = self.enter(depth)?;
                self.eval(&self.call_env(&decl.params, vals), &decl.body, depth)?
            }
        })
    }

    fn tree_var(&self, env: &ValueEnv, x: &str) -> Result<Tree, EvalError> {
        match env.get(x) {
            Some(ValueBinding::Tree(t)) => Ok(t.clone()),
            Some(ValueBinding::Forest(f)) => match f.as_single() {
                Some(t) => Ok(t.clone()),
                None => Err(EvalError::NotATree {
                    name: x.to_string(),
                    found: f.clone(),
                }),
            },
            None => Err(EvalError::UnboundVariable(x.to_string())),
        }
    }

    fn condition(&self, env: &ValueEnv, c: &Expr, depth: usize) -> Result<bool, EvalError> {
        let v = self.eval(env, c, depth)?;
        match v.as_single() {
            Some(Tree::Bool(b)) => Ok(*b),
            _ => Err(EvalError::ConditionNotBool(v)),
        }
    }

    fn apply(
        &self,
        env: &ValueEnv,
        v: Forest,
        s: &Stmt,
        depth: usize,
    ) -> Result<Forest, EvalError> {
        let focus_err =
            |construct: &'static str, found: Forest| EvalError::Focus { construct, found };
        Ok(match &s.kind {
            StmtKind::Skip => v,
            StmtKind::Seq(s1, s2) => {
                let mid = self.apply(env, v, s1, depth)?;
                self.apply(env, mid, s2, depth)?
            }
            StmtKind::If(c, s1, s2) => {
                if self.condition(env, c, depth)? {
                    self.apply(env, v, s1, depth)?
                } else {
                    self.apply(env, v, s2, depth)?
                }
            }
            StmtKind::Let(x, e, body) => {
                let bound = self.eval(env, e, depth)?;
                self.apply(
                    &env.extended(x, ValueBinding::Forest(bound)),
                    v,
                    body,
                    depth,
                )?
            }
            StmtKind::Snapshot(x, body) => {
                let env2 = env.extended(x, ValueBinding::Forest(v.clone()));
                self.apply(&env2, v, body, depth)?
            }
            StmtKind::Insert(e) => {
                if !v.is_empty() {
                    return Err(focus_err("insert", v));
                }
                self.eval(env, e, depth)?
            }
            StmtKind::Delete => Forest::empty(),
            StmtKind::Rename(n) => match v.as_single() {
                Some(Tree::Node(_, kids)) => Forest::single(Tree::Node(n.clone(), kids.clone())),
                _ => return Err(focus_err("rename", v)),
            },
            StmtKind::Test(phi, body) => {
                let Some(t) = v.as_single() else {
                    return Err(focus_err("a test", v));
                };
                if matches_test(t, phi) {
                    self.apply(env, v, body, depth)?
                } else {
                    v
                }
            }
            StmtKind::Nav(Direction::Left, body) => {
                self.apply(env, Forest::empty(), body, depth)?.concat(v)
            }
            StmtKind::Nav(Direction::Right, body) => {
                let inserted = self.apply(env, Forest::empty(), body, depth)?;
                v.concat(inserted)
            }
            StmtKind::Nav(Direction::Children, body) => match v.as_single() {
                Some(Tree::Node(n, kids)) => {
                    let kids = self.apply(env, kids.clone(), body, depth)?;
                    Forest::single(Tree::Node(n.clone(), kids))
                }
                _ => return Err(focus_err("children", v)),
            },
            StmtKind::Nav(Direction::Iter, body) => {
                let mut out = Vec::new();
                for t in v {
                    out.extend(self.apply(env, Forest::single(t), body, depth)?);
                }
                Forest(out)
            }
            StmtKind::Call(p, args) => {
                let vals = self.args(env, args, depth)?;
                let decl = self
                    .procedures
                    .get(p)
                    .ok_or_else(|| EvalError::UndeclaredProcedure(p.clone()))?;
                check_arity(p, decl.params.len(), vals.len())?;
                let depth = self.enter(depth)?;
                self.apply(&self.call_env(&decl.params, vals), v, &decl.body, depth)?
            }
        })
    }
}

fn check_arity(name: &str, expected: usize, found: usize) -> Result<(), EvalError> {
    if expected == found {
        Ok(())
    } else {
        Err(EvalError::Arity {
            name: name.to_string(),
            expected,
            found,
        })
    }
}

fn matches_test(t: &Tree, phi: &TestKind) -> bool {
    match (t, phi) {
        (Tree::Bool(_), TestKind::Bool) | (Tree::Str(_), TestKind::String) => true,
        (Tree::Node(..), TestKind::Wildcard) => true,
        (Tree::Node(n, _), TestKind::Label(m)) => n == m,
        _ => false,
    }
}

pub fn eval_query(rt: &Runtime, env: &ValueEnv, e: &Expr) -> Result<Forest, EvalError> {
    rt.eval(env, e, 0)
}

pub fn apply_update(
    rt: &Runtime,
    env: &ValueEnv,
    v: &Forest,
    s: &Stmt,
) -> Result<Forest, EvalError> {
    rt.apply(env, v.clone(), s, 0)
}

/// Same domain, and every value lies in its declared type.
pub fn conforms(sig: &Signature, env: &ValueEnv, g: &TypeEnv) -> Result<bool, TypeError> {
    if env.len() != g.len() {
        return Ok(false);
    }
    let mut m = Matcher::new(sig);
    for (x, b) in g.iter() {
        let ok = match (b, env.get(x)) {
            (Binding::Tree(a), Some(ValueBinding::Tree(t))) => m.tree_in_atom(t, a)?,
            (Binding::Forest(t), Some(ValueBinding::Forest(v))) => m.is_member(v, t)?,
            _ => false,
        };
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::env::TypeEnv;
    use crate::syntax::{
        parse_expr, parse_expr_in, parse_program, parse_stmt, parse_type, parse_value,
    };
    use crate::types::Atom;

    fn val(s: &str) -> Forest {
        parse_value(s).unwrap()
    }

    fn tree(s: &str) -> Tree {
        val(s).into_single().unwrap()
    }

    #[test]
    fn children_and_filter() {
        let env = ValueEnv::new().with_tree("x", tree("a[b[],c[]]"));
        let g = TypeEnv::new().with_tree("x", Atom::Bool);
        let e = parse_expr_in("$x/child", &g).unwrap();
        assert_eq!(
            eval_query(&Runtime::new(), &env, &e).unwrap(),
            val("b[],c[]")
        );
        let e = parse_expr("(b[], c[], b[])::b").unwrap();
        assert_eq!(
            eval_query(&Runtime::new(), &ValueEnv::new(), &e).unwrap(),
            val("b[],b[]")
        );
    }

    #[test]
    fn leaves_collects_in_document_order() {
        let (p, _) = parse_program(
            "type Tree = tree[leaf[string] | node[Tree*]];
             declare function leaves($x : Tree) : leaf[string]* {
               $x/leaf, for $z in $x/node/* return leaves($z)
             };
             declare variable $t : Tree;
             query leaves($t) : leaf[string]*",
        )
        .unwrap();
        let rt = Runtime::from_program(&p);
        let env = ValueEnv::new()
            .with_forest("t", val("tree[node[tree[leaf[\"u\"]], tree[leaf[\"v\"]]]]"));
        let crate::ast::Main::Query { expr, .. } = &p.main else {
            unreachable!()
        };
        assert_eq!(
            eval_query(&rt, &env, expr).unwrap(),
            val("leaf[\"u\"], leaf[\"v\"]")
        );
    }

    #[test]
    fn insert_after_every_b() {
        let s = parse_stmt("iter[a?children[iter[b?right[insert c[]]]]]").unwrap();
        let out = apply_update(
            &Runtime::new(),
            &ValueEnv::new(),
            &val("a[b[],b[],c[]],d[]"),
            &s,
        );
        assert_eq!(out.unwrap(), val("a[b[],c[],b[],c[],c[]],d[]"));
    }

    #[test]
    fn simple_updates() {
        let rt = Runtime::new();
        let env = ValueEnv::new();
        let v = val("m[b[]]");
        assert_eq!(
            apply_update(&rt, &env, &v, &parse_stmt("skip").unwrap()).unwrap(),
            v
        );
        assert_eq!(
            apply_update(&rt, &env, &v, &parse_stmt("rename n").unwrap()).unwrap(),
            val("n[b[]]")
        );
        assert!(matches!(
            apply_update(&rt, &env, &val("a[],a[]"), &parse_stmt("rename n").unwrap()),
            Err(EvalError::Focus { .. })
        ));
        assert!(matches!(
            apply_update(&rt, &env, &v, &parse_stmt("insert a[]").unwrap()),
            Err(EvalError::Focus { .. })
        ));
    }

    #[test]
    fn recursion_is_bounded() {
        let (p, _) = parse_program("declare function f() : () { f() }; query f() : ()").unwrap();
        let rt = Runtime::from_program(&p).with_recursion_limit(10);
        let crate::ast::Main::Query { expr, .. } = &p.main else {
            unreachable!()
        };
        assert_eq!(
            eval_query(&rt, &ValueEnv::new(), expr),
            Err(EvalError::RecursionLimit(10))
        );
    }

    #[test]
    fn builtins_are_callable_and_typed() {
        let mut rt = Runtime::new();
        rt.register_builtin(
            "not",
            FunctionSig {
                params: vec![parse_type("bool").unwrap()],
                ret: parse_type("bool").unwrap(),
            },
            Arc::new(|args: &[Forest]| match args[0].as_single() {
                Some(Tree::Bool(b)) => Ok(Forest::single(Tree::Bool(!b))),
                _ => Err("expected a boolean".to_string()),
            }),
        )
        .unwrap();
        let e = parse_expr("not(true)").unwrap();
        assert_eq!(eval_query(&rt, &ValueEnv::new(), &e).unwrap(), val("false"));
        assert!(rt.decls().function("not").is_some());
    }

    #[test]
    fn conformance() {
        let sig =
            crate::syntax::parse_signature("type Tree = tree[leaf[string] | node[Tree*]]").unwrap();
        let b = parse_type("b[]").unwrap().as_atom().unwrap().clone();
        let g = TypeEnv::new().with_tree("x", b);
        let env = ValueEnv::new().with_tree("x", tree("b[]"));
        assert!(conforms(&sig, &env, &g).unwrap());
        let g = TypeEnv::new().with_forest("x", parse_type("a[]").unwrap());
        let env = ValueEnv::new().with_forest("x", Forest::empty());
        assert!(!conforms(&sig, &env, &g).unwrap());
        let g = TypeEnv::new().with_forest("x", parse_type("Tree").unwrap());
        let env = ValueEnv::new().with_forest("x", val("tree[leaf[\"x\"]]"));
        assert!(conforms(&sig, &env, &g).unwrap());
    }
}
