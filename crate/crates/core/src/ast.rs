//! Abstract syntax of queries, updates, and programs.

use std::fmt;

use crate::diag::Span;
use crate::subtype::TestKind;
use crate::types::{Label, Signature, Type};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExprKind {
    Empty,
    Concat(Box<Expr>, Box<Expr>),
    Elem(Label, Box<Expr>),
    Str(String),
    Bool(bool),
    /// Tree or forest variable; which one is decided by the binder.
    Var(String),
    Let(String, Box<Expr>, Box<Expr>),
    If(Box<Expr>, Box<Expr>, Box<Expr>),
    /// `x̄/child`
    Children(String),
    /// `e::n`
    Filter(Box<Expr>, Label),
    /// `for x̄ in e return e'`
    For(String, Box<Expr>, Box<Expr>),
    Call(String, Vec<Expr>),
}

impl Expr {
    pub fn new(kind: ExprKind) -> Expr {
        Expr {
            kind,
            span: Span::default(),
        }
    }

    pub fn at(kind: ExprKind, span: Span) -> Expr {
        Expr { kind, span }
    }

    pub fn empty() -> Expr {
        Expr::new(ExprKind::Empty)
    }

    pub fn concat(l: Expr, r: Expr) -> Expr {
        Expr::new(ExprKind::Concat(Box::new(l), Box::new(r)))
    }

    pub fn elem(n: Label, e: Expr) -> Expr {
        Expr::new(ExprKind::Elem(n, Box::new(e)))
    }

    pub fn str(w: impl Into<String>) -> Expr {
        Expr::new(ExprKind::Str(w.into()))
    }

    pub fn bool(b: bool) -> Expr {
        Expr::new(ExprKind::Bool(b))
    }

    pub fn var(x: impl Into<String>) -> Expr {
        Expr::new(ExprKind::Var(x.into()))
    }

    pub fn let_in(x: impl Into<String>, e: Expr, body: Expr) -> Expr {
        Expr::new(ExprKind::Let(x.into(), Box::new(e), Box::new(body)))
    }

    pub fn if_then_else(c: Expr, t: Expr, e: Expr) -> Expr {
        Expr::new(ExprKind::If(Box::new(c), Box::new(t), Box::new(e)))
    }

    pub fn children(x: impl Into<String>) -> Expr {
        Expr::new(ExprKind::Children(x.into()))
    }

    pub fn filter(e: Expr, n: Label) -> Expr {
        Expr::new(ExprKind::Filter(Box::new(e), n))
    }

    pub fn for_in(x: impl Into<String>, src: Expr, body: Expr) -> Expr {
        Expr::new(ExprKind::For(x.into(), Box::new(src), Box::new(body)))
    }

    pub fn call(f: impl Into<String>, args: Vec<Expr>) -> Expr {
        Expr::new(ExprKind::Call(f.into(), args))
    }

    /// Copy with every span reset, for structural comparison.
    pub fn without_spans(&self) -> Expr {
        use ExprKind::*;
        let b = |e: &Expr| Box::new(e.without_spans());
        Expr::new(match &self.kind {
            Empty => Empty,
            Concat(l, r) => Concat(b(l), b(r)),
            Elem(n, e) => Elem(n.clone(), b(e)),
            Str(w) => Str(w.clone()),
            Bool(v) => Bool(*v),
            Var(x) => Var(x.clone()),
            Let(x, e, body) => Let(x.clone(), b(e), b(body)),
            If(c, t, e) => If(b(c), b(t), b(e)),
            Children(x) => Children(x.clone()),
            Filter(e, n) => Filter(b(e), n.clone()),
            For(x, e, body) => For(x.clone(), b(e), b(body)),
            Call(f, args) => Call(f.clone(), args.iter().map(Expr::without_spans).collect()),
        })
    }

    pub fn size(&self) -> usize {
        use ExprKind::*;
        1 + match &self.kind {
            Empty | Str(_) | Bool(_) | Var(_) | Children(_) => 0,
            Concat(l, r) | Let(_, l, r) | For(_, l, r) => l.size() + r.size(),
            Elem(_, e) | Filter(e, _) => e.size(),
            If(c, t, e) => c.size() + t.size() + e.size(),
            Call(_, args) => args.iter().map(Expr::size).sum(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Multiplicity {
    Singular,
    Plural,
}

impl fmt::Display for Multiplicity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Multiplicity::Singular => "singular",
            Multiplicity::Plural => "plural",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    Left,
    Right,
    Children,
    Iter,
}

impl Direction {
    pub fn keyword(self) -> &'static str {
        match self {
            Direction::Left => "left",
            Direction::Right => "right",
            Direction::Children => "children",
            Direction::Iter => "iter",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stmt {
    pub kind: StmtKind,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StmtKind {
    Skip,
    Seq(Box<Stmt>, Box<Stmt>),
    If(Expr, Box<Stmt>, Box<Stmt>),
    Let(String, Expr, Box<Stmt>),
    Call(String, Vec<Expr>),
    Insert(Expr),
    Delete,
    Rename(Label),
    Snapshot(String, Box<Stmt>),
    Test(TestKind, Box<Stmt>),
    Nav(Direction, Box<Stmt>),
}

impl Stmt {
    pub fn new(kind: StmtKind) -> Stmt {
        Stmt {
            kind,
            span: Span::default(),
        }
    }

    pub fn at(kind: StmtKind, span: Span) -> Stmt {
        Stmt { kind, span }
    }

    pub fn skip() -> Stmt {
        Stmt::new(StmtKind::Skip)
    }

    pub fn seq(a: Stmt, b: Stmt) -> Stmt {
        Stmt::new(StmtKind::Seq(Box::new(a), Box::new(b)))
    }

    pub fn if_then_else(c: Expr, t: Stmt, e: Stmt) -> Stmt {
        Stmt::new(StmtKind::If(c, Box::new(t), Box::new(e)))
    }

    pub fn let_in(x: impl Into<String>, e: Expr, s: Stmt) -> Stmt {
        Stmt::new(StmtKind::Let(x.into(), e, Box::new(s)))
    }

    pub fn call(p: impl Into<String>, args: Vec<Expr>) -> Stmt {
        Stmt::new(StmtKind::Call(p.into(), args))
    }

    pub fn insert(e: Expr) -> Stmt {
        Stmt::new(StmtKind::Insert(e))
    }

    pub fn delete() -> Stmt {
        Stmt::new(StmtKind::Delete)
    }

    pub fn rename(n: Label) -> Stmt {
        Stmt::new(StmtKind::Rename(n))
    }

    pub fn snapshot(x: impl Into<String>, s: Stmt) -> Stmt {
        Stmt::new(StmtKind::Snapshot(x.into(), Box::new(s)))
    }

    pub fn test(phi: TestKind, s: Stmt) -> Stmt {
        Stmt::new(StmtKind::Test(phi, Box::new(s)))
    }

    pub fn nav(d: Direction, s: Stmt) -> Stmt {
        Stmt::new(StmtKind::Nav(d, Box::new(s)))
    }

    pub fn without_spans(&self) -> Stmt {
        use StmtKind::*;
        let b = |s: &Stmt| Box::new(s.without_spans());
        Stmt::new(match &self.kind {
            Skip => Skip,
            Seq(l, r) => Seq(b(l), b(r)),
            If(c, t, e) => If(c.without_spans(), b(t), b(e)),
            Let(x, e, s) => Let(x.clone(), e.without_spans(), b(s)),
            Call(p, args) => Call(p.clone(), args.iter().map(Expr::without_spans).collect()),
            Insert(e) => Insert(e.without_spans()),
            Delete => Delete,
            Rename(n) => Rename(n.clone()),
            Snapshot(x, s) => Snapshot(x.clone(), b(s)),
            Test(phi, s) => Test(phi.clone(), b(s)),
            Nav(d, s) => Nav(*d, b(s)),
        })
    }

    pub fn size(&self) -> usize {
        use StmtKind::*;
        1 + match &self.kind {
            Skip | Delete | Rename(_) => 0,
            Seq(l, r) => l.size() + r.size(),
            If(c, t, e) => c.size() + t.size() + e.size(),
            Let(_, e, s) => e.size() + s.size(),
            Call(_, args) => args.iter().map(Expr::size).sum(),
            Insert(e) => e.size(),
            Snapshot(_, s) | Test(_, s) | Nav(_, s) => s.size(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Param {
    pub name: String,
    pub ty: Type,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeDecl {
    pub name: String,
    pub body: Type,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctionDecl {
    pub name: String,
    pub params: Vec<Param>,
    pub ret: Type,
    pub body: Expr,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProcedureDecl {
    pub name: String,
    pub params: Vec<Param>,
    pub input: Type,
    pub output: Type,
    pub body: Stmt,
    pub span: Span,
}

/// An externally supplied variable: `declare [tree] variable $x : t;`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarDecl {
    pub name: String,
    pub tree: bool,
    pub ty: Type,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Main {
    Query {
        expr: Expr,
        ty: Type,
    },
    Update {
        stmt: Stmt,
        input: Type,
        output: Type,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Program {
    pub types: Vec<TypeDecl>,
    pub variables: Vec<VarDecl>,
    pub functions: Vec<FunctionDecl>,
    pub procedures: Vec<ProcedureDecl>,
    pub main: Main,
    pub main_span: Span,
}

impl Program {
    /// The signature formed by the `type` declarations.
    pub fn signature(&self) -> Signature {
        let mut sig = Signature::new();
        for d in &self.types {
            sig.define(d.name.clone(), d.body.clone());
        }
        sig
    }

    pub fn is_query(&self) -> bool {
        matches!(self.main, Main::Query { .. })
    }

    pub fn without_spans(&self) -> Program {
        let none = Span::default;
        Program {
            types: self
                .types
                .iter()
                .map(|d| TypeDecl {
                    span: none(),
                    ..d.clone()
                })
                .collect(),
            variables: self
                .variables
                .iter()
                .map(|d| VarDecl {
                    span: none(),
                    ..d.clone()
                })
                .collect(),
            functions: self
                .functions
                .iter()
                .map(|d| FunctionDecl {
                    name: d.name.clone(),
                    params: d.params.clone(),
                    ret: d.ret.clone(),
                    body: d.body.without_spans(),
                    span: none(),
                })
                .collect(),
            procedures: self
                .procedures
                .iter()
                .map(|d| ProcedureDecl {
                    name: d.name.clone(),
                    params: d.params.clone(),
                    input: d.input.clone(),
                    output: d.output.clone(),
                    body: d.body.without_spans(),
                    span: none(),
                })
                .collect(),
            main: match &self.main {
                Main::Query { expr, ty } => Main::Query {
                    expr: expr.without_spans(),
                    ty: ty.clone(),
                },
                Main::Update {
                    stmt,
                    input,
                    output,
                } => Main::Update {
                    stmt: stmt.without_spans(),
                    input: input.clone(),
                    output: output.clone(),
                },
            },
            main_span: none(),
        }
    }
}
