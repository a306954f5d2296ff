use std::collections::HashSet;
use std::sync::Arc;

use crate::ast::{
    Direction, Expr, ExprKind, FunctionDecl, Main, Param, ProcedureDecl, Program, Stmt, StmtKind,
    TypeDecl, VarDecl,
};
use crate::diag::Span;
use crate::env::{Binding, TypeEnv};
use crate::subtype::TestKind;
use crate::types::{Label, Signature, Type};
use crate::value::{Forest, Tree};

use super::lexer::{tokenize, Tok, Token};
use super::SyntaxError;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Kind {
    Tree,
    Forest,
}

struct Scoped {
    source: String,
    actual: String,
    kind: Kind,
}

pub(crate) struct Parser {
    toks: Vec<Token>,
    pos: usize,
    scope: Vec<Scoped>,
    used: HashSet<String>,
}

const EXPR_KEYWORDS: [&str; 5] = ["let", "if", "for", "true", "false"];

impl Parser {
    pub(crate) fn new(src: &str, file: Option<Arc<str>>) -> Result<Parser, SyntaxError> {
        let toks = tokenize(src, file)?;
        let used = toks
            .iter()
            .filter_map(|t| match &t.tok {
                Tok::Var(x) => Some(x.clone()),
                _ => None,
            })
            .collect();
        Ok(Parser {
            toks,
            pos: 0,
            scope: Vec::new(),
            used,
        })
    }

    /// Makes the names of `env` visible with their binder kinds.
    pub(crate) fn with_env(mut self, env: &TypeEnv) -> Parser {
        for (x, b) in env.iter() {
            let kind = match b {
                Binding::Tree(_) => Kind::Tree,
                Binding::Forest(_) => Kind::Forest,
            };
            self.used.insert(x.to_string());
            self.scope.push(Scoped {
                source: x.to_string(),
                actual: x.to_string(),
                kind,
            });
        }
        self
    }

    // Token plumbing.

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn span(&self) -> Span {
        self.toks[self.pos].span.clone()
    }

    fn since(&self, start: usize) -> Span {
        let last = self.pos.saturating_sub(1).max(start);
        self.toks[start].span.to(&self.toks[last].span)
    }

    fn advance(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn at(&self, t: &Tok) -> bool {
        self.peek() == t
    }

    fn at_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.at(t) {
            self.advance();
            true
        } else {
            false
        }
    }

    fn error(&self, expected: &[&str]) -> SyntaxError {
        let found = self.peek().describe();
        let message = match expected {
            [] => format!("unexpected {found}"),
            [one] => format!("expected {one}, found {found}"),
            many => format!("expected one of {}, found {found}", many.join(", ")),
        };
        SyntaxError {
            message,
            span: self.span(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn expect(&mut self, t: Tok) -> Result<Token, SyntaxError> {
        if self.at(&t) {
            Ok(self.advance())
        } else {
            Err(self.error(&[&t.describe()]))
        }
    }

    fn expect_kw(&mut self, kw: &str) -> Result<(), SyntaxError> {
        if self.at_kw(kw) {
            self.advance();
            Ok(())
        } else {
            Err(self.error(&[&format!("`{kw}`")]))
        }
    }

    fn ident(&mut self) -> Result<String, SyntaxError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.advance();
                Ok(s)
            }
            _ => Err(self.error(&["identifier"])),
        }
    }

    fn label(&mut self) -> Result<Label, SyntaxError> {
        let span = self.span();
        let s = self.ident()?;
        Label::new(s).map_err(|e| SyntaxError {
            message: e.to_string(),
            span,
            expected: Vec::new(),
        })
    }

    fn var_name(&mut self) -> Result<String, SyntaxError> {
        match self.peek().clone() {
            Tok::Var(s) => {
                self.advance();
                Ok(s)
            }
            _ => Err(self.error(&["variable"])),
        }
    }

    pub(crate) fn finish(&mut self) -> Result<(), SyntaxError> {
        if self.at(&Tok::Eof) {
            Ok(())
        } else {
            Err(self.error(&["end of input"]))
        }
    }

    // Scoping and α-renaming.

    fn lookup(&self, source: &str) -> Option<&Scoped> {
        self.scope.iter().rev().find(|s| s.source == source)
    }

    /// Binds `source`, renaming it if it would shadow a visible name.
    fn bind(&mut self, source: &str, kind: Kind) -> String {
        let actual = if self.lookup(source).is_some() {
            self.fresh(source)
        } else {
            source.to_string()
        };
        self.scope.push(Scoped {
            source: source.to_string(),
            actual: actual.clone(),
            kind,
        });
        actual
    }

    fn fresh(&mut self, base: &str) -> String {
        let visible: HashSet<&str> = self.scope.iter().map(|s| s.actual.as_str()).collect();
        let mut i = 1;
        loop {
            let cand = format!("{base}_{i}");
            if !self.used.contains(&cand) && !visible.contains(cand.as_str()) {
                self.used.insert(cand.clone());
                return cand;
            }
            i += 1;
        }
    }

    fn unbind(&mut self) {
        self.scope.pop();
    }

    fn resolve(&self, source: &str) -> (String, Option<Kind>) {
        match self.lookup(source) {
            Some(s) => (s.actual.clone(), Some(s.kind)),
            None => (source.to_string(), None),
        }
    }

    // Types.

    pub(crate) fn ty(&mut self) -> Result<Type, SyntaxError> {
        let mut t = self.seq_type()?;
        while self.eat(&Tok::Pipe) {
            let r = self.seq_type()?;
            t = Type::or(t, r);
        }
        Ok(t)
    }

    fn seq_type(&mut self) -> Result<Type, SyntaxError> {
        let mut t = self.postfix_type()?;
        while self.eat(&Tok::Comma) {
            let r = self.postfix_type()?;
            t = Type::seq(t, r);
        }
        Ok(t)
    }

    /// A type without top-level `,` or `|`; used where commas separate items.
    pub(crate) fn postfix_type(&mut self) -> Result<Type, SyntaxError> {
        let mut t = self.primary_type()?;
        loop {
            if self.eat(&Tok::Star) {
                t = Type::star(t);
            } else if self.eat(&Tok::Plus) {
                t = Type::plus(t);
            } else if self.eat(&Tok::Question) {
                t = Type::opt(t);
            } else {
                return Ok(t);
            }
        }
    }

    fn primary_type(&mut self) -> Result<Type, SyntaxError> {
        match self.peek().clone() {
            Tok::LParen => {
                self.advance();
                if self.eat(&Tok::RParen) {
                    return Ok(Type::Empty);
                }
                let t = self.ty()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            Tok::Ident(name) => {
                if *self.peek_at(1) == Tok::LBracket {
                    let n = self.label()?;
                    self.advance();
                    if self.eat(&Tok::RBracket) {
                        return Ok(Type::element(n, Type::Empty));
                    }
                    let c = self.ty()?;
                    self.expect(Tok::RBracket)?;
                    return Ok(Type::element(n, c));
                }
                match name.as_str() {
                    "bool" => {
                        self.advance();
                        Ok(Type::bool())
                    }
                    "string" => {
                        self.advance();
                        Ok(Type::string())
                    }
                    _ if name.starts_with(|c: char| c.is_ascii_uppercase()) => {
                        self.advance();
                        Ok(Type::var(name))
                    }
                    _ => Err(SyntaxError {
                        message: format!("`{name}` is neither a type variable nor followed by `[`"),
                        span: self.span(),
                        expected: vec!["`[`".to_string()],
                    }),
                }
            }
            _ => Err(self.error(&["`(`", "`bool`", "`string`", "label", "type variable"])),
        }
    }

    pub(crate) fn signature(&mut self) -> Result<Signature, SyntaxError> {
        let mut sig = Signature::new();
        while self.at_kw("type") {
            let d = self.type_decl()?;
            if sig.contains(&d.name) {
                return Err(duplicate("type", &d.name, d.span));
            }
            sig.define(d.name, d.body);
            self.eat(&Tok::Semi);
        }
        Ok(sig)
    }

    fn type_decl(&mut self) -> Result<TypeDecl, SyntaxError> {
        let start = self.pos;
        self.expect_kw("type")?;
        let name_span = self.span();
        let name = self.ident()?;
        if !name.starts_with(|c: char| c.is_ascii_uppercase()) {
            return Err(SyntaxError {
                message: format!("type variable {name} must start with an uppercase letter"),
                span: name_span,
                expected: vec!["type variable".to_string()],
            });
        }
        self.expect(Tok::Eq)?;
        let body = self.ty()?;
        Ok(TypeDecl {
            name,
            body,
            span: self.since(start),
        })
    }

    // Values.

    pub(crate) fn forest(&mut self) -> Result<Forest, SyntaxError> {
        let mut trees = Vec::new();
        if matches!(self.peek(), Tok::RBracket | Tok::Eof) {
            return Ok(Forest(trees));
        }
        loop {
            self.value_item(&mut trees)?;
            if !self.eat(&Tok::Comma) {
                return Ok(Forest(trees));
            }
        }
    }

    fn value_item(&mut self, out: &mut Vec<Tree>) -> Result<(), SyntaxError> {
        match self.peek().clone() {
            Tok::LParen => {
                self.advance();
                if !self.eat(&Tok::RParen) {
                    out.extend(self.forest()?);
                    self.expect(Tok::RParen)?;
                }
            }
            Tok::Str(s) => {
                self.advance();
                out.push(Tree::Str(s));
            }
            Tok::Ident(_) if *self.peek_at(1) == Tok::LBracket => {
                let n = self.label()?;
                self.advance();
                let kids = self.forest()?;
                self.expect(Tok::RBracket)?;
                out.push(Tree::Node(n, kids));
            }
            Tok::Ident(name) if name == "true" || name == "false" => {
                self.advance();
                out.push(Tree::Bool(name == "true"));
            }
            _ => return Err(self.error(&["`true`", "`false`", "string literal", "label", "`(`"])),
        }
        Ok(())
    }

    // Expressions.

    pub(crate) fn expr(&mut self) -> Result<Expr, SyntaxError> {
        let start = self.pos;
        let mut e = self.item()?;
        while self.eat(&Tok::Comma) {
            let r = self.item()?;
            e = Expr::at(
                ExprKind::Concat(Box::new(e), Box::new(r)),
                self.since(start),
            );
        }
        Ok(e)
    }

    fn item(&mut self) -> Result<Expr, SyntaxError> {
        let start = self.pos;
        let next_is_var = matches!(self.peek_at(1), Tok::Var(_));
        if self.at_kw("let") && next_is_var {
            self.advance();
            let x = self.var_name()?;
            self.expect(Tok::Eq)?;
            let bound = self.expr()?;
            self.expect_kw("in")?;
            let x = self.bind(&x, Kind::Forest);
            let body = self.item();
            self.unbind();
            let kind = ExprKind::Let(x, Box::new(bound), Box::new(body?));
            return Ok(Expr::at(kind, self.since(start)));
        }
        if self.at_kw("for") && next_is_var {
            self.advance();
            let x = self.var_name()?;
            self.expect_kw("in")?;
            let src = self.expr()?;
            self.expect_kw("return")?;
            let x = self.bind(&x, Kind::Tree);
            let body = self.item();
            self.unbind();
            let kind = ExprKind::For(x, Box::new(src), Box::new(body?));
            return Ok(Expr::at(kind, self.since(start)));
        }
        if self.at_kw("if") && !matches!(self.peek_at(1), Tok::LBracket) {
            self.advance();
            let c = self.expr()?;
            self.expect_kw("then")?;
            let t = self.item()?;
            self.expect_kw("else")?;
            let e = self.item()?;
            let kind = ExprKind::If(Box::new(c), Box::new(t), Box::new(e));
            return Ok(Expr::at(kind, self.since(start)));
        }
        self.postfix_expr()
    }

    fn postfix_expr(&mut self) -> Result<Expr, SyntaxError> {
        let start = self.pos;
        let mut e = self.primary_expr()?;
        loop {
            if self.eat(&Tok::ColonColon) {
                let n = self.label()?;
                e = Expr::at(ExprKind::Filter(Box::new(e), n), self.since(start));
            } else if self.eat(&Tok::Slash) {
                let filter = match self.peek().clone() {
                    Tok::Star => {
                        self.advance();
                        None
                    }
                    Tok::Ident(s) if s == "child" => {
                        self.advance();
                        if self.eat(&Tok::ColonColon) {
                            Some(self.label()?)
                        } else {
                            None
                        }
                    }
                    Tok::Ident(_) => Some(self.label()?),
                    _ => return Err(self.error(&["label", "`*`", "`child`"])),
                };
                let span = self.since(start);
                e = self.child_step(e, filter, span);
            } else {
                return Ok(e);
            }
        }
    }

    /// `e/child[::n]`: direct on a tree variable, otherwise through a loop
    /// binding a fresh tree variable.
    fn child_step(&mut self, e: Expr, filter: Option<Label>, span: Span) -> Expr {
        let with_filter = |x: String, span: &Span| {
            let kids = Expr::at(ExprKind::Children(x), span.clone());
            match &filter {
                Some(n) => Expr::at(ExprKind::Filter(Box::new(kids), n.clone()), span.clone()),
                None => kids,
            }
        };
        if let ExprKind::Var(x) = &e.kind {
            let tree_like = self
                .scope
                .iter()
                .rev()
                .find(|s| s.actual == *x)
                .is_none_or(|s| s.kind == Kind::Tree);
            if tree_like {
                return with_filter(x.clone(), &span);
            }
        }
        let y = self.fresh("y");
        let body = with_filter(y.clone(), &span);
        Expr::at(ExprKind::For(y, Box::new(e), Box::new(body)), span)
    }

    fn primary_expr(&mut self) -> Result<Expr, SyntaxError> {
        let start = self.pos;
        match self.peek().clone() {
            Tok::LParen => {
                self.advance();
                if self.eat(&Tok::RParen) {
                    return Ok(Expr::at(ExprKind::Empty, self.since(start)));
                }
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Tok::Str(s) => {
                self.advance();
                Ok(Expr::at(ExprKind::Str(s), self.since(start)))
            }
            Tok::Var(x) => {
                self.advance();
                let (actual, _) = self.resolve(&x);
                Ok(Expr::at(ExprKind::Var(actual), self.since(start)))
            }
            Tok::Ident(name) => match self.peek_at(1) {
                Tok::LBracket => {
                    let n = self.label()?;
                    self.advance();
                    let content = if self.at(&Tok::RBracket) {
                        Expr::at(ExprKind::Empty, self.span())
                    } else {
                        self.expr()?
                    };
                    self.expect(Tok::RBracket)?;
                    Ok(Expr::at(
                        ExprKind::Elem(n, Box::new(content)),
                        self.since(start),
                    ))
                }
                _ if name == "true" || name == "false" => {
                    self.advance();
                    Ok(Expr::at(ExprKind::Bool(name == "true"), self.since(start)))
                }
                Tok::LParen if !EXPR_KEYWORDS.contains(&name.as_str()) => {
                    self.advance();
                    let args = self.args()?;
                    Ok(Expr::at(ExprKind::Call(name, args), self.since(start)))
                }
                _ => Err(self.error(&["expression"])),
            },
            _ => Err(self.error(&["expression"])),
        }
    }

    fn args(&mut self) -> Result<Vec<Expr>, SyntaxError> {
        self.expect(Tok::LParen)?;
        let mut args = Vec::new();
        if self.eat(&Tok::RParen) {
            return Ok(args);
        }
        loop {
            args.push(self.item()?);
            if self.eat(&Tok::RParen) {
                return Ok(args);
            }
            if !self.eat(&Tok::Comma) {
                return Err(self.error(&["`,`", "`)`"]));
            }
        }
    }

    // Statements.

    pub(crate) fn stmt(&mut self) -> Result<Stmt, SyntaxError> {
        let start = self.pos;
        let mut s = self.stmt_item()?;
        while self.eat(&Tok::Semi) {
            let r = self.stmt_item()?;
            s = Stmt::at(StmtKind::Seq(Box::new(s), Box::new(r)), self.since(start));
        }
        Ok(s)
    }

    fn stmt_item(&mut self) -> Result<Stmt, SyntaxError> {
        let start = self.pos;
        if *self.peek_at(1) == Tok::Question {
            let phi = match self.peek().clone() {
                Tok::Star => TestKind::Wildcard,
                Tok::Ident(s) if s == "bool" => TestKind::Bool,
                Tok::Ident(s) if s == "string" => TestKind::String,
                Tok::Ident(_) => TestKind::Label(self.label_here()?),
                _ => return Err(self.error(&["statement"])),
            };
            self.advance();
            self.advance();
            let body = self.stmt_item()?;
            return Ok(Stmt::at(
                StmtKind::Test(phi, Box::new(body)),
                self.since(start),
            ));
        }
        let kw = match self.peek() {
            Tok::Ident(s) => s.clone(),
            Tok::LParen => {
                self.advance();
                let s = self.stmt()?;
                self.expect(Tok::RParen)?;
                return Ok(s);
            }
            _ => return Err(self.error(&["statement"])),
        };
        let dir = match kw.as_str() {
            "left" => Some(Direction::Left),
            "right" => Some(Direction::Right),
            "children" => Some(Direction::Children),
            "iter" => Some(Direction::Iter),
            _ => None,
        };
        if let (Some(d), Tok::LBracket) = (dir, self.peek_at(1)) {
            self.advance();
            self.advance();
            let body = self.stmt()?;
            self.expect(Tok::RBracket)?;
            return Ok(Stmt::at(
                StmtKind::Nav(d, Box::new(body)),
                self.since(start),
            ));
        }
        let kind = match kw.as_str() {
            "skip" => {
                self.advance();
                StmtKind::Skip
            }
            "delete" => {
                self.advance();
                StmtKind::Delete
            }
            "rename" => {
                self.advance();
                StmtKind::Rename(self.label()?)
            }
            "insert" => {
                self.advance();
                StmtKind::Insert(self.expr()?)
            }
            "if" => {
                self.advance();
                let c = self.expr()?;
                self.expect_kw("then")?;
                let t = self.stmt_item()?;
                self.expect_kw("else")?;
                let e = self.stmt_item()?;
                StmtKind::If(c, Box::new(t), Box::new(e))
            }
            "let" => {
                self.advance();
                let x = self.var_name()?;
                self.expect(Tok::Eq)?;
                let bound = self.expr()?;
                self.expect_kw("in")?;
                let x = self.bind(&x, Kind::Forest);
                let body = self.stmt();
                self.unbind();
                StmtKind::Let(x, bound, Box::new(body?))
            }
            "snapshot" => {
                self.advance();
                let x = self.var_name()?;
                self.expect_kw("in")?;
                let x = self.bind(&x, Kind::Forest);
                let body = self.stmt();
                self.unbind();
                StmtKind::Snapshot(x, Box::new(body?))
            }
            _ if *self.peek_at(1) == Tok::LParen => {
                self.advance();
                StmtKind::Call(kw, self.args()?)
            }
            _ => return Err(self.error(&["statement"])),
        };
        Ok(Stmt::at(kind, self.since(start)))
    }

    fn label_here(&self) -> Result<Label, SyntaxError> {
        match self.peek() {
            Tok::Ident(s) => Label::new(s.clone()).map_err(|e| SyntaxError {
                message: e.to_string(),
                span: self.span(),
                expected: Vec::new(),
            }),
            _ => Err(self.error(&["label"])),
        }
    }

    // Programs.

    pub(crate) fn program(&mut self) -> Result<Program, SyntaxError> {
        let mut types: Vec<TypeDecl> = Vec::new();
        let mut variables: Vec<VarDecl> = Vec::new();
        let mut functions = Vec::new();
        let mut procedures = Vec::new();
        loop {
            if self.at_kw("type") {
                let d = self.type_decl()?;
                if types.iter().any(|t| t.name == d.name) {
                    return Err(duplicate("type", &d.name, d.span));
                }
                types.push(d);
                self.expect(Tok::Semi)?;
            } else if self.at_kw("declare") {
                let start = self.pos;
                self.advance();
                if self.at_kw("function") {
                    self.advance();
                    functions.push(self.function_decl(start)?);
                } else if self.at_kw("procedure") {
                    self.advance();
                    procedures.push(self.procedure_decl(start)?);
                } else if self.at_kw("variable") || self.at_kw("tree") {
                    let tree = self.at_kw("tree");
                    if tree {
                        self.advance();
                    }
                    self.expect_kw("variable")?;
                    let name = self.var_name()?;
                    self.expect(Tok::Colon)?;
                    let ty = self.ty()?;
                    if variables.iter().any(|v| v.name == name) {
                        return Err(duplicate("variable", &name, self.since(start)));
                    }
                    let kind = if tree { Kind::Tree } else { Kind::Forest };
                    self.scope.push(Scoped {
                        source: name.clone(),
                        actual: name.clone(),
                        kind,
                    });
                    variables.push(VarDecl {
                        name,
                        tree,
                        ty,
                        span: self.since(start),
                    });
                } else {
                    return Err(self.error(&["`function`", "`procedure`", "`variable`", "`tree`"]));
                }
                self.expect(Tok::Semi)?;
            } else {
                break;
            }
        }
        let start = self.pos;
        let main = if self.at_kw("query") {
            self.advance();
            let expr = self.expr()?;
            self.expect(Tok::Colon)?;
            let ty = self.ty()?;
            Main::Query { expr, ty }
        } else if self.at_kw("update") {
            self.advance();
            let stmt = self.stmt()?;
            self.expect(Tok::Colon)?;
            let input = self.ty()?;
            self.expect(Tok::Arrow)?;
            let output = self.ty()?;
            Main::Update {
                stmt,
                input,
                output,
            }
        } else {
            return Err(self.error(&["`type`", "`declare`", "`query`", "`update`"]));
        };
        let main_span = self.since(start);
        self.eat(&Tok::Semi);
        self.finish()?;
        Ok(Program {
            types,
            variables,
            functions,
            procedures,
            main,
            main_span,
        })
    }

    fn params(&mut self) -> Result<Vec<Param>, SyntaxError> {
        self.expect(Tok::LParen)?;
        let mut params: Vec<Param> = Vec::new();
        if self.eat(&Tok::RParen) {
            return Ok(params);
        }
        loop {
            let span = self.span();
            let name = self.var_name()?;
            if params.iter().any(|p| p.name == name) {
                return Err(duplicate("parameter", &name, span));
            }
            self.expect(Tok::Colon)?;
            let ty = self.postfix_type()?;
            params.push(Param { name, ty });
            if self.eat(&Tok::RParen) {
                return Ok(params);
            }
            if !self.eat(&Tok::Comma) {
                return Err(self.error(&["`,`", "`)`"]));
            }
        }
    }

    fn push_params(&mut self, params: &[Param]) {
        for p in params {
            self.scope.push(Scoped {
                source: p.name.clone(),
                actual: p.name.clone(),
                kind: Kind::Forest,
            });
        }
    }

    fn pop_params(&mut self, params: &[Param]) {
        for _ in params {
            self.unbind();
        }
    }

    fn function_decl(&mut self, start: usize) -> Result<FunctionDecl, SyntaxError> {
        let name = self.ident()?;
        let params = self.params()?;
        self.expect(Tok::Colon)?;
        let ret = self.ty()?;
        self.expect(Tok::LBrace)?;
        self.push_params(&params);
        let body = self.expr();
        self.pop_params(&params);
        let body = body?;
        self.expect(Tok::RBrace)?;
        Ok(FunctionDecl {
            name,
            params,
            ret,
            body,
            span: self.since(start),
        })
    }

    fn procedure_decl(&mut self, start: usize) -> Result<ProcedureDecl, SyntaxError> {
        let name = self.ident()?;
        let params = self.params()?;
        self.expect(Tok::Colon)?;
        let input = self.ty()?;
        self.expect(Tok::Arrow)?;
        let output = self.ty()?;
        self.expect(Tok::LBrace)?;
        self.push_params(&params);
        let body = self.stmt();
        self.pop_params(&params);
        let body = body?;
        self.expect(Tok::RBrace)?;
        Ok(ProcedureDecl {
            name,
            params,
            input,
            output,
            body,
            span: self.since(start),
        })
    }
}

fn duplicate(kind: &str, name: &str, span: Span) -> SyntaxError {
    SyntaxError {
        message: format!("{kind} {name} is declared more than once"),
        span,
        expected: Vec::new(),
    }
}
