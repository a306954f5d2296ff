//! Greedy shrinking of failing instances.

use flux_core::{Atom, Expr, ExprKind, Forest, Stmt, StmtKind, Tree, Type};

/// One-step simplifications, roughly smallest first.
pub trait Shrink: Sized + Clone {
    fn candidates(&self) -> Vec<Self>;
}

/// Repeatedly replaces `x` by its first candidate that still fails, until
/// no candidate does. `fails` must reject instances that break the
/// property's preconditions.
pub fn shrink<T: Shrink>(mut x: T, mut fails: impl FnMut(&T) -> bool) -> T {
    let mut budget = 2_000;
    'outer: while budget > 0 {
        for c in x.candidates() {
            budget -= 1;
            if fails(&c) {
                x = c;
                continue 'outer;
            }
            if budget == 0 {
                break;
            }
        }
        break;
    }
    x
}

impl Shrink for Type {
    fn candidates(&self) -> Vec<Type> {
        let mut out = Vec::new();
        if *self != Type::Empty {
            out.push(Type::Empty);
        }
        match self {
            Type::Empty | Type::Var(_) | Type::Atom(Atom::Bool | Atom::String) => {}
            Type::Atom(Atom::Element(n, c)) => {
                out.extend(
                    c.candidates()
                        .into_iter()
                        .map(|c| Type::element(n.clone(), c)),
                );
            }
            Type::Or(l, r) | Type::Seq(l, r) => {
                out.push((**l).clone());
                out.push((**r).clone());
                let rebuild = |l: Type, r: Type| match self {
                    Type::Or(..) => Type::or(l, r),
                    _ => Type::seq(l, r),
                };
                out.extend(
                    l.candidates()
                        .into_iter()
                        .map(|l2| rebuild(l2, (**r).clone())),
                );
                out.extend(
                    r.candidates()
                        .into_iter()
                        .map(|r2| rebuild((**l).clone(), r2)),
                );
            }
            Type::Star(t) => {
                out.push((**t).clone());
                out.extend(t.candidates().into_iter().map(Type::star));
            }
        }
        out
    }
}

impl Shrink for Expr {
    fn candidates(&self) -> Vec<Expr> {
        let mut out = Vec::new();
        if self.kind != ExprKind::Empty {
            out.push(Expr::empty());
        }
        let b = |e: &Expr| e.clone();
        match &self.kind {
            ExprKind::Empty
            | ExprKind::Str(_)
            | ExprKind::Bool(_)
            | ExprKind::Var(_)
            | ExprKind::Children(_) => {}
            ExprKind::Concat(l, r) => {
                out.push(b(l));
                out.push(b(r));
                out.extend(l.candidates().into_iter().map(|l2| Expr::concat(l2, b(r))));
                out.extend(r.candidates().into_iter().map(|r2| Expr::concat(b(l), r2)));
            }
            ExprKind::Elem(n, c) => {
                out.push(b(c));
                out.extend(
                    c.candidates()
                        .into_iter()
                        .map(|c2| Expr::elem(n.clone(), c2)),
                );
            }
            ExprKind::Filter(e, n) => {
                out.push(b(e));
                out.extend(
                    e.candidates()
                        .into_iter()
                        .map(|e2| Expr::filter(e2, n.clone())),
                );
            }
            ExprKind::Let(x, e, body) => {
                out.push(b(body));
                out.extend(
                    e.candidates()
                        .into_iter()
                        .map(|e2| Expr::let_in(x, e2, b(body))),
                );
                out.extend(
                    body.candidates()
                        .into_iter()
                        .map(|b2| Expr::let_in(x, b(e), b2)),
                );
            }
            ExprKind::For(x, src, body) => {
                out.push(b(src));
                out.push(b(body));
                out.extend(
                    src.candidates()
                        .into_iter()
                        .map(|s2| Expr::for_in(x, s2, b(body))),
                );
                out.extend(
                    body.candidates()
                        .into_iter()
                        .map(|b2| Expr::for_in(x, b(src), b2)),
                );
            }
            ExprKind::If(c, t, f) => {
                out.push(b(t));
                out.push(b(f));
                out.extend(
                    t.candidates()
                        .into_iter()
                        .map(|t2| Expr::if_then_else(b(c), t2, b(f))),
                );
                out.extend(
                    f.candidates()
                        .into_iter()
                        .map(|f2| Expr::if_then_else(b(c), b(t), f2)),
                );
            }
            ExprKind::Call(f, args) => {
                for (i, a) in args.iter().enumerate() {
                    for a2 in a.candidates() {
                        let mut args2 = args.clone();
                        args2[i] = a2;
                        out.push(Expr::call(f, args2));
                    }
                }
            }
        }
        out
    }
}

impl Shrink for Stmt {
    fn candidates(&self) -> Vec<Stmt> {
        let mut out = Vec::new();
        match &self.kind {
            StmtKind::Skip => return out,
            StmtKind::Delete => {
                out.push(Stmt::skip());
                return out;
            }
            _ => out.push(Stmt::skip()),
        }
        let b = |s: &Stmt| s.clone();
        match &self.kind {
            StmtKind::Skip | StmtKind::Delete | StmtKind::Rename(_) | StmtKind::Call(..) => {}
            StmtKind::Insert(e) => {
                out.extend(e.candidates().into_iter().map(Stmt::insert));
            }
            StmtKind::Seq(l, r) => {
                out.push(b(l));
                out.push(b(r));
                out.extend(l.candidates().into_iter().map(|l2| Stmt::seq(l2, b(r))));
                out.extend(r.candidates().into_iter().map(|r2| Stmt::seq(b(l), r2)));
            }
            StmtKind::If(c, t, f) => {
                out.push(b(t));
                out.push(b(f));
                out.extend(
                    t.candidates()
                        .into_iter()
                        .map(|t2| Stmt::if_then_else(c.clone(), t2, b(f))),
                );
                out.extend(
                    f.candidates()
                        .into_iter()
                        .map(|f2| Stmt::if_then_else(c.clone(), b(t), f2)),
                );
            }
            StmtKind::Let(x, e, body) => {
                out.push(b(body));
                out.extend(
                    body.candidates()
                        .into_iter()
                        .map(|b2| Stmt::let_in(x, e.clone(), b2)),
                );
            }
            StmtKind::Snapshot(x, body) => {
                out.push(b(body));
                out.extend(
                    body.candidates()
                        .into_iter()
                        .map(|b2| Stmt::snapshot(x, b2)),
                );
            }
            StmtKind::Test(phi, body) => {
                out.push(b(body));
                out.extend(
                    body.candidates()
                        .into_iter()
                        .map(|b2| Stmt::test(phi.clone(), b2)),
                );
            }
            StmtKind::Nav(d, body) => {
                out.push(b(body));
                out.extend(body.candidates().into_iter().map(|b2| Stmt::nav(*d, b2)));
            }
        }
        out
    }
}

impl Shrink for Forest {
    fn candidates(&self) -> Vec<Forest> {
        let mut out = Vec::new();
        for i in 0..self.len() {
            let mut ts = self.trees().to_vec();
            ts.remove(i);
            out.push(Forest(ts));
        }
        for (i, t) in self.iter().enumerate() {
            if let Tree::Node(n, kids) = t {
                for k2 in kids.candidates() {
                    let mut ts = self.trees().to_vec();
                    ts[i] = Tree::Node(n.clone(), k2);
                    out.push(Forest(ts));
                }
            }
        }
        out
    }
}

impl<A: Shrink, B: Shrink> Shrink for (A, B) {
    fn candidates(&self) -> Vec<(A, B)> {
        let mut out: Vec<(A, B)> = self
            .0
            .candidates()
            .into_iter()
            .map(|a| (a, self.1.clone()))
            .collect();
        out.extend(self.1.candidates().into_iter().map(|b| (self.0.clone(), b)));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use flux_core::{parse_stmt, parse_type, parse_value};

    #[test]
    fn shrinks_type_to_minimal_star() {
        let t = parse_type("(a[b[]] | b[])*, a[]").unwrap();
        let small = shrink(t, |t| {
            matches!(t, Type::Star(_)) || t.to_string().contains('*')
        });
        assert_eq!(small.to_string(), "()*");
    }

    #[test]
    fn shrinks_statement_and_value_together() {
        let s = parse_stmt("iter[a?children[delete]; rename b]").unwrap();
        let v = parse_value("a[c[]], b[], a[]").unwrap();
        let (s2, v2) = shrink((s, v), |(s, v)| {
            flux_core::syntax::print_stmt(s).contains("rename") && v.len() >= 2
        });
        assert_eq!(flux_core::syntax::print_stmt(&s2), "rename b");
        assert_eq!(v2.len(), 2);
    }
}
