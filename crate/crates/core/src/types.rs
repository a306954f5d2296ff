//! Regular-expression types over atomic types, and recursive type signatures.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::diag::{Diagnostic, Rule};
use crate::error::TypeError;

/// An element label. Always a non-empty identifier.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Label(String);

impl Label {
    pub fn new(name: impl Into<String>) -> Result<Label, InvalidLabel> {
        let name = name.into();
        if is_identifier(&name) {
            Ok(Label(name))
        } else {
            Err(InvalidLabel(name))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("`{0}` is not a valid label")]
pub struct InvalidLabel(pub String);

impl TryFrom<String> for Label {
    type Error = InvalidLabel;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        Label::new(s)
    }
}

impl From<Label> for String {
    fn from(l: Label) -> String {
        l.0
    }
}

impl fmt::Debug for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Letter followed by letters, digits or underscores.
pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Atomic types: the types of single trees.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Atom {
    Bool,
    String,
    Element(Label, Box<Type>),
}

/// Sequence types.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Type {
    Empty,
    Atom(Atom),
    Or(Box<Type>, Box<Type>),
    Seq(Box<Type>, Box<Type>),
    Star(Box<Type>),
    Var(String),
}

impl Atom {
    pub fn element(label: Label, content: Type) -> Atom {
        Atom::Element(label, Box::new(content))
    }

    pub fn into_type(self) -> Type {
        Type::Atom(self)
    }
}

impl Type {
    pub fn atom(a: Atom) -> Type {
        Type::Atom(a)
    }

    pub fn bool() -> Type {
        Type::Atom(Atom::Bool)
    }

    pub fn string() -> Type {
        Type::Atom(Atom::String)
    }

    pub fn element(label: Label, content: Type) -> Type {
        Type::Atom(Atom::element(label, content))
    }

    pub fn or(l: Type, r: Type) -> Type {
        Type::Or(Box::new(l), Box::new(r))
    }

    pub fn seq(l: Type, r: Type) -> Type {
        Type::Seq(Box::new(l), Box::new(r))
    }

    pub fn star(t: Type) -> Type {
        Type::Star(Box::new(t))
    }

    /// `t+`, i.e. `t, t*`.
    pub fn plus(t: Type) -> Type {
        Type::seq(t.clone(), Type::star(t))
    }

    /// `t?`, i.e. `t | ()`.
    pub fn opt(t: Type) -> Type {
        Type::or(t, Type::Empty)
    }

    pub fn var(name: impl Into<String>) -> Type {
        Type::Var(name.into())
    }

    /// Left-nested sequence of the given atoms; `()` for none.
    pub fn word<I: IntoIterator<Item = Atom>>(atoms: I) -> Type {
        atoms
            .into_iter()
            .map(Type::Atom)
            .reduce(Type::seq)
            .unwrap_or(Type::Empty)
    }

    pub fn as_atom(&self) -> Option<&Atom> {
        match self {
            Type::Atom(a) => Some(a),
            _ => None,
        }
    }

    /// Number of AST nodes, counting element content.
    pub fn size(&self) -> usize {
        match self {
            Type::Empty | Type::Var(_) => 1,
            Type::Atom(Atom::Bool) | Type::Atom(Atom::String) => 1,
            Type::Atom(Atom::Element(_, c)) => 1 + c.size(),
            Type::Or(l, r) | Type::Seq(l, r) => 1 + l.size() + r.size(),
            Type::Star(t) => 1 + t.size(),
        }
    }

    /// Every type-variable name occurring anywhere, including inside element content.
    pub fn vars(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars<'a>(&'a self, out: &mut BTreeSet<&'a str>) {
        match self {
            Type::Empty | Type::Atom(Atom::Bool) | Type::Atom(Atom::String) => {}
            Type::Atom(Atom::Element(_, c)) => c.collect_vars(out),
            Type::Or(l, r) | Type::Seq(l, r) => {
                l.collect_vars(out);
                r.collect_vars(out);
            }
            Type::Star(t) => t.collect_vars(out),
            Type::Var(x) => {
                out.insert(x);
            }
        }
    }

    /// Type variables reachable without entering element content.
    pub fn top_level_vars(&self) -> BTreeSet<&str> {
        fn go<'a>(t: &'a Type, out: &mut BTreeSet<&'a str>) {
            match t {
                Type::Empty | Type::Atom(_) => {}
                Type::Or(l, r) | Type::Seq(l, r) => {
                    go(l, out);
                    go(r, out);
                }
                Type::Star(t) => go(t, out),
                Type::Var(x) => {
                    out.insert(x);
                }
            }
        }
        let mut out = BTreeSet::new();
        go(self, &mut out);
        out
    }
}

/// Named, possibly mutually recursive type definitions.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    defs: BTreeMap<String, Type>,
}

impl Signature {
    pub fn new() -> Signature {
        Signature::default()
    }

    /// Adds or replaces a definition. Well-formedness is checked separately by
    /// [`check_signature`] because definitions may be mutually recursive.
    pub fn define(&mut self, name: impl Into<String>, body: Type) -> Option<Type> {
        self.defs.insert(name.into(), body)
    }

    pub fn with(mut self, name: impl Into<String>, body: Type) -> Signature {
        self.define(name, body);
        self
    }

    pub fn get(&self, name: &str) -> Option<&Type> {
        self.defs.get(name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.defs.contains_key(name)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Type)> {
        self.defs.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn len(&self) -> usize {
        self.defs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.defs.is_empty()
    }

    /// Undeclared variables referenced by `t`.
    pub fn undeclared_in<'t>(&self, t: &'t Type) -> Vec<&'t str> {
        t.vars().into_iter().filter(|x| !self.contains(x)).collect()
    }

    pub fn check_declared(&self, t: &Type) -> Result<(), TypeError> {
        match self.undeclared_in(t).first() {
            Some(x) => Err(TypeError::UndeclaredTypeVar((*x).to_string())),
            None => Ok(()),
        }
    }
}

/// Diagnoses undeclared variables and top-level variable occurrences.
pub fn check_signature(sig: &Signature) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    for (name, body) in sig.iter() {
        for x in sig.undeclared_in(body) {
            out.push(Diagnostic::error(
                Rule::SigUndeclaredVar,
                format!("undeclared type variable {x} in definition of {name}"),
            ));
        }
        for x in body.top_level_vars() {
            out.push(Diagnostic::error(
                Rule::SigTopLevelVar,
                format!("top-level variable {x} in definition of {name}"),
            ));
        }
    }
    out
}

/// The definition of `name`, verbatim.
pub fn unfold<'s>(sig: &'s Signature, name: &str) -> Result<&'s Type, TypeError> {
    sig.get(name)
        .ok_or_else(|| TypeError::UndeclaredTypeVar(name.to_string()))
}

/// Atoms reachable through `|`, `,`, `*` and variable unfolding, without
/// entering element content.
pub fn syntactic_atoms(sig: &Signature, t: &Type) -> Result<BTreeSet<Atom>, TypeError> {
    fn go(
        sig: &Signature,
        t: &Type,
        seen: &mut BTreeSet<String>,
        out: &mut BTreeSet<Atom>,
    ) -> Result<(), TypeError> {
        match t {
            Type::Empty => {}
            Type::Atom(a) => {
                out.insert(a.clone());
            }
            Type::Or(l, r) | Type::Seq(l, r) => {
                go(sig, l, seen, out)?;
                go(sig, r, seen, out)?;
            }
            Type::Star(t) => go(sig, t, seen, out)?,
            Type::Var(x) => {
                let body = unfold(sig, x)?;
                if seen.insert(x.clone()) {
                    go(sig, body, seen, out)?;
                }
            }
        }
        Ok(())
    }
    let mut out = BTreeSet::new();
    go(sig, t, &mut BTreeSet::new(), &mut out)?;
    Ok(out)
}

// Printing. Precedence: `|` < `,` < postfix. Both binary operators are
// parsed left-associatively, so a right operand of the same operator is
// parenthesized.

const PREC_OR: u8 = 0;
const PREC_SEQ: u8 = 1;
const PREC_POSTFIX: u8 = 2;

impl Type {
    fn prec(&self) -> u8 {
        match self {
            Type::Or(_, r) if **r == Type::Empty => PREC_POSTFIX,
            Type::Or(..) => PREC_OR,
            Type::Seq(..) => PREC_SEQ,
            _ => PREC_POSTFIX,
        }
    }

    fn is_postfix(&self) -> bool {
        match self {
            Type::Star(_) => true,
            Type::Or(_, r) => **r == Type::Empty,
            _ => false,
        }
    }

    /// Operand of `*` or `?`; stacked postfix operators are parenthesized.
    fn fmt_operand(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_postfix() {
            f.write_str("(")?;
            self.fmt_at(f, PREC_OR)?;
            f.write_str(")")
        } else {
            self.fmt_at(f, PREC_POSTFIX)
        }
    }

    fn fmt_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.prec() < min {
            f.write_str("(")?;
            self.fmt_at(f, PREC_OR)?;
            return f.write_str(")");
        }
        match self {
            Type::Empty => f.write_str("()"),
            Type::Atom(a) => write!(f, "{a}"),
            Type::Or(l, r) if **r == Type::Empty => {
                l.fmt_operand(f)?;
                f.write_str("?")
            }
            Type::Or(l, r) => {
                l.fmt_at(f, PREC_OR)?;
                f.write_str("|")?;
                r.fmt_at(f, PREC_SEQ)
            }
            Type::Seq(l, r) => {
                l.fmt_at(f, PREC_SEQ)?;
                f.write_str(",")?;
                r.fmt_at(f, PREC_POSTFIX)
            }
            Type::Star(t) => {
                t.fmt_operand(f)?;
                f.write_str("*")
            }
            Type::Var(x) => f.write_str(x),
        }
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_at(f, PREC_OR)
    }
}

impl fmt::Debug for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Bool => f.write_str("bool"),
            Atom::String => f.write_str("string"),
            Atom::Element(n, c) if **c == Type::Empty => write!(f, "{n}[]"),
            Atom::Element(n, c) => write!(f, "{n}[{c}]"),
        }
    }
}

impl fmt::Debug for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for Type {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}
