//! Exhaustive, bounded enumeration of values and atom words, and the
//! refutation oracle built on it.

use std::collections::{BTreeSet, HashMap};
use std::rc::Rc;

use serde::Serialize;

use crate::deriv::{Cont, Engine, Node, NodeId};
use crate::error::TypeError;
use crate::member::Matcher;
use crate::subtype::Subtyper;
use crate::types::{Atom, Signature, Type};
use crate::value::{Forest, Tree};

/// Strings used when enumerating values of type `string`.
pub const DEFAULT_STRINGS: [&str; 2] = ["", "a"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Bounds {
    pub depth: usize,
    pub width: usize,
}

/// Enumerates the values of a type up to a nesting depth and forest width.
/// Labels come from the type itself, so enumeration is exact within bounds.
pub struct ValueEnumerator<'s> {
    engine: Engine<'s>,
    bounds: Bounds,
    strings: Vec<String>,
    limit: usize,
    memo: HashMap<(Cont, usize, usize), Rc<BTreeSet<Forest>>>,
}

impl<'s> ValueEnumerator<'s> {
    pub fn new(sig: &'s Signature, bounds: Bounds) -> ValueEnumerator<'s> {
        ValueEnumerator {
            engine: Engine::new(sig),
            bounds,
            strings: DEFAULT_STRINGS.iter().map(|s| s.to_string()).collect(),
            limit: usize::MAX,
            memo: HashMap::new(),
        }
    }

    pub fn with_strings(mut self, strings: Vec<String>) -> Self {
        self.strings = strings;
        self.memo.clear();
        self
    }

    /// Keeps at most `limit` values per intermediate set. The results are
    /// then a subset of the bounded language, biased towards small values;
    /// use this for sampling, never for refutation.
    pub fn with_limit(mut self, limit: usize) -> Self {
        self.limit = limit.max(1);
        self.memo.clear();
        self
    }

    pub fn values(&mut self, t: &Type) -> Result<BTreeSet<Forest>, TypeError> {
        let id = self.engine.intern(t)?;
        let start = self.engine.cont_of(id);
        Ok((*self.forests(start, self.bounds.depth, self.bounds.width)).clone())
    }

    /// Single trees of an atomic type.
    pub fn trees_of(&mut self, a: &Atom) -> Result<Vec<Tree>, TypeError> {
        let id = self.engine.intern_atom(a)?;
        Ok(self.trees(id, self.bounds.depth))
    }

    fn forests(&mut self, c: Cont, depth: usize, width: usize) -> Rc<BTreeSet<Forest>> {
        let key = (c, depth, width);
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        let c = &key.0;
        let mut out = BTreeSet::new();
        if self.engine.cont_nullable(c) {
            out.insert(Forest::empty());
        }
        if width > 0 {
            'fill: for (atom, rest) in self.engine.cont_linear_form(c) {
                let heads = self.trees(atom, depth);
                if heads.is_empty() {
                    continue;
                }
                let tails = self.forests(rest, depth, width - 1);
                for h in &heads {
                    for tail in tails.iter() {
                        if out.len() >= self.limit {
                            break 'fill;
                        }
                        let mut f = Vec::with_capacity(tail.len() + 1);
                        f.push(h.clone());
                        f.extend(tail.iter().cloned());
                        out.insert(Forest(f));
                    }
                }
            }
        }
        let out = Rc::new(out);
        self.memo.insert(key, out.clone());
        out
    }

    fn trees(&mut self, atom: NodeId, depth: usize) -> Vec<Tree> {
        if depth == 0 {
            return Vec::new();
        }
        match self.engine.node(atom).clone() {
            Node::Bool => vec![Tree::Bool(false), Tree::Bool(true)],
            Node::Str => self.strings.iter().cloned().map(Tree::Str).collect(),
            Node::Elem(n, content) => {
                let c = self.engine.cont_of(content);
                self.forests(c, depth - 1, self.bounds.width)
                    .iter()
                    .map(|kids| Tree::Node(n.clone(), kids.clone()))
                    .collect()
            }
            other => unreachable!("not an atom: {other:?}"),
        }
    }
}

/// Every value of `t` with depth ≤ `depth` and all forests of length ≤ `width`.
pub fn values_upto(
    sig: &Signature,
    t: &Type,
    depth: usize,
    width: usize,
) -> Result<BTreeSet<Forest>, TypeError> {
    ValueEnumerator::new(sig, Bounds { depth, width }).values(t)
}

/// `{ ω ∈ U* : |ω| ≤ k, ω <: t }`.
pub fn words_upto(
    sig: &Signature,
    t: &Type,
    k: usize,
    universe: &BTreeSet<Atom>,
) -> Result<BTreeSet<Vec<Atom>>, TypeError> {
    let mut sub = Subtyper::new(sig);
    words_upto_with(&mut sub, t, k, universe)
}

pub fn words_upto_with(
    sub: &mut Subtyper<'_>,
    t: &Type,
    k: usize,
    universe: &BTreeSet<Atom>,
) -> Result<BTreeSet<Vec<Atom>>, TypeError> {
    let atoms: Vec<&Atom> = universe.iter().collect();
    let mut out = BTreeSet::new();
    let mut layer: Vec<Vec<Atom>> = vec![Vec::new()];
    for len in 0..=k {
        for w in &layer {
            if sub.is_subtype(&Type::word(w.iter().cloned()), t)? {
                out.insert(w.clone());
            }
        }
        if len == k {
            break;
        }
        let mut next = Vec::with_capacity(layer.len() * atoms.len());
        for w in &layer {
            for a in &atoms {
                let mut w2 = w.clone();
                w2.push((*a).clone());
                next.push(w2);
            }
        }
        layer = next;
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum OracleVerdict {
    RefutedWith(Forest),
    ConsistentUpTo(Bounds),
}

/// Searches the bounded values of `t1` for one outside `t2`.
pub fn subtype_oracle(
    sig: &Signature,
    t1: &Type,
    t2: &Type,
    depth: usize,
    width: usize,
) -> Result<OracleVerdict, TypeError> {
    let bounds = Bounds { depth, width };
    let values = ValueEnumerator::new(sig, bounds).values(t1)?;
    let mut m = Matcher::new(sig);
    refute_among(&mut m, &values, t2, bounds)
}

/// Oracle over a precomputed value set.
pub fn refute_among(
    m: &mut Matcher<'_>,
    values: &BTreeSet<Forest>,
    t2: &Type,
    bounds: Bounds,
) -> Result<OracleVerdict, TypeError> {
    for v in values {
        if !m.is_member(v, t2)? {
            return Ok(OracleVerdict::RefutedWith(v.clone()));
        }
    }
    Ok(OracleVerdict::ConsistentUpTo(bounds))
}
