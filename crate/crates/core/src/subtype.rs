//! Inclusion of regular-expression types.
//!
//! `t1 <: t2` is decided top-down over linear forms with a coinductive
//! hypothesis set, following the Hosoya–Vouillon–Pierce scheme: a left
//! continuation is compared against a *set* of right continuations, and an
//! element atom `n[A], c` is checked against all right pairs `n[B_j], d_j` by
//! ranging over subsets `I` of the candidates:
//!
//! ```text
//!   for all I:  A <: ⋃_{i∈I} B_i   or   c <: ⋃_{j∉I} d_j
//! ```
//!
//! Inclusion in the empty union is emptiness, so uninhabited recursive types
//! such as `X = a[X]` are handled by the same fixed point.

use std::collections::HashSet;
use std::fmt;

use serde::Serialize;

use crate::deriv::{Cont, Engine, Node, NodeId};
use crate::env::{Binding, TypeEnv};
use crate::error::TypeError;
use crate::types::{Atom, Label, Signature, Type};

/// Node tests `φ` used by `φ?s` updates.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum TestKind {
    Label(Label),
    Wildcard,
    Bool,
    String,
}

impl fmt::Display for TestKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TestKind::Label(n) => write!(f, "{n}"),
            TestKind::Wildcard => f.write_str("*"),
            TestKind::Bool => f.write_str("bool"),
            TestKind::String => f.write_str("string"),
        }
    }
}

impl fmt::Debug for TestKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

type Key = (Cont, Vec<Cont>);

/// Hypothesis set for one inclusion query. Pairs enter `assumed` when a
/// check starts and are rolled back if that check fails; `refuted` only
/// ever holds pairs shown not to be included.
#[derive(Default)]
pub struct SubtypeCache {
    assumed: HashSet<Key>,
    log: Vec<Key>,
    refuted: HashSet<Key>,
}

impl SubtypeCache {
    fn rollback(&mut self, mark: usize) {
        for k in self.log.drain(mark..) {
            self.assumed.remove(&k);
        }
    }
}

/// A subtype checker bound to one signature. Results proven by earlier
/// queries are reused; every answer is independent of query order.
pub struct Subtyper<'s> {
    pub(crate) engine: Engine<'s>,
    cache: SubtypeCache,
}

impl<'s> Subtyper<'s> {
    pub fn new(sig: &'s Signature) -> Subtyper<'s> {
        Subtyper {
            engine: Engine::new(sig),
            cache: SubtypeCache::default(),
        }
    }

    pub fn signature(&self) -> &'s Signature {
        self.engine.signature()
    }

    pub fn is_subtype(&mut self, t1: &Type, t2: &Type) -> Result<bool, TypeError> {
        let l = self.engine.intern(t1)?;
        let r = self.engine.intern(t2)?;
        let l = self.engine.cont_of(l);
        let r = self.engine.cont_of(r);
        Ok(self.top(l, vec![r]))
    }

    pub fn is_atom_subtype(&mut self, a1: &Atom, a2: &Atom) -> Result<bool, TypeError> {
        let l = self.engine.intern_atom(a1)?;
        let r = self.engine.intern_atom(a2)?;
        Ok(self.top(vec![l], vec![vec![r]]))
    }

    /// Is `t1` included in the union of `ts`?
    pub fn is_subtype_of_union(&mut self, t1: &Type, ts: &[Type]) -> Result<bool, TypeError> {
        let l = self.engine.intern(t1)?;
        let l = self.engine.cont_of(l);
        let mut rs = Vec::new();
        for t in ts {
            let r = self.engine.intern(t)?;
            rs.push(self.engine.cont_of(r));
        }
        Ok(self.top(l, rs))
    }

    /// Is `t` uninhabited?
    pub fn is_empty(&mut self, t: &Type) -> Result<bool, TypeError> {
        self.is_subtype_of_union(t, &[])
    }

    fn top(&mut self, l: Cont, r: Vec<Cont>) -> bool {
        let ok = self.incl(l, r);
        // After a successful top-level check every remaining hypothesis is
        // part of a valid simulation and may stay; after a failure the
        // rollback inside `incl` has already removed them.
        self.cache.log.clear();
        ok
    }

    fn incl(&mut self, l: Cont, mut r: Vec<Cont>) -> bool {
        r.sort();
        r.dedup();
        if r.contains(&l) {
            return true;
        }
        let key: Key = (l, r);
        if self.cache.assumed.contains(&key) {
            return true;
        }
        if self.cache.refuted.contains(&key) {
            return false;
        }
        let (l, r) = (&key.0, &key.1);
        let nullable_l = self.engine.cont_nullable(l);
        if nullable_l && !r.iter().any(|c| self.engine.cont_nullable(c)) {
            self.cache.refuted.insert(key);
            return false;
        }

        let mark = self.cache.log.len();
        self.cache.assumed.insert(key.clone());
        self.cache.log.push(key.clone());

        let left = self.engine.cont_linear_form(l);
        let mut right: Vec<(NodeId, Cont)> = Vec::new();
        for c in r {
            right.extend(self.engine.cont_linear_form(c));
        }

        let mut ok = true;
        for (atom, rest) in left {
            if !self.incl_pair(atom, rest, &right) {
                ok = false;
                break;
            }
        }
        if !ok {
            self.cache.rollback(mark);
            self.cache.refuted.insert(key);
        }
        ok
    }

    fn incl_pair(&mut self, atom: NodeId, rest: Cont, right: &[(NodeId, Cont)]) -> bool {
        match self.engine.node(atom).clone() {
            Node::Bool | Node::Str => {
                let kind = self.engine.node(atom).clone();
                let ds: Vec<Cont> = right
                    .iter()
                    .filter(|(b, _)| *self.engine.node(*b) == kind)
                    .map(|(_, d)| d.clone())
                    .collect();
                self.incl(rest, ds)
            }
            Node::Elem(label, content) => {
                // Candidates grouped by content so that equal contents count once.
                let mut groups: Vec<(NodeId, Vec<Cont>)> = Vec::new();
                for (b, d) in right {
                    if let Node::Elem(m, bc) = self.engine.node(*b) {
                        if *m == label {
                            match groups.iter_mut().find(|(g, _)| g == bc) {
                                Some((_, ds)) => ds.push(d.clone()),
                                None => groups.push((*bc, vec![d.clone()])),
                            }
                        }
                    }
                }
                let a = self.engine.cont_of(content);
                let n = groups.len();
                assert!(n < 24, "too many overlapping element alternatives");
                for mask in 0u32..(1u32 << n) {
                    let mut contents = Vec::new();
                    let mut rests = Vec::new();
                    for (i, (bc, ds)) in groups.iter().enumerate() {
                        if mask & (1 << i) != 0 {
                            contents.push(self.engine.cont_of(*bc));
                        } else {
                            rests.extend(ds.iter().cloned());
                        }
                    }
                    if !(self.incl(rest.clone(), rests) || self.incl(a.clone(), contents)) {
                        return false;
                    }
                }
                true
            }
            other => unreachable!("linear forms only carry atoms, got {other:?}"),
        }
    }
}

/// Does `⟦t1⟧ ⊆ ⟦t2⟧` hold?
pub fn subtype(sig: &Signature, t1: &Type, t2: &Type) -> Result<bool, TypeError> {
    Subtyper::new(sig).is_subtype(t1, t2)
}

pub fn atom_subtype(sig: &Signature, a1: &Atom, a2: &Atom) -> Result<bool, TypeError> {
    Subtyper::new(sig).is_atom_subtype(a1, a2)
}

/// `α <: φ`.
pub fn test_subtype(a: &Atom, phi: &TestKind) -> bool {
    matches!(
        (a, phi),
        (Atom::Bool, TestKind::Bool)
            | (Atom::String, TestKind::String)
            | (Atom::Element(_, _), TestKind::Wildcard)
    ) || matches!((a, phi), (Atom::Element(n, _), TestKind::Label(m)) if n == m)
}

/// `g1 <: g2`: same domain, pointwise subtyping.
pub fn env_subtype(sig: &Signature, g1: &TypeEnv, g2: &TypeEnv) -> Result<bool, TypeError> {
    let mut sub = Subtyper::new(sig);
    env_subtype_with(&mut sub, g1, g2)
}

pub fn env_subtype_with(
    sub: &mut Subtyper<'_>,
    g1: &TypeEnv,
    g2: &TypeEnv,
) -> Result<bool, TypeError> {
    if g1.len() != g2.len() {
        return Ok(false);
    }
    for (x, b1) in g1.iter() {
        let ok = match (b1, g2.get(x)) {
            (Binding::Tree(a1), Some(Binding::Tree(a2))) => sub.is_atom_subtype(a1, a2)?,
            (Binding::Forest(t1), Some(Binding::Forest(t2))) => sub.is_subtype(t1, t2)?,
            _ => false,
        };
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}
