//! Hash-consed type graph with nullability and linear forms (Antimirov-style
//! partial derivatives over atoms). A continuation is a concatenation of
//! interned subterms; the set of continuations reachable from a type is
//! finite, which is what makes membership, inclusion and enumeration terminate.

use std::collections::HashMap;
use std::rc::Rc;

use crate::error::TypeError;
use crate::types::{Atom, Label, Signature, Type};

pub(crate) type NodeId = u32;

/// A concatenation of nodes; `[]` is `()`.
pub(crate) type Cont = Vec<NodeId>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) enum Node {
    Empty,
    Bool,
    Str,
    Elem(Label, NodeId),
    Or(NodeId, NodeId),
    Seq(NodeId, NodeId),
    Star(NodeId),
    Var(u32),
}

#[derive(Clone, Copy)]
enum Memo<T> {
    Unknown,
    InProgress,
    Done(T),
}

pub(crate) type LinearForm = Rc<Vec<(NodeId, Cont)>>;

pub(crate) struct Engine<'s> {
    sig: &'s Signature,
    nodes: Vec<Node>,
    index: HashMap<Node, NodeId>,
    var_index: HashMap<String, u32>,
    var_defs: Vec<NodeId>,
    nullable: Vec<Memo<bool>>,
    linear: Vec<Memo<LinearForm>>,
}

impl<'s> Engine<'s> {
    pub fn new(sig: &'s Signature) -> Engine<'s> {
        Engine {
            sig,
            nodes: Vec::new(),
            index: HashMap::new(),
            var_index: HashMap::new(),
            var_defs: Vec::new(),
            nullable: Vec::new(),
            linear: Vec::new(),
        }
    }

    pub fn signature(&self) -> &'s Signature {
        self.sig
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id as usize]
    }

    fn mk(&mut self, n: Node) -> NodeId {
        if let Some(&id) = self.index.get(&n) {
            return id;
        }
        let id = self.nodes.len() as NodeId;
        self.nodes.push(n.clone());
        self.nullable.push(Memo::Unknown);
        self.linear.push(Memo::Unknown);
        self.index.insert(n, id);
        id
    }

    pub fn intern(&mut self, t: &Type) -> Result<NodeId, TypeError> {
        Ok(match t {
            Type::Empty => self.mk(Node::Empty),
            Type::Atom(a) => self.intern_atom(a)?,
            Type::Or(l, r) => {
                let l = self.intern(l)?;
                let r = self.intern(r)?;
                self.mk(Node::Or(l, r))
            }
            Type::Seq(l, r) => {
                let l = self.intern(l)?;
                let r = self.intern(r)?;
                self.mk(Node::Seq(l, r))
            }
            Type::Star(t) => {
                let t = self.intern(t)?;
                self.mk(Node::Star(t))
            }
            Type::Var(x) => self.intern_var(x)?,
        })
    }

    pub fn intern_atom(&mut self, a: &Atom) -> Result<NodeId, TypeError> {
        Ok(match a {
            Atom::Bool => self.mk(Node::Bool),
            Atom::String => self.mk(Node::Str),
            Atom::Element(n, c) => {
                let c = self.intern(c)?;
                self.mk(Node::Elem(n.clone(), c))
            }
        })
    }

    fn intern_var(&mut self, name: &str) -> Result<NodeId, TypeError> {
        if let Some(&ix) = self.var_index.get(name) {
            return Ok(self.mk(Node::Var(ix)));
        }
        let body = self
            .sig
            .get(name)
            .ok_or_else(|| TypeError::UndeclaredTypeVar(name.to_string()))?;
        // Unguarded definitions have no finite derivative automaton.
        if let Some(x) = body.top_level_vars().into_iter().next() {
            return Err(TypeError::UnguardedTypeVar {
                name: name.to_string(),
                var: x.to_string(),
            });
        }
        let ix = self.var_defs.len() as u32;
        self.var_defs.push(NodeId::MAX);
        self.var_index.insert(name.to_string(), ix);
        let def = self.intern(body)?;
        self.var_defs[ix as usize] = def;
        Ok(self.mk(Node::Var(ix)))
    }

    /// Continuation for a single type: `[t]`, or `[]` when `t` is `()`.
    pub fn cont_of(&self, id: NodeId) -> Cont {
        if matches!(self.node(id), Node::Empty) {
            Vec::new()
        } else {
            vec![id]
        }
    }

    pub fn nullable(&mut self, id: NodeId) -> bool {
        match self.nullable[id as usize] {
            Memo::Done(b) => return b,
            // Only reachable through an unguarded cycle; the least fixed point
            // of such a definition contributes nothing.
            Memo::InProgress => return false,
            Memo::Unknown => {}
        }
        self.nullable[id as usize] = Memo::InProgress;
        let b = match self.node(id).clone() {
            Node::Empty | Node::Star(_) => true,
            Node::Bool | Node::Str | Node::Elem(..) => false,
            Node::Or(l, r) => self.nullable(l) || self.nullable(r),
            Node::Seq(l, r) => self.nullable(l) && self.nullable(r),
            Node::Var(ix) => self.nullable(self.var_defs[ix as usize]),
        };
        self.nullable[id as usize] = Memo::Done(b);
        b
    }

    pub fn cont_nullable(&mut self, c: &[NodeId]) -> bool {
        c.iter().all(|&n| self.nullable(n))
    }

    /// Pairs `(atom, rest)` such that the node denotes the union of
    /// `atom, rest` (plus `()` when nullable).
    pub fn linear_form(&mut self, id: NodeId) -> LinearForm {
        match &self.linear[id as usize] {
            Memo::Done(lf) => return lf.clone(),
            Memo::InProgress => return Rc::new(Vec::new()),
            Memo::Unknown => {}
        }
        self.linear[id as usize] = Memo::InProgress;
        let mut out: Vec<(NodeId, Cont)> = Vec::new();
        match self.node(id).clone() {
            Node::Empty => {}
            Node::Bool | Node::Str | Node::Elem(..) => out.push((id, Vec::new())),
            Node::Or(l, r) => {
                out.extend(self.linear_form(l).iter().cloned());
                out.extend(self.linear_form(r).iter().cloned());
            }
            Node::Seq(l, r) => {
                let tail = self.cont_of(r);
                for (a, c) in self.linear_form(l).iter() {
                    out.push((*a, append(c, &tail)));
                }
                if self.nullable(l) {
                    out.extend(self.linear_form(r).iter().cloned());
                }
            }
            Node::Star(t) => {
                for (a, c) in self.linear_form(t).iter() {
                    out.push((*a, append(c, &[id])));
                }
            }
            Node::Var(ix) => {
                let def = self.var_defs[ix as usize];
                out.extend(self.linear_form(def).iter().cloned());
            }
        }
        out.sort();
        out.dedup();
        let lf = Rc::new(out);
        self.linear[id as usize] = Memo::Done(lf.clone());
        lf
    }

    /// Linear form of a continuation.
    pub fn cont_linear_form(&mut self, c: &[NodeId]) -> Vec<(NodeId, Cont)> {
        let mut out = Vec::new();
        for (i, &n) in c.iter().enumerate() {
            let rest = &c[i + 1..];
            for (a, k) in self.linear_form(n).iter() {
                out.push((*a, append(k, rest)));
            }
            if !self.nullable(n) {
                break;
            }
        }
        out.sort();
        out.dedup();
        out
    }
}

fn append(c: &[NodeId], tail: &[NodeId]) -> Cont {
    let mut out = Vec::with_capacity(c.len() + tail.len());
    out.extend_from_slice(c);
    out.extend_from_slice(tail);
    out
}
