//! Membership `v ∈ ⟦t⟧`: the forest is read as a word of trees and matched
//! against the type's linear forms, recursing into element content.

use std::collections::BTreeSet;

use crate::deriv::{Cont, Engine, Node, NodeId};
use crate::error::TypeError;
use crate::types::{Atom, Signature, Type};
use crate::value::{Forest, Tree};

pub struct Matcher<'s> {
    engine: Engine<'s>,
}

impl<'s> Matcher<'s> {
    pub fn new(sig: &'s Signature) -> Matcher<'s> {
        Matcher {
            engine: Engine::new(sig),
        }
    }

    pub fn is_member(&mut self, v: &Forest, t: &Type) -> Result<bool, TypeError> {
        let id = self.engine.intern(t)?;
        let start = self.engine.cont_of(id);
        Ok(self.forest_in(v.trees(), start))
    }

    pub fn tree_in_atom(&mut self, tree: &Tree, a: &Atom) -> Result<bool, TypeError> {
        let id = self.engine.intern_atom(a)?;
        Ok(self.tree_in(tree, id))
    }

    fn forest_in(&mut self, forest: &[Tree], start: Cont) -> bool {
        let mut states: BTreeSet<Cont> = BTreeSet::new();
        states.insert(start);
        for tree in forest {
            let mut next = BTreeSet::new();
            for c in &states {
                for (atom, rest) in self.engine.cont_linear_form(c) {
                    if !next.contains(&rest) && self.tree_in(tree, atom) {
                        next.insert(rest);
                    }
                }
            }
            if next.is_empty() {
                return false;
            }
            states = next;
        }
        states.iter().any(|c| self.engine.cont_nullable(c))
    }

    fn tree_in(&mut self, tree: &Tree, atom: NodeId) -> bool {
        match (tree, self.engine.node(atom).clone()) {
            (Tree::Bool(_), Node::Bool) | (Tree::Str(_), Node::Str) => true,
            (Tree::Node(n, kids), Node::Elem(m, content)) if *n == m => {
                let start = self.engine.cont_of(content);
                self.forest_in(kids.trees(), start)
            }
            _ => false,
        }
    }
}

/// `v ∈ ⟦t⟧`.
pub fn member(sig: &Signature, v: &Forest, t: &Type) -> Result<bool, TypeError> {
    Matcher::new(sig).is_member(v, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_signature, parse_type, parse_value};

    fn mem(sig: &Signature, v: &str, t: &str) -> bool {
        member(sig, &parse_value(v).unwrap(), &parse_type(t).unwrap()).unwrap()
    }

    #[test]
    fn basic_membership() {
        let e = Signature::new();
        assert!(mem(&e, "()", "()"));
        assert!(mem(&e, "b[]", "b[]*,c[]?"));
        assert!(!mem(&e, "\"hi\"", "bool"));
        assert!(mem(&e, "\"hi\"", "string"));
        assert!(mem(&e, "true", "bool"));
        assert!(mem(&e, "b[],b[],c[]", "b[]*,c[]?"));
        assert!(!mem(&e, "c[],b[]", "b[]*,c[]?"));
        assert!(!mem(&e, "a[b[]]", "a[]"));
        assert!(mem(&e, "a[b[],c[]]", "a[b[]*,c[]?]"));
    }

    #[test]
    fn recursive_membership_unfolds() {
        let sig = parse_signature("type Tree = tree[leaf[string] | node[Tree*]]").unwrap();
        assert!(mem(&sig, "tree[leaf[\"x\"]]", "Tree"));
        assert!(mem(
            &sig,
            "tree[node[tree[leaf[\"u\"]], tree[node[]]]]",
            "Tree"
        ));
        assert!(!mem(&sig, "tree[node[leaf[\"u\"]]]", "Tree"));
        assert!(!mem(&sig, "tree[leaf[\"x\"]], tree[leaf[\"y\"]]", "Tree"));
    }

    #[test]
    fn nullable_star_bodies_terminate() {
        let e = Signature::new();
        assert!(mem(&e, "()", "(()*)*"));
        assert!(mem(&e, "a[],a[]", "(a[]*|())*"));
        assert!(!mem(&e, "b[]", "(a[]*|())*"));
    }

    #[test]
    fn undeclared_variable_is_reported() {
        assert!(matches!(
            member(&Signature::new(), &Forest::empty(), &Type::var("X")),
            Err(TypeError::UndeclaredTypeVar(_))
        ));
    }
}
