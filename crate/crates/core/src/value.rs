//! XML values: forests of booleans, strings and labeled nodes.

use std::fmt;

use crate::types::Label;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tree {
    Bool(bool),
    Str(String),
    Node(Label, Forest),
}

/// A finite sequence of trees. Concatenation is associative with `()` as unit.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Forest(pub Vec<Tree>);

/// Query results and update inputs are forests.
pub type Value = Forest;

impl Tree {
    pub fn node(label: Label, children: Forest) -> Tree {
        Tree::Node(label, children)
    }

    /// Nesting depth: scalars count 1, `n[v]` is one more than `v`.
    pub fn depth(&self) -> usize {
        match self {
            Tree::Bool(_) | Tree::Str(_) => 1,
            Tree::Node(_, kids) => 1 + kids.depth(),
        }
    }
}

impl Forest {
    pub fn empty() -> Forest {
        Forest(Vec::new())
    }

    pub fn single(t: Tree) -> Forest {
        Forest(vec![t])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn trees(&self) -> &[Tree] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Tree> {
        self.0.iter()
    }

    pub fn concat(mut self, other: Forest) -> Forest {
        self.0.extend(other.0);
        self
    }

    /// The only tree, if this forest has exactly one.
    pub fn as_single(&self) -> Option<&Tree> {
        match self.0.as_slice() {
            [t] => Some(t),
            _ => None,
        }
    }

    pub fn into_single(self) -> Result<Tree, Forest> {
        if self.0.len() == 1 {
            Ok(self.0.into_iter().next().unwrap())
        } else {
            Err(self)
        }
    }

    pub fn depth(&self) -> usize {
        self.0.iter().map(Tree::depth).max().unwrap_or(0)
    }

    /// Largest forest length anywhere in the value.
    pub fn width(&self) -> usize {
        self.0
            .iter()
            .map(|t| match t {
                Tree::Node(_, kids) => kids.width(),
                _ => 0,
            })
            .chain(std::iter::once(self.0.len()))
            .max()
            .unwrap_or(0)
    }
}

impl From<Tree> for Forest {
    fn from(t: Tree) -> Forest {
        Forest::single(t)
    }
}

impl FromIterator<Tree> for Forest {
    fn from_iter<I: IntoIterator<Item = Tree>>(iter: I) -> Forest {
        Forest(iter.into_iter().collect())
    }
}

impl IntoIterator for Forest {
    type Item = Tree;
    type IntoIter = std::vec::IntoIter<Tree>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.into_iter()
    }
}

pub(crate) fn write_string_literal(f: &mut impl fmt::Write, s: &str) -> fmt::Result {
    f.write_char('"')?;
    for c in s.chars() {
        match c {
            '"' => f.write_str("\\\"")?,
            '\\' => f.write_str("\\\\")?,
            '\n' => f.write_str("\\n")?,
            '\t' => f.write_str("\\t")?,
            c => f.write_char(c)?,
        }
    }
    f.write_char('"')
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tree::Bool(b) => write!(f, "{b}"),
            Tree::Str(s) => write_string_literal(f, s),
            Tree::Node(n, kids) if kids.is_empty() => write!(f, "{n}[]"),
            Tree::Node(n, kids) => write!(f, "{n}[{kids}]"),
        }
    }
}

impl fmt::Display for Forest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("()");
        }
        for (i, t) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Debug for Forest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl serde::Serialize for Forest {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}
