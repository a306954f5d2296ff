//! Typing environments and global function/procedure headers.

use std::fmt;

use indexmap::IndexMap;

use crate::error::TypeError;
use crate::types::{Atom, Type};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Binding {
    /// Tree variables are bound to atomic types only.
    Tree(Atom),
    Forest(Type),
}

impl Binding {
    pub fn as_type(&self) -> Type {
        match self {
            Binding::Tree(a) => Type::Atom(a.clone()),
            Binding::Forest(t) => t.clone(),
        }
    }
}

/// Γ: an ordered map from variable names to bindings. Names are distinct;
/// extending with an existing name replaces the earlier binding.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TypeEnv {
    vars: IndexMap<String, Binding>,
}

impl TypeEnv {
    pub fn new() -> TypeEnv {
        TypeEnv::default()
    }

    pub fn get(&self, name: &str) -> Option<&Binding> {
        self.vars.get(name)
    }

    pub fn insert(&mut self, name: impl Into<String>, b: Binding) {
        let name = name.into();
        self.vars.shift_remove(&name);
        self.vars.insert(name, b);
    }

    pub fn with(mut self, name: impl Into<String>, b: Binding) -> TypeEnv {
        self.insert(name, b);
        self
    }

    pub fn with_tree(self, name: impl Into<String>, a: Atom) -> TypeEnv {
        self.with(name, Binding::Tree(a))
    }

    pub fn with_forest(self, name: impl Into<String>, t: Type) -> TypeEnv {
        self.with(name, Binding::Forest(t))
    }

    /// A copy extended with one binding.
    pub fn extended(&self, name: &str, b: Binding) -> TypeEnv {
        self.clone().with(name, b)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Binding)> {
        self.vars.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.vars.keys().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    /// Same names and kinds, with each type replaced by `f`.
    pub fn map_types<E>(
        &self,
        mut f: impl FnMut(&str, &Binding) -> Result<Binding, E>,
    ) -> Result<TypeEnv, E> {
        let mut out = TypeEnv::new();
        for (x, b) in self.iter() {
            out.insert(x, f(x, b)?);
        }
        Ok(out)
    }
}

/// Written in declaration syntax, e.g. `tree $x : a[], $y : b[]*`.
impl fmt::Display for TypeEnv {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.vars.is_empty() {
            return f.write_str("{}");
        }
        for (i, (x, b)) in self.vars.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            match b {
                Binding::Tree(a) => write!(f, "tree ${x} : {a}")?,
                Binding::Forest(t) => write!(f, "${x} : {t}")?,
            }
        }
        Ok(())
    }
}

impl FromIterator<(String, Binding)> for TypeEnv {
    fn from_iter<I: IntoIterator<Item = (String, Binding)>>(iter: I) -> TypeEnv {
        let mut env = TypeEnv::new();
        for (x, b) in iter {
            env.insert(x, b);
        }
        env
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctionSig {
    pub params: Vec<Type>,
    pub ret: Type,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProcedureSig {
    pub params: Vec<Type>,
    pub input: Type,
    pub output: Type,
}

/// Δ: function headers `F(τ⃗):τ0` and procedure headers `P(τ⃗):τ1 ⇒ τ2`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GlobalDecls {
    functions: IndexMap<String, FunctionSig>,
    procedures: IndexMap<String, ProcedureSig>,
}

impl GlobalDecls {
    pub fn new() -> GlobalDecls {
        GlobalDecls::default()
    }

    pub fn declare_function(&mut self, name: &str, sig: FunctionSig) -> Result<(), TypeError> {
        if self.functions.contains_key(name) {
            return Err(TypeError::Duplicate {
                kind: "function",
                name: name.to_string(),
                span: None,
            });
        }
        self.functions.insert(name.to_string(), sig);
        Ok(())
    }

    pub fn declare_procedure(&mut self, name: &str, sig: ProcedureSig) -> Result<(), TypeError> {
        if self.procedures.contains_key(name) {
            return Err(TypeError::Duplicate {
                kind: "procedure",
                name: name.to_string(),
                span: None,
            });
        }
        self.procedures.insert(name.to_string(), sig);
        Ok(())
    }

    pub fn function(&self, name: &str) -> Option<&FunctionSig> {
        self.functions.get(name)
    }

    pub fn procedure(&self, name: &str) -> Option<&ProcedureSig> {
        self.procedures.get(name)
    }

    pub fn functions(&self) -> impl Iterator<Item = (&str, &FunctionSig)> {
        self.functions.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn procedures(&self) -> impl Iterator<Item = (&str, &ProcedureSig)> {
        self.procedures.iter().map(|(k, v)| (k.as_str(), v))
    }
}
