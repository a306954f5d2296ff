//! Random types, narrowed subtypes, environments and values.

use flux_core::{
    Atom, Binding, Bounds, Forest, Label, Signature, Subtyper, Type, TypeEnv, ValueBinding,
    ValueEnumerator, ValueEnv,
};
use rand::seq::SliceRandom;
use rand::Rng;

use crate::config::GenConfig;

/// Draws types over the configured labels, plus `bool`, `string` and any
/// variables of `sig`.
pub struct TypeGen<'a> {
    cfg: &'a GenConfig,
    sig: &'a Signature,
    vars: Vec<String>,
}

impl<'a> TypeGen<'a> {
    pub fn new(cfg: &'a GenConfig, sig: &'a Signature) -> TypeGen<'a> {
        TypeGen {
            cfg,
            sig,
            vars: sig.iter().map(|(x, _)| x.to_string()).collect(),
        }
    }

    pub fn signature(&self) -> &'a Signature {
        self.sig
    }

    fn label<R: Rng>(&self, rng: &mut R) -> Label {
        self.cfg
            .labels
            .choose(rng)
            .expect("at least one label")
            .clone()
    }

    pub fn gen_type<R: Rng>(&self, rng: &mut R) -> Type {
        let size = rng.gen_range(1..=self.cfg.max_type_size.max(1));
        self.sized(rng, size, self.cfg.max_nesting)
    }

    pub fn gen_atom<R: Rng>(&self, rng: &mut R) -> Atom {
        let size = rng.gen_range(1..=self.cfg.max_type_size.max(1));
        self.atom(rng, size, self.cfg.max_nesting)
    }

    /// An element atom; tree variables used with `/child` need one.
    pub fn gen_element<R: Rng>(&self, rng: &mut R) -> Atom {
        let size = rng.gen_range(1..=self.cfg.max_type_size.max(1));
        let n = self.label(rng);
        let content = self.sized(
            rng,
            size.saturating_sub(1).max(1),
            self.cfg.max_nesting.saturating_sub(1),
        );
        Atom::element(n, content)
    }

    fn atom<R: Rng>(&self, rng: &mut R, size: usize, nesting: usize) -> Atom {
        match rng.gen_range(0..10) {
            0 => Atom::Bool,
            1 => Atom::String,
            _ if nesting == 0 || size <= 1 => Atom::element(self.label(rng), Type::Empty),
            _ => Atom::element(self.label(rng), self.sized(rng, size - 1, nesting - 1)),
        }
    }

    fn sized<R: Rng>(&self, rng: &mut R, size: usize, nesting: usize) -> Type {
        if size <= 1 {
            return match rng.gen_range(0..8) {
                0 => Type::Empty,
                1 if !self.vars.is_empty() => Type::var(self.vars.choose(rng).unwrap().clone()),
                _ => Type::Atom(self.atom(rng, 1, nesting)),
            };
        }
        match rng.gen_range(0..10) {
            0..=2 => Type::Atom(self.atom(rng, size, nesting)),
            3 | 4 if size >= 3 => {
                let k = rng.gen_range(1..size - 1);
                Type::or(
                    self.sized(rng, k, nesting),
                    self.sized(rng, size - 1 - k, nesting),
                )
            }
            5..=7 if size >= 3 => {
                let k = rng.gen_range(1..size - 1);
                Type::seq(
                    self.sized(rng, k, nesting),
                    self.sized(rng, size - 1 - k, nesting),
                )
            }
            _ => Type::star(self.sized(rng, size - 1, nesting)),
        }
    }

    /// A type `t'` with `t' <: t`, built by narrowing rewrites: dropping
    /// alternatives, bounding stars and narrowing element content. The result
    /// is checked and the rewrite retried; `t` itself is the fallback.
    pub fn gen_subtype_of<R: Rng>(&self, rng: &mut R, t: &Type) -> Type {
        let mut sub = Subtyper::new(self.sig);
        for _ in 0..8 {
            let candidate = self.narrow(rng, t, 2);
            if sub.is_subtype(&candidate, t).unwrap_or(false) {
                return candidate;
            }
        }
        t.clone()
    }

    /// Narrows an atom to an atom, so singular positions stay singular.
    pub fn gen_subatom_of<R: Rng>(&self, rng: &mut R, a: &Atom) -> Atom {
        let mut sub = Subtyper::new(self.sig);
        for _ in 0..8 {
            let candidate = self.narrow_atom(rng, a, 2);
            if sub.is_atom_subtype(&candidate, a).unwrap_or(false) {
                return candidate;
            }
        }
        a.clone()
    }

    fn narrow_atom<R: Rng>(&self, rng: &mut R, a: &Atom, unfold: usize) -> Atom {
        match a {
            Atom::Element(n, c) if rng.gen_bool(0.6) => {
                Atom::element(n.clone(), self.narrow(rng, c, unfold))
            }
            _ => a.clone(),
        }
    }

    fn narrow<R: Rng>(&self, rng: &mut R, t: &Type, unfold: usize) -> Type {
        match t {
            Type::Empty => Type::Empty,
            Type::Atom(a) => Type::Atom(self.narrow_atom(rng, a, unfold)),
            Type::Or(l, r) => match rng.gen_range(0..4) {
                0 => self.narrow(rng, l, unfold),
                1 => self.narrow(rng, r, unfold),
                _ => Type::or(self.narrow(rng, l, unfold), self.narrow(rng, r, unfold)),
            },
            Type::Seq(l, r) => Type::seq(self.narrow(rng, l, unfold), self.narrow(rng, r, unfold)),
            Type::Star(inner) => match rng.gen_range(0..5) {
                0 => Type::Empty,
                1 => self.narrow(rng, inner, unfold),
                2 => Type::seq(
                    self.narrow(rng, inner, unfold),
                    self.narrow(rng, inner, unfold),
                ),
                3 => Type::star(self.narrow(rng, inner, unfold)),
                _ => t.clone(),
            },
            Type::Var(x) => match self.sig.get(x) {
                Some(def) if unfold > 0 && rng.gen_bool(0.5) => self.narrow(rng, def, unfold - 1),
                _ => t.clone(),
            },
        }
    }

    /// Up to two variables: tree variables get element atoms most of the time.
    pub fn gen_env<R: Rng>(&self, rng: &mut R) -> TypeEnv {
        let mut g = TypeEnv::new();
        for i in 0..rng.gen_range(0..=2) {
            let b = if rng.gen_bool(0.5) {
                let a = if rng.gen_bool(0.8) {
                    self.gen_element(rng)
                } else {
                    self.gen_atom(rng)
                };
                Binding::Tree(a)
            } else {
                Binding::Forest(self.gen_type(rng))
            };
            g.insert(format!("x{i}"), b);
        }
        g
    }

    /// Pointwise narrowing of an environment.
    pub fn gen_subenv_of<R: Rng>(&self, rng: &mut R, g: &TypeEnv) -> TypeEnv {
        g.iter()
            .map(|(x, b)| {
                let b = match b {
                    Binding::Tree(a) => Binding::Tree(self.gen_subatom_of(rng, a)),
                    Binding::Forest(t) => Binding::Forest(self.gen_subtype_of(rng, t)),
                };
                (x.to_string(), b)
            })
            .collect()
    }
}

/// Per-set cap on enumerated values when sampling; deeply nested stars
/// otherwise have billions of values within the default bounds.
pub const SAMPLE_LIMIT: usize = 2000;

/// Environments whose values are drawn from the bounded enumeration of each
/// binding's type. Empty when some binding has no values within bounds.
pub fn sample_envs<R: Rng>(
    rng: &mut R,
    sig: &Signature,
    g: &TypeEnv,
    bounds: Bounds,
    count: usize,
) -> Vec<ValueEnv> {
    let mut en = ValueEnumerator::new(sig, bounds).with_limit(SAMPLE_LIMIT);
    let mut choices: Vec<(String, Vec<ValueBinding>)> = Vec::new();
    for (x, b) in g.iter() {
        let vals: Vec<ValueBinding> = match b {
            Binding::Tree(a) => match en.trees_of(a) {
                Ok(ts) => ts.into_iter().map(ValueBinding::Tree).collect(),
                Err(_) => return Vec::new(),
            },
            Binding::Forest(t) => match en.values(t) {
                Ok(vs) => vs.into_iter().map(ValueBinding::Forest).collect(),
                Err(_) => return Vec::new(),
            },
        };
        if vals.is_empty() {
            return Vec::new();
        }
        choices.push((x.to_string(), vals));
    }
    (0..count)
        .map(|_| {
            let mut env = ValueEnv::new();
            for (x, vals) in &choices {
                env.insert(x.clone(), vals.choose(rng).unwrap().clone());
            }
            env
        })
        .collect()
}

/// Up to `count` values of `t`, sampled from the bounded enumeration.
pub fn sample_values<R: Rng>(
    rng: &mut R,
    sig: &Signature,
    t: &Type,
    bounds: Bounds,
    count: usize,
) -> Vec<Forest> {
    let all: Vec<Forest> = ValueEnumerator::new(sig, bounds)
        .with_limit(SAMPLE_LIMIT)
        .values(t)
        .map(|s| s.into_iter().collect())
        .unwrap_or_default();
    if all.len() <= count {
        return all;
    }
    all.choose_multiple(rng, count).cloned().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::library::Library;
    use flux_core::parse_type;

    #[test]
    fn generation_is_reproducible() {
        let cfg = GenConfig::default();
        let lib = Library::load();
        let gen = TypeGen::new(&cfg, &lib.sig);
        let a: Vec<Type> = (0..20).map(|i| gen.gen_type(&mut cfg.rng(1, i))).collect();
        let b: Vec<Type> = (0..20).map(|i| gen.gen_type(&mut cfg.rng(1, i))).collect();
        assert_eq!(a, b);
    }

    #[test]
    fn narrowing_yields_subtypes() {
        let cfg = GenConfig::default();
        let lib = Library::load();
        let gen = TypeGen::new(&cfg, &lib.sig);
        let mut sub = Subtyper::new(&lib.sig);
        for i in 0..300 {
            let mut rng = cfg.rng(2, i);
            let t = gen.gen_type(&mut rng);
            let t2 = gen.gen_subtype_of(&mut rng, &t);
            assert!(sub.is_subtype(&t2, &t).unwrap(), "{t2} </: {t}");
        }
    }

    #[test]
    fn narrowing_examples_are_reachable() {
        let cfg = GenConfig::default();
        let sig = Signature::new();
        let gen = TypeGen::new(&cfg, &sig);
        let bc = parse_type("b[] | c[]").unwrap();
        let astar = parse_type("a[]*").unwrap();
        let outs: Vec<String> = (0..60)
            .map(|i| gen.gen_subtype_of(&mut cfg.rng(3, i), &bc).to_string())
            .collect();
        assert!(outs.iter().any(|s| s == "b[]"));
        let outs: Vec<String> = (0..60)
            .map(|i| gen.gen_subtype_of(&mut cfg.rng(4, i), &astar).to_string())
            .collect();
        assert!(outs.iter().any(|s| s == "a[],a[]"));
        assert!(outs.iter().any(|s| s == "a[]*"));
    }
}
