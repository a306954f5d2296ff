//! Executable property suites. Each suite returns a [`SuiteReport`]; failing
//! cases are shrunk before they are reported.

use std::collections::BTreeSet;
use std::time::Instant;

use flux_core::ast::Direction;
use flux_core::syntax::{print_expr, print_stmt};
use flux_core::{
    apply_update, eval_query, filter_label, syntactic_atoms, test_subtype, words_upto, Atom,
    Bounds, Checker, Expr, Forest, Label, Matcher, Multiplicity, Signature, Stmt, Subtyper,
    TestKind, Tree, Type, ValueEnumerator,
};
use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;

use crate::config::GenConfig;
use crate::exhaustive::types_upto;
use crate::gen::{sample_envs, sample_values, TypeGen, SAMPLE_LIMIT};
use crate::library::Library;
use crate::report::{run_cases, summarize, Outcome, Report, SuiteReport};
use crate::shrink::shrink;
use crate::terms::TermGen;

/// Environments or inputs tried per generated term.
const SAMPLES: usize = 6;

fn fail(msg: String) -> Outcome {
    Outcome::Fail(msg)
}

/// `subtype` agrees with the bounded refutation oracle on every pair of
/// types up to `max_size` over `labels`.
pub fn oracle_agreement(labels: &[Label], max_size: usize, bounds: Bounds) -> SuiteReport {
    let start = Instant::now();
    let sig = Signature::new();
    let types = types_upto(labels, max_size);
    let outcomes: Vec<Outcome> = types
        .par_iter()
        .flat_map_iter(|t1| {
            let mut sub = Subtyper::new(&sig);
            let mut m = Matcher::new(&sig);
            let values = ValueEnumerator::new(&sig, bounds).values(t1).expect("closed type");
            types
                .iter()
                .map(|t2| {
                    let claim = sub.is_subtype(t1, t2).expect("closed type");
                    let refuted = values.iter().find(|v| !m.is_member(v, t2).unwrap());
                    match (claim, refuted) {
                        (true, None) | (false, Some(_)) => Outcome::Pass,
                        (true, Some(v)) => fail(format!("{t1} <: {t2} claimed, but {v} refutes it")),
                        (false, None) => fail(format!(
                            "{t1} </: {t2} claimed, but no value within depth {} width {} refutes it",
                            bounds.depth, bounds.width
                        )),
                    }
                })
                .collect::<Vec<_>>()
        })
        .collect();
    summarize("oracle agreement", outcomes, start)
}

/// Reflexivity on random types, and transitivity on chains where both
/// premises hold.
pub fn preorder(cfg: &GenConfig, lib: &Library) -> SuiteReport {
    run_cases("subtype preorder", cfg.cases, |i| {
        let mut rng = cfg.rng(101, i);
        let gen = TypeGen::new(cfg, &lib.sig);
        let mut sub = Subtyper::new(&lib.sig);
        let t3 = gen.gen_type(&mut rng);
        if !sub.is_subtype(&t3, &t3).unwrap() {
            return fail(format!("{t3} is not a subtype of itself"));
        }
        let t2 = if rng.gen_bool(0.5) {
            gen.gen_subtype_of(&mut rng, &t3)
        } else {
            gen.gen_type(&mut rng)
        };
        let t1 = if rng.gen_bool(0.5) {
            gen.gen_subtype_of(&mut rng, &t2)
        } else {
            gen.gen_type(&mut rng)
        };
        if !(sub.is_subtype(&t1, &t2).unwrap() && sub.is_subtype(&t2, &t3).unwrap()) {
            return Outcome::Vacuous;
        }
        if sub.is_subtype(&t1, &t3).unwrap() {
            Outcome::Pass
        } else {
            fail(format!("{t1} <: {t2} <: {t3} but not {t1} <: {t3}"))
        }
    })
}

/// Flat types over `a[]`, `b[]`, `bool` and `string`, used where a fixed
/// atom universe is needed.
fn flat_universe() -> BTreeSet<Atom> {
    ["a", "b"]
        .iter()
        .map(|n| Atom::element(Label::new(*n).unwrap(), Type::Empty))
        .chain([Atom::Bool, Atom::String])
        .collect()
}

fn flat_config(cfg: &GenConfig) -> GenConfig {
    GenConfig {
        max_nesting: 0,
        ..cfg.clone()
    }
}

/// Subtyping implies inclusion of bounded word sets; a bounded
/// non-inclusion implies non-subtyping.
pub fn language_monotone(cfg: &GenConfig) -> SuiteReport {
    let flat = flat_config(cfg);
    let sig = Signature::new();
    let u = flat_universe();
    let k = cfg.word_length.max(4);
    run_cases("word languages vs subtyping", cfg.cases, |i| {
        let mut rng = flat.rng(102, i);
        let gen = TypeGen::new(&flat, &sig);
        let t1 = gen.gen_type(&mut rng);
        let t2 = if rng.gen_bool(0.5) {
            gen.gen_subtype_of(&mut rng, &t1)
        } else {
            gen.gen_type(&mut rng)
        };
        let (t1, t2) = if rng.gen_bool(0.5) {
            (t2, t1)
        } else {
            (t1, t2)
        };
        let claim = flux_core::subtype(&sig, &t1, &t2).unwrap();
        let w1 = words_upto(&sig, &t1, k, &u).unwrap();
        let w2 = words_upto(&sig, &t2, k, &u).unwrap();
        match (claim, w1.is_subset(&w2)) {
            (true, false) => {
                let w = w1.difference(&w2).next().unwrap();
                fail(format!(
                    "{t1} <: {t2} claimed, but word {} is only in the left",
                    Type::word(w.clone())
                ))
            }
            _ => Outcome::Pass,
        }
    })
}

/// Bounded word sets grow with the length bound and with the universe.
pub fn words_monotone(cfg: &GenConfig) -> SuiteReport {
    let flat = flat_config(cfg);
    let sig = Signature::new();
    let full = flat_universe();
    let k = cfg.word_length;
    run_cases("words_upto monotone", cfg.cases, |i| {
        let mut rng = flat.rng(103, i);
        let t = TypeGen::new(&flat, &sig).gen_type(&mut rng);
        let atoms: Vec<Atom> = full.iter().cloned().collect();
        let small: BTreeSet<Atom> = atoms.choose_multiple(&mut rng, 2).cloned().collect();
        let a = words_upto(&sig, &t, k, &small).unwrap();
        let b = words_upto(&sig, &t, k + 1, &small).unwrap();
        let c = words_upto(&sig, &t, k, &full).unwrap();
        if !a.is_subset(&b) {
            fail(format!(
                "words of {t} at length {k} are not among those at {}",
                k + 1
            ))
        } else if !a.is_subset(&c) {
            fail(format!(
                "words of {t} over a smaller universe are not among those over a larger one"
            ))
        } else {
            Outcome::Pass
        }
    })
}

/// Every value of a type is matched by some word of the type's syntactic
/// atoms of the same length.
pub fn atomic_witnesses(cfg: &GenConfig, lib: &Library) -> SuiteReport {
    run_cases("atomic witnesses", cfg.cases, |i| {
        let mut rng = cfg.rng(104, i);
        let t = TypeGen::new(cfg, &lib.sig).gen_type(&mut rng);
        let u = syntactic_atoms(&lib.sig, &t).unwrap();
        let values = sample_values(&mut rng, &lib.sig, &t, cfg.bounds, SAMPLES);
        if values.is_empty() {
            return Outcome::Vacuous;
        }
        let mut sub = Subtyper::new(&lib.sig);
        let mut m = Matcher::new(&lib.sig);
        let longest = values.iter().map(Forest::len).max().unwrap();
        let words = flux_core::enumerate::words_upto_with(&mut sub, &t, longest, &u).unwrap();
        for v in &values {
            let found = words
                .iter()
                .filter(|w| w.len() == v.len())
                .any(|w| m.is_member(v, &Type::word(w.iter().cloned())).unwrap());
            if !found {
                return fail(format!("{v} : {t} has no witness word over its atoms"));
            }
        }
        Outcome::Pass
    })
}

/// A value matches a test as the evaluator sees it.
pub fn tree_matches(t: &Tree, phi: &TestKind) -> bool {
    match (t, phi) {
        (Tree::Bool(_), TestKind::Bool) | (Tree::Str(_), TestKind::String) => true,
        (Tree::Node(..), TestKind::Wildcard) => true,
        (Tree::Node(n, _), TestKind::Label(m)) => n == m,
        _ => false,
    }
}

/// `test_subtype(α, φ)` holds exactly when every inhabitant of α passes φ.
pub fn test_semantics(cfg: &GenConfig, lib: &Library) -> SuiteReport {
    run_cases("test_subtype semantics", cfg.cases, |i| {
        let mut rng = cfg.rng(105, i);
        let alpha = TypeGen::new(cfg, &lib.sig).gen_atom(&mut rng);
        let phi = match rng.gen_range(0..4) {
            0 => TestKind::Wildcard,
            1 => TestKind::Bool,
            2 => TestKind::String,
            _ => TestKind::Label(cfg.labels.choose(&mut rng).unwrap().clone()),
        };
        let trees = ValueEnumerator::new(&lib.sig, cfg.bounds)
            .with_limit(SAMPLE_LIMIT)
            .trees_of(&alpha)
            .unwrap();
        if trees.is_empty() {
            return Outcome::Vacuous;
        }
        let semantic = trees.iter().all(|t| tree_matches(t, &phi));
        if test_subtype(&alpha, &phi) == semantic {
            Outcome::Pass
        } else {
            fail(format!(
                "test_subtype({alpha}, {phi}) disagrees with its inhabitants"
            ))
        }
    })
}

/// Members of a subtype are members of the supertype.
pub fn member_respects_subtyping(cfg: &GenConfig, lib: &Library) -> SuiteReport {
    run_cases("member respects subtyping", cfg.cases, |i| {
        let mut rng = cfg.rng(106, i);
        let gen = TypeGen::new(cfg, &lib.sig);
        let t2 = gen.gen_type(&mut rng);
        let t1 = if rng.gen_bool(0.7) {
            gen.gen_subtype_of(&mut rng, &t2)
        } else {
            gen.gen_type(&mut rng)
        };
        if !flux_core::subtype(&lib.sig, &t1, &t2).unwrap() {
            return Outcome::Vacuous;
        }
        let mut m = Matcher::new(&lib.sig);
        for v in sample_values(&mut rng, &lib.sig, &t1, cfg.bounds, SAMPLES * 2) {
            if !m.is_member(&v, &t2).unwrap() {
                return fail(format!(
                    "{v} : {t1} and {t1} <: {t2}, but {v} is not in {t2}"
                ));
            }
        }
        Outcome::Pass
    })
}

/// For a narrowing `t' <: t`, every syntactic atom of `t'` lies below some
/// syntactic atom of `t`.
pub fn narrowed_atoms(cfg: &GenConfig, lib: &Library) -> SuiteReport {
    run_cases("atoms of narrowed types", cfg.cases, |i| {
        let mut rng = cfg.rng(107, i);
        let gen = TypeGen::new(cfg, &lib.sig);
        let t = gen.gen_type(&mut rng);
        let t2 = gen.gen_subtype_of(&mut rng, &t);
        let big = syntactic_atoms(&lib.sig, &t).unwrap();
        let mut sub = Subtyper::new(&lib.sig);
        for a in syntactic_atoms(&lib.sig, &t2).unwrap() {
            if !big.iter().any(|b| sub.is_atom_subtype(&a, b).unwrap()) {
                return fail(format!("atom {a} of {t2} is below no atom of {t}"));
            }
        }
        Outcome::Pass
    })
}

pub fn filter_totality(cfg: &GenConfig, lib: &Library) -> SuiteReport {
    run_cases("filter totality", cfg.cases, |i| {
        let mut rng = cfg.rng(108, i);
        let t = TypeGen::new(cfg, &lib.sig).gen_type(&mut rng);
        let n = cfg.labels.choose(&mut rng).unwrap();
        match filter_label(&lib.sig, &t, n) {
            Ok(_) => Outcome::Pass,
            Err(e) => fail(format!("{t}::{n} failed: {e}")),
        }
    })
}

/// `⋃ { L(ĥ(ω)) | ω ∈ L(τ) } = L(ĥ(τ))` with ĥ the label filter, bounded
/// to words of length ≤ `k` over the syntactic atoms of τ. Source words
/// range up to `2k + 2` so that erased atoms do not cut witnesses short.
pub fn commutation(labels: &[Label], max_size: usize, k: usize) -> SuiteReport {
    let start = Instant::now();
    let sig = Signature::new();
    let types = types_upto(labels, max_size);
    let outcomes: Vec<Outcome> = types
        .par_iter()
        .flat_map_iter(|t| {
            labels
                .iter()
                .map(|n| commutation_case(&sig, t, n, k))
                .collect::<Vec<_>>()
        })
        .collect();
    summarize("filter commutation", outcomes, start)
}

/// One instance of the commutation check.
pub fn commutation_case(sig: &Signature, t: &Type, n: &Label, k: usize) -> Outcome {
    let u = syntactic_atoms(sig, t).unwrap();
    let mut sub = Subtyper::new(sig);
    let source = flux_core::enumerate::words_upto_with(&mut sub, t, 2 * k + 2, &u).unwrap();
    let mut lhs = BTreeSet::new();
    for w in &source {
        let image = w
            .iter()
            .map(|a| filter_label(sig, &Type::Atom(a.clone()), n).unwrap())
            .reduce(Type::seq)
            .unwrap_or(Type::Empty);
        lhs.extend(flux_core::enumerate::words_upto_with(&mut sub, &image, k, &u).unwrap());
    }
    let filtered = filter_label(sig, t, n).unwrap();
    let rhs = flux_core::enumerate::words_upto_with(&mut sub, &filtered, k, &u).unwrap();
    if lhs == rhs {
        Outcome::Pass
    } else {
        let show = |s: &BTreeSet<Vec<Atom>>| {
            s.iter()
                .map(|w| Type::word(w.clone()).to_string())
                .collect::<Vec<_>>()
                .join(" ; ")
        };
        fail(format!(
            "τ = {t}, n = {n}: images give {{{}}}, filtered type gives {{{}}}",
            show(&lhs),
            show(&rhs)
        ))
    }
}

/// Shrinks a failing query and reports it with its environments.
fn report_expr(
    e: Expr,
    still_fails: impl FnMut(&Expr) -> bool,
    describe: impl Fn(&Expr) -> String,
) -> Outcome {
    let small = shrink(e, still_fails);
    fail(describe(&small))
}

fn report_stmt(
    s: Stmt,
    still_fails: impl FnMut(&Stmt) -> bool,
    describe: impl Fn(&Stmt) -> String,
) -> Outcome {
    let small = shrink(s, still_fails);
    fail(describe(&small))
}

/// Shrinking Γ keeps a query typeable, with a smaller type; likewise for
/// `for` when the source type also shrinks.
pub fn downward_query(cfg: &GenConfig, lib: &Library) -> SuiteReport {
    run_cases("downward monotonicity (query)", cfg.cases, |i| {
        let mut rng = cfg.rng(109, i);
        let tg = TermGen::new(cfg, lib);
        let gen = tg.types();
        let g = gen.gen_env(&mut rng);
        let Ok((e, _)) = tg.gen_typed_expr(&mut rng, &g) else {
            return fail(format!("no well-typed query under {g}"));
        };
        let g2 = gen.gen_subenv_of(&mut rng, &g);
        let violates = |e: &Expr| {
            let mut ck = Checker::new(&lib.sig, &lib.decls);
            let Ok(t) = ck.synth_expr(&g, e) else {
                return false;
            };
            match ck.synth_expr(&g2, e) {
                Ok(t2) => !ck.is_subtype(&t2, &t).unwrap(),
                Err(_) => true,
            }
        };
        if violates(&e) {
            return report_expr(e, violates, |e| {
                format!("{} under {g} narrowed to {g2}", print_expr(e))
            });
        }

        let t1 = gen.gen_type(&mut rng);
        let body = tg.gen_for_body(&mut rng, &g, "z");
        let mut ck = Checker::new(&lib.sig, &lib.decls);
        let Ok(out) = ck.synth_for(&g, "z", &t1, &body) else {
            return Outcome::Pass;
        };
        let t1n = gen.gen_subtype_of(&mut rng, &t1);
        match ck.synth_for(&g2, "z", &t1n, &body) {
            Ok(out2) if ck.is_subtype(&out2, &out).unwrap() => Outcome::Pass,
            r => fail(format!(
                "for $z over {t1} ↦ {t1n} with body {} under {g2}: got {r:?}, original {out}",
                print_expr(&body)
            )),
        }
    })
}

/// Shrinking Γ and the input type keeps an update typeable with a smaller
/// output, at both multiplicities.
pub fn downward_update(cfg: &GenConfig, lib: &Library) -> SuiteReport {
    run_cases("downward monotonicity (update)", cfg.cases, |i| {
        let mut rng = cfg.rng(110, i);
        let tg = TermGen::new(cfg, lib);
        let gen = tg.types();
        let g = gen.gen_env(&mut rng);
        let (a, t) = if rng.gen_bool(0.75) {
            (Multiplicity::Plural, gen.gen_type(&mut rng))
        } else {
            (
                Multiplicity::Singular,
                Type::Atom(gen.gen_element(&mut rng)),
            )
        };
        let Ok((s, _)) = tg.gen_typed_stmt(&mut rng, &g, a, &t) else {
            return fail(format!("no well-typed {a} update on {t} under {g}"));
        };
        let g2 = gen.gen_subenv_of(&mut rng, &g);
        let t2 = match &t {
            Type::Atom(alpha) if a == Multiplicity::Singular => {
                Type::Atom(gen.gen_subatom_of(&mut rng, alpha))
            }
            _ => gen.gen_subtype_of(&mut rng, &t),
        };
        let violates = |s: &Stmt| {
            let mut ck = Checker::new(&lib.sig, &lib.decls);
            let Ok(out) = ck.synth_stmt(&g, a, &t, s) else {
                return false;
            };
            match ck.synth_stmt(&g2, a, &t2, s) {
                Ok(out2) => !ck.is_subtype(&out2, &out).unwrap(),
                Err(_) => true,
            }
        };
        if violates(&s) {
            return report_stmt(s, violates, |s| {
                format!("{} at {a} on {t} ↦ {t2}, {g} ↦ {g2}", print_stmt(s))
            });
        }
        Outcome::Pass
    })
}

/// The combinators of τ1 map to the same combinators of the results.
fn structural<F>(sig: &Signature, t1: &Type, t2: &Type, mut judge: F) -> Result<Option<String>, ()>
where
    F: FnMut(&Type) -> Result<Type, flux_core::TypeError>,
{
    let (Ok(r1), Ok(r2)) = (judge(t1), judge(t2)) else {
        return Err(());
    };
    let cases = [
        (
            Type::seq(t1.clone(), t2.clone()),
            Type::seq(r1.clone(), r2.clone()),
        ),
        (
            Type::or(t1.clone(), t2.clone()),
            Type::or(r1.clone(), r2.clone()),
        ),
        (Type::star(t1.clone()), Type::star(r1.clone())),
        (Type::Empty, Type::Empty),
    ];
    for (input, expected) in cases {
        match judge(&input) {
            Ok(got) if got == expected => {}
            got => {
                return Ok(Some(format!(
                    "on {input}: expected {expected}, got {got:?}"
                )))
            }
        }
    }
    for (x, def) in sig.iter() {
        let via_var = judge(&Type::var(x)).ok();
        let via_def = judge(def).ok();
        if via_var != via_def {
            return Ok(Some(format!(
                "on {x}: {via_var:?} differs from its definition {via_def:?}"
            )));
        }
    }
    Ok(None)
}

/// `for` typing is the homomorphic extension of its atom case.
pub fn homomorphism_for(cfg: &GenConfig, lib: &Library) -> SuiteReport {
    run_cases("homomorphism (for)", cfg.cases, |i| {
        let mut rng = cfg.rng(111, i);
        let tg = TermGen::new(cfg, lib);
        let gen = tg.types();
        let g = gen.gen_env(&mut rng);
        let (t1, t2) = (gen.gen_type(&mut rng), gen.gen_type(&mut rng));
        for _ in 0..cfg.retries {
            let body = tg.gen_for_body(&mut rng, &g, "z");
            let mut ck = Checker::new(&lib.sig, &lib.decls);
            match structural(&lib.sig, &t1, &t2, |t| ck.synth_for(&g, "z", t, &body)) {
                Err(()) => continue,
                Ok(None) => return Outcome::Pass,
                Ok(Some(msg)) => return fail(format!("body {}: {msg}", print_expr(&body))),
            }
        }
        Outcome::Vacuous
    })
}

/// `iter` typing is the homomorphic extension of its atom case.
pub fn homomorphism_iter(cfg: &GenConfig, lib: &Library) -> SuiteReport {
    run_cases("homomorphism (iter)", cfg.cases, |i| {
        let mut rng = cfg.rng(112, i);
        let tg = TermGen::new(cfg, lib);
        let gen = tg.types();
        let g = gen.gen_env(&mut rng);
        let (t1, t2) = (gen.gen_type(&mut rng), gen.gen_type(&mut rng));
        let atoms: Vec<Atom> = syntactic_atoms(&lib.sig, &Type::seq(t1.clone(), t2.clone()))
            .unwrap()
            .into_iter()
            .collect();
        for _ in 0..cfg.retries {
            let hint = atoms.choose(&mut rng).cloned().unwrap_or(Atom::Bool);
            let body = tg.gen_iter_body(&mut rng, &g, &hint);
            let mut ck = Checker::new(&lib.sig, &lib.decls);
            match structural(&lib.sig, &t1, &t2, |t| ck.synth_iter(&g, t, &body)) {
                Err(()) => continue,
                Ok(None) => return Outcome::Pass,
                Ok(Some(msg)) => return fail(format!("body {}: {msg}", print_stmt(&body))),
            }
        }
        Outcome::Vacuous
    })
}

/// Evaluating a well-typed query in a conforming environment yields a
/// member of its synthesized type.
pub fn soundness_query(cfg: &GenConfig, lib: &Library) -> SuiteReport {
    run_cases("soundness (query)", cfg.cases, |i| {
        let mut rng = cfg.rng(113, i);
        let tg = TermGen::new(cfg, lib);
        let g = tg.types().gen_env(&mut rng);
        let Ok((e, t)) = tg.gen_typed_expr(&mut rng, &g) else {
            return fail(format!("no well-typed query under {g}"));
        };
        let envs = sample_envs(&mut rng, &lib.sig, &g, cfg.bounds, SAMPLES);
        if envs.is_empty() {
            return Outcome::Vacuous;
        }
        let mut m = Matcher::new(&lib.sig);
        for env in &envs {
            let bad = |e: &Expr| {
                let mut ck = Checker::new(&lib.sig, &lib.decls);
                let Ok(t) = ck.synth_expr(&g, e) else {
                    return false;
                };
                let mut m = Matcher::new(&lib.sig);
                match eval_query(&lib.runtime, env, e) {
                    Ok(v) => !m.is_member(&v, &t).unwrap(),
                    Err(_) => true,
                }
            };
            let ok = match eval_query(&lib.runtime, env, &e) {
                Ok(v) => m.is_member(&v, &t).unwrap(),
                Err(_) => false,
            };
            if !ok {
                return report_expr(e, bad, |e| {
                    let r = eval_query(&lib.runtime, env, e);
                    format!("{} under {g} with {env}: result {r:?}", print_expr(e))
                });
            }
        }
        Outcome::Pass
    })
}

/// Applying a well-typed update to a conforming input yields a member of
/// its output type.
pub fn soundness_update(cfg: &GenConfig, lib: &Library) -> SuiteReport {
    run_cases("soundness (update)", cfg.cases, |i| {
        let mut rng = cfg.rng(114, i);
        let tg = TermGen::new(cfg, lib);
        let gen = tg.types();
        let g = gen.gen_env(&mut rng);
        let t = gen.gen_type(&mut rng);
        let Ok((s, out)) = tg.gen_typed_stmt(&mut rng, &g, Multiplicity::Plural, &t) else {
            return fail(format!("no well-typed update on {t} under {g}"));
        };
        let envs = sample_envs(&mut rng, &lib.sig, &g, cfg.bounds, SAMPLES);
        let inputs = sample_values(&mut rng, &lib.sig, &t, cfg.bounds, SAMPLES);
        if envs.is_empty() || inputs.is_empty() {
            return Outcome::Vacuous;
        }
        let mut m = Matcher::new(&lib.sig);
        for (env, v) in envs.iter().zip(inputs.iter().cycle()) {
            let ok = match apply_update(&lib.runtime, env, v, &s) {
                Ok(v2) => m.is_member(&v2, &out).unwrap(),
                Err(_) => false,
            };
            if !ok {
                let bad = |s: &Stmt| {
                    let mut ck = Checker::new(&lib.sig, &lib.decls);
                    let Ok(out) = ck.synth_stmt(&g, Multiplicity::Plural, &t, s) else {
                        return false;
                    };
                    let mut m = Matcher::new(&lib.sig);
                    match apply_update(&lib.runtime, env, v, s) {
                        Ok(v2) => !m.is_member(&v2, &out).unwrap(),
                        Err(_) => true,
                    }
                };
                return report_stmt(s, bad, |s| {
                    let r = apply_update(&lib.runtime, env, v, s);
                    format!("{} on {v} : {t} under {env}: result {r:?}", print_stmt(s))
                });
            }
        }
        Outcome::Pass
    })
}

/// The judgments are functions: repeated synthesis, with a fresh or a
/// reused checker, gives identical types; evaluation is repeatable.
pub fn determinism(cfg: &GenConfig, lib: &Library) -> SuiteReport {
    run_cases("determinism", cfg.cases, |i| {
        let mut rng = cfg.rng(115, i);
        let tg = TermGen::new(cfg, lib);
        let gen = tg.types();
        let g = gen.gen_env(&mut rng);
        let t = gen.gen_type(&mut rng);
        let Ok((e, te)) = tg.gen_typed_expr(&mut rng, &g) else {
            return fail(format!("no well-typed query under {g}"));
        };
        let Ok((s, ts)) = tg.gen_typed_stmt(&mut rng, &g, Multiplicity::Plural, &t) else {
            return fail(format!("no well-typed update on {t} under {g}"));
        };
        let mut ck = Checker::new(&lib.sig, &lib.decls);
        let again = (ck.synth_expr(&g, &e), ck.synth_expr(&g, &e));
        if again != (Ok(te.clone()), Ok(te.clone())) {
            return fail(format!(
                "{} typed inconsistently: {again:?}",
                print_expr(&e)
            ));
        }
        let again = (
            ck.synth_stmt(&g, Multiplicity::Plural, &t, &s),
            ck.synth_stmt(&g, Multiplicity::Plural, &t, &s),
        );
        if again != (Ok(ts.clone()), Ok(ts.clone())) {
            return fail(format!(
                "{} typed inconsistently: {again:?}",
                print_stmt(&s)
            ));
        }
        for env in sample_envs(&mut rng, &lib.sig, &g, cfg.bounds, 2) {
            if eval_query(&lib.runtime, &env, &e) != eval_query(&lib.runtime, &env, &e) {
                return fail(format!(
                    "{} evaluates inconsistently under {env}",
                    print_expr(&e)
                ));
            }
            for v in sample_values(&mut rng, &lib.sig, &t, cfg.bounds, 2) {
                if apply_update(&lib.runtime, &env, &v, &s)
                    != apply_update(&lib.runtime, &env, &v, &s)
                {
                    return fail(format!("{} applies inconsistently to {v}", print_stmt(&s)));
                }
            }
        }
        Outcome::Pass
    })
}

/// `skip` is the identity, `;` composes, and `iter` distributes over
/// concatenation of the input.
pub fn evaluator_laws(cfg: &GenConfig, lib: &Library) -> SuiteReport {
    run_cases("evaluator laws", cfg.cases, |i| {
        let mut rng = cfg.rng(116, i);
        let tg = TermGen::new(cfg, lib);
        let gen = tg.types();
        let g = gen.gen_env(&mut rng);
        let t = gen.gen_type(&mut rng);
        let Ok((s1, mid)) = tg.gen_typed_stmt(&mut rng, &g, Multiplicity::Plural, &t) else {
            return fail(format!("no well-typed update on {t} under {g}"));
        };
        let Ok((s2, _)) = tg.gen_typed_stmt(&mut rng, &g, Multiplicity::Plural, &mid) else {
            return fail(format!("no well-typed update on {mid} under {g}"));
        };
        let hint = syntactic_atoms(&lib.sig, &t)
            .unwrap()
            .into_iter()
            .next()
            .unwrap_or(Atom::Bool);
        let body = tg.gen_iter_body(&mut rng, &g, &hint);
        let iter = Stmt::nav(Direction::Iter, body);
        let envs = sample_envs(&mut rng, &lib.sig, &g, cfg.bounds, 2);
        let inputs = sample_values(&mut rng, &lib.sig, &t, cfg.bounds, 3);
        if envs.is_empty() || inputs.is_empty() {
            return Outcome::Vacuous;
        }
        let rt = &lib.runtime;
        for env in &envs {
            for v in &inputs {
                if apply_update(rt, env, v, &Stmt::skip()).as_ref() != Ok(v) {
                    return fail(format!("skip changed {v}"));
                }
                let seq = apply_update(rt, env, v, &Stmt::seq(s1.clone(), s2.clone()));
                let stepwise =
                    apply_update(rt, env, v, &s1).and_then(|w| apply_update(rt, env, &w, &s2));
                if seq != stepwise {
                    return fail(format!(
                        "{}; {} on {v}: {seq:?} vs stepwise {stepwise:?}",
                        print_stmt(&s1),
                        print_stmt(&s2)
                    ));
                }
                for w in &inputs {
                    let whole = apply_update(rt, env, &v.clone().concat(w.clone()), &iter);
                    let parts = apply_update(rt, env, v, &iter)
                        .and_then(|a| apply_update(rt, env, w, &iter).map(|b| a.concat(b)));
                    if whole != parts {
                        return fail(format!(
                            "{} on {v} then {w}: {whole:?} vs {parts:?}",
                            print_stmt(&iter)
                        ));
                    }
                }
            }
        }
        Outcome::Pass
    })
}

/// Every suite, in a fixed order.
pub fn run_suites(cfg: &GenConfig) -> Report {
    let lib = Library::load();
    let suites = vec![
        oracle_agreement(&cfg.labels, 4, cfg.bounds),
        preorder(cfg, &lib),
        language_monotone(cfg),
        words_monotone(cfg),
        atomic_witnesses(cfg, &lib),
        test_semantics(cfg, &lib),
        member_respects_subtyping(cfg, &lib),
        narrowed_atoms(cfg, &lib),
        filter_totality(cfg, &lib),
        commutation(&cfg.labels, 4, cfg.word_length),
        determinism(cfg, &lib),
        downward_query(cfg, &lib),
        downward_update(cfg, &lib),
        homomorphism_for(cfg, &lib),
        homomorphism_iter(cfg, &lib),
        soundness_query(cfg, &lib),
        soundness_update(cfg, &lib),
        evaluator_laws(cfg, &lib),
    ];
    Report {
        seed: cfg.seed,
        suites,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> GenConfig {
        GenConfig::default().with_cases(30)
    }

    #[test]
    fn commutation_on_flagship_type() {
        let sig = Signature::new();
        let t = flux_core::parse_type("b[]*, c[]?").unwrap();
        let b = Label::new("b").unwrap();
        assert_eq!(commutation_case(&sig, &t, &b, 3), Outcome::Pass);
    }

    #[test]
    fn small_suites_pass() {
        let cfg = small();
        let lib = Library::load();
        for r in [
            preorder(&cfg, &lib),
            test_semantics(&cfg, &lib),
            downward_query(&cfg, &lib),
            downward_update(&cfg, &lib),
            soundness_query(&cfg, &lib),
            soundness_update(&cfg, &lib),
            evaluator_laws(&cfg, &lib),
        ] {
            assert!(r.passed(), "{r}");
        }
    }

    #[test]
    fn oracle_agreement_on_tiny_types() {
        let labels = vec![Label::new("a").unwrap()];
        let r = oracle_agreement(&labels, 3, Bounds { depth: 2, width: 2 });
        assert_eq!(r.cases, 81);
        assert!(r.passed(), "{r}");
    }
}
