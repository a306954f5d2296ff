//! Bounded checks of one program: every declaration and the main query or
//! update is run on enumerated inputs and its result compared with the
//! synthesized type.

use std::collections::BTreeSet;
use std::time::Instant;

use flux_core::ast::{Main, Program};
use flux_core::program::global_env;
use flux_core::{
    apply_update, check_program, eval_query, subtype_oracle, Binding, Checker, EvalError, Forest,
    GlobalDecls, Matcher, OracleVerdict, Runtime, Signature, Type, TypeEnv, ValueBinding,
    ValueEnumerator, ValueEnv,
};

use crate::config::GenConfig;
use crate::gen::SAMPLE_LIMIT;
use crate::report::{summarize, Outcome, SuiteReport};

#[derive(Debug, thiserror::Error)]
pub enum ProgramOracleError {
    #[error("program does not typecheck:\n{0}")]
    IllTyped(String),
}

/// Every tuple of the given value lists, in lexicographic order, up to `cap`.
fn product(lists: &[Vec<Forest>], cap: usize) -> Vec<Vec<Forest>> {
    let mut out: Vec<Vec<Forest>> = vec![Vec::new()];
    for list in lists {
        let mut next = Vec::new();
        'fill: for prefix in &out {
            for v in list {
                if next.len() >= cap {
                    break 'fill;
                }
                let mut p = prefix.clone();
                p.push(v.clone());
                next.push(p);
            }
        }
        out = next;
    }
    out
}

fn outcome_of(
    m: &mut Matcher<'_>,
    what: &str,
    result: Result<Forest, EvalError>,
    t: &Type,
) -> Outcome {
    match result {
        Ok(v) if m.is_member(&v, t).unwrap_or(false) => Outcome::Pass,
        Ok(v) => Outcome::Fail(format!("{what} returned {v}, which is not in {t}")),
        Err(EvalError::RecursionLimit(_)) => Outcome::Vacuous,
        Err(e) => Outcome::Fail(format!("{what} failed: {e}")),
    }
}

/// Soundness of `p` on enumerated inputs, plus agreement of each ascription
/// verdict with the bounded oracle.
pub fn program_oracle(
    p: &Program,
    sig: &Signature,
    cfg: &GenConfig,
    rt: &Runtime,
) -> Result<Vec<SuiteReport>, ProgramOracleError> {
    let report = check_program(sig, p);
    if !report.is_ok() {
        let lines: Vec<String> = report.diagnostics.iter().map(|d| d.to_string()).collect();
        return Err(ProgramOracleError::IllTyped(lines.join("\n")));
    }
    let decls: &GlobalDecls = rt.decls();
    let env = global_env(p).expect("checked above");
    let mut en = ValueEnumerator::new(sig, cfg.bounds).with_limit(SAMPLE_LIMIT);
    let mut m = Matcher::new(sig);
    let mut ck = Checker::new(sig, decls);
    let mut suites = Vec::new();

    let start = Instant::now();
    let mut outcomes = Vec::new();
    let globals = global_values(&mut en, &env, cfg.cases);
    for f in &p.functions {
        let lists: Vec<Vec<Forest>> = f
            .params
            .iter()
            .map(|x| {
                en.values(&x.ty)
                    .map(|s| s.into_iter().collect())
                    .unwrap_or_default()
            })
            .collect();
        for args in product(&lists, cfg.cases) {
            for genv in globals.iter().take(2) {
                let mut venv = genv.clone();
                for (x, v) in f.params.iter().zip(&args) {
                    venv.insert(x.name.clone(), ValueBinding::Forest(v.clone()));
                }
                let what = format!("{}({})", f.name, join(&args));
                let rt = with_globals(rt, genv);
                outcomes.push(outcome_of(
                    &mut m,
                    &what,
                    eval_query(&rt, &venv, &f.body),
                    &f.ret,
                ));
            }
        }
    }
    for d in &p.procedures {
        let mut lists: Vec<Vec<Forest>> = d
            .params
            .iter()
            .map(|x| {
                en.values(&x.ty)
                    .map(|s| s.into_iter().collect())
                    .unwrap_or_default()
            })
            .collect();
        lists.push(
            en.values(&d.input)
                .map(|s| s.into_iter().collect())
                .unwrap_or_default(),
        );
        for mut args in product(&lists, cfg.cases) {
            let input = args.pop().expect("input is last");
            for genv in globals.iter().take(2) {
                let mut venv = genv.clone();
                for (x, v) in d.params.iter().zip(&args) {
                    venv.insert(x.name.clone(), ValueBinding::Forest(v.clone()));
                }
                let what = format!("{}({}) on {input}", d.name, join(&args));
                let r = apply_update(&with_globals(rt, genv), &venv, &input, &d.body);
                outcomes.push(outcome_of(&mut m, &what, r, &d.output));
            }
        }
    }
    suites.push(summarize("declarations", outcomes, start));

    let start = Instant::now();
    let mut outcomes = Vec::new();
    let main_type = report.main_type.clone().expect("checked above");
    match &p.main {
        Main::Query { expr, .. } => {
            for venv in &globals {
                let what = format!("main query under {venv}");
                let r = eval_query(&with_globals(rt, venv), venv, expr);
                outcomes.push(outcome_of(&mut m, &what, r, &main_type));
            }
        }
        Main::Update { stmt, input, .. } => {
            let inputs: Vec<Forest> = en
                .values(input)
                .map(|s| s.into_iter().collect())
                .unwrap_or_default();
            for venv in globals.iter().take(4) {
                let rt = with_globals(rt, venv);
                for v in inputs.iter().take(cfg.cases) {
                    let what = format!("main update on {v}");
                    outcomes.push(outcome_of(
                        &mut m,
                        &what,
                        apply_update(&rt, venv, v, stmt),
                        &main_type,
                    ));
                }
            }
        }
    }
    suites.push(summarize("main", outcomes, start));

    let start = Instant::now();
    let expected = match &p.main {
        Main::Query { ty, .. } => ty,
        Main::Update { output, .. } => output,
    };
    let claim = ck.is_subtype(&main_type, expected).unwrap_or(false);
    let verdict = subtype_oracle(
        sig,
        &main_type,
        expected,
        cfg.bounds.depth,
        cfg.bounds.width,
    );
    let outcome = match (claim, verdict) {
        (true, Ok(OracleVerdict::RefutedWith(v))) => Outcome::Fail(format!(
            "ascription accepted, but {v} : {main_type} is not in {expected}"
        )),
        (_, Ok(_)) => Outcome::Pass,
        (_, Err(e)) => Outcome::Fail(e.to_string()),
    };
    suites.push(summarize("ascription oracle", vec![outcome], start));
    Ok(suites)
}

/// Declared variables stay visible inside function and procedure bodies.
fn with_globals(rt: &Runtime, env: &ValueEnv) -> Runtime {
    rt.clone().with_globals(env.clone())
}

fn join(vs: &[Forest]) -> String {
    vs.iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

/// Conforming environments for the declared variables, up to `cap`.
fn global_values(en: &mut ValueEnumerator<'_>, env: &TypeEnv, cap: usize) -> Vec<ValueEnv> {
    let mut names = Vec::new();
    let mut lists = Vec::new();
    for (x, b) in env.iter() {
        names.push((x.to_string(), matches!(b, Binding::Tree(_))));
        let vals: BTreeSet<Forest> = match b {
            Binding::Tree(a) => en
                .trees_of(a)
                .unwrap_or_default()
                .into_iter()
                .map(Forest::single)
                .collect(),
            Binding::Forest(t) => en.values(t).unwrap_or_default(),
        };
        lists.push(vals.into_iter().collect::<Vec<_>>());
    }
    product(&lists, cap)
        .into_iter()
        .map(|vals| {
            let mut venv = ValueEnv::new();
            for ((x, tree), v) in names.iter().zip(vals) {
                let b = match (tree, v.into_single()) {
                    (true, Ok(t)) => ValueBinding::Tree(t),
                    (_, Ok(t)) => ValueBinding::Forest(Forest::single(t)),
                    (_, Err(f)) => ValueBinding::Forest(f),
                };
                venv.insert(x.clone(), b);
            }
            venv
        })
        .collect()
}
