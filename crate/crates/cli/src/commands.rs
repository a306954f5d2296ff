use std::fs;
use std::path::Path;

use flux_core::ast::Main;
use flux_core::program::global_env;
use flux_core::syntax::{parse_program_file, parse_signature, parse_type, parse_value};
use flux_core::{
    apply_update, check_program, check_signature, eval_query, member, subtype_oracle, Binding,
    Bounds, Diagnostic, Forest, OracleVerdict, Program, Rule, Runtime, Signature, SyntaxError,
    ValueBinding, ValueEnv,
};
use flux_oracle::{program_oracle, run_suites, GenConfig};

use crate::report::CheckReport;

pub struct Settings {
    pub json: bool,
    pub bounds: Bounds,
    pub recursion_limit: usize,
}

/// What a command produced: an exit code, the report, and the lines that
/// human mode prints on stdout.
pub struct Outcome {
    code: u8,
    report: Box<CheckReport>,
    stdout: Vec<String>,
}

impl Outcome {
    fn new(code: u8, report: CheckReport) -> Outcome {
        Outcome {
            code,
            report: Box::new(report),
            stdout: Vec::new(),
        }
    }

    fn line(mut self, s: impl Into<String>) -> Outcome {
        self.stdout.push(s.into());
        self
    }

    /// Exit code 2: the input could not be read or parsed, or flags were wrong.
    fn usage(message: impl Into<String>) -> Outcome {
        Outcome::new(
            2,
            CheckReport::failed(Diagnostic::error(Rule::Syntax, message)),
        )
    }

    fn syntax(e: &SyntaxError) -> Outcome {
        Outcome::new(2, CheckReport::failed(e.to_diagnostic()))
    }

    fn checked(report: CheckReport) -> Outcome {
        let code = if report.is_ok() { 0 } else { 1 };
        Outcome::new(code, report)
    }

    pub fn finish(self, settings: &Settings) -> u8 {
        if settings.json {
            println!(
                "{}",
                serde_json::to_string_pretty(&self.report).expect("report serializes")
            );
        } else {
            for d in &self.report.diagnostics {
                eprintln!("{d}");
            }
            for line in &self.stdout {
                println!("{line}");
            }
        }
        self.code
    }
}

fn load(file: &Path) -> Result<(Program, Signature), Outcome> {
    let src = fs::read_to_string(file)
        .map_err(|e| Outcome::usage(format!("cannot read {}: {e}", file.display())))?;
    parse_program_file(&src, Some(&file.display().to_string())).map_err(|e| Outcome::syntax(&e))
}

fn typechecked(file: &Path) -> Result<(Program, Signature, CheckReport), Outcome> {
    let (p, sig) = load(file)?;
    let r = check_program(&sig, &p);
    let mut report = CheckReport::new(r.diagnostics);
    report.ty = r.main_type.map(|t| t.to_string());
    if !report.is_ok() {
        let mut out = Outcome::checked(report.clone());
        if let Some(t) = &report.ty {
            out = out.line(t.clone());
        }
        return Err(out);
    }
    Ok((p, sig, report))
}

pub fn check(_: &Settings, file: &Path) -> Outcome {
    match typechecked(file) {
        Ok((_, _, report)) => Outcome::checked(report).line("ok"),
        Err(out) => Outcome {
            stdout: Vec::new(),
            ..out
        },
    }
}

pub fn type_of(_: &Settings, file: &Path) -> Outcome {
    match typechecked(file) {
        Ok((_, _, report)) => {
            let t = report.ty.clone().unwrap_or_default();
            Outcome::checked(report).line(t)
        }
        Err(out) => out,
    }
}

pub fn subtype(settings: &Settings, t1: &str, t2: &str, sig_file: Option<&Path>) -> Outcome {
    let sig = match sig_file {
        Some(f) => {
            let src = match fs::read_to_string(f) {
                Ok(s) => s,
                Err(e) => return Outcome::usage(format!("cannot read {}: {e}", f.display())),
            };
            match parse_signature(&src) {
                Ok(sig) => sig,
                Err(e) => return Outcome::syntax(&e),
            }
        }
        None => Signature::new(),
    };
    let bad = check_signature(&sig);
    if !bad.is_empty() {
        return Outcome::new(2, CheckReport::new(bad));
    }
    let (a, b) = match (parse_type(t1), parse_type(t2)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => return Outcome::syntax(&e),
    };
    let holds = match flux_core::subtype(&sig, &a, &b) {
        Ok(h) => h,
        Err(e) => return Outcome::new(2, CheckReport::failed(e.to_diagnostic())),
    };
    let mut report = CheckReport::ok();
    report.subtype = Some(holds);
    let mut out_line = format!("{holds}");
    if !holds {
        if let Ok(OracleVerdict::RefutedWith(v)) =
            subtype_oracle(&sig, &a, &b, settings.bounds.depth, settings.bounds.width)
        {
            out_line = format!("false: {v} is in {a} but not in {b}");
            report.witness = Some(v.to_string());
        }
    }
    Outcome::new(if holds { 0 } else { 1 }, report).line(out_line)
}

/// Values for the declared variables of `p`, from `NAME=VALUE` flags.
fn bindings(p: &Program, sig: &Signature, flags: &[String]) -> Result<ValueEnv, Outcome> {
    let g = global_env(p).map_err(|e| Outcome::new(1, CheckReport::failed(e.to_diagnostic())))?;
    let mut env = ValueEnv::new();
    for flag in flags {
        let Some((name, value)) = flag.split_once('=') else {
            return Err(Outcome::usage(format!(
                "--env expects NAME=VALUE, got `{flag}`"
            )));
        };
        let name = name.trim().trim_start_matches('$');
        let Some(b) = g.get(name) else {
            return Err(Outcome::usage(format!(
                "${name} is not a declared variable"
            )));
        };
        let v = parse_value(value).map_err(|e| Outcome::syntax(&e))?;
        if !member(sig, &v, &b.as_type()).unwrap_or(false) {
            return Err(runtime(format!(
                "value {v} of ${name} is not in {}",
                b.as_type()
            )));
        }
        let vb = match b {
            Binding::Tree(_) => ValueBinding::Tree(v.into_single().expect("member of an atom")),
            Binding::Forest(_) => ValueBinding::Forest(v),
        };
        env.insert(name, vb);
    }
    if let Some(missing) = g.names().find(|x| env.get(x).is_none()) {
        return Err(Outcome::usage(format!(
            "no value given for ${missing}; use --env {missing}=VALUE"
        )));
    }
    Ok(env)
}

fn runtime(message: String) -> Outcome {
    Outcome::new(
        1,
        CheckReport::failed(Diagnostic::error(Rule::Runtime, message)),
    )
}

fn runtime_for(p: &Program, settings: &Settings, env: &ValueEnv) -> Runtime {
    Runtime::from_program(p)
        .with_recursion_limit(settings.recursion_limit)
        .with_globals(env.clone())
}

pub fn eval(settings: &Settings, file: &Path, flags: &[String]) -> Outcome {
    let (p, sig, mut report) = match typechecked(file) {
        Ok(x) => x,
        Err(out) => return out,
    };
    let Main::Query { expr, .. } = &p.main else {
        return Outcome::usage("eval expects a program ending in `query`; use run-update");
    };
    let env = match bindings(&p, &sig, flags) {
        Ok(env) => env,
        Err(out) => return out,
    };
    match eval_query(&runtime_for(&p, settings, &env), &env, expr) {
        Ok(v) => {
            report.value = Some(v.to_string());
            Outcome::checked(report).line(v.to_string())
        }
        Err(e) => runtime(e.to_string()),
    }
}

pub fn run_update(settings: &Settings, file: &Path, input: &str, flags: &[String]) -> Outcome {
    let (p, sig, mut report) = match typechecked(file) {
        Ok(x) => x,
        Err(out) => return out,
    };
    let Main::Update {
        stmt,
        input: input_ty,
        ..
    } = &p.main
    else {
        return Outcome::usage("run-update expects a program ending in `update`; use eval");
    };
    let v: Forest = match parse_value(input) {
        Ok(v) => v,
        Err(e) => return Outcome::syntax(&e),
    };
    if !member(&sig, &v, input_ty).unwrap_or(false) {
        return runtime(format!("input {v} is not in {input_ty}"));
    }
    let env = match bindings(&p, &sig, flags) {
        Ok(env) => env,
        Err(out) => return out,
    };
    match apply_update(&runtime_for(&p, settings, &env), &env, &v, stmt) {
        Ok(out) => {
            report.value = Some(out.to_string());
            Outcome::checked(report).line(out.to_string())
        }
        Err(e) => runtime(e.to_string()),
    }
}

pub fn oracle(settings: &Settings, file: &Path, seed: u64, cases: usize, suites: bool) -> Outcome {
    let (p, sig, mut report) = match typechecked(file) {
        Ok(x) => x,
        Err(out) => return out,
    };
    let cfg = GenConfig {
        bounds: settings.bounds,
        ..GenConfig::default()
    }
    .with_seed(seed)
    .with_cases(cases);
    let rt = Runtime::from_program(&p).with_recursion_limit(settings.recursion_limit);
    let mut all = match program_oracle(&p, &sig, &cfg, &rt) {
        Ok(r) => r,
        Err(e) => return runtime(e.to_string()),
    };
    if suites {
        all.extend(run_suites(&cfg).suites);
    }
    let failures: Vec<String> = all
        .iter()
        .filter(|s| !s.passed())
        .map(|s| {
            format!(
                "oracle suite `{}` failed: {}",
                s.name,
                s.counterexample.clone().unwrap_or_default()
            )
        })
        .collect();
    report.diagnostics.extend(
        failures
            .into_iter()
            .map(|m| Diagnostic::error(Rule::Runtime, m)),
    );
    report.refresh_status();
    let lines: Vec<String> = all.iter().map(|s| s.to_string()).collect();
    report.suites = Some(all);
    lines
        .into_iter()
        .fold(Outcome::checked(report), |out, l| out.line(l))
}
