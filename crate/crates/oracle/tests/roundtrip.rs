//! Printing then parsing gives back the same tree, for the bundled programs
//! and for generated types, queries and updates.

use std::fs;
use std::path::PathBuf;

use flux_core::syntax::{parse_expr_in, parse_stmt_in, print_expr, print_program, print_stmt};
use flux_core::{parse_program, parse_type, Multiplicity};
use flux_oracle::{GenConfig, Library, TermGen};

const CASES: usize = 1000;

#[test]
fn bundled_programs_round_trip() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../programs");
    let mut seen = 0;
    for entry in fs::read_dir(&dir).unwrap() {
        let path = entry.unwrap().path();
        let src = fs::read_to_string(&path).unwrap();
        let (p, sig) = parse_program(&src).unwrap();
        let printed = print_program(&p);
        let (q, sig2) = parse_program(&printed).unwrap_or_else(|e| {
            panic!("{}: reprint does not parse: {e}\n{printed}", path.display())
        });
        assert_eq!(p.without_spans(), q.without_spans(), "{}", path.display());
        assert_eq!(sig, sig2);
        seen += 1;
    }
    assert!(seen >= 4);
}

#[test]
fn library_round_trips() {
    let lib = Library::load();
    let printed = print_program(&lib.program);
    let (q, _) = parse_program(&printed).unwrap();
    assert_eq!(lib.program.without_spans(), q.without_spans());
}

#[test]
fn generated_types_round_trip() {
    let cfg = GenConfig::default().with_seed(42);
    let lib = Library::load();
    let tg = TermGen::new(&cfg, &lib);
    for i in 0..CASES {
        let t = tg.types().gen_type(&mut cfg.rng(201, i));
        assert_eq!(parse_type(&t.to_string()).unwrap(), t, "{t}");
    }
}

#[test]
fn generated_queries_round_trip() {
    let cfg = GenConfig::default().with_seed(42);
    let lib = Library::load();
    let tg = TermGen::new(&cfg, &lib);
    let mut checked = 0;
    for i in 0..CASES {
        let mut rng = cfg.rng(202, i);
        let g = tg.types().gen_env(&mut rng);
        let Ok((e, _)) = tg.gen_typed_expr(&mut rng, &g) else {
            continue;
        };
        let src = print_expr(&e);
        let back = parse_expr_in(&src, &g).unwrap_or_else(|err| panic!("{src}: {err}"));
        assert_eq!(back.without_spans(), e.without_spans(), "{src}");
        checked += 1;
    }
    assert!(
        checked >= CASES * 9 / 10,
        "only {checked} queries generated"
    );
}

#[test]
fn generated_updates_round_trip() {
    let cfg = GenConfig::default().with_seed(42);
    let lib = Library::load();
    let tg = TermGen::new(&cfg, &lib);
    let mut checked = 0;
    for i in 0..CASES {
        let mut rng = cfg.rng(203, i);
        let g = tg.types().gen_env(&mut rng);
        let t = tg.types().gen_type(&mut rng);
        let Ok((s, _)) = tg.gen_typed_stmt(&mut rng, &g, Multiplicity::Plural, &t) else {
            continue;
        };
        let src = print_stmt(&s);
        let back = parse_stmt_in(&src, &g).unwrap_or_else(|err| panic!("{src}: {err}"));
        assert_eq!(back.without_spans(), s.without_spans(), "{src}");
        checked += 1;
    }
    assert!(
        checked >= CASES * 9 / 10,
        "only {checked} updates generated"
    );
}
