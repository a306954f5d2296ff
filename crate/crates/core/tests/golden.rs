//! Worked examples through the public API. Expected values that are not
//! quoted results are recomputed here by brute force.

use std::collections::BTreeSet;

use flux_core::program::collect_decls;
use flux_core::syntax::{parse_expr_in, parse_stmt_in};
use flux_core::{
    apply_update, check_program, check_signature, conforms, env_subtype, eval_query, filter_label,
    member, parse_expr, parse_program, parse_signature, parse_stmt, parse_type, parse_value,
    subtype, subtype_oracle, syntactic_atoms, synth_expr, synth_for, synth_iter, synth_stmt,
    test_subtype, values_upto, words_upto, Atom, Bounds, Forest, GlobalDecls, Label, Multiplicity,
    OracleVerdict, Runtime, Signature, TestKind, Tree, Type, TypeEnv, ValueBinding, ValueEnv,
};

const TREE: &str = "type Tree = tree[leaf[string] | node[Tree*]];";

const LEAVES: &str = "type Tree = tree[leaf[string] | node[Tree*]];
declare function leaves($x : Tree) : leaf[string]* {
  $x/leaf, for $z in $x/node/* return leaves($z)
};
declare variable $t : Tree;
query leaves($t) : leaf[string]*";

const LEAFUPD: &str = "type Tree = tree[leaf[string] | node[Tree*]];
declare procedure leafupd($x : string) : Tree => Tree {
  iter[children[iter[leaf?children[delete; insert $x]; node?children[iter[leafupd($x)]]]]]
};
update leafupd(\"z\") : Tree => Tree";

const INSERT_AFTER_B: &str = "iter[a?children[iter[b? right[insert c[]]]]]";

fn ty(s: &str) -> Type {
    parse_type(s).unwrap()
}

fn atom(s: &str) -> Atom {
    ty(s).as_atom().unwrap().clone()
}

fn label(s: &str) -> Label {
    Label::new(s).unwrap()
}

fn sig(src: &str) -> Signature {
    parse_signature(src).unwrap()
}

fn val(s: &str) -> Forest {
    parse_value(s).unwrap()
}

fn tree(s: &str) -> Tree {
    val(s).into_single().unwrap()
}

fn atoms(ts: &[&str]) -> BTreeSet<Atom> {
    ts.iter().map(|t| atom(t)).collect()
}

fn no_decls() -> GlobalDecls {
    GlobalDecls::new()
}

#[test]
fn signature_guardedness() {
    assert!(check_signature(&sig("type X = nil[] | cons[a[], X];")).is_empty());
    let bad = check_signature(&sig("type X = () | a[], X;"));
    assert_eq!(bad.len(), 1);
    assert!(bad[0].message.contains('X'), "{}", bad[0]);
    assert!(check_signature(&Signature::new()).is_empty());
}

#[test]
fn membership() {
    let e = Signature::new();
    assert!(member(&e, &Forest::empty(), &Type::Empty).unwrap());
    assert!(member(&e, &val("b[]"), &ty("b[]*,c[]?")).unwrap());
    assert!(!member(&e, &val("\"hi\""), &ty("bool")).unwrap());
    assert!(member(&sig(TREE), &val("tree[leaf[\"x\"]]"), &ty("Tree")).unwrap());
}

#[test]
fn syntactic_atom_sets() {
    let e = Signature::new();
    assert_eq!(
        syntactic_atoms(&e, &ty("b[]*,c[]?")).unwrap(),
        atoms(&["b[]", "c[]"])
    );
    assert!(syntactic_atoms(&e, &Type::Empty).unwrap().is_empty());
    let x = sig("type X = nil[] | cons[a[], X];");
    assert_eq!(
        syntactic_atoms(&x, &ty("X")).unwrap(),
        atoms(&["nil[]", "cons[a[],X]"])
    );
}

/// Every word over `u` of length at most `k`, kept when its value conforms.
fn brute_words(e: &Signature, t: &Type, k: usize, u: &BTreeSet<Atom>) -> BTreeSet<Vec<Atom>> {
    let mut all = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    for _ in 0..k {
        frontier = frontier
            .iter()
            .flat_map(|w: &Vec<Atom>| {
                u.iter().map(move |a| {
                    let mut w = w.clone();
                    w.push(a.clone());
                    w
                })
            })
            .collect();
        all.extend(frontier.clone());
    }
    all.into_iter()
        .filter(|w| {
            // Atoms here are empty elements, so each word has one value.
            let v = Forest(w.iter().map(|a| tree(&a.to_string())).collect());
            member(e, &v, t).unwrap()
        })
        .collect()
}

#[test]
fn bounded_words() {
    let e = Signature::new();
    let a = atoms(&["a[]"]);
    assert_eq!(
        words_upto(&e, &ty("a[]"), 1, &a).unwrap(),
        [vec![atom("a[]")]].into()
    );
    assert_eq!(words_upto(&e, &ty("a[]*"), 2, &a).unwrap().len(), 3);
    let bc = atoms(&["b[]", "c[]"]);
    let t = ty("b[]*,c[]?");
    let got = words_upto(&e, &t, 2, &bc).unwrap();
    assert_eq!(got, brute_words(&e, &t, 2, &bc));
    assert_eq!(got.len(), 5);
}

/// Forests over the label `a` alone, no deeper than `depth` and no wider
/// than `width` at any level.
fn a_forests(depth: usize, width: usize) -> Vec<Forest> {
    if depth == 0 {
        return vec![Forest::empty()];
    }
    let trees: Vec<Tree> = a_forests(depth - 1, width)
        .into_iter()
        .map(|kids| Tree::node(label("a"), kids))
        .collect();
    let mut out = vec![Forest::empty()];
    let mut layer = vec![Forest::empty()];
    for _ in 0..width {
        layer = layer
            .iter()
            .flat_map(|f| {
                trees
                    .iter()
                    .map(move |t| f.clone().concat(Forest::single(t.clone())))
            })
            .collect();
        out.extend(layer.clone());
    }
    out
}

#[test]
fn bounded_values() {
    let e = Signature::new();
    assert_eq!(
        values_upto(&e, &Type::Empty, 2, 2).unwrap(),
        [Forest::empty()].into()
    );
    let brute: BTreeSet<Forest> = a_forests(2, 2)
        .into_iter()
        .filter(|v| member(&e, v, &ty("a[]")).unwrap())
        .collect();
    assert_eq!(values_upto(&e, &ty("a[]"), 2, 2).unwrap(), brute);
    assert_eq!(brute.len(), 1);
    assert_eq!(
        values_upto(&e, &ty("bool"), 1, 1).unwrap(),
        [val("true"), val("false")].into()
    );
}

#[test]
fn subtyping_examples() {
    let e = Signature::new();
    let yes = [
        ("b[]*,c[]?", "(b[]|c[])*"),
        ("a[],a[]", "a[]*"),
        ("leaf[string],(leaf[string]*)*", "leaf[string]*"),
        ("c[]?", "c[]?|d[]*"),
        ("n[b[]]", "n[b[]|c[]]"),
        ("a[(b[],c[])*]", "a[(b[],c[])*]"),
    ];
    for (t1, t2) in yes {
        assert!(subtype(&e, &ty(t1), &ty(t2)).unwrap(), "{t1} <: {t2}");
    }
    assert!(!subtype(&e, &ty("a[],a[]"), &ty("a[]")).unwrap());
    assert!(!subtype(&e, &ty("bool"), &ty("string")).unwrap());
    assert!(subtype(
        &sig(TREE),
        &ty("tree[leaf[string]|node[Tree*]]"),
        &ty("Tree")
    )
    .unwrap());
}

#[test]
fn test_axioms() {
    assert!(test_subtype(&atom("b[]"), &TestKind::Label(label("b"))));
    assert!(test_subtype(&atom("b[]"), &TestKind::Wildcard));
    assert!(!test_subtype(&Atom::Bool, &TestKind::Label(label("b"))));
}

#[test]
fn environment_subtyping() {
    let e = Signature::new();
    let g = |x: &str, t: &str| TypeEnv::new().with_forest(x, ty(t));
    let b = TypeEnv::new().with_tree("x", atom("b[]"));
    assert!(env_subtype(&e, &b, &b).unwrap());
    assert!(env_subtype(&e, &g("x", "b[]"), &g("x", "b[]|c[]")).unwrap());
    assert!(!env_subtype(&e, &g("x", "b[]"), &g("y", "b[]")).unwrap());
}

#[test]
fn oracle_verdicts() {
    let e = Signature::new();
    assert_eq!(
        subtype_oracle(&e, &ty("a[],a[]"), &ty("a[]"), 1, 2).unwrap(),
        OracleVerdict::RefutedWith(val("a[],a[]"))
    );
    assert!(matches!(
        subtype_oracle(&e, &Type::Empty, &Type::Empty, 1, 1).unwrap(),
        OracleVerdict::ConsistentUpTo(_)
    ));
    assert_eq!(
        subtype_oracle(&e, &ty("b[]*,c[]?"), &ty("(b[]|c[])*"), 2, 3).unwrap(),
        OracleVerdict::ConsistentUpTo(Bounds { depth: 2, width: 3 })
    );
}

#[test]
fn filtering() {
    let e = Signature::new();
    assert_eq!(
        filter_label(&e, &ty("n[bool]"), &label("n")).unwrap(),
        ty("n[bool]")
    );
    assert_eq!(
        filter_label(&e, &Type::Empty, &label("n")).unwrap(),
        Type::Empty
    );
    let got = filter_label(&e, &ty("b[]*,c[]?"), &label("b")).unwrap();
    assert_eq!(
        got,
        Type::seq(ty("b[]*"), Type::or(Type::Empty, Type::Empty))
    );
    assert!(subtype(&e, &got, &ty("b[]*")).unwrap() && subtype(&e, &ty("b[]*"), &got).unwrap());
}

#[test]
fn query_synthesis() {
    let e = Signature::new();
    let d = no_decls();
    let g = TypeEnv::new().with_tree("x", atom("a[b[]*,c[]?]"));
    let flagship = parse_expr_in("for $y in $x/child return $y", &g).unwrap();
    assert_eq!(synth_expr(&d, &e, &g, &flagship).unwrap(), ty("b[]*,c[]?"));
    assert_eq!(
        synth_expr(&d, &e, &g, &parse_expr("\"hello\"").unwrap()).unwrap(),
        ty("string")
    );
    assert_eq!(
        synth_expr(&d, &e, &g, &parse_expr("()").unwrap()).unwrap(),
        Type::Empty
    );

    let y = TypeEnv::new().with_tree("y", atom("b[]"));
    let var = parse_expr_in("$y", &y).unwrap();
    assert_eq!(
        synth_for(&d, &e, &g, "y", &ty("b[]*,c[]?"), &var).unwrap(),
        ty("b[]*,c[]?")
    );
    assert_eq!(
        synth_for(&d, &e, &g, "y", &Type::Empty, &var).unwrap(),
        Type::Empty
    );
    let kids = parse_expr_in("$y/child", &y).unwrap();
    assert_eq!(
        synth_for(&d, &e, &g, "y", &ty("b[]|c[]"), &kids).unwrap(),
        Type::or(Type::Empty, Type::Empty)
    );
}

#[test]
fn query_programs() {
    let (p, s) = parse_program(LEAVES).unwrap();
    assert!(check_program(&s, &p).is_ok());
    let (p, s) = parse_program("declare function f() : string { true }; query () : ()").unwrap();
    let r = check_program(&s, &p);
    assert_eq!(r.diagnostics.len(), 1);
    assert_eq!(r.diagnostics[0].rule.as_str(), "q-ascription");
    let (p, s) = parse_program("query () : ()").unwrap();
    assert!(check_program(&s, &p).is_ok());
    assert!(s.is_empty());
}

#[test]
fn update_synthesis() {
    let e = Signature::new();
    let d = no_decls();
    let g = TypeEnv::new();
    let insert_after = parse_stmt(INSERT_AFTER_B).unwrap();
    let plural = Multiplicity::Plural;
    let single = Multiplicity::Singular;
    let synth = |a, t: &str, s: &str| synth_stmt(&d, &e, &g, a, &ty(t), &parse_stmt(s).unwrap());
    assert_eq!(
        synth_stmt(&d, &e, &g, plural, &ty("a[b[]*,c[]],d[]"), &insert_after).unwrap(),
        ty("a[(b[],c[])*,c[]],d[]")
    );
    assert_eq!(synth(plural, "b[]*", "skip").unwrap(), ty("b[]*"));
    assert_eq!(synth(single, "m[b[]]", "rename n").unwrap(), ty("n[b[]]"));
    assert_eq!(synth(single, "c[]", "b?skip").unwrap(), ty("c[]"));
    assert_eq!(synth(plural, "()", "insert c[]").unwrap(), ty("c[]"));

    let right = parse_stmt("b?right[insert c[]]").unwrap();
    assert_eq!(
        synth_iter(&d, &e, &g, &ty("b[]*,c[]"), &right).unwrap(),
        ty("(b[],c[])*,c[]")
    );
    assert_eq!(
        synth_iter(&d, &e, &g, &Type::Empty, &right).unwrap(),
        Type::Empty
    );
}

#[test]
fn recursive_procedure_iteration() {
    let (p, s) = parse_program(LEAFUPD).unwrap();
    let (decls, diags) = collect_decls(&p);
    assert!(diags.is_empty());
    let g = TypeEnv::new().with_forest("x", ty("string"));
    let call = parse_stmt_in("leafupd($x)", &g).unwrap();
    assert_eq!(
        synth_iter(&decls, &s, &g, &ty("Tree*"), &call).unwrap(),
        ty("Tree*")
    );
}

#[test]
fn update_programs() {
    let (p, s) = parse_program(LEAFUPD).unwrap();
    assert!(check_program(&s, &p).is_ok());
    let (p, s) = parse_program(&format!(
        "update {INSERT_AFTER_B} : a[b[]*,c[]],d[] => a[(b[],c[])*,c[]],d[]"
    ))
    .unwrap();
    assert!(check_program(&s, &p).is_ok());
    for bad in [
        "update skip : b[] => c[]",
        "declare procedure p() : b[] => () { skip }; update skip : () => ()",
    ] {
        let (p, s) = parse_program(bad).unwrap();
        assert!(!check_program(&s, &p).is_ok(), "{bad}");
    }
    let (p, s) = parse_program("update delete : a[]* => ()").unwrap();
    assert!(check_program(&s, &p).is_ok());
    let (p, s) = parse_program("update skip : b[] => b[]*").unwrap();
    assert!(check_program(&s, &p).is_ok());
}

#[test]
fn evaluation() {
    let rt = Runtime::default();
    let env = ValueEnv::new().with_tree("x", tree("a[b[],c[]]"));
    let g = TypeEnv::new().with_tree("x", atom("a[b[],c[]]"));
    assert_eq!(
        eval_query(&rt, &env, &parse_expr_in("$x/child", &g).unwrap()).unwrap(),
        val("b[],c[]")
    );
    let sel = parse_expr("(b[], c[], b[])::b").unwrap();
    assert_eq!(
        eval_query(&rt, &ValueEnv::new(), &sel).unwrap(),
        val("b[],b[]")
    );

    let (p, _) = parse_program(LEAVES).unwrap();
    let rt = Runtime::from_program(&p);
    let env =
        ValueEnv::new().with_tree("t", tree("tree[node[tree[leaf[\"u\"]],tree[leaf[\"v\"]]]]"));
    let call = parse_expr_in("leaves($t)", &TypeEnv::new().with_tree("t", atom("tree[]"))).unwrap();
    assert_eq!(
        eval_query(&rt, &env, &call).unwrap(),
        val("leaf[\"u\"],leaf[\"v\"]")
    );
}

#[test]
fn update_application() {
    let rt = Runtime::default();
    let env = ValueEnv::new();
    let insert_after = parse_stmt(INSERT_AFTER_B).unwrap();
    assert_eq!(
        apply_update(&rt, &env, &val("a[b[],b[],c[]],d[]"), &insert_after).unwrap(),
        val("a[b[],c[],b[],c[],c[]],d[]")
    );
    let v = val("x[true],\"s\"");
    assert_eq!(
        apply_update(&rt, &env, &v, &parse_stmt("skip").unwrap()).unwrap(),
        v
    );
    assert_eq!(
        apply_update(&rt, &env, &val("m[b[]]"), &parse_stmt("rename n").unwrap()).unwrap(),
        val("n[b[]]")
    );
}

#[test]
fn environment_conformance() {
    let e = Signature::new();
    let env = ValueEnv::new().with_tree("x", tree("b[]"));
    assert!(conforms(&e, &env, &TypeEnv::new().with_tree("x", atom("b[]"))).unwrap());
    let empty = ValueEnv::new().with_forest("x", Forest::empty());
    assert!(!conforms(&e, &empty, &TypeEnv::new().with_forest("x", ty("a[]"))).unwrap());
    let t = ValueEnv::new().with_forest("x", val("tree[leaf[\"x\"]]"));
    assert!(conforms(&sig(TREE), &t, &TypeEnv::new().with_forest("x", ty("Tree"))).unwrap());
    assert!(matches!(t.get("x"), Some(ValueBinding::Forest(_))));
}

#[test]
fn syntax_error_offset() {
    let err = parse_program("query (").unwrap_err();
    assert_eq!(err.offset(), 7);
}
