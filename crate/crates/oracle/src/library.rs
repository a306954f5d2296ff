//! A fixed set of declarations that generated terms may call.

use flux_core::syntax::parse_program;
use flux_core::{check_program, GlobalDecls, Program, Runtime, Signature};

pub const LIBRARY_SOURCE: &str = r#"
type Tree = tree[leaf[string] | node[Tree*]];

declare function leaves($x : Tree) : leaf[string]* {
  $x/leaf, for $z in $x/node/* return leaves($z)
};
declare function wrap($x : (a[] | b[])*) : w[(a[] | b[])*] { w[$x] };
declare function yes() : bool { true };
declare function pick($c : bool, $x : a[]*) : a[]* { if $c then $x else () };

declare procedure clear() : (a[] | b[])* => () { iter[delete] };
declare procedure stamp($n : string) : a[]* => a[]*, s[string] {
  iter[skip]; right[insert s[$n]]
};
declare procedure grow() : Tree => Tree {
  iter[tree?children[iter[node?children[right[insert tree[leaf["g"]]]]]]]
};

query () : ()
"#;

/// The parsed library with its signature, headers and runtime.
pub struct Library {
    pub program: Program,
    pub sig: Signature,
    pub decls: GlobalDecls,
    pub runtime: Runtime,
}

impl Library {
    pub fn load() -> Library {
        let (program, sig) = parse_program(LIBRARY_SOURCE).expect("library parses");
        let report = check_program(&sig, &program);
        assert!(
            report.is_ok(),
            "library does not typecheck: {:?}",
            report.diagnostics
        );
        let runtime = Runtime::from_program(&program);
        let decls = runtime.decls().clone();
        Library {
            program,
            sig,
            decls,
            runtime,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn library_loads() {
        let lib = Library::load();
        assert!(lib.decls.function("leaves").is_some());
        assert!(lib.decls.procedure("grow").is_some());
    }
}
