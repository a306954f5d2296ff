//! Every type up to a given AST size over a label set and `()`.

use flux_core::{Label, Type};

/// All types with `size()` ≤ `max_size` built from `()`, `n[t]` for the
/// given labels, `|`, `,` and `*`. Ordered by size, then construction order.
pub fn types_upto(labels: &[Label], max_size: usize) -> Vec<Type> {
    let mut by_size: Vec<Vec<Type>> = vec![Vec::new()];
    for s in 1..=max_size {
        let mut out = Vec::new();
        if s == 1 {
            out.push(Type::Empty);
        } else {
            for t in &by_size[s - 1] {
                for n in labels {
                    out.push(Type::element(n.clone(), t.clone()));
                }
                out.push(Type::star(t.clone()));
            }
            for k in 1..s - 1 {
                for l in &by_size[k] {
                    for r in &by_size[s - 1 - k] {
                        out.push(Type::or(l.clone(), r.clone()));
                        out.push(Type::seq(l.clone(), r.clone()));
                    }
                }
            }
        }
        by_size.push(out);
    }
    by_size.into_iter().flatten().collect()
}
