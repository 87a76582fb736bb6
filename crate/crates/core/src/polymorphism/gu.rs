use alloc::vec::Vec;

use super::{find_polymorphism, FunctionTable, IdentitySpec};
use crate::digraph::{named_digraph, Named};
use crate::hom::{Consistency, SearchBudget};
use crate::pp::tuple_of;

/// Ternary operation on the seven vertices of the marked digraph `GU`,
/// defined on the figure labels `1..=7` by the first matching case:
///
/// 1. majority when at most two values are distinct,
/// 2. `1` when `1` occurs together with `3` or `7`,
/// 3. `2` when `2` occurs together with `6` or `7`,
/// 4. `3` when `3` occurs together with `5` or `7`,
/// 5. `4` when both `4` and `6` occur,
/// 6. `6` when the arguments are exactly `{5, 6, 7}`,
/// 7. the first argument otherwise.
pub fn conservative_majority_gu() -> FunctionTable {
    let mut args = [0usize; 3];
    let table: Vec<usize> = (0..343)
        .map(|i| {
            tuple_of(i, 7, &mut args);
            let [x, y, z] = args.map(|a| a + 1);
            gu_case(x, y, z) - 1
        })
        .collect();
    FunctionTable {
        domain: 7,
        arity: 3,
        table,
    }
}

/// A conservative majority polymorphism of `(G, U)` found by search; the
/// first in the search's deterministic order.
///
/// The case list of [`conservative_majority_gu`] does not preserve every arc
/// of `G`, so solvers use this table instead.
pub fn searched_majority_gu() -> FunctionTable {
    let gu = match named_digraph("GU").expect("built-in") {
        Named::Marked(m) => m,
        Named::Plain(_) => unreachable!("GU carries marks"),
    };
    let budget = SearchBudget {
        max_nodes: 0,
        consistency: Consistency::Arc,
    };
    find_polymorphism(&gu, &IdentitySpec::majority().conservative(true), budget)
        .expect("small indicator")
        .expect("(G, U) has a conservative majority polymorphism")
}

fn gu_case(x: usize, y: usize, z: usize) -> usize {
    let has = |v: usize| x == v || y == v || z == v;
    if x == y || x == z {
        return x;
    }
    if y == z {
        return y;
    }
    if has(1) && (has(3) || has(7)) {
        1
    } else if has(2) && (has(6) || has(7)) {
        2
    } else if has(3) && (has(5) || has(7)) {
        3
    } else if has(4) && has(6) {
        4
    } else if has(5) && has(6) && has(7) {
        6
    } else {
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn listed_values() {
        let f = conservative_majority_gu();
        assert_eq!(f.eval(&[0, 2, 6]) + 1, 1);
        assert_eq!(f.eval(&[4, 5, 6]) + 1, 6);
        assert_eq!(f.eval(&[1, 1, 4]) + 1, 2);
    }

    #[test]
    fn case_list_misses_an_arc() {
        let f = conservative_majority_gu();
        // arcs 2→1, 3→2, 3→4 coordinatewise, but f gives 3 and 1 and 3→1 is no arc
        assert_eq!(f.eval(&[1, 2, 2]) + 1, 3);
        assert_eq!(f.eval(&[0, 1, 3]) + 1, 1);
        let g = named_digraph("GU").unwrap().into_digraph();
        assert!(g.has_arc(1, 0) && g.has_arc(2, 1) && g.has_arc(2, 3));
        assert!(!g.has_arc(2, 0));
    }

    #[test]
    fn searched_table_is_a_conservative_majority() {
        let Named::Marked(gu) = named_digraph("GU").unwrap() else {
            panic!("GU carries marks")
        };
        let f = searched_majority_gu();
        let spec = IdentitySpec::majority().conservative(true);
        assert_eq!(crate::polymorphism::verify_polymorphism(&gu, &f, &spec), Ok(()));
    }
}
