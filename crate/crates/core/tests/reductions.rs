mod common;

use std::collections::HashSet;

use common::*;
use maxlin2::linsystem::{apply_rule1, apply_rule2, is_irreducible, lift_assignment, reduce, LinearSystem};
use maxlin2::testkit::brute_force_max_excess;
use proptest::prelude::*;

fn max_excess(s: &LinearSystem) -> maxlin2::Weight {
    brute_force_max_excess(s).unwrap().0
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn reduce_preserves_max_excess(s in integral_system(12, 24, 8)) {
        let (red, _) = reduce(&s);
        prop_assert_eq!(max_excess(&s), max_excess(&red));
    }

    #[test]
    fn reduce_preserves_max_excess_with_rational_weights(s in rational_system(8, 16)) {
        let (red, _) = reduce(&s);
        prop_assert_eq!(max_excess(&s), max_excess(&red));
    }

    #[test]
    fn reduce_is_idempotent(s in integral_system(12, 24, 8)) {
        let (once, _) = reduce(&s);
        let (twice, log) = reduce(&once);
        prop_assert!(is_irreducible(&once));
        prop_assert_eq!(&once, &twice);
        prop_assert!(log.is_empty());
    }

    #[test]
    fn lifting_reproduces_reduced_excess(s in rational_system(9, 16)) {
        let (red, log) = reduce(&s);
        for x in all_assignments(red.n_vars()) {
            let lifted = lift_assignment(&log, &x).unwrap();
            prop_assert_eq!(lifted.len(), s.n_vars());
            prop_assert_eq!(s.excess(&lifted).unwrap(), red.excess(&x).unwrap());
        }
    }

    #[test]
    fn rule1_leaves_distinct_lhs_and_never_adds_weight(s in integral_system(8, 20, 5)) {
        let (out, _) = apply_rule1(&s);
        let mut seen = HashSet::new();
        prop_assert!(out.equations().iter().all(|e| seen.insert(e.lhs.clone())));
        prop_assert!(out.total_weight() <= s.total_weight());
        for x in all_assignments(s.n_vars()) {
            prop_assert_eq!(out.excess(&x).unwrap(), s.excess(&x).unwrap());
        }
    }

    #[test]
    fn rule2_reaches_full_column_rank(s in integral_system(10, 16, 5)) {
        let (out, _) = apply_rule2(&s);
        prop_assert_eq!(out.n_vars(), s.rank());
        prop_assert_eq!(out.rank(), out.n_vars());
        prop_assert_eq!(max_excess(&out), max_excess(&s));
    }

    #[test]
    fn excess_and_total_weight_share_parity(s in integral_system(8, 16, 9)) {
        let w = s.total_weight().to_integer();
        for x in all_assignments(s.n_vars()) {
            let e = s.excess(&x).unwrap().to_integer();
            prop_assert_eq!((&w - e) % 2, 0.into());
        }
    }
}
