mod common;

use common::*;
use maxlin2::algoh::{complete_assignment, derandomized_assignment, h_step, run_h, Budget, HRun, Selector};
use maxlin2::linsystem::{reduce, LinearSystem};
use maxlin2::testkit::brute_force_max_excess;
use proptest::prelude::*;

/// An irreducible system together with a run of H on it.
fn irreducible_run() -> impl Strategy<Value = (LinearSystem, HRun)> {
    (integral_system(10, 20, 6), prop::collection::vec(0usize..32, 0..6), 0i64..12).prop_map(
        |(s, picks, budget)| {
            let (s, _) = reduce(&s);
            let mut plan = Vec::new();
            let mut remaining = s.n_equations();
            for p in picks {
                if remaining == 0 {
                    break;
                }
                plan.push(Selector::Current(p % remaining));
                remaining -= 1;
            }
            // Rule 1 may delete more than the marked equation, so fall back
            // to an unplanned run when an index runs off the end.
            let run = run_h(&s, &plan, Budget::AtLeast(q(budget)))
                .or_else(|_| run_h(&s, &[], Budget::AtLeast(q(budget))))
                .unwrap();
            (s, run)
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn excess_decomposes_under_marked_satisfaction((s, run) in irreducible_run()) {
        let mut checked = 0;
        for x in all_assignments(s.n_vars()) {
            let all_marked = run
                .marks
                .iter()
                .all(|m| x.product(&m.marked_lhs) == m.marked_rhs);
            if !all_marked {
                continue;
            }
            checked += 1;
            prop_assert_eq!(
                s.excess(&x).unwrap(),
                &run.total_marked_weight + run.residual.excess(&x).unwrap()
            );
        }
        prop_assert!(checked > 0);
    }

    #[test]
    fn completion_reaches_marked_weight((s, run) in irreducible_run()) {
        let x = complete_assignment(&run);
        prop_assert!(s.excess(&x).unwrap() >= run.total_marked_weight);
        let marked: maxlin2::Weight = run.marks.iter().map(|m| m.weight.clone()).sum();
        prop_assert_eq!(marked, run.total_marked_weight.clone());
        for m in &run.marks {
            prop_assert!(m.marked_lhs.get(m.marked_var));
            prop_assert!(run.residual.equations().iter().all(|e| !e.lhs.get(m.marked_var)));
        }
    }

    #[test]
    fn conditional_expectations_never_go_negative(s in rational_system(12, 24)) {
        let x = derandomized_assignment(&s);
        prop_assert!(s.excess(&x).unwrap() >= q(0));
    }

    #[test]
    fn step_preserves_conditional_maximum(s in integral_system(9, 16, 6), pick in 0usize..64) {
        let (s, _) = reduce(&s);
        prop_assume!(!s.is_empty());
        let index = pick % s.n_equations();
        let eq = &s.equations()[index];
        let var = eq.lhs.ones_iter().nth(pick % eq.arity()).unwrap();
        let (residual, mark) = h_step(&s, index, var).unwrap();

        let conditional = all_assignments(s.n_vars())
            .filter(|x| x.product(&eq.lhs) == eq.rhs)
            .map(|x| s.excess(&x).unwrap())
            .max()
            .unwrap();
        let (best, _) = brute_force_max_excess(&residual).unwrap();
        prop_assert_eq!(conditional, mark.weight + best);
    }
}
