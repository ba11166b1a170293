//! Algorithm H: mark an equation, eliminate one of its variables from every
//! other equation by symmetric difference, re-merge duplicates, repeat.
//!
//! Under the assumption that every marked equation is satisfied, the residual
//! system has the same excess as the input minus the marked weight. The
//! witness is rebuilt by fixing the residual variables first (method of
//! conditional expectations, which never goes below excess 0) and then
//! back-substituting the marked variables in reverse marking order.

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::gf2::BitVector;
use crate::linsystem::{
    self, merge_equal_lhs, Assignment, Equation, LinearSystem, Sign, TransformLog,
    TransformRecord, Weight,
};

/// Stable identity of an equation across XOR rewrites: its index in the
/// system handed to [`run_h`].
pub type EqId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HError {
    #[error("equation index {index} out of range ({len} equations)")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("variable {var} does not occur in equation {index}")]
    VarNotInEquation { index: usize, var: usize },
    #[error("equations {first} and {second} share a left-hand side; apply Rule 1 first")]
    DuplicateLhs { first: usize, second: usize },
    #[error("Algorithm H requires an irreducible system")]
    NotIrreducible,
    #[error("planned equation {id} was merged away before it could be marked")]
    SelectorDeleted { id: EqId },
    #[error("planned equation {id} does not exist")]
    UnknownSelector { id: EqId },
}

/// One marked equation, captured at the moment of marking.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkRecord {
    pub marked_lhs: BitVector,
    pub marked_rhs: Sign,
    pub marked_var: usize,
    pub weight: Weight,
    pub id: EqId,
}

impl MarkRecord {
    pub fn to_record(&self) -> TransformRecord {
        TransformRecord::HStep {
            lhs: self.marked_lhs.clone(),
            rhs: self.marked_rhs,
            var: self.marked_var,
        }
    }
}

/// The outcome of a run of Algorithm H.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HRun {
    pub marks: Vec<MarkRecord>,
    pub residual: LinearSystem,
    pub total_marked_weight: Weight,
}

impl HRun {
    /// Log that lifts a residual assignment back to the input variables.
    pub fn log(&self) -> TransformLog {
        let mut log = TransformLog::new();
        for m in &self.marks {
            log.push(m.to_record());
        }
        log
    }
}

/// Which equation to mark next.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Selector {
    /// The equation that started out at this index of the input system.
    Original(EqId),
    /// Whatever equation currently sits at this position.
    Current(usize),
}

/// When Algorithm H stops.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Budget {
    /// Stop once the marked weight reaches this value, using the default
    /// choice after the plan runs out.
    AtLeast(Weight),
    /// Mark exactly the planned equations (or until the system empties).
    Unbounded,
}

/// Equations paired with their stable ids.
#[derive(Debug, Clone)]
struct HState {
    n_vars: usize,
    names: Vec<String>,
    equations: Vec<Equation>,
    ids: Vec<EqId>,
}

impl HState {
    fn new(s: &LinearSystem) -> Self {
        Self {
            n_vars: s.n_vars(),
            names: s.var_names().to_vec(),
            equations: s.equations().to_vec(),
            ids: (0..s.n_equations()).collect(),
        }
    }

    fn into_system(self) -> LinearSystem {
        LinearSystem::from_parts(self.n_vars, self.equations, self.names)
    }

    /// Steps 2-4 for the equation at `pos`, eliminating `var`.
    fn step(&mut self, pos: usize, var: usize) -> (MarkRecord, TransformLog) {
        let marked = self.equations.remove(pos);
        let id = self.ids.remove(pos);
        debug_assert!(marked.lhs.get(var));
        for eq in self.equations.iter_mut().filter(|e| e.lhs.get(var)) {
            eq.lhs.xor_assign(&marked.lhs);
            eq.rhs = eq.rhs * marked.rhs;
            assert!(
                !eq.lhs.is_zero(),
                "symmetric difference produced an empty equation; input had duplicate left-hand sides"
            );
        }
        let merged = merge_equal_lhs(std::mem::take(&mut self.equations));
        self.ids = merged.sources.iter().map(|&i| self.ids[i]).collect();
        self.equations = merged.equations;
        let mark = MarkRecord {
            marked_lhs: marked.lhs,
            marked_rhs: marked.rhs,
            marked_var: var,
            weight: marked.weight,
            id,
        };
        (mark, merged.log)
    }
}

fn check_distinct_lhs(s: &LinearSystem) -> Result<(), HError> {
    let mut seen = std::collections::HashMap::new();
    for (i, e) in s.equations().iter().enumerate() {
        if let Some(&first) = seen.get(&e.lhs) {
            return Err(HError::DuplicateLhs { first, second: i });
        }
        seen.insert(&e.lhs, i);
    }
    Ok(())
}

/// One iteration of Algorithm H: marks equation `eq_index`, eliminates `var`
/// from the rest of the system and re-applies Rule 1.
pub fn h_step(
    s: &LinearSystem,
    eq_index: usize,
    var: usize,
) -> Result<(LinearSystem, MarkRecord), HError> {
    let (residual, mark, _) = h_step_logged(s, eq_index, var)?;
    Ok((residual, mark))
}

/// [`h_step`] that also returns the Rule 1 records of step 4.
pub(crate) fn h_step_logged(
    s: &LinearSystem,
    eq_index: usize,
    var: usize,
) -> Result<(LinearSystem, MarkRecord, TransformLog), HError> {
    let len = s.n_equations();
    if eq_index >= len {
        return Err(HError::IndexOutOfRange {
            index: eq_index,
            len,
        });
    }
    let lhs = &s.equations()[eq_index].lhs;
    if var >= lhs.len() || !lhs.get(var) {
        return Err(HError::VarNotInEquation {
            index: eq_index,
            var,
        });
    }
    check_distinct_lhs(s)?;
    let mut state = HState::new(s);
    let (mark, log) = state.step(eq_index, var);
    Ok((state.into_system(), mark, log))
}

/// Runs Algorithm H on an irreducible system following `plan`.
///
/// The marked variable is always the lowest index of the chosen equation.
/// With [`Budget::AtLeast`], the first current equation is marked once the
/// plan is exhausted; with [`Budget::Unbounded`] the run ends with the plan.
pub fn run_h(s: &LinearSystem, plan: &[Selector], budget: Budget) -> Result<HRun, HError> {
    if !linsystem::is_irreducible(s) {
        return Err(HError::NotIrreducible);
    }
    let mut state = HState::new(s);
    let mut marks = Vec::new();
    let mut total = Weight::zero();
    let mut planned = plan.iter();

    while !state.equations.is_empty() {
        if let Budget::AtLeast(limit) = &budget {
            if &total >= limit {
                break;
            }
        }
        let pos = match planned.next() {
            Some(Selector::Current(pos)) => {
                if *pos >= state.equations.len() {
                    return Err(HError::IndexOutOfRange {
                        index: *pos,
                        len: state.equations.len(),
                    });
                }
                *pos
            }
            Some(Selector::Original(id)) => {
                if *id >= s.n_equations() {
                    return Err(HError::UnknownSelector { id: *id });
                }
                state
                    .ids
                    .iter()
                    .position(|x| x == id)
                    .ok_or(HError::SelectorDeleted { id: *id })?
            }
            None => match budget {
                Budget::Unbounded => break,
                Budget::AtLeast(_) => 0,
            },
        };
        let var = state.equations[pos]
            .lhs
            .first_one()
            .expect("stored equations are nonempty");
        let (mark, _) = state.step(pos, var);
        total += &mark.weight;
        marks.push(mark);
    }

    Ok(HRun {
        marks,
        residual: state.into_system(),
        total_marked_weight: total,
    })
}

/// Fixes variables in index order, each to the sign that maximizes the
/// conditional expectation of the excess. An equation only contributes once
/// its highest-index variable is fixed, so the result has excess `≥ 0`.
pub fn derandomized_assignment(s: &LinearSystem) -> Assignment {
    let n = s.n_vars();
    let (weights, _) = linsystem::scaled_signed_weights(s);
    let mut closing: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (j, e) in s.equations().iter().enumerate() {
        let last = e.lhs.last_one().expect("stored equations are nonempty");
        closing[last].push(j);
    }

    let mut y = BitVector::zeros(n);
    for (i, eqs) in closing.iter().enumerate() {
        // Gain of x_i = +1 over x_i = −1 is twice this sum.
        let plus: BigInt = eqs
            .iter()
            .map(|&j| {
                let e = &s.equations()[j];
                if e.lhs.dot(&y) {
                    -weights[j].clone()
                } else {
                    weights[j].clone()
                }
            })
            .sum();
        if plus < BigInt::zero() {
            y.set(i, true);
        }
    }
    Assignment::from_bits(&y)
}

/// Builds an assignment of the H input with excess at least the marked
/// weight.
pub fn complete_assignment(run: &HRun) -> Assignment {
    let residual = derandomized_assignment(&run.residual);
    linsystem::lift_assignment(&run.log(), &residual)
        .expect("H never changes the number of variables")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linsystem::{excess, reduce, Sign::*};

    fn sys(n: usize, eqs: &[(&[usize], Sign, i64)]) -> LinearSystem {
        LinearSystem::new(
            n,
            eqs.iter()
                .map(|(v, b, w)| Equation::with_vars(n, v, *b, *w))
                .collect(),
        )
        .unwrap()
    }

    fn w(v: i64) -> Weight {
        Weight::from_integer(v.into())
    }

    #[test]
    fn step_rewrites_by_symmetric_difference() {
        let s = sys(3, &[(&[0, 1], Plus, 1), (&[0, 2], Minus, 1)]);
        let (res, mark) = h_step(&s, 0, 0).unwrap();
        assert_eq!(res, sys(3, &[(&[1, 2], Minus, 1)]));
        assert_eq!(mark.marked_var, 0);
        assert_eq!(mark.weight, w(1));
    }

    #[test]
    fn step_leaves_untouched_equations() {
        let s = sys(2, &[(&[0], Plus, 2), (&[1], Plus, 1)]);
        let (res, _) = h_step(&s, 0, 0).unwrap();
        assert_eq!(res, sys(2, &[(&[1], Plus, 1)]));
    }

    #[test]
    fn step_cancels_through_rule1() {
        // Marking x1x2 = +1 on x2 turns x2 = +1 into x1 = +1, which cancels
        // against x1 = −1.
        let s = sys(2, &[(&[0, 1], Plus, 1), (&[1], Plus, 1), (&[0], Minus, 1)]);
        let (res, _) = h_step(&s, 0, 1).unwrap();
        assert!(res.is_empty());
    }

    #[test]
    fn step_errors() {
        let s = sys(2, &[(&[0], Plus, 1)]);
        assert_eq!(
            h_step(&s, 1, 0),
            Err(HError::IndexOutOfRange { index: 1, len: 1 })
        );
        assert_eq!(
            h_step(&s, 0, 1),
            Err(HError::VarNotInEquation { index: 0, var: 1 })
        );
        let dup = sys(2, &[(&[0], Plus, 1), (&[0], Minus, 2)]);
        assert_eq!(
            h_step(&dup, 0, 0),
            Err(HError::DuplicateLhs { first: 0, second: 1 })
        );
    }

    #[test]
    fn zero_budget_marks_nothing() {
        let s = sys(1, &[(&[0], Plus, 3)]);
        let run = run_h(&s, &[], Budget::AtLeast(w(0))).unwrap();
        assert!(run.marks.is_empty());
        assert_eq!(run.residual, s);
    }

    #[test]
    fn heavy_mark_exhausts_budget() {
        let s = sys(1, &[(&[0], Plus, 3)]);
        let run = run_h(&s, &[], Budget::AtLeast(w(2))).unwrap();
        assert_eq!(run.marks.len(), 1);
        assert!(run.residual.is_empty());
        assert_eq!(run.total_marked_weight, w(3));
    }

    #[test]
    fn planned_pair_on_three_equations() {
        // {x1x2 = 1, x2x3 = 1, x1 = 1}; {x2x3, x1} is sum-free in its rows.
        let s = sys(3, &[(&[0, 1], Plus, 1), (&[1, 2], Plus, 1), (&[0], Plus, 1)]);
        let plan = [Selector::Original(1), Selector::Original(2)];
        let run = run_h(&s, &plan, Budget::Unbounded).unwrap();
        assert_eq!(run.marks.len(), 2);
        assert_eq!(run.total_marked_weight, w(2));
        let x = complete_assignment(&run);
        assert!(excess(&s, &x).unwrap() >= w(2));
    }

    #[test]
    fn run_requires_irreducible_input() {
        let s = sys(2, &[(&[0, 1], Plus, 1)]);
        assert_eq!(
            run_h(&s, &[], Budget::Unbounded),
            Err(HError::NotIrreducible)
        );
        let (r, _) = reduce(&s);
        assert!(run_h(&r, &[], Budget::Unbounded).is_ok());
    }

    #[test]
    fn merged_selector_is_reported() {
        // Marking x1 rewrites x1x2 into x2, which merges into the later x2.
        let s = sys(2, &[(&[0], Plus, 1), (&[1], Plus, 1), (&[0, 1], Plus, 1)]);
        let plan = [Selector::Original(0), Selector::Original(2)];
        assert_eq!(
            run_h(&s, &plan, Budget::Unbounded),
            Err(HError::SelectorDeleted { id: 2 })
        );
        assert_eq!(
            run_h(&s, &[Selector::Original(7)], Budget::Unbounded),
            Err(HError::UnknownSelector { id: 7 })
        );
    }

    #[test]
    fn completion_examples() {
        let s = sys(1, &[(&[0], Plus, 1)]);
        let run = run_h(&s, &[], Budget::AtLeast(w(1))).unwrap();
        assert!(run.residual.is_empty());
        let x = complete_assignment(&run);
        assert_eq!(x, Assignment::new(vec![Plus]));
        assert_eq!(excess(&s, &x).unwrap(), w(1));

        let residual_only = HRun {
            marks: vec![],
            residual: sys(2, &[(&[0, 1], Plus, 1)]),
            total_marked_weight: w(0),
        };
        let x = complete_assignment(&residual_only);
        assert_eq!(x, Assignment::new(vec![Plus, Plus]));
    }

    #[test]
    fn derandomized_assignment_is_nonnegative_on_adversarial_signs() {
        let s = sys(
            3,
            &[
                (&[0], Minus, 5),
                (&[0, 1], Minus, 2),
                (&[1, 2], Plus, 3),
                (&[0, 1, 2], Minus, 7),
            ],
        );
        let x = derandomized_assignment(&s);
        assert!(excess(&s, &x).unwrap() >= w(0));
    }
}
