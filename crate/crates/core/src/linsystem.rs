//! Weighted systems of equations `Π_{i∈I} x_i = b` over `x_i ∈ {−1, +1}`.
//!
//! A variable `x_i` is identified with the F2 coordinate `y_i` through
//! `x_i = (−1)^{y_i}`, so an equation's left-hand side is a nonzero
//! [`BitVector`] and the product over `I` is `(−1)^{⟨lhs, y⟩}`.
//!
//! The two reduction rules live here together with the [`TransformLog`]
//! that lets a witness for a reduced system be carried back to the original
//! variables.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Mul, Neg};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use thiserror::Error;

use crate::gf2::{self, BitMatrix, BitVector};

/// Exact equation weight.
pub type Weight = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SystemError {
    #[error("equation {index} has {found} coordinates, system has {expected} variables")]
    DimensionMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("equation {index} has an empty left-hand side")]
    EmptyEquation { index: usize },
    #[error("equation {index} has non-positive weight {weight}")]
    NonPositiveWeight { index: usize, weight: Weight },
    #[error("assignment has {found} values, system has {expected} variables")]
    AssignmentLength { expected: usize, found: usize },
    #[error("{expected} variable names required, {found} given")]
    NameCount { expected: usize, found: usize },
}

/// A value in `{−1, +1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn from_parity(odd: bool) -> Self {
        if odd {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    /// F2 image: `+1 ↦ 0`, `−1 ↦ 1`.
    pub fn is_minus(self) -> bool {
        self == Sign::Minus
    }

    pub fn to_i32(self) -> i32 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn of(value: &Weight) -> Option<Sign> {
        if value.is_positive() {
            Some(Sign::Plus)
        } else if value.is_negative() {
            Some(Sign::Minus)
        } else {
            None
        }
    }

    pub fn apply(self, w: &Weight) -> Weight {
        match self {
            Sign::Plus => w.clone(),
            Sign::Minus => -w.clone(),
        }
    }
}

impl Mul for Sign {
    type Output = Sign;

    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: Sign) -> Sign {
        Sign::from_parity(self.is_minus() ^ rhs.is_minus())
    }
}

impl Neg for Sign {
    type Output = Sign;

    fn neg(self) -> Sign {
        self * Sign::Minus
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+1",
            Sign::Minus => "-1",
        })
    }
}

/// One weighted equation `Π_{i∈lhs} x_i = rhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Equation {
    pub lhs: BitVector,
    pub rhs: Sign,
    pub weight: Weight,
}

impl Equation {
    pub fn new(lhs: BitVector, rhs: Sign, weight: Weight) -> Self {
        Self { lhs, rhs, weight }
    }

    /// Convenience constructor with an integral weight over `n` variables.
    pub fn with_vars(n: usize, vars: &[usize], rhs: Sign, weight: i64) -> Self {
        Self::new(
            BitVector::from_indices(n, vars.iter().copied()),
            rhs,
            Weight::from_integer(weight.into()),
        )
    }

    /// `c_j = w_j · b_j`.
    pub fn signed_weight(&self) -> Weight {
        self.rhs.apply(&self.weight)
    }

    pub fn arity(&self) -> usize {
        self.lhs.count_ones()
    }

    pub fn is_satisfied(&self, x: &Assignment) -> bool {
        x.product(&self.lhs) == self.rhs
    }
}

/// A point of `{−1, +1}^n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Assignment(Vec<Sign>);

impl Assignment {
    pub fn new(values: Vec<Sign>) -> Self {
        Self(values)
    }

    pub fn all_plus(n: usize) -> Self {
        Self(vec![Sign::Plus; n])
    }

    /// Reads `x_i = (−1)^{y_i}`.
    pub fn from_bits(y: &BitVector) -> Self {
        Self((0..y.len()).map(|i| Sign::from_parity(y.get(i))).collect())
    }

    pub fn to_bits(&self) -> BitVector {
        BitVector::from_indices(
            self.0.len(),
            self.0
                .iter()
                .enumerate()
                .filter(|(_, s)| s.is_minus())
                .map(|(i, _)| i),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[Sign] {
        &self.0
    }

    pub fn get(&self, i: usize) -> Sign {
        self.0[i]
    }

    pub fn set(&mut self, i: usize, s: Sign) {
        self.0[i] = s;
    }

    /// `Π_{i∈vars} x_i`.
    pub fn product(&self, vars: &BitVector) -> Sign {
        Sign::from_parity(vars.ones_iter().filter(|&i| self.0[i].is_minus()).count() % 2 == 1)
    }

    pub fn negated(&self) -> Assignment {
        Assignment(self.0.iter().map(|&s| -s).collect())
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// A weighted MaxLin2 system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearSystem {
    n_vars: usize,
    equations: Vec<Equation>,
    var_names: Vec<String>,
}

fn default_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}

impl LinearSystem {
    pub fn new(n_vars: usize, equations: Vec<Equation>) -> Result<Self, SystemError> {
        for (index, eq) in equations.iter().enumerate() {
            if eq.lhs.len() != n_vars {
                return Err(SystemError::DimensionMismatch {
                    index,
                    expected: n_vars,
                    found: eq.lhs.len(),
                });
            }
            if eq.lhs.is_zero() {
                return Err(SystemError::EmptyEquation { index });
            }
            if !eq.weight.is_positive() {
                return Err(SystemError::NonPositiveWeight {
                    index,
                    weight: eq.weight.clone(),
                });
            }
        }
        Ok(Self {
            n_vars,
            equations,
            var_names: default_names(n_vars),
        })
    }

    pub fn empty(n_vars: usize) -> Self {
        Self {
            n_vars,
            equations: Vec::new(),
            var_names: default_names(n_vars),
        }
    }

    pub fn with_var_names(mut self, names: Vec<String>) -> Result<Self, SystemError> {
        if names.len() != self.n_vars {
            return Err(SystemError::NameCount {
                expected: self.n_vars,
                found: names.len(),
            });
        }
        self.var_names = names;
        Ok(self)
    }

    /// Callers guarantee the invariants (used by the reduction rules, which
    /// preserve them by construction).
    pub(crate) fn from_parts(n_vars: usize, equations: Vec<Equation>, var_names: Vec<String>) -> Self {
        debug_assert!(equations
            .iter()
            .all(|e| e.lhs.len() == n_vars && !e.lhs.is_zero() && e.weight.is_positive()));
        debug_assert_eq!(var_names.len(), n_vars);
        Self {
            n_vars,
            equations,
            var_names,
        }
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn n_equations(&self) -> usize {
        self.equations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.equations.is_empty()
    }

    pub fn equations(&self) -> &[Equation] {
        &self.equations
    }

    pub fn var_names(&self) -> &[String] {
        &self.var_names
    }

    pub fn total_weight(&self) -> Weight {
        self.equations.iter().map(|e| e.weight.clone()).sum()
    }

    pub fn min_weight(&self) -> Option<Weight> {
        self.equations.iter().map(|e| e.weight.clone()).min()
    }

    /// Largest number of variables in one equation (0 for the empty system).
    pub fn max_arity(&self) -> usize {
        self.equations.iter().map(Equation::arity).max().unwrap_or(0)
    }

    pub fn has_integral_weights(&self) -> bool {
        self.equations.iter().all(|e| e.weight.is_integer())
    }

    /// The matrix `A` with one row per equation.
    pub fn matrix(&self) -> BitMatrix {
        BitMatrix::from_rows(
            self.n_vars,
            self.equations.iter().map(|e| e.lhs.clone()).collect(),
        )
        .expect("equation lengths are checked on construction")
    }

    pub fn rank(&self) -> usize {
        gf2::rank(&self.matrix())
    }

    /// Satisfied weight minus falsified weight under `x`.
    pub fn excess(&self, x: &Assignment) -> Result<Weight, SystemError> {
        if x.len() != self.n_vars {
            return Err(SystemError::AssignmentLength {
                expected: self.n_vars,
                found: x.len(),
            });
        }
        let y = x.to_bits();
        Ok(self
            .equations
            .iter()
            .map(|e| {
                let satisfied = e.lhs.dot(&y) == e.rhs.is_minus();
                if satisfied {
                    e.weight.clone()
                } else {
                    -e.weight.clone()
                }
            })
            .sum())
    }
}

/// Free-function form of [`LinearSystem::excess`].
pub fn excess(s: &LinearSystem, x: &Assignment) -> Result<Weight, SystemError> {
    s.excess(x)
}

/// One replayable step of a reduction or of Algorithm H.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TransformRecord {
    /// Equations sharing `lhs` were merged. `result` is `None` when they
    /// cancelled out.
    Rule1Merge {
        lhs: BitVector,
        merged: Vec<(Sign, Weight)>,
        result: Option<(Sign, Weight)>,
    },
    /// Variables outside a column basis were dropped. `kept[j]` is the
    /// pre-deletion index of new variable `j`.
    Rule2Delete {
        n_before: usize,
        kept: Vec<usize>,
        deleted: Vec<usize>,
    },
    /// An equation was marked and `var` eliminated from all others.
    HStep {
        lhs: BitVector,
        rhs: Sign,
        var: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LiftError {
    #[error("record {record} expects an assignment of length {expected}, found {found}")]
    DimensionMismatch {
        record: usize,
        expected: usize,
        found: usize,
    },
}

/// Ordered record of transformations applied to a system.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TransformLog {
    records: Vec<TransformRecord>,
}

impl TransformLog {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn records(&self) -> &[TransformRecord] {
        &self.records
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn push(&mut self, record: TransformRecord) {
        self.records.push(record);
    }

    pub fn extend(&mut self, other: TransformLog) {
        self.records.extend(other.records);
    }

    pub fn then(mut self, other: TransformLog) -> Self {
        self.extend(other);
        self
    }

    /// Number of Rule 1 and Rule 2 records.
    pub fn reduction_count(&self) -> usize {
        self.records
            .iter()
            .filter(|r| !matches!(r, TransformRecord::HStep { .. }))
            .count()
    }
}

/// Carries an assignment of the transformed system back through `log`.
///
/// Rule 2 deletions are undone by setting the dropped variables to `+1`,
/// which leaves every product unchanged. Marked equations are satisfied by
/// back-substituting `x_l := b · Π_{i∈I∖{l}} x_i` in reverse order.
pub fn lift_assignment(log: &TransformLog, x: &Assignment) -> Result<Assignment, LiftError> {
    let mut current = x.clone();
    for (idx, record) in log.records.iter().enumerate().rev() {
        match record {
            TransformRecord::Rule1Merge { .. } => {}
            TransformRecord::Rule2Delete { n_before, kept, .. } => {
                if current.len() != kept.len() {
                    return Err(LiftError::DimensionMismatch {
                        record: idx,
                        expected: kept.len(),
                        found: current.len(),
                    });
                }
                let mut wide = vec![Sign::Plus; *n_before];
                for (j, &orig) in kept.iter().enumerate() {
                    wide[orig] = current.get(j);
                }
                current = Assignment(wide);
            }
            TransformRecord::HStep { lhs, rhs, var } => {
                if current.len() != lhs.len() {
                    return Err(LiftError::DimensionMismatch {
                        record: idx,
                        expected: lhs.len(),
                        found: current.len(),
                    });
                }
                let mut others = lhs.clone();
                others.set(*var, false);
                let value = *rhs * current.product(&others);
                current.set(*var, value);
            }
        }
    }
    Ok(current)
}

/// Result of applying Rule 1 to an arbitrary sequence of equations.
pub(crate) struct Rule1Outcome {
    pub equations: Vec<Equation>,
    /// Index (into the input) of the first equation of each surviving group.
    pub sources: Vec<usize>,
    /// Input indices that were folded into another equation or cancelled.
    pub absorbed: Vec<usize>,
    pub log: TransformLog,
}

/// Merges equations with equal left-hand sides, keeping first-occurrence
/// order. Singleton groups pass through untouched.
pub(crate) fn merge_equal_lhs(equations: Vec<Equation>) -> Rule1Outcome {
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut by_lhs: HashMap<&BitVector, usize> = HashMap::new();
    for (i, eq) in equations.iter().enumerate() {
        let g = *by_lhs.entry(&eq.lhs).or_insert_with(|| {
            groups.push(Vec::new());
            groups.len() - 1
        });
        groups[g].push(i);
    }

    let mut out = Rule1Outcome {
        equations: Vec::with_capacity(groups.len()),
        sources: Vec::with_capacity(groups.len()),
        absorbed: Vec::new(),
        log: TransformLog::new(),
    };
    for group in groups {
        let first = group[0];
        if group.len() == 1 {
            out.equations.push(equations[first].clone());
            out.sources.push(first);
            continue;
        }
        let net: Weight = group.iter().map(|&i| equations[i].signed_weight()).sum();
        let result = Sign::of(&net).map(|s| (s, net.abs()));
        out.log.push(TransformRecord::Rule1Merge {
            lhs: equations[first].lhs.clone(),
            merged: group
                .iter()
                .map(|&i| (equations[i].rhs, equations[i].weight.clone()))
                .collect(),
            result: result.clone(),
        });
        match result {
            Some((rhs, weight)) => {
                out.equations
                    .push(Equation::new(equations[first].lhs.clone(), rhs, weight));
                out.sources.push(first);
                out.absorbed.extend(group[1..].iter().copied());
            }
            None => out.absorbed.extend(group.iter().copied()),
        }
    }
    out
}

/// Rule 1 to saturation: equal left-hand sides are merged by signed weight
/// addition and zero-weight results are deleted.
pub fn apply_rule1(s: &LinearSystem) -> (LinearSystem, TransformLog) {
    let outcome = merge_equal_lhs(s.equations.clone());
    (
        LinearSystem::from_parts(s.n_vars, outcome.equations, s.var_names.clone()),
        outcome.log,
    )
}

/// Rule 2: drops every variable outside the greedy column basis of `A` and
/// re-indexes the survivors. Returns an empty log when `A` already has full
/// column rank.
pub fn apply_rule2(s: &LinearSystem) -> (LinearSystem, TransformLog) {
    let kept = gf2::independent_columns(&s.matrix());
    let mut log = TransformLog::new();
    if kept.len() == s.n_vars {
        return (s.clone(), log);
    }
    let deleted: Vec<usize> = (0..s.n_vars).filter(|i| !kept.contains(i)).collect();
    let equations = s
        .equations
        .iter()
        .map(|e| Equation::new(e.lhs.select(&kept), e.rhs, e.weight.clone()))
        .collect();
    let names = kept.iter().map(|&i| s.var_names[i].clone()).collect();
    log.push(TransformRecord::Rule2Delete {
        n_before: s.n_vars,
        kept: kept.clone(),
        deleted,
    });
    (
        LinearSystem::from_parts(kept.len(), equations, names),
        log,
    )
}

/// True iff left-hand sides are pairwise distinct and `rank A = n`.
pub fn is_irreducible(s: &LinearSystem) -> bool {
    let mut seen = std::collections::HashSet::new();
    s.equations.iter().all(|e| seen.insert(&e.lhs)) && s.rank() == s.n_vars
}

/// Rule 1 to saturation followed by Rule 2, repeated until neither changes
/// the system. One round always suffices; the loop re-checks anyway.
pub fn reduce(s: &LinearSystem) -> (LinearSystem, TransformLog) {
    let mut log = TransformLog::new();
    let mut current = s.clone();
    loop {
        let (after1, log1) = apply_rule1(&current);
        let (after2, log2) = apply_rule2(&after1);
        let unchanged = log1.is_empty() && log2.is_empty();
        log.extend(log1);
        log.extend(log2);
        current = after2;
        if unchanged {
            debug_assert!(is_irreducible(&current));
            return (current, log);
        }
    }
}

/// Integer numerators of the signed weights over their common denominator.
/// Used by hot loops that only need to compare excess values.
pub(crate) fn scaled_signed_weights(s: &LinearSystem) -> (Vec<BigInt>, BigInt) {
    let denom = s
        .equations
        .iter()
        .fold(BigInt::one(), |acc, e| num_integer::lcm(acc, e.weight.denom().clone()));
    let scaled = s
        .equations
        .iter()
        .map(|e| {
            let w = &e.weight * Weight::from_integer(denom.clone());
            debug_assert!(w.is_integer());
            let w = w.to_integer();
            if e.rhs.is_minus() {
                -w
            } else {
                w
            }
        })
        .collect();
    (scaled, denom)
}

#[cfg(test)]
mod tests {
    use super::*;
    use Sign::{Minus, Plus};

    fn q(n: i64) -> Weight {
        Weight::from_integer(n.into())
    }

    fn eq(n: usize, vars: &[usize], rhs: Sign, w: i64) -> Equation {
        Equation::with_vars(n, vars, rhs, w)
    }

    fn sys(n: usize, eqs: Vec<Equation>) -> LinearSystem {
        LinearSystem::new(n, eqs).unwrap()
    }

    fn max_excess(s: &LinearSystem) -> Weight {
        (0u32..1 << s.n_vars())
            .map(|bits| {
                let x = Assignment::new(
                    (0..s.n_vars())
                        .map(|i| Sign::from_parity(bits >> i & 1 == 1))
                        .collect(),
                );
                s.excess(&x).unwrap()
            })
            .max()
            .unwrap()
    }

    #[test]
    fn excess_examples() {
        let s = sys(2, vec![eq(2, &[0, 1], Plus, 2)]);
        assert_eq!(s.excess(&Assignment::new(vec![Plus, Plus])).unwrap(), q(2));
        assert_eq!(s.excess(&Assignment::new(vec![Plus, Minus])).unwrap(), q(-2));
        let s = sys(1, vec![eq(1, &[0], Plus, 1), eq(1, &[0], Minus, 3)]);
        assert_eq!(excess(&s, &Assignment::new(vec![Minus])).unwrap(), q(2));
        assert!(s.excess(&Assignment::all_plus(2)).is_err());
    }

    #[test]
    fn excess_has_parity_of_total_weight() {
        let s = sys(
            3,
            vec![eq(3, &[0, 1], Plus, 3), eq(3, &[1, 2], Minus, 2), eq(3, &[2], Plus, 4)],
        );
        let w = s.total_weight().to_integer();
        for bits in 0u32..8 {
            let y = BitVector::from_indices(3, (0..3).filter(|i| bits >> i & 1 == 1));
            let e = s.excess(&Assignment::from_bits(&y)).unwrap().to_integer();
            assert_eq!((&w - &e) % 2, 0.into());
        }
    }

    #[test]
    fn rule1_examples() {
        let s = sys(2, vec![eq(2, &[0, 1], Plus, 3), eq(2, &[0, 1], Minus, 1)]);
        let (out, log) = apply_rule1(&s);
        assert_eq!(out.equations(), &[eq(2, &[0, 1], Plus, 2)]);
        assert_eq!(log.len(), 1);

        let s = sys(2, vec![eq(2, &[0, 1], Plus, 2), eq(2, &[0, 1], Minus, 2)]);
        let (out, log) = apply_rule1(&s);
        assert!(out.is_empty());
        assert!(matches!(
            log.records()[0],
            TransformRecord::Rule1Merge { result: None, .. }
        ));

        let s = sys(2, vec![eq(2, &[0], Plus, 1), eq(2, &[1], Plus, 1)]);
        let (out, log) = apply_rule1(&s);
        assert_eq!(out, s);
        assert!(log.is_empty());
    }

    #[test]
    fn rule1_merges_same_sign_and_keeps_order() {
        let s = sys(
            2,
            vec![
                eq(2, &[1], Minus, 1),
                eq(2, &[0], Plus, 1),
                eq(2, &[1], Minus, 4),
            ],
        );
        let (out, _) = apply_rule1(&s);
        assert_eq!(out.equations(), &[eq(2, &[1], Minus, 5), eq(2, &[0], Plus, 1)]);
    }

    #[test]
    fn rule2_examples() {
        let s = sys(2, vec![eq(2, &[0, 1], Plus, 1)]);
        let (out, log) = apply_rule2(&s);
        assert_eq!(out.n_vars(), 1);
        assert_eq!(out.equations(), &[eq(1, &[0], Plus, 1)]);
        assert_eq!(
            log.records(),
            &[TransformRecord::Rule2Delete {
                n_before: 2,
                kept: vec![0],
                deleted: vec![1],
            }]
        );

        let s = sys(
            2,
            vec![eq(2, &[0], Plus, 1), eq(2, &[1], Plus, 1), eq(2, &[0, 1], Minus, 1)],
        );
        let (out, log) = apply_rule2(&s);
        assert_eq!(out, s);
        assert!(log.is_empty());

        let s = sys(3, vec![eq(3, &[0, 1], Plus, 1), eq(3, &[1, 2], Minus, 1)]);
        let (out, _) = apply_rule2(&s);
        assert_eq!(out.equations(), &[eq(2, &[0, 1], Plus, 1), eq(2, &[1], Minus, 1)]);
        assert_eq!(max_excess(&s), q(2));
        assert_eq!(max_excess(&out), q(2));
    }

    #[test]
    fn rule2_keeps_names_of_surviving_columns() {
        let s = sys(3, vec![eq(3, &[2], Plus, 1)])
            .with_var_names(vec!["a".into(), "b".into(), "c".into()])
            .unwrap();
        let (out, _) = apply_rule2(&s);
        assert_eq!(out.var_names(), &["c".to_string()]);
    }

    #[test]
    fn reduce_examples() {
        let s = sys(
            2,
            vec![eq(2, &[0], Plus, 1), eq(2, &[1], Plus, 1), eq(2, &[0, 1], Minus, 1)],
        );
        let (out, log) = reduce(&s);
        assert_eq!(out, s);
        assert!(log.is_empty());

        let s = sys(
            3,
            vec![eq(3, &[0, 1], Plus, 1), eq(3, &[0, 1], Minus, 1), eq(3, &[2], Plus, 2)],
        );
        let (out, log) = reduce(&s);
        assert_eq!(out.equations(), &[eq(1, &[0], Plus, 2)]);
        assert_eq!(log.reduction_count(), 2);
        assert_eq!(max_excess(&s), q(2));
        assert_eq!(max_excess(&out), q(2));

        let (out, log) = reduce(&LinearSystem::empty(3));
        assert!(out.is_empty());
        assert_eq!(out.n_vars(), 0);
        assert_eq!(log.len(), 1);
    }

    #[test]
    fn irreducibility_examples() {
        assert!(is_irreducible(&sys(
            2,
            vec![eq(2, &[0], Plus, 1), eq(2, &[1], Plus, 1), eq(2, &[0, 1], Minus, 1)],
        )));
        assert!(!is_irreducible(&sys(2, vec![eq(2, &[0, 1], Plus, 1)])));
        assert!(!is_irreducible(&sys(
            1,
            vec![eq(1, &[0], Plus, 1), eq(1, &[0], Minus, 1)],
        )));
    }

    #[test]
    fn lift_examples() {
        let x = Assignment::new(vec![Minus, Plus]);
        assert_eq!(lift_assignment(&TransformLog::new(), &x).unwrap(), x);

        let original = sys(2, vec![eq(2, &[0, 1], Minus, 1)]);
        let (reduced, log) = reduce(&original);
        assert_eq!(reduced.equations(), &[eq(1, &[0], Minus, 1)]);
        let small = Assignment::new(vec![Minus]);
        let lifted = lift_assignment(&log, &small).unwrap();
        assert_eq!(lifted, Assignment::new(vec![Minus, Plus]));
        assert_eq!(original.excess(&lifted).unwrap(), reduced.excess(&small).unwrap());

        let mut log = TransformLog::new();
        log.push(TransformRecord::HStep {
            lhs: BitVector::from_indices(2, [0, 1]),
            rhs: Plus,
            var: 0,
        });
        let lifted = lift_assignment(&log, &Assignment::new(vec![Plus, Minus])).unwrap();
        assert_eq!(lifted, Assignment::new(vec![Minus, Minus]));
    }

    #[test]
    fn lift_rejects_wrong_dimension() {
        let (_, log) = reduce(&sys(2, vec![eq(2, &[0, 1], Minus, 1)]));
        assert_eq!(
            lift_assignment(&log, &Assignment::all_plus(2)),
            Err(LiftError::DimensionMismatch {
                record: 0,
                expected: 1,
                found: 2,
            })
        );
    }

    #[test]
    fn construction_validates() {
        assert!(LinearSystem::new(2, vec![eq(3, &[0], Plus, 1)]).is_err());
        assert!(LinearSystem::new(2, vec![Equation::new(BitVector::zeros(2), Plus, q(1))]).is_err());
        assert!(LinearSystem::new(2, vec![eq(2, &[0], Plus, 0)]).is_err());
    }

    #[test]
    fn scaled_weights_share_a_denominator() {
        let s = sys(
            2,
            vec![
                Equation::new(BitVector::unit(2, 0), Plus, Weight::new(1.into(), 2.into())),
                Equation::new(BitVector::unit(2, 1), Minus, Weight::new(2.into(), 3.into())),
            ],
        );
        let (w, d) = scaled_signed_weights(&s);
        assert_eq!(d, 6.into());
        assert_eq!(w, vec![3.into(), (-4).into()]);
    }
}
