//! Pseudo-boolean functions `f(x) = f̂(∅) + Σ_I f̂(I) Π_{i∈I} x_i`.
//!
//! `f − f̂(∅)` is exactly the excess of the system with one equation
//! `Π_{i∈I} x_i = sign(f̂(I))` of weight `|f̂(I)|` per term, which turns the
//! sum-free marking argument into the lower bound
//! `max f ≥ f̂(∅) + ⌊(rank A + r − 1)/r⌋ · min |f̂(I)|` for degree `r`.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::gf2::BitVector;
use crate::linsystem::{lift_assignment, reduce, Assignment, Equation, LinearSystem, Sign, Weight};
use crate::solver;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("term uses variable index {index}, function has {n_vars} variables")]
    IndexOutOfRange { index: usize, n_vars: usize },
    #[error("terms need at least one variable; use the constant instead")]
    EmptyTerm,
    #[error("assignment has {found} values, function has {expected} variables")]
    AssignmentLength { expected: usize, found: usize },
}

/// Sparse Fourier expansion with exact rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FourierPolynomial {
    n_vars: usize,
    constant: Weight,
    /// Sorted index sets mapped to nonzero coefficients.
    terms: BTreeMap<Vec<usize>, Weight>,
}

impl FourierPolynomial {
    pub fn new(n_vars: usize) -> Self {
        Self {
            n_vars,
            constant: Weight::zero(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant_fn(n_vars: usize, c: Weight) -> Self {
        let mut f = Self::new(n_vars);
        f.constant = c;
        f
    }

    pub fn set_constant(&mut self, c: Weight) {
        self.constant = c;
    }

    pub fn add_constant(&mut self, c: &Weight) {
        self.constant += c;
    }

    /// Adds `coef · Π_{i∈vars} x_i`, merging with an existing term on the
    /// same index set and dropping it if the sum is zero.
    pub fn add_term(&mut self, vars: &[usize], coef: Weight) -> Result<(), PolyError> {
        if vars.is_empty() {
            return Err(PolyError::EmptyTerm);
        }
        if let Some(&index) = vars.iter().find(|&&i| i >= self.n_vars) {
            return Err(PolyError::IndexOutOfRange {
                index,
                n_vars: self.n_vars,
            });
        }
        let mut key = vars.to_vec();
        key.sort_unstable();
        key.dedup();
        if key.len() != vars.len() {
            // x_i² = 1: repeated indices cancel in pairs.
            let mut counts = BTreeMap::new();
            for &v in vars {
                *counts.entry(v).or_insert(0usize) += 1;
            }
            key = counts.into_iter().filter(|(_, c)| c % 2 == 1).map(|(v, _)| v).collect();
            if key.is_empty() {
                self.constant += coef;
                return Ok(());
            }
        }
        let entry = self.terms.entry(key.clone()).or_insert_with(Weight::zero);
        *entry += coef;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
        Ok(())
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn constant(&self) -> &Weight {
        &self.constant
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[usize], &Weight)> {
        self.terms.iter().map(|(k, v)| (k.as_slice(), v))
    }

    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    pub fn evaluate(&self, x: &Assignment) -> Result<Weight, PolyError> {
        if x.len() != self.n_vars {
            return Err(PolyError::AssignmentLength {
                expected: self.n_vars,
                found: x.len(),
            });
        }
        let mut value = self.constant.clone();
        for (vars, coef) in &self.terms {
            let odd = vars.iter().filter(|&&i| x.get(i).is_minus()).count() % 2 == 1;
            if odd {
                value -= coef;
            } else {
                value += coef;
            }
        }
        Ok(value)
    }

    /// Multiplies every coefficient, including the constant, by `lambda`.
    pub fn scaled(&self, lambda: &Weight) -> Self {
        let mut out = Self::new(self.n_vars);
        out.constant = &self.constant * lambda;
        for (k, v) in &self.terms {
            let c = v * lambda;
            if !c.is_zero() {
                out.terms.insert(k.clone(), c);
            }
        }
        out
    }

    /// The `n × |F|` variable-term incidence matrix, as one row per term.
    pub fn incidence_rank(&self) -> usize {
        let rows = self
            .terms
            .keys()
            .map(|k| BitVector::from_indices(self.n_vars, k.iter().copied()))
            .collect();
        crate::gf2::rank(&crate::gf2::BitMatrix::from_rows(self.n_vars, rows).expect("terms fit"))
    }
}

/// The system whose excess is `f − f̂(∅)`, together with `f̂(∅)`.
pub fn to_excess_system(f: &FourierPolynomial) -> (LinearSystem, Weight) {
    let equations = f
        .terms
        .iter()
        .map(|(vars, coef)| {
            let rhs = Sign::of(coef).expect("stored coefficients are nonzero");
            Equation::new(
                BitVector::from_indices(f.n_vars, vars.iter().copied()),
                rhs,
                coef.abs(),
            )
        })
        .collect();
    let system = LinearSystem::new(f.n_vars, equations).expect("terms are nonempty and in range");
    (system, f.constant.clone())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundResult {
    pub bound: Weight,
    pub witness: Assignment,
    pub rank_used: usize,
    pub k_star: usize,
}

/// The rank lower bound on `max f` with an assignment reaching it.
pub fn lower_bound(f: &FourierPolynomial) -> BoundResult {
    if f.terms.is_empty() {
        return BoundResult {
            bound: f.constant.clone(),
            witness: Assignment::all_plus(f.n_vars),
            rank_used: 0,
            k_star: 0,
        };
    }
    let r = f.degree();
    let (system, offset) = to_excess_system(f);
    let (reduced, log) = reduce(&system);
    let rank = reduced.n_vars();
    let k_star = rank.div_ceil(r);
    debug_assert!(rank > (k_star - 1) * r && rank < k_star * r + 1);

    let min_coef = f
        .terms
        .values()
        .map(Signed::abs)
        .min()
        .expect("at least one term");
    debug_assert_eq!(reduced.min_weight().as_ref(), Some(&min_coef));

    let x = solver::guaranteed_excess_assignment(&reduced, k_star, Some(r))
        .expect("rank ≥ (k*−1)r + 1 holds by the choice of k*");
    let witness = lift_assignment(&log, &x).expect("reduction log is consistent");
    let bound = offset + Weight::from_integer(k_star.into()) * min_coef;
    debug_assert!(f.evaluate(&witness).expect("same dimension") >= bound);
    BoundResult {
        bound,
        witness,
        rank_used: rank,
        k_star,
    }
}
