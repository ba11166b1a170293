//! Decision procedures for "is the maximum excess at least `2k`?".
//!
//! - [`solve_search_tree`]: exact depth-bounded search. Every node either
//!   finds that the assignment falsifying `n'` independent equations is good
//!   enough, or branches on which of those equations to mark with one
//!   iteration of Algorithm H.
//! - [`kernelize`]: shrinks an irreducible instance to `O(k² log k)`
//!   variables or answers it outright.
//! - [`guaranteed_excess_assignment`]: excess `≥ k·w_min` whenever
//!   `n ≥ (k−1)r + 1`, by marking a sum-free set of equations.
//! - [`kernelize_r`]: the `(2k−1)r`-variable kernel for arity-bounded systems.
//! - [`solve`]: kernelize, then search the kernel.

use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::algoh::{self, Budget, HError, Selector};
use crate::gf2::{self, BitMatrix, BitVector};
use crate::linsystem::{
    self, is_irreducible, lift_assignment, reduce, Assignment, LinearSystem, TransformLog,
    TransformRecord, Weight,
};
use crate::sumfree::{self, SumFreeError, VectorFamily};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error("weights must be integers for this operation")]
    NonIntegralWeights,
    #[error("system is not irreducible")]
    NotIrreducible,
    #[error("k must be positive")]
    ZeroK,
    #[error("r must be positive")]
    ZeroArity,
    #[error("an equation has {found} variables, more than r = {r}")]
    ArityExceeded { r: usize, found: usize },
    #[error("n < (k-1)r+1: n = {n}, r = {r}, k = {k}")]
    TooFewVariables { n: usize, r: usize, k: usize },
    #[error(transparent)]
    SumFree(#[from] SumFreeError),
    #[error(transparent)]
    AlgorithmH(#[from] HError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Answer {
    Yes,
    No,
}

/// How an instance was decided or kernelized.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// `k = 0`: every system reaches excess 0.
    Trivial,
    /// Decided by the search tree alone.
    SearchTree,
    /// `m < 2k`: the reduced system is its own kernel.
    FewEquations,
    /// `2k ≤ m ≤ 2^{n/(2k−1)} − 2`: the answer is yes; the witness comes
    /// from the search tree on the reduced system.
    ExcessGuaranteed,
    /// `m ≥ n^{2k}`: the search tree is polynomial in `m`.
    DenseSearch,
    /// Remaining case, `n ≤ 4k² log₂(16k⁴)`.
    Kernel,
    /// `n ≥ (2k−1)r + 1`: yes by the sum-free marking argument.
    ArityGuaranteed,
    /// `n ≤ (2k−1)r`.
    ArityKernel,
}

impl Regime {
    pub fn name(self) -> &'static str {
        match self {
            Regime::Trivial => "trivial",
            Regime::SearchTree => "search-tree",
            Regime::FewEquations => "few-equations",
            Regime::ExcessGuaranteed => "excess-guaranteed",
            Regime::DenseSearch => "dense-search",
            Regime::Kernel => "kernel",
            Regime::ArityGuaranteed => "arity-guaranteed",
            Regime::ArityKernel => "arity-kernel",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveStats {
    /// Search-tree nodes visited (0 when no search ran).
    pub nodes: u64,
    /// Rule 1 and Rule 2 applications recorded before the final search.
    pub reductions: usize,
    pub regime: Regime,
    pub vars_before: usize,
    /// Variables of the reduced system or kernel the answer was read from.
    pub vars_after: usize,
    /// True when the witness was produced by the search tree in a regime
    /// whose answer was already known.
    pub witness_by_search: bool,
}

/// Decision with a witness on yes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub answer: Answer,
    /// Assignment of the original variables.
    pub witness: Option<Assignment>,
    pub achieved_excess: Option<Weight>,
    pub stats: SolveStats,
}

impl Verdict {
    fn yes(original: &LinearSystem, k: usize, witness: Assignment, stats: SolveStats) -> Self {
        let achieved = original
            .excess(&witness)
            .expect("witness is lifted to the original variables");
        assert!(
            achieved >= threshold(k),
            "witness excess {achieved} is below 2k = {}",
            2 * k
        );
        Self {
            answer: Answer::Yes,
            witness: Some(witness),
            achieved_excess: Some(achieved),
            stats,
        }
    }

    fn no(stats: SolveStats) -> Self {
        Self {
            answer: Answer::No,
            witness: None,
            achieved_excess: None,
            stats,
        }
    }

    pub fn is_yes(&self) -> bool {
        self.answer == Answer::Yes
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KernelOutcome {
    Solved(Verdict),
    Kernel {
        system: LinearSystem,
        log: TransformLog,
        k: usize,
        regime: Regime,
    },
}

#[derive(Debug, Clone, Default)]
pub struct SolveOptions {
    /// Explore sibling branches of the search tree concurrently. The verdict
    /// and witness equal the sequential ones; node counts may differ.
    pub parallel: bool,
}

fn threshold(k: usize) -> Weight {
    Weight::from_integer((2 * k).into())
}

struct Search {
    target: Weight,
    nodes: AtomicU64,
    parallel: bool,
}

impl Search {
    /// Returns an assignment of the search root's variables with excess at
    /// least the target, if one exists. `log` maps `sys` back to the root.
    fn explore(&self, sys: &LinearSystem, log: &TransformLog, marked: &Weight) -> Option<Assignment> {
        self.nodes.fetch_add(1, Ordering::Relaxed);
        if marked >= &self.target {
            let x = algoh::derandomized_assignment(sys);
            return Some(lift_assignment(log, &x).expect("search log is consistent"));
        }
        let (red, rlog) = reduce(sys);
        let log = log.clone().then(rlog);
        let needed = &self.target - marked;

        let rows = gf2::independent_rows(&red.matrix());
        debug_assert_eq!(rows.len(), red.n_vars());
        let x = falsify_all(&red, &rows);
        if red.excess(&x).expect("same dimension") >= needed {
            return Some(lift_assignment(&log, &x).expect("search log is consistent"));
        }

        let branch = |&row: &usize| {
            let var = red.equations()[row]
                .lhs
                .first_one()
                .expect("stored equations are nonempty");
            let (child, mark, hlog) =
                algoh::h_step_logged(&red, row, var).expect("reduced systems have distinct rows");
            let mut child_log = log.clone();
            child_log.push(mark.to_record());
            child_log.extend(hlog);
            self.explore(&child, &child_log, &(marked + &mark.weight))
        };
        if self.parallel {
            rows.par_iter().find_map_first(branch)
        } else {
            rows.iter().find_map(branch)
        }
    }
}

/// The unique assignment falsifying every equation in `rows`, which index
/// `n` linearly independent equations of `s`.
fn falsify_all(s: &LinearSystem, rows: &[usize]) -> Assignment {
    let n = s.n_vars();
    let matrix = BitMatrix::from_rows(
        n,
        rows.iter().map(|&r| s.equations()[r].lhs.clone()).collect(),
    )
    .expect("rows have the system's dimension");
    // Equation j is falsified iff <lhs_j, y> = [b_j = +1].
    let rhs = BitVector::from_indices(
        n,
        rows.iter()
            .enumerate()
            .filter(|(_, &r)| !s.equations()[r].rhs.is_minus())
            .map(|(i, _)| i),
    );
    let y = gf2::solve_square(&matrix, &rhs)
        .expect("square by construction")
        .expect("independent rows form an invertible matrix");
    Assignment::from_bits(&y)
}

fn run_search(s: &LinearSystem, k: usize, options: &SolveOptions) -> (Option<Assignment>, u64) {
    let search = Search {
        target: threshold(k),
        nodes: AtomicU64::new(0),
        parallel: options.parallel,
    };
    let found = search.explore(s, &TransformLog::new(), &Weight::zero());
    (found, search.nodes.into_inner())
}

/// Exact search-tree decision with a witness on yes.
pub fn solve_search_tree(s: &LinearSystem, k: usize) -> Verdict {
    solve_search_tree_with(s, k, &SolveOptions::default())
}

pub fn solve_search_tree_with(s: &LinearSystem, k: usize, options: &SolveOptions) -> Verdict {
    let (found, nodes) = run_search(s, k, options);
    let stats = SolveStats {
        nodes,
        reductions: 0,
        regime: if k == 0 { Regime::Trivial } else { Regime::SearchTree },
        vars_before: s.n_vars(),
        vars_after: reduce(s).0.n_vars(),
        witness_by_search: false,
    };
    match found {
        Some(x) => Verdict::yes(s, k, x, stats),
        None => Verdict::no(stats),
    }
}

/// `base^exp ≥ target`, stopping as soon as the answer is known.
fn pow_at_least(base: &BigUint, exp: usize, target: &BigUint) -> bool {
    if exp == 0 {
        return BigUint::one() >= *target;
    }
    if base <= &BigUint::one() {
        return base >= target;
    }
    let mut acc = BigUint::one();
    for _ in 0..exp {
        acc *= base;
        if &acc >= target {
            return true;
        }
    }
    false
}

fn pow2(n: usize) -> BigUint {
    BigUint::one() << n
}

/// `(m+2)^{2k−1} ≤ 2^n`, i.e. `m ≤ 2^{n/(2k−1)} − 2`. Requires `k ≥ 1`.
pub fn excess_guaranteed(n: usize, m: usize, k: usize) -> bool {
    assert!(k >= 1);
    !pow_at_least(&BigUint::from(m + 2), 2 * k - 1, &(pow2(n) + 1u32))
}

/// `m ≥ n^{2k}`.
pub fn dense_enough(n: usize, m: usize, k: usize) -> bool {
    !pow_at_least(&BigUint::from(n), 2 * k, &(BigUint::from(m) + 1u32))
}

/// `n ≤ 4k² log₂(16k⁴)`, checked as `2^n ≤ (16k⁴)^{4k²}`.
pub fn within_kernel_bound(n: usize, k: usize) -> bool {
    let k = BigUint::from(k);
    let base = BigUint::from(16u32) * k.pow(4);
    let exp = BigUint::from(4u32) * &k * &k;
    let exp = usize::try_from(exp).expect("k is small enough for the exponent to fit");
    pow_at_least(&base, exp, &pow2(n))
}

fn derandomized_yes(s: &LinearSystem, regime: Regime) -> Verdict {
    let x = algoh::derandomized_assignment(s);
    let stats = SolveStats {
        nodes: 0,
        reductions: 0,
        regime,
        vars_before: s.n_vars(),
        vars_after: s.n_vars(),
        witness_by_search: false,
    };
    Verdict::yes(s, 0, x, stats)
}

/// Reduces `s` and either decides it or returns an irreducible kernel with
/// at most `4k² log₂(16k⁴)` variables (or fewer than `2k` equations).
pub fn kernelize(s: &LinearSystem, k: usize) -> Result<KernelOutcome, SolverError> {
    kernelize_with(s, k, &SolveOptions::default())
}

pub fn kernelize_with(
    s: &LinearSystem,
    k: usize,
    options: &SolveOptions,
) -> Result<KernelOutcome, SolverError> {
    if !s.has_integral_weights() {
        return Err(SolverError::NonIntegralWeights);
    }
    if k == 0 {
        return Ok(KernelOutcome::Solved(derandomized_yes(s, Regime::Trivial)));
    }
    let (red, log) = reduce(s);
    let (n, m) = (red.n_vars(), red.n_equations());

    let regime = if m < 2 * k {
        Regime::FewEquations
    } else if excess_guaranteed(n, m, k) {
        Regime::ExcessGuaranteed
    } else if dense_enough(n, m, k) {
        Regime::DenseSearch
    } else {
        Regime::Kernel
    };

    match regime {
        Regime::FewEquations | Regime::Kernel => {
            if regime == Regime::Kernel {
                assert!(within_kernel_bound(n, k), "kernel with n = {n} exceeds the bound for k = {k}");
            }
            Ok(KernelOutcome::Kernel {
                system: red,
                log,
                k,
                regime,
            })
        }
        _ => {
            let (found, nodes) = run_search(&red, k, options);
            let stats = SolveStats {
                nodes,
                reductions: log.reduction_count(),
                regime,
                vars_before: s.n_vars(),
                vars_after: n,
                witness_by_search: regime == Regime::ExcessGuaranteed,
            };
            Ok(KernelOutcome::Solved(match found {
                Some(x) => {
                    let x = lift_assignment(&log, &x).expect("reduction log is consistent");
                    Verdict::yes(s, k, x, stats)
                }
                None => {
                    assert!(
                        regime != Regime::ExcessGuaranteed,
                        "search tree contradicts the guaranteed-excess regime"
                    );
                    Verdict::no(stats)
                }
            }))
        }
    }
}

/// Kernelize, then run the search tree on the kernel.
pub fn solve(s: &LinearSystem, k: usize) -> Result<Verdict, SolverError> {
    solve_with(s, k, &SolveOptions::default())
}

pub fn solve_with(s: &LinearSystem, k: usize, options: &SolveOptions) -> Result<Verdict, SolverError> {
    match kernelize_with(s, k, options)? {
        KernelOutcome::Solved(v) => Ok(v),
        KernelOutcome::Kernel {
            system,
            log,
            regime,
            ..
        } => {
            let (found, nodes) = run_search(&system, k, options);
            let stats = SolveStats {
                nodes,
                reductions: log.reduction_count(),
                regime,
                vars_before: s.n_vars(),
                vars_after: system.n_vars(),
                witness_by_search: false,
            };
            Ok(match found {
                Some(x) => {
                    let x = lift_assignment(&log, &x).expect("kernel log is consistent");
                    Verdict::yes(s, k, x, stats)
                }
                None => Verdict::no(stats),
            })
        }
    }
}

/// An assignment with excess at least `k · w_min` for an irreducible system
/// with `n ≥ (k−1)r + 1`, where `r` bounds the equation arity (inferred when
/// `None`).
pub fn guaranteed_excess_assignment(
    s: &LinearSystem,
    k: usize,
    r: Option<usize>,
) -> Result<Assignment, SolverError> {
    if k == 0 {
        return Err(SolverError::ZeroK);
    }
    if !is_irreducible(s) {
        return Err(SolverError::NotIrreducible);
    }
    let arity = s.max_arity();
    let r = match r {
        Some(0) => return Err(SolverError::ZeroArity),
        Some(r) if r < arity => return Err(SolverError::ArityExceeded { r, found: arity }),
        Some(r) => r,
        None => arity,
    };
    let n = s.n_vars();
    if n < (k - 1) * r + 1 {
        return Err(SolverError::TooFewVariables { n, r, k });
    }

    let family = VectorFamily::new(
        n,
        r,
        s.equations().iter().map(|e| e.lhs.clone()).collect(),
    )?;
    let chosen = sumfree::find_msum_free_indices(&family, k)?;
    let plan: Vec<Selector> = chosen.into_iter().map(Selector::Original).collect();
    let run = algoh::run_h(s, &plan, Budget::Unbounded)?;
    assert_eq!(run.marks.len(), k, "every sum-free equation survives until marked");

    let x = algoh::complete_assignment(&run);
    let w_min = s.min_weight().expect("n ≥ 1 implies a nonempty system");
    let floor = Weight::from_integer(k.into()) * w_min;
    assert!(
        s.excess(&x).expect("same dimension") >= floor,
        "guaranteed excess violated"
    );
    Ok(x)
}

/// Reduces `s` and either answers yes (when `n ≥ (2k−1)r + 1`) or returns a
/// kernel with at most `(2k−1)r` variables.
pub fn kernelize_r(s: &LinearSystem, k: usize, r: usize) -> Result<KernelOutcome, SolverError> {
    if r == 0 {
        return Err(SolverError::ZeroArity);
    }
    let arity = s.max_arity();
    if arity > r {
        return Err(SolverError::ArityExceeded { r, found: arity });
    }
    if !s.has_integral_weights() {
        return Err(SolverError::NonIntegralWeights);
    }
    if k == 0 {
        return Ok(KernelOutcome::Solved(derandomized_yes(s, Regime::Trivial)));
    }
    let (red, log) = reduce(s);
    let n = red.n_vars();
    let bound = (2 * k - 1) * r;
    if n > bound {
        let x = guaranteed_excess_assignment(&red, 2 * k, Some(r))?;
        let x = lift_assignment(&log, &x).expect("reduction log is consistent");
        let stats = SolveStats {
            nodes: 0,
            reductions: log.reduction_count(),
            regime: Regime::ArityGuaranteed,
            vars_before: s.n_vars(),
            vars_after: n,
            witness_by_search: false,
        };
        return Ok(KernelOutcome::Solved(Verdict::yes(s, k, x, stats)));
    }
    Ok(KernelOutcome::Kernel {
        system: red,
        log,
        k,
        regime: Regime::ArityKernel,
    })
}

/// Reads back the Rule 2 records of a log as `(n_before, n_after)` pairs.
pub fn variable_deletions(log: &TransformLog) -> Vec<(usize, usize)> {
    log.records()
        .iter()
        .filter_map(|r| match r {
            TransformRecord::Rule2Delete { n_before, kept, .. } => Some((*n_before, kept.len())),
            _ => None,
        })
        .collect()
}

/// Re-validates a yes verdict against a system (typically the raw input).
pub fn witness_meets_threshold(s: &LinearSystem, k: usize, witness: &Assignment) -> bool {
    linsystem::excess(s, witness).is_ok_and(|e| e >= threshold(k))
}
