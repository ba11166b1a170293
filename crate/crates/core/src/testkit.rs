//! Brute-force oracles and seeded instance generators.
//!
//! Random generation is counter based: the `i`-th drawn object reads only
//! from ChaCha stream `i` of the seed, so its value does not depend on how
//! many draws earlier objects needed.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::gf2::BitVector;
use crate::graphapps::{EdgeLabel, LabeledGraph};
use crate::linsystem::{scaled_signed_weights, Assignment, Equation, LinearSystem, Sign, Weight};
use crate::pseudobool::FourierPolynomial;

/// Largest system the oracle will enumerate.
pub const ORACLE_MAX_VARS: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TestkitError {
    #[error("{n} variables exceed the brute-force limit of {ORACLE_MAX_VARS}")]
    TooManyVariables { n: usize },
    #[error("tight instances need kappa >= 2 and r >= 1 (got kappa = {kappa}, r = {r})")]
    InvalidTightParameters { kappa: usize, r: usize },
    #[error("random instances need 1 <= r <= n (got n = {n}, r = {r})")]
    InvalidArity { n: usize, r: usize },
    #[error("max weight must be positive")]
    InvalidWeight,
    #[error("{m} distinct equations requested, only {available} left-hand sides exist")]
    NotEnoughDistinctLhs { m: usize, available: u128 },
}

/// A reproducible source of test instances.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GeneratorSpec {
    /// The sharpness instance: `κ−1` blocks of `r` variables, every nonempty
    /// subset of a block as an equation `= −1` of weight 1.
    Tight { kappa: usize, r: usize },
    Random {
        n: usize,
        m: usize,
        r: usize,
        max_weight: u64,
        seed: u64,
    },
}

pub fn generate(spec: &GeneratorSpec) -> Result<LinearSystem, TestkitError> {
    match *spec {
        GeneratorSpec::Tight { kappa, r } => tight_instance(kappa, r),
        GeneratorSpec::Random {
            n,
            m,
            r,
            max_weight,
            seed,
        } => random_instance(n, m, r, max_weight, seed),
    }
}

/// The RNG for draw `index` under `seed`.
pub fn stream_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Exact maximum excess and the lexicographically smallest maximizer
/// (`+1 < −1`, `x_1` most significant).
pub fn brute_force_max_excess(s: &LinearSystem) -> Result<(Weight, Assignment), TestkitError> {
    let n = s.n_vars();
    if n > ORACLE_MAX_VARS {
        return Err(TestkitError::TooManyVariables { n });
    }
    let (weights, denom) = scaled_signed_weights(s);
    // Masks use bit i for x_{i+1}.
    let masks: Vec<u64> = s.equations().iter().map(|e| e.lhs.low_word()).collect();

    let (best_value, best_bits) = match weights.iter().map(BigInt::to_i64).collect::<Option<Vec<_>>>() {
        Some(small) if small.iter().map(|w| w.unsigned_abs() as u128).sum::<u128>() < i64::MAX as u128 => {
            let (v, bits) = enumerate(n, &masks, &small, 0i64, |acc, w, positive| {
                if positive {
                    acc + w
                } else {
                    acc - w
                }
            });
            (BigInt::from(v), bits)
        }
        _ => enumerate(n, &masks, &weights, BigInt::zero(), |acc, w, positive| {
            if positive {
                acc + w
            } else {
                acc - w
            }
        }),
    };
    let y = BitVector::from_indices(n, (0..n).filter(|&i| best_bits >> i & 1 == 1));
    Ok((Weight::new(best_value, denom), Assignment::from_bits(&y)))
}

/// Walks assignments in lexicographic order (`x_1` most significant) and
/// keeps the first maximum. `c_j` is stored as a signed weight, so an
/// equation contributes `+c_j` when the product is `+1`.
fn enumerate<T: Clone + PartialOrd>(
    n: usize,
    masks: &[u64],
    weights: &[T],
    zero: T,
    step: impl Fn(T, &T, bool) -> T,
) -> (T, u64) {
    let mut best: Option<(T, u64)> = None;
    for code in 0u64..(1u64 << n) {
        // code's most significant bit (of n) is x_1.
        let bits = reverse_bits(code, n);
        let value = masks
            .iter()
            .zip(weights)
            .fold(zero.clone(), |acc, (&mask, w)| step(acc, w, (mask & bits).count_ones() % 2 == 0));
        if best.as_ref().is_none_or(|(b, _)| value > *b) {
            best = Some((value, bits));
        }
    }
    best.expect("at least the empty assignment")
}

fn reverse_bits(code: u64, n: usize) -> u64 {
    if n == 0 {
        0
    } else {
        code.reverse_bits() >> (64 - n)
    }
}

/// Maximum number of satisfied edges over all colorings, with the lexicographically
/// smallest optimal coloring.
pub fn brute_force_max_satisfied(g: &LabeledGraph) -> Result<(usize, Vec<Sign>), TestkitError> {
    let n = g.n_vertices();
    if n > ORACLE_MAX_VARS {
        return Err(TestkitError::TooManyVariables { n });
    }
    let mut best = (0usize, 0u64);
    let mut found = false;
    for code in 0u64..(1u64 << n) {
        let bits = reverse_bits(code, n);
        let count = g
            .edges()
            .iter()
            .filter(|e| {
                let differ = (bits >> e.u ^ bits >> e.v) & 1 == 1;
                differ == (e.label == EdgeLabel::NotEqual)
            })
            .count();
        if !found || count > best.0 {
            best = (count, bits);
            found = true;
        }
    }
    let coloring = (0..n).map(|i| Sign::from_parity(best.1 >> i & 1 == 1)).collect();
    Ok((best.0, coloring))
}

/// Exact maximum of a pseudo-boolean function by enumeration.
pub fn brute_force_max_poly(f: &FourierPolynomial) -> Result<(Weight, Assignment), TestkitError> {
    let (system, offset) = crate::pseudobool::to_excess_system(f);
    let (best, x) = brute_force_max_excess(&system)?;
    Ok((best + offset, x))
}

/// `κ−1` disjoint blocks of `r` variables; every nonempty subset of a block
/// appears as `Π x_i = −1` with weight 1. Maximum excess is exactly `κ−1`.
pub fn tight_instance(kappa: usize, r: usize) -> Result<LinearSystem, TestkitError> {
    if kappa < 2 || r == 0 || r >= 64 {
        return Err(TestkitError::InvalidTightParameters { kappa, r });
    }
    let n = r * (kappa - 1);
    let mut equations = Vec::with_capacity((kappa - 1) * ((1 << r) - 1));
    for block in 0..kappa - 1 {
        for subset in 1u64..(1u64 << r) {
            let vars = (0..r).filter(|&i| subset >> i & 1 == 1).map(|i| block * r + i);
            equations.push(Equation::new(
                BitVector::from_indices(n, vars),
                Sign::Minus,
                Weight::from_integer(1.into()),
            ));
        }
    }
    Ok(LinearSystem::new(n, equations).expect("generated equations are valid"))
}

fn binomial(n: usize, k: usize) -> u128 {
    (0..k).fold(1u128, |acc, i| acc.saturating_mul((n - i) as u128) / (i as u128 + 1))
}

/// `m` equations with distinct left-hand sides of `1..=r` variables, random
/// right-hand sides and weights uniform in `1..=max_weight`.
pub fn random_instance(
    n: usize,
    m: usize,
    r: usize,
    max_weight: u64,
    seed: u64,
) -> Result<LinearSystem, TestkitError> {
    if r == 0 || r > n {
        return Err(TestkitError::InvalidArity { n, r });
    }
    if max_weight == 0 {
        return Err(TestkitError::InvalidWeight);
    }
    let available = (1..=r).fold(0u128, |acc, j| acc.saturating_add(binomial(n, j)));
    if m as u128 > available {
        return Err(TestkitError::NotEnoughDistinctLhs { m, available });
    }
    let mut seen = std::collections::HashSet::new();
    let mut equations = Vec::with_capacity(m);
    for j in 0..m {
        let mut rng = stream_rng(seed, j as u64);
        let lhs = loop {
            let size = rng.gen_range(1..=r);
            let lhs = BitVector::from_indices(n, sample(&mut rng, n, size));
            if seen.insert(lhs.clone()) {
                break lhs;
            }
        };
        let rhs = if rng.gen_bool(0.5) { Sign::Plus } else { Sign::Minus };
        let weight = Weight::from_integer(rng.gen_range(1..=max_weight).into());
        equations.push(Equation::new(lhs, rhs, weight));
    }
    Ok(LinearSystem::new(n, equations).expect("generated equations are valid"))
}

/// Random polynomial with up to `terms` distinct terms of degree `1..=degree`
/// and nonzero integer coefficients in `[-max_coef, max_coef]`.
pub fn random_polynomial(
    n: usize,
    terms: usize,
    degree: usize,
    max_coef: i64,
    seed: u64,
) -> FourierPolynomial {
    assert!(degree >= 1 && degree <= n && max_coef >= 1);
    let mut f = FourierPolynomial::new(n);
    let mut constant_rng = stream_rng(seed, u64::MAX);
    f.set_constant(Weight::from_integer(constant_rng.gen_range(-max_coef..=max_coef).into()));
    let mut seen = std::collections::HashSet::new();
    for t in 0..terms {
        let mut rng = stream_rng(seed, t as u64);
        let size = rng.gen_range(1..=degree);
        let mut vars: Vec<usize> = sample(&mut rng, n, size).into_iter().collect();
        vars.sort_unstable();
        if !seen.insert(vars.clone()) {
            continue;
        }
        let mut coef = rng.gen_range(1..=max_coef);
        if rng.gen_bool(0.5) {
            coef = -coef;
        }
        f.add_term(&vars, Weight::from_integer(coef.into()))
            .expect("indices are in range");
    }
    f
}

/// Random simple graph with each pair present independently with
/// probability `density`; labels are `≠` unless `labeled`, in which case
/// each label is a fair coin.
pub fn random_graph(n: usize, density: f64, labeled: bool, seed: u64) -> LabeledGraph {
    let mut rng = stream_rng(seed, 0);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(density) {
                let label = if labeled && rng.gen_bool(0.5) {
                    EdgeLabel::Equal
                } else {
                    EdgeLabel::NotEqual
                };
                edges.push((u, v, label));
            }
        }
    }
    LabeledGraph::new(n, edges).expect("generated edges are valid")
}

/// The ratio `value / denom` as an `f64`, for human-readable reports only.
pub fn approx(value: &Weight) -> f64 {
    value.numer().to_f64().unwrap_or(f64::NAN) / value.denom().to_f64().unwrap_or(f64::NAN)
}
