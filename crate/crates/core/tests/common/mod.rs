#![allow(dead_code)]

use maxlin2::linsystem::{Assignment, Equation, LinearSystem, Sign, Weight};
use maxlin2::BitVector;
use proptest::prelude::*;

pub fn q(n: i64) -> Weight {
    Weight::from_integer(n.into())
}

pub fn frac(n: i64, d: i64) -> Weight {
    Weight::new(n.into(), d.into())
}

/// Every assignment of `n` variables.
pub fn all_assignments(n: usize) -> impl Iterator<Item = Assignment> {
    (0u64..1 << n).map(move |code| {
        Assignment::from_bits(&BitVector::from_indices(
            n,
            (0..n).filter(|&i| code >> i & 1 == 1),
        ))
    })
}

fn build(n: usize, raw: Vec<(u64, bool, i64, i64)>) -> LinearSystem {
    let equations = raw
        .into_iter()
        .map(|(mask, minus, num, den)| {
            Equation::new(
                BitVector::from_indices(n, (0..n).filter(|&i| mask >> i & 1 == 1)),
                Sign::from_parity(minus),
                frac(num, den),
            )
        })
        .collect();
    LinearSystem::new(n, equations).unwrap()
}

/// Systems on `1..=max_n` variables whose left-hand sides are drawn from a
/// small pool, so repeated left-hand sides (Rule 1) and dependent columns
/// (Rule 2) are common. Weights are integers in `1..=max_w`.
pub fn integral_system(max_n: usize, max_m: usize, max_w: i64) -> impl Strategy<Value = LinearSystem> {
    (1..=max_n).prop_flat_map(move |n| {
        let pool = prop::collection::vec(1u64..1 << n, 1..=max_m.max(1));
        pool.prop_flat_map(move |pool| {
            let len = pool.len();
            prop::collection::vec(
                (prop::sample::select(pool), any::<bool>(), 1..=max_w, Just(1i64)),
                0..=max_m.min(len * 2),
            )
            .prop_map(move |raw| build(n, raw))
        })
    })
}

/// Like [`integral_system`] but with weights `p/q`, `q ∈ {1, 2, 3, 6}`.
pub fn rational_system(max_n: usize, max_m: usize) -> impl Strategy<Value = LinearSystem> {
    (1..=max_n).prop_flat_map(move |n| {
        prop::collection::vec(
            (
                1u64..1 << n,
                any::<bool>(),
                1i64..=9,
                prop::sample::select(vec![1i64, 2, 3, 6]),
            ),
            0..=max_m,
        )
        .prop_map(move |raw| build(n, raw))
    })
}
