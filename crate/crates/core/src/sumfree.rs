//! Sum-free subsets of a spanning vector family.
//!
//! `K ⊆ M` is M-sum-free when no sum of two or more distinct members of `K`
//! lies in `M`. If `M` spans `F2^n`, every member has at most `r` ones and
//! `n ≥ r(k−1)+1`, such a `K` of size `k` can be found by repeatedly
//! shortening an expression of the all-ones vector in terms of members of
//! `M`.

use std::collections::HashSet;

use thiserror::Error;

use crate::gf2::{self, Basis, BitVector};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SumFreeError {
    #[error("vector {index} has length {found}, family dimension is {expected}")]
    DimensionMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("vector {index} is repeated")]
    Duplicate { index: usize },
    #[error("vector {index} is zero")]
    ZeroVector { index: usize },
    #[error("vector {index} has {ones} nonzero coordinates, more than r = {r}")]
    ArityExceeded { index: usize, ones: usize, r: usize },
    #[error("r must be positive")]
    ZeroArity,
    #[error("family spans a subspace of dimension {rank}, not F2^{n}")]
    NotSpanning { rank: usize, n: usize },
    #[error("n < r(k-1)+1: n = {n}, r = {r}, k = {k}")]
    DimensionTooSmall { n: usize, r: usize, k: usize },
    #[error("k must be positive")]
    ZeroK,
    #[error("candidate vector {index} is not a member of the family")]
    NotASubset { index: usize },
    #[error("candidate set of size {size} is too large to verify exhaustively")]
    TooLarge { size: usize },
}

/// Distinct nonzero vectors of `F2^n`, each with at most `r` ones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VectorFamily {
    dim: usize,
    r: usize,
    vectors: Vec<BitVector>,
}

impl VectorFamily {
    pub fn new(dim: usize, r: usize, vectors: Vec<BitVector>) -> Result<Self, SumFreeError> {
        if r == 0 {
            return Err(SumFreeError::ZeroArity);
        }
        let mut seen = HashSet::new();
        for (index, v) in vectors.iter().enumerate() {
            if v.len() != dim {
                return Err(SumFreeError::DimensionMismatch {
                    index,
                    expected: dim,
                    found: v.len(),
                });
            }
            if v.is_zero() {
                return Err(SumFreeError::ZeroVector { index });
            }
            let ones = v.count_ones();
            if ones > r {
                return Err(SumFreeError::ArityExceeded { index, ones, r });
            }
            if !seen.insert(v) {
                return Err(SumFreeError::Duplicate { index });
            }
        }
        Ok(Self { dim, r, vectors })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn vectors(&self) -> &[BitVector] {
        &self.vectors
    }
}

/// Indices (into `m.vectors()`) of a k-element M-sum-free subset.
pub fn find_msum_free_indices(m: &VectorFamily, k: usize) -> Result<Vec<usize>, SumFreeError> {
    let (n, r) = (m.dim, m.r);
    if k == 0 {
        return Err(SumFreeError::ZeroK);
    }
    if n < r * (k - 1) + 1 {
        return Err(SumFreeError::DimensionTooSmall { n, r, k });
    }

    // Greedy basis in input order.
    let mut span = Basis::new(n);
    let basis: Vec<usize> = (0..m.vectors.len())
        .filter(|&i| span.insert(&m.vectors[i]))
        .collect();
    if basis.len() < n {
        return Err(SumFreeError::NotSpanning {
            rank: basis.len(),
            n,
        });
    }
    if k == 1 {
        return Ok(vec![0]);
    }

    let ones = BitVector::ones(n);
    assert!(
        !m.vectors.contains(&ones),
        "the all-ones vector has n > r ones and cannot be in the family"
    );

    // Current expression 1 = Σ expr, kept sorted by family index.
    let mut expr = represent(&ones, &basis, m).expect("a basis spans the all-ones vector");
    'shorten: loop {
        debug_assert!(is_expression_of_ones(&expr, m));
        let members: Vec<BitVector> = expr.iter().map(|&i| m.vectors[i].clone()).collect();
        for v in (0..m.vectors.len()).filter(|i| !expr.contains(i)) {
            let Some(subset) = gf2::express_in_basis(&m.vectors[v], &members)
                .expect("the expression is linearly independent")
            else {
                continue;
            };
            // v is distinct from every member, so at least two were used.
            assert!(subset.len() >= 2);
            let mut next: Vec<usize> = expr
                .iter()
                .enumerate()
                .filter(|(pos, _)| !subset.contains(pos))
                .map(|(_, &i)| i)
                .collect();
            next.push(v);
            next.sort_unstable();
            assert!(next.len() < expr.len());
            expr = next;
            continue 'shorten;
        }
        break;
    }

    let s = expr.len();
    assert!(s * r >= n && s >= k, "sum-free expression too short: s = {s}");
    expr.truncate(k);
    Ok(expr)
}

fn represent(target: &BitVector, basis: &[usize], m: &VectorFamily) -> Option<Vec<usize>> {
    let vectors: Vec<BitVector> = basis.iter().map(|&i| m.vectors[i].clone()).collect();
    gf2::express_in_basis(target, &vectors)
        .expect("basis vectors are independent")
        .map(|subset| {
            let mut idx: Vec<usize> = subset.into_iter().map(|p| basis[p]).collect();
            idx.sort_unstable();
            idx
        })
}

fn is_expression_of_ones(expr: &[usize], m: &VectorFamily) -> bool {
    let mut span = Basis::new(m.dim);
    let independent = expr.iter().all(|&i| span.insert(&m.vectors[i]));
    let sum = expr.iter().fold(BitVector::zeros(m.dim), |acc, &i| acc.xor(&m.vectors[i]));
    independent && sum == BitVector::ones(m.dim)
}

/// A k-element M-sum-free subset of `m`.
pub fn find_msum_free(m: &VectorFamily, k: usize) -> Result<Vec<BitVector>, SumFreeError> {
    Ok(find_msum_free_indices(m, k)?
        .into_iter()
        .map(|i| m.vectors[i].clone())
        .collect())
}

/// Largest candidate set [`verify_msum_free`] will enumerate.
pub const VERIFY_LIMIT: usize = 20;

/// Exhaustively checks that `k` is linearly independent and that no sum of
/// two or more of its members lies in `m`.
pub fn verify_msum_free(m: &VectorFamily, k: &[BitVector]) -> Result<bool, SumFreeError> {
    for (index, v) in k.iter().enumerate() {
        if !m.vectors.contains(v) {
            return Err(SumFreeError::NotASubset { index });
        }
    }
    if k.len() > VERIFY_LIMIT {
        return Err(SumFreeError::TooLarge { size: k.len() });
    }
    let members: HashSet<&BitVector> = m.vectors.iter().collect();
    // Gray-code walk over all subsets; the zero sum of a nonempty subset
    // signals dependence.
    let mut sum = BitVector::zeros(m.dim);
    let mut size = 0usize;
    for step in 1u64..(1u64 << k.len()) {
        let bit = step.trailing_zeros() as usize;
        sum.xor_assign(&k[bit]);
        let gray = step ^ (step >> 1);
        size = if gray >> bit & 1 == 1 { size + 1 } else { size - 1 };
        if sum.is_zero() || (size >= 2 && members.contains(&sum)) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam(r: usize, vs: &[&str]) -> VectorFamily {
        let n = vs[0].len();
        VectorFamily::new(n, r, vs.iter().map(|v| BitVector::from_bit_str(v)).collect()).unwrap()
    }

    fn bv(s: &str) -> BitVector {
        BitVector::from_bit_str(s)
    }

    #[test]
    fn standard_basis_prefix() {
        let m = fam(1, &["10000", "01000", "00100", "00010", "00001"]);
        for k in 1..=5 {
            let got = find_msum_free(&m, k).unwrap();
            assert_eq!(got, m.vectors()[..k].to_vec());
            assert!(verify_msum_free(&m, &got).unwrap());
        }
    }

    #[test]
    fn small_family_with_a_pair_sum() {
        let m = fam(2, &["100", "010", "001", "110"]);
        assert!(verify_msum_free(&m, &[bv("100"), bv("001")]).unwrap());
        assert!(!verify_msum_free(&m, &[bv("100"), bv("010")]).unwrap());
        let got = find_msum_free(&m, 2).unwrap();
        assert_eq!(got.len(), 2);
        assert!(verify_msum_free(&m, &got).unwrap());
    }

    #[test]
    fn rejects_small_dimension() {
        let m = fam(2, &["100", "010", "001", "110"]);
        assert_eq!(
            find_msum_free(&m, 3),
            Err(SumFreeError::DimensionTooSmall { n: 3, r: 2, k: 3 })
        );
    }

    #[test]
    fn rejects_non_spanning() {
        let m = fam(2, &["110", "011"]);
        assert_eq!(
            find_msum_free(&m, 1),
            Err(SumFreeError::NotSpanning { rank: 2, n: 3 })
        );
    }

    #[test]
    fn family_validation() {
        assert_eq!(
            VectorFamily::new(3, 1, vec![bv("110")]),
            Err(SumFreeError::ArityExceeded {
                index: 0,
                ones: 2,
                r: 1
            })
        );
        assert_eq!(
            VectorFamily::new(2, 2, vec![bv("10"), bv("10")]),
            Err(SumFreeError::Duplicate { index: 1 })
        );
        assert_eq!(
            VectorFamily::new(2, 2, vec![bv("00")]),
            Err(SumFreeError::ZeroVector { index: 0 })
        );
    }

    #[test]
    fn singletons_are_sum_free() {
        let m = fam(2, &["110", "011", "001"]);
        assert!(verify_msum_free(&m, &[bv("011")]).unwrap());
        assert_eq!(
            verify_msum_free(&m, &[bv("111")]),
            Err(SumFreeError::NotASubset { index: 0 })
        );
    }

    #[test]
    fn case_two_shortening_is_exercised() {
        // 111 = 100 + 010 + 001 at first; 110 = 100 + 010 shortens it to
        // 001 + 110, which is sum-free.
        let m = fam(2, &["100", "010", "001", "110"]);
        assert_eq!(find_msum_free_indices(&m, 2).unwrap(), vec![2, 3]);
    }
}
