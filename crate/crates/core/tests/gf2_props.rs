use maxlin2::gf2::{self, BitMatrix};
use maxlin2::BitVector;
use proptest::prelude::*;

fn matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = BitMatrix> {
    (1..=max_rows, 1..=max_cols).prop_flat_map(|(rows, cols)| {
        prop::collection::vec(prop::collection::vec(any::<bool>(), cols), rows).prop_map(move |bits| {
            let rows = bits
                .into_iter()
                .map(|row| BitVector::from_indices(cols, (0..cols).filter(|&j| row[j])))
                .collect();
            BitMatrix::from_rows(cols, rows).unwrap()
        })
    })
}

fn vector(len: usize) -> impl Strategy<Value = BitVector> {
    prop::collection::vec(any::<bool>(), len)
        .prop_map(move |bits| BitVector::from_indices(len, (0..len).filter(|&i| bits[i])))
}

proptest! {
    #[test]
    fn rank_is_transpose_invariant(m in matrix(12, 70)) {
        prop_assert_eq!(gf2::rank(&m), gf2::rank(&m.transpose()));
        prop_assert!(gf2::rank(&m) <= m.n_rows().min(m.n_cols()));
    }

    #[test]
    fn greedy_rows_and_columns_are_bases(m in matrix(10, 10)) {
        let r = gf2::rank(&m);
        let rows = gf2::independent_rows(&m);
        let cols = gf2::independent_columns(&m);
        prop_assert_eq!(rows.len(), r);
        prop_assert_eq!(cols.len(), r);
        let sub = BitMatrix::from_rows(m.n_cols(), rows.iter().map(|&i| m.rows()[i].clone()).collect()).unwrap();
        prop_assert_eq!(gf2::rank(&sub), r);
        let t = m.transpose();
        let sub = BitMatrix::from_rows(m.n_rows(), cols.iter().map(|&j| t.rows()[j].clone()).collect()).unwrap();
        prop_assert_eq!(gf2::rank(&sub), r);
    }

    #[test]
    fn solve_square_finds_solutions_when_they_exist(
        (m, y) in (1usize..=12).prop_flat_map(|n| (
            prop::collection::vec(vector(n), n).prop_map(move |rows| BitMatrix::from_rows(n, rows).unwrap()),
            vector(n),
        ))
    ) {
        let rhs = m.mul_vec(&y).unwrap();
        let sol = gf2::solve_square(&m, &rhs).unwrap().expect("rhs is in the image");
        prop_assert_eq!(m.mul_vec(&sol).unwrap(), rhs);
        if gf2::rank(&m) == m.n_cols() {
            prop_assert_eq!(sol, y);
        }
    }

    #[test]
    fn expressions_sum_to_target(m in matrix(10, 10), target_bits in prop::collection::vec(any::<bool>(), 10)) {
        let basis: Vec<BitVector> = gf2::independent_rows(&m).into_iter().map(|i| m.rows()[i].clone()).collect();
        let n = m.n_cols();
        let target = BitVector::from_indices(n, (0..n).filter(|&i| target_bits[i]));
        match gf2::express_in_basis(&target, &basis).unwrap() {
            Some(subset) => {
                let sum = subset.iter().fold(BitVector::zeros(n), |acc, &i| acc.xor(&basis[i]));
                prop_assert_eq!(sum, target);
            }
            None => {
                let mut with = basis.clone();
                with.push(target);
                prop_assert_eq!(gf2::rank(&BitMatrix::from_rows(n, with).unwrap()), basis.len() + 1);
            }
        }
    }

    #[test]
    fn dot_is_bilinear(a in vector(130), b in vector(130), c in vector(130)) {
        prop_assert_eq!(a.xor(&b).dot(&c), a.dot(&c) ^ b.dot(&c));
        prop_assert_eq!(a.xor(&a), BitVector::zeros(130));
        prop_assert_eq!(a.xor(&b).count_ones() % 2, (a.count_ones() + b.count_ones()) % 2);
    }
}
