use colorsat::{BitMatrix, BitVec, EchelonForm};
use proptest::prelude::*;

fn bitvec(len: usize) -> impl Strategy<Value = BitVec> {
    proptest::collection::vec(any::<bool>(), len).prop_map(|b| BitVec::from_bools(&b))
}

fn matrix() -> impl Strategy<Value = BitMatrix> {
    (1usize..12, 1usize..80).prop_flat_map(|(rows, cols)| {
        proptest::collection::vec(bitvec(cols), rows)
            .prop_map(move |r| BitMatrix::from_rows(cols, r).unwrap())
    })
}

fn matrix_with_vecs() -> impl Strategy<Value = (BitMatrix, BitVec, BitVec)> {
    matrix().prop_flat_map(|m| {
        let cols = m.n_cols();
        (Just(m), bitvec(cols), bitvec(cols))
    })
}

/// Rank computed with a plain Vec<bool> elimination, independent of the
/// packed implementation.
fn naive_rank(m: &BitMatrix) -> usize {
    let mut rows: Vec<Vec<bool>> = m.rows().iter().map(|r| r.iter().collect()).collect();
    let mut rank = 0;
    for col in 0..m.n_cols() {
        if let Some(p) = (rank..rows.len()).find(|&i| rows[i][col]) {
            rows.swap(rank, p);
            for i in 0..rows.len() {
                if i != rank && rows[i][col] {
                    let pivot = rows[rank].clone();
                    rows[i].iter_mut().zip(&pivot).for_each(|(a, b)| *a ^= b);
                }
            }
            rank += 1;
        }
    }
    rank
}

proptest! {
    #[test]
    fn rank_plus_nullity_is_column_count(m in matrix()) {
        let rank = m.rank();
        prop_assert_eq!(rank, naive_rank(&m));
        prop_assert!(rank <= m.n_rows().min(m.n_cols()));
        prop_assert_eq!(rank + m.nullspace_basis().len(), m.n_cols());
    }

    #[test]
    fn nullspace_combinations_are_in_kernel(m in matrix(), mask in any::<u64>()) {
        let basis = m.nullspace_basis();
        let mut combo = BitVec::zeros(m.n_cols());
        for (i, v) in basis.iter().enumerate() {
            prop_assert!(m.mul_vec(v).unwrap().is_zero());
            if mask >> (i % 64) & 1 == 1 {
                combo.xor_assign(v);
            }
        }
        prop_assert!(m.mul_vec(&combo).unwrap().is_zero());
    }

    #[test]
    fn solve_hits_reachable_syndromes((m, x, _) in matrix_with_vecs()) {
        let s = m.mul_vec(&x).unwrap();
        let y = m.solve(&s).unwrap().expect("s is in the column space");
        prop_assert_eq!(m.mul_vec(&y).unwrap(), s);
    }

    #[test]
    fn mul_vec_is_linear((m, u, v) in matrix_with_vecs()) {
        let lhs = m.mul_vec(&u.xor(&v).unwrap()).unwrap();
        let rhs = m.mul_vec(&u).unwrap().xor(&m.mul_vec(&v).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn rowspace_membership_is_constructive((m, r, _) in matrix_with_vecs(), coeffs in any::<u16>()) {
        // Combinations of rows are members.
        let mut combo = BitVec::zeros(m.n_cols());
        for (i, row) in m.rows().iter().enumerate() {
            if coeffs >> i & 1 == 1 {
                combo.xor_assign(row);
            }
        }
        prop_assert!(m.in_rowspace(&combo).unwrap());

        // For an arbitrary vector, membership agrees with solvability of Hᵀc = r.
        let member = m.in_rowspace(&r).unwrap();
        let c = m.transpose().solve(&r).unwrap();
        prop_assert_eq!(member, c.is_some());
        if let Some(c) = c {
            let mut back = BitVec::zeros(m.n_cols());
            for i in c.iter_ones() {
                back.xor_assign(m.row(i));
            }
            prop_assert_eq!(back, r);
        }
    }

    #[test]
    fn remainder_is_linear_and_vanishes_on_rowspace((m, u, v) in matrix_with_vecs()) {
        let ech = EchelonForm::new(&m);
        let ru = ech.remainder(&u).unwrap();
        let rv = ech.remainder(&v).unwrap();
        prop_assert_eq!(ech.remainder(&u.xor(&v).unwrap()).unwrap(), ru.xor(&rv).unwrap());
        prop_assert_eq!(ru.is_zero(), m.in_rowspace(&u).unwrap());
        for row in m.rows() {
            prop_assert!(ech.remainder(row).unwrap().is_zero());
        }
    }

    #[test]
    fn bitvec_text_round_trip(v in (0usize..200).prop_flat_map(bitvec)) {
        let back: BitVec = v.to_string().parse().unwrap();
        prop_assert_eq!(back.weight(), v.weight());
        prop_assert_eq!(back, v);
    }
}
