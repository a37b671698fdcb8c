use klr_core::intlinalg::{dense_to_sparse, hnf, solve, IntMatrix, RowLattice};
use num_bigint::BigInt;
use proptest::prelude::*;

fn big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

fn arb_matrix() -> impl Strategy<Value = (usize, Vec<Vec<i64>>)> {
    (1usize..=5, 0usize..=6).prop_flat_map(|(w, h)| {
        (Just(w), proptest::collection::vec(proptest::collection::vec(-6i64..=6, w), h))
    })
}

/// Row operations that preserve the row lattice: add multiples, swap, negate.
fn scramble(rows: &[Vec<i64>], ops: &[(usize, usize, i64)]) -> Vec<Vec<i64>> {
    let mut out = rows.to_vec();
    if out.is_empty() {
        return out;
    }
    let h = out.len();
    for &(a, b, c) in ops {
        let (a, b) = (a % h, b % h);
        if a == b {
            out[a] = out[a].iter().map(|x| -x).collect();
        } else {
            let add: Vec<i64> = out[b].iter().map(|x| c * x).collect();
            for (x, y) in out[a].iter_mut().zip(add) {
                *x += y;
            }
        }
    }
    out
}

fn lattice(w: usize, rows: &[Vec<i64>]) -> RowLattice {
    hnf(&IntMatrix::new(w, rows.iter().map(|r| big(r)).collect()).unwrap())
}

proptest! {
    #[test]
    fn hnf_is_canonical((w, rows) in arb_matrix(), ops in proptest::collection::vec((0usize..6, 0usize..6, -3i64..=3), 0..12)) {
        let a = lattice(w, &rows);
        let b = lattice(w, &scramble(&rows, &ops));
        prop_assert_eq!(a.hnf_rows(), b.hnf_rows());
        for row in a.hnf_rows() {
            let p = &row[0].1;
            for other in a.hnf_rows() {
                if let Some((_, v)) = other.iter().find(|(c, _)| *c == row[0].0) {
                    if other[0].0 != row[0].0 {
                        prop_assert!(v >= &BigInt::from(0) && v < p);
                    }
                }
            }
        }
    }

    #[test]
    fn reduce_is_a_coset_invariant(
        (w, rows) in arb_matrix(),
        v in proptest::collection::vec(-20i64..=20, 5),
        u in proptest::collection::vec(-20i64..=20, 5),
        coeffs in proptest::collection::vec(-3i64..=3, 6),
    ) {
        let l = lattice(w, &rows);
        let (v, u) = (big(&v[..w]), big(&u[..w]));
        let rv = l.reduce_dense(&v).unwrap();
        prop_assert_eq!(l.reduce_dense(&rv).unwrap(), rv.clone());
        let diff: Vec<BigInt> = v.iter().zip(&rv).map(|(a, b)| a - b).collect();
        prop_assert!(l.contains(&dense_to_sparse(&diff)).unwrap());
        let sum: Vec<BigInt> = v.iter().zip(&u).map(|(a, b)| a + b).collect();
        let sum2: Vec<BigInt> = rv.iter().zip(&u).map(|(a, b)| a + b).collect();
        prop_assert_eq!(l.reduce_dense(&sum).unwrap(), l.reduce_dense(&sum2).unwrap());
        // shifting by a lattice vector does not change the representative
        let mut shifted = v.clone();
        for (r, c) in rows.iter().zip(&coeffs) {
            for (x, y) in shifted.iter_mut().zip(r) {
                *x += BigInt::from(c * y);
            }
        }
        prop_assert_eq!(l.reduce_dense(&shifted).unwrap(), rv);
    }

    #[test]
    fn solve_reproduces_the_target((w, rows) in arb_matrix(), coeffs in proptest::collection::vec(-4i64..=4, 6)) {
        let m = IntMatrix::new(w, rows.iter().map(|r| big(r)).collect()).unwrap();
        let mut b = vec![BigInt::from(0); w];
        for (r, c) in rows.iter().zip(&coeffs) {
            for (x, y) in b.iter_mut().zip(r) {
                *x += BigInt::from(c * y);
            }
        }
        let c = solve(&m, &b).unwrap().expect("b lies in the row lattice");
        let mut back = vec![BigInt::from(0); w];
        for (r, ci) in m.rows().iter().zip(&c) {
            for (x, y) in back.iter_mut().zip(r) {
                *x += ci * y;
            }
        }
        prop_assert_eq!(back, b);
    }
}

#[test]
fn echelon_rows_round_trip() {
    let l = lattice(3, &[vec![2, 4, 1], vec![0, 3, 3], vec![4, 1, 0]]);
    let again = RowLattice::from_echelon_rows(3, l.hnf_rows()).unwrap();
    assert_eq!(again.hnf_rows(), l.hnf_rows());
    assert!(RowLattice::from_echelon_rows(3, vec![vec![(0, BigInt::from(-1))]]).is_err());
    assert!(l.reduce(&[(7, BigInt::from(1))]).is_err());
}
