use std::sync::Arc;

use num_traits::One;
use opch_core::linalg::*;
use opch_core::{LinalgError, Rational};

fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn dense(v: &[i64]) -> SparseVec {
    sparse_from_dense(&v.iter().map(|&x| q(x)).collect::<Vec<_>>())
}

fn basis(rows: &[&[i64]], ncols: usize) -> SpanBasis<usize> {
    let vs: Vec<SparseVec> = rows.iter().map(|r| dense(r)).collect();
    echelonize(&vs, Arc::new((0..ncols).collect())).unwrap()
}

#[test]
fn echelonize_examples() {
    assert_eq!(basis(&[&[1, 0], &[0, 1]], 2).rank(), 2);
    assert_eq!(basis(&[&[1, 1], &[2, 2]], 2).rank(), 1);
    assert_eq!(basis(&[], 2).rank(), 0);
}

#[test]
fn contains_examples() {
    let b = basis(&[&[1, 0]], 2);
    assert!(b.contains(&dense(&[3, 0])).unwrap());
    assert!(!b.contains(&dense(&[0, 1])).unwrap());
    assert!(basis(&[], 2).contains(&dense(&[0, 0])).unwrap());
}

#[test]
fn dimension_mismatch() {
    let b = basis(&[&[1, 0]], 2);
    assert_eq!(
        b.contains(&dense(&[0, 0, 1])),
        Err(LinalgError::DimensionMismatch {
            expected: 2,
            found: 3
        })
    );
    assert!(solve_preimage(&[vec![q(1)]], &[q(1), q(0)]).is_err());
}

#[test]
fn solve_examples() {
    assert_eq!(
        solve_preimage(&[vec![q(1), q(0)], vec![q(0), q(1)]], &[q(2), q(3)]).unwrap(),
        vec![q(2), q(3)]
    );
    assert_eq!(
        solve_preimage(&[vec![q(1), q(1)]], &[q(1), q(0)]),
        Err(LinalgError::NotInImage)
    );
    assert_eq!(
        solve_preimage(&[vec![q(1), q(0)], vec![q(1), q(0)]], &[q(1), q(0)]).unwrap(),
        vec![q(1), q(0)]
    );
}

#[test]
fn rref_rows_have_unit_pivots_and_clean_columns() {
    let b = basis(&[&[2, 4, 6, 0], &[1, 1, 1, 1], &[0, 3, 1, 5]], 4);
    assert_eq!(b.rank(), 3);
    for (r, row) in b.rows().iter().enumerate() {
        assert!(row[0].1.is_one());
        for (r2, other) in b.rows().iter().enumerate() {
            if r2 != r {
                assert!(other.iter().all(|(c, _)| *c != row[0].0));
            }
        }
    }
}

#[test]
fn quotient_coordinates_are_canonical() {
    let b = basis(&[&[1, -1, 0]], 3);
    assert_eq!(b.quotient_dim(), 2);
    let x = b.quotient_coords(&dense(&[1, 0, 0])).unwrap();
    let y = b.quotient_coords(&dense(&[0, 1, 0])).unwrap();
    assert_eq!(x, y);
}
