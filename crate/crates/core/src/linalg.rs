//! Exact Gaussian elimination over the rationals.

use alloc::vec::Vec;
use num_traits::Zero;

use crate::Rational;

/// Solve `a * x = b` for square `a` (row-major). `None` when `a` is singular.
pub(crate) fn solve(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = a.len();
    debug_assert!(a.iter().all(|row| row.len() == n) && b.len() == n);
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let inv = a[col][col].recip();
        for j in col..n {
            a[col][j] = &a[col][j] * &inv;
        }
        b[col] = &b[col] * &inv;
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone();
            for j in col..n {
                let delta = &factor * &a[col][j];
                a[r][j] -= delta;
            }
            let delta = &factor * &b[col];
            b[r] -= delta;
        }
    }
    Some(b)
}
