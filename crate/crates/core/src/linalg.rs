//! Dense Gaussian elimination over exact rationals.
//!
//! Systems in this crate are tiny (one row per graph vertex), so a dense
//! elimination with first-nonzero pivoting is all that is needed.

use crate::rational::Q;
use num_traits::Zero;

/// Outcome of reducing a (possibly rectangular) system `A x = b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Solution {
    Unique(Vec<Q>),
    /// Consistent but with free columns; the returned vector sets every free
    /// variable to zero.
    Underdetermined { particular: Vec<Q>, free: Vec<usize> },
    Inconsistent,
}

/// Row-reduces the augmented matrix `[A | b]`. `a` is row-major with
/// `ncols` columns per row.
pub fn solve(mut a: Vec<Vec<Q>>, mut b: Vec<Q>, ncols: usize) -> Solution {
    let nrows = a.len();
    debug_assert_eq!(b.len(), nrows);
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        let Some(p) = (row..nrows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(row, p);
        b.swap(row, p);
        let inv = a[row][col].recip();
        for v in &mut a[row][col..ncols] {
            *v *= &inv;
        }
        b[row] = &b[row] * &inv;
        for r in 0..nrows {
            if r == row || a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone();
            let pivot_row = a[row][col..ncols].to_vec();
            for (v, p) in a[r][col..ncols].iter_mut().zip(&pivot_row) {
                *v -= &factor * p;
            }
            let delta = &factor * &b[row];
            b[r] -= delta;
        }
        pivots.push(col);
        row += 1;
        if row == nrows {
            break;
        }
    }
    if b[row..].iter().any(|v| !v.is_zero()) {
        return Solution::Inconsistent;
    }
    let mut x = vec![Q::zero(); ncols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = b[r].clone();
    }
    if pivots.len() == ncols {
        Solution::Unique(x)
    } else {
        let free = (0..ncols).filter(|c| !pivots.contains(c)).collect();
        Solution::Underdetermined { particular: x, free }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, ratio};

    fn m(rows: &[&[i64]]) -> Vec<Vec<Q>> {
        rows.iter().map(|r| r.iter().map(|&v| q(v)).collect()).collect()
    }

    #[test]
    fn square_unique() {
        let a = m(&[&[2, 1], &[1, 3]]);
        let b = vec![q(3), q(5)];
        assert_eq!(solve(a, b, 2), Solution::Unique(vec![ratio(4, 5), ratio(7, 5)]));
    }

    #[test]
    fn overdetermined_consistent() {
        let a = m(&[&[1, 0], &[0, 1], &[1, 1]]);
        let b = vec![q(1), q(2), q(3)];
        assert_eq!(solve(a, b, 2), Solution::Unique(vec![q(1), q(2)]));
    }

    #[test]
    fn inconsistent_and_free() {
        let a = m(&[&[1, 1], &[1, 1]]);
        assert_eq!(solve(a.clone(), vec![q(1), q(2)], 2), Solution::Inconsistent);
        match solve(a, vec![q(1), q(1)], 2) {
            Solution::Underdetermined { free, .. } => assert_eq!(free, vec![1]),
            other => panic!("{other:?}"),
        }
    }
}
