//! Small dense exact-rational linear algebra.

use num_traits::{One, Signed, Zero};

use crate::rational::{q, Q};

pub type Matrix = Vec<Vec<Q>>;

pub fn quadratic_form(m: &Matrix, v: &[Q]) -> Q {
    let mut acc = Q::zero();
    for (i, row) in m.iter().enumerate() {
        for (j, a) in row.iter().enumerate() {
            acc += a * v[i] * v[j];
        }
    }
    acc
}

pub fn mat_vec(m: &Matrix, v: &[Q]) -> Vec<Q> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

pub fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Solves `m x = rhs` by Gaussian elimination. Returns `None` if `m` is singular.
pub fn solve(m: &Matrix, rhs: &[Q]) -> Option<Vec<Q>> {
    let n = m.len();
    let mut a: Vec<Vec<Q>> = m
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            let mut r = row.clone();
            r.push(*b);
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        let p = a[col][col];
        for x in a[col].iter_mut() {
            *x /= p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col];
                for c in col..=n {
                    let delta = f * a[col][c];
                    a[r][c] -= delta;
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[n]).collect())
}

/// Sylvester-style test via symmetric elimination: every pivot must be positive.
pub fn is_positive_definite(m: &Matrix) -> bool {
    let n = m.len();
    let mut a = m.clone();
    for k in 0..n {
        if !a[k][k].is_positive() {
            return false;
        }
        for i in k + 1..n {
            let f = a[i][k] / a[k][k];
            for j in k..n {
                let delta = f * a[k][j];
                a[i][j] -= delta;
            }
        }
    }
    true
}

/// A positive rational `lam` with `m - lam*I` positive definite, found by
/// bisection on the grid `(1/64) Z`. `m` must be positive definite.
pub fn min_eigenvalue_lower_bound(m: &Matrix) -> Q {
    let shifted = |lam: Q| -> Matrix {
        let mut s = m.clone();
        for (i, row) in s.iter_mut().enumerate() {
            row[i] -= lam;
        }
        s
    };
    let max_diag = m.iter().enumerate().map(|(i, r)| r[i]).max().unwrap_or_else(Q::one);
    let (mut lo, mut hi) = (0i64, (max_diag * Q::from_integer(64)).ceil().to_integer());
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if is_positive_definite(&shifted(q(mid, 64))) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if lo == 0 {
        // smaller than 1/64: fall back to halving
        let mut lam = q(1, 128);
        while !is_positive_definite(&shifted(lam)) {
            lam /= Q::from_integer(2);
        }
        lam
    } else {
        q(lo, 64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qi;

    #[test]
    fn solves_small_system() {
        let m = vec![vec![qi(1), qi(-1)], vec![qi(-1), qi(2)]];
        assert_eq!(solve(&m, &[qi(1), qi(0)]).unwrap(), vec![qi(2), qi(1)]);
        let singular = vec![vec![qi(1), qi(1)], vec![qi(1), qi(1)]];
        assert!(solve(&singular, &[qi(1), qi(0)]).is_none());
    }

    #[test]
    fn eigenvalue_bound_is_valid_and_tight() {
        // eigenvalues (3 +- sqrt 5)/2, smallest about 0.382
        let m = vec![vec![qi(1), qi(-1)], vec![qi(-1), qi(2)]];
        let lam = min_eigenvalue_lower_bound(&m);
        assert_eq!(lam, q(24, 64));
        assert!(!is_positive_definite(&vec![
            vec![qi(1) - q(25, 64), qi(-1)],
            vec![qi(-1), qi(2) - q(25, 64)]
        ]));
    }
}
