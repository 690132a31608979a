//! Dense least squares by Householder QR with column-norm pivoting.
//!
//! The triangular factor's diagonal is non-increasing in magnitude, so
//! `|R₁₁| / |R_kk|` is a cheap condition estimate and small trailing
//! diagonals mark the numerical rank.

use alloc::vec;
use alloc::vec::Vec;
use nalgebra::{DMatrix, DVector};
#[allow(unused_imports)]
use num_traits::Float;

/// Result of [`solve`].
#[derive(Debug, Clone)]
pub struct LeastSquares {
    pub solution: DVector<f64>,
    /// `|R₁₁| / |R_nn|` (infinite when the last diagonal vanishes).
    pub condition: f64,
    /// Columns retained after truncating diagonals below `rank_tol · |R₁₁|`.
    pub rank: usize,
}

/// Minimizes `‖A x − b‖₂`. Trailing columns whose pivot falls below
/// `rank_tol · |R₁₁|` are dropped (their coefficients set to zero).
pub fn solve(a: &DMatrix<f64>, b: &DVector<f64>, rank_tol: f64) -> LeastSquares {
    let (m, n) = a.shape();
    assert_eq!(b.len(), m, "right-hand side length");
    let mut q = a.clone();
    let mut rhs = b.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut norms: Vec<f64> = (0..n).map(|j| q.column(j).norm_squared()).collect();
    let steps = m.min(n);
    let mut diag = vec![0.0; steps];
    let mut v = vec![0.0; m];

    for k in 0..steps {
        let (pivot, _) = norms[k..]
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |acc, (i, &x)| if x > acc.1 { (i, x) } else { acc });
        let p = k + pivot;
        if p != k {
            q.swap_columns(k, p);
            norms.swap(k, p);
            perm.swap(k, p);
        }
        let alpha = {
            let col = q.column(k);
            let s: f64 = col.rows(k, m - k).norm_squared();
            s.sqrt()
        };
        if alpha == 0.0 {
            diag[k] = 0.0;
            continue;
        }
        let x0 = q[(k, k)];
        let beta = if x0 >= 0.0 { -alpha } else { alpha };
        for i in k..m {
            v[i] = q[(i, k)];
        }
        v[k] -= beta;
        let vnorm2: f64 = v[k..m].iter().map(|x| x * x).sum();
        q[(k, k)] = beta;
        for i in (k + 1)..m {
            q[(i, k)] = 0.0;
        }
        diag[k] = beta;
        if vnorm2 > 0.0 {
            for j in (k + 1)..n {
                let dot: f64 = (k..m).map(|i| v[i] * q[(i, j)]).sum();
                let f = 2.0 * dot / vnorm2;
                for i in k..m {
                    q[(i, j)] -= f * v[i];
                }
            }
            let dot: f64 = (k..m).map(|i| v[i] * rhs[i]).sum();
            let f = 2.0 * dot / vnorm2;
            for i in k..m {
                rhs[i] -= f * v[i];
            }
        }
        // recomputed rather than downdated: MFS columns are strongly graded
        for j in (k + 1)..n {
            norms[j] = q.column(j).rows(k + 1, m - k - 1).norm_squared();
        }
    }

    let top = diag.first().map(|d| d.abs()).unwrap_or(0.0);
    let last = diag.last().map(|d| d.abs()).unwrap_or(0.0);
    let condition = if last > 0.0 { top / last } else { f64::INFINITY };
    let rank = diag.iter().take_while(|d| d.abs() > rank_tol * top).count();

    let mut z = vec![0.0; n];
    for k in (0..rank).rev() {
        let mut s = rhs[k];
        for j in (k + 1)..rank {
            s -= q[(k, j)] * z[j];
        }
        z[k] = s / q[(k, k)];
    }
    let mut solution = DVector::zeros(n);
    for (k, &col) in perm.iter().enumerate() {
        solution[col] = z[k];
    }
    LeastSquares { solution, condition, rank }
}
