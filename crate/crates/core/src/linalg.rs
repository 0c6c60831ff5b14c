//! Small dense linear algebra on row-major slices.
//!
//! Matrices here have at most a few columns (the number of variables), so
//! the hot paths avoid allocation-heavy generic code; SVD-based queries go
//! through `nalgebra`.

use nalgebra::DMatrix;

/// Relative cutoff under which a pivoted-QR diagonal entry counts as zero.
pub const GRAM_RANK_TOL: f64 = 1e-12;

/// Solves `a x = b` for square `a` (row-major, `n x n`) by Gaussian
/// elimination with partial pivoting. Returns `None` for an exactly
/// singular pivot.
pub fn solve(a: &[f64], n: usize, b: &[f64]) -> Option<Vec<f64>> {
    debug_assert_eq!(a.len(), n * n);
    debug_assert_eq!(b.len(), n);
    let mut m = a.to_vec();
    let mut x = b.to_vec();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| {
            m[i * n + col]
                .abs()
                .partial_cmp(&m[j * n + col].abs())
                .unwrap_or(std::cmp::Ordering::Equal)
        })?;
        if m[pivot * n + col] == 0.0 || !m[pivot * n + col].is_finite() {
            return None;
        }
        if pivot != col {
            for k in 0..n {
                m.swap(col * n + k, pivot * n + k);
            }
            x.swap(col, pivot);
        }
        let p = m[col * n + col];
        for row in col + 1..n {
            let factor = m[row * n + col] / p;
            if factor != 0.0 {
                for k in col..n {
                    m[row * n + k] -= factor * m[col * n + k];
                }
                x[row] -= factor * x[col];
            }
        }
    }
    for row in (0..n).rev() {
        let mut s = x[row];
        for k in row + 1..n {
            s -= m[row * n + k] * x[k];
        }
        x[row] = s / m[row * n + row];
    }
    Some(x)
}

/// Inverse of a square matrix, row-major.
pub fn invert(a: &[f64], n: usize) -> Option<Vec<f64>> {
    let mut inv = vec![0.0; n * n];
    for j in 0..n {
        let mut e = vec![0.0; n];
        e[j] = 1.0;
        let col = solve(a, n, &e)?;
        for i in 0..n {
            inv[i * n + j] = col[i];
        }
    }
    Some(inv)
}

pub fn determinant(a: &[f64], n: usize) -> f64 {
    match n {
        0 => 1.0,
        1 => a[0],
        2 => a[0] * a[3] - a[1] * a[2],
        3 => {
            a[0] * (a[4] * a[8] - a[5] * a[7]) - a[1] * (a[3] * a[8] - a[5] * a[6])
                + a[2] * (a[3] * a[7] - a[4] * a[6])
        }
        _ => DMatrix::from_row_slice(n, n, a).determinant(),
    }
}

/// `sqrt(det(M^T M))` for a `rows x cols` matrix, computed from the diagonal
/// of a Householder QR with column pivoting. Diagonal entries below
/// [`GRAM_RANK_TOL`] times the largest make the result exactly zero.
pub fn gram_sqrt_det(m: &[f64], rows: usize, cols: usize) -> f64 {
    debug_assert_eq!(m.len(), rows * cols);
    if cols == 0 {
        return 1.0;
    }
    if rows < cols {
        return 0.0;
    }
    if cols == 1 {
        return m.iter().map(|v| v * v).sum::<f64>().sqrt();
    }
    let diag = pivoted_qr_diagonal(m, rows, cols);
    let largest = diag[0];
    if largest == 0.0 {
        return 0.0;
    }
    let mut prod = 1.0;
    for &d in &diag {
        if d <= GRAM_RANK_TOL * largest {
            return 0.0;
        }
        prod *= d;
    }
    prod
}

/// Absolute values of the R diagonal of a column-pivoted Householder QR,
/// in pivot order (non-increasing up to rounding).
pub fn pivoted_qr_diagonal(m: &[f64], rows: usize, cols: usize) -> Vec<f64> {
    // Column-major working copy.
    let mut a: Vec<Vec<f64>> = (0..cols)
        .map(|j| (0..rows).map(|i| m[i * cols + j]).collect())
        .collect();
    let mut diag = Vec::with_capacity(cols);
    for k in 0..cols.min(rows) {
        let (best, _) = (k..cols)
            .map(|j| (j, a[j][k..].iter().map(|v| v * v).sum::<f64>()))
            .fold((k, -1.0), |acc, c| if c.1 > acc.1 { c } else { acc });
        a.swap(k, best);
        let norm = a[k][k..].iter().map(|v| v * v).sum::<f64>().sqrt();
        diag.push(norm);
        if norm == 0.0 {
            continue;
        }
        let alpha = if a[k][k] > 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = a[k][k..].to_vec();
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|x| x * x).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        for col in a.iter_mut().skip(k + 1) {
            let dotp: f64 = v.iter().zip(&col[k..]).map(|(x, y)| x * y).sum();
            let f = 2.0 * dotp / vnorm2;
            for (c, vi) in col[k..].iter_mut().zip(&v) {
                *c -= f * vi;
            }
        }
    }
    diag
}

pub fn singular_values(m: &[f64], rows: usize, cols: usize) -> Vec<f64> {
    let mat = DMatrix::from_row_slice(rows, cols, m);
    let mut sv: Vec<f64> = mat.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    sv
}

/// Number of singular values above `rel_tol` times the largest.
pub fn numerical_rank(m: &[f64], rows: usize, cols: usize, rel_tol: f64) -> usize {
    let sv = singular_values(m, rows, cols);
    match sv.first() {
        Some(&s0) if s0 > 0.0 => sv.iter().filter(|&&s| s > rel_tol * s0).count(),
        _ => 0,
    }
}

/// 2-norm condition number; infinite for singular input.
pub fn condition_number(m: &[f64], n: usize) -> f64 {
    let sv = singular_values(m, n, n);
    match (sv.first(), sv.last()) {
        (Some(&hi), Some(&lo)) if lo > 0.0 => hi / lo,
        _ => f64::INFINITY,
    }
}
