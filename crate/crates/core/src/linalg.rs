//! Dense linear algebra over jets and small helpers on plain matrices.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{GeomError, Result};
use crate::jet::Jet;

/// Pivot magnitude below which a system counts as singular.
pub const PIVOT_TOL: f64 = 1e-10;

/// Solves `A X = B` for `X` with Gaussian elimination (partial pivoting on the
/// base-point values). `a` is `n×n` row-major, `b` is `n×r` row-major.
pub fn solve(a: &[Jet], b: &[Jet], n: usize, what: &'static str) -> Result<Vec<Jet>> {
    assert_eq!(a.len(), n * n);
    assert_eq!(b.len() % n, 0);
    let r = b.len() / n;
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    let scale = a.iter().map(|j| j.value().abs()).fold(0.0, f64::max).max(1.0);
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i * n + col].value().abs().total_cmp(&a[j * n + col].value().abs()))
            .expect("non-empty pivot range");
        if a[piv * n + col].value().abs() <= PIVOT_TOL * scale {
            return Err(GeomError::Degenerate {
                what,
                detail: format!("pivot {:.3e} in column {col}", a[piv * n + col].value()),
            });
        }
        if piv != col {
            for k in 0..n {
                a.swap(piv * n + k, col * n + k);
            }
            for k in 0..r {
                b.swap(piv * r + k, col * r + k);
            }
        }
        let inv = a[col * n + col].recip();
        for row in col + 1..n {
            if a[row * n + col].value() == 0.0 && a[row * n + col].coefficients().iter().all(|&c| c == 0.0) {
                continue;
            }
            let factor = &a[row * n + col] * &inv;
            for k in col..n {
                let t = &factor * &a[col * n + k];
                a[row * n + k] -= t;
            }
            for k in 0..r {
                let t = &factor * &b[col * r + k];
                b[row * r + k] -= t;
            }
        }
    }
    for col in (0..n).rev() {
        let inv = a[col * n + col].recip();
        for k in 0..r {
            let mut acc = b[col * r + k].clone();
            for j in col + 1..n {
                acc -= &a[col * n + j] * &b[j * r + k];
            }
            b[col * r + k] = &acc * &inv;
        }
    }
    Ok(b)
}

/// Inverse of an `n×n` jet matrix.
pub fn inverse(a: &[Jet], n: usize, what: &'static str) -> Result<Vec<Jet>> {
    let nv = a[0].nvars();
    let deg = a.iter().map(Jet::degree).min().unwrap_or(0);
    let eye: Vec<Jet> = (0..n * n)
        .map(|i| Jet::constant(nv, deg, if i / n == i % n { 1.0 } else { 0.0 }))
        .collect();
    solve(a, &eye, n, what)
}

pub fn values(js: &[Jet]) -> Vec<f64> {
    js.iter().map(Jet::value).collect()
}

/// Eigenvalue sign counts `(positive, negative)` of a symmetric matrix; eigenvalues
/// with `|λ| <= tol` are counted in neither.
pub fn signature(m: &[f64], n: usize, tol: f64) -> (usize, usize) {
    let mat = DMatrix::from_row_slice(n, n, m);
    let sym = (&mat + mat.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym);
    let pos = eig.eigenvalues.iter().filter(|&&l| l > tol).count();
    let neg = eig.eigenvalues.iter().filter(|&&l| l < -tol).count();
    (pos, neg)
}

pub fn determinant(m: &[f64], n: usize) -> f64 {
    DMatrix::from_row_slice(n, n, m).determinant()
}

pub fn max_abs(xs: impl IntoIterator<Item = f64>) -> f64 {
    xs.into_iter().fold(0.0, |m, x| if x.is_nan() { f64::NAN } else { m.max(x.abs()) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn inverse_of_jet_matrix_has_correct_derivatives() {
        // A(x) = [[1+x, x], [0, 2]]; d/dx A^{-1} = -A^{-1} A' A^{-1}
        let x = Jet::variable(1, 2, 0, 0.5);
        let one = Jet::constant(1, 2, 1.0);
        let two = Jet::constant(1, 2, 2.0);
        let zero = Jet::zero(1, 2);
        let a = vec![&one + &x, x.clone(), zero, two];
        let inv = inverse(&a, 2, "test").unwrap();
        // exact inverse: [[1/(1+x), -x/(2(1+x))], [0, 1/2]]
        let xv = 0.5f64;
        assert_abs_diff_eq!(inv[0].value(), 1.0 / (1.0 + xv), epsilon = 1e-15);
        assert_abs_diff_eq!(inv[0].derivative(&[0]), -1.0 / (1.0 + xv).powi(2), epsilon = 1e-14);
        assert_abs_diff_eq!(inv[1].derivative(&[0]), -0.5 / (1.0 + xv).powi(2), epsilon = 1e-14);
        assert_abs_diff_eq!(inv[1].derivative(&[0, 0]), 1.0 / (1.0 + xv).powi(3), epsilon = 1e-13);
        assert_abs_diff_eq!(inv[3].value(), 0.5);
    }

    #[test]
    fn singular_matrix_is_reported() {
        let one = Jet::constant(1, 1, 1.0);
        let a = vec![one.clone(), one.clone(), one.clone(), one];
        assert!(matches!(inverse(&a, 2, "test"), Err(GeomError::Degenerate { .. })));
    }

    #[test]
    fn signature_counts() {
        assert_eq!(signature(&[-1.0, 0.0, 0.0, 1.0], 2, 1e-12), (1, 1));
        assert_eq!(signature(&[0.0, 1.0, 1.0, 0.0], 2, 1e-12), (1, 1));
    }
}
