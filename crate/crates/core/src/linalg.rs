//! Signature-aware linear algebra helpers.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::jet::Scalar;

/// Relative threshold below which a symmetric form counts as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-9;
pub const FRAME_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FrameChange {
    /// Columns are the new basis vectors.
    #[serde(skip)]
    pub matrix: DMatrix<f64>,
    /// (number of -1 entries, number of +1 entries)
    pub signature: (usize, usize),
}

impl FrameChange {
    /// W^T form W, which should be the canonical diagonal.
    pub fn canonical_defect(&self, form: &DMatrix<f64>) -> f64 {
        let d = self.matrix.transpose() * form * &self.matrix;
        let (p, _) = self.signature;
        let mut worst: f64 = 0.0;
        for i in 0..d.nrows() {
            for j in 0..d.ncols() {
                let target = if i != j {
                    0.0
                } else if i < p {
                    -1.0
                } else {
                    1.0
                };
                worst = worst.max((d[(i, j)] - target).abs());
            }
        }
        worst
    }
}

fn asymmetry(m: &DMatrix<f64>) -> f64 {
    (m - m.transpose()).amax()
}

pub fn orthonormalize(form: &DMatrix<f64>) -> Result<FrameChange> {
    orthonormalize_with(form, DEGENERACY_TOL)
}

/// Basis in which `form` becomes diag(-1,...,-1,+1,...,+1).
///
/// Negative directions come first; within each sign block the vectors keep the
/// order of the coordinate axis they are most aligned with, so diagonal input
/// produces a diagonal rescaling.
pub fn orthonormalize_with(form: &DMatrix<f64>, degeneracy_tol: f64) -> Result<FrameChange> {
    let n = form.nrows();
    if form.ncols() != n {
        return Err(Error::RejectedInput("form must be square".into()));
    }
    let scale = form.amax().max(f64::MIN_POSITIVE);
    if asymmetry(form) > 1e-12 * scale {
        return Err(Error::RejectedInput("form is not symmetric".into()));
    }
    let eig = SymmetricEigen::new(form.clone());
    let largest = eig.eigenvalues.amax();
    let smallest = eig.eigenvalues.iter().fold(f64::INFINITY, |m, x| m.min(x.abs()));
    if largest == 0.0 || smallest <= degeneracy_tol * largest {
        return Err(Error::Degenerate { smallest });
    }

    let mut order: Vec<(bool, usize, usize)> = (0..n)
        .map(|k| {
            let v = eig.eigenvectors.column(k);
            let axis = v.iamax();
            (eig.eigenvalues[k] > 0.0, axis, k)
        })
        .collect();
    order.sort();

    let mut w = DMatrix::zeros(n, n);
    for (col, &(_, axis, k)) in order.iter().enumerate() {
        let mut v = eig.eigenvectors.column(k).into_owned();
        if v[axis] < 0.0 {
            v = -v;
        }
        let s = eig.eigenvalues[k].abs().sqrt();
        w.set_column(col, &(v / s));
    }
    let p = order.iter().filter(|o| !o.0).count();
    Ok(FrameChange { matrix: w, signature: (p, n - p) })
}

/// (negative, positive) eigenvalue counts of a non-degenerate symmetric form.
pub fn signature(form: &DMatrix<f64>) -> Result<(usize, usize)> {
    Ok(orthonormalize(form)?.signature)
}

/// Inverse of a symmetric non-degenerate matrix.
pub fn sym_inverse(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let eig = SymmetricEigen::new(m.clone());
    let largest = eig.eigenvalues.amax();
    let smallest = eig.eigenvalues.iter().fold(f64::INFINITY, |a, x| a.min(x.abs()));
    if largest == 0.0 || smallest <= DEGENERACY_TOL * largest {
        return Err(Error::Degenerate { smallest });
    }
    m.clone().try_inverse().ok_or(Error::Degenerate { smallest })
}

/// Gauss-Jordan inverse over any scalar type (used on dual-number metrics).
pub fn inverse<T: Scalar, const N: usize>(m: &[[T; N]; N]) -> Option<[[T; N]; N]> {
    let mut a = *m;
    let mut inv: [[T; N]; N] =
        std::array::from_fn(|i| std::array::from_fn(|j| if i == j { T::one() } else { T::zero() }));
    for col in 0..N {
        let piv = (col..N).max_by(|&x, &y| a[x][col].re().abs().total_cmp(&a[y][col].re().abs()))?;
        if a[piv][col].re() == 0.0 {
            return None;
        }
        a.swap(col, piv);
        inv.swap(col, piv);
        let r = a[col][col].recip();
        for j in 0..N {
            a[col][j] *= r;
            inv[col][j] *= r;
        }
        for i in 0..N {
            if i == col {
                continue;
            }
            // no shortcut on f.re() == 0: a dual f may still carry derivatives
            let f = a[i][col];
            for j in 0..N {
                let (ac, ic) = (a[col][j], inv[col][j]);
                a[i][j] -= f * ac;
                inv[i][j] -= f * ic;
            }
        }
    }
    Some(inv)
}

pub fn to_dmatrix<const N: usize>(m: &[[f64; N]; N]) -> DMatrix<f64> {
    DMatrix::from_fn(N, N, |i, j| m[i][j])
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::dvector;

    #[test]
    fn identity_frame() {
        let f = orthonormalize(&DMatrix::identity(5, 5)).unwrap();
        assert_eq!(f.signature, (0, 5));
        assert!((f.matrix - DMatrix::<f64>::identity(5, 5)).amax() < 1e-15);
    }

    #[test]
    fn diagonal_rescale() {
        let form = DMatrix::from_diagonal(&dvector![1.0, 1.0, 0.5, 1.0, 0.5]);
        let f = orthonormalize(&form).unwrap();
        let want = DMatrix::from_diagonal(&dvector![1.0, 1.0, 2f64.sqrt(), 1.0, 2f64.sqrt()]);
        assert!((f.matrix - want).amax() < 1e-14);
    }

    #[test]
    fn lorentzian_block() {
        let form = DMatrix::from_row_slice(3, 3, &[0.0, 0.0, 1.0, 0.0, 2.0, 0.0, 1.0, 0.0, 0.0]);
        let f = orthonormalize(&form).unwrap();
        assert_eq!(f.signature, (1, 2));
        assert!(f.canonical_defect(&form) < FRAME_TOL);
    }

    #[test]
    fn degenerate_reports_eigenvalue() {
        let form = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 1.0]);
        match orthonormalize(&form) {
            Err(Error::Degenerate { smallest }) => assert!(smallest < 1e-12),
            other => panic!("expected degeneracy, got {other:?}"),
        }
    }

    #[test]
    fn generic_inverse_matches_nalgebra() {
        let m = [[4.0, 1.0, 0.5], [1.0, 3.0, 0.2], [0.5, 0.2, 2.0]];
        let inv = inverse(&m).unwrap();
        let want = to_dmatrix(&m).try_inverse().unwrap();
        assert!((to_dmatrix(&inv) - want).amax() < 1e-14);
    }
}
