//! Principal matrix logarithm by inverse scaling and squaring.

use nalgebra::{DMatrix, Schur};

use crate::error::{Error, Result};

/// Square roots are taken until ||M - I|| falls below this.
const SQRT_TARGET: f64 = 0.25;
const MAX_SQRTS: usize = 40;
const SCHUR_MAX_ITER: usize = 1000;

pub fn matrix_exp(a: &DMatrix<f64>) -> DMatrix<f64> {
    a.clone().exp()
}

fn denman_beavers(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = m.nrows();
    let mut y = m.clone();
    let mut z = DMatrix::identity(n, n);
    for _ in 0..60 {
        let yi = y.clone().try_inverse().ok_or_else(|| Error::LogFailure("singular iterate".into()))?;
        let zi = z.clone().try_inverse().ok_or_else(|| Error::LogFailure("singular iterate".into()))?;
        let y_next = (&y + zi) * 0.5;
        let z_next = (&z + yi) * 0.5;
        let change = (&y_next - &y).amax();
        y = y_next;
        z = z_next;
        if change <= 1e-15 * y.amax() {
            return Ok(y);
        }
    }
    Err(Error::LogFailure("square root iteration did not converge".into()))
}

fn log_near_identity(x: &DMatrix<f64>) -> DMatrix<f64> {
    // log(I + X) = X - X^2/2 + X^3/3 - ...
    let mut term = x.clone();
    let mut out = x.clone();
    for k in 2..200 {
        term = &term * x;
        let add = &term * (if k % 2 == 0 { -1.0 } else { 1.0 } / k as f64);
        out += &add;
        if add.amax() < 1e-18 * out.amax().max(1e-300) {
            break;
        }
    }
    out
}

/// Principal logarithm. Fails if an eigenvalue lies on or near the closed
/// negative real axis.
pub fn matrix_log(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = m.nrows();
    if m.ncols() != n {
        return Err(Error::RejectedInput("matrix_log needs a square matrix".into()));
    }
    let scale = m.amax().max(1.0);
    let id = DMatrix::<f64>::identity(n, n);
    // capped: the uncapped Schur iteration can stall on near-identity input
    match Schur::try_new(m.clone(), f64::EPSILON, SCHUR_MAX_ITER) {
        Some(schur) => {
            for ev in schur.complex_eigenvalues().iter() {
                if ev.norm() <= 1e-12 * scale || (ev.re < 0.0 && ev.im.abs() <= 1e-8 * ev.norm()) {
                    return Err(Error::LogFailure(format!("eigenvalue {ev} on the branch cut")));
                }
            }
        }
        // ||M - I|| < 1 keeps the spectrum inside the unit disc around 1
        None if (m - &id).norm() < 1.0 => {}
        None => return Err(Error::LogFailure("eigenvalues did not converge".into())),
    }
    let mut r = m.clone();
    let mut s = 0;
    while (&r - &id).norm() > SQRT_TARGET {
        if s == MAX_SQRTS {
            return Err(Error::LogFailure("too many square roots".into()));
        }
        r = denman_beavers(&r)?;
        s += 1;
    }
    Ok(log_near_identity(&(r - id)) * 2f64.powi(s as i32))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_has_zero_log() {
        assert_eq!(matrix_log(&DMatrix::identity(4, 4)).unwrap().amax(), 0.0);
    }

    #[test]
    fn rotation_angle_recovered() {
        let t = 2.5_f64;
        let m = DMatrix::from_row_slice(2, 2, &[t.cos(), -t.sin(), t.sin(), t.cos()]);
        let l = matrix_log(&m).unwrap();
        assert!((l[(1, 0)] - t).abs() < 1e-12 && l[(0, 0)].abs() < 1e-12);
    }

    #[test]
    fn negative_axis_rejected() {
        let m = DMatrix::from_diagonal(&nalgebra::dvector![-1.0, 2.0]);
        assert!(matches!(matrix_log(&m), Err(Error::LogFailure(_))));
    }
}
