//! Central finite differences, used as independent oracles for the
//! dual-number derivatives.

use crate::error::{Error, Result};

/// Step for first derivatives: 1e-5 scaled by the coordinate magnitude.
pub fn default_step(x: f64) -> f64 {
    1e-5 * x.abs().max(1.0)
}

/// (f(p + h e) - f(p - h e)) / 2h, with every stencil point domain checked.
pub fn central_difference(
    f: impl Fn(&[f64]) -> f64,
    in_domain: impl Fn(&[f64]) -> bool,
    p: &[f64],
    dir: usize,
    h: f64,
) -> Result<f64> {
    nested_difference(&f, &in_domain, p, &[dir], h)
}

/// One Richardson step on top of `central_difference`: (4 D(h/2) - D(h)) / 3.
pub fn richardson_difference(
    f: impl Fn(&[f64]) -> f64,
    in_domain: impl Fn(&[f64]) -> bool,
    p: &[f64],
    dir: usize,
    h: f64,
) -> Result<f64> {
    richardson_nested(&f, &in_domain, p, &[dir], h)
}

/// Mixed partial derivative along `dirs` by nested central differences.
pub fn nested_difference<F, D>(f: &F, in_domain: &D, p: &[f64], dirs: &[usize], h: f64) -> Result<f64>
where
    F: Fn(&[f64]) -> f64 + ?Sized,
    D: Fn(&[f64]) -> bool + ?Sized,
{
    let Some((&d, rest)) = dirs.split_first() else {
        if !in_domain(p) {
            return Err(Error::RejectedInput(format!("stencil point {p:?} leaves the domain")));
        }
        return Ok(f(p));
    };
    let mut q = p.to_vec();
    q[d] = p[d] + h;
    let plus = nested_difference(f, in_domain, &q, rest, h)?;
    q[d] = p[d] - h;
    let minus = nested_difference(f, in_domain, &q, rest, h)?;
    Ok((plus - minus) / (2.0 * h))
}

/// Richardson-extrapolated nested difference; the error of the plain stencil
/// is even in h, so one step removes the h^2 term.
pub fn richardson_nested<F, D>(f: &F, in_domain: &D, p: &[f64], dirs: &[usize], h: f64) -> Result<f64>
where
    F: Fn(&[f64]) -> f64 + ?Sized,
    D: Fn(&[f64]) -> bool + ?Sized,
{
    let coarse = nested_difference(f, in_domain, p, dirs, h)?;
    let fine = nested_difference(f, in_domain, p, dirs, h / 2.0)?;
    Ok((4.0 * fine - coarse) / 3.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn anywhere(_: &[f64]) -> bool {
        true
    }

    #[test]
    fn constant_and_linear() {
        let p = [0.3, -1.2, 2.0];
        assert_eq!(central_difference(|_| 3.0, anywhere, &p, 1, 1e-5).unwrap(), 0.0);
        let d = central_difference(|x| x[2], anywhere, &p, 2, 1e-5).unwrap();
        assert!((d - 1.0).abs() < 1e-10);
    }

    #[test]
    fn delta_derivative() {
        // Delta = s1 s2 - s12^2 at (2, 3, 1); d/ds1 = s2 = 3
        let delta = |x: &[f64]| x[0] * x[1] - x[2] * x[2];
        let d = richardson_difference(delta, anywhere, &[2.0, 3.0, 1.0], 0, default_step(2.0)).unwrap();
        assert!((d - 3.0).abs() < 1e-10);
    }

    #[test]
    fn quadratic_is_exact() {
        let q = |x: &[f64]| 2.0 * x[0] * x[0] - x[0] * x[1] + 0.5 * x[1] * x[1];
        let d = central_difference(q, anywhere, &[1.5, -0.5], 0, 1e-3).unwrap();
        assert!((d - (4.0 * 1.5 + 0.5)).abs() < 1e-11);
        let h = nested_difference(&q, &anywhere, &[1.5, -0.5], &[0, 1], 1e-3).unwrap();
        assert!((h + 1.0).abs() < 1e-9);
    }

    #[test]
    fn stencil_outside_domain_rejected() {
        let positive = |x: &[f64]| x[0] > 0.0;
        assert!(central_difference(|x| x[0].ln(), positive, &[1e-6], 0, 1e-5).is_err());
    }
}
