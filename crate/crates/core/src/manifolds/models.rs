//! Metric and potential evaluators generic over the scalar type, so the same
//! code yields values and exact derivatives.

use crate::jet::{seed2, Scalar};

/// A Riemannian (or pseudo-Riemannian) metric in one fixed chart.
pub trait MetricModel<const N: usize>: Send + Sync {
    fn metric<T: Scalar>(&self, x: &[T; N]) -> [[T; N]; N];
    fn in_domain(&self, x: &[f64; N]) -> bool;
}

/// Exponential-family potential phi(theta).
pub trait Potential<const N: usize>: Send + Sync {
    fn phi<T: Scalar>(&self, th: &[T; N]) -> T;
    fn in_domain(&self, th: &[f64; N]) -> bool;
}

/// Fisher-Rao metric of G in the source chart, ordered (mu1, mu2, s1, s12, s2).
#[derive(Clone, Copy, Debug, Default)]
pub struct BivariateFisher;

impl MetricModel<5> for BivariateFisher {
    fn metric<T: Scalar>(&self, x: &[T; 5]) -> [[T; 5]; 5] {
        let (s1, s12, s2) = (x[2], x[3], x[4]);
        let d = s1 * s2 - s12 * s12;
        let id = d.recip();
        let id2 = id * id;
        let z = T::zero();
        let g11 = s2 * id;
        let g12 = -s12 * id;
        let g22 = s1 * id;
        let v11 = s2 * s2 * id2 * 0.5;
        let v12 = -s12 * s2 * id2;
        let v13 = s12 * s12 * id2 * 0.5;
        let v22 = (s1 * s2 + s12 * s12) * id2;
        let v23 = -s1 * s12 * id2;
        let v33 = s1 * s1 * id2 * 0.5;
        [[g11, g12, z, z, z], [g12, g22, z, z, z], [z, z, v11, v12, v13], [z, z, v12, v22, v23], [z, z, v13, v23, v33]]
    }

    fn in_domain(&self, x: &[f64; 5]) -> bool {
        x[2] > 0.0 && x[4] > 0.0 && x[2] * x[4] - x[3] * x[3] > 0.0
    }
}

/// Fisher-Rao metric of I in the natural chart (theta1..theta4).
#[derive(Clone, Copy, Debug, Default)]
pub struct IndependenceFisher;

impl MetricModel<4> for IndependenceFisher {
    fn metric<T: Scalar>(&self, th: &[T; 4]) -> [[T; 4]; 4] {
        let s1 = -(th[2] * 2.0).recip();
        let s2 = -(th[3] * 2.0).recip();
        let m1 = th[0] * s1;
        let m2 = th[1] * s2;
        let z = T::zero();
        let c1 = m1 * s1 * 2.0;
        let c2 = m2 * s2 * 2.0;
        let d1 = s1 * (m1 * m1 * 2.0 + s1) * 2.0;
        let d2 = s2 * (m2 * m2 * 2.0 + s2) * 2.0;
        [[s1, z, c1, z], [z, s2, z, c2], [c1, z, d1, z], [z, c2, z, d2]]
    }

    fn in_domain(&self, th: &[f64; 4]) -> bool {
        th[2] < 0.0 && th[3] < 0.0
    }
}

/// Univariate Gaussian in (mean, variance): g = diag(1/v, 1/(2 v^2)).
#[derive(Clone, Copy, Debug, Default)]
pub struct UnivariateFisher;

impl MetricModel<2> for UnivariateFisher {
    fn metric<T: Scalar>(&self, x: &[T; 2]) -> [[T; 2]; 2] {
        let iv = x[1].recip();
        [[iv, T::zero()], [T::zero(), iv * iv * 0.5]]
    }

    fn in_domain(&self, x: &[f64; 2]) -> bool {
        x[1] > 0.0
    }
}

/// Potential of G: log(2 pi sqrt(D)) - D (t2^2 t3 - t1 t2 t4 + t1^2 t5), D = 1/(4 t3 t5 - t4^2).
#[derive(Clone, Copy, Debug, Default)]
pub struct BivariatePotential;

impl Potential<5> for BivariatePotential {
    fn phi<T: Scalar>(&self, t: &[T; 5]) -> T {
        let d = (t[2] * t[4] * 4.0 - t[3] * t[3]).recip();
        let quad = t[1] * t[1] * t[2] - t[0] * t[1] * t[3] + t[0] * t[0] * t[4];
        (d.sqrt() * (2.0 * std::f64::consts::PI)).ln() - d * quad
    }

    fn in_domain(&self, t: &[f64; 5]) -> bool {
        t[2] < 0.0 && t[4] < 0.0 && 4.0 * t[2] * t[4] - t[3] * t[3] > 0.0
    }
}

/// Potential of I: log(2 pi sqrt(D)) - D (t2^2 t3 + t1^2 t4), D = 1/(4 t3 t4).
#[derive(Clone, Copy, Debug, Default)]
pub struct IndependencePotential;

impl Potential<4> for IndependencePotential {
    fn phi<T: Scalar>(&self, t: &[T; 4]) -> T {
        let d = (t[2] * t[3] * 4.0).recip();
        let quad = t[1] * t[1] * t[2] + t[0] * t[0] * t[3];
        (d.sqrt() * (2.0 * std::f64::consts::PI)).ln() - d * quad
    }

    fn in_domain(&self, t: &[f64; 4]) -> bool {
        t[2] < 0.0 && t[3] < 0.0
    }
}

/// Potential of the univariate family: -t1^2/(4 t2) + log(pi / -t2)/2.
#[derive(Clone, Copy, Debug, Default)]
pub struct UnivariatePotential;

impl Potential<2> for UnivariatePotential {
    fn phi<T: Scalar>(&self, t: &[T; 2]) -> T {
        -(t[0] * t[0]) / (t[1] * 4.0) + ((-t[1]).recip() * std::f64::consts::PI).ln() * 0.5
    }

    fn in_domain(&self, t: &[f64; 2]) -> bool {
        t[1] < 0.0
    }
}

/// The Hessian metric of a potential, evaluated exactly by nested duals.
#[derive(Clone, Copy, Debug, Default)]
pub struct HessianMetric<P>(pub P);

impl<P: Potential<N>, const N: usize> MetricModel<N> for HessianMetric<P> {
    fn metric<T: Scalar>(&self, x: &[T; N]) -> [[T; N]; N] {
        let f = self.0.phi(&seed2(x));
        std::array::from_fn(|a| std::array::from_fn(|b| f.d[a].d[b]))
    }

    fn in_domain(&self, x: &[f64; N]) -> bool {
        self.0.in_domain(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bivariate_base_point_metric() {
        let g = BivariateFisher.metric(&[0.0, 0.0, 1.0, 0.0, 1.0]);
        let diag = [1.0, 1.0, 0.5, 1.0, 0.5];
        for a in 0..5 {
            for b in 0..5 {
                let want = if a == b { diag[a] } else { 0.0 };
                assert!((g[a][b] - want).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn univariate_variance_chart() {
        let g = UnivariateFisher.metric(&[0.0, 2.0]);
        assert_eq!(g, [[0.5, 0.0], [0.0, 0.125]]);
    }

    #[test]
    fn potentials_at_standard_normal() {
        let two_pi_ln = (2.0 * std::f64::consts::PI).ln();
        assert!((BivariatePotential.phi(&[0.0, 0.0, -0.5, 0.0, -0.5]) - two_pi_ln).abs() < 1e-15);
        assert!((IndependencePotential.phi(&[0.0, 0.0, -0.5, -0.5]) - two_pi_ln).abs() < 1e-15);
    }

    #[test]
    fn independence_hessian_is_fisher() {
        let th = [0.3, -0.7, -0.4, -0.9];
        let h = HessianMetric(IndependencePotential).metric(&th);
        let g = IndependenceFisher.metric(&th);
        for a in 0..4 {
            for b in 0..4 {
                assert!((h[a][b] - g[a][b]).abs() < 1e-12, "{a}{b}");
            }
        }
    }
}
