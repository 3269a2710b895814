//! Fisher information as an expectation of score products, estimated by
//! Monte Carlo or Gauss-Hermite quadrature. Independent of the closed forms.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use super::{tensor_coords, to_source};
use crate::error::{Error, Result};
use crate::jet::{seed1, Scalar};
use crate::point::{ManifoldId, Point};

pub const MIN_SAMPLES: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FisherEstimate {
    pub value: f64,
    pub stderr: f64,
}

fn bivariate_loglik<T: Scalar>(xi: &[T; 5], obs: [f64; 2]) -> T {
    let (m1, m2, s1, s12, s2) = (xi[0], xi[1], xi[2], xi[3], xi[4]);
    let d = s1 * s2 - s12 * s12;
    let (u, v) = (-(m1 - obs[0]), -(m2 - obs[1]));
    let quad = (u * u * s2 - u * v * s12 * 2.0 + v * v * s1) / d;
    -d.ln() * 0.5 - quad * 0.5 - (2.0 * std::f64::consts::PI).ln()
}

fn independence_loglik<T: Scalar>(th: &[T; 4], obs: [f64; 2]) -> T {
    use super::models::{IndependencePotential, Potential};
    let [x, y] = obs;
    th[0] * x + th[1] * y + th[2] * (x * x) + th[3] * (y * y) - IndependencePotential.phi(th)
}

fn univariate_loglik<T: Scalar>(xi: &[T; 2], obs: [f64; 2]) -> T {
    let u = -(xi[0] - obs[0]);
    -(xi[1] * (2.0 * std::f64::consts::PI)).ln() * 0.5 - u * u / (xi[1] * 2.0)
}

fn score_of<const N: usize>(
    x: &[f64],
    f: impl Fn(&[crate::jet::Dual<f64, N>; N]) -> crate::jet::Dual<f64, N>,
) -> Vec<f64> {
    let xa: [f64; N] = std::array::from_fn(|i| x[i]);
    f(&seed1(&xa)).d.to_vec()
}

/// Score vector (tensor chart) of one observation.
fn score(m: ManifoldId, x: &[f64], obs: [f64; 2]) -> Vec<f64> {
    match m {
        ManifoldId::BivariateGaussian => score_of::<5>(x, |xi| bivariate_loglik(xi, obs)),
        ManifoldId::IndependenceSub => score_of::<4>(x, |th| independence_loglik(th, obs)),
        ManifoldId::UnivariateGaussian => score_of::<2>(x, |xi| univariate_loglik(xi, [obs[0], 0.0])),
    }
}

/// Mean vector and Cholesky factor of the observation distribution.
fn sampler_params(p: &Point) -> Result<([f64; 2], [[f64; 2]; 2])> {
    let c = to_source(p)?.coords;
    let (mu, s1, s2, s12) = match p.manifold {
        ManifoldId::BivariateGaussian => ([c[0], c[1]], c[2], c[3], c[4]),
        ManifoldId::IndependenceSub => ([c[0], c[1]], c[2], c[3], 0.0),
        ManifoldId::UnivariateGaussian => ([c[0], 0.0], c[1], 1.0, 0.0),
    };
    let l11 = s1.sqrt();
    let l21 = s12 / l11;
    let l22 = (s2 - l21 * l21).sqrt();
    Ok((mu, [[l11, 0.0], [l21, l22]]))
}

fn draw(mu: [f64; 2], l: [[f64; 2]; 2], z: [f64; 2]) -> [f64; 2] {
    [mu[0] + l[0][0] * z[0], mu[1] + l[1][0] * z[0] + l[1][1] * z[1]]
}

type Table = Vec<Vec<f64>>;

/// Monte-Carlo estimate of every entry E[(d_a l)(d_b l)] from one sample set,
/// with the standard error of each.
pub fn fisher_matrix_mc(p: &Point, n_samples: usize, seed: u64) -> Result<(Table, Table)> {
    if n_samples < MIN_SAMPLES {
        return Err(Error::RejectedInput(format!("need at least {MIN_SAMPLES} samples")));
    }
    let x = tensor_coords(p)?;
    let n = x.len();
    let (mu, l) = sampler_params(p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sum = vec![vec![0.0; n]; n];
    let mut sum2 = vec![vec![0.0; n]; n];
    for _ in 0..n_samples {
        let z = [StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng)];
        let s = score(p.manifold, &x, draw(mu, l, z));
        for a in 0..n {
            for b in 0..n {
                let v = s[a] * s[b];
                sum[a][b] += v;
                sum2[a][b] += v * v;
            }
        }
    }
    let nf = n_samples as f64;
    let mean: Vec<Vec<f64>> = sum.iter().map(|r| r.iter().map(|v| v / nf).collect()).collect();
    let se = (0..n)
        .map(|a| {
            (0..n)
                .map(|b| {
                    let var = (sum2[a][b] / nf - mean[a][b] * mean[a][b]).max(0.0) * nf / (nf - 1.0);
                    (var / nf).sqrt()
                })
                .collect()
        })
        .collect();
    Ok((mean, se))
}

/// Monte-Carlo estimate of a single entry g_ab with its standard error.
pub fn fisher_oracle(p: &Point, a: usize, b: usize, n_samples: usize, seed: u64) -> Result<FisherEstimate> {
    let n = p.manifold.dim();
    if a >= n || b >= n {
        return Err(Error::RejectedInput(format!("index out of range for dimension {n}")));
    }
    let (mean, se) = fisher_matrix_mc(p, n_samples, seed)?;
    Ok(FisherEstimate { value: mean[a][b], stderr: se[a][b] })
}

/// Probabilists' Gauss-Hermite nodes and weights (weights sum to 1) by the
/// Golub-Welsch eigenvalue method.
pub fn gauss_hermite(order: usize) -> (Vec<f64>, Vec<f64>) {
    let mut j = DMatrix::zeros(order, order);
    for k in 1..order {
        let off = (k as f64).sqrt();
        j[(k, k - 1)] = off;
        j[(k - 1, k)] = off;
    }
    let eig = SymmetricEigen::new(j);
    let mut pairs: Vec<(f64, f64)> =
        (0..order).map(|k| (eig.eigenvalues[k], eig.eigenvectors[(0, k)].powi(2))).collect();
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    pairs.into_iter().unzip()
}

/// Deterministic quadrature estimate of the Fisher matrix. The score is
/// polynomial in the observation, so a modest order is exact.
pub fn fisher_matrix_gh(p: &Point, order: usize) -> Result<Vec<Vec<f64>>> {
    let x = tensor_coords(p)?;
    let n = x.len();
    let (mu, l) = sampler_params(p)?;
    let (nodes, weights) = gauss_hermite(order);
    let second: Vec<(f64, f64)> = if p.manifold == ManifoldId::UnivariateGaussian {
        vec![(0.0, 1.0)]
    } else {
        nodes.iter().copied().zip(weights.iter().copied()).collect()
    };
    let mut g = vec![vec![0.0; n]; n];
    for (z0, w0) in nodes.iter().zip(&weights) {
        for &(z1, w1) in &second {
            let s = score(p.manifold, &x, draw(mu, l, [*z0, z1]));
            let w = w0 * w1;
            for a in 0..n {
                for b in 0..n {
                    g[a][b] += w * s[a] * s[b];
                }
            }
        }
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hermite_moments() {
        let (z, w) = gauss_hermite(20);
        let m = |k: i32| z.iter().zip(&w).map(|(x, w)| w * x.powi(k)).sum::<f64>();
        assert!((m(0) - 1.0).abs() < 1e-13);
        assert!((m(2) - 1.0).abs() < 1e-12);
        assert!((m(4) - 3.0).abs() < 1e-11);
    }

    #[test]
    fn symmetric_entries_agree_exactly() {
        let p = Point::source(ManifoldId::BivariateGaussian, &[0.1, 0.2, 1.3, 0.9, 0.4]).unwrap();
        let ab = fisher_oracle(&p, 0, 3, 10_000, 5).unwrap();
        let ba = fisher_oracle(&p, 3, 0, 10_000, 5).unwrap();
        assert_eq!(ab, ba);
    }

    #[test]
    fn too_few_samples_rejected() {
        let p = Point::source(ManifoldId::UnivariateGaussian, &[0.0, 2.0]).unwrap();
        assert!(fisher_oracle(&p, 0, 0, 100, 1).is_err());
    }
}
