//! Parallel tractors from the invariant lines of the holonomy algebra.

use nalgebra::{DMatrix, DVector, SVD};
use serde::Serialize;

use super::estimate::{HolonomyConfig, HolonomyEstimate, NormType};
use super::loops::{derive_seed, random_polyline, GaussianRegion};
use super::transport::{parallel_transport, TractorConnection};
use crate::error::{Error, Result};
use crate::manifolds::{self, BivariateFisher, IndependenceFisher};
use crate::point::{ManifoldId, Point};
use crate::tractor::{tractor_inner, Scale, Tractor};

pub const RESIDUAL_PATHS: usize = 20;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ParallelTractor {
    pub tractor: Tractor,
    pub norm: NormType,
    pub inner: f64,
    /// max |P_gamma V - V| / |V| over the residual loops.
    pub residual: f64,
}

fn loop_transports(p: &Point, cfg: &HolonomyConfig) -> Result<Vec<DMatrix<f64>>> {
    let x = manifolds::tensor_coords(p)?;
    let region = GaussianRegion { manifold: p.manifold, bounds: cfg.bounds };
    (0..RESIDUAL_PATHS)
        .map(|i| {
            let lp = random_polyline(&x, &region, derive_seed(cfg.seed, 2_000_000 + i as u64))?;
            let t = match p.manifold {
                ManifoldId::BivariateGaussian => {
                    parallel_transport(&TractorConnection::<_, 5>(BivariateFisher), &lp.path, &cfg.transport)
                }
                ManifoldId::IndependenceSub => {
                    parallel_transport(&TractorConnection::<_, 4>(IndependenceFisher), &lp.path, &cfg.transport)
                }
                ManifoldId::UnivariateGaussian => {
                    Err(Error::DimensionTooSmall { dim: 2, what: "tractor connection needs n >= 3" })
                }
            }?;
            Ok(t.matrix)
        })
        .collect()
}

/// Invariant lines of the estimate, refined against transports around fresh
/// random loops and returned as tractors in the Fisher-Rao scale.
pub fn solve_parallel_tractor(p: &Point, est: &HolonomyEstimate, cfg: &HolonomyConfig) -> Result<Vec<ParallelTractor>> {
    if est.invariant_subspaces.is_empty() {
        return Ok(vec![]);
    }
    let mats = loop_transports(p, cfg)?;
    let k = est.gram.nrows();
    let id = DMatrix::<f64>::identity(k, k);
    let blocks: Vec<DMatrix<f64>> = mats.iter().map(|m| m - &id).chain(est.algebra_basis.iter().cloned()).collect();
    let stack = DMatrix::from_fn(blocks.len() * k, k, |r, c| blocks[r / k][(r % k, c)]);
    let svd = SVD::new(stack, false, true);
    let vt = svd.v_t.expect("requested");
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| svd.singular_values[a].total_cmp(&svd.singular_values[b]));
    let kernel: Vec<DVector<f64>> =
        order[..est.invariant_subspaces.len()].iter().map(|&i| vt.row(i).transpose()).collect();

    est.invariant_subspaces
        .iter()
        .map(|sub| {
            let v0 = DVector::from_column_slice(&sub.basis[0]);
            // project onto the refined kernel
            let mut v = DVector::zeros(k);
            for kv in &kernel {
                v += kv * kv.dot(&v0);
            }
            if v[0].abs() > 1e-8 {
                v /= v[0];
            }
            let vn = v.norm();
            let residual = mats.iter().map(|m| (m * &v - &v).norm() / vn).fold(0.0, f64::max);
            let tractor = Tractor::from_vector(&v, p.clone(), Scale::FisherRao);
            let inner = tractor_inner(&tractor, &tractor)?;
            Ok(ParallelTractor { tractor, norm: sub.norm, inner, residual })
        })
        .collect()
}
