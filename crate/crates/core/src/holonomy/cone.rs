//! Metric cone over I and its Levi-Civita holonomy.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::estimate::{estimate_algebra, finish, HolonomyConfig, HolonomyEstimate};
use super::loops::{GaussianRegion, Region};
use super::transport::LeviCivitaConnection;
use crate::curvature::{curvature_of, Mat};
use crate::error::{Error, Result};
use crate::jet::Scalar;
use crate::manifolds::{self, IndependenceFisher, MetricModel};
use crate::point::{ManifoldId, Point};
use crate::tensor::{TensorValue, Valence};

/// sign(scal) (dt^2 + scal / (n(n-1)) t^2 g) over an Einstein base of
/// dimension n; coordinates (theta_1..theta_4, t).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConeMetric {
    pub scal: f64,
}

impl Default for ConeMetric {
    fn default() -> Self {
        ConeMetric { scal: manifolds::closed_form::INDEPENDENCE_SCAL }
    }
}

const BASE_DIM: usize = 4;

impl MetricModel<5> for ConeMetric {
    fn metric<T: Scalar>(&self, x: &[T; 5]) -> Mat<T, 5> {
        let th = [x[0], x[1], x[2], x[3]];
        let g = IndependenceFisher.metric(&th);
        let s = self.scal.signum();
        let c = self.scal / (BASE_DIM * (BASE_DIM - 1)) as f64;
        let t2 = x[4] * x[4];
        std::array::from_fn(|i| {
            std::array::from_fn(|j| match (i, j) {
                (4, 4) => T::cst(s),
                (4, _) | (_, 4) => T::zero(),
                _ => t2 * g[i][j] * (c * s),
            })
        })
    }

    fn in_domain(&self, x: &[f64; 5]) -> bool {
        x[4] > 0.0 && IndependenceFisher.in_domain(&[x[0], x[1], x[2], x[3]])
    }
}

fn cone_coords(p: &Point, t: f64) -> Result<[f64; 5]> {
    if p.manifold != ManifoldId::IndependenceSub {
        return Err(Error::RejectedInput("the cone is built over the independence submanifold".into()));
    }
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::Domain(format!("cone parameter t = {t} must be positive")));
    }
    if !manifolds::domain_check(p) {
        return Err(Error::Domain(format!("{:?}", p.coords)));
    }
    let th = manifolds::tensor_coords(p)?;
    Ok([th[0], th[1], th[2], th[3], t])
}

/// Cone metric at (p, t), coordinates (theta, t).
pub fn cone_metric(p: &Point, t: f64) -> Result<TensorValue> {
    let x = cone_coords(p, t)?;
    let g = ConeMetric::default().metric(&x);
    Ok(TensorValue::from_fn(vec![Valence::Down, Valence::Down], 5, |i| g[i[0]][i[1]]))
}

/// Largest |Ric| entry of the cone metric at (p, t).
pub fn cone_ricci_max(p: &Point, t: f64) -> Result<f64> {
    let x = cone_coords(p, t)?;
    Ok(curvature_of(&ConeMetric::default(), &x).ricci.max_abs())
}

/// Sampling box of I times an interval of t.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConeRegion {
    pub base: GaussianRegion,
    pub t: (f64, f64),
}

impl Region for ConeRegion {
    fn contains(&self, x: &[f64]) -> bool {
        x[4] >= self.t.0 && x[4] <= self.t.1 && self.base.contains(&x[..4])
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> Vec<f64> {
        let mut x = self.base.sample(rng);
        x.push(rng.random_range(self.t.0..=self.t.1));
        x
    }
}

/// Levi-Civita holonomy of the cone at (p, t) through the same loop pipeline.
pub fn cone_holonomy_crosscheck(p: &Point, t: f64, cfg: &HolonomyConfig) -> Result<HolonomyEstimate> {
    let x = cone_coords(p, t)?;
    let region = ConeRegion {
        base: GaussianRegion { manifold: ManifoldId::IndependenceSub, bounds: cfg.bounds },
        t: (0.5, 2.0),
    };
    let conn = LeviCivitaConnection::<_, 5>(ConeMetric::default());
    let mut est = estimate_algebra(&conn, &region, &x, "cone", cfg)?;
    // a full so(p,q) on the 5-dim tangent space has the size of the
    // conformal algebra of a 3-manifold
    finish(&mut est, 3, cfg);
    Ok(est)
}
