//! The bivariate Gaussian manifold G, its independence submanifold I and the
//! univariate Gaussian manifold: charts, domain, closed forms and oracles.
//!
//! Each manifold has a "tensor chart" in which tensors are reported: G uses the
//! source chart reordered as (mu1, mu2, s1, s12, s2), I uses the natural chart,
//! the univariate manifold uses (mean, variance).

pub mod closed_form;
pub mod fisher;
pub mod models;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg;
use crate::numdiff;
use crate::point::{Chart, ManifoldId, Point};
use crate::tensor::{Symmetry, TensorValue, Valence};

pub use models::{
    BivariateFisher, BivariatePotential, HessianMetric, IndependenceFisher, IndependencePotential, MetricModel,
    Potential, UnivariateFisher, UnivariatePotential,
};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ManifoldSpec {
    pub id: ManifoldId,
    pub dim: usize,
    pub charts: Vec<Chart>,
}

impl ManifoldSpec {
    pub fn of(id: ManifoldId) -> Self {
        ManifoldSpec { id, dim: id.dim(), charts: vec![Chart::SourceParams, Chart::NaturalParams] }
    }
}

/// Sampling box for test points (source chart).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DomainBox {
    pub mu: (f64, f64),
    pub sigma: (f64, f64),
    pub delta_min: f64,
}

impl Default for DomainBox {
    fn default() -> Self {
        DomainBox { mu: (-2.0, 2.0), sigma: (0.5, 3.0), delta_min: 0.1 }
    }
}

impl DomainBox {
    pub fn contains(&self, p: &Point) -> bool {
        let Ok(src) = to_source(p) else { return false };
        let c = &src.coords;
        let mu_ok = |m: f64| m >= self.mu.0 && m <= self.mu.1;
        let s_ok = |s: f64| s >= self.sigma.0 && s <= self.sigma.1;
        match p.manifold {
            ManifoldId::BivariateGaussian => {
                mu_ok(c[0]) && mu_ok(c[1]) && s_ok(c[2]) && s_ok(c[3]) && c[2] * c[3] - c[4] * c[4] >= self.delta_min
            }
            ManifoldId::IndependenceSub => {
                mu_ok(c[0]) && mu_ok(c[1]) && s_ok(c[2]) && s_ok(c[3]) && c[2] * c[3] >= self.delta_min
            }
            ManifoldId::UnivariateGaussian => mu_ok(c[0]) && s_ok(c[1]),
        }
    }

    /// Uniform sample in source coordinates; sigma12 uniform on the slice
    /// allowed by delta_min.
    pub fn sample<R: Rng>(&self, m: ManifoldId, rng: &mut R) -> Point {
        let mu = |r: &mut R| r.random_range(self.mu.0..=self.mu.1);
        let sg = |r: &mut R| r.random_range(self.sigma.0..=self.sigma.1);
        let coords = match m {
            ManifoldId::BivariateGaussian => {
                let (m1, m2, s1, s2) = (mu(rng), mu(rng), sg(rng), sg(rng));
                let w = (s1 * s2 - self.delta_min).max(0.0).sqrt();
                let s12 = if w > 0.0 { rng.random_range(-w..=w) } else { 0.0 };
                vec![m1, m2, s1, s2, s12]
            }
            ManifoldId::IndependenceSub => vec![mu(rng), mu(rng), sg(rng), sg(rng)],
            ManifoldId::UnivariateGaussian => vec![mu(rng), sg(rng)],
        };
        Point { manifold: m, chart: Chart::SourceParams, coords }
    }
}

fn natural_valid(m: ManifoldId, t: &[f64]) -> bool {
    match m {
        ManifoldId::BivariateGaussian => t[2] < 0.0 && t[4] < 0.0 && 4.0 * t[2] * t[4] - t[3] * t[3] > 0.0,
        ManifoldId::IndependenceSub => t[2] < 0.0 && t[3] < 0.0,
        ManifoldId::UnivariateGaussian => t[1] < 0.0,
    }
}

fn source_valid(m: ManifoldId, c: &[f64]) -> bool {
    match m {
        ManifoldId::BivariateGaussian => c[2] > 0.0 && c[3] > 0.0 && c[2] * c[3] - c[4] * c[4] > 0.0,
        ManifoldId::IndependenceSub => c[2] > 0.0 && c[3] > 0.0,
        ManifoldId::UnivariateGaussian => c[1] > 0.0,
    }
}

/// sigma1, sigma2 > 0 and Delta > 0, in whichever chart the point uses.
pub fn domain_check(p: &Point) -> bool {
    if p.coords.len() != p.manifold.dim() || p.coords.iter().any(|c| !c.is_finite()) {
        return false;
    }
    match p.chart {
        Chart::SourceParams => source_valid(p.manifold, &p.coords),
        Chart::NaturalParams => natural_valid(p.manifold, &p.coords),
    }
}

fn require_domain(p: &Point) -> Result<()> {
    if domain_check(p) {
        Ok(())
    } else {
        Err(Error::Domain(format!("{} {:?}", p.manifold.name(), p.coords)))
    }
}

/// Delta = s1 s2 - s12^2 on G, source chart only.
pub fn delta(p: &Point) -> Result<f64> {
    if p.manifold != ManifoldId::BivariateGaussian {
        return Err(Error::RejectedInput("delta is defined on G".into()));
    }
    if p.chart != Chart::SourceParams {
        return Err(Error::ChartMismatch { expected: "source", got: p.chart.name() });
    }
    let c = &p.coords;
    Ok(c[2] * c[3] - c[4] * c[4])
}

pub fn to_natural(p: &Point) -> Result<Point> {
    require_domain(p)?;
    if p.chart == Chart::NaturalParams {
        return Ok(p.clone());
    }
    let c = &p.coords;
    let t = match p.manifold {
        ManifoldId::BivariateGaussian => {
            let (m1, m2, s1, s2, s12) = (c[0], c[1], c[2], c[3], c[4]);
            let d = s1 * s2 - s12 * s12;
            vec![(m1 * s2 - m2 * s12) / d, (m2 * s1 - m1 * s12) / d, -s2 / (2.0 * d), s12 / d, -s1 / (2.0 * d)]
        }
        ManifoldId::IndependenceSub => {
            vec![c[0] / c[2], c[1] / c[3], -1.0 / (2.0 * c[2]), -1.0 / (2.0 * c[3])]
        }
        ManifoldId::UnivariateGaussian => vec![c[0] / c[1], -1.0 / (2.0 * c[1])],
    };
    if !natural_valid(p.manifold, &t) {
        return Err(Error::Inconsistent(format!("natural image {t:?} invalid")));
    }
    Ok(Point { manifold: p.manifold, chart: Chart::NaturalParams, coords: t })
}

pub fn from_natural(p: &Point) -> Result<Point> {
    if p.chart == Chart::SourceParams {
        require_domain(p)?;
        return Ok(p.clone());
    }
    let t = &p.coords;
    if !natural_valid(p.manifold, t) {
        return Err(Error::Inconsistent(format!("natural coordinates {t:?} invalid")));
    }
    let c = match p.manifold {
        ManifoldId::BivariateGaussian => {
            let d = 1.0 / (4.0 * t[2] * t[4] - t[3] * t[3]);
            let (s1, s2, s12) = (-2.0 * t[4] * d, -2.0 * t[2] * d, t[3] * d);
            vec![s1 * t[0] + s12 * t[1], s12 * t[0] + s2 * t[1], s1, s2, s12]
        }
        ManifoldId::IndependenceSub => {
            let (s1, s2) = (-1.0 / (2.0 * t[2]), -1.0 / (2.0 * t[3]));
            vec![t[0] * s1, t[1] * s2, s1, s2]
        }
        ManifoldId::UnivariateGaussian => {
            let v = -1.0 / (2.0 * t[1]);
            vec![t[0] * v, v]
        }
    };
    Ok(Point { manifold: p.manifold, chart: Chart::SourceParams, coords: c })
}

pub fn to_source(p: &Point) -> Result<Point> {
    from_natural(p)
}

/// Coordinates in the manifold's tensor chart.
pub fn tensor_coords(p: &Point) -> Result<Vec<f64>> {
    match p.manifold {
        ManifoldId::BivariateGaussian => {
            let c = to_source(p)?.coords;
            Ok(vec![c[0], c[1], c[2], c[4], c[3]])
        }
        ManifoldId::IndependenceSub => Ok(to_natural(p)?.coords),
        ManifoldId::UnivariateGaussian => Ok(to_source(p)?.coords),
    }
}

/// Inverse of `tensor_coords`.
pub fn point_from_tensor(m: ManifoldId, x: &[f64]) -> Result<Point> {
    let p = match m {
        ManifoldId::BivariateGaussian => Point::new(m, Chart::SourceParams, vec![x[0], x[1], x[2], x[4], x[3]])?,
        ManifoldId::IndependenceSub => Point::new(m, Chart::NaturalParams, x.to_vec())?,
        ManifoldId::UnivariateGaussian => Point::new(m, Chart::SourceParams, x.to_vec())?,
    };
    require_domain(&p)?;
    Ok(p)
}

/// Whether tensor-chart coordinates lie in the domain.
pub fn tensor_in_domain(m: ManifoldId, x: &[f64]) -> bool {
    match m {
        ManifoldId::BivariateGaussian => BivariateFisher.in_domain(&[x[0], x[1], x[2], x[3], x[4]]),
        ManifoldId::IndependenceSub => natural_valid(m, x),
        ManifoldId::UnivariateGaussian => x[1] > 0.0,
    }
}

/// Source coordinates (mu1, mu2, s1, s2) of a point of I, as used by its tables.
pub fn independence_source(p: &Point) -> Result<[f64; 4]> {
    let c = to_source(p)?.coords;
    Ok([c[0], c[1], c[2], c[3]])
}

fn arr<const N: usize>(v: &[f64]) -> [f64; N] {
    std::array::from_fn(|i| v[i])
}

/// Potential phi at a point given in the natural chart.
pub fn potential(th: &Point) -> Result<f64> {
    if th.chart != Chart::NaturalParams {
        return Err(Error::ChartMismatch { expected: "natural", got: th.chart.name() });
    }
    if !natural_valid(th.manifold, &th.coords) {
        return Err(Error::Domain(format!("natural coordinates {:?}", th.coords)));
    }
    Ok(match th.manifold {
        ManifoldId::BivariateGaussian => BivariatePotential.phi(&arr::<5>(&th.coords)),
        ManifoldId::IndependenceSub => IndependencePotential.phi(&arr::<4>(&th.coords)),
        ManifoldId::UnivariateGaussian => UnivariatePotential.phi(&arr::<2>(&th.coords)),
    })
}

fn sym2(m: Vec<Vec<f64>>) -> TensorValue {
    let n = m.len();
    TensorValue::from_fn(vec![Valence::Down, Valence::Down], n, |i| m[i[0]][i[1]])
        .with_symmetries(&[Symmetry::Symmetric(0, 1)])
}

fn closed_metric(m: ManifoldId, x: &[f64], src: &Point) -> Vec<Vec<f64>> {
    match m {
        ManifoldId::BivariateGaussian => {
            closed_form::bivariate_metric(&arr::<5>(x)).iter().map(|r| r.to_vec()).collect()
        }
        ManifoldId::IndependenceSub => {
            closed_form::independence_metric(&arr::<4>(&src.coords)).iter().map(|r| r.to_vec()).collect()
        }
        ManifoldId::UnivariateGaussian => vec![vec![1.0 / x[1], 0.0], vec![0.0, 0.5 / (x[1] * x[1])]],
    }
}

/// Closed-form Fisher-Rao metric in the tensor chart.
pub fn metric(p: &Point) -> Result<TensorValue> {
    require_domain(p)?;
    let x = tensor_coords(p)?;
    let src = to_source(p)?;
    Ok(sym2(closed_metric(p.manifold, &x, &src)))
}

/// Metric evaluated at raw tensor-chart coordinates.
pub fn metric_at_tensor(m: ManifoldId, x: &[f64]) -> Result<Vec<Vec<f64>>> {
    let p = point_from_tensor(m, x)?;
    let src = to_source(&p)?;
    Ok(closed_metric(m, x, &src))
}

fn second_step(t: &[f64]) -> f64 {
    1e-4 * t.iter().fold(1.0_f64, |m, x| m.max(x.abs()))
}

/// Smallest eigenvalue of the precision matrix encoded by theta: the
/// distance scale to the boundary of the natural domain.
fn boundary_scale(m: ManifoldId, t: &[f64]) -> f64 {
    match m {
        ManifoldId::BivariateGaussian => {
            let (a, b, c) = (-2.0 * t[2], -t[3], -2.0 * t[4]);
            let half = 0.5 * (a + c);
            half - (half * half - (a * c - b * b)).max(0.0).sqrt()
        }
        ManifoldId::IndependenceSub => (-2.0 * t[2]).min(-2.0 * t[3]),
        ManifoldId::UnivariateGaussian => -2.0 * t[1],
    }
}

/// Hessian of phi by nested, Richardson-extrapolated central differences
/// (natural chart).
pub fn metric_from_potential(th: &Point) -> Result<TensorValue> {
    potential(th)?;
    let m = th.manifold;
    let f = |t: &[f64]| {
        let p = Point { manifold: m, chart: Chart::NaturalParams, coords: t.to_vec() };
        potential(&p).unwrap_or(f64::NAN)
    };
    let ok = |t: &[f64]| natural_valid(m, t);
    let h = second_step(&th.coords);
    let n = m.dim();
    let mut g = vec![vec![0.0; n]; n];
    for a in 0..n {
        for b in a..n {
            let v = numdiff::richardson_nested(&f, &ok, &th.coords, &[a, b], h)?;
            g[a][b] = v;
            g[b][a] = v;
        }
    }
    Ok(sym2(g))
}

/// Gamma^c_ab (stored [c][a][b]) together with Gamma_ab,c (stored [a][b][c]).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Christoffel {
    pub second: TensorValue,
    pub first: TensorValue,
}

impl Christoffel {
    fn from_second(gam: Vec<Vec<Vec<f64>>>, g: &[Vec<f64>]) -> Self {
        let n = g.len();
        let second =
            TensorValue::from_fn(vec![Valence::Up, Valence::Down, Valence::Down], n, |i| gam[i[0]][i[1]][i[2]])
                .with_symmetries(&[Symmetry::Symmetric(1, 2)]);
        let first =
            TensorValue::from_fn(vec![Valence::Down; 3], n, |i| (0..n).map(|d| g[i[2]][d] * gam[d][i[0]][i[1]]).sum())
                .with_symmetries(&[Symmetry::Symmetric(0, 1)]);
        Christoffel { second, first }
    }
}

fn nest3<const N: usize>(t: &[[[f64; N]; N]; N]) -> Vec<Vec<Vec<f64>>> {
    t.iter().map(|m| m.iter().map(|r| r.to_vec()).collect()).collect()
}

/// Closed-form Levi-Civita symbols (errata applied) in the tensor chart.
pub fn christoffel(p: &Point) -> Result<Christoffel> {
    require_domain(p)?;
    let x = tensor_coords(p)?;
    let src = to_source(p)?;
    let g = closed_metric(p.manifold, &x, &src);
    let gam = match p.manifold {
        ManifoldId::BivariateGaussian => nest3(&closed_form::bivariate_christoffel(&arr::<5>(&x))),
        ManifoldId::IndependenceSub => nest3(&closed_form::independence_christoffel(&arr::<4>(&src.coords))),
        ManifoldId::UnivariateGaussian => {
            let v = x[1];
            let mut t = vec![vec![vec![0.0; 2]; 2]; 2];
            t[0][0][1] = -0.5 / v;
            t[0][1][0] = -0.5 / v;
            t[1][0][0] = 1.0;
            t[1][1][1] = -1.0 / v;
            t
        }
    };
    Ok(Christoffel::from_second(gam, &g))
}

/// Levi-Civita symbols from metric derivatives taken by central differences;
/// the independent oracle for the closed forms.
pub fn christoffel_from_metric(p: &Point) -> Result<Christoffel> {
    require_domain(p)?;
    let m = p.manifold;
    let x = tensor_coords(p)?;
    let n = x.len();
    let g = metric_at_tensor(m, &x)?;
    let ginv = linalg::sym_inverse(&nalgebra::DMatrix::from_fn(n, n, |i, j| g[i][j]))?;
    let ok = |y: &[f64]| tensor_in_domain(m, y);
    // dg[e][a][b] = d_e g_ab
    let mut dg = vec![vec![vec![0.0; n]; n]; n];
    for (e, dge) in dg.iter_mut().enumerate() {
        let h = numdiff::default_step(x[e]);
        for a in 0..n {
            for b in a..n {
                let f = |y: &[f64]| metric_at_tensor(m, y).map(|gm| gm[a][b]).unwrap_or(f64::NAN);
                let v = numdiff::richardson_difference(f, ok, &x, e, h)?;
                dge[a][b] = v;
                dge[b][a] = v;
            }
        }
    }
    let gam: Vec<Vec<Vec<f64>>> = (0..n)
        .map(|c| {
            (0..n)
                .map(|a| {
                    (0..n)
                        .map(|b| {
                            0.5 * (0..n).map(|d| ginv[(c, d)] * (dg[a][b][d] + dg[b][a][d] - dg[d][a][b])).sum::<f64>()
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    Ok(Christoffel::from_second(gam, &g))
}

/// Gamma^(alpha)_ab,c = (1 - alpha)/2 d_a d_b d_c phi by third central
/// differences (natural chart).
pub fn alpha_connection(th: &Point, alpha: f64) -> Result<TensorValue> {
    potential(th)?;
    let m = th.manifold;
    let n = m.dim();
    let f = |t: &[f64]| {
        let p = Point { manifold: m, chart: Chart::NaturalParams, coords: t.to_vec() };
        potential(&p).unwrap_or(f64::NAN)
    };
    let ok = |t: &[f64]| natural_valid(m, t);
    // third differences lose accuracy fast near the boundary; scale the step
    // with the distance to it rather than with |theta|
    let h = 5e-3 * boundary_scale(m, &th.coords);
    let mut t3 = vec![0.0; n * n * n];
    let factor = 0.5 * (1.0 - alpha);
    for a in 0..n {
        for b in a..n {
            for c in b..n {
                let v = factor * numdiff::richardson_nested(&f, &ok, &th.coords, &[a, b, c], h)?;
                for (i, j, k) in [(a, b, c), (a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a)] {
                    t3[(i * n + j) * n + k] = v;
                }
            }
        }
    }
    Ok(TensorValue { valences: vec![Valence::Down; 3], dim: n, entries: t3, symmetries: vec![] }
        .with_symmetries(&[Symmetry::Symmetric(0, 1), Symmetry::Symmetric(1, 2)]))
}

/// Exact third derivatives of phi via nested duals: the analytic counterpart of
/// `alpha_connection`.
pub fn phi_third_derivatives<P: Potential<N>, const N: usize>(pot: &P, th: &[f64; N]) -> Vec<f64> {
    use crate::jet::Dual;
    let x: [Dual<Dual<Dual<f64, N>, N>, N>; N] =
        std::array::from_fn(|i| Dual::variable(Dual::variable(Dual::variable(th[i], i), i), i));
    let f = pot.phi(&x);
    let mut out = vec![0.0; N * N * N];
    for a in 0..N {
        for b in 0..N {
            for c in 0..N {
                out[(a * N + b) * N + c] = f.d[a].d[b].d[c];
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(c: &[f64]) -> Point {
        Point::source(ManifoldId::BivariateGaussian, c).unwrap()
    }

    #[test]
    fn domain_examples() {
        assert!(domain_check(&g(&[0.0, 0.0, 1.0, 1.0, 0.0])));
        assert!(!domain_check(&g(&[0.0, 0.0, 1.0, 1.0, 1.0])));
        assert!(domain_check(&g(&[0.0, 0.0, 2.0, 3.0, 1.0])));
    }

    #[test]
    fn delta_examples() {
        assert_eq!(delta(&g(&[0.0, 0.0, 1.0, 1.0, 0.0])).unwrap(), 1.0);
        assert_eq!(delta(&g(&[0.0, 0.0, 2.0, 3.0, 1.0])).unwrap(), 5.0);
        let th = to_natural(&g(&[0.0, 0.0, 2.0, 3.0, 1.0])).unwrap();
        assert!(matches!(delta(&th), Err(Error::ChartMismatch { .. })));
        let t = &th.coords;
        assert!((1.0 / (4.0 * t[2] * t[4] - t[3] * t[3]) - 5.0).abs() < 1e-12);
    }

    #[test]
    fn natural_examples() {
        let th = to_natural(&g(&[0.0, 0.0, 1.0, 1.0, 0.0])).unwrap();
        assert_eq!(th.coords, vec![0.0, 0.0, -0.5, 0.0, -0.5]);
        let i = Point::source(ManifoldId::IndependenceSub, &[1.0, 0.0, 2.0, 1.0]).unwrap();
        assert_eq!(to_natural(&i).unwrap().coords, vec![0.5, 0.0, -0.25, -0.5]);
    }

    #[test]
    fn metric_examples() {
        let m = metric(&g(&[0.0, 0.0, 2.0, 3.0, 1.0])).unwrap();
        assert!((m.get(&[0, 0]) - 0.6).abs() < 1e-15);
        assert!((m.get(&[0, 1]) + 0.2).abs() < 1e-15);
        let u = metric(&Point::source(ManifoldId::UnivariateGaussian, &[0.0, 2.0]).unwrap()).unwrap();
        assert_eq!(u.entries, vec![0.5, 0.0, 0.0, 0.125]);
    }

    #[test]
    fn christoffel_examples() {
        let c = christoffel(&g(&[0.3, -1.0, 2.0, 3.0, 1.0])).unwrap();
        // Gamma^3_11 = 1, Gamma^1_13 = -s2/(2 Delta) = -3/10
        assert_eq!(c.second.get(&[2, 0, 0]), 1.0);
        assert!((c.second.get(&[0, 0, 2]) + 0.3).abs() < 1e-15);
        assert!(c.second.symmetry_defect() < 1e-15);
    }

    #[test]
    fn potential_sign_gives_mean() {
        // d phi / d theta1 = mu1 pins the sign of the quadratic term
        let p = to_natural(&g(&[0.7, -0.4, 1.5, 0.8, 0.3])).unwrap();
        let ok = |t: &[f64]| natural_valid(ManifoldId::BivariateGaussian, t);
        let f = |t: &[f64]| BivariatePotential.phi(&arr::<5>(t));
        let d = numdiff::richardson_difference(f, ok, &p.coords, 0, 1e-5).unwrap();
        assert!((d - 0.7).abs() < 1e-8);
    }

    #[test]
    fn alpha_limits() {
        let th = to_natural(&g(&[0.2, 0.1, 1.2, 0.9, 0.2])).unwrap();
        let a1 = alpha_connection(&th, 1.0).unwrap();
        assert_eq!(a1.max_abs(), 0.0);
        let a0 = alpha_connection(&th, 0.0).unwrap();
        let am = alpha_connection(&th, -1.0).unwrap();
        for (x, y) in a0.entries.iter().zip(&am.entries) {
            assert!((2.0 * x - y).abs() <= 1e-12 * y.abs().max(1.0));
        }
    }
}
