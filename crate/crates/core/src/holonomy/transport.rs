//! Paths in a chart and parallel transport along them.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::curvature::levi_civita;
use crate::error::{Error, Result};
use crate::jet::seed1;
use crate::manifolds::MetricModel;
use crate::tractor::{self, curvature_from_jet};

/// A linear connection on a trivial bundle over a chart: nabla_b = d_b + A_b.
pub trait Connection: Sync {
    fn fiber_dim(&self) -> usize;
    fn chart_dim(&self) -> usize;
    fn in_domain(&self, x: &[f64]) -> bool;
    /// A_b for every chart direction b.
    fn matrices(&self, x: &[f64]) -> Vec<DMatrix<f64>>;
    /// Omega_ab for a < b in lexicographic order.
    fn curvatures(&self, x: &[f64]) -> Vec<DMatrix<f64>>;
    /// The fiber form preserved by the connection.
    fn gram(&self, x: &[f64]) -> DMatrix<f64>;
    /// Levi-Civita symbols [c][a][b] of the underlying metric, for geodesics.
    fn christoffel(&self, x: &[f64]) -> Vec<Vec<Vec<f64>>>;
}

fn arr<const N: usize>(v: &[f64]) -> [f64; N] {
    std::array::from_fn(|i| v[i])
}

fn christoffel_of<M: MetricModel<N>, const N: usize>(m: &M, x: &[f64]) -> Vec<Vec<Vec<f64>>> {
    let (_, gam) = levi_civita(m, &arr::<N>(x));
    gam.iter().map(|p| p.iter().map(|r| r.to_vec()).collect()).collect()
}

fn metric_of<M: MetricModel<N>, const N: usize>(m: &M, x: &[f64]) -> DMatrix<f64> {
    let g = m.metric(&arr::<N>(x));
    DMatrix::from_fn(N, N, |i, j| g[i][j])
}

/// Normal tractor connection of a metric model.
#[derive(Clone, Copy, Debug)]
pub struct TractorConnection<M, const N: usize>(pub M);

impl<M: MetricModel<N>, const N: usize> Connection for TractorConnection<M, N> {
    fn fiber_dim(&self) -> usize {
        N + 2
    }
    fn chart_dim(&self) -> usize {
        N
    }
    fn in_domain(&self, x: &[f64]) -> bool {
        self.0.in_domain(&arr::<N>(x))
    }
    fn matrices(&self, x: &[f64]) -> Vec<DMatrix<f64>> {
        tractor::to_dmatrices(&tractor::connection_matrices(&self.0, &arr::<N>(x)))
    }
    fn curvatures(&self, x: &[f64]) -> Vec<DMatrix<f64>> {
        tractor::tractor_curvatures_at(&self.0, &arr::<N>(x))
    }
    fn gram(&self, x: &[f64]) -> DMatrix<f64> {
        tractor::tractor_gram(&metric_of(&self.0, x))
    }
    fn christoffel(&self, x: &[f64]) -> Vec<Vec<Vec<f64>>> {
        christoffel_of(&self.0, x)
    }
}

/// Levi-Civita connection on the tangent bundle: (A_b)^a_c = Gamma^a_bc.
#[derive(Clone, Copy, Debug)]
pub struct LeviCivitaConnection<M, const N: usize>(pub M);

fn lc_matrices<T: crate::jet::Scalar, M: MetricModel<N>, const N: usize>(m: &M, x: &[T; N]) -> Vec<Vec<Vec<T>>> {
    let (_, gam) = levi_civita(m, x);
    (0..N).map(|b| (0..N).map(|a| (0..N).map(|c| gam[a][b][c]).collect()).collect()).collect()
}

impl<M: MetricModel<N>, const N: usize> Connection for LeviCivitaConnection<M, N> {
    fn fiber_dim(&self) -> usize {
        N
    }
    fn chart_dim(&self) -> usize {
        N
    }
    fn in_domain(&self, x: &[f64]) -> bool {
        self.0.in_domain(&arr::<N>(x))
    }
    fn matrices(&self, x: &[f64]) -> Vec<DMatrix<f64>> {
        tractor::to_dmatrices(&lc_matrices(&self.0, &arr::<N>(x)))
    }
    fn curvatures(&self, x: &[f64]) -> Vec<DMatrix<f64>> {
        let jets = lc_matrices(&self.0, &seed1(&arr::<N>(x)));
        let mut out = Vec::new();
        for a in 0..N {
            for b in (a + 1)..N {
                out.push(curvature_from_jet::<N>(&jets, a, b));
            }
        }
        out
    }
    fn gram(&self, x: &[f64]) -> DMatrix<f64> {
        metric_of(&self.0, x)
    }
    fn christoffel(&self, x: &[f64]) -> Vec<Vec<Vec<f64>>> {
        christoffel_of(&self.0, x)
    }
}

/// A smooth curve piece parameterized by t in [0, 1].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum Segment {
    Line {
        from: Vec<f64>,
        to: Vec<f64>,
    },
    /// Cubic Hermite through nodes equally spaced in t; `vels` are d/dt.
    Hermite {
        nodes: Vec<Vec<f64>>,
        vels: Vec<Vec<f64>>,
    },
}

impl Segment {
    /// Point and velocity at t.
    pub fn eval(&self, t: f64) -> (Vec<f64>, Vec<f64>) {
        match self {
            Segment::Line { from, to } => {
                let v: Vec<f64> = from.iter().zip(to).map(|(a, b)| b - a).collect();
                (from.iter().zip(&v).map(|(a, d)| a + t * d).collect(), v)
            }
            Segment::Hermite { nodes, vels } => {
                let k = nodes.len() - 1;
                let s = (t.clamp(0.0, 1.0) * k as f64).min(k as f64 - 1e-15);
                let i = (s.floor() as usize).min(k - 1);
                let u = s - i as f64;
                let h = 1.0 / k as f64;
                let (h00, h10, h01, h11) = (
                    2.0 * u.powi(3) - 3.0 * u * u + 1.0,
                    u.powi(3) - 2.0 * u * u + u,
                    -2.0 * u.powi(3) + 3.0 * u * u,
                    u.powi(3) - u * u,
                );
                let (d00, d10, d01, d11) =
                    (6.0 * u * u - 6.0 * u, 3.0 * u * u - 4.0 * u + 1.0, -6.0 * u * u + 6.0 * u, 3.0 * u * u - 2.0 * u);
                let (p0, p1, m0, m1) = (&nodes[i], &nodes[i + 1], &vels[i], &vels[i + 1]);
                let x = (0..p0.len()).map(|j| h00 * p0[j] + h10 * h * m0[j] + h01 * p1[j] + h11 * h * m1[j]).collect();
                let v = (0..p0.len()).map(|j| (d00 * p0[j] + d01 * p1[j]) / h + d10 * m0[j] + d11 * m1[j]).collect();
                (x, v)
            }
        }
    }

    pub fn start(&self) -> Vec<f64> {
        self.eval(0.0).0
    }

    pub fn end(&self) -> Vec<f64> {
        match self {
            Segment::Line { to, .. } => to.clone(),
            Segment::Hermite { nodes, .. } => nodes[nodes.len() - 1].clone(),
        }
    }

    /// Chart (Euclidean) length, by sampling for Hermite pieces.
    pub fn length(&self) -> f64 {
        match self {
            Segment::Line { from, to } => from.iter().zip(to).map(|(a, b)| (b - a).powi(2)).sum::<f64>().sqrt(),
            Segment::Hermite { nodes, .. } => {
                nodes.windows(2).map(|w| w[0].iter().zip(&w[1]).map(|(a, b)| (b - a).powi(2)).sum::<f64>().sqrt()).sum()
            }
        }
    }

    pub fn reversed(&self) -> Segment {
        match self {
            Segment::Line { from, to } => Segment::Line { from: to.clone(), to: from.clone() },
            Segment::Hermite { nodes, vels } => Segment::Hermite {
                nodes: nodes.iter().rev().cloned().collect(),
                vels: vels.iter().rev().map(|v| v.iter().map(|x| -x).collect()).collect(),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Path {
    pub segments: Vec<Segment>,
}

impl Path {
    pub fn polyline(points: &[Vec<f64>]) -> Path {
        Path { segments: points.windows(2).map(|w| Segment::Line { from: w[0].clone(), to: w[1].clone() }).collect() }
    }

    pub fn start(&self) -> Vec<f64> {
        self.segments[0].start()
    }

    pub fn end(&self) -> Vec<f64> {
        self.segments[self.segments.len() - 1].end()
    }

    pub fn length(&self) -> f64 {
        self.segments.iter().map(Segment::length).sum()
    }

    pub fn reversed(&self) -> Path {
        Path { segments: self.segments.iter().rev().map(Segment::reversed).collect() }
    }

    pub fn then(&self, other: &Path) -> Path {
        Path { segments: self.segments.iter().chain(&other.segments).cloned().collect() }
    }

    /// `per_segment` + 1 sample points on every segment.
    pub fn samples(&self, per_segment: usize) -> Vec<Vec<f64>> {
        self.segments
            .iter()
            .flat_map(|s| (0..=per_segment).map(move |i| s.eval(i as f64 / per_segment as f64).0))
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TransportConfig {
    pub steps_per_unit: f64,
    pub min_steps: usize,
    /// Max entry difference allowed between the n-step and 2n-step results.
    pub tol: f64,
    /// Refinements by 4x steps before giving up.
    pub max_refinements: usize,
}

impl Default for TransportConfig {
    fn default() -> Self {
        TransportConfig { steps_per_unit: 400.0, min_steps: 16, tol: 1e-9, max_refinements: 2 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Transport {
    /// Maps the fiber at the start to the fiber at the end.
    pub matrix: DMatrix<f64>,
    pub error_estimate: f64,
    pub steps: usize,
}

fn generator<C: Connection + ?Sized>(c: &C, x: &[f64], v: &[f64]) -> Result<DMatrix<f64>> {
    if !c.in_domain(x) {
        return Err(Error::Domain(format!("path leaves the domain at {x:?}")));
    }
    let k = c.fiber_dim();
    let mut a = DMatrix::zeros(k, k);
    for (ab, vb) in c.matrices(x).iter().zip(v) {
        a -= ab * *vb;
    }
    Ok(a)
}

fn rk4_segment<C: Connection + ?Sized>(c: &C, seg: &Segment, steps: usize, m: &mut DMatrix<f64>) -> Result<()> {
    let h = 1.0 / steps as f64;
    let at = |t: f64| -> Result<DMatrix<f64>> {
        let (x, v) = seg.eval(t);
        generator(c, &x, &v)
    };
    let mut f0 = at(0.0)?;
    for i in 0..steps {
        let t = i as f64 * h;
        let fm = at(t + 0.5 * h)?;
        let f1 = at(t + h)?;
        let k1 = &f0 * &*m;
        let k2 = &fm * (&*m + &k1 * (0.5 * h));
        let k3 = &fm * (&*m + &k2 * (0.5 * h));
        let k4 = &f1 * (&*m + &k3 * h);
        *m += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
        f0 = f1;
    }
    Ok(())
}

fn integrate<C: Connection + ?Sized>(c: &C, path: &Path, steps: &[usize]) -> Result<DMatrix<f64>> {
    let k = c.fiber_dim();
    let mut m = DMatrix::identity(k, k);
    for (seg, &n) in path.segments.iter().zip(steps) {
        rk4_segment(c, seg, n, &mut m)?;
    }
    Ok(m)
}

/// Solve dM/dt = -A(gamma') M along the path with classical RK4, checking
/// against a run with halved step.
pub fn parallel_transport<C: Connection + ?Sized>(c: &C, path: &Path, cfg: &TransportConfig) -> Result<Transport> {
    if path.segments.is_empty() {
        let k = c.fiber_dim();
        return Ok(Transport { matrix: DMatrix::identity(k, k), error_estimate: 0.0, steps: 0 });
    }
    let mut steps: Vec<usize> =
        path.segments.iter().map(|s| ((s.length() * cfg.steps_per_unit).ceil() as usize).max(cfg.min_steps)).collect();
    for _ in 0..=cfg.max_refinements {
        let coarse = integrate(c, path, &steps)?;
        let doubled: Vec<usize> = steps.iter().map(|n| 2 * n).collect();
        let fine = integrate(c, path, &doubled)?;
        let err = (&fine - &coarse).amax();
        if err <= cfg.tol {
            return Ok(Transport { matrix: fine, error_estimate: err, steps: doubled.iter().sum() });
        }
        steps.iter_mut().for_each(|n| *n *= 4);
    }
    Err(Error::StepUnderflow { steps: steps.iter().sum() })
}

/// Largest entry of M^T H M - H.
pub fn gram_defect(m: &DMatrix<f64>, h: &DMatrix<f64>) -> f64 {
    (m.transpose() * h * m - h).amax()
}
