//! Levi-Civita connection and curvature of a metric model.
//!
//! Conventions:
//! `R^a_bcd = d_c Gamma^a_db - d_d Gamma^a_cb + Gamma^a_ce Gamma^e_db - Gamma^a_de Gamma^e_cb`,
//! `R_abcd = g_ae R^e_bcd`, `Ric_bd = R^a_bad`.
//! Derivatives of the metric come from nested dual numbers, so everything
//! here is exact up to rounding and works for any scalar type (which is how
//! derivatives of curvature are obtained).

use nalgebra::DMatrix;
use serde::Serialize;
use twofloat::TwoFloat;

use crate::error::{Error, Result};
use crate::jet::{seed2, Dual, Scalar};
use crate::linalg;
use crate::manifolds::{self, BivariateFisher, IndependenceFisher, MetricModel, UnivariateFisher};
use crate::numdiff;
use crate::point::{ManifoldId, Point};
use crate::tensor::{Symmetry, TensorValue, Valence};

pub type Mat<T, const N: usize> = [[T; N]; N];
pub type Arr3<T, const N: usize> = [[[T; N]; N]; N];
pub type Arr4<T, const N: usize> = [[[[T; N]; N]; N]; N];

/// Local Riemannian data at one point.
#[derive(Clone, Debug)]
pub struct Geometry<T, const N: usize> {
    pub g: Mat<T, N>,
    pub ginv: Mat<T, N>,
    /// Gamma^c_ab stored `[c][a][b]`.
    pub gamma: Arr3<T, N>,
    /// R_abcd.
    pub riemann: Arr4<T, N>,
    pub ricci: Mat<T, N>,
    pub scal: T,
}

fn zeros3<T: Scalar, const N: usize>() -> Arr3<T, N> {
    [[[T::zero(); N]; N]; N]
}

/// Gamma^c_ab from g and dg[e][a][b] = d_e g_ab.
fn christoffel_from<T: Scalar, const N: usize>(ginv: &Mat<T, N>, dg: &Arr3<T, N>) -> Arr3<T, N> {
    let mut first = zeros3::<T, N>();
    for a in 0..N {
        for b in a..N {
            for d in 0..N {
                let v = (dg[a][b][d] + dg[b][a][d] - dg[d][a][b]) * 0.5;
                first[a][b][d] = v;
                first[b][a][d] = v;
            }
        }
    }
    let mut gam = zeros3::<T, N>();
    for c in 0..N {
        for a in 0..N {
            for b in a..N {
                let mut acc = T::zero();
                for d in 0..N {
                    acc += ginv[c][d] * first[a][b][d];
                }
                gam[c][a][b] = acc;
                gam[c][b][a] = acc;
            }
        }
    }
    gam
}

/// Levi-Civita symbols only (first derivatives of the metric).
pub fn levi_civita<M: MetricModel<N>, T: Scalar, const N: usize>(m: &M, x: &[T; N]) -> (Mat<T, N>, Arr3<T, N>) {
    let xs: [Dual<T, N>; N] = std::array::from_fn(|i| Dual::variable(x[i], i));
    let gd = m.metric(&xs);
    let g: Mat<T, N> = std::array::from_fn(|i| std::array::from_fn(|j| gd[i][j].v));
    let dg: Arr3<T, N> = std::array::from_fn(|e| std::array::from_fn(|i| std::array::from_fn(|j| gd[i][j].d[e])));
    let ginv = linalg::inverse(&g).expect("metric is non-degenerate on the domain");
    (g, christoffel_from(&ginv, &dg))
}

/// Full local geometry at `x`.
pub fn geometry<M: MetricModel<N>, T: Scalar, const N: usize>(m: &M, x: &[T; N]) -> Geometry<T, N> {
    let gm = m.metric(&seed2(x));
    // Peel one derivative level: the remaining dual part carries d_e of each entry.
    let g1: Mat<Dual<T, N>, N> = std::array::from_fn(|i| std::array::from_fn(|j| gm[i][j].v));
    let dg1: Arr3<Dual<T, N>, N> =
        std::array::from_fn(|e| std::array::from_fn(|i| std::array::from_fn(|j| gm[i][j].d[e])));
    let ginv1 = linalg::inverse(&g1).expect("metric is non-degenerate on the domain");
    let gam1 = christoffel_from(&ginv1, &dg1);

    let g: Mat<T, N> = std::array::from_fn(|i| std::array::from_fn(|j| g1[i][j].v));
    let ginv: Mat<T, N> = std::array::from_fn(|i| std::array::from_fn(|j| ginv1[i][j].v));
    let gamma: Arr3<T, N> = std::array::from_fn(|c| std::array::from_fn(|a| std::array::from_fn(|b| gam1[c][a][b].v)));

    // R^a_bcd
    let mut rup = [[[[T::zero(); N]; N]; N]; N];
    for a in 0..N {
        for b in 0..N {
            for c in 0..N {
                for d in (c + 1)..N {
                    let mut v = gam1[a][d][b].d[c] - gam1[a][c][b].d[d];
                    for e in 0..N {
                        v += gamma[a][c][e] * gamma[e][d][b] - gamma[a][d][e] * gamma[e][c][b];
                    }
                    rup[a][b][c][d] = v;
                    rup[a][b][d][c] = -v;
                }
            }
        }
    }
    let mut riemann = [[[[T::zero(); N]; N]; N]; N];
    for a in 0..N {
        for b in 0..N {
            for c in 0..N {
                for d in 0..N {
                    let mut v = T::zero();
                    for e in 0..N {
                        v += g[a][e] * rup[e][b][c][d];
                    }
                    riemann[a][b][c][d] = v;
                }
            }
        }
    }
    let mut ricci = [[T::zero(); N]; N];
    for b in 0..N {
        for d in 0..N {
            let mut v = T::zero();
            for a in 0..N {
                v += rup[a][b][a][d];
            }
            ricci[b][d] = v;
        }
    }
    let mut scal = T::zero();
    for a in 0..N {
        for b in 0..N {
            scal += ginv[a][b] * ricci[a][b];
        }
    }
    Geometry { g, ginv, gamma, riemann, ricci, scal }
}

/// `geometry` evaluated in double-double and rounded once, so entries stay
/// accurate to a few ulps even where g is badly conditioned.
pub fn geometry_precise<M: MetricModel<N>, const N: usize>(m: &M, x: &[f64; N]) -> Geometry<f64, N> {
    let geo = geometry(m, &x.map(TwoFloat::from));
    let r = |v: &TwoFloat| v.re();
    Geometry {
        g: geo.g.map(|row| row.map(|v| r(&v))),
        ginv: geo.ginv.map(|row| row.map(|v| r(&v))),
        gamma: geo.gamma.map(|a| a.map(|row| row.map(|v| r(&v)))),
        riemann: geo.riemann.map(|a| a.map(|b| b.map(|row| row.map(|v| r(&v))))),
        ricci: geo.ricci.map(|row| row.map(|v| r(&v))),
        scal: r(&geo.scal),
    }
}

impl<T: Scalar, const N: usize> Geometry<T, N> {
    /// J = scal / (2(n-1)).
    pub fn j_trace(&self) -> T {
        self.scal / (2.0 * (N as f64 - 1.0))
    }

    /// P_ab = (Ric_ab - J g_ab) / (n - 2); requires n >= 3.
    pub fn schouten(&self) -> Mat<T, N> {
        let j = self.j_trace();
        let k = 1.0 / (N as f64 - 2.0);
        std::array::from_fn(|a| std::array::from_fn(|b| (self.ricci[a][b] - j * self.g[a][b]) * k))
    }

    /// P_b^a = g^ac P_bc, stored `[b][a]`.
    pub fn schouten_mixed(&self) -> Mat<T, N> {
        let p = self.schouten();
        std::array::from_fn(|b| {
            std::array::from_fn(|a| {
                let mut v = T::zero();
                for c in 0..N {
                    v += self.ginv[a][c] * p[b][c];
                }
                v
            })
        })
    }
}

impl<const N: usize> Geometry<f64, N> {
    /// Standard Weyl decomposition; requires n >= 4.
    pub fn weyl(&self) -> Arr4<f64, N> {
        let n = N as f64;
        let (g, ric, r) = (&self.g, &self.ricci, &self.riemann);
        let mut c = [[[[0.0; N]; N]; N]; N];
        for a in 0..N {
            for b in 0..N {
                for cc in 0..N {
                    for d in 0..N {
                        let kn =
                            ric[a][cc] * g[b][d] + ric[b][d] * g[a][cc] - ric[a][d] * g[b][cc] - ric[b][cc] * g[a][d];
                        let gg = g[a][cc] * g[b][d] - g[a][d] * g[b][cc];
                        c[a][b][cc][d] = r[a][b][cc][d] - kn / (n - 2.0) + self.scal * gg / ((n - 1.0) * (n - 2.0));
                    }
                }
            }
        }
        c
    }

    /// k(a, b) = R_abab / (g_aa g_bb - g_ab^2).
    pub fn sectional(&self, a: usize, b: usize) -> Result<f64> {
        if a == b {
            return Err(Error::RejectedInput("sectional curvature needs a != b".into()));
        }
        let area = self.g[a][a] * self.g[b][b] - self.g[a][b] * self.g[a][b];
        let scale = self.g[a][a].abs() * self.g[b][b].abs();
        if area.abs() <= linalg::DEGENERACY_TOL * scale {
            return Err(Error::Degenerate { smallest: area });
        }
        Ok(self.riemann[a][b][a][b] / area)
    }

    pub fn einstein_defect(&self) -> f64 {
        let lam = self.scal / N as f64;
        let mut worst: f64 = 0.0;
        for a in 0..N {
            for b in 0..N {
                worst = worst.max((self.ricci[a][b] - lam * self.g[a][b]).abs());
            }
        }
        worst
    }
}

/// Curvature data at a point, in the manifold's tensor chart.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CurvaturePack {
    pub metric: TensorValue,
    pub christoffel: TensorValue,
    pub riemann: TensorValue,
    pub ricci: TensorValue,
    pub scal: f64,
    pub sectional: Vec<Vec<f64>>,
    pub schouten: Option<TensorValue>,
    pub j_trace: Option<f64>,
    pub weyl: Option<TensorValue>,
}

fn t2<const N: usize>(m: &Mat<f64, N>) -> TensorValue {
    TensorValue::from_fn(vec![Valence::Down; 2], N, |i| m[i[0]][i[1]]).with_symmetries(&[Symmetry::Symmetric(0, 1)])
}

fn t4<const N: usize>(r: &Arr4<f64, N>) -> TensorValue {
    TensorValue::from_fn(vec![Valence::Down; 4], N, |i| r[i[0]][i[1]][i[2]][i[3]]).with_symmetries(&[
        Symmetry::Antisymmetric(0, 1),
        Symmetry::Antisymmetric(2, 3),
        Symmetry::PairExchange,
    ])
}

pub fn pack_from<const N: usize>(geo: &Geometry<f64, N>) -> CurvaturePack {
    let mut sectional = vec![vec![0.0; N]; N];
    for (a, row) in sectional.iter_mut().enumerate() {
        for (b, k) in row.iter_mut().enumerate() {
            if a != b {
                *k = geo.sectional(a, b).unwrap_or(f64::NAN);
            }
        }
    }
    let christoffel =
        TensorValue::from_fn(vec![Valence::Up, Valence::Down, Valence::Down], N, |i| geo.gamma[i[0]][i[1]][i[2]])
            .with_symmetries(&[Symmetry::Symmetric(1, 2)]);
    CurvaturePack {
        metric: t2(&geo.g),
        christoffel,
        riemann: t4(&geo.riemann),
        ricci: t2(&geo.ricci),
        scal: geo.scal,
        sectional,
        schouten: (N >= 3).then(|| t2(&geo.schouten())),
        j_trace: (N >= 3).then(|| geo.j_trace()),
        weyl: (N >= 4).then(|| t4(&geo.weyl())),
    }
}

/// Curvature of any metric model at raw chart coordinates.
pub fn curvature_of<M: MetricModel<N>, const N: usize>(m: &M, x: &[f64; N]) -> CurvaturePack {
    pack_from(&geometry_precise(m, x))
}

fn arr<const N: usize>(v: &[f64]) -> [f64; N] {
    std::array::from_fn(|i| v[i])
}

fn require(p: &Point) -> Result<Vec<f64>> {
    if !manifolds::domain_check(p) {
        return Err(Error::Domain(format!("{} {:?}", p.manifold.name(), p.coords)));
    }
    manifolds::tensor_coords(p)
}

/// Curvature pack of the Fisher-Rao metric at `p`.
pub fn curvature(p: &Point) -> Result<CurvaturePack> {
    let x = require(p)?;
    Ok(match p.manifold {
        ManifoldId::BivariateGaussian => curvature_of(&BivariateFisher, &arr::<5>(&x)),
        ManifoldId::IndependenceSub => curvature_of(&IndependenceFisher, &arr::<4>(&x)),
        ManifoldId::UnivariateGaussian => curvature_of(&UnivariateFisher, &arr::<2>(&x)),
    })
}

pub fn riemann(p: &Point) -> Result<TensorValue> {
    Ok(curvature(p)?.riemann)
}

pub fn ricci(p: &Point) -> Result<TensorValue> {
    Ok(curvature(p)?.ricci)
}

pub fn scalar(p: &Point) -> Result<f64> {
    Ok(curvature(p)?.scal)
}

pub fn sectional(p: &Point, a: usize, b: usize) -> Result<f64> {
    let x = require(p)?;
    if a >= x.len() || b >= x.len() {
        return Err(Error::RejectedInput("plane index out of range".into()));
    }
    match p.manifold {
        ManifoldId::BivariateGaussian => geometry_precise(&BivariateFisher, &arr::<5>(&x)).sectional(a, b),
        ManifoldId::IndependenceSub => geometry_precise(&IndependenceFisher, &arr::<4>(&x)).sectional(a, b),
        ManifoldId::UnivariateGaussian => geometry_precise(&UnivariateFisher, &arr::<2>(&x)).sectional(a, b),
    }
}

pub fn schouten(p: &Point) -> Result<(TensorValue, f64)> {
    let c = curvature(p)?;
    match (c.schouten, c.j_trace) {
        (Some(s), Some(j)) => Ok((s, j)),
        _ => Err(Error::DimensionTooSmall { dim: p.dim(), what: "Schouten tensor needs n >= 3" }),
    }
}

pub fn weyl(p: &Point) -> Result<TensorValue> {
    curvature(p)?.weyl.ok_or(Error::DimensionTooSmall { dim: p.dim(), what: "Weyl tensor needs n >= 4" })
}

pub fn einstein_defect(p: &Point) -> Result<f64> {
    let x = require(p)?;
    Ok(match p.manifold {
        ManifoldId::BivariateGaussian => geometry_precise(&BivariateFisher, &arr::<5>(&x)).einstein_defect(),
        ManifoldId::IndependenceSub => geometry_precise(&IndependenceFisher, &arr::<4>(&x)).einstein_defect(),
        ManifoldId::UnivariateGaussian => geometry_precise(&UnivariateFisher, &arr::<2>(&x)).einstein_defect(),
    })
}

/// Largest first-Bianchi violation R_a[bcd].
pub fn bianchi_defect(r: &TensorValue) -> f64 {
    let n = r.dim;
    let mut worst: f64 = 0.0;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let s = r.get(&[a, b, c, d]) + r.get(&[a, c, d, b]) + r.get(&[a, d, b, c]);
                    worst = worst.max(s.abs());
                }
            }
        }
    }
    worst
}

/// Largest single trace g^{ac} C_abcd (and the other index pairs) of a
/// rank-4 covariant tensor.
pub fn trace_defect(c: &TensorValue, g: &TensorValue) -> Result<f64> {
    let ginv = linalg::sym_inverse(&g.to_matrix())?;
    let n = c.dim;
    let pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    let mut worst: f64 = 0.0;
    for (s, t) in pairs {
        let rest: Vec<usize> = (0..4).filter(|&k| k != s && k != t).collect();
        for u in 0..n {
            for v in 0..n {
                let mut acc = 0.0;
                for i in 0..n {
                    for j in 0..n {
                        let mut idx = [0; 4];
                        idx[s] = i;
                        idx[t] = j;
                        idx[rest[0]] = u;
                        idx[rest[1]] = v;
                        acc += ginv[(i, j)] * c.get(&idx);
                    }
                }
                worst = worst.max(acc.abs());
            }
        }
    }
    Ok(worst)
}

/// A smooth function on a chart, evaluable on any scalar type.
pub trait ScalarField<const N: usize>: Send + Sync {
    fn eval<T: Scalar>(&self, x: &[T; N]) -> T;
}

/// Affine function c0 + sum c_i x_i.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AffineField<const N: usize> {
    pub c0: f64,
    pub coeffs: [f64; N],
}

impl<const N: usize> ScalarField<N> for AffineField<N> {
    fn eval<T: Scalar>(&self, x: &[T; N]) -> T {
        let mut v = T::cst(self.c0);
        for i in 0..N {
            v += x[i] * self.coeffs[i];
        }
        v
    }
}

/// `factor * mu_index` expressed in the tensor chart of G or I.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeanField {
    pub index: usize,
    pub factor: f64,
}

impl ScalarField<5> for MeanField {
    fn eval<T: Scalar>(&self, x: &[T; 5]) -> T {
        x[self.index] * self.factor
    }
}

impl ScalarField<4> for MeanField {
    fn eval<T: Scalar>(&self, th: &[T; 4]) -> T {
        // mu_i = theta_i * s_i with s_i = -1/(2 theta_{i+2})
        -th[self.index] / (th[self.index + 2] * 2.0) * self.factor
    }
}

/// The conformally related metric e^{2 Upsilon} g.
#[derive(Clone, Copy, Debug)]
pub struct ConformalRescale<M, U> {
    pub base: M,
    pub upsilon: U,
}

impl<M: MetricModel<N>, U: ScalarField<N>, const N: usize> MetricModel<N> for ConformalRescale<M, U> {
    fn metric<T: Scalar>(&self, x: &[T; N]) -> [[T; N]; N] {
        let w = (self.upsilon.eval(x) * 2.0).exp();
        self.base.metric(x).map(|row| row.map(|v| v * w))
    }

    fn in_domain(&self, x: &[f64; N]) -> bool {
        self.base.in_domain(x)
    }
}

/// Rescaled metric evaluator for e^{2 Upsilon} g; curvature objects follow
/// from `geometry` applied to the returned model.
pub fn conformal_rescale<M: MetricModel<N> + Clone, U: ScalarField<N> + Clone, const N: usize>(
    m: &M,
    upsilon: &U,
) -> ConformalRescale<M, U> {
    ConformalRescale { base: m.clone(), upsilon: upsilon.clone() }
}

/// C^a_bcd = g^ae C_ebcd.
pub fn weyl_mixed<const N: usize>(geo: &Geometry<f64, N>) -> Arr4<f64, N> {
    let c = geo.weyl();
    let mut out = [[[[0.0; N]; N]; N]; N];
    for a in 0..N {
        for b in 0..N {
            for cc in 0..N {
                for d in 0..N {
                    out[a][b][cc][d] = (0..N).map(|e| geo.ginv[a][e] * c[e][b][cc][d]).sum();
                }
            }
        }
    }
    out
}

/// Largest |nabla_c g_ab| with d g by central differences and Gamma exact.
pub fn metric_compatibility_defect<M: MetricModel<N>, const N: usize>(m: &M, x: &[f64; N]) -> Result<f64> {
    let (g, gam) = levi_civita(m, x);
    let ok = |y: &[f64]| m.in_domain(&arr::<N>(y));
    let mut worst: f64 = 0.0;
    for c in 0..N {
        for a in 0..N {
            for b in 0..N {
                let f = |y: &[f64]| m.metric(&arr::<N>(y))[a][b];
                let dg = numdiff::richardson_difference(f, ok, x, c, numdiff::default_step(x[c]))?;
                let mut v = dg;
                for d in 0..N {
                    v -= gam[d][c][a] * g[d][b] + gam[d][c][b] * g[a][d];
                }
                worst = worst.max(v.abs());
            }
        }
    }
    Ok(worst)
}

/// Finite-difference fallback: R_abcd from central differences of the
/// Levi-Civita symbols (themselves exact). Oracle for `geometry`.
pub fn riemann_finite_difference<M: MetricModel<N>, const N: usize>(m: &M, x: &[f64; N]) -> Result<Arr4<f64, N>> {
    let (g, gam) = levi_civita(m, x);
    let mut dgam = [[[[0.0; N]; N]; N]; N]; // dgam[e][c][a][b] = d_e Gamma^c_ab
    for e in 0..N {
        let h = 1e-4 * x[e].abs().max(1.0);
        let mut xp = *x;
        let mut xm = *x;
        xp[e] += h;
        xm[e] -= h;
        let mut xp2 = *x;
        let mut xm2 = *x;
        xp2[e] += h / 2.0;
        xm2[e] -= h / 2.0;
        for y in [&xp, &xm, &xp2, &xm2] {
            if !m.in_domain(y) {
                return Err(Error::RejectedInput("stencil leaves the domain".into()));
            }
        }
        let (_, gp) = levi_civita(m, &xp);
        let (_, gmn) = levi_civita(m, &xm);
        let (_, gp2) = levi_civita(m, &xp2);
        let (_, gm2) = levi_civita(m, &xm2);
        for c in 0..N {
            for a in 0..N {
                for b in 0..N {
                    let coarse = (gp[c][a][b] - gmn[c][a][b]) / (2.0 * h);
                    let fine = (gp2[c][a][b] - gm2[c][a][b]) / h;
                    dgam[e][c][a][b] = (4.0 * fine - coarse) / 3.0;
                }
            }
        }
    }
    let mut r = [[[[0.0; N]; N]; N]; N];
    for a in 0..N {
        for b in 0..N {
            for c in 0..N {
                for d in 0..N {
                    let mut up = [0.0; N];
                    for (f, u) in up.iter_mut().enumerate() {
                        let mut v = dgam[c][f][d][b] - dgam[d][f][c][b];
                        for e in 0..N {
                            v += gam[f][c][e] * gam[e][d][b] - gam[f][d][e] * gam[e][c][b];
                        }
                        *u = v;
                    }
                    r[a][b][c][d] = (0..N).map(|f| g[a][f] * up[f]).sum();
                }
            }
        }
    }
    Ok(r)
}

/// Dense copy of a metric array.
pub fn metric_matrix<const N: usize>(g: &Mat<f64, N>) -> DMatrix<f64> {
    linalg::to_dmatrix(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_sphere_has_unit_curvature() {
        // g = diag(1, sin^2 u) on S^2 as a sanity check of conventions.
        struct Sphere;
        impl MetricModel<2> for Sphere {
            fn metric<T: Scalar>(&self, x: &[T; 2]) -> [[T; 2]; 2] {
                let c = x[0];
                let s2 = -(c * c) + 1.0;
                [[s2.recip(), T::zero()], [T::zero(), s2]]
            }
            fn in_domain(&self, x: &[f64; 2]) -> bool {
                x[0].abs() < 1.0
            }
        }
        let geo = geometry(&Sphere, &[0.3, 0.1]);
        assert!((geo.scal - 2.0).abs() < 1e-12);
        assert!((geo.sectional(0, 1).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn base_point_values() {
        let g = Point::source(ManifoldId::BivariateGaussian, &[0.0, 0.0, 1.0, 1.0, 0.0]).unwrap();
        let c = curvature(&g).unwrap();
        assert!((c.scal + 4.5).abs() < 1e-12);
        assert!((c.riemann.get(&[0, 1, 0, 1]) - 0.25).abs() < 1e-12);
        assert!((c.ricci.get(&[2, 4]) - 0.25).abs() < 1e-12);
        // entry 11 alone gives |-1/2 + 9/10| = 0.4; entry 44 gives 0.6
        assert!((einstein_defect(&g).unwrap() - 0.6).abs() < 1e-12);
        let i = Point::source(ManifoldId::IndependenceSub, &[0.0, 0.0, 2.0, 1.0]).unwrap();
        assert!((riemann(&i).unwrap().get(&[0, 2, 0, 2]) + 8.0).abs() < 1e-12);
    }

    #[test]
    fn low_dimension_errors() {
        let u = Point::source(ManifoldId::UnivariateGaussian, &[0.0, 2.0]).unwrap();
        assert!(matches!(schouten(&u), Err(Error::DimensionTooSmall { .. })));
        assert!(matches!(weyl(&u), Err(Error::DimensionTooSmall { .. })));
        assert!((scalar(&u).unwrap() + 1.0).abs() < 1e-12);
    }
}
