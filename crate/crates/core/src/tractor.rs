//! Standard tractor bundle: (sigma, X^a, y) in a chosen splitting, the tractor
//! metric 2 sigma y + |X|^2 (polarized), the tractor connection and its
//! curvature.
//!
//! Weighted components are stored trivialized by the Fisher-Rao scale. The
//! scale tag records which metric in the conformal class defines the
//! splitting. With this reading the conformal metric pairs weight -1 vectors
//! through g_FR in every splitting, a constant rescaling leaves components
//! unchanged, and derivatives in a rescaled splitting pick up w Upsilon_b on a
//! weight-w slot.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::curvature::{geometry, ConformalRescale, Mat, ScalarField};
use crate::error::{Error, Result};
use crate::jet::{seed1, Dual, Scalar};
use crate::linalg;
use crate::manifolds::{self, MetricModel};
use crate::point::Point;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Scale {
    FisherRao,
    Rescaled(String),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Tractor {
    pub sigma: f64,
    pub x_up: Vec<f64>,
    pub y: f64,
    pub base: Point,
    pub scale: Scale,
}

impl Tractor {
    pub fn new(sigma: f64, x_up: Vec<f64>, y: f64, base: Point) -> Result<Self> {
        if x_up.len() != base.dim() {
            return Err(Error::RejectedInput("x_up length must equal the manifold dimension".into()));
        }
        Ok(Tractor { sigma, x_up, y, base, scale: Scale::FisherRao })
    }

    /// Column (sigma, X^1..X^n, y).
    pub fn to_vector(&self) -> DVector<f64> {
        let n = self.x_up.len();
        DVector::from_fn(n + 2, |i, _| match i {
            0 => self.sigma,
            i if i == n + 1 => self.y,
            i => self.x_up[i - 1],
        })
    }

    pub fn from_vector(v: &DVector<f64>, base: Point, scale: Scale) -> Self {
        let n = v.len() - 2;
        Tractor { sigma: v[0], x_up: v.rows(1, n).iter().copied().collect(), y: v[n + 1], base, scale }
    }
}

/// Gram matrix of the tractor metric in the coordinate frame, given g_ab.
pub fn tractor_gram(g: &DMatrix<f64>) -> DMatrix<f64> {
    let n = g.nrows();
    let mut h = DMatrix::zeros(n + 2, n + 2);
    h[(0, n + 1)] = 1.0;
    h[(n + 1, 0)] = 1.0;
    h.view_mut((1, 1), (n, n)).copy_from(g);
    h
}

fn reference_metric(base: &Point) -> Result<DMatrix<f64>> {
    Ok(manifolds::metric(base)?.to_matrix())
}

/// <V, W> = sigma_V y_W + g(X_V, X_W) + y_V sigma_W.
pub fn tractor_inner(v: &Tractor, w: &Tractor) -> Result<f64> {
    if v.base != w.base || v.scale != w.scale {
        return Err(Error::TractorMismatch);
    }
    let g = reference_metric(&v.base)?;
    let xv = DVector::from_column_slice(&v.x_up);
    let xw = DVector::from_column_slice(&w.x_up);
    Ok(v.sigma * w.y + xv.dot(&(&g * &xw)) + v.y * w.sigma)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TractorFrame {
    pub base: Point,
    pub vectors: Vec<Tractor>,
    #[serde(skip)]
    pub gram: DMatrix<f64>,
}

impl TractorFrame {
    /// The coordinate tractors (1,0,0), (0,e_i,0), (0,0,1).
    pub fn coordinate(base: &Point) -> Result<Self> {
        let n = base.dim();
        let vectors: Vec<Tractor> = (0..n + 2)
            .map(|k| {
                let v = DVector::from_fn(n + 2, |i, _| if i == k { 1.0 } else { 0.0 });
                Tractor::from_vector(&v, base.clone(), Scale::FisherRao)
            })
            .collect();
        TractorFrame::from_vectors(base, vectors)
    }

    pub fn from_vectors(base: &Point, vectors: Vec<Tractor>) -> Result<Self> {
        let k = vectors.len();
        let mut gram = DMatrix::zeros(k, k);
        for i in 0..k {
            for j in 0..k {
                gram[(i, j)] = tractor_inner(&vectors[i], &vectors[j])?;
            }
        }
        Ok(TractorFrame { base: base.clone(), vectors, gram })
    }

    pub fn signature(&self) -> Result<(usize, usize)> {
        linalg::signature(&self.gram)
    }
}

/// Upsilon with its gradient, for a change of scale g -> e^{2 Upsilon} g.
#[derive(Clone, Debug)]
pub struct ConformalFactor<U> {
    pub upsilon: U,
    pub label: String,
    /// +1 maps Fisher-Rao to the rescaled splitting, -1 maps back.
    pub sign: f64,
}

impl<U: Clone> ConformalFactor<U> {
    pub fn new(upsilon: U, label: &str) -> Self {
        ConformalFactor { upsilon, label: label.to_string(), sign: 1.0 }
    }

    pub fn inverse(&self) -> Self {
        ConformalFactor { upsilon: self.upsilon.clone(), label: self.label.clone(), sign: -self.sign }
    }

    /// Upsilon_a at x (signed).
    pub fn gradient<T: Scalar, const N: usize>(&self, x: &[T; N]) -> [T; N]
    where
        U: ScalarField<N>,
    {
        let u = self.upsilon.eval(&seed1(x));
        u.d.map(|d| d * self.sign)
    }

    pub fn value<const N: usize>(&self, x: &[f64; N]) -> f64
    where
        U: ScalarField<N>,
    {
        self.sign * self.upsilon.eval(x)
    }
}

/// Apply the splitting change with gradient `ups` (lower index) and inverse
/// reference metric `ginv`, generically in the scalar type.
fn convert_components<T: Scalar, const N: usize>(
    sigma: T,
    x: &[T; N],
    y: T,
    ups: &[T; N],
    ginv: &Mat<T, N>,
) -> (T, [T; N], T) {
    let ups_up: [T; N] = std::array::from_fn(|a| {
        let mut v = T::zero();
        for b in 0..N {
            v += ginv[a][b] * ups[b];
        }
        v
    });
    let mut ux = T::zero();
    let mut uu = T::zero();
    for a in 0..N {
        ux += ups[a] * x[a];
        uu += ups[a] * ups_up[a];
    }
    let xh: [T; N] = std::array::from_fn(|a| x[a] + ups_up[a] * sigma);
    (sigma, xh, y - ux - uu * sigma * 0.5)
}

fn arr<const N: usize>(v: &[f64]) -> [f64; N] {
    std::array::from_fn(|i| v[i])
}

/// (sigma, X, y) -> (sigma, X + Upsilon^a sigma, y - Upsilon_b X^b - |Upsilon|^2 sigma / 2).
pub fn tractor_conformal_change<U: ScalarField<N> + Clone, const N: usize>(
    v: &Tractor,
    f: &ConformalFactor<U>,
) -> Result<Tractor> {
    if v.x_up.len() != N {
        return Err(Error::RejectedInput("tractor dimension does not match the factor".into()));
    }
    let target = if f.sign > 0.0 {
        if v.scale != Scale::FisherRao {
            return Err(Error::TractorMismatch);
        }
        Scale::Rescaled(f.label.clone())
    } else {
        if v.scale != Scale::Rescaled(f.label.clone()) {
            return Err(Error::TractorMismatch);
        }
        Scale::FisherRao
    };
    let x = arr::<N>(&manifolds::tensor_coords(&v.base)?);
    let g = reference_metric(&v.base)?;
    let ginv = linalg::sym_inverse(&g)?;
    let ginv_a: Mat<f64, N> = std::array::from_fn(|i| std::array::from_fn(|j| ginv[(i, j)]));
    let ups = f.gradient(&x);
    let (s, xh, y) = convert_components(v.sigma, &arr::<N>(&v.x_up), v.y, &ups, &ginv_a);
    Ok(Tractor { sigma: s, x_up: xh.to_vec(), y, base: v.base.clone(), scale: target })
}

/// Connection matrices A_b, stored `[b][row][col]`, acting on (sigma, X, y):
/// nabla_b V = d_b V + A_b V.
pub type ConnectionMatrices<T> = Vec<Vec<Vec<T>>>;

fn assemble<T: Scalar, const N: usize>(
    g0: &Mat<T, N>,
    g0inv: &Mat<T, N>,
    gamma: &[[[T; N]; N]; N],
    p_low: &Mat<T, N>,
    ups: &[T; N],
) -> ConnectionMatrices<T> {
    let m = N + 2;
    (0..N)
        .map(|b| {
            let mut a = vec![vec![T::zero(); m]; m];
            for c in 0..N {
                a[0][1 + c] = -g0[b][c];
                a[N + 1][1 + c] = -p_low[b][c];
                for r in 0..N {
                    a[1 + r][1 + c] = gamma[r][b][c];
                }
                let mut pbc = T::zero();
                for e in 0..N {
                    pbc += g0inv[c][e] * p_low[b][e];
                }
                a[1 + c][0] = pbc;
            }
            a[1 + b][N + 1] = T::one();
            // density weights: sigma has weight 1, X and y weight -1
            a[0][0] += ups[b];
            for r in 1..m {
                a[r][r] -= ups[b];
            }
            a
        })
        .collect()
}

/// Tractor connection of the Fisher-Rao splitting at x.
pub fn connection_matrices<M: MetricModel<N>, T: Scalar, const N: usize>(m: &M, x: &[T; N]) -> ConnectionMatrices<T> {
    let geo = geometry(m, x);
    assemble(&geo.g, &geo.ginv, &geo.gamma, &geo.schouten(), &[T::zero(); N])
}

/// Tractor connection in the splitting of e^{2 Upsilon} g at x.
pub fn connection_matrices_rescaled<M, U, T, const N: usize>(
    m: &M,
    f: &ConformalFactor<U>,
    x: &[T; N],
) -> ConnectionMatrices<T>
where
    M: MetricModel<N> + Clone,
    U: ScalarField<N> + Clone,
    T: Scalar,
{
    let scaled = ConformalRescale { base: m.clone(), upsilon: SignedField { inner: f.upsilon.clone(), sign: f.sign } };
    let hat = geometry(&scaled, x);
    let g0 = m.metric(x);
    let g0inv = linalg::inverse(&g0).expect("metric is non-degenerate on the domain");
    assemble(&g0, &g0inv, &hat.gamma, &hat.schouten(), &f.gradient(x))
}

#[derive(Clone, Debug)]
struct SignedField<U> {
    inner: U,
    sign: f64,
}

impl<U: ScalarField<N>, const N: usize> ScalarField<N> for SignedField<U> {
    fn eval<T: Scalar>(&self, x: &[T; N]) -> T {
        self.inner.eval(x) * self.sign
    }
}

pub fn to_dmatrices(a: &ConnectionMatrices<f64>) -> Vec<DMatrix<f64>> {
    a.iter().map(|m| DMatrix::from_fn(m.len(), m.len(), |i, j| m[i][j])).collect()
}

/// A smooth tractor field in the tensor chart: x -> (sigma, X, y).
pub trait TractorField<const N: usize>: Send + Sync {
    fn eval<T: Scalar>(&self, x: &[T; N]) -> (T, [T; N], T);
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConstantField<const N: usize> {
    pub sigma: f64,
    pub x_up: [f64; N],
    pub y: f64,
}

impl<const N: usize> TractorField<N> for ConstantField<N> {
    fn eval<T: Scalar>(&self, _: &[T; N]) -> (T, [T; N], T) {
        (T::cst(self.sigma), self.x_up.map(T::cst), T::cst(self.y))
    }
}

/// A field re-expressed in the rescaled splitting, pointwise.
pub struct ConvertedField<'a, F, M, U> {
    pub field: &'a F,
    pub model: &'a M,
    pub factor: &'a ConformalFactor<U>,
}

impl<F: TractorField<N>, M: MetricModel<N>, U: ScalarField<N> + Clone + Send + Sync, const N: usize> TractorField<N>
    for ConvertedField<'_, F, M, U>
{
    fn eval<T: Scalar>(&self, x: &[T; N]) -> (T, [T; N], T) {
        let (s, xv, y) = self.field.eval(x);
        let g = self.model.metric(x);
        let ginv = linalg::inverse(&g).expect("metric is non-degenerate on the domain");
        convert_components(s, &xv, y, &self.factor.gradient(x), &ginv)
    }
}

fn apply<const N: usize>(a: &[Vec<f64>], d: &[f64], v: &[f64]) -> Vec<f64> {
    (0..N + 2).map(|r| d[r] + (0..N + 2).map(|c| a[r][c] * v[c]).sum::<f64>()).collect()
}

fn field_jet<F: TractorField<N>, const N: usize>(field: &F, x: &[f64; N]) -> (Vec<f64>, Vec<Vec<f64>>) {
    let (s, xv, y) = field.eval(&seed1(x));
    let comps: Vec<Dual<f64, N>> = std::iter::once(s).chain(xv).chain(std::iter::once(y)).collect();
    let val = comps.iter().map(|c| c.v).collect();
    let der = (0..N).map(|b| comps.iter().map(|c| c.d[b]).collect()).collect();
    (val, der)
}

/// nabla^T_b V at x in the Fisher-Rao splitting.
pub fn tractor_derivative<M: MetricModel<N>, F: TractorField<N>, const N: usize>(
    m: &M,
    field: &F,
    p: &Point,
    b: usize,
) -> Result<Tractor> {
    let x = checked_coords::<M, N>(m, p)?;
    if b >= N {
        return Err(Error::RejectedInput("direction index out of range".into()));
    }
    let a = connection_matrices(m, &x);
    let (val, der) = field_jet(field, &x);
    let out = apply::<N>(&a[b], &der[b], &val);
    Ok(Tractor::from_vector(&DVector::from_vec(out), p.clone(), Scale::FisherRao))
}

/// nabla^T_b of a field given in the rescaled splitting.
pub fn tractor_derivative_rescaled<M, U, F, const N: usize>(
    m: &M,
    f: &ConformalFactor<U>,
    field: &F,
    p: &Point,
    b: usize,
) -> Result<Tractor>
where
    M: MetricModel<N> + Clone,
    U: ScalarField<N> + Clone,
    F: TractorField<N>,
{
    let x = checked_coords::<M, N>(m, p)?;
    let a = connection_matrices_rescaled(m, f, &x);
    let (val, der) = field_jet(field, &x);
    let out = apply::<N>(&a[b], &der[b], &val);
    Ok(Tractor::from_vector(&DVector::from_vec(out), p.clone(), Scale::Rescaled(f.label.clone())))
}

/// Polynomial test field with every component non-constant.
#[derive(Clone, Copy, Debug, Default)]
pub struct ProbeField;

impl<const N: usize> TractorField<N> for ProbeField {
    fn eval<T: Scalar>(&self, x: &[T; N]) -> (T, [T; N], T) {
        let mut s = T::cst(1.0);
        for (i, xi) in x.iter().enumerate() {
            s += *xi * (0.1 * (i + 1) as f64);
        }
        let xv = std::array::from_fn(|a| x[a] * x[(a + 1) % N] * 0.2 + 0.05 * a as f64);
        (s, xv, x[0] * x[N - 1] - x[1] * 0.3)
    }
}

/// max over directions of |convert(nabla V) - nabla^(rescaled)(convert V)|:
/// zero iff the connection commutes with the change of splitting at p.
pub fn conformal_invariance_residual<M, U, F, const N: usize>(
    m: &M,
    f: &ConformalFactor<U>,
    field: &F,
    p: &Point,
) -> Result<f64>
where
    M: MetricModel<N> + Clone,
    U: ScalarField<N> + Clone + Send + Sync,
    F: TractorField<N>,
{
    let conv = ConvertedField { field, model: m, factor: f };
    let mut worst: f64 = 0.0;
    for b in 0..N {
        let lhs = tractor_conformal_change(&tractor_derivative(m, field, p, b)?, f)?;
        let rhs = tractor_derivative_rescaled(m, f, &conv, p, b)?;
        worst = worst.max((lhs.to_vector() - rhs.to_vector()).amax());
    }
    Ok(worst)
}

fn checked_coords<M: MetricModel<N>, const N: usize>(m: &M, p: &Point) -> Result<[f64; N]> {
    if p.dim() != N {
        return Err(Error::RejectedInput("point dimension does not match the model".into()));
    }
    let x = arr::<N>(&manifolds::tensor_coords(p)?);
    if !m.in_domain(&x) {
        return Err(Error::Domain(format!("{:?}", p.coords)));
    }
    Ok(x)
}

/// Omega_ab = d_a A_b - d_b A_a + [A_a, A_b] at raw chart coordinates.
pub fn tractor_curvature_at<M: MetricModel<N>, const N: usize>(
    m: &M,
    x: &[f64; N],
    a: usize,
    b: usize,
) -> DMatrix<f64> {
    let all = connection_matrices(m, &seed1(x));
    curvature_from_jet::<N>(&all, a, b)
}

/// All Omega_ab for a < b, in lexicographic plane order.
pub fn tractor_curvatures_at<M: MetricModel<N>, const N: usize>(m: &M, x: &[f64; N]) -> Vec<DMatrix<f64>> {
    let all = connection_matrices(m, &seed1(x));
    let mut out = Vec::new();
    for a in 0..N {
        for b in (a + 1)..N {
            out.push(curvature_from_jet::<N>(&all, a, b));
        }
    }
    out
}

pub(crate) fn curvature_from_jet<const N: usize>(
    all: &ConnectionMatrices<Dual<f64, N>>,
    a: usize,
    b: usize,
) -> DMatrix<f64> {
    let k = all[a].len();
    let va = DMatrix::from_fn(k, k, |i, j| all[a][i][j].v);
    let vb = DMatrix::from_fn(k, k, |i, j| all[b][i][j].v);
    let da_b = DMatrix::from_fn(k, k, |i, j| all[b][i][j].d[a]);
    let db_a = DMatrix::from_fn(k, k, |i, j| all[a][i][j].d[b]);
    da_b - db_a + &va * &vb - &vb * &va
}

/// Curvature of the Fisher-Rao tractor connection at a point of G or I.
pub fn tractor_curvature(p: &Point, a: usize, b: usize) -> Result<DMatrix<f64>> {
    if a == b {
        return Err(Error::RejectedInput("tractor curvature needs a != b".into()));
    }
    let x = manifolds::tensor_coords(p)?;
    if !manifolds::domain_check(p) {
        return Err(Error::Domain(format!("{:?}", p.coords)));
    }
    if a >= x.len() || b >= x.len() {
        return Err(Error::RejectedInput("direction index out of range".into()));
    }
    use crate::manifolds::{BivariateFisher, IndependenceFisher};
    use crate::point::ManifoldId;
    match p.manifold {
        ManifoldId::BivariateGaussian => Ok(tractor_curvature_at(&BivariateFisher, &arr::<5>(&x), a, b)),
        ManifoldId::IndependenceSub => Ok(tractor_curvature_at(&IndependenceFisher, &arr::<4>(&x), a, b)),
        ManifoldId::UnivariateGaussian => {
            Err(Error::DimensionTooSmall { dim: 2, what: "tractor connection needs n >= 3" })
        }
    }
}

/// Largest entry of Omega^T H + H Omega.
pub fn skew_defect(omega: &DMatrix<f64>, h: &DMatrix<f64>) -> f64 {
    (omega.transpose() * h + h * omega).amax()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifolds::IndependenceFisher;
    use crate::point::ManifoldId;

    fn base_i() -> Point {
        manifolds::to_natural(&Point::source(ManifoldId::IndependenceSub, &[0.0, 0.0, 1.0, 1.0]).unwrap()).unwrap()
    }

    #[test]
    fn null_and_positive_tractors() {
        let b = base_i();
        let v = Tractor::new(1.0, vec![0.0; 4], 0.0, b.clone()).unwrap();
        assert_eq!(tractor_inner(&v, &v).unwrap(), 0.0);
        let w = Tractor::new(0.0, vec![0.0, 1.0, 0.0, 0.0], 0.0, b.clone()).unwrap();
        assert!(tractor_inner(&w, &w).unwrap() > 0.0);
        let e = Tractor::new(1.0, vec![0.0; 4], 1.0 / 12.0, b).unwrap();
        assert!((tractor_inner(&e, &e).unwrap() - 1.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn einstein_tractor_is_parallel() {
        let f = ConstantField { sigma: 1.0, x_up: [0.0; 4], y: 1.0 / 12.0 };
        let p = manifolds::to_natural(&Point::source(ManifoldId::IndependenceSub, &[0.7, -1.1, 1.4, 0.6]).unwrap())
            .unwrap();
        for b in 0..4 {
            let d = tractor_derivative(&IndependenceFisher, &f, &p, b).unwrap();
            assert!(d.to_vector().amax() < 1e-12, "direction {b}");
        }
    }

    #[test]
    fn coordinate_frame_signature() {
        let g = Point::source(ManifoldId::BivariateGaussian, &[0.0, 0.0, 1.0, 1.0, 0.0]).unwrap();
        let fr = TractorFrame::coordinate(&g).unwrap();
        assert_eq!(fr.signature().unwrap(), (1, 6));
    }

    #[test]
    fn curvature_is_antisymmetric() {
        let p = Point::source(ManifoldId::BivariateGaussian, &[0.3, -0.2, 1.1, 0.8, 0.2]).unwrap();
        let o12 = tractor_curvature(&p, 0, 2).unwrap();
        let o21 = tractor_curvature(&p, 2, 0).unwrap();
        assert!((o12 + o21).amax() < 1e-14);
    }
}
