//! Holonomy algebra from loop logarithms and transported curvature, with
//! bracket closure, invariant lines and a small classification table.

use nalgebra::{DMatrix, DVector, SymmetricEigen, SVD};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::loops::{derive_seed, loop_family, GaussianRegion, LoopScheme, Region};
use super::matlog::matrix_log;
use super::transport::{gram_defect, parallel_transport, Connection, Path, TractorConnection, TransportConfig};
use crate::error::{Error, Result};
use crate::linalg;
use crate::manifolds::{self, BivariateFisher, DomainBox, IndependenceFisher};
use crate::point::{ManifoldId, Point};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HolonomyConfig {
    pub seed: u64,
    /// Random loops on top of the coordinate rectangles.
    pub loops: usize,
    pub scheme: LoopScheme,
    /// Random points whose curvature is transported back to the base.
    pub curvature_points: usize,
    pub transport: TransportConfig,
    pub rank_tol: f64,
    pub gap_min: f64,
    pub skew_tol: f64,
    pub closure_rounds: usize,
    /// Kernel threshold for invariant lines, relative to the largest singular value.
    pub kernel_tol: f64,
    pub bounds: DomainBox,
}

impl Default for HolonomyConfig {
    fn default() -> Self {
        HolonomyConfig {
            seed: 20240917,
            loops: 24,
            scheme: LoopScheme::Mixed,
            curvature_points: 6,
            transport: TransportConfig::default(),
            rank_tol: 1e-6,
            gap_min: 100.0,
            skew_tol: 1e-7,
            closure_rounds: 4,
            kernel_tol: 1e-6,
            bounds: DomainBox::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum NormType {
    Positive,
    Null,
    Negative,
}

impl NormType {
    pub fn name(self) -> &'static str {
        match self {
            NormType::Positive => "positive",
            NormType::Null => "null",
            NormType::Negative => "negative",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InvariantSubspace {
    /// Spanning vectors in the default (coordinate) frame; for a line with
    /// nonzero first component it is scaled to 1.
    pub basis: Vec<Vec<f64>>,
    pub norm: NormType,
    /// Fiber form on the representative.
    pub inner: f64,
    /// max |A v| / |v| over the algebra basis.
    pub kernel_residual: f64,
    /// How far the algebra is from preserving the orthogonal complement.
    pub complement_defect: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct HolonomyDiagnostics {
    pub loops_used: usize,
    pub loops_rejected: usize,
    pub generators: usize,
    /// Rank of the loop logarithms alone and of the curvature operators alone.
    pub dimension_loops: usize,
    pub dimension_curvature: usize,
    pub closure_rounds: usize,
    pub closure_residual: f64,
    pub max_skew: f64,
    pub max_gram_defect: f64,
    pub max_step_error: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HolonomyEstimate {
    pub space: String,
    pub base: Vec<f64>,
    /// Basis of the algebra in the default frame; orthonormal (Frobenius) in
    /// the frame where the fiber form is diagonal.
    #[serde(skip)]
    pub algebra_basis: Vec<DMatrix<f64>>,
    /// Fiber form at the base.
    #[serde(skip)]
    pub gram: DMatrix<f64>,
    pub dimension: usize,
    pub singular_values: Vec<f64>,
    /// s[dim-1] / s[dim]; infinite when nothing lies below the cut.
    pub gap: f64,
    pub invariant_subspaces: Vec<InvariantSubspace>,
    pub label: String,
    pub diagnostics: HolonomyDiagnostics,
}

struct Span {
    rank: usize,
    singular_values: Vec<f64>,
    gap: f64,
    basis: Vec<DMatrix<f64>>,
}

fn normalized(m: &DMatrix<f64>) -> Option<DMatrix<f64>> {
    let n = m.norm();
    (n > 1e-13).then(|| m / n)
}

fn span_of(gens: &[DMatrix<f64>], k: usize, rank_tol: f64) -> Span {
    if gens.is_empty() {
        return Span { rank: 0, singular_values: vec![], gap: f64::INFINITY, basis: vec![] };
    }
    let stack = DMatrix::from_fn(gens.len(), k * k, |r, c| gens[r][c]);
    let svd = SVD::new(stack, false, true);
    let vt = svd.v_t.expect("requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let s: Vec<f64> = order.iter().map(|&i| svd.singular_values[i]).collect();
    let cut = rank_tol * s[0];
    let rank = s.iter().filter(|&&v| v > cut).count();
    let gap = match (rank, s.get(rank)) {
        (0, _) => 0.0,
        (_, Some(&next)) if next > 0.0 => s[rank - 1] / next,
        _ => f64::INFINITY,
    };
    let basis = order[..rank].iter().map(|&i| DMatrix::from_fn(k, k, |r, c| vt[(i, r + k * c)])).collect();
    Span { rank, singular_values: s, gap, basis }
}

fn bracket(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    a * b - b * a
}

/// Largest relative distance of a bracket of basis elements from the span.
fn closure_residual(basis: &[DMatrix<f64>]) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..basis.len() {
        for j in (i + 1)..basis.len() {
            let c = bracket(&basis[i], &basis[j]);
            let n = c.norm();
            if n < 1e-13 {
                continue;
            }
            let mut r = c.clone();
            for b in basis {
                r -= b * b.dot(&c);
            }
            worst = worst.max(r.norm() / n);
        }
    }
    worst
}

/// Straight path base -> q inside the region, for some sampled q.
fn radial_path<R: Region + ?Sized>(base: &[f64], region: &R, seed: u64) -> Result<Path> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..200 {
        let q = region.sample(&mut rng);
        let path = Path::polyline(&[base.to_vec(), q]);
        if path.samples(64).iter().all(|x| region.contains(x)) {
            return Ok(path);
        }
    }
    Err(Error::Domain("no straight path from the base stays in the box".into()))
}

/// Raw algebra estimate for any connection; invariant subspaces and the label
/// are filled in by `invariant_subspaces` and `classify_group`.
pub fn estimate_algebra<C: Connection + ?Sized, R: Region + ?Sized>(
    c: &C,
    region: &R,
    base: &[f64],
    space: &str,
    cfg: &HolonomyConfig,
) -> Result<HolonomyEstimate> {
    if !c.in_domain(base) || !region.contains(base) {
        return Err(Error::Domain(format!("base {base:?}")));
    }
    let k = c.fiber_dim();
    let h = c.gram(base);
    let frame = linalg::orthonormalize(&h)?;
    let w = frame.matrix.clone();
    let winv = w.clone().try_inverse().ok_or(Error::Degenerate { smallest: 0.0 })?;
    let to_frame = |m: &DMatrix<f64>| &winv * m * &w;
    let mut diag = HolonomyDiagnostics::default();

    let loops = loop_family(c, base, region, cfg.scheme, cfg.loops, cfg.seed)?;
    let transports: Vec<Result<_>> = loops.par_iter().map(|l| parallel_transport(c, &l.path, &cfg.transport)).collect();
    let mut loop_gens = Vec::new();
    for t in transports {
        let t = t?;
        diag.max_gram_defect = diag.max_gram_defect.max(gram_defect(&t.matrix, &h));
        diag.max_step_error = diag.max_step_error.max(t.error_estimate);
        match matrix_log(&t.matrix) {
            Ok(l) => {
                diag.loops_used += 1;
                loop_gens.extend(normalized(&to_frame(&l)));
            }
            Err(Error::LogFailure(_)) => diag.loops_rejected += 1,
            Err(e) => return Err(e),
        }
    }

    // curvature at the base, then transported back from random points
    let mut curv_gens: Vec<DMatrix<f64>> = c.curvatures(base).iter().filter_map(|o| normalized(&to_frame(o))).collect();
    let transported: Vec<Result<Vec<DMatrix<f64>>>> = (0..cfg.curvature_points)
        .into_par_iter()
        .map(|i| {
            let path = radial_path(base, region, derive_seed(cfg.seed, 1_000_000 + i as u64))?;
            let p = parallel_transport(c, &path, &cfg.transport)?.matrix;
            let pinv = p.clone().try_inverse().ok_or(Error::Degenerate { smallest: 0.0 })?;
            Ok(c.curvatures(&path.end()).iter().map(|o| &pinv * o * &p).collect())
        })
        .collect();
    for t in transported {
        curv_gens.extend(t?.iter().filter_map(|o| normalized(&to_frame(o))));
    }

    diag.dimension_loops = span_of(&loop_gens, k, cfg.rank_tol).rank;
    diag.dimension_curvature = span_of(&curv_gens, k, cfg.rank_tol).rank;
    let mut gens = loop_gens;
    gens.extend(curv_gens);
    diag.generators = gens.len();

    let mut span = span_of(&gens, k, cfg.rank_tol);
    let first_gap = span.gap;
    let mut stable = 0;
    for _ in 0..cfg.closure_rounds {
        diag.closure_rounds += 1;
        let mut stack = span.basis.clone();
        for i in 0..span.basis.len() {
            for j in (i + 1)..span.basis.len() {
                stack.extend(normalized(&bracket(&span.basis[i], &span.basis[j])));
            }
        }
        let next = span_of(&stack, k, cfg.rank_tol);
        let same = next.rank == span.rank;
        span = next;
        stable = if same { stable + 1 } else { 0 };
        if stable >= 2 {
            break;
        }
    }
    let gap = first_gap.min(span.gap);
    if gap < cfg.gap_min {
        return Err(Error::AmbiguousRank { gap, singular_values: span.singular_values });
    }
    diag.closure_residual = closure_residual(&span.basis);
    let algebra_basis: Vec<DMatrix<f64>> = span.basis.iter().map(|b| &w * b * &winv).collect();
    diag.max_skew = algebra_basis.iter().map(|a| (a.transpose() * &h + &h * a).amax()).fold(0.0, f64::max);

    Ok(HolonomyEstimate {
        space: space.to_string(),
        base: base.to_vec(),
        algebra_basis,
        gram: h,
        dimension: span.rank,
        singular_values: span.singular_values,
        gap,
        invariant_subspaces: vec![],
        label: String::new(),
        diagnostics: diag,
    })
}

fn norm_type(q: f64) -> NormType {
    if q.abs() < 1e-8 {
        NormType::Null
    } else if q > 0.0 {
        NormType::Positive
    } else {
        NormType::Negative
    }
}

/// Common kernel of the algebra basis, split into lines that are orthogonal
/// for the fiber form, each tagged by its norm type.
pub fn invariant_subspaces(est: &HolonomyEstimate, kernel_tol: f64) -> Vec<InvariantSubspace> {
    let Some(first) = est.algebra_basis.first() else { return vec![] };
    let k = first.nrows();
    let d = est.algebra_basis.len();
    let stack = DMatrix::from_fn(d * k, k, |r, c| est.algebra_basis[r / k][(r % k, c)]);
    let svd = SVD::new(stack, false, true);
    let vt = svd.v_t.expect("requested");
    let smax = svd.singular_values.max();
    let kernel: Vec<DVector<f64>> = (0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] <= kernel_tol * smax)
        .map(|i| vt.row(i).transpose())
        .collect();
    if kernel.is_empty() {
        return vec![];
    }
    let kmat = DMatrix::from_columns(&kernel);
    let restricted = kmat.transpose() * &est.gram * &kmat;
    let eig = SymmetricEigen::new(restricted);
    let mut out: Vec<InvariantSubspace> = (0..kernel.len())
        .map(|j| {
            let mut v = &kmat * eig.eigenvectors.column(j);
            if v[0].abs() > 1e-8 {
                v /= v[0];
            } else {
                let i = v.iamax();
                v /= v[i].signum() * v.norm();
            }
            let inner = v.dot(&(&est.gram * &v));
            let vn = v.norm();
            let u = (&est.gram * &v).normalize();
            let q = DMatrix::identity(k, k) - &u * u.transpose();
            let mut kernel_residual: f64 = 0.0;
            let mut complement_defect: f64 = 0.0;
            for a in &est.algebra_basis {
                let an = a.norm();
                kernel_residual = kernel_residual.max((a * &v).norm() / (an * vn));
                complement_defect = complement_defect.max((u.transpose() * a * &q).norm() / an);
            }
            InvariantSubspace {
                basis: vec![v.iter().copied().collect()],
                norm: norm_type(inner / (vn * vn)),
                inner,
                kernel_residual,
                complement_defect,
            }
        })
        .collect();
    out.sort_by(|a, b| a.inner.total_cmp(&b.inner).reverse());
    out
}

/// (n+2)(n+1)/2 with nothing invariant gives SO^0(1,n+1); a single positive
/// line with (n+1)n/2 gives SO^0(1,n).
pub fn classify(dimension: usize, subspaces: &[InvariantSubspace], n: usize) -> String {
    let full = (n + 2) * (n + 1) / 2;
    let reduced = (n + 1) * n / 2;
    if dimension == full && subspaces.is_empty() {
        format!("SO^0(1,{})", n + 1)
    } else if dimension == reduced && subspaces.len() == 1 && subspaces[0].norm == NormType::Positive {
        format!("SO^0(1,{n})")
    } else {
        "unclassified".to_string()
    }
}

pub fn classify_group(est: &HolonomyEstimate, n: usize) -> String {
    classify(est.dimension, &est.invariant_subspaces, n)
}

/// Conformal holonomy of G or I at a base point, with invariant lines and label.
pub fn holonomy_algebra_estimate(p: &Point, cfg: &HolonomyConfig) -> Result<HolonomyEstimate> {
    if !manifolds::domain_check(p) {
        return Err(Error::Domain(format!("{:?}", p.coords)));
    }
    let x = manifolds::tensor_coords(p)?;
    let region = GaussianRegion { manifold: p.manifold, bounds: cfg.bounds };
    let mut est = match p.manifold {
        ManifoldId::BivariateGaussian => {
            estimate_algebra(&TractorConnection::<_, 5>(BivariateFisher), &region, &x, p.manifold.name(), cfg)?
        }
        ManifoldId::IndependenceSub => {
            estimate_algebra(&TractorConnection::<_, 4>(IndependenceFisher), &region, &x, p.manifold.name(), cfg)?
        }
        ManifoldId::UnivariateGaussian => {
            return Err(Error::DimensionTooSmall { dim: 2, what: "conformal holonomy needs n >= 3" })
        }
    };
    finish(&mut est, p.manifold.dim(), cfg);
    Ok(est)
}

pub(crate) fn finish(est: &mut HolonomyEstimate, n: usize, cfg: &HolonomyConfig) {
    est.invariant_subspaces = invariant_subspaces(est, cfg.kernel_tol);
    est.label = classify_group(est, n);
}
