//! The report commands: closed-form tensor reproduction, oracles, tractor
//! properties and holonomy.

use nalgebra::DVector;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::config::RunConfig;
use super::{HolonomySection, Kind, Record, VerificationReport};
use crate::curvature::{self, bianchi_defect, geometry, geometry_precise, trace_defect, Geometry, MeanField};
use crate::error::{Error, Result};
use crate::holonomy::loops::derive_seed;
use crate::holonomy::{
    cone_holonomy_crosscheck, cone_ricci_max, holonomy_algebra_estimate, solve_parallel_tractor, Connection,
    HolonomyConfig, HolonomyEstimate, NormType, TractorConnection,
};
use crate::linalg;
use crate::manifolds::closed_form as cf;
use crate::manifolds::fisher::{fisher_matrix_gh, fisher_matrix_mc};
use crate::manifolds::{
    self, alpha_connection, christoffel_from_metric, BivariateFisher, BivariatePotential, HessianMetric,
    IndependenceFisher, MetricModel,
};
use crate::point::{ManifoldId, Point};
use crate::tractor::{conformal_invariance_residual, skew_defect, ConformalFactor, ProbeField};

// sampling streams, one per check family
const TENSOR_STREAM: u64 = 1_000_001;
const WEYL_STREAM: u64 = 1_000_002;
const MC_STREAM: u64 = 1_000_003;
const INVARIANCE_STREAM: u64 = 1_000_004;

const GH_ORDER: usize = 12;

fn tol(cfg: &RunConfig, t: f64) -> f64 {
    cfg.tolerance.unwrap_or(t)
}

/// The base point followed by `n` seeded samples from the domain box.
fn points(cfg: &RunConfig, m: ManifoldId, n: usize, stream: u64) -> Result<Vec<Point>> {
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(cfg.seed, stream));
    let bounds = cfg.bounds();
    let mut out = vec![cfg.base_point(m)?];
    out.extend((0..n).map(|_| bounds.sample(m, &mut rng)));
    Ok(out)
}

fn arr<const N: usize>(v: &[f64]) -> [f64; N] {
    std::array::from_fn(|i| v[i])
}

fn label(symbol: &str, idx: &[usize]) -> String {
    let digits: String = idx.iter().map(|i| char::from(b'1' + *i as u8)).collect();
    format!("{symbol}_{digits}")
}

/// Largest discrepancy seen so far, with where it occurred.
struct Worst {
    err: f64,
    target: f64,
    computed: f64,
    at: String,
}

impl Worst {
    fn new() -> Self {
        Worst { err: 0.0, target: f64::NAN, computed: f64::NAN, at: String::new() }
    }

    fn push(&mut self, target: f64, computed: f64, err: f64, at: impl FnOnce() -> String) {
        let err = if err.is_nan() { f64::INFINITY } else { err };
        if err > self.err || self.at.is_empty() {
            *self = Worst { err, target, computed, at: at() };
        }
    }

    fn abs(&mut self, target: f64, computed: f64, at: impl FnOnce() -> String) {
        self.push(target, computed, (target - computed).abs(), at);
    }

    /// absolute below 1, relative above
    fn rel(&mut self, target: f64, computed: f64, at: impl FnOnce() -> String) {
        self.push(target, computed, (target - computed).abs() / target.abs().max(1.0), at);
    }

    fn record(self, name: &str, anchor: &str, tol: f64, kind: Kind) -> Record {
        Record::within(name, anchor, self.target.into(), self.computed.into(), self.err, tol, kind).with_detail(self.at)
    }
}

/// Report a failing record instead of aborting the command.
fn guarded(name: &str, anchor: &str, f: impl FnOnce() -> Result<Record>) -> Record {
    f().unwrap_or_else(|e| Record::failed(name, anchor, e.to_string()))
}

fn mat_worst<const N: usize>(w: &mut Worst, i: usize, sym: &str, closed: &[[f64; N]; N], got: &[[f64; N]; N]) {
    for a in 0..N {
        for b in 0..N {
            w.abs(closed[a][b], got[a][b], || format!("point {i}, {}", label(sym, &[a, b])));
        }
    }
}

fn arr3_worst<const N: usize>(
    w: &mut Worst,
    i: usize,
    closed: &[[[f64; N]; N]; N],
    got: &[[[f64; N]; N]; N],
    rel: bool,
) {
    for c in 0..N {
        for a in 0..N {
            for b in 0..N {
                let at = || format!("point {i}, Gamma^{}_{}{}", c + 1, a + 1, b + 1);
                if rel {
                    w.rel(closed[c][a][b], got[c][a][b], at);
                } else {
                    w.abs(closed[c][a][b], got[c][a][b], at);
                }
            }
        }
    }
}

fn arr4_worst<const N: usize>(
    w: &mut Worst,
    i: usize,
    closed: &[[[[f64; N]; N]; N]; N],
    got: &[[[[f64; N]; N]; N]; N],
    rel: bool,
) {
    for a in 0..N {
        for b in 0..N {
            for c in 0..N {
                for d in 0..N {
                    let at = || format!("point {i}, {}", label("R", &[a, b, c, d]));
                    if rel {
                        w.rel(closed[a][b][c][d], got[a][b][c][d], at);
                    } else {
                        w.abs(closed[a][b][c][d], got[a][b][c][d], at);
                    }
                }
            }
        }
    }
}

fn ginv_max(g: &crate::tensor::TensorValue) -> f64 {
    linalg::sym_inverse(&g.to_matrix()).map_or(f64::INFINITY, |gi| gi.amax())
}

/// Identities every Levi-Civita curvature must satisfy.
fn property_records<M: MetricModel<N>, const N: usize>(cfg: &RunConfig, model: &M, xs: &[[f64; N]]) -> Vec<Record> {
    let (mut bianchi, mut weyl_trace, mut schouten) = (0.0f64, 0.0f64, 0.0f64);
    for x in xs {
        let pack = curvature::curvature_of(model, x);
        bianchi = bianchi.max(bianchi_defect(&pack.riemann));
        if let Some(w) = &pack.weyl {
            // relative to the size of the summands g^ac C_abcd
            let scale = (w.max_abs() * ginv_max(&pack.metric)).max(1.0);
            weyl_trace = weyl_trace.max(trace_defect(w, &pack.metric).unwrap_or(f64::INFINITY) / scale);
        }
        if let (Some(p), Some(j)) = (&pack.schouten, pack.j_trace) {
            let ginv = linalg::sym_inverse(&pack.metric.to_matrix())
                .map_or(f64::INFINITY, |gi| (gi.component_mul(&p.to_matrix()).sum() - j).abs());
            schouten = schouten.max(ginv);
        }
    }
    let t = tol(cfg, cfg.tol.property);
    vec![
        Record::at_most("bianchi", "R_a[bcd] = 0", bianchi, t, Kind::Property),
        Record::at_most("weyl_trace_free", "C is totally trace-free", weyl_trace, t, Kind::Property)
            .with_detail("largest single trace over max|C| max|g^-1|"),
        Record::at_most("schouten_trace", "g^ab P_ab = J", schouten, t, Kind::Property),
    ]
}

fn metric_compatibility<M: MetricModel<N>, const N: usize>(cfg: &RunConfig, model: &M, xs: &[[f64; N]]) -> Record {
    guarded("metric_compatibility", "nabla g = 0", || {
        let mut worst: f64 = 0.0;
        for x in xs {
            worst = worst.max(curvature::metric_compatibility_defect(model, x)?);
        }
        Ok(Record::at_most(
            "metric_compatibility",
            "nabla g = 0",
            worst,
            tol(cfg, cfg.tol.christoffel_fd),
            Kind::Oracle,
        ))
    })
}

fn fisher_mc_record(cfg: &RunConfig, m: ManifoldId) -> Record {
    let anchor = "g_ab = E[(d_a l)(d_b l)]";
    guarded("fisher_monte_carlo", anchor, || {
        let pts = points(cfg, m, cfg.mc_points - 1, MC_STREAM)?;
        let per: Vec<Result<(f64, String)>> = pts
            .par_iter()
            .enumerate()
            .map(|(i, p)| {
                let g = manifolds::metric(p)?.to_matrix();
                let (mean, se) =
                    fisher_matrix_mc(p, cfg.mc_samples, derive_seed(derive_seed(cfg.seed, MC_STREAM), i as u64))?;
                let mut worst = (0.0, String::new());
                for a in 0..g.nrows() {
                    for b in a..g.ncols() {
                        let diff = (mean[a][b] - g[(a, b)]).abs();
                        let z = if se[a][b] > 0.0 {
                            diff / se[a][b]
                        } else if diff < 1e-12 {
                            0.0
                        } else {
                            f64::INFINITY
                        };
                        if z > worst.0 || worst.1.is_empty() {
                            worst = (
                                z,
                                format!("point {i}, {}: {:.6e} vs {:.6e}", label("g", &[a, b]), mean[a][b], g[(a, b)]),
                            );
                        }
                    }
                }
                Ok(worst)
            })
            .collect();
        let mut worst = (0.0f64, String::new());
        for r in per {
            let (z, at) = r?;
            if z > worst.0 || worst.1.is_empty() {
                worst = (z, at);
            }
        }
        Ok(Record::at_most("fisher_monte_carlo", anchor, worst.0, tol(cfg, cfg.tol.mc_sigmas), Kind::Oracle)
            .with_detail(format!("standard errors; {}", worst.1)))
    })
}

fn fisher_gh_record(cfg: &RunConfig, pts: &[Point]) -> Record {
    let anchor = "g_ab = E[(d_a l)(d_b l)]";
    guarded("metric_quadrature", anchor, || {
        let mut w = Worst::new();
        for (i, p) in pts.iter().enumerate() {
            let g = manifolds::metric(p)?.to_matrix();
            let q = fisher_matrix_gh(p, GH_ORDER)?;
            for a in 0..g.nrows() {
                for b in 0..g.ncols() {
                    w.rel(g[(a, b)], q[a][b], || format!("point {i}, {}", label("g", &[a, b])));
                }
            }
        }
        Ok(w.record("metric_quadrature", anchor, tol(cfg, cfg.tol.tensor), Kind::Oracle))
    })
}

/// Lowered Levi-Civita symbols in natural coordinates against
/// (1 - alpha)/2 d^3 phi at alpha = 0, the latter by finite differences.
fn alpha_record<M: MetricModel<N>, const N: usize>(cfg: &RunConfig, model: &M, pts: &[Point]) -> Record {
    let anchor = "the only alpha-connection compatible with g is alpha = 0";
    guarded("alpha0_connection", anchor, || {
        let mut w = Worst::new();
        for (i, p) in pts.iter().enumerate() {
            let th = manifolds::to_natural(p)?;
            let geo: Geometry<f64, N> = geometry(model, &arr::<N>(&th.coords));
            let fd = alpha_connection(&th, 0.0)?;
            for a in 0..N {
                for b in 0..N {
                    for c in 0..N {
                        let lc: f64 = (0..N).map(|d| geo.g[c][d] * geo.gamma[d][a][b]).sum();
                        w.rel(lc, fd.get(&[a, b, c]), || format!("point {i}, Gamma_{}{},{}", a + 1, b + 1, c + 1));
                    }
                }
            }
        }
        Ok(w.record("alpha0_connection", anchor, tol(cfg, cfg.tol.alpha), Kind::Oracle))
    })
}

fn christoffel_fd_record<const N: usize>(
    cfg: &RunConfig,
    pts: &[Point],
    closed: impl Fn(&Point) -> [[[f64; N]; N]; N],
) -> Record {
    let anchor = "Gamma^c_ab from metric derivatives";
    guarded("christoffel_fd", anchor, || {
        let mut w = Worst::new();
        for (i, p) in pts.iter().enumerate() {
            let fd = christoffel_from_metric(p)?.second;
            let got: [[[f64; N]; N]; N] =
                std::array::from_fn(|c| std::array::from_fn(|a| std::array::from_fn(|b| fd.get(&[c, a, b]))));
            arr3_worst(&mut w, i, &closed(p), &got, true);
        }
        Ok(w.record("christoffel_fd", anchor, tol(cfg, cfg.tol.christoffel_fd), Kind::Oracle))
    })
}

fn riemann_fd_record<M: MetricModel<N>, const N: usize>(
    cfg: &RunConfig,
    model: &M,
    xs: &[[f64; N]],
    closed: impl Fn(usize) -> [[[[f64; N]; N]; N]; N],
) -> Record {
    let anchor = "R_abcd from finite-difference Christoffels";
    guarded("riemann_fd", anchor, || {
        let mut w = Worst::new();
        for (i, x) in xs.iter().enumerate() {
            let fd = curvature::riemann_finite_difference(model, x)?;
            arr4_worst(&mut w, i, &closed(i), &fd, true);
        }
        Ok(w.record("riemann_fd", anchor, tol(cfg, cfg.tol.riemann_fd), Kind::Oracle))
    })
}

fn tensor_xs<const N: usize>(pts: &[Point]) -> Result<Vec<[f64; N]>> {
    pts.iter().map(|p| manifolds::tensor_coords(p).map(|x| arr::<N>(&x))).collect()
}

fn bivariate_tensor_records(cfg: &RunConfig) -> Result<Vec<Record>> {
    let m = ManifoldId::BivariateGaussian;
    let pts = points(cfg, m, cfg.n_random, TENSOR_STREAM)?;
    let xs = tensor_xs::<5>(&pts)?;
    let geos: Vec<Geometry<f64, 5>> = xs.par_iter().map(|x| geometry_precise(&BivariateFisher, x)).collect();
    let t = tol(cfg, cfg.tol.tensor);
    let mut out = Vec::new();

    let (mut wg, mut wc, mut wr, mut wric, mut wk) =
        (Worst::new(), Worst::new(), Worst::new(), Worst::new(), Worst::new());
    let mut ws = Worst::new();
    for (i, (x, geo)) in xs.iter().zip(&geos).enumerate() {
        mat_worst(&mut wg, i, "g", &cf::bivariate_metric(x), &geo.g);
        arr3_worst(&mut wc, i, &cf::bivariate_christoffel(x), &geo.gamma, false);
        arr4_worst(&mut wr, i, &cf::bivariate_riemann(x), &geo.riemann, false);
        mat_worst(&mut wric, i, "Ric", &cf::bivariate_ricci(x), &geo.ricci);
        let k = cf::bivariate_sectional(x);
        for a in 0..5 {
            for b in 0..5 {
                if a != b {
                    let got = geo.sectional(a, b).unwrap_or(f64::NAN);
                    wk.abs(k[a][b], got, || format!("point {i}, k_{}{}", a + 1, b + 1));
                }
            }
        }
        ws.abs(cf::BIVARIATE_SCAL, geo.scal, || format!("point {i}"));
    }
    out.push(wg.record("metric", "Fisher-Rao metric of G in closed form", t, Kind::ClosedForm));
    out.push(wc.record("christoffel", "Gamma^c_ab of G in closed form", t, Kind::ClosedForm));
    out.push(wr.record("riemann", "the ten Riemann blocks of G", t, Kind::ClosedForm));
    out.push(wric.record("ricci", "Ric_ab of G in closed form", t, Kind::ClosedForm));
    out.push(wk.record("sectional", "sectional curvatures of G", t, Kind::ClosedForm));
    let mut scal = ws.record("scal", "scal = -9/2", t, Kind::ClosedForm);
    scal.computed = geos[0].scal.into();
    out.push(scal);

    let wpts = points(cfg, m, cfg.weyl_points - 1, WEYL_STREAM)?;
    out.push(guarded("weyl_1234", "C_1234 = -sigma2/(4 Delta^2)", || {
        let mut w = Worst::new();
        for (i, x) in tensor_xs::<5>(&wpts)?.iter().enumerate() {
            let c = geometry_precise(&BivariateFisher, x).weyl()[0][1][2][3];
            w.abs(cf::bivariate_weyl_1234(x), c, || format!("point {i}"));
        }
        Ok(w.record("weyl_1234", "C_1234 = -sigma2/(4 Delta^2)", t, Kind::ClosedForm))
    }));
    out.extend(property_records(cfg, &BivariateFisher, &xs));
    out.push(Record::at_least("einstein_defect", "G is not an Einstein manifold", geos[0].einstein_defect(), 0.4));

    let opts = &pts[..cfg.oracle_points.min(pts.len())];
    let oxs = &xs[..opts.len()];
    out.push(fisher_gh_record(cfg, opts));
    out.push(christoffel_fd_record::<5>(cfg, opts, |p| {
        cf::bivariate_christoffel(&arr::<5>(&manifolds::tensor_coords(p).unwrap_or_default()))
    }));
    out.push(riemann_fd_record(cfg, &BivariateFisher, oxs, |i| cf::bivariate_riemann(&oxs[i])));
    out.push(metric_compatibility(cfg, &BivariateFisher, oxs));
    out.push(alpha_record(cfg, &HessianMetric(BivariatePotential), opts));
    out.push(fisher_mc_record(cfg, m));

    // the printed tables next to the corrected ones, at a generic point
    // (the symmetric base point hides several typos)
    let x1 = &xs[1];
    let (pc, cc) = (cf::bivariate_christoffel_printed(x1), cf::bivariate_christoffel(x1));
    let mut w = Worst::new();
    arr3_worst(&mut w, 1, &pc, &cc, false);
    out.push(
        Record::side_by_side("christoffel_printed", "Gamma^c_ab of G as printed", w.target, w.computed)
            .with_detail(format!("largest printed-vs-corrected difference at {}", w.at)),
    );
    let (pr, cr) = (cf::bivariate_riemann_blocks_printed(x1), cf::bivariate_riemann(x1));
    let mut w = Worst::new();
    for (a, b) in (0..5).flat_map(|a| (a + 1..5).map(move |b| (a, b))) {
        for c in 0..5 {
            for d in 0..5 {
                w.abs(pr[a][b][c][d], cr[a][b][c][d], || format!("point 1, {}", label("R", &[a, b, c, d])));
            }
        }
    }
    out.push(
        Record::side_by_side("riemann_printed", "the ten Riemann blocks of G as printed", w.target, w.computed)
            .with_detail(format!("largest printed-vs-corrected difference at {}", w.at)),
    );
    Ok(out)
}

fn independence_tensor_records(cfg: &RunConfig) -> Result<Vec<Record>> {
    let m = ManifoldId::IndependenceSub;
    let pts = points(cfg, m, cfg.n_random, TENSOR_STREAM)?;
    let xs = tensor_xs::<4>(&pts)?;
    let srcs: Vec<cf::IndepSource> = pts.iter().map(manifolds::independence_source).collect::<Result<_>>()?;
    let geos: Vec<Geometry<f64, 4>> = xs.par_iter().map(|x| geometry_precise(&IndependenceFisher, x)).collect();
    let t = tol(cfg, cfg.tol.tensor);
    let mut out = Vec::new();

    let (mut wg, mut wc, mut wr, mut wric, mut wk) =
        (Worst::new(), Worst::new(), Worst::new(), Worst::new(), Worst::new());
    let (mut w13, mut w24, mut ws) = (Worst::new(), Worst::new(), Worst::new());
    let mut einstein = 0.0f64;
    for (i, (s, geo)) in srcs.iter().zip(&geos).enumerate() {
        mat_worst(&mut wg, i, "g", &cf::independence_metric(s), &geo.g);
        arr3_worst(&mut wc, i, &cf::independence_christoffel(s), &geo.gamma, false);
        arr4_worst(&mut wr, i, &cf::independence_riemann(s), &geo.riemann, false);
        mat_worst(&mut wric, i, "Ric", &cf::independence_ricci(s), &geo.ricci);
        let k = cf::independence_sectional();
        for a in 0..4 {
            for b in 0..4 {
                if a != b {
                    let got = geo.sectional(a, b).unwrap_or(f64::NAN);
                    wk.abs(k[a][b], got, || format!("point {i}, k_{}{}", a + 1, b + 1));
                }
            }
        }
        w13.abs(-s[2].powi(3), geo.riemann[0][2][0][2], || format!("point {i}"));
        w24.abs(-s[3].powi(3), geo.riemann[1][3][1][3], || format!("point {i}"));
        ws.abs(cf::INDEPENDENCE_SCAL, geo.scal, || format!("point {i}"));
        einstein = einstein.max(geo.einstein_defect());
    }
    out.push(wg.record("metric", "Fisher-Rao metric of I in closed form", t, Kind::ClosedForm));
    out.push(wc.record("christoffel", "Gamma^c_ab of I (corrected listing)", t, Kind::ClosedForm));
    out.push(wr.record("riemann", "Riemann tensor of I", t, Kind::ClosedForm));
    out.push(w13.record("riemann_1313", "R_1313 = -sigma1^3", t, Kind::ClosedForm));
    out.push(w24.record("riemann_2424", "R_2424 = -sigma2^3", t, Kind::ClosedForm));
    out.push(wric.record("ricci", "Ric_ab of I in closed form", t, Kind::ClosedForm));
    out.push(wk.record("sectional", "sectional curvatures of I", t, Kind::ClosedForm));
    let mut scal = ws.record("scal", "scal = -2", t, Kind::ClosedForm);
    scal.computed = geos[0].scal.into();
    out.push(scal);
    out.push(Record::at_most(
        "einstein_defect",
        "g is an Einstein metric",
        einstein,
        tol(cfg, cfg.tol.einstein),
        Kind::Bound,
    ));
    out.extend(property_records(cfg, &IndependenceFisher, &xs));

    let s0 = &srcs[0];
    out.push(
        Record::side_by_side(
            "weyl_1234",
            "C_1234 = -7/3 sigma1 sigma2 (2 mu1^2 + sigma1)(2 mu2^2 + sigma2)",
            cf::independence_weyl_1234_printed(s0),
            geos[0].weyl()[0][1][2][3],
        )
        .with_detail("printed value next to the computed one; equality not asserted"),
    );

    let opts = &pts[..cfg.oracle_points.min(pts.len())];
    let oxs = &xs[..opts.len()];
    let osrc = &srcs[..opts.len()];
    out.push(fisher_gh_record(cfg, opts));
    out.push(guarded("metric_potential", "g_ab = d_a d_b phi", || {
        let mut w = Worst::new();
        for (i, p) in opts.iter().enumerate() {
            let h = manifolds::metric_from_potential(&manifolds::to_natural(p)?)?;
            let g = cf::independence_metric(&osrc[i]);
            for a in 0..4 {
                for b in 0..4 {
                    w.rel(g[a][b], h.get(&[a, b]), || format!("point {i}, {}", label("g", &[a, b])));
                }
            }
        }
        Ok(w.record("metric_potential", "g_ab = d_a d_b phi", tol(cfg, cfg.tol.christoffel_fd), Kind::Oracle))
    }));
    out.push(christoffel_fd_record::<4>(cfg, opts, |p| {
        cf::independence_christoffel(&manifolds::independence_source(p).unwrap_or([f64::NAN; 4]))
    }));
    out.push(riemann_fd_record(cfg, &IndependenceFisher, oxs, |i| cf::independence_riemann(&osrc[i])));
    out.push(metric_compatibility(cfg, &IndependenceFisher, oxs));
    out.push(alpha_record(cfg, &IndependenceFisher, opts));
    out.push(fisher_mc_record(cfg, m));

    // listed Christoffels that differ from the computed ones, at a generic point
    let (g1, s1) = (&geos[1], &srcs[1]);
    for l in cf::independence_christoffel_second_printed(s1) {
        let [c, a, b] = l.index;
        let got = g1.gamma[c][a][b];
        if (got - l.value).abs() > t {
            out.push(
                Record::side_by_side(&format!("listed {}", l.label), "Gamma^c_ab of I as listed", l.value, got)
                    .with_detail("point 1"),
            );
        }
    }
    for l in cf::independence_christoffel_first_printed(s1) {
        let [a, b, c] = l.index;
        let got: f64 = (0..4).map(|d| g1.g[c][d] * g1.gamma[d][a][b]).sum();
        if (got - l.value).abs() > t {
            out.push(
                Record::side_by_side(&format!("listed {}", l.label), "Gamma_ab,c of I as listed", l.value, got)
                    .with_detail("point 1"),
            );
        }
    }
    Ok(out)
}

fn tensor_records(cfg: &RunConfig, m: ManifoldId) -> Result<Vec<Record>> {
    match m {
        ManifoldId::BivariateGaussian => bivariate_tensor_records(cfg),
        ManifoldId::IndependenceSub => independence_tensor_records(cfg),
        ManifoldId::UnivariateGaussian => Err(Error::Config("the univariate manifold has no report".into())),
    }
}

fn errata(m: ManifoldId) -> Vec<cf::Erratum> {
    match m {
        ManifoldId::BivariateGaussian => cf::BIVARIATE_ERRATA.to_vec(),
        ManifoldId::IndependenceSub => cf::INDEPENDENCE_ERRATA.to_vec(),
        ManifoldId::UnivariateGaussian => Vec::new(),
    }
}

/// Conformal invariance of the tractor connection for Upsilon = 0.1 mu1 and
/// h-skewness of its curvature.
fn tractor_records(cfg: &RunConfig, m: ManifoldId) -> Result<Vec<Record>> {
    let pts = points(cfg, m, cfg.invariance_points - 1, INVARIANCE_STREAM)?;
    let f = ConformalFactor::new(MeanField { index: 0, factor: 0.1 }, "0.1 mu1");
    let anchor = "conformally invariant connection";
    let inv = guarded("tractor_invariance", anchor, || {
        let mut worst: f64 = 0.0;
        for p in &pts {
            let r = match m {
                ManifoldId::BivariateGaussian => {
                    conformal_invariance_residual::<_, _, _, 5>(&BivariateFisher, &f, &ProbeField, p)?
                }
                _ => conformal_invariance_residual::<_, _, _, 4>(&IndependenceFisher, &f, &ProbeField, p)?,
            };
            worst = worst.max(r);
        }
        Ok(Record::at_most("tractor_invariance", anchor, worst, tol(cfg, cfg.tol.invariance), Kind::Property)
            .with_detail("Upsilon = 0.1 mu1"))
    });
    let x = manifolds::tensor_coords(&pts[0])?;
    let skew = match m {
        ManifoldId::BivariateGaussian => curvature_skew(&TractorConnection::<_, 5>(BivariateFisher), &x),
        _ => curvature_skew(&TractorConnection::<_, 4>(IndependenceFisher), &x),
    };
    Ok(vec![
        inv,
        Record::at_most(
            "tractor_curvature_skew",
            "Omega_ab takes values in so(h)",
            skew,
            tol(cfg, cfg.tol.property),
            Kind::Property,
        ),
    ])
}

fn curvature_skew<C: Connection>(c: &C, x: &[f64]) -> f64 {
    let h = c.gram(x);
    c.curvatures(x).iter().map(|o| skew_defect(o, &h)).fold(0.0, f64::max)
}

fn expected_label(m: ManifoldId) -> (&'static str, usize, &'static str) {
    match m {
        ManifoldId::BivariateGaussian => ("SO^0(1,6)", 21, "Hol(G, [g]) = SO^0(1,6)"),
        _ => ("SO^0(1,4)", 10, "Hol(I, [g]) = SO^0(1,4)"),
    }
}

fn estimate_or_record(
    p: &Point,
    hc: &HolonomyConfig,
    name: &str,
    anchor: &str,
) -> std::result::Result<HolonomyEstimate, Box<Record>> {
    holonomy_algebra_estimate(p, hc).map_err(|e| {
        Box::new(match e {
            Error::AmbiguousRank { gap, singular_values } => Record::failed(
                name,
                anchor,
                format!("ambiguous rank (gap {gap:e}); singular values {singular_values:?}"),
            ),
            other => Record::failed(name, anchor, other.to_string()),
        })
    })
}

fn holonomy_records(cfg: &RunConfig, m: ManifoldId) -> Result<(Vec<Record>, Vec<HolonomySection>)> {
    let p = cfg.base_point(m)?;
    let (want_label, want_dim, anchor) = expected_label(m);
    let mut out = Vec::new();
    let mut sections = Vec::new();
    let est = match estimate_or_record(&p, &cfg.holonomy, "holonomy_dimension", anchor) {
        Ok(e) => e,
        Err(r) => return Ok((vec![*r], sections)),
    };
    sections.push(HolonomySection::new(m.name(), &est));
    out.push(Record::label("holonomy_dimension", anchor, want_dim.to_string(), est.dimension.to_string()));
    out.push(Record::label("holonomy_label", anchor, want_label, est.label.clone()));
    out.push(Record::at_least("holonomy_gap", "rank cut is unambiguous", est.gap, cfg.tol.gap));
    let d = &est.diagnostics;
    out.push(Record::at_most(
        "generator_skew",
        "generators lie in so(h)",
        d.max_skew,
        tol(cfg, cfg.tol.gram),
        Kind::Property,
    ));
    out.push(Record::at_most(
        "transport_preserves_h",
        "tractor transport preserves h",
        d.max_gram_defect,
        tol(cfg, cfg.tol.gram),
        Kind::Property,
    ));
    out.push(Record::at_most(
        "bracket_closure",
        "the estimate is a Lie algebra",
        d.closure_residual,
        tol(cfg, cfg.tol.closure),
        Kind::Property,
    ));

    let subs = &est.invariant_subspaces;
    match m {
        ManifoldId::BivariateGaussian => {
            out.push(Record::label("invariant_subspaces", "no invariant subspace", "0", subs.len().to_string()));
        }
        _ => {
            out.push(Record::label("invariant_subspaces", "exactly one invariant line", "1", subs.len().to_string()));
            if let Some(line) = subs.first() {
                out.push(Record::label(
                    "invariant_line_norm",
                    "the invariant line is positive",
                    "positive",
                    line.norm.name(),
                ));
                let v = DVector::from_column_slice(&line.basis[0]);
                let v = &v / v[0];
                let want = [1.0, 0.0, 0.0, 0.0, 0.0, 1.0 / 12.0];
                let mut w = Worst::new();
                for (k, (a, b)) in want.iter().zip(v.iter()).enumerate() {
                    w.abs(*a, *b, || format!("component {k}"));
                }
                out.push(w.record(
                    "invariant_line",
                    "the parallel tractor (1, 0, 1/12)",
                    tol(cfg, cfg.tol.line),
                    Kind::Oracle,
                ));
                out.push(Record::at_most(
                    "invariant_complement",
                    "the orthogonal complement is invariant",
                    line.complement_defect,
                    tol(cfg, cfg.tol.complement),
                    Kind::Property,
                ));
            }
            out.extend(parallel_tractor_records(cfg, &p, &est));
            out.extend(cone_records(cfg, &p, &est, &mut sections));
        }
    }

    if cfg.stability {
        let mut doubled = cfg.holonomy.clone();
        doubled.loops *= 2;
        let mut fine = cfg.holonomy.clone();
        fine.transport.steps_per_unit *= 2.0;
        for (name, hc) in [("stable_doubled_loops", doubled), ("stable_halved_step", fine)] {
            out.push(match estimate_or_record(&p, &hc, name, "stable under more loops and finer steps") {
                Ok(e) => Record::label(
                    name,
                    "stable under more loops and finer steps",
                    format!("{} {}", est.dimension, est.label),
                    format!("{} {}", e.dimension, e.label),
                ),
                Err(r) => *r,
            });
        }
    }
    Ok((out, sections))
}

fn parallel_tractor_records(cfg: &RunConfig, p: &Point, est: &HolonomyEstimate) -> Vec<Record> {
    let anchor = "scal(g) < 0 iff <V,V> > 0";
    let found = match solve_parallel_tractor(p, est, &cfg.holonomy) {
        Ok(f) => f,
        Err(e) => return vec![Record::failed("parallel_tractor", anchor, e.to_string())],
    };
    let mut out = vec![Record::label("parallel_tractor_count", "one parallel tractor", "1", found.len().to_string())];
    if let Some(v) = found.first() {
        out.push(Record::at_most(
            "parallel_tractor_residual",
            "nabla^T V = 0",
            v.residual,
            tol(cfg, cfg.tol.parallel_residual),
            Kind::Property,
        ));
        out.push(Record::label("parallel_tractor_norm", anchor, NormType::Positive.name(), v.norm.name()));
        out.push(Record::within(
            "parallel_tractor_inner",
            anchor,
            (1.0 / 6.0).into(),
            v.inner.into(),
            (v.inner - 1.0 / 6.0).abs(),
            tol(cfg, cfg.tol.line),
            Kind::Oracle,
        ));
        if let Some(line) = est.invariant_subspaces.first() {
            let a = DVector::from_column_slice(&line.basis[0]);
            let b = v.tractor.to_vector();
            let cos = a.dot(&b) / (a.norm() * b.norm());
            let angle = cos.abs().min(1.0).acos();
            out.push(Record::at_most(
                "parallel_tractor_angle",
                "the parallel tractor spans the invariant line",
                angle,
                tol(cfg, cfg.tol.angle),
                Kind::Property,
            ));
        }
    }
    out
}

fn cone_records(
    cfg: &RunConfig,
    p: &Point,
    est: &HolonomyEstimate,
    sections: &mut Vec<HolonomySection>,
) -> Vec<Record> {
    let anchor = "Hol_x(M,[g]) = Hol_{x,1}(C(M), g_C)";
    let mut out = Vec::new();
    out.push(guarded("cone_signature", "the signature of g_C = (1,5)", || {
        let g = crate::holonomy::cone_metric(p, cfg.cone_t)?.to_matrix();
        let (pos, neg) = linalg::signature(&g)?;
        let (plus, minus) = if neg < pos { (neg, pos) } else { (pos, neg) };
        Ok(Record::side_by_side("cone_signature", "the signature of g_C = (1,5)", "(1,5)", format!("({plus},{minus})"))
            .with_detail("the cone over the 4-dimensional I is 5-dimensional, so (1,5) cannot occur"))
    }));
    out.push(guarded("cone_ricci", "C(I) is Ricci-flat", || {
        let pts = points(cfg, ManifoldId::IndependenceSub, cfg.invariance_points - 1, INVARIANCE_STREAM)?;
        let mut worst: f64 = 0.0;
        for (i, q) in pts.iter().enumerate() {
            let t = 0.5 + 1.5 * i as f64 / pts.len() as f64;
            worst = worst.max(cone_ricci_max(q, t)?);
        }
        Ok(Record::at_most("cone_ricci", "C(I) is Ricci-flat", worst, tol(cfg, cfg.tol.cone_ricci), Kind::Bound))
    }));
    match cone_holonomy_crosscheck(p, cfg.cone_t, &cfg.holonomy) {
        Ok(c) => {
            sections.push(HolonomySection::new("cone", &c));
            out.push(Record::label(
                "cone_holonomy_dimension",
                anchor,
                est.dimension.to_string(),
                c.dimension.to_string(),
            ));
        }
        Err(e) => out.push(Record::failed("cone_holonomy_dimension", anchor, e.to_string())),
    }
    out
}

/// Closed-form tensor reproduction and oracles for the selected manifold.
pub fn cmd_tensors(cfg: &RunConfig) -> Result<VerificationReport> {
    let m = cfg.require_manifold()?;
    let mut r = VerificationReport::new(&format!("tensors {}", m.name()), cfg);
    r.records = tensor_records(cfg, m)?;
    r.errata = errata(m);
    Ok(r.seal())
}

/// Conformal holonomy of the selected manifold; for I also the parallel
/// tractor and the cone cross-check.
pub fn cmd_holonomy(cfg: &RunConfig) -> Result<VerificationReport> {
    let m = cfg.require_manifold()?;
    let mut r = VerificationReport::new(&format!("holonomy {}", m.name()), cfg);
    let (records, sections) = holonomy_records(cfg, m)?;
    r.records = records;
    r.holonomy = sections;
    Ok(r.seal())
}

fn prefixed(m: ManifoldId, records: Vec<Record>) -> impl Iterator<Item = Record> {
    records.into_iter().map(move |mut r| {
        r.name = format!("{}.{}", m.name(), r.name);
        r
    })
}

/// Everything: both tensor suites, the tractor properties and both holonomy
/// suites.
pub fn cmd_verify_all(cfg: &RunConfig) -> Result<VerificationReport> {
    let mut r = VerificationReport::new("verify-all", cfg);
    let both = [ManifoldId::BivariateGaussian, ManifoldId::IndependenceSub];
    for m in both {
        r.records.extend(prefixed(m, tensor_records(cfg, m)?));
        r.errata.extend(errata(m));
    }
    for m in both {
        r.records.extend(prefixed(m, tractor_records(cfg, m)?));
    }
    for m in both {
        let (records, sections) = holonomy_records(cfg, m)?;
        r.records.extend(prefixed(m, records));
        r.holonomy.extend(sections);
    }
    Ok(r.seal())
}
