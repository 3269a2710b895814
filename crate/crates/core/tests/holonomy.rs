use std::sync::OnceLock;

use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tractor_holo::holonomy::loops::{rectangle, GaussianRegion};
use tractor_holo::holonomy::*;
use tractor_holo::linalg;
use tractor_holo::manifolds::{BivariateFisher, DomainBox, IndependenceFisher};
use tractor_holo::{ManifoldId, Point};

fn g_base() -> Point {
    Point::source(ManifoldId::BivariateGaussian, &[0.0, 0.0, 1.0, 1.0, 0.0]).unwrap()
}

fn i_base() -> Point {
    Point::source(ManifoldId::IndependenceSub, &[0.0, 0.0, 1.0, 1.0]).unwrap()
}

fn g_estimate() -> &'static HolonomyEstimate {
    static E: OnceLock<HolonomyEstimate> = OnceLock::new();
    E.get_or_init(|| holonomy_algebra_estimate(&g_base(), &HolonomyConfig::default()).unwrap())
}

fn i_estimate() -> &'static HolonomyEstimate {
    static E: OnceLock<HolonomyEstimate> = OnceLock::new();
    E.get_or_init(|| holonomy_algebra_estimate(&i_base(), &HolonomyConfig::default()).unwrap())
}

fn g_region() -> GaussianRegion {
    GaussianRegion { manifold: ManifoldId::BivariateGaussian, bounds: DomainBox::default() }
}

const G_X: [f64; 5] = [0.0, 0.0, 1.0, 0.0, 1.0];

#[test]
fn bivariate_holonomy_is_full() {
    let e = g_estimate();
    assert_eq!(e.dimension, 21);
    assert_eq!(e.label, "SO^0(1,6)");
    assert!(e.invariant_subspaces.is_empty());
    assert!(e.gap > 1e3, "gap {}", e.gap);
    assert!(e.diagnostics.max_skew < 1e-7);
    assert!(e.diagnostics.closure_residual < 1e-6);
    assert!(e.diagnostics.max_gram_defect < 1e-7);
    assert_eq!(e.diagnostics.dimension_loops, 21);
}

#[test]
fn independence_holonomy_fixes_one_line() {
    let e = i_estimate();
    assert_eq!(e.dimension, 10);
    assert_eq!(e.label, "SO^0(1,4)");
    assert_eq!(e.invariant_subspaces.len(), 1);
    let line = &e.invariant_subspaces[0];
    assert_eq!(line.norm, NormType::Positive);
    let want = [1.0, 0.0, 0.0, 0.0, 0.0, 1.0 / 12.0];
    for (a, b) in line.basis[0].iter().zip(want) {
        assert!((a - b).abs() < 1e-6);
    }
    assert!(line.complement_defect < 1e-7);
    assert!(e.gap > 1e3);
}

#[test]
fn parallel_tractors() {
    let cfg = HolonomyConfig::default();
    assert!(solve_parallel_tractor(&g_base(), g_estimate(), &cfg).unwrap().is_empty());
    let found = solve_parallel_tractor(&i_base(), i_estimate(), &cfg).unwrap();
    assert_eq!(found.len(), 1);
    let v = &found[0];
    assert!(v.residual < 1e-6);
    assert!(v.inner > 0.0 && (v.inner - 1.0 / 6.0).abs() < 1e-6);
    // agrees with the invariant line up to scale
    let a = nalgebra::DVector::from_column_slice(&i_estimate().invariant_subspaces[0].basis[0]);
    let b = v.tractor.to_vector();
    let cos = a.dot(&b) / (a.norm() * b.norm());
    assert!(cos.abs().min(1.0).acos() < 1e-5);
}

#[test]
fn classification_table() {
    assert_eq!(classify(21, &[], 5), "SO^0(1,6)");
    assert_eq!(classify(3, &[], 5), "unclassified");
    let line = InvariantSubspace {
        basis: vec![vec![1.0, 0.0, 0.0, 0.0, 0.0, 1.0 / 12.0]],
        norm: NormType::Positive,
        inner: 1.0 / 6.0,
        kernel_residual: 0.0,
        complement_defect: 0.0,
    };
    assert_eq!(classify(10, std::slice::from_ref(&line), 4), "SO^0(1,4)");
    let null = InvariantSubspace { norm: NormType::Null, ..line };
    assert_eq!(classify(10, &[null], 4), "unclassified");
}

#[test]
fn rectangle_family_size_and_determinism() {
    let c = TractorConnection::<_, 5>(BivariateFisher);
    let a = loop_family(&c, &G_X, &g_region(), LoopScheme::CoordRectangle, 1, 7).unwrap();
    assert_eq!(a.len(), 30);
    let b = loop_family(&c, &G_X, &g_region(), LoopScheme::Mixed, 8, 7).unwrap();
    let b2 = loop_family(&c, &G_X, &g_region(), LoopScheme::Mixed, 8, 7).unwrap();
    assert_eq!(b, b2);
    for l in &b {
        assert!(l.is_valid(&g_region()), "{:?}", l.kind);
    }
}

#[test]
fn zero_loop_and_reversal() {
    let c = TractorConnection::<_, 5>(BivariateFisher);
    let cfg = TransportConfig::default();
    let still = Path::polyline(&[G_X.to_vec(), G_X.to_vec()]);
    let m = parallel_transport(&c, &still, &cfg).unwrap().matrix;
    assert!((m - DMatrix::<f64>::identity(7, 7)).amax() < 1e-15);

    let there = Path::polyline(&[G_X.to_vec(), vec![0.3, -0.2, 1.4, 0.2, 0.8], vec![0.1, 0.1, 1.1, -0.1, 1.3]]);
    let m = parallel_transport(&c, &there.then(&there.reversed()), &cfg).unwrap().matrix;
    assert!((m - DMatrix::<f64>::identity(7, 7)).amax() < 1e-8);
}

#[test]
fn transport_preserves_tractor_metric() {
    let c = TractorConnection::<_, 5>(BivariateFisher);
    let cfg = TransportConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let region = g_region();
    for _ in 0..5 {
        let q = region.sample(&mut rng);
        let path = Path::polyline(&[G_X.to_vec(), q.clone()]);
        if !path.samples(64).iter().all(|x| region.contains(x)) {
            continue;
        }
        let m = parallel_transport(&c, &path, &cfg).unwrap().matrix;
        let defect = (m.transpose() * c.gram(&q) * &m - c.gram(&G_X)).amax();
        assert!(defect < 1e-7 * path.length().max(1.0), "{defect}");
    }
}

#[test]
fn small_loop_expansion() {
    let x = [0.3, -0.2, 1.2, 0.1, 0.9];
    let c = TractorConnection::<_, 5>(BivariateFisher);
    let omega = &c.curvatures(&x)[1]; // plane (0, 2)
    let cfg = TransportConfig::default();
    let at = |eps: f64| {
        let lp = rectangle(&x, 0, 2, eps, &g_region()).unwrap();
        matrix_log(&parallel_transport(&c, &lp.path, &cfg).unwrap().matrix).unwrap()
    };
    let (l1, l2) = (at(0.02), at(0.01));
    // leading order is quadratic in the side length
    let slope = (l1.amax() / l2.amax()).log2();
    assert!((slope - 2.0).abs() < 0.05, "slope {slope}");
    let (r1, r2) = ((&l1 + omega * 4e-4).amax(), (&l2 + omega * 1e-4).amax());
    assert!((r1 / r2).log2() > 2.5);
    // Richardson-combined estimate of Omega
    let rich = (&l2 * 2.0 / 1e-4 - &l1 / 4e-4) * -1.0;
    let plain = (&l2 / -1e-4 - omega).amax();
    assert!((rich - omega).amax() < plain / 4.0);
}

#[test]
fn independence_transport_fixes_einstein_tractor() {
    let c = TractorConnection::<_, 4>(IndependenceFisher);
    let x = [0.0, 0.0, -0.5, -0.5];
    let region = GaussianRegion { manifold: ManifoldId::IndependenceSub, bounds: DomainBox::default() };
    let lp = loops::random_polyline(&x, &region, 5).unwrap();
    let m = parallel_transport(&c, &lp.path, &TransportConfig::default()).unwrap().matrix;
    let v = nalgebra::DVector::from_column_slice(&[1.0, 0.0, 0.0, 0.0, 0.0, 1.0 / 12.0]);
    assert!((&m * &v - &v).amax() < 1e-9);
}

#[test]
fn cone_geometry() {
    let p = i_base();
    let g1 = cone_metric(&p, 1.0).unwrap().to_matrix();
    assert_eq!(linalg::signature(&g1).unwrap(), (1, 4));
    let g2 = cone_metric(&p, 2.0).unwrap().to_matrix();
    let block = |g: &DMatrix<f64>| g.view((0, 0), (4, 4)).into_owned();
    assert!((block(&g2) - block(&g1) * 4.0).amax() < 1e-14);
    assert!(cone_metric(&p, 0.0).is_err());

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let bounds = DomainBox::default();
    for i in 0..10 {
        let q = bounds.sample(ManifoldId::IndependenceSub, &mut rng);
        let t = 0.5 + 0.15 * i as f64;
        assert!(cone_ricci_max(&q, t).unwrap() < 1e-4);
    }
}

#[test]
fn cone_holonomy_matches_conformal() {
    let e = cone_holonomy_crosscheck(&i_base(), 1.0, &HolonomyConfig::default()).unwrap();
    assert_eq!(e.dimension, i_estimate().dimension);
    assert!(e.diagnostics.max_skew < 1e-6);
    assert!(e.invariant_subspaces.is_empty());

    let conn = LeviCivitaConnection::<_, 5>(ConeMetric::default());
    let x = vec![0.0, 0.0, -0.5, -0.5, 1.0];
    let m = parallel_transport(&conn, &Path::polyline(&[x.clone(), x]), &TransportConfig::default()).unwrap();
    assert!((m.matrix - DMatrix::<f64>::identity(5, 5)).amax() < 1e-15);
}

#[test]
fn alternate_base_point() {
    let p = Point::source(ManifoldId::BivariateGaussian, &[0.5, -0.4, 1.3, 0.8, 0.3]).unwrap();
    let e = holonomy_algebra_estimate(&p, &HolonomyConfig::default()).unwrap();
    assert_eq!((e.dimension, e.label.as_str()), (21, "SO^0(1,6)"));
    let q = Point::source(ManifoldId::IndependenceSub, &[0.5, -0.4, 1.3, 0.8]).unwrap();
    let e = holonomy_algebra_estimate(&q, &HolonomyConfig::default()).unwrap();
    assert_eq!((e.dimension, e.label.as_str()), (10, "SO^0(1,4)"));
}

#[test]
fn univariate_is_rejected() {
    let p = Point::source(ManifoldId::UnivariateGaussian, &[0.0, 1.0]).unwrap();
    assert!(holonomy_algebra_estimate(&p, &HolonomyConfig::default()).is_err());
}

fn skew_in(h: &DMatrix<f64>, raw: &DMatrix<f64>) -> DMatrix<f64> {
    // A = raw - H^{-1} raw^T H is skew for H
    raw - h.clone().try_inverse().unwrap() * raw.transpose() * h
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::with_cases(48) })]

    #[test]
    fn log_exp_round_trip(entries in prop::collection::vec(-0.3f64..0.3, 49)) {
        let h = TractorConnection::<_, 5>(BivariateFisher).gram(&G_X);
        let a = skew_in(&h, &DMatrix::from_vec(7, 7, entries));
        let back = matrix_log(&matrix_exp(&a)).unwrap();
        prop_assert!((back - &a).amax() < 1e-9);
    }

    #[test]
    fn exp_of_log(entries in prop::collection::vec(-0.5f64..0.5, 16)) {
        let m = DMatrix::<f64>::identity(4, 4) + DMatrix::from_vec(4, 4, entries) * 0.5;
        if let Ok(l) = matrix_log(&m) {
            prop_assert!((matrix_exp(&l) - &m).amax() < 1e-9);
        }
    }
}
