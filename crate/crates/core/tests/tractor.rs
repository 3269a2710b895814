use tractor_holo::curvature::{AffineField, MeanField, ScalarField};
use tractor_holo::jet::Scalar;
use tractor_holo::manifolds::{BivariateFisher, IndependenceFisher, MetricModel};
use tractor_holo::tractor::*;
use tractor_holo::{ManifoldId, Point};

/// A non-affine factor, so second derivatives of Upsilon enter.
#[derive(Clone, Copy)]
struct Quadratic;

impl ScalarField<5> for Quadratic {
    fn eval<T: Scalar>(&self, x: &[T; 5]) -> T {
        x[0] * 0.1 + x[2] * x[2] * 0.05 - x[0] * x[4] * 0.03
    }
}

struct Poly;

impl TractorField<5> for Poly {
    fn eval<T: Scalar>(&self, x: &[T; 5]) -> (T, [T; 5], T) {
        let s = x[0] * x[1] + x[2] * 0.3 + 1.0;
        let xv = [x[1] * x[1], x[3] - x[0], x[4] * x[2] * 0.5, T::cst(0.2), x[0] * 0.7];
        (s, xv, x[2] * x[4] - x[3] * 0.1)
    }
}

fn check<U: ScalarField<5> + Clone + Send + Sync>(u: U, p: &Point) {
    let f = ConformalFactor::new(u, "test");
    let conv = ConvertedField { field: &Poly, model: &BivariateFisher, factor: &f };
    for b in 0..5 {
        let d = tractor_derivative(&BivariateFisher, &Poly, p, b).unwrap();
        let lhs = tractor_conformal_change(&d, &f).unwrap();
        let rhs = tractor_derivative_rescaled(&BivariateFisher, &f, &conv, p, b).unwrap();
        let err = (lhs.to_vector() - rhs.to_vector()).amax();
        assert!(err < 1e-11, "direction {b}: {err}");
        assert_eq!(lhs.scale, rhs.scale);
    }
}

#[test]
fn connection_is_conformally_invariant() {
    let p = Point::source(ManifoldId::BivariateGaussian, &[0.4, -0.3, 1.2, 0.9, 0.25]).unwrap();
    check(MeanField { index: 0, factor: 0.1 }, &p);
    check(Quadratic, &p);
}

#[test]
fn constant_factor_leaves_components() {
    let p = Point::source(ManifoldId::BivariateGaussian, &[0.0, 0.0, 1.0, 1.0, 0.0]).unwrap();
    let v = Tractor::new(1.0, vec![0.1, 0.2, 0.3, 0.4, 0.5], -0.2, p).unwrap();
    let f = ConformalFactor::new(AffineField { c0: 0.7, coeffs: [0.0; 5] }, "const");
    let w = tractor_conformal_change(&v, &f).unwrap();
    assert!((w.to_vector() - v.to_vector()).amax() < 1e-15);
    let back = tractor_conformal_change(&w, &f.inverse()).unwrap();
    assert_eq!(back.scale, Scale::FisherRao);
}

#[test]
fn conformal_change_preserves_inner_product() {
    let p = Point::source(ManifoldId::BivariateGaussian, &[0.3, 0.1, 1.4, 0.7, -0.2]).unwrap();
    let v = Tractor::new(0.8, vec![0.1, -0.2, 0.3, 0.4, 0.5], -0.2, p.clone()).unwrap();
    let w = Tractor::new(-0.3, vec![1.0, 0.0, 0.2, -0.4, 0.1], 0.6, p).unwrap();
    let f = ConformalFactor::new(Quadratic, "q");
    let (vh, wh) = (tractor_conformal_change(&v, &f).unwrap(), tractor_conformal_change(&w, &f).unwrap());
    let before = tractor_inner(&v, &w).unwrap();
    let after = tractor_inner(&vh, &wh).unwrap();
    assert!((before - after).abs() < 1e-13);
    let back = tractor_conformal_change(&vh, &f.inverse()).unwrap();
    assert!((back.to_vector() - v.to_vector()).amax() < 1e-13);
    assert!(tractor_inner(&v, &vh).is_err());
}

#[test]
fn curvature_preserves_tractor_metric() {
    let p = Point::source(ManifoldId::BivariateGaussian, &[0.2, -0.5, 1.3, 0.6, 0.3]).unwrap();
    let x = [0.2, -0.5, 1.3, 0.3, 0.6];
    let h = tractor_gram(&tractor_holo::linalg::to_dmatrix(&BivariateFisher.metric(&x)));
    for a in 0..5 {
        for b in 0..5 {
            if a != b {
                let o = tractor_curvature(&p, a, b).unwrap();
                assert!(skew_defect(&o, &h) < 1e-12);
            }
        }
    }
}

#[test]
fn independence_curvature_kills_einstein_tractor() {
    let th = [0.3, -0.8, -0.4, -0.6];
    let i = tractor_holo::manifolds::point_from_tensor(ManifoldId::IndependenceSub, &th).unwrap();
    let v = Tractor::new(1.0, vec![0.0; 4], 1.0 / 12.0, i).unwrap().to_vector();
    for om in tractor_curvatures_at(&IndependenceFisher, &th) {
        assert!((om * &v).amax() < 1e-12);
    }
}

#[test]
fn univariate_has_no_tractor_connection() {
    let p = Point::source(ManifoldId::UnivariateGaussian, &[0.0, 1.0]).unwrap();
    assert!(tractor_curvature(&p, 0, 1).is_err());
}

struct Other;

impl TractorField<5> for Other {
    fn eval<T: Scalar>(&self, x: &[T; 5]) -> (T, [T; 5], T) {
        let xv = [x[2] * 0.4, x[0] - x[4], T::cst(1.0), x[3] * x[3], x[1] * 0.2 + 0.1];
        (x[4] * 0.5 - 0.2, xv, x[0] * x[2] + 0.3)
    }
}

fn field_at<F: TractorField<5>>(f: &F, x: &[f64]) -> Tractor {
    let xa = [x[0], x[1], x[2], x[3], x[4]];
    let (s, xv, y) = f.eval(&xa);
    let p = tractor_holo::manifolds::point_from_tensor(ManifoldId::BivariateGaussian, x).unwrap();
    Tractor::new(s, xv.to_vec(), y, p).unwrap()
}

#[test]
fn connection_is_metric_compatible() {
    use tractor_holo::numdiff::richardson_difference;
    let x = [0.2, -0.3, 1.3, 0.2, 0.8];
    let p = tractor_holo::manifolds::point_from_tensor(ManifoldId::BivariateGaussian, &x).unwrap();
    let inner = |y: &[f64]| tractor_inner(&field_at(&Poly, y), &field_at(&Other, y)).unwrap();
    let dom = |y: &[f64]| BivariateFisher.in_domain(&[y[0], y[1], y[2], y[3], y[4]]);
    for b in 0..5 {
        let fd = richardson_difference(inner, dom, &x, b, 1e-3).unwrap();
        let dv = tractor_derivative(&BivariateFisher, &Poly, &p, b).unwrap();
        let dw = tractor_derivative(&BivariateFisher, &Other, &p, b).unwrap();
        let want =
            tractor_inner(&dv, &field_at(&Other, &x)).unwrap() + tractor_inner(&field_at(&Poly, &x), &dw).unwrap();
        assert!((fd - want).abs() < 1e-6, "direction {b}: {fd} vs {want}");
    }
}

#[test]
fn primary_slot_is_d_sigma_minus_x_lowered() {
    let x = [0.2, -0.3, 1.3, 0.2, 0.8];
    let p = tractor_holo::manifolds::point_from_tensor(ManifoldId::BivariateGaussian, &x).unwrap();
    let g = BivariateFisher.metric(&x);
    let (_, xv, _) = Poly.eval(&x);
    // d sigma = (x1, x0, 0.3, 0, 0)
    let dsigma = [x[1], x[0], 0.3, 0.0, 0.0];
    for b in 0..5 {
        let lowered: f64 = (0..5).map(|c| g[b][c] * xv[c]).sum();
        let d = tractor_derivative(&BivariateFisher, &Poly, &p, b).unwrap();
        assert!((d.sigma - (dsigma[b] - lowered)).abs() < 1e-14);
    }
}

#[test]
fn coordinate_frames_have_lorentzian_signature() {
    let g = Point::source(ManifoldId::BivariateGaussian, &[0.4, 0.1, 2.0, 0.7, -0.5]).unwrap();
    assert_eq!(TractorFrame::coordinate(&g).unwrap().signature().unwrap(), (1, 6));
    let i = Point::source(ManifoldId::IndependenceSub, &[0.4, 0.1, 2.0, 0.7]).unwrap();
    assert_eq!(TractorFrame::coordinate(&i).unwrap().signature().unwrap(), (1, 5));
}
