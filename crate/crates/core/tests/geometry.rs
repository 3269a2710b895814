use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tractor_holo::curvature::{conformal_rescale, geometry, geometry_precise, AffineField, Geometry};
use tractor_holo::manifolds::closed_form as cf;
use tractor_holo::manifolds::fisher::fisher_matrix_mc;
use tractor_holo::manifolds::*;
use tractor_holo::{ManifoldId, Point};

fn arr<const N: usize>(v: &[f64]) -> [f64; N] {
    std::array::from_fn(|i| v[i])
}

fn sample(m: ManifoldId, seed: u64) -> Point {
    DomainBox::default().sample(m, &mut ChaCha8Rng::seed_from_u64(seed))
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(1.0)
}

fn max4<const N: usize>(r: &[[[[f64; N]; N]; N]; N]) -> f64 {
    r.iter().flatten().flatten().flatten().fold(1.0, |m, v| m.max(v.abs()))
}

fn g_geo(p: &Point) -> ([f64; 5], Geometry<f64, 5>) {
    let x = arr::<5>(&tensor_coords(p).unwrap());
    (x, geometry_precise(&BivariateFisher, &x))
}

fn i_geo(p: &Point) -> (cf::IndepSource, Geometry<f64, 4>) {
    let x = arr::<4>(&tensor_coords(p).unwrap());
    (independence_source(p).unwrap(), geometry_precise(&IndependenceFisher, &x))
}

#[test]
fn base_point_riemann_sign() {
    // k_12 = +1/4 in the printed sectional matrix fixes R_1212 = +1/(4 Delta)
    let p = Point::source(ManifoldId::BivariateGaussian, &[0.0, 0.0, 1.0, 1.0, 0.0]).unwrap();
    let (_, geo) = g_geo(&p);
    assert!((geo.riemann[0][1][0][1] - 0.25).abs() < 1e-14);
    assert!((geo.einstein_defect() - 0.6).abs() < 1e-12);
}

#[test]
fn independence_weyl_at_generic_point() {
    // independent symbolic value: C_1234 = (2/3) mu1 mu2 s1 s2
    let p = Point::source(ManifoldId::IndependenceSub, &[0.7, -0.4, 1.3, 0.8]).unwrap();
    let (s, geo) = i_geo(&p);
    let want = 2.0 / 3.0 * s[0] * s[1] * s[2] * s[3];
    assert!((geo.weyl()[0][1][2][3] - want).abs() < 1e-12);
    assert!((cf::independence_weyl_1234_printed(&s) - want).abs() > 1.0);
}

#[test]
fn finite_difference_christoffels_agree() {
    for seed in 0..4 {
        for m in [ManifoldId::BivariateGaussian, ManifoldId::IndependenceSub] {
            let p = sample(m, seed);
            let (closed, fd) = (christoffel(&p).unwrap().second, christoffel_from_metric(&p).unwrap().second);
            for (a, b) in closed.entries.iter().zip(&fd.entries) {
                assert!(close(*a, *b, 1e-6), "{m:?} {a} {b}");
            }
        }
    }
}

#[test]
fn monte_carlo_fisher_within_four_standard_errors() {
    for (m, seed) in [(ManifoldId::BivariateGaussian, 3), (ManifoldId::IndependenceSub, 4)] {
        let p = sample(m, seed);
        let g = metric(&p).unwrap().to_matrix();
        let (mean, se) = fisher_matrix_mc(&p, 20_000, seed).unwrap();
        for a in 0..g.nrows() {
            for b in 0..g.ncols() {
                assert!((mean[a][b] - g[(a, b)]).abs() <= 4.0 * se[a][b], "{m:?} g_{a}{b}");
            }
        }
    }
}

#[test]
fn alpha_zero_is_levi_civita() {
    for seed in 0..4 {
        let p = sample(ManifoldId::BivariateGaussian, seed);
        let th = to_natural(&p).unwrap();
        let geo = geometry(&HessianMetric(BivariatePotential), &arr::<5>(&th.coords));
        let fd = alpha_connection(&th, 0.0).unwrap();
        for a in 0..5 {
            for b in 0..5 {
                for c in 0..5 {
                    let lc: f64 = (0..5).map(|d| geo.g[c][d] * geo.gamma[d][a][b]).sum();
                    assert!(close(lc, fd.get(&[a, b, c]), 1e-4));
                }
            }
        }
    }
}

fn g_point() -> impl Strategy<Value = Point> {
    any::<u64>().prop_map(|s| sample(ManifoldId::BivariateGaussian, s))
}

fn i_point() -> impl Strategy<Value = Point> {
    any::<u64>().prop_map(|s| sample(ManifoldId::IndependenceSub, s))
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::with_cases(64) })]

    #[test]
    fn bivariate_closed_forms_match(p in g_point()) {
        let (x, geo) = g_geo(&p);
        let (gam, r, ric) = (cf::bivariate_christoffel(&x), cf::bivariate_riemann(&x), cf::bivariate_ricci(&x));
        let g = cf::bivariate_metric(&x);
        let scale = max4(&geo.riemann);
        for a in 0..5 {
            for b in 0..5 {
                prop_assert!(close(g[a][b], geo.g[a][b], 1e-12));
                prop_assert!((ric[a][b] - geo.ricci[a][b]).abs() < 1e-11 * scale);
                for c in 0..5 {
                    prop_assert!(close(gam[a][b][c], geo.gamma[a][b][c], 1e-10));
                    for d in 0..5 {
                        prop_assert!((r[a][b][c][d] - geo.riemann[a][b][c][d]).abs() < 1e-11 * scale, "R_{a}{b}{c}{d}");
                    }
                }
            }
        }
        prop_assert!((geo.scal - cf::BIVARIATE_SCAL).abs() < 1e-10);
        prop_assert!((geo.weyl()[0][1][2][3] - cf::bivariate_weyl_1234(&x)).abs() < 1e-8);
    }

    #[test]
    fn independence_is_einstein(p in i_point()) {
        let (s, geo) = i_geo(&p);
        let r = cf::independence_riemann(&s);
        let scale = max4(&geo.riemann);
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    for d in 0..4 {
                        prop_assert!((r[a][b][c][d] - geo.riemann[a][b][c][d]).abs() < 1e-11 * scale);
                    }
                }
            }
        }
        prop_assert!((geo.scal - cf::INDEPENDENCE_SCAL).abs() < 1e-10);
        prop_assert!(geo.einstein_defect() < 1e-9);
    }

    #[test]
    fn riemann_symmetries(p in g_point()) {
        let (_, geo) = g_geo(&p);
        let r = &geo.riemann;
        let t = 1e-12 * max4(r);
        for a in 0..5 {
            for b in 0..5 {
                for c in 0..5 {
                    for d in 0..5 {
                        let v = r[a][b][c][d];
                        prop_assert!((v + r[b][a][c][d]).abs() < t);
                        prop_assert!((v + r[a][b][d][c]).abs() < t);
                        prop_assert!((v - r[c][d][a][b]).abs() < t);
                        prop_assert!((v + r[a][c][d][b] + r[a][d][b][c]).abs() < t);
                    }
                }
            }
        }
    }

    #[test]
    fn constant_rescale_keeps_einstein_defect(p in g_point(), c0 in -1.0f64..1.0) {
        // Ric is scale invariant and scal/n (e^{2c} g) = scal(g)/n g
        let (x, geo) = g_geo(&p);
        let scaled = conformal_rescale(&BivariateFisher, &AffineField { c0, coeffs: [0.0; 5] });
        let d = geometry_precise(&scaled, &x).einstein_defect();
        let scale = geo.ricci.iter().flatten().fold(1.0f64, |m, v| m.max(v.abs()));
        prop_assert!((d - geo.einstein_defect()).abs() < 1e-11 * scale);
    }

    #[test]
    fn natural_round_trip(p in g_point()) {
        let back = from_natural(&to_natural(&p).unwrap()).unwrap();
        for (a, b) in p.coords.iter().zip(&back.coords) {
            prop_assert!(close(*a, *b, 1e-12));
        }
    }
}
