//! Component tables of the Fisher-Rao geometry, transcribed as printed,
//! together with the errata needed to make them consistent.
//!
//! G tables use the index order (mu1, mu2, sigma1, sigma12, sigma2) and take
//! tensor-chart coordinates in that order. I tables live in the natural chart
//! but are written in terms of (mu1, mu2, sigma1, sigma2).
//!
//! The printed Riemann blocks and sectional/Ricci matrices carry a leading
//! minus sign. For Ricci and sectional curvature that sign is part of the
//! value. For the Riemann blocks it is not: the bracket contents are R_abcd in
//! the convention R^a_bcd = d_c Gamma^a_db - ..., the same convention that
//! reproduces the printed Ricci tensor and scal = -9/2.

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Erratum {
    pub table: &'static str,
    pub component: &'static str,
    pub printed: &'static str,
    pub corrected: &'static str,
    pub reason: &'static str,
}

pub const BIVARIATE_ERRATA: &[Erratum] = &[
    Erratum {
        table: "Gamma^c_ab (G)",
        component: "Gamma^1_42",
        printed: "s1/(2 Delta)",
        corrected: "-s1/(2 Delta)",
        reason: "must equal Gamma^1_24",
    },
    Erratum {
        table: "Gamma^c_ab (G)",
        component: "Gamma^2_52",
        printed: "s1/(2 Delta)",
        corrected: "-s1/(2 Delta)",
        reason: "must equal Gamma^2_25",
    },
    Erratum {
        table: "Gamma^c_ab (G)",
        component: "Gamma^5_44, Gamma^5_45, Gamma^5_54, Gamma^5_55",
        printed: "(-s2, s12, s12, -s1)/(2 Delta)",
        corrected: "(-s2, s12, s12, -s1)/Delta",
        reason: "mirror image of the Gamma^3 block under 1<->2",
    },
    Erratum {
        table: "R_abcd (G)",
        component: "R_1331",
        printed: "s2^2/(4 Delta^3)",
        corrected: "s2^3/(4 Delta^3)",
        reason: "must equal -R_1313",
    },
    Erratum {
        table: "R_abcd (G)",
        component: "R_1423, R_1432",
        printed: "-+ s2 s12/(2 Delta^3)",
        corrected: "-+ s2 s12^2/(2 Delta^3)",
        reason: "must equal R_2314 = -R_2341",
    },
    Erratum {
        table: "R_abcd (G)",
        component: "R_1513, R_1531",
        printed: "-+ s2^2 s12^2/(4 Delta^3)",
        corrected: "-+ s2 s12^2/(4 Delta^3)",
        reason: "must equal R_1315 (pair exchange)",
    },
    Erratum {
        table: "R_abcd (G)",
        component: "R_3412, R_3421",
        printed: "+- s2/(4 Delta^2)",
        corrected: "-+ s2/(4 Delta^2)",
        reason: "must equal R_1234 (pair exchange)",
    },
    Erratum {
        table: "R_abcd (G)",
        component: "all blocks",
        printed: "-[block]",
        corrected: "[block]",
        reason: "global sign convention; bracket contents reproduce Ric, scal and k",
    },
];

pub const INDEPENDENCE_ERRATA: &[Erratum] = &[
    Erratum {
        table: "phi (I)",
        component: "quadratic term",
        printed: "+ Delta (t2^2 t3 + t1^2 t4)",
        corrected: "- Delta (t2^2 t3 + t1^2 t4)",
        reason: "d phi/d theta1 must equal E[x] = mu1",
    },
    Erratum {
        table: "Gamma_ab,c (I)",
        component: "Gamma_33,3",
        printed: "4 s1^2 (3 mu2^2 + s1)",
        corrected: "4 s1^2 (3 mu1^2 + s1)",
        reason: "the first factor of I depends on (mu1, s1) only",
    },
    Erratum {
        table: "Gamma^c_ab (I)",
        component: "Gamma^2_42",
        printed: "s2 + 2 mu2^2",
        corrected: "s2 - 2 mu2^2",
        reason: "mirror image of Gamma^1_31 = s1 - 2 mu1^2",
    },
];

fn g_vars(x: &[f64; 5]) -> (f64, f64, f64, f64) {
    let (s1, s12, s2) = (x[2], x[3], x[4]);
    (s1, s12, s2, s1 * s2 - s12 * s12)
}

pub type Table3 = [[[f64; 5]; 5]; 5];
pub type Table4 = [[[[f64; 5]; 5]; 5]; 5];

pub fn bivariate_metric(x: &[f64; 5]) -> [[f64; 5]; 5] {
    let (s1, s12, s2, d) = g_vars(x);
    let d2 = d * d;
    [
        [s2 / d, -s12 / d, 0.0, 0.0, 0.0],
        [-s12 / d, s1 / d, 0.0, 0.0, 0.0],
        [0.0, 0.0, s2 * s2 / (2.0 * d2), -s12 * s2 / d2, s12 * s12 / (2.0 * d2)],
        [0.0, 0.0, -s12 * s2 / d2, (s1 * s2 + s12 * s12) / d2, -s1 * s12 / d2],
        [0.0, 0.0, s12 * s12 / (2.0 * d2), -s1 * s12 / d2, s1 * s1 / (2.0 * d2)],
    ]
}

/// Gamma^c_ab of G as printed, indexed `[c][a][b]`.
pub fn bivariate_christoffel_printed(x: &[f64; 5]) -> Table3 {
    let (s1, s12, s2, d) = g_vars(x);
    let mut t = [[[0.0; 5]; 5]; 5];
    t[0][0][2] = -1.0 / 2.0 * s2 / d;
    t[0][0][3] = (1.0 / 2.0) * s12 / d;
    t[0][1][2] = (1.0 / 2.0) * s12 / d;
    t[0][1][3] = -1.0 / 2.0 * s1 / d;
    t[0][2][0] = -1.0 / 2.0 * s2 / d;
    t[0][2][1] = (1.0 / 2.0) * s12 / d;
    t[0][3][0] = (1.0 / 2.0) * s12 / d;
    t[0][3][1] = (1.0 / 2.0) * s1 / d;
    t[1][0][3] = -1.0 / 2.0 * s2 / d;
    t[1][0][4] = (1.0 / 2.0) * s12 / d;
    t[1][1][3] = (1.0 / 2.0) * s12 / d;
    t[1][1][4] = -1.0 / 2.0 * s1 / d;
    t[1][3][0] = -1.0 / 2.0 * s2 / d;
    t[1][3][1] = (1.0 / 2.0) * s12 / d;
    t[1][4][0] = (1.0 / 2.0) * s12 / d;
    t[1][4][1] = (1.0 / 2.0) * s1 / d;
    t[2][0][0] = 1.0;
    t[2][2][2] = -s2 / d;
    t[2][2][3] = s12 / d;
    t[2][3][2] = s12 / d;
    t[2][3][3] = -s1 / d;
    t[3][0][1] = 1.0 / 2.0;
    t[3][1][0] = 1.0 / 2.0;
    t[3][2][3] = -1.0 / 2.0 * s2 / d;
    t[3][2][4] = (1.0 / 2.0) * s12 / d;
    t[3][3][2] = -1.0 / 2.0 * s2 / d;
    t[3][3][3] = s12 / d;
    t[3][3][4] = -1.0 / 2.0 * s1 / d;
    t[3][4][2] = (1.0 / 2.0) * s12 / d;
    t[3][4][3] = -1.0 / 2.0 * s1 / d;
    t[4][1][1] = 1.0;
    t[4][3][3] = -1.0 / 2.0 * s2 / d;
    t[4][3][4] = (1.0 / 2.0) * s12 / d;
    t[4][4][3] = (1.0 / 2.0) * s12 / d;
    t[4][4][4] = -1.0 / 2.0 * s1 / d;
    t
}

/// Gamma^c_ab of G with the errata applied.
pub fn bivariate_christoffel(x: &[f64; 5]) -> Table3 {
    let (s1, s12, s2, d) = g_vars(x);
    let mut t = bivariate_christoffel_printed(x);
    t[0][3][1] = -s1 / (2.0 * d);
    t[1][4][1] = -s1 / (2.0 * d);
    t[4][3][3] = -s2 / d;
    t[4][3][4] = s12 / d;
    t[4][4][3] = s12 / d;
    t[4][4][4] = -s1 / d;
    t
}

/// Bracket contents of the printed Riemann blocks, `r[a][b][c][d]` for a < b.
pub fn bivariate_riemann_blocks_printed(x: &[f64; 5]) -> Table4 {
    let (s1, s12, s2, d) = g_vars(x);
    let mut r = [[[[0.0; 5]; 5]; 5]; 5];
    // block 12
    r[0][1][0][1] = (1.0 / 4.0) / d;
    r[0][1][1][0] = -(1.0 / 4.0) / d;
    r[0][1][2][3] = -1.0 / 4.0 * s2 / d.powi(2);
    r[0][1][2][4] = (1.0 / 4.0) * s12 / d.powi(2);
    r[0][1][3][2] = (1.0 / 4.0) * s2 / d.powi(2);
    r[0][1][3][4] = -1.0 / 4.0 * s1 / d.powi(2);
    r[0][1][4][2] = -1.0 / 4.0 * s12 / d.powi(2);
    r[0][1][4][3] = (1.0 / 4.0) * s1 / d.powi(2);
    // block 13
    r[0][2][0][2] = -1.0 / 4.0 * s2.powi(3) / d.powi(3);
    r[0][2][0][3] = (1.0 / 2.0) * s12 * s2.powi(2) / d.powi(3);
    r[0][2][0][4] = -1.0 / 4.0 * s12.powi(2) * s2 / d.powi(3);
    r[0][2][1][2] = (1.0 / 4.0) * s12 * s2.powi(2) / d.powi(3);
    r[0][2][1][3] = -1.0 / 4.0 * s2 * (s1 * s2 + s12.powi(2)) / d.powi(3);
    r[0][2][1][4] = (1.0 / 4.0) * s1 * s12 * s2 / d.powi(3);
    r[0][2][2][0] = (1.0 / 4.0) * s2.powi(2) / d.powi(3);
    r[0][2][2][1] = -1.0 / 4.0 * s12 * s2.powi(2) / d.powi(3);
    r[0][2][3][0] = -1.0 / 2.0 * s12 * s2.powi(2) / d.powi(3);
    r[0][2][3][1] = (1.0 / 4.0) * s2 * (s1 * s2 + s12.powi(2)) / d.powi(3);
    r[0][2][4][0] = (1.0 / 4.0) * s12.powi(2) * s2 / d.powi(3);
    r[0][2][4][1] = -1.0 / 4.0 * s1 * s12 * s2 / d.powi(3);
    // block 14
    r[0][3][0][2] = (1.0 / 2.0) * s12 * s2.powi(2) / d.powi(3);
    r[0][3][0][3] = -1.0 / 4.0 * s2 * (s1 * s2 + 3.0 * s12.powi(2)) / d.powi(3);
    r[0][3][0][4] = (1.0 / 4.0) * s12 * (s1 * s2 + s12.powi(2)) / d.powi(3);
    r[0][3][1][2] = -1.0 / 2.0 * s12 * s2 / d.powi(3);
    r[0][3][1][3] = (1.0 / 4.0) * s12 * (3.0 * s1 * s2 + s12.powi(2)) / d.powi(3);
    r[0][3][1][4] = -1.0 / 4.0 * s1 * (s1 * s2 + s12.powi(2)) / d.powi(3);
    r[0][3][2][0] = -1.0 / 2.0 * s12 * s2.powi(2) / d.powi(3);
    r[0][3][2][1] = (1.0 / 2.0) * s12 * s2 / d.powi(3);
    r[0][3][3][0] = (1.0 / 4.0) * s2 * (s1 * s2 + 3.0 * s12.powi(2)) / d.powi(3);
    r[0][3][3][1] = -1.0 / 4.0 * s12 * (3.0 * s1 * s2 + s12.powi(2)) / d.powi(3);
    r[0][3][4][0] = -1.0 / 4.0 * s12 * (s1 * s2 + s12.powi(2)) / d.powi(3);
    r[0][3][4][1] = (1.0 / 4.0) * s1 * (s1 * s2 + s12.powi(2)) / d.powi(3);
    // block 15
    r[0][4][0][2] = -1.0 / 4.0 * s12.powi(2) * s2.powi(2) / d.powi(3);
    r[0][4][0][3] = (1.0 / 4.0) * s12 * (s1 * s2 + s12.powi(2)) / d.powi(3);
    r[0][4][0][4] = -1.0 / 4.0 * s1 * s12.powi(2) / d.powi(3);
    r[0][4][1][2] = (1.0 / 4.0) * s12.powi(3) / d.powi(3);
    r[0][4][1][3] = -1.0 / 2.0 * s1 * s12.powi(2) / d.powi(3);
    r[0][4][1][4] = (1.0 / 4.0) * s1.powi(2) * s12 / d.powi(3);
    r[0][4][2][0] = (1.0 / 4.0) * s12.powi(2) * s2.powi(2) / d.powi(3);
    r[0][4][2][1] = -1.0 / 4.0 * s12.powi(3) / d.powi(3);
    r[0][4][3][0] = -1.0 / 4.0 * s12 * (s1 * s2 + s12.powi(2)) / d.powi(3);
    r[0][4][3][1] = (1.0 / 2.0) * s1 * s12.powi(2) / d.powi(3);
    r[0][4][4][0] = (1.0 / 4.0) * s1 * s12.powi(2) / d.powi(3);
    r[0][4][4][1] = -1.0 / 4.0 * s1.powi(2) * s12 / d.powi(3);
    // block 23
    r[1][2][0][2] = (1.0 / 4.0) * s12 * s2.powi(2) / d.powi(3);
    r[1][2][0][3] = -1.0 / 2.0 * s12.powi(2) * s2 / d.powi(3);
    r[1][2][0][4] = (1.0 / 4.0) * s12.powi(3) / d.powi(3);
    r[1][2][1][2] = -1.0 / 4.0 * s12.powi(2) * s2 / d.powi(3);
    r[1][2][1][3] = (1.0 / 4.0) * s12 * (s1 * s2 + s12.powi(2)) / d.powi(3);
    r[1][2][1][4] = -1.0 / 4.0 * s1 * s12.powi(2) / d.powi(3);
    r[1][2][2][0] = -1.0 / 4.0 * s12 * s2.powi(2) / d.powi(3);
    r[1][2][2][1] = (1.0 / 4.0) * s12.powi(2) * s2 / d.powi(3);
    r[1][2][3][0] = (1.0 / 2.0) * s12.powi(2) * s2 / d.powi(3);
    r[1][2][3][1] = -1.0 / 4.0 * s12 * (s1 * s2 + s12.powi(2)) / d.powi(3);
    r[1][2][4][0] = -1.0 / 4.0 * s12.powi(3) / d.powi(3);
    r[1][2][4][1] = (1.0 / 4.0) * s1 * s12.powi(2) / d.powi(3);
    // block 24
    r[1][3][0][2] = -1.0 / 4.0 * s2 * (s1 * s2 + s12.powi(2)) / d.powi(3);
    r[1][3][0][3] = (1.0 / 4.0) * s12 * (3.0 * s1 * s2 + s12.powi(2)) / d.powi(3);
    r[1][3][0][4] = -1.0 / 2.0 * s1 * s12.powi(2) / d.powi(3);
    r[1][3][1][2] = (1.0 / 4.0) * s12 * (s1 * s2 + s12.powi(2)) / d.powi(3);
    r[1][3][1][3] = -1.0 / 4.0 * s1 * (s1 * s2 + 3.0 * s12.powi(2)) / d.powi(3);
    r[1][3][1][4] = (1.0 / 2.0) * s1.powi(2) * s12 / d.powi(3);
    r[1][3][2][0] = (1.0 / 4.0) * s2 * (s1 * s2 + s12.powi(2)) / d.powi(3);
    r[1][3][2][1] = -1.0 / 4.0 * s12 * (s1 * s2 + s12.powi(2)) / d.powi(3);
    r[1][3][3][0] = -1.0 / 4.0 * s12 * (3.0 * s1 * s2 + s12.powi(2)) / d.powi(3);
    r[1][3][3][1] = (1.0 / 4.0) * s1 * (s1 * s2 + 3.0 * s12.powi(2)) / d.powi(3);
    r[1][3][4][0] = (1.0 / 2.0) * s1 * s12.powi(2) / d.powi(3);
    r[1][3][4][1] = -1.0 / 2.0 * s1.powi(2) * s12 / d.powi(3);
    // block 25
    r[1][4][0][2] = (1.0 / 4.0) * s1 * s12 * s2 / d.powi(3);
    r[1][4][0][3] = -1.0 / 4.0 * s1 * (s1 * s2 + s12.powi(2)) / d.powi(3);
    r[1][4][0][4] = (1.0 / 4.0) * s1.powi(2) * s12 / d.powi(3);
    r[1][4][1][2] = -1.0 / 4.0 * s1 * s12.powi(2) / d.powi(3);
    r[1][4][1][3] = (1.0 / 2.0) * s1.powi(2) * s12 / d.powi(3);
    r[1][4][1][4] = -1.0 / 4.0 * s1.powi(3) / d.powi(3);
    r[1][4][2][0] = -1.0 / 4.0 * s1 * s12 * s2 / d.powi(3);
    r[1][4][2][1] = (1.0 / 4.0) * s1 * s12.powi(2) / d.powi(3);
    r[1][4][3][0] = (1.0 / 4.0) * s1 * (s1 * s2 + s12.powi(2)) / d.powi(3);
    r[1][4][3][1] = -1.0 / 2.0 * s1.powi(2) * s12 / d.powi(3);
    r[1][4][4][0] = -1.0 / 4.0 * s1.powi(2) * s12 / d.powi(3);
    r[1][4][4][1] = (1.0 / 4.0) * s1.powi(3) / d.powi(3);
    // block 34
    r[2][3][0][1] = (1.0 / 4.0) * s2 / d.powi(2);
    r[2][3][1][0] = -1.0 / 4.0 * s2 / d.powi(2);
    r[2][3][2][3] = -1.0 / 4.0 * s2.powi(2) / d.powi(3);
    r[2][3][2][4] = (1.0 / 4.0) * s12 * s2 / d.powi(3);
    r[2][3][3][2] = (1.0 / 4.0) * s2.powi(2) / d.powi(3);
    r[2][3][3][4] = -1.0 / 4.0 * s1 * s2 / d.powi(3);
    r[2][3][4][2] = -1.0 / 4.0 * s12 * s2 / d.powi(3);
    r[2][3][4][3] = (1.0 / 4.0) * s1 * s2 / d.powi(3);
    // block 35
    r[2][4][0][1] = (1.0 / 4.0) * s12 / d.powi(2);
    r[2][4][1][0] = -1.0 / 4.0 * s12 / d.powi(2);
    r[2][4][2][3] = (1.0 / 4.0) * s12 * s2 / d.powi(3);
    r[2][4][2][4] = -1.0 / 4.0 * s12.powi(2) / d.powi(3);
    r[2][4][3][2] = -1.0 / 4.0 * s12 * s2 / d.powi(3);
    r[2][4][3][4] = (1.0 / 4.0) * s1 * s12 / d.powi(3);
    r[2][4][4][2] = (1.0 / 4.0) * s12.powi(2) / d.powi(3);
    r[2][4][4][3] = -1.0 / 4.0 * s1 * s12 / d.powi(3);
    // block 45
    r[3][4][0][1] = -1.0 / 4.0 * s1 / d.powi(2);
    r[3][4][1][0] = (1.0 / 4.0) * s1 / d.powi(2);
    r[3][4][2][3] = -1.0 / 4.0 * s1 * s2 / d.powi(3);
    r[3][4][2][4] = (1.0 / 4.0) * s1 * s12 / d.powi(3);
    r[3][4][3][2] = (1.0 / 4.0) * s1 * s2 / d.powi(3);
    r[3][4][3][4] = -1.0 / 4.0 * s1.powi(2) / d.powi(3);
    r[3][4][4][2] = -1.0 / 4.0 * s1 * s12 / d.powi(3);
    r[3][4][4][3] = (1.0 / 4.0) * s1.powi(2) / d.powi(3);
    r
}

/// Full R_abcd of G: corrected blocks extended by antisymmetry in (a, b).
pub fn bivariate_riemann(x: &[f64; 5]) -> Table4 {
    let (_, s12, s2, d) = g_vars(x);
    let d3 = d * d * d;
    let mut r = bivariate_riemann_blocks_printed(x);
    r[0][2][2][0] = s2.powi(3) / (4.0 * d3);
    r[0][3][1][2] = -s2 * s12 * s12 / (2.0 * d3);
    r[0][3][2][1] = s2 * s12 * s12 / (2.0 * d3);
    r[0][4][0][2] = -s2 * s12 * s12 / (4.0 * d3);
    r[0][4][2][0] = s2 * s12 * s12 / (4.0 * d3);
    r[2][3][0][1] = -s2 / (4.0 * d * d);
    r[2][3][1][0] = s2 / (4.0 * d * d);
    for a in 0..5 {
        for b in 0..a {
            r[a][b] = r[b][a].map(|row| row.map(|v| -v));
        }
    }
    r
}

/// Ric_ab of G with the printed leading minus applied.
pub fn bivariate_ricci(x: &[f64; 5]) -> [[f64; 5]; 5] {
    let (s1, s12, s2, d) = g_vars(x);
    let mut ric = [[0.0; 5]; 5];
    ric[0][0] = (1.0 / 2.0) * s2 / d;
    ric[0][1] = -1.0 / 2.0 * s12 / d;
    ric[1][0] = -1.0 / 2.0 * s12 / d;
    ric[1][1] = (1.0 / 2.0) * s1 / d;
    ric[2][2] = (1.0 / 2.0) * s2.powi(2) / d.powi(2);
    ric[2][3] = -s12 * s2 / d.powi(2);
    ric[2][4] = (1.0 / 4.0) * (-s1 * s2 + 3.0 * s12.powi(2)) / d.powi(2);
    ric[3][2] = -s12 * s2 / d.powi(2);
    ric[3][3] = (1.0 / 2.0) * (3.0 * s1 * s2 + s12.powi(2)) / d.powi(2);
    ric[3][4] = -s1 * s12 / d.powi(2);
    ric[4][2] = (1.0 / 4.0) * (-s1 * s2 + 3.0 * s12.powi(2)) / d.powi(2);
    ric[4][3] = -s1 * s12 / d.powi(2);
    ric[4][4] = (1.0 / 2.0) * s1.powi(2) / d.powi(2);
    ric.map(|row| row.map(|v| -v))
}

/// Coordinate-plane sectional curvatures of G, printed leading minus applied.
pub fn bivariate_sectional(x: &[f64; 5]) -> [[f64; 5]; 5] {
    let (s1, s12, s2, _) = g_vars(x);
    let mut k = [[0.0; 5]; 5];
    k[0][1] = -1.0 / 4.0;
    k[0][2] = 1.0 / 2.0;
    k[0][3] = (s1 * s2 + 3.0 * s12.powi(2)) / (4.0 * s1 * s2 + 4.0 * s12.powi(2));
    k[0][4] = (1.0 / 2.0) * s12.powi(2) / (s1 * s2);
    k[1][0] = -1.0 / 4.0;
    k[1][2] = (1.0 / 2.0) * s12.powi(2) / (s1 * s2);
    k[1][3] = (s1 * s2 + 3.0 * s12.powi(2)) / (4.0 * s1 * s2 + 4.0 * s12.powi(2));
    k[1][4] = 1.0 / 2.0;
    k[2][0] = 1.0 / 2.0;
    k[2][1] = (1.0 / 2.0) * s12.powi(2) / (s1 * s2);
    k[2][3] = 1.0 / 2.0;
    k[2][4] = s12.powi(2) / (s1 * s2 + s12.powi(2));
    k[3][0] = (s1 * s2 + 3.0 * s12.powi(2)) / (4.0 * s1 * s2 + 4.0 * s12.powi(2));
    k[3][1] = (s1 * s2 + 3.0 * s12.powi(2)) / (4.0 * s1 * s2 + 4.0 * s12.powi(2));
    k[3][2] = 1.0 / 2.0;
    k[3][4] = 1.0 / 2.0;
    k[4][0] = (1.0 / 2.0) * s12.powi(2) / (s1 * s2);
    k[4][1] = 1.0 / 2.0;
    k[4][2] = s12.powi(2) / (s1 * s2 + s12.powi(2));
    k[4][3] = 1.0 / 2.0;
    k.map(|row| row.map(|v| -v))
}

pub const BIVARIATE_SCAL: f64 = -4.5;

pub fn bivariate_weyl_1234(x: &[f64; 5]) -> f64 {
    let (_, _, s2, d) = g_vars(x);
    -s2 / (4.0 * d * d)
}

/// Source coordinates (mu1, mu2, s1, s2) of a point of I.
pub type IndepSource = [f64; 4];

pub fn independence_metric(p: &IndepSource) -> [[f64; 4]; 4] {
    let [m1, m2, s1, s2] = *p;
    [
        [s1, 0.0, 2.0 * m1 * s1, 0.0],
        [0.0, s2, 0.0, 2.0 * m2 * s2],
        [2.0 * m1 * s1, 0.0, 2.0 * s1 * (2.0 * m1 * m1 + s1), 0.0],
        [0.0, 2.0 * m2 * s2, 0.0, 2.0 * s2 * (2.0 * m2 * m2 + s2)],
    ]
}

/// A single displayed component: label, zero-based indices, value.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Listed {
    pub label: &'static str,
    pub index: [usize; 3],
    pub value: f64,
}

/// Gamma_ab,c of I as listed, `index = [a, b, c]`.
pub fn independence_christoffel_first_printed(p: &IndepSource) -> Vec<Listed> {
    let [m1, m2, s1, s2] = *p;
    vec![
        Listed { label: "Gamma_13,1", index: [0, 2, 0], value: s1 * s1 },
        Listed { label: "Gamma_33,1", index: [2, 2, 0], value: 4.0 * m1 * s1 * s1 },
        Listed { label: "Gamma_24,2", index: [1, 3, 1], value: s2 * s2 },
        Listed { label: "Gamma_44,2", index: [3, 3, 1], value: 4.0 * m2 * s2 * s2 },
        Listed { label: "Gamma_33,3", index: [2, 2, 2], value: 4.0 * s1 * s1 * (3.0 * m2 * m2 + s1) },
    ]
}

/// Gamma^c_ab of I as listed, `index = [c, a, b]`.
pub fn independence_christoffel_second_printed(p: &IndepSource) -> Vec<Listed> {
    let [m1, m2, s1, s2] = *p;
    vec![
        Listed { label: "Gamma_11^1", index: [0, 0, 0], value: -m1 },
        Listed { label: "Gamma_13^3", index: [2, 0, 2], value: m1 },
        Listed { label: "Gamma_31^1", index: [0, 2, 0], value: s1 - 2.0 * m1 * m1 },
        Listed { label: "Gamma_11^3", index: [2, 0, 0], value: 0.5 },
        Listed { label: "Gamma_22^4", index: [3, 1, 1], value: 0.5 },
        Listed { label: "Gamma_33^1", index: [0, 2, 2], value: -4.0 * m1.powi(3) },
        Listed { label: "Gamma_33^3", index: [2, 2, 2], value: 2.0 * (s1 + m1 * m1) },
        Listed { label: "Gamma_22^2", index: [1, 1, 1], value: -m2 },
        Listed { label: "Gamma_24^4", index: [3, 1, 3], value: m2 },
        Listed { label: "Gamma_42^2", index: [1, 3, 1], value: s2 + 2.0 * m2 * m2 },
        Listed { label: "Gamma_44^2", index: [1, 3, 3], value: -4.0 * m2.powi(3) },
        Listed { label: "Gamma_44^4", index: [3, 3, 3], value: 2.0 * (s2 + m2 * m2) },
    ]
}

/// Corrected Gamma_ab,c of I. The metric is a Hessian, so the lowered
/// symbols are totally symmetric; components not listed (Gamma_44,4) follow
/// from the 1<->2 mirror.
pub fn independence_christoffel_first(p: &IndepSource) -> [[[f64; 4]; 4]; 4] {
    let [m1, m2, s1, s2] = *p;
    let mut t = [[[0.0; 4]; 4]; 4];
    let mut put = |i: usize, j: usize, k: usize, v: f64| {
        for (a, b, c) in [(i, j, k), (i, k, j), (j, i, k), (j, k, i), (k, i, j), (k, j, i)] {
            t[a][b][c] = v;
        }
    };
    put(0, 2, 0, s1 * s1);
    put(2, 2, 0, 4.0 * m1 * s1 * s1);
    put(2, 2, 2, 4.0 * s1 * s1 * (3.0 * m1 * m1 + s1));
    put(1, 3, 1, s2 * s2);
    put(3, 3, 1, 4.0 * m2 * s2 * s2);
    put(3, 3, 3, 4.0 * s2 * s2 * (3.0 * m2 * m2 + s2));
    t
}

/// Corrected Gamma^c_ab of I, `[c][a][b]`.
pub fn independence_christoffel(p: &IndepSource) -> [[[f64; 4]; 4]; 4] {
    let mut t = [[[0.0; 4]; 4]; 4];
    for l in independence_christoffel_second_printed(p) {
        let [c, a, b] = l.index;
        t[c][a][b] = l.value;
        t[c][b][a] = l.value;
    }
    let [_, m2, _, s2] = *p;
    t[1][3][1] = s2 - 2.0 * m2 * m2;
    t[1][1][3] = s2 - 2.0 * m2 * m2;
    t
}

/// Full R_abcd of I from its two independent components.
pub fn independence_riemann(p: &IndepSource) -> [[[[f64; 4]; 4]; 4]; 4] {
    let [_, _, s1, s2] = *p;
    let mut r = [[[[0.0; 4]; 4]; 4]; 4];
    for (a, b, v) in [(0, 2, -s1.powi(3)), (1, 3, -s2.powi(3))] {
        r[a][b][a][b] = v;
        r[b][a][b][a] = v;
        r[a][b][b][a] = -v;
        r[b][a][a][b] = -v;
    }
    r
}

/// Ric_ab of I with the printed leading minus applied.
pub fn independence_ricci(p: &IndepSource) -> [[f64; 4]; 4] {
    let [m1, m2, s1, s2] = *p;
    let ric = [
        [s1 / 2.0, 0.0, m1 * s1, 0.0],
        [0.0, s2 / 2.0, 0.0, m2 * s2],
        [m1 * s1, 0.0, s1 * (2.0 * m1 * m1 + s1), 0.0],
        [0.0, m2 * s2, 0.0, s2 * (2.0 * m2 * m2 + s2)],
    ];
    ric.map(|row| row.map(|v| -v))
}

pub fn independence_sectional() -> [[f64; 4]; 4] {
    let mut k = [[0.0; 4]; 4];
    for (a, b) in [(0, 2), (2, 0), (1, 3), (3, 1)] {
        k[a][b] = -0.5;
    }
    k
}

pub const INDEPENDENCE_SCAL: f64 = -2.0;

/// The printed value of C_1234 on I (reported, not asserted).
pub fn independence_weyl_1234_printed(p: &IndepSource) -> f64 {
    let [m1, m2, s1, s2] = *p;
    -7.0 / 3.0 * s1 * s2 * (2.0 * m1 * m1 + s1) * (2.0 * m2 * m2 + s2)
}
