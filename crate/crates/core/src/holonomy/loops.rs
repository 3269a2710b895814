//! Loop families at a base point: coordinate rectangles, random polylines and
//! geodesic triangles.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::transport::{Connection, Path, Segment};
use crate::error::{Error, Result};
use crate::manifolds::{self, DomainBox};
use crate::point::ManifoldId;

/// Where loops may go, in the chart the connection uses.
pub trait Region: Sync {
    fn contains(&self, x: &[f64]) -> bool;
    fn sample(&self, rng: &mut ChaCha8Rng) -> Vec<f64>;
}

/// The sampling box of G or I, in the tensor chart.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GaussianRegion {
    pub manifold: ManifoldId,
    pub bounds: DomainBox,
}

impl Region for GaussianRegion {
    fn contains(&self, x: &[f64]) -> bool {
        manifolds::point_from_tensor(self.manifold, x).is_ok_and(|p| self.bounds.contains(&p))
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> Vec<f64> {
        let p = self.bounds.sample(self.manifold, rng);
        manifolds::tensor_coords(&p).expect("sampled points are valid")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum LoopKind {
    CoordRectangle { a: usize, b: usize, eps: f64 },
    RandomPolyline { seed: u64 },
    GeodesicTriangle { seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LoopPath {
    pub base: Vec<f64>,
    pub path: Path,
    pub kind: LoopKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum LoopScheme {
    CoordRectangle,
    RandomPolyline,
    GeodesicTriangle,
    /// Rectangles, `count` polylines and `count / 4` (at least one) triangles.
    Mixed,
}

impl LoopScheme {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "rectangle" => Ok(LoopScheme::CoordRectangle),
            "polyline" => Ok(LoopScheme::RandomPolyline),
            "triangle" => Ok(LoopScheme::GeodesicTriangle),
            "mixed" => Ok(LoopScheme::Mixed),
            _ => Err(Error::Config(format!("unknown loop scheme {s:?}"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            LoopScheme::CoordRectangle => "rectangle",
            LoopScheme::RandomPolyline => "polyline",
            LoopScheme::GeodesicTriangle => "triangle",
            LoopScheme::Mixed => "mixed",
        }
    }
}

pub const RECTANGLE_SCALES: [f64; 3] = [0.05, 0.1, 0.2];
/// Chart radius of random waypoints around the base point.
pub const WAYPOINT_RADIUS: f64 = 0.3;
const SAMPLES_PER_SEGMENT: usize = 64;
const MAX_ATTEMPTS: usize = 200;

impl LoopPath {
    pub fn closure_defect(&self) -> f64 {
        let (s, e) = (self.path.start(), self.path.end());
        s.iter().zip(&e).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }

    /// Closed and inside the region at every sampled parameter.
    pub fn is_valid<R: Region + ?Sized>(&self, region: &R) -> bool {
        self.closure_defect() <= 1e-12 && self.path.samples(SAMPLES_PER_SEGMENT).iter().all(|x| region.contains(x))
    }
}

fn offset(base: &[f64], dirs: &[(usize, f64)]) -> Vec<f64> {
    let mut x = base.to_vec();
    for &(i, d) in dirs {
        x[i] += d;
    }
    x
}

/// Rectangle base -> +eps e_a -> +eps e_a + eps e_b -> +eps e_b -> base,
/// with side signs flipped if needed to stay inside the region.
pub fn rectangle<R: Region + ?Sized>(base: &[f64], a: usize, b: usize, eps: f64, region: &R) -> Result<LoopPath> {
    for (sa, sb) in [(1.0, 1.0), (-1.0, 1.0), (1.0, -1.0), (-1.0, -1.0)] {
        let (da, db) = (sa * eps, sb * eps);
        let pts = vec![
            base.to_vec(),
            offset(base, &[(a, da)]),
            offset(base, &[(a, da), (b, db)]),
            offset(base, &[(b, db)]),
            base.to_vec(),
        ];
        let lp =
            LoopPath { base: base.to_vec(), path: Path::polyline(&pts), kind: LoopKind::CoordRectangle { a, b, eps } };
        if lp.is_valid(region) {
            return Ok(lp);
        }
    }
    Err(Error::Domain(format!("no rectangle of side {eps} in plane ({a},{b}) fits at {base:?}")))
}

fn waypoint<R: Region + ?Sized>(base: &[f64], region: &R, rng: &mut ChaCha8Rng) -> Result<Vec<f64>> {
    for _ in 0..100 * MAX_ATTEMPTS {
        let x: Vec<f64> = base.iter().map(|b| b + rng.random_range(-WAYPOINT_RADIUS..=WAYPOINT_RADIUS)).collect();
        if region.contains(&x) {
            return Ok(x);
        }
    }
    Err(Error::Domain(format!("no waypoint found near {base:?}")))
}

/// Closed polyline through 2 to 4 random waypoints near the base.
pub fn random_polyline<R: Region + ?Sized>(base: &[f64], region: &R, seed: u64) -> Result<LoopPath> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_ATTEMPTS {
        let k = rng.random_range(2..=4);
        let mut pts = vec![base.to_vec()];
        for _ in 0..k {
            pts.push(waypoint(base, region, &mut rng)?);
        }
        pts.push(base.to_vec());
        let lp = LoopPath { base: base.to_vec(), path: Path::polyline(&pts), kind: LoopKind::RandomPolyline { seed } };
        if lp.is_valid(region) {
            return Ok(lp);
        }
    }
    Err(Error::Domain("could not place a random polyline".into()))
}

const GEODESIC_NODES: usize = 128;

fn geodesic_rhs<C: Connection + ?Sized>(c: &C, x: &[f64], v: &[f64]) -> Vec<f64> {
    let gam = c.christoffel(x);
    (0..x.len())
        .map(|k| {
            let mut s = 0.0;
            for a in 0..x.len() {
                for b in 0..x.len() {
                    s -= gam[k][a][b] * v[a] * v[b];
                }
            }
            s
        })
        .collect()
}

type Nodes = Vec<Vec<f64>>;

/// RK4 for x'' = -Gamma(x', x') on t in [0, 1]; returns the nodes and velocities.
fn shoot<C: Connection + ?Sized>(c: &C, x0: &[f64], v0: &[f64]) -> Result<(Nodes, Nodes)> {
    let n = x0.len();
    let h = 1.0 / GEODESIC_NODES as f64;
    let (mut x, mut v) = (x0.to_vec(), v0.to_vec());
    let mut xs = vec![x.clone()];
    let mut vs = vec![v.clone()];
    let add = |a: &[f64], b: &[f64], s: f64| -> Vec<f64> { a.iter().zip(b).map(|(p, q)| p + s * q).collect() };
    for _ in 0..GEODESIC_NODES {
        if !c.in_domain(&x) {
            return Err(Error::Domain(format!("geodesic left the domain at {x:?}")));
        }
        let k1x = v.clone();
        let k1v = geodesic_rhs(c, &x, &v);
        let (x2, v2) = (add(&x, &k1x, 0.5 * h), add(&v, &k1v, 0.5 * h));
        if !c.in_domain(&x2) {
            return Err(Error::Domain(format!("geodesic left the domain at {x2:?}")));
        }
        let k2v = geodesic_rhs(c, &x2, &v2);
        let (x3, v3) = (add(&x, &v2, 0.5 * h), add(&v, &k2v, 0.5 * h));
        if !c.in_domain(&x3) {
            return Err(Error::Domain(format!("geodesic left the domain at {x3:?}")));
        }
        let k3v = geodesic_rhs(c, &x3, &v3);
        let (x4, v4) = (add(&x, &v3, h), add(&v, &k3v, h));
        if !c.in_domain(&x4) {
            return Err(Error::Domain(format!("geodesic left the domain at {x4:?}")));
        }
        let k4v = geodesic_rhs(c, &x4, &v4);
        for i in 0..n {
            x[i] += h / 6.0 * (k1x[i] + 2.0 * v2[i] + 2.0 * v3[i] + v4[i]);
            v[i] += h / 6.0 * (k1v[i] + 2.0 * k2v[i] + 2.0 * k3v[i] + k4v[i]);
        }
        xs.push(x.clone());
        vs.push(v.clone());
    }
    Ok((xs, vs))
}

/// Geodesic from p to q by Newton shooting on the initial velocity, as a
/// Hermite segment whose endpoints are snapped to p and q exactly.
pub fn geodesic_segment<C: Connection + ?Sized>(c: &C, p: &[f64], q: &[f64]) -> Result<Segment> {
    let n = p.len();
    let mut v: Vec<f64> = p.iter().zip(q).map(|(a, b)| b - a).collect();
    for _ in 0..20 {
        let (xs, vs) = shoot(c, p, &v)?;
        let miss = DVector::from_fn(n, |i, _| xs[GEODESIC_NODES][i] - q[i]);
        if miss.amax() < 1e-11 {
            let mut nodes = xs;
            nodes[0] = p.to_vec();
            nodes[GEODESIC_NODES] = q.to_vec();
            return Ok(Segment::Hermite { nodes, vels: vs });
        }
        let h = 1e-6;
        let mut jac = DMatrix::zeros(n, n);
        for j in 0..n {
            let mut vp = v.clone();
            vp[j] += h;
            let (xp, _) = shoot(c, p, &vp)?;
            for i in 0..n {
                jac[(i, j)] = (xp[GEODESIC_NODES][i] - xs[GEODESIC_NODES][i]) / h;
            }
        }
        let step = jac.lu().solve(&miss).ok_or_else(|| Error::Inconsistent("singular shooting Jacobian".into()))?;
        for j in 0..n {
            v[j] -= step[j];
        }
    }
    Err(Error::Inconsistent("geodesic shooting did not converge".into()))
}

/// Triangle base -> q1 -> q2 -> base with geodesic sides.
pub fn geodesic_triangle<C: Connection + ?Sized, R: Region + ?Sized>(
    c: &C,
    base: &[f64],
    region: &R,
    seed: u64,
) -> Result<LoopPath> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_ATTEMPTS {
        let q1 = waypoint(base, region, &mut rng)?;
        let q2 = waypoint(base, region, &mut rng)?;
        let sides = [geodesic_segment(c, base, &q1), geodesic_segment(c, &q1, &q2), geodesic_segment(c, &q2, base)];
        if sides.iter().any(|s| s.is_err()) {
            continue;
        }
        let segments = sides.into_iter().map(|s| s.expect("checked")).collect();
        let lp = LoopPath { base: base.to_vec(), path: Path { segments }, kind: LoopKind::GeodesicTriangle { seed } };
        if lp.is_valid(region) {
            return Ok(lp);
        }
    }
    Err(Error::Domain("could not place a geodesic triangle".into()))
}

/// Per-loop seed derived from the master seed.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    master ^ 0x9E37_79B9_7F4A_7C15u64.wrapping_mul(index + 1)
}

/// Deterministic family: every coordinate rectangle at each scale, then
/// `count` random loops of the requested kind.
pub fn loop_family<C: Connection + ?Sized, R: Region + ?Sized>(
    c: &C,
    base: &[f64],
    region: &R,
    scheme: LoopScheme,
    count: usize,
    seed: u64,
) -> Result<Vec<LoopPath>> {
    if count == 0 && scheme != LoopScheme::CoordRectangle {
        return Err(Error::RejectedInput("loop count must be at least 1".into()));
    }
    if !region.contains(base) {
        return Err(Error::Domain(format!("base {base:?} outside the sampling box")));
    }
    let n = base.len();
    let mut out = Vec::new();
    for eps in RECTANGLE_SCALES {
        for a in 0..n {
            for b in (a + 1)..n {
                out.push(rectangle(base, a, b, eps, region)?);
            }
        }
    }
    let (polylines, triangles) = match scheme {
        LoopScheme::CoordRectangle => (0, 0),
        LoopScheme::RandomPolyline => (count, 0),
        LoopScheme::GeodesicTriangle => (0, count),
        LoopScheme::Mixed => (count, (count / 4).max(1)),
    };
    for i in 0..polylines {
        out.push(random_polyline(base, region, derive_seed(seed, i as u64))?);
    }
    for i in 0..triangles {
        out.push(geodesic_triangle(c, base, region, derive_seed(seed, (polylines + i) as u64))?);
    }
    Ok(out)
}
