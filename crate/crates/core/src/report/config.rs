//! Flat `key = value` run configuration.
//!
//! Precedence, highest first: command-line overrides, the `TRACTOR_HOLO_SEED`
//! environment variable (seed only), the config file, built-in defaults.

use std::path::PathBuf;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::holonomy::{HolonomyConfig, LoopScheme, TransportConfig};
use crate::manifolds::{self, DomainBox};
use crate::point::{ManifoldId, Point};

pub const SEED_ENV: &str = "TRACTOR_HOLO_SEED";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

impl Format {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "text" => Ok(Format::Text),
            other => Err(Error::Config(format!("unknown format '{other}'"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Text => "text",
        }
    }
}

/// Pass/fail thresholds. Every check compares against one of these.
#[derive(Clone, Debug, PartialEq)]
pub struct Tolerances {
    /// closed form vs exact-derivative evaluation, entrywise
    pub tensor: f64,
    /// closed form vs finite-difference Christoffels (relative above 1)
    pub christoffel_fd: f64,
    pub riemann_fd: f64,
    pub einstein: f64,
    /// Bianchi, trace-free Weyl, Schouten trace, metric compatibility
    pub property: f64,
    pub alpha: f64,
    /// Monte-Carlo agreement in standard errors
    pub mc_sigmas: f64,
    pub invariance: f64,
    pub gram: f64,
    pub parallel_residual: f64,
    pub angle: f64,
    pub cone_ricci: f64,
    pub line: f64,
    pub complement: f64,
    pub closure: f64,
    /// required singular-value gap at the rank cut
    pub gap: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            tensor: 1e-8,
            christoffel_fd: 1e-6,
            riemann_fd: 1e-5,
            einstein: 1e-9,
            property: 1e-8,
            alpha: 1e-4,
            mc_sigmas: 4.0,
            invariance: 1e-5,
            gram: 1e-7,
            parallel_residual: 1e-6,
            angle: 1e-5,
            cone_ricci: 1e-4,
            line: 1e-6,
            complement: 1e-7,
            closure: 1e-6,
            gap: 1e3,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub manifold: Option<ManifoldId>,
    /// Base point for the selected manifold (source chart); overrides the
    /// per-manifold keys.
    pub point: Option<Vec<f64>>,
    pub point_bivariate: Vec<f64>,
    pub point_independence: Vec<f64>,
    pub seed: u64,
    pub n_random: usize,
    pub weyl_points: usize,
    pub oracle_points: usize,
    pub mc_points: usize,
    pub mc_samples: usize,
    pub invariance_points: usize,
    pub holonomy: HolonomyConfig,
    /// rerun with doubled loops and halved step and compare
    pub stability: bool,
    pub cone_t: f64,
    pub tol: Tolerances,
    /// Replaces every tolerance when set (not the gap threshold).
    pub tolerance: Option<f64>,
    pub format: Format,
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            manifold: None,
            point: None,
            point_bivariate: vec![0.0, 0.0, 1.0, 1.0, 0.0],
            point_independence: vec![0.0, 0.0, 1.0, 1.0],
            seed: HolonomyConfig::default().seed,
            n_random: 50,
            weyl_points: 20,
            oracle_points: 10,
            mc_points: 10,
            mc_samples: 20_000,
            invariance_points: 10,
            holonomy: HolonomyConfig::default(),
            stability: true,
            cone_t: 1.0,
            tol: Tolerances::default(),
            tolerance: None,
            format: Format::Json,
            out: None,
        }
    }
}

fn num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.trim().parse().map_err(|_| Error::Config(format!("{key}: cannot parse '{v}'")))
}

fn tolerance(key: &str, v: &str) -> Result<f64> {
    let t: f64 = num(key, v)?;
    // zero is allowed: it makes every inexact record fail
    if !t.is_finite() || t < 0.0 {
        return Err(Error::Config(format!("{key}: tolerance must be finite and >= 0, got '{v}'")));
    }
    Ok(t)
}

fn positive(key: &str, v: &str) -> Result<f64> {
    let t: f64 = num(key, v)?;
    if !t.is_finite() || t <= 0.0 {
        return Err(Error::Config(format!("{key}: must be finite and > 0, got '{v}'")));
    }
    Ok(t)
}

fn count(key: &str, v: &str) -> Result<usize> {
    let n: usize = num(key, v)?;
    if n == 0 {
        return Err(Error::Config(format!("{key}: must be at least 1")));
    }
    Ok(n)
}

pub fn parse_point(key: &str, v: &str) -> Result<Vec<f64>> {
    v.split(',').map(|c| num::<f64>(key, c)).collect()
}

fn boolean(key: &str, v: &str) -> Result<bool> {
    match v.trim() {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        _ => Err(Error::Config(format!("{key}: expected true/false, got '{v}'"))),
    }
}

fn join(p: &[f64]) -> String {
    p.iter().map(|c| format!("{c:?}")).collect::<Vec<_>>().join(",")
}

impl RunConfig {
    /// Set one key. Unknown keys are errors.
    pub fn set(&mut self, key: &str, v: &str) -> Result<()> {
        let v = v.trim();
        let h = &mut self.holonomy;
        let t = &mut self.tol;
        match key {
            "manifold" => {
                if v.is_empty() {
                    return Err(Error::Config("manifold: empty selector".into()));
                }
                self.manifold = Some(ManifoldId::parse(v).map_err(|e| Error::Config(e.to_string()))?)
            }
            "point" => self.point = Some(parse_point(key, v)?),
            "point_bivariate" => self.point_bivariate = parse_point(key, v)?,
            "point_independence" => self.point_independence = parse_point(key, v)?,
            "seed" => {
                self.seed = num(key, v)?;
                h.seed = self.seed;
            }
            "n_random" => self.n_random = count(key, v)?,
            "weyl_points" => self.weyl_points = count(key, v)?,
            "oracle_points" => self.oracle_points = count(key, v)?,
            "mc_points" => self.mc_points = count(key, v)?,
            "mc_samples" => {
                self.mc_samples = num(key, v)?;
                if self.mc_samples < manifolds::fisher::MIN_SAMPLES {
                    return Err(Error::Config(format!("mc_samples: need at least {}", manifolds::fisher::MIN_SAMPLES)));
                }
            }
            "invariance_points" => self.invariance_points = count(key, v)?,
            "loops" => h.loops = count(key, v)?,
            "scheme" => h.scheme = LoopScheme::parse(v).map_err(|e| Error::Config(e.to_string()))?,
            "curvature_points" => h.curvature_points = num(key, v)?,
            "steps_per_unit" => h.transport.steps_per_unit = positive(key, v)?,
            "min_steps" => h.transport.min_steps = count(key, v)?,
            "transport_tol" => h.transport.tol = positive(key, v)?,
            "max_refinements" => h.transport.max_refinements = num(key, v)?,
            "rank_tol" => h.rank_tol = positive(key, v)?,
            "gap_min" => h.gap_min = positive(key, v)?,
            "skew_tol" => h.skew_tol = positive(key, v)?,
            "kernel_tol" => h.kernel_tol = positive(key, v)?,
            "closure_rounds" => h.closure_rounds = num(key, v)?,
            "mu_min" => h.bounds.mu.0 = num(key, v)?,
            "mu_max" => h.bounds.mu.1 = num(key, v)?,
            "sigma_min" => h.bounds.sigma.0 = num(key, v)?,
            "sigma_max" => h.bounds.sigma.1 = num(key, v)?,
            "delta_min" => h.bounds.delta_min = num(key, v)?,
            "stability" => self.stability = boolean(key, v)?,
            "cone_t" => self.cone_t = positive(key, v)?,
            "tol_tensor" => t.tensor = tolerance(key, v)?,
            "tol_christoffel_fd" => t.christoffel_fd = tolerance(key, v)?,
            "tol_riemann_fd" => t.riemann_fd = tolerance(key, v)?,
            "tol_einstein" => t.einstein = tolerance(key, v)?,
            "tol_property" => t.property = tolerance(key, v)?,
            "tol_alpha" => t.alpha = tolerance(key, v)?,
            "tol_mc_sigmas" => t.mc_sigmas = tolerance(key, v)?,
            "tol_invariance" => t.invariance = tolerance(key, v)?,
            "tol_gram" => t.gram = tolerance(key, v)?,
            "tol_parallel_residual" => t.parallel_residual = tolerance(key, v)?,
            "tol_angle" => t.angle = tolerance(key, v)?,
            "tol_cone_ricci" => t.cone_ricci = tolerance(key, v)?,
            "tol_line" => t.line = tolerance(key, v)?,
            "tol_complement" => t.complement = tolerance(key, v)?,
            "tol_closure" => t.closure = tolerance(key, v)?,
            "gap" => t.gap = positive(key, v)?,
            "tolerance" => self.tolerance = Some(tolerance(key, v)?),
            "format" => self.format = Format::parse(v)?,
            "out" => self.out = Some(PathBuf::from(v)),
            other => return Err(Error::Config(format!("unknown key '{other}'"))),
        }
        Ok(())
    }

    /// Resolved settings as `(key, value)` pairs, in a fixed order.
    pub fn entries(&self) -> Vec<(&'static str, String)> {
        let h = &self.holonomy;
        let t = &self.tol;
        let mut e = vec![
            ("manifold", self.manifold.map_or(String::new(), |m| m.name().to_string())),
            ("point", self.point.as_deref().map_or(String::new(), join)),
            ("point_bivariate", join(&self.point_bivariate)),
            ("point_independence", join(&self.point_independence)),
            ("seed", self.seed.to_string()),
            ("n_random", self.n_random.to_string()),
            ("weyl_points", self.weyl_points.to_string()),
            ("oracle_points", self.oracle_points.to_string()),
            ("mc_points", self.mc_points.to_string()),
            ("mc_samples", self.mc_samples.to_string()),
            ("invariance_points", self.invariance_points.to_string()),
            ("loops", h.loops.to_string()),
            ("scheme", h.scheme.name().to_string()),
            ("curvature_points", h.curvature_points.to_string()),
            ("steps_per_unit", format!("{:?}", h.transport.steps_per_unit)),
            ("min_steps", h.transport.min_steps.to_string()),
            ("transport_tol", format!("{:?}", h.transport.tol)),
            ("max_refinements", h.transport.max_refinements.to_string()),
            ("rank_tol", format!("{:?}", h.rank_tol)),
            ("gap_min", format!("{:?}", h.gap_min)),
            ("skew_tol", format!("{:?}", h.skew_tol)),
            ("kernel_tol", format!("{:?}", h.kernel_tol)),
            ("closure_rounds", h.closure_rounds.to_string()),
            ("mu_min", format!("{:?}", h.bounds.mu.0)),
            ("mu_max", format!("{:?}", h.bounds.mu.1)),
            ("sigma_min", format!("{:?}", h.bounds.sigma.0)),
            ("sigma_max", format!("{:?}", h.bounds.sigma.1)),
            ("delta_min", format!("{:?}", h.bounds.delta_min)),
            ("stability", self.stability.to_string()),
            ("cone_t", format!("{:?}", self.cone_t)),
        ];
        for (k, v) in [
            ("tol_tensor", t.tensor),
            ("tol_christoffel_fd", t.christoffel_fd),
            ("tol_riemann_fd", t.riemann_fd),
            ("tol_einstein", t.einstein),
            ("tol_property", t.property),
            ("tol_alpha", t.alpha),
            ("tol_mc_sigmas", t.mc_sigmas),
            ("tol_invariance", t.invariance),
            ("tol_gram", t.gram),
            ("tol_parallel_residual", t.parallel_residual),
            ("tol_angle", t.angle),
            ("tol_cone_ricci", t.cone_ricci),
            ("tol_line", t.line),
            ("tol_complement", t.complement),
            ("tol_closure", t.closure),
            ("gap", t.gap),
        ] {
            e.push((k, format!("{v:?}")));
        }
        e.push(("tolerance", self.tolerance.map_or(String::new(), |t| format!("{t:?}"))));
        e
    }

    /// SHA-256 over the resolved settings that influence results (output
    /// format and path excluded).
    pub fn hash(&self) -> String {
        let mut h = Sha256::new();
        for (k, v) in self.entries() {
            h.update(format!("{k}={v}\n").as_bytes());
        }
        h.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn bounds(&self) -> DomainBox {
        self.holonomy.bounds
    }

    /// Base point of `m`: `point` when it targets `m`, else the per-manifold key.
    pub fn base_point(&self, m: ManifoldId) -> Result<Point> {
        let coords = match (&self.point, self.manifold) {
            (Some(p), Some(sel)) if sel == m => p.clone(),
            _ => match m {
                ManifoldId::BivariateGaussian => self.point_bivariate.clone(),
                ManifoldId::IndependenceSub => self.point_independence.clone(),
                ManifoldId::UnivariateGaussian => {
                    return Err(Error::Config("the univariate manifold has no report".into()))
                }
            },
        };
        let p = Point::source(m, &coords).map_err(|e| Error::Config(format!("point: {e}")))?;
        if !manifolds::domain_check(&p) || !self.bounds().contains(&p) {
            return Err(Error::Config(format!("base point {:?} is outside the {} domain box", coords, m.name())));
        }
        Ok(p)
    }

    /// Checks that do not depend on the command.
    pub fn validate(&self) -> Result<()> {
        let b = self.bounds();
        if !(b.mu.0 < b.mu.1 && b.sigma.0 > 0.0 && b.sigma.0 < b.sigma.1 && b.delta_min > 0.0) {
            return Err(Error::Config(format!("invalid domain box {b:?}")));
        }
        if self.point.is_some() && self.manifold.is_none() {
            return Err(Error::Config("point given without a manifold".into()));
        }
        for m in [ManifoldId::BivariateGaussian, ManifoldId::IndependenceSub] {
            self.base_point(m)?;
        }
        Ok(())
    }

    /// The manifold selector, required by the single-manifold commands.
    pub fn require_manifold(&self) -> Result<ManifoldId> {
        match self.manifold {
            Some(ManifoldId::UnivariateGaussian) => {
                Err(Error::Config("manifold must be bivariate or independence".into()))
            }
            Some(m) => Ok(m),
            None => Err(Error::Config("missing manifold selector".into())),
        }
    }

    pub fn transport(&self) -> TransportConfig {
        self.holonomy.transport
    }
}

/// `key = value` lines; `#` starts a comment. Keys may not repeat.
pub fn parse_file(text: &str) -> Result<Vec<(String, String)>> {
    let mut out: Vec<(String, String)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(Error::Config(format!("line {}: expected key = value", i + 1)));
        };
        let k = k.trim().to_string();
        if out.iter().any(|(seen, _)| *seen == k) {
            return Err(Error::Config(format!("line {}: duplicate key '{k}'", i + 1)));
        }
        out.push((k, v.trim().to_string()));
    }
    Ok(out)
}

/// Resolve a configuration from its layers and validate it.
pub fn resolve(file: Option<&str>, env_seed: Option<&str>, cli: &[(String, String)]) -> Result<RunConfig> {
    let mut cfg = RunConfig::default();
    if let Some(text) = file {
        for (k, v) in parse_file(text)? {
            cfg.set(&k, &v)?;
        }
    }
    if let Some(s) = env_seed {
        cfg.set("seed", s).map_err(|_| Error::Config(format!("{SEED_ENV}: cannot parse '{s}'")))?;
    }
    for (k, v) in cli {
        cfg.set(k, v)?;
    }
    cfg.validate()?;
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence() {
        let file = "seed = 5\nloops = 8 # fewer\n";
        let c = resolve(Some(file), None, &[]).unwrap();
        assert_eq!((c.seed, c.holonomy.seed, c.holonomy.loops), (5, 5, 8));
        let c = resolve(Some(file), Some("9"), &[]).unwrap();
        assert_eq!(c.seed, 9);
        let c = resolve(Some(file), Some("9"), &[("seed".into(), "11".into())]).unwrap();
        assert_eq!(c.holonomy.seed, 11);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(resolve(Some("nonsense"), None, &[]).is_err());
        assert!(resolve(Some("a = 1"), None, &[]).is_err());
        assert!(resolve(Some("seed = 1\nseed = 2"), None, &[]).is_err());
        assert!(resolve(None, Some("x"), &[]).is_err());
        assert!(resolve(Some("tol_tensor = -1"), None, &[]).is_err());
        assert!(resolve(Some("tolerance = NaN"), None, &[]).is_err());
        assert!(resolve(Some("delta_min = 2"), None, &[]).is_err());
        assert!(resolve(Some("manifold ="), None, &[]).is_err());
        assert!(resolve(Some("tolerance = 0"), None, &[]).is_ok());
    }

    #[test]
    fn point_selection() {
        let cli = [("manifold".to_string(), "independence".to_string()), ("point".into(), "0.5,0,1.2,0.8".into())];
        let c = resolve(None, None, &cli).unwrap();
        assert_eq!(c.base_point(ManifoldId::IndependenceSub).unwrap().coords[0], 0.5);
        assert_eq!(c.base_point(ManifoldId::BivariateGaussian).unwrap().coords[0], 0.0);
        let bad = [("manifold".to_string(), "bivariate".to_string()), ("point".into(), "0,0,1,1,1".into())];
        assert!(resolve(None, None, &bad).is_err());
    }

    #[test]
    fn hash_tracks_results_only() {
        let a = RunConfig::default();
        let mut b = a.clone();
        b.set("format", "text").unwrap();
        assert_eq!(a.hash(), b.hash());
        b.set("seed", "1").unwrap();
        assert_ne!(a.hash(), b.hash());
    }
}
