use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Chart {
    /// Means, variances and covariance: (mu1, mu2, sigma1, sigma2, sigma12).
    SourceParams,
    /// Exponential-family natural parameters theta.
    NaturalParams,
}

impl Chart {
    pub fn name(self) -> &'static str {
        match self {
            Chart::SourceParams => "source",
            Chart::NaturalParams => "natural",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ManifoldId {
    BivariateGaussian,
    IndependenceSub,
    UnivariateGaussian,
}

impl ManifoldId {
    pub fn dim(self) -> usize {
        match self {
            ManifoldId::BivariateGaussian => 5,
            ManifoldId::IndependenceSub => 4,
            ManifoldId::UnivariateGaussian => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ManifoldId::BivariateGaussian => "bivariate",
            ManifoldId::IndependenceSub => "independence",
            ManifoldId::UnivariateGaussian => "univariate",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "bivariate" | "G" => Ok(ManifoldId::BivariateGaussian),
            "independence" | "I" => Ok(ManifoldId::IndependenceSub),
            "univariate" => Ok(ManifoldId::UnivariateGaussian),
            other => Err(Error::RejectedInput(format!("unknown manifold '{other}'"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Point {
    pub manifold: ManifoldId,
    pub chart: Chart,
    pub coords: Vec<f64>,
}

impl Point {
    pub fn new(manifold: ManifoldId, chart: Chart, coords: Vec<f64>) -> Result<Self> {
        if coords.len() != manifold.dim() {
            return Err(Error::RejectedInput(format!(
                "{} needs {} coordinates, got {}",
                manifold.name(),
                manifold.dim(),
                coords.len()
            )));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::RejectedInput("non-finite coordinate".into()));
        }
        Ok(Point { manifold, chart, coords })
    }

    pub fn source(manifold: ManifoldId, coords: &[f64]) -> Result<Self> {
        Point::new(manifold, Chart::SourceParams, coords.to_vec())
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// Copy of this point with one coordinate shifted.
    pub fn shifted(&self, dir: usize, h: f64) -> Point {
        let mut p = self.clone();
        p.coords[dir] += h;
        p
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn length_checked() {
        assert!(Point::source(ManifoldId::BivariateGaussian, &[0.0, 0.0, 1.0, 1.0]).is_err());
        assert!(Point::source(ManifoldId::IndependenceSub, &[0.0, 0.0, 1.0, 1.0]).is_ok());
        assert!(Point::source(ManifoldId::UnivariateGaussian, &[0.0, f64::NAN]).is_err());
    }

    #[test]
    fn parse_names() {
        assert_eq!(ManifoldId::parse("bivariate").unwrap(), ManifoldId::BivariateGaussian);
        assert!(ManifoldId::parse("").is_err());
    }
}
