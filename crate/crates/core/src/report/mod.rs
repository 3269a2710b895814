//! Verification reports: records comparing a computed quantity with its
//! target, holonomy summaries, and JSON / text rendering.
//!
//! JSON floats are written in `{:.16e}` form (17 significant digits);
//! non-finite values become `null`.

pub mod checks;
pub mod config;

use std::fmt::Write as _;

use serde::ser::Error as _;
use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

use crate::holonomy::{HolonomyEstimate, InvariantSubspace};
use crate::manifolds::closed_form::Erratum;

pub use checks::{cmd_holonomy, cmd_tensors, cmd_verify_all};
pub use config::{resolve, Format, RunConfig, Tolerances};

pub const TOOL: &str = "tractor-holo";

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Num(pub f64);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return s.serialize_none();
        }
        let raw = RawValue::from_string(format!("{:.16e}", self.0)).map_err(S::Error::custom)?;
        raw.serialize(s)
    }
}

fn nums(v: &[f64]) -> Vec<Num> {
    v.iter().copied().map(Num).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Value {
    Num(Num),
    Text(String),
    Null,
}

impl Value {
    fn show(&self) -> String {
        match self {
            Value::Num(n) => format!("{:.6e}", n.0),
            Value::Text(t) => t.clone(),
            Value::Null => "-".into(),
        }
    }
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Num(Num(v))
    }
}

impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Value::Text(v.to_string())
    }
}

impl From<String> for Value {
    fn from(v: String) -> Self {
        Value::Text(v)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    /// implemented closed form vs exact-derivative evaluation
    ClosedForm,
    /// comparison against an independent numerical oracle
    Oracle,
    /// an identity that must hold up to round-off
    Property,
    /// a threshold on a computed quantity
    Bound,
    /// exact equality of a discrete result
    Label,
    /// both values reported, no equality asserted
    SideBySide,
}

impl Kind {
    fn name(self) -> &'static str {
        match self {
            Kind::ClosedForm => "closed_form",
            Kind::Oracle => "oracle",
            Kind::Property => "property",
            Kind::Bound => "bound",
            Kind::Label => "label",
            Kind::SideBySide => "side_by_side",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Record {
    pub name: String,
    /// the claim being checked, quoted
    pub anchor: String,
    pub target: Value,
    pub computed: Value,
    pub error: Option<Num>,
    pub tolerance: Option<Num>,
    pub pass: bool,
    pub kind: Kind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Record {
    /// error <= tolerance.
    pub fn within(name: &str, anchor: &str, target: Value, computed: Value, error: f64, tol: f64, kind: Kind) -> Self {
        Record {
            name: name.into(),
            anchor: anchor.into(),
            target,
            computed,
            error: Some(Num(error)),
            tolerance: Some(Num(tol)),
            pass: error <= tol,
            kind,
            detail: None,
        }
    }

    /// computed <= bound; the error column carries the computed value.
    pub fn at_most(name: &str, anchor: &str, computed: f64, bound: f64, kind: Kind) -> Self {
        Record::within(name, anchor, Value::Null, computed.into(), computed, bound, kind)
    }

    /// computed >= bound.
    pub fn at_least(name: &str, anchor: &str, computed: f64, bound: f64) -> Self {
        Record {
            name: name.into(),
            anchor: anchor.into(),
            target: Value::Text(format!(">= {bound:e}")),
            computed: computed.into(),
            error: None,
            tolerance: Some(Num(bound)),
            pass: computed >= bound,
            kind: Kind::Bound,
            detail: None,
        }
    }

    pub fn label(name: &str, anchor: &str, target: impl Into<Value>, computed: impl Into<Value>) -> Self {
        let (target, computed) = (target.into(), computed.into());
        Record {
            name: name.into(),
            anchor: anchor.into(),
            pass: target == computed,
            target,
            computed,
            error: None,
            tolerance: None,
            kind: Kind::Label,
            detail: None,
        }
    }

    pub fn side_by_side(name: &str, anchor: &str, target: impl Into<Value>, computed: impl Into<Value>) -> Self {
        let (target, computed) = (target.into(), computed.into());
        let error = match (&target, &computed) {
            (Value::Num(a), Value::Num(b)) => Some(Num((a.0 - b.0).abs())),
            _ => None,
        };
        Record {
            name: name.into(),
            anchor: anchor.into(),
            target,
            computed,
            error,
            tolerance: None,
            pass: true,
            kind: Kind::SideBySide,
            detail: None,
        }
    }

    /// A check that could not run; fails with the reason attached.
    pub fn failed(name: &str, anchor: &str, why: String) -> Self {
        Record {
            name: name.into(),
            anchor: anchor.into(),
            target: Value::Null,
            computed: Value::Null,
            error: None,
            tolerance: None,
            pass: false,
            kind: Kind::Label,
            detail: Some(why),
        }
    }

    pub fn with_detail(mut self, d: impl Into<String>) -> Self {
        self.detail = Some(d.into());
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SubspaceSummary {
    pub basis: Vec<Vec<Num>>,
    pub norm: &'static str,
    pub inner: Num,
    pub kernel_residual: Num,
    pub complement_defect: Num,
}

impl From<&InvariantSubspace> for SubspaceSummary {
    fn from(s: &InvariantSubspace) -> Self {
        SubspaceSummary {
            basis: s.basis.iter().map(|b| nums(b)).collect(),
            norm: s.norm.name(),
            inner: Num(s.inner),
            kernel_residual: Num(s.kernel_residual),
            complement_defect: Num(s.complement_defect),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiagnosticsSummary {
    pub loops_used: usize,
    pub loops_rejected: usize,
    pub generators: usize,
    pub dimension_loops: usize,
    pub dimension_curvature: usize,
    pub closure_rounds: usize,
    pub closure_residual: Num,
    pub max_skew: Num,
    pub max_gram_defect: Num,
    pub max_step_error: Num,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HolonomySection {
    /// "bivariate", "independence" or "cone"
    pub space: String,
    pub base: Vec<Num>,
    pub dimension: usize,
    pub singular_values: Vec<Num>,
    pub gap: Num,
    pub label: String,
    pub invariant_subspaces: Vec<SubspaceSummary>,
    pub diagnostics: DiagnosticsSummary,
}

impl HolonomySection {
    pub fn new(space: &str, e: &HolonomyEstimate) -> Self {
        let d = &e.diagnostics;
        HolonomySection {
            space: space.into(),
            base: nums(&e.base),
            dimension: e.dimension,
            singular_values: nums(&e.singular_values),
            gap: Num(e.gap),
            label: e.label.clone(),
            invariant_subspaces: e.invariant_subspaces.iter().map(SubspaceSummary::from).collect(),
            diagnostics: DiagnosticsSummary {
                loops_used: d.loops_used,
                loops_rejected: d.loops_rejected,
                generators: d.generators,
                dimension_loops: d.dimension_loops,
                dimension_curvature: d.dimension_curvature,
                closure_rounds: d.closure_rounds,
                closure_residual: Num(d.closure_residual),
                max_skew: Num(d.max_skew),
                max_gram_defect: Num(d.max_gram_defect),
                max_step_error: Num(d.max_step_error),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Environment {
    pub seed: u64,
    pub config_hash: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Convention {
    pub name: &'static str,
    pub statement: &'static str,
}

pub const CONVENTIONS: &[Convention] = &[
    Convention {
        name: "riemann",
        statement: "R^a_bcd = d_c Gamma^a_db - d_d Gamma^a_cb + Gamma^a_ce Gamma^e_db - Gamma^a_de Gamma^e_cb",
    },
    Convention { name: "ricci", statement: "Ric_bd = R^a_bad" },
    Convention { name: "sectional", statement: "k(a,b) = R_abab / (g_aa g_bb - g_ab^2)" },
    Convention { name: "schouten", statement: "J = scal / (2(n-1)), P = (Ric - J g) / (n-2)" },
    Convention { name: "tractor_metric", statement: "<V,W> = sigma w + g(X,Z) + y s" },
    Convention { name: "transport", statement: "dM/dt = -A(gamma') M" },
    Convention { name: "bivariate_tensor_chart", statement: "(mu1, mu2, sigma1, sigma12, sigma2)" },
    Convention { name: "independence_tensor_chart", statement: "natural parameters (theta1, theta2, theta3, theta4)" },
    Convention { name: "point_input", statement: "source parameters (mu1, mu2, sigma1, sigma2[, sigma12])" },
];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub status: &'static str,
    pub environment: Environment,
    pub conventions: &'static [Convention],
    pub records: Vec<Record>,
    pub holonomy: Vec<HolonomySection>,
    pub errata: Vec<Erratum>,
}

impl VerificationReport {
    pub fn new(command: &str, cfg: &RunConfig) -> Self {
        VerificationReport {
            tool: TOOL,
            version: env!("CARGO_PKG_VERSION"),
            command: command.into(),
            status: "pass",
            environment: Environment { seed: cfg.seed, config_hash: cfg.hash() },
            conventions: CONVENTIONS,
            records: Vec::new(),
            holonomy: Vec::new(),
            errata: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.records.iter().all(|r| r.pass)
    }

    /// Recompute the overall status from the records.
    pub fn seal(mut self) -> Self {
        self.status = if self.passed() { "pass" } else { "fail" };
        self
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let failed = self.records.iter().filter(|r| !r.pass).count();
        let _ = writeln!(
            s,
            "{} {}: {} ({}/{} records pass)",
            self.tool,
            self.command,
            self.status.to_uppercase(),
            self.records.len() - failed,
            self.records.len()
        );
        let _ = writeln!(s, "seed {}  config {}", self.environment.seed, self.environment.config_hash);
        for r in &self.records {
            let tol = r.tolerance.map_or("-".into(), |t| format!("{:.1e}", t.0));
            let err = r.error.map_or("-".into(), |e| format!("{:.3e}", e.0));
            let _ = writeln!(
                s,
                "{} {:<34} computed {:<14} target {:<14} error {:<10} tol {:<8} [{}]",
                if r.pass { "PASS" } else { "FAIL" },
                r.name,
                r.computed.show(),
                r.target.show(),
                err,
                tol,
                r.kind.name()
            );
            if let Some(d) = &r.detail {
                let _ = writeln!(s, "     {d}");
            }
        }
        for h in &self.holonomy {
            let _ = writeln!(
                s,
                "holonomy {}: dimension {} label {} gap {:.3e}, {} invariant subspace(s)",
                h.space,
                h.dimension,
                h.label,
                h.gap.0,
                h.invariant_subspaces.len()
            );
            for sub in &h.invariant_subspaces {
                let v: Vec<String> = sub.basis[0].iter().map(|c| format!("{:.6}", c.0)).collect();
                let _ = writeln!(s, "  {} line ({}) <V,V> = {:.6e}", sub.norm, v.join(", "), sub.inner.0);
            }
        }
        for e in &self.errata {
            let _ = writeln!(
                s,
                "erratum {} {}: printed {} corrected {} ({})",
                e.table, e.component, e.printed, e.corrected, e.reason
            );
        }
        s
    }

    pub fn render(&self, f: Format) -> String {
        match f {
            Format::Json => self.to_json(),
            Format::Text => self.to_text(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format() {
        let j = serde_json::to_string(&[Num(-4.5), Num(f64::NAN), Num(1.0 / 3.0)]).unwrap();
        assert_eq!(j, "[-4.5000000000000000e0,null,3.3333333333333331e-1]");
        let back: Vec<Option<f64>> = serde_json::from_str(&j).unwrap();
        assert_eq!(back[2], Some(1.0 / 3.0));
    }

    #[test]
    fn status_follows_records() {
        let mut r = VerificationReport::new("t", &RunConfig::default());
        r.records.push(Record::within("a", "x", 1.0.into(), 1.0.into(), 0.0, 0.0, Kind::Oracle));
        assert_eq!(r.clone().seal().status, "pass");
        r.records.push(Record::at_least("b", "y", 1.0, 2.0));
        assert_eq!(r.seal().status, "fail");
    }
}
