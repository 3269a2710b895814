//! One line per acceptance criterion, tolerances pinned here rather than read
//! from the config defaults. Exits nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use tractor_holo::holonomy::cone_metric;
use tractor_holo::linalg;
use tractor_holo::report::{cmd_holonomy, cmd_tensors, cmd_verify_all, Record, RunConfig, Value, VerificationReport};
use tractor_holo::ManifoldId;

const TENSOR_TOL: f64 = 1e-8;
const EINSTEIN_TOL: f64 = 1e-9;
const INVARIANCE_TOL: f64 = 1e-5;
const GRAM_TOL: f64 = 1e-7;
const PARALLEL_TOL: f64 = 1e-6;
const GAP_MIN: f64 = 1e3;
const CONE_RICCI_TOL: f64 = 1e-4;
const ALPHA_TOL: f64 = 1e-4;
const MC_SIGMAS: f64 = 4.0;

struct Outcome {
    failures: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Outcome { failures: Vec::new() }
    }

    fn require(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.failures.push(what.into());
        }
    }

    /// The record exists, passed, and its error is within the pinned bound.
    fn bounded(&mut self, r: &VerificationReport, name: &str, limit: f64) {
        match find(r, name) {
            Some(rec) => {
                let err = rec.error.as_ref().map(|e| e.0).unwrap_or(f64::NAN);
                self.require(rec.pass && err <= limit, format!("{name}: error {err:.3e} > {limit:.0e}"));
            }
            None => self.require(false, format!("{name}: missing")),
        }
    }

    fn label(&mut self, r: &VerificationReport, name: &str, want: &str) {
        let got = find(r, name).map(|rec| text(&rec.computed)).unwrap_or_else(|| "missing".into());
        self.require(got == want, format!("{name}: {got} != {want}"));
    }

    fn runtime(&mut self, what: &str, took: Duration, limit: Duration) {
        self.require(took <= limit, format!("{what} took {took:.1?} > {limit:.0?}"));
    }
}

fn find<'a>(r: &'a VerificationReport, name: &str) -> Option<&'a Record> {
    r.records.iter().find(|rec| rec.name == name)
}

fn text(v: &Value) -> String {
    match v {
        Value::Num(n) => format!("{}", n.0),
        Value::Text(t) => t.clone(),
        Value::Null => "null".into(),
    }
}

fn config(m: Option<ManifoldId>) -> RunConfig {
    RunConfig { manifold: m, ..RunConfig::default() }
}

fn timed(f: impl FnOnce() -> tractor_holo::Result<VerificationReport>) -> (VerificationReport, Duration) {
    let t = Instant::now();
    let r = f().expect("report");
    (r, t.elapsed())
}

fn main() -> ExitCode {
    let g = Some(ManifoldId::BivariateGaussian);
    let i = Some(ManifoldId::IndependenceSub);
    let (tg, tg_time) = timed(|| cmd_tensors(&config(g)));
    let (ti, ti_time) = timed(|| cmd_tensors(&config(i)));
    let (hg, hg_time) = timed(|| cmd_holonomy(&config(g)));
    let (hi, hi_time) = timed(|| cmd_holonomy(&config(i)));
    let (all, all_time) = timed(|| cmd_verify_all(&config(None)));
    let (again, _) = timed(|| cmd_verify_all(&config(None)));

    let mut results: Vec<(&str, Outcome, Duration)> = Vec::new();

    let mut o = Outcome::new();
    o.require(config(g).n_random == 50, "expected 50 random points");
    for name in ["metric", "christoffel", "riemann", "ricci", "scal"] {
        o.bounded(&tg, name, TENSOR_TOL);
    }
    o.runtime("tensors bivariate", tg_time, Duration::from_secs(10));
    results.push(("1 closed-form tensors on G", o, tg_time));

    let mut o = Outcome::new();
    for name in ["riemann_1313", "riemann_2424", "scal"] {
        o.bounded(&ti, name, TENSOR_TOL);
    }
    o.bounded(&ti, "einstein_defect", EINSTEIN_TOL);
    o.runtime("tensors independence", ti_time, Duration::from_secs(5));
    results.push(("2 closed-form tensors on I", o, ti_time));

    let mut o = Outcome::new();
    o.require(config(g).weyl_points == 20, "expected 20 Weyl points");
    o.bounded(&tg, "weyl_1234", TENSOR_TOL);
    o.bounded(&tg, "weyl_trace_free", TENSOR_TOL);
    o.bounded(&ti, "weyl_trace_free", TENSOR_TOL);
    match find(&ti, "weyl_1234") {
        Some(rec) => o.require(
            !matches!(rec.target, Value::Null) && !matches!(rec.computed, Value::Null),
            "independence weyl_1234 lacks one of the two values",
        ),
        None => o.require(false, "independence weyl_1234 missing"),
    }
    results.push(("3 Weyl checks", o, tg_time + ti_time));

    let mut o = Outcome::new();
    for m in ["bivariate", "independence"] {
        o.bounded(&all, &format!("{m}.tractor_invariance"), INVARIANCE_TOL);
        o.bounded(&all, &format!("{m}.transport_preserves_h"), GRAM_TOL);
    }
    o.bounded(&all, "independence.parallel_tractor_residual", PARALLEL_TOL);
    o.label(&all, "independence.parallel_tractor_norm", "positive");
    results.push(("4 tractor layer", o, all_time));

    let mut o = Outcome::new();
    for (r, dim, label) in [(&hg, 21, "SO^0(1,6)"), (&hi, 10, "SO^0(1,4)")] {
        o.label(r, "holonomy_dimension", &dim.to_string());
        o.label(r, "holonomy_label", label);
        let gap = find(r, "holonomy_gap").and_then(|rec| match &rec.computed {
            Value::Num(n) => Some(n.0),
            _ => None,
        });
        o.require(gap.is_some_and(|v| v > GAP_MIN), format!("gap {gap:?} <= {GAP_MIN:.0e}"));
        let want = format!("{dim} {label}");
        o.label(r, "stable_doubled_loops", &want);
        o.label(r, "stable_halved_step", &want);
    }
    o.label(&hg, "invariant_subspaces", "0");
    o.label(&hi, "invariant_subspaces", "1");
    o.label(&hi, "invariant_line_norm", "positive");
    o.runtime("holonomy", hg_time + hi_time, Duration::from_secs(300));
    results.push(("5 holonomy", o, hg_time + hi_time));

    let mut o = Outcome::new();
    let base = config(i).base_point(ManifoldId::IndependenceSub).expect("base point");
    match cone_metric(&base, config(i).cone_t).and_then(|c| linalg::signature(&c.to_matrix())) {
        Ok((neg, pos)) => {
            let sig = (neg.min(pos), neg.max(pos));
            o.require(sig == (1, 5), format!("cone signature {sig:?} != (1, 5)"));
        }
        Err(e) => o.require(false, format!("cone metric: {e}")),
    }
    o.bounded(&hi, "cone_ricci", CONE_RICCI_TOL);
    o.label(&hi, "cone_holonomy_dimension", "10");
    results.push(("6 cone cross-check", o, hi_time));

    let mut o = Outcome::new();
    o.require(config(g).mc_points == 10, "expected 10 Monte-Carlo points");
    for r in [&tg, &ti] {
        match find(r, "fisher_monte_carlo") {
            Some(rec) => {
                let z = match &rec.computed {
                    Value::Num(n) => n.0,
                    _ => f64::NAN,
                };
                o.require(rec.pass && z <= MC_SIGMAS, format!("{}: max z {z:.2}", r.command));
            }
            None => o.require(false, "fisher_monte_carlo missing"),
        }
        o.bounded(r, "alpha0_connection", ALPHA_TOL);
    }
    results.push(("7 oracle agreement", o, tg_time + ti_time));

    let mut o = Outcome::new();
    let (a, b) = (all.to_json(), again.to_json());
    o.require(a == b, "verify-all JSON differs between runs");
    o.require(all.passed(), "verify-all did not pass");
    results.push(("8 determinism", o, all_time));

    let mut failed = 0;
    for (name, o, took) in &results {
        let status = if o.failures.is_empty() { "PASS" } else { "FAIL" };
        let why = if o.failures.is_empty() { String::new() } else { format!("  [{}]", o.failures.join("; ")) };
        println!("{status} criterion {name} ({:.2}s){why}", took.as_secs_f64());
        failed += usize::from(!o.failures.is_empty());
    }
    println!("{} of {} criteria pass", results.len() - failed, results.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
