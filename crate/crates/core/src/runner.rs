//! Report assembly: runs the selected suites on a catalog model and renders
//! the result as JSON or text.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::curvature::{calibrate_sign_convention, Calibration};
use crate::error::{Error, Result};
use crate::models::catalog::{build_model, resolve_params, Model, MODEL_CATALOG};
use crate::verify::checks::{self, CheckResult, Collector, SkippedCheck, Suite, CHECK_CATALOG};
use crate::verify::classification::admissible_scalar_set;

pub const DEFAULT_POINTS: usize = 50;
pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Everything that determines a report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub model: String,
    /// Parameters as given; defaults are filled in by [`run`] and echoed in the report.
    pub params: BTreeMap<String, f64>,
    /// Empty selects every suite.
    pub suites: Vec<Suite>,
    pub points: usize,
    pub tolerances: BTreeMap<String, f64>,
}

impl RunConfig {
    pub fn new(model: impl Into<String>) -> Self {
        Self { model: model.into(), params: BTreeMap::new(), suites: Vec::new(), points: DEFAULT_POINTS, tolerances: BTreeMap::new() }
    }

    pub fn param(mut self, key: &str, value: f64) -> Self {
        self.params.insert(key.to_string(), value);
        self
    }

    pub fn suite(mut self, s: Suite) -> Self {
        self.suites.push(s);
        self
    }

    pub fn points(mut self, points: usize) -> Self {
        self.points = points;
        self
    }

    /// Selected suites, deduplicated in canonical order.
    pub fn selected_suites(&self) -> Vec<Suite> {
        if self.suites.is_empty() {
            return Suite::ALL.to_vec();
        }
        Suite::ALL.iter().copied().filter(|s| self.suites.contains(s)).collect()
    }

    pub fn validate(&self) -> Result<()> {
        if self.points == 0 {
            return Err(Error::config("points", "at least one sample point is required"));
        }
        for (name, &tol) in &self.tolerances {
            if checks::find_check(name).is_none() {
                return Err(Error::config(&format!("tolerances.{name}"), "no check with this name; see list-checks"));
            }
            if !(tol >= 0.0) || !tol.is_finite() {
                return Err(Error::config(&format!("tolerances.{name}"), "tolerance must be a finite non-negative number"));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
}

/// Deterministic for a given config and binary: no timestamps, no timings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub config: RunConfig,
    pub model_label: String,
    pub engine_version: String,
    pub calibration: Calibration,
    pub checks: Vec<CheckResult>,
    pub skipped: Vec<SkippedCheck>,
    pub summary: Summary,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0 && self.calibration.passed
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::config("report", e.to_string()))
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "model: {}", self.model_label);
        let suites: Vec<_> = self.config.selected_suites().iter().map(|s| s.name()).collect();
        let _ = writeln!(out, "suites: {}  points: {}  engine: {}", suites.join(", "), self.config.points, self.engine_version);
        let c = &self.calibration;
        let _ = writeln!(
            out,
            "calibration: {} (S^{} Ric residual {:.2e}, min sectional {:.12}, digest {})",
            if c.passed { "ok" } else { "FAILED" },
            c.sphere_dim,
            c.ricci_residual,
            c.min_sectional,
            c.digest
        );
        let width = self.checks.iter().map(|r| r.name.len()).max().unwrap_or(0);
        for r in &self.checks {
            let _ = write!(
                out,
                "{} {:width$}  residual {:10.3e}  tol {:8.1e}  n={}",
                if r.passed { "PASS" } else { "FAIL" },
                r.name,
                r.residual,
                r.tolerance,
                r.points_sampled
            );
            if !r.notes.is_empty() {
                let _ = write!(out, "  [{}]", r.notes);
            }
            out.push('\n');
        }
        for s in &self.skipped {
            let _ = writeln!(out, "SKIP {:width$}  {}", s.name, s.reason);
        }
        let s = &self.summary;
        let _ = writeln!(out, "summary: {} checks, {} passed, {} failed, {} skipped", s.total, s.passed, s.failed, s.skipped);
        out
    }
}

fn skip_suite(col: &mut Collector, suite: Suite, reason: &str) {
    for c in CHECK_CATALOG.iter().filter(|c| c.suite == suite) {
        col.skip(c.name, reason);
    }
}

fn tag<T>(suite: Suite, r: Result<T>) -> Result<T> {
    r.map_err(|e| e.in_suite(suite.name()))
}

/// Runs the configured suites. The sign-convention calibration runs first and
/// is embedded whatever the selection.
pub fn run(config: &RunConfig) -> Result<Report> {
    config.validate()?;
    let mut config = config.clone();
    config.params = resolve_params(&config.model, &config.params)?;
    let model = build_model(&config.model, &config.params)?;
    let calibration = calibrate_sign_convention(model.dim().max(2))?;
    let suites = config.selected_suites();
    let mut col = Collector::new(config.tolerances.clone());
    let metric = model.metric();

    let instance_suites: Vec<Suite> = suites.iter().copied().filter(|s| !matches!(s, Suite::Algebraic | Suite::EngineSelftest)).collect();
    match &model {
        Model::QuasiEinstein(inst) => {
            let mut inst = (**inst).clone();
            let pts = inst.sample_points(config.points);
            inst.calibrate(&pts)?;
            if !instance_suites.is_empty() {
                let label = instance_suites.iter().map(|s| s.name()).collect::<Vec<_>>().join("+");
                checks::run_instance(&mut col, &inst, &instance_suites, config.points).map_err(|e| e.in_suite(&label))?;
            }
        }
        Model::Warped { spec, params } => {
            for &s in &instance_suites {
                if s == Suite::Classification {
                    tag(s, checks::run_classification_warped(&mut col, spec, params, config.points))?;
                } else {
                    skip_suite(&mut col, s, "the model is not quasi-Einstein");
                }
            }
        }
    }
    if suites.contains(&Suite::EngineSelftest) {
        tag(Suite::EngineSelftest, checks::run_engine(&mut col, &metric, config.points))?;
    }
    if suites.contains(&Suite::Algebraic) {
        tag(Suite::Algebraic, checks::run_algebraic(&mut col))?;
    }

    let (checks, skipped) = col.finish();
    let passed = checks.iter().filter(|c| c.passed).count();
    let summary = Summary { total: checks.len(), passed, failed: checks.len() - passed, skipped: skipped.len() };
    Ok(Report {
        config,
        model_label: model.label(),
        engine_version: ENGINE_VERSION.to_string(),
        calibration,
        checks,
        skipped,
        summary,
    })
}

pub fn list_models() -> String {
    let mut out = String::new();
    for e in MODEL_CATALOG {
        let params: Vec<_> = e.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let _ = writeln!(out, "{:18} {:40} {}", e.name, params.join(" "), e.description);
    }
    out
}

pub fn list_checks() -> String {
    let width = CHECK_CATALOG.iter().map(|c| c.name.len()).max().unwrap_or(0);
    let mut out = String::new();
    for c in CHECK_CATALOG {
        let _ = writeln!(out, "{:width$}  {:15}  tol {:7.1e}  {}", c.name, c.suite.name(), c.tolerance, c.anchor);
    }
    out
}

/// One row per admissible `k`, with the exact value and whether it is excluded.
pub fn list_scalars(n: usize, m: f64, lambda: f64) -> Result<String> {
    if !(m > 1.0) {
        return Err(Error::config("m", "m must exceed 1"));
    }
    let mut out = String::new();
    for a in admissible_scalar_set(n, m, lambda)? {
        let _ = writeln!(out, "k={} R={:.10}{}", a.k, a.r, if a.excluded { " (excluded)" } else { "" });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalars_for_n4_m2() {
        let s = list_scalars(4, 2.0, 1.0).unwrap();
        let rows: Vec<_> = s.lines().collect();
        assert_eq!(rows.len(), 4);
        assert_eq!(rows[0], "k=0 R=2.4000000000");
        assert_eq!(rows[1], "k=1 R=2.5000000000 (excluded)");
        assert_eq!(rows[2], "k=2 R=2.6666666667");
        assert_eq!(rows[3], "k=3 R=3.0000000000");
    }

    #[test]
    fn rejects_m_at_most_one() {
        let err = run(&RunConfig::new("hemisphere").param("m", 1.0)).unwrap_err();
        assert!(err.to_string().contains("m must exceed 1"), "{err}");
        assert!(list_scalars(4, 1.0, 1.0).is_err());
    }

    #[test]
    fn rejects_unknown_tolerance_name() {
        let mut c = RunConfig::new("hemisphere");
        c.tolerances.insert("defining.nope".into(), 1.0);
        assert!(matches!(run(&c), Err(Error::Config { .. })));
    }
}
