//! Running scenarios and aggregating their reports.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use crate::checks::{Check, Outcome};
use crate::scenario::{load_dir, Expect, Golden, Scenario};
use crate::{UsageError, SCHEMA_VERSION, VERSION};

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Report {
    pub scenario: String,
    pub check: String,
    pub passed: bool,
    pub expect: Expect,
    pub check_passed: bool,
    pub payload: Value,
    pub diagnostics: Vec<String>,
    pub version: &'static str,
    /// Wall-clock time; kept out of the canonical JSON.
    #[serde(skip)]
    pub duration: Duration,
}

fn panic_text(p: Box<dyn std::any::Any + Send>) -> String {
    p.downcast_ref::<&str>()
        .map(|s| s.to_string())
        .or_else(|| p.downcast_ref::<String>().cloned())
        .unwrap_or_else(|| "unknown panic".into())
}

/// Runs a check, turning panics into failed outcomes.
pub fn run_check(check: &Check, eps: f64) -> Outcome {
    catch_unwind(AssertUnwindSafe(|| check.run(eps))).unwrap_or_else(|p| Outcome::error(format!("panic: {}", panic_text(p))))
}

fn golden_failure(payload: &Value, g: &Golden, eps: f64) -> Option<String> {
    let Some(got) = payload.pointer(&g.pointer) else {
        return Some(format!("golden {}: missing", g.pointer));
    };
    let ok = match (got.as_f64(), g.value.as_f64()) {
        (Some(a), Some(b)) => (a - b).abs() <= g.tol.unwrap_or(eps),
        _ => got == &g.value,
    };
    (!ok).then(|| format!("golden {}: got {got}, expected {}", g.pointer, g.value))
}

pub fn run_scenario(s: &Scenario, eps: f64) -> Report {
    let start = Instant::now();
    let out = run_check(&s.check, eps);
    let mut diagnostics = out.diagnostics;
    diagnostics.extend(s.golden.iter().filter_map(|g| golden_failure(&out.payload, g, eps)));
    let goldens_ok = diagnostics.iter().all(|d| !d.starts_with("golden "));
    // Errors and panics fail regardless of the expected outcome.
    let passed = !out.errored && goldens_ok && out.passed == (s.expect == Expect::Pass);
    Report {
        scenario: s.name.clone(),
        check: s.check.name().to_string(),
        passed,
        expect: s.expect,
        check_passed: out.passed,
        payload: out.payload,
        diagnostics,
        version: VERSION,
        duration: start.elapsed(),
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct SuiteReport {
    pub version: &'static str,
    pub schema: u32,
    pub scenarios: Vec<Report>,
    pub summary: Summary,
}

impl SuiteReport {
    pub fn exit_code(&self) -> i32 {
        if self.summary.failed == 0 {
            0
        } else {
            1
        }
    }

    /// Canonical JSON: sorted keys, no timings, trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }
}

/// Runs scenarios on up to `jobs` threads; reports are ordered by name.
pub fn run_scenarios(scenarios: &[Scenario], jobs: usize, eps: f64) -> SuiteReport {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build().expect("thread pool");
    let mut scenarios_out: Vec<Report> = pool.install(|| scenarios.par_iter().map(|s| run_scenario(s, eps)).collect());
    scenarios_out.sort_by(|a, b| a.scenario.cmp(&b.scenario));
    let failures: Vec<String> = scenarios_out.iter().filter(|r| !r.passed).map(|r| r.scenario.clone()).collect();
    SuiteReport {
        version: VERSION,
        schema: SCHEMA_VERSION,
        summary: Summary {
            total: scenarios_out.len(),
            passed: scenarios_out.len() - failures.len(),
            failed: failures.len(),
            failures,
        },
        scenarios: scenarios_out,
    }
}

pub fn run_suite(dir: &Path, jobs: usize, eps: f64) -> Result<SuiteReport, UsageError> {
    Ok(run_scenarios(&load_dir(dir)?, jobs, eps))
}
