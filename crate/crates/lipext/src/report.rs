//! Run manifests and human-readable summaries.

use std::fmt::Write as _;
use std::path::Path;

use lipext_core::ifs::InequalityCheck;
use lipext_core::Constants;
use serde::{Deserialize, Serialize};

use crate::config::read_text;
use crate::csvio::fmt_f64;
use crate::error::{HarnessError, Result};

pub const MANIFEST: &str = "manifest.toml";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemSummary {
    pub role: String,
    pub name: String,
    pub maps: usize,
    pub dimension: f64,
    pub lower: f64,
    pub upper: f64,
    pub distortion: f64,
    pub checks_passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageSummary {
    pub k: usize,
    pub l_low: f64,
    pub l_high: f64,
    /// Sup distance to the limit table on the common net.
    pub sup_to_limit: Option<f64>,
    pub m_k: Option<usize>,
}

/// Everything a run records about itself, in `manifest.toml`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub scenario: String,
    pub mode: String,
    pub seed: u64,
    pub depth: usize,
    pub exit_code: i32,
    pub failed_stage: Option<String>,
    pub message: Option<String>,
    pub lipschitz: Option<f64>,
    pub l_prime: Option<f64>,
    /// First schedule index of the epsilon-Cauchy tail.
    pub k0: Option<usize>,
    pub m: Option<usize>,
    pub limit_l_low: Option<f64>,
    pub limit_l_high: Option<f64>,
    pub verdict: Option<String>,
    pub artifacts: Vec<String>,
    pub systems: Vec<SystemSummary>,
    pub stages: Vec<StageSummary>,
}

impl Manifest {
    pub fn new(scenario: &str, mode: &str, seed: u64, depth: usize) -> Self {
        Manifest {
            scenario: scenario.to_string(),
            mode: mode.to_string(),
            seed,
            depth,
            exit_code: 0,
            failed_stage: None,
            message: None,
            lipschitz: None,
            l_prime: None,
            k0: None,
            m: None,
            limit_l_low: None,
            limit_l_high: None,
            verdict: None,
            artifacts: Vec::new(),
            systems: Vec::new(),
            stages: Vec::new(),
        }
    }
}

/// Constants certificate as `key = value` lines followed by the inequality
/// table.
pub fn certificate(name: &str, constants: &Constants, separation: &str, checks: &[InequalityCheck]) -> String {
    let b = &constants.brackets;
    let mut out = String::new();
    let pair = |p: (f64, f64)| format!("{} {}", fmt_f64(p.0), fmt_f64(p.1));
    let lines = [
        ("system", name.to_string()),
        ("separation", separation.to_string()),
        ("dimension", fmt_f64(constants.dimension)),
        ("c", fmt_f64(constants.lower)),
        ("C", fmt_f64(constants.upper)),
        ("K", fmt_f64(constants.distortion)),
        ("L0", fmt_f64(constants.contraction)),
        ("c1", fmt_f64(constants.derivative_min)),
        ("C1", fmt_f64(constants.derivative_max)),
        ("R", fmt_f64(constants.local_radius)),
        ("depth", constants.depth.to_string()),
        ("seed", constants.seed.to_string()),
        ("bracket.derivative", pair(b.derivative)),
        ("bracket.bilipschitz", pair(b.bilipschitz)),
        ("bracket.parent_child", fmt_f64(b.parent_child)),
        ("bracket.density", pair(b.density)),
        ("bracket.gap", b.gap.map_or("none".to_string(), fmt_f64)),
    ];
    for (k, v) in lines {
        writeln!(out, "{k} = {v}").unwrap();
    }
    writeln!(out, "\n{:<30} {:>8} {:>10} {:>24}  status", "check", "samples", "violations", "worst margin").unwrap();
    for c in checks {
        let status = if c.passed() { "pass" } else { "FAIL" };
        writeln!(out, "{:<30} {:>8} {:>10} {:>24}  {status}", c.name, c.checked, c.violations, fmt_f64(c.worst_margin)).unwrap();
        if let Some(w) = c.witness.as_ref().filter(|_| !c.passed()) {
            writeln!(out, "  witness: {w}").unwrap();
        }
    }
    out
}

pub fn read_manifest(dir: &Path) -> Result<Manifest> {
    let path = dir.join(MANIFEST);
    if !path.is_file() {
        return Err(HarnessError::Input(format!("{} has no {MANIFEST}", dir.display())));
    }
    toml::from_str(&read_text(&path)?).map_err(|e| HarnessError::Input(format!("{}: {e}", path.display())))
}

fn opt(x: Option<f64>) -> String {
    x.map_or("-".to_string(), |v| format!("{v:.6}"))
}

/// One summary of a completed run directory. Fails with an input error when
/// the manifest or any listed artifact is missing.
pub fn emit_report(dir: &Path) -> Result<String> {
    let m = read_manifest(dir)?;
    for a in &m.artifacts {
        if !dir.join(a).is_file() {
            return Err(HarnessError::Input(format!("artifact {a} listed in the manifest is missing")));
        }
    }
    let mut out = String::new();
    writeln!(out, "scenario {} (mode {}, seed {}, depth {})", m.scenario, m.mode, m.seed, m.depth).unwrap();
    match (&m.failed_stage, m.exit_code) {
        (_, 0) => writeln!(out, "status: pass").unwrap(),
        (Some(stage), code) => writeln!(out, "status: FAIL at stage `{stage}` (exit {code})").unwrap(),
        (None, code) => writeln!(out, "status: FAIL (exit {code})").unwrap(),
    }
    if let Some(msg) = &m.message {
        writeln!(out, "  {msg}").unwrap();
    }
    if !m.systems.is_empty() {
        writeln!(out, "\n{:<8} {:<20} {:>4} {:>10} {:>10} {:>10} {:>10}  checks", "role", "system", "maps", "s", "c", "C", "K").unwrap();
        for s in &m.systems {
            writeln!(
                out,
                "{:<8} {:<20} {:>4} {:>10.6} {:>10.6} {:>10.6} {:>10.6}  {}",
                s.role,
                s.name,
                s.maps,
                s.dimension,
                s.lower,
                s.upper,
                s.distortion,
                if s.checks_passed { "pass" } else { "FAIL" }
            )
            .unwrap();
        }
    }
    if m.lipschitz.is_some() || m.l_prime.is_some() {
        writeln!(out, "\nL (oracle) = {}   L' = {}", opt(m.lipschitz), opt(m.l_prime)).unwrap();
    }
    if !m.stages.is_empty() {
        writeln!(out, "\n{:>4} {:>12} {:>12} {:>14} {:>5}", "k", "L_low", "L_high", "sup to limit", "m_k").unwrap();
        for s in &m.stages {
            let mk = s.m_k.map_or("-".to_string(), |v| v.to_string());
            writeln!(out, "{:>4} {:>12.6} {:>12.6} {:>14} {:>5}", s.k, s.l_low, s.l_high, opt(s.sup_to_limit), mk).unwrap();
        }
    }
    if let Some(k0) = m.k0 {
        writeln!(out, "\nlimit: epsilon-Cauchy from k = {k0}").unwrap();
    }
    if m.limit_l_low.is_some() {
        writeln!(out, "limit constants: L_low = {}, L_high = {}", opt(m.limit_l_low), opt(m.limit_l_high)).unwrap();
    }
    if let Some(mm) = m.m {
        writeln!(out, "m = {mm}").unwrap();
    }
    if let Some(v) = &m.verdict {
        writeln!(out, "verdict: {v}").unwrap();
    }
    Ok(out)
}
