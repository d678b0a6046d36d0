//! Scenario orchestration.

use std::path::{Path, PathBuf};

use lipext_core::extension::{extract_limit, thm1_construct, verify_map_table, CertifiedSystem, LimitReport, MapTable, VerifyMode};
use lipext_core::ifs::{check_inequalities, check_separation, estimate_constants, strong_separation_gap};
use lipext_core::onto::{thm2_construct, Thm2Run};
use lipext_core::symbolic::words_to_string;
use lipext_core::{Error, Separation};

use crate::config::{Mode, Scenario, SystemSpec};
use crate::csvio::{fmt_f64, write_net, write_rows, write_table, write_text};
use crate::error::{HarnessError, Result};
use crate::report::{certificate, Manifest, StageSummary, SystemSummary, MANIFEST};

/// Sibling-gap search depth under strong separation.
const GAP_DEPTH: usize = 6;
/// Depth of the open set exclusion check.
const OPEN_SET_DEPTH: usize = 8;

#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub depth: Option<usize>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
}

#[derive(Debug)]
pub struct RunOutcome {
    pub out_dir: PathBuf,
    pub manifest: Manifest,
    pub error: Option<HarnessError>,
}

impl RunOutcome {
    pub fn exit_code(&self) -> i32 {
        self.manifest.exit_code
    }
}

struct Run {
    out: PathBuf,
    manifest: Manifest,
}

impl Run {
    fn artifact(&mut self, name: &str) -> PathBuf {
        self.manifest.artifacts.push(name.to_string());
        self.out.join(name)
    }
}

/// Runs a scenario file. Input errors are returned as `Err` before anything
/// is written; every other outcome leaves a manifest in the output
/// directory (default `out/<scenario name>`).
pub fn run_scenario(path: &Path, overrides: &Overrides) -> Result<RunOutcome> {
    let mut scenario = Scenario::load(path)?;
    if let Some(d) = overrides.depth {
        scenario = scenario.with_depth(d)?;
    }
    if let Some(s) = overrides.seed {
        scenario.spec.seed = s;
    }
    let out = overrides.out.clone().unwrap_or_else(|| PathBuf::from("out").join(&scenario.spec.name));
    run_loaded(&scenario, &out)
}

pub fn run_loaded(scenario: &Scenario, out: &Path) -> Result<RunOutcome> {
    let spec = &scenario.spec;
    if out.exists() {
        std::fs::remove_dir_all(out).map_err(HarnessError::io(out))?;
    }
    std::fs::create_dir_all(out).map_err(HarnessError::io(out))?;
    let mut run = Run { out: out.to_path_buf(), manifest: Manifest::new(&spec.name, spec.mode.name(), spec.seed, spec.depth) };
    let result = pipeline(scenario, &mut run);
    let error = match result {
        Ok(()) => None,
        Err(e) if e.exit_code() == 2 => return Err(e),
        Err(e) => {
            run.manifest.exit_code = e.exit_code();
            run.manifest.failed_stage = e.stage().map(str::to_string);
            run.manifest.message = Some(e.to_string());
            Some(e)
        }
    };
    let text = toml::to_string(&run.manifest).map_err(|e| HarnessError::Input(format!("manifest: {e}")))?;
    write_text(&run.out.join(MANIFEST), &text)?;
    Ok(RunOutcome { out_dir: run.out, manifest: run.manifest, error })
}

/// Separation, constants and the inequality suite for one system; writes
/// `constants_<role>.txt`.
pub fn certify_system(spec: &SystemSpec, depth: usize, samples: usize, seed: u64) -> Result<(CertifiedSystem, String, bool)> {
    let system = spec.build()?;
    let separation = match system.separation() {
        Separation::Strong => {
            let gap = strong_separation_gap(&system, GAP_DEPTH).map_err(HarnessError::at("separation"))?;
            format!("strong, gap constant {}", fmt_f64(gap.gap_constant))
        }
        Separation::Open(_) => "open".to_string(),
    };
    let constants = estimate_constants(&system, depth, seed).map_err(HarnessError::at("constants"))?;
    let separation = match system.separation() {
        Separation::Open(_) => {
            check_separation(&system, &constants, OPEN_SET_DEPTH).map_err(HarnessError::at("separation"))?;
            format!("open, exclusion verified to depth {OPEN_SET_DEPTH}")
        }
        Separation::Strong => separation,
    };
    let checks = check_inequalities(&system, &constants, depth, samples, seed);
    let passed = checks.iter().all(|c| c.passed());
    let text = certificate(&spec.name, &constants, &separation, &checks);
    Ok((CertifiedSystem { system, constants }, text, passed))
}

fn certify_role(run: &mut Run, role: &str, spec: &SystemSpec, scenario: &Scenario) -> Result<CertifiedSystem> {
    let s = &scenario.spec;
    let (cert, text, passed) = certify_system(spec, s.depth, s.samples, s.seed)?;
    let path = run.artifact(&format!("constants_{role}.txt"));
    write_text(&path, &text)?;
    let c = &cert.constants;
    run.manifest.systems.push(SystemSummary {
        role: role.to_string(),
        name: spec.name.clone(),
        maps: cert.system.n_maps(),
        dimension: c.dimension,
        lower: c.lower,
        upper: c.upper,
        distortion: c.distortion,
        checks_passed: passed,
    });
    if !passed {
        return Err(HarnessError::Check { stage: "inequalities", detail: format!("system `{}` violates a sampled inequality", spec.name) });
    }
    Ok(cert)
}

/// Names the failing stage from the error kind.
fn stage_of(mode: Mode, e: &Error) -> &'static str {
    match e {
        Error::DimensionMismatch { .. } => "dimension",
        Error::NotBilipschitz(_) => "oracle",
        _ => mode.name(),
    }
}

fn pipeline(scenario: &Scenario, run: &mut Run) -> Result<()> {
    let spec = &scenario.spec;
    let src = certify_role(run, "source", &scenario.source, scenario)?;
    if spec.mode == Mode::Constants {
        if let Some(t) = &scenario.target {
            certify_role(run, "target", t, scenario)?;
        }
        return Ok(());
    }
    let dst = certify_role(run, "target", scenario.target.as_ref().expect("validated"), scenario)?;
    let h = scenario.transducer.as_ref().expect("validated");
    let cfg = scenario.extension.as_ref().expect("validated");
    lipext_core::extension::dimension_gate(&src, &dst, cfg.tol_dim).map_err(HarnessError::at("dimension"))?;
    let mut cfg = cfg.clone();
    // the scenario gives epsilon relative to d(F)
    cfg.epsilon *= dst.system.diameter();
    let fail = |e: Error| HarnessError::Stage { stage: stage_of(spec.mode, &e), source: e };
    match spec.mode {
        Mode::Thm1 => {
            let r = thm1_construct(&src, &dst, &scenario.subset, h, &cfg).map_err(fail)?;
            run.manifest.lipschitz = Some(r.lipschitz);
            run.manifest.l_prime = Some(r.l_prime);
            let tables: Vec<MapTable> = r.stages.iter().map(|s| s.table.clone()).collect();
            let limit = finish_limit(run, &tables, &cfg.schedule, cfg.epsilon)?;
            let mut rows = Vec::new();
            for (idx, s) in r.stages.iter().enumerate() {
                rows.push(vec![
                    s.k.to_string(),
                    s.i.to_string(),
                    s.j.to_string(),
                    fmt_f64(s.d_i),
                    fmt_f64(s.e_j),
                    fmt_f64(s.table.bounds.low()),
                    fmt_f64(s.table.bounds.high()),
                    fmt_f64(sup_to_limit(&limit, idx)),
                    fmt_f64(s.density_gap),
                    fmt_f64(s.image_spread),
                ]);
            }
            let path = run.artifact("curves.csv");
            write_rows(&path, &["k", "i", "j", "d_i", "e_j", "l_low", "l_high", "sup_to_limit", "density_gap", "image_spread"], &rows)?;
            if !r.skipped.is_empty() {
                let path = run.artifact("skipped.txt");
                write_text(&path, &format!("{}\n", words_to_string(&r.skipped)))?;
            }
            let verdict = verify_map_table(&limit.table, None, cfg.epsilon, VerifyMode::Into);
            run.manifest.verdict = Some(format!("into: {}", if verdict.passed { "pass" } else { "fail" }));
            if !verdict.passed {
                return Err(HarnessError::Check { stage: "verify", detail: verdict.witnesses.join("; ") });
            }
        }
        Mode::Thm2 => {
            let r = thm2_construct(&src, &dst, &scenario.subset, h, &cfg).map_err(fail)?;
            run.manifest.lipschitz = Some(r.lipschitz);
            run.manifest.l_prime = Some(r.l_prime());
            run.manifest.m = Some(r.m());
            let tables: Vec<MapTable> = r.stages.iter().map(|s| s.table.clone()).collect();
            let limit = finish_limit(run, &tables, &cfg.schedule, cfg.epsilon)?;
            for (idx, s) in r.stages.iter().enumerate() {
                run.manifest.stages[idx].m_k = Some(s.report.m_k);
            }
            write_covers(run, &r)?;
            let keys: Vec<String> = r.target_net.words.iter().map(|w| w.to_string()).collect();
            let path = run.artifact("target_net.csv");
            write_net(&path, &keys, &r.target_net.points)?;
            let eps = 2.0 * r.target_net.threshold;
            let verdict = verify_map_table(&limit.table, Some(&r.target_net.points), eps, VerifyMode::Onto);
            run.manifest.verdict = Some(format!(
                "onto at epsilon {}: {} (gap {})",
                fmt_f64(eps),
                if verdict.passed { "pass" } else { "fail" },
                fmt_f64(verdict.onto_gap.unwrap_or(f64::NAN))
            ));
            if !verdict.passed {
                return Err(HarnessError::Check { stage: "verify", detail: verdict.witnesses.join("; ") });
            }
        }
        Mode::Constants => unreachable!(),
    }
    Ok(())
}

fn sup_to_limit(limit: &LimitReport, idx: usize) -> f64 {
    let last = *limit.selected.last().expect("non-empty selection");
    limit.sup_distances[idx][last]
}

/// Writes the stage tables and the limit, and fills the per-stage summary.
fn finish_limit(run: &mut Run, tables: &[MapTable], schedule: &[usize], eps: f64) -> Result<LimitReport> {
    for (t, k) in tables.iter().zip(schedule) {
        let path = run.artifact(&format!("tables/h_{k}.csv"));
        write_table(&path, t)?;
    }
    let limit = match extract_limit(tables, eps) {
        Ok(l) => l,
        Err(e) => {
            if let Error::NonConvergence(report) = &e {
                let rows: Vec<Vec<String>> = report.sup_distances.iter().map(|r| r.iter().map(|&v| fmt_f64(v)).collect()).collect();
                let header: Vec<String> = schedule.iter().map(|k| format!("k{k}")).collect();
                let header: Vec<&str> = header.iter().map(String::as_str).collect();
                let path = run.artifact("sup_distances.csv");
                write_rows(&path, &header, &rows)?;
            }
            return Err(HarnessError::at("limit")(e));
        }
    };
    let path = run.artifact("limit.csv");
    write_table(&path, &limit.table)?;
    run.manifest.k0 = limit.tail_start.map(|t| schedule[t]);
    run.manifest.limit_l_low = Some(limit.table.bounds.low());
    run.manifest.limit_l_high = Some(limit.table.bounds.high());
    run.manifest.stages = tables
        .iter()
        .zip(schedule)
        .enumerate()
        .map(|(idx, (t, &k))| StageSummary {
            k,
            l_low: t.bounds.low(),
            l_high: t.bounds.high(),
            sup_to_limit: Some(sup_to_limit(&limit, idx)),
            m_k: None,
        })
        .collect();
    Ok(limit)
}

fn write_covers(run: &mut Run, r: &Thm2Run) -> Result<()> {
    let mut text = String::new();
    for s in &r.stages {
        let c = &s.report;
        text.push_str(&format!("[k = {}]\n", c.k));
        text.push_str(&format!("i = ({})\nd_i = {}\n", c.i, fmt_f64(c.d_i)));
        text.push_str(&format!("threshold = {}\nsandwich = [{}, {}]\n", fmt_f64(c.cover.threshold), fmt_f64(c.cover.lower), fmt_f64(c.cover.upper)));
        text.push_str(&format!("m_k = {}\nm = {}\n", c.m_k, c.m));
        for ((w, d), (lo, hi)) in c.cover.words.iter().zip(&c.cover.diameters).zip(&c.cover.margins) {
            text.push_str(&format!("cover ({w}) d = {} margins {} {}\n", fmt_f64(*d), fmt_f64(*lo), fmt_f64(*hi)));
        }
        text.push_str(&format!("partition = {}\n", words_to_string(c.partition.words())));
        text.push_str(&format!("c2 = {}\nM1 = {}\nM2 = {}\n", fmt_f64(c.c2), fmt_f64(c.m1), fmt_f64(c.m2)));
        text.push_str(&format!("piece_bound = {}\ncross_bound = {}\n", fmt_f64(c.piece_bound), fmt_f64(c.cross_bound)));
        text.push_str(&format!("c3 = {}\nc4 = {}\nc5 = {}\n\n", fmt_f64(c.c3), fmt_f64(c.c4), fmt_f64(c.c5)));
    }
    let path = run.artifact("covers.txt");
    write_text(&path, &text)
}
