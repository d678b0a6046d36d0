//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
//! failure.

use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use lipext::config::{load_system, Scenario};
use lipext::{certify_system, run_scenario, Overrides};
use lipext_core::extension::{
    certify_transducer, extract_limit, thm1_construct, transducer_bilip_estimate, verify_map_table, CertifiedSystem,
    MapTable, VerifyMode,
};
use lipext_core::ifs::{check_inequalities, check_separation, estimate_constants, exclusion_holds};
use lipext_core::measure::moran_dimension;
use lipext_core::onto::thm2_construct;
use lipext_core::symbolic::{binary_partition, fixed_point};
use lipext_core::{IfsSystem, SymbolicSubset, Word};
use num_rational::Ratio;

type Q = Ratio<i128>;
type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn system(name: &str) -> IfsSystem {
    load_system(&root().join(format!("systems/{name}.toml"))).unwrap().build().unwrap()
}

fn scenario(name: &str) -> Scenario {
    Scenario::load(&root().join(format!("scenarios/{name}.toml"))).unwrap()
}

fn certified(s: &Scenario) -> (CertifiedSystem, CertifiedSystem) {
    let d = s.spec.depth;
    let src = certify_system(&s.source, d, s.spec.samples, s.spec.seed).unwrap().0;
    let dst = certify_system(s.target.as_ref().unwrap(), d, s.spec.samples, s.spec.seed).unwrap().0;
    (src, dst)
}

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn timed<T>(limit: Duration, f: impl FnOnce() -> T) -> Result<(T, Duration), String> {
    let t = Instant::now();
    let v = f();
    let e = t.elapsed();
    ensure(e < limit, format!("took {e:?}, limit {limit:?}"))?;
    Ok((v, e))
}

fn criterion_1() -> Outcome {
    let second = Duration::from_secs(1);
    let (cantor, t1) = timed(second, || moran_dimension(&system("cantor"), 1).unwrap().s)?;
    let exact = 2f64.ln() / 3f64.ln();
    ensure((cantor - exact).abs() < 1e-9, format!("cantor {cantor} vs {exact}"))?;
    let (dyadic, t2) = timed(second, || moran_dimension(&system("dyadic"), 1).unwrap().s)?;
    ensure((dyadic - 1.0).abs() < 1e-12, format!("dyadic {dyadic}"))?;
    let (golden, t3) = timed(second, || moran_dimension(&system("golden"), 1).unwrap().s)?;
    // 2^{-s} = (sqrt 5 - 1) / 2
    let closed = -((5f64.sqrt() - 1.0) / 2.0).ln() / 2f64.ln();
    ensure((golden - closed).abs() < 1e-9, format!("golden {golden} vs {closed}"))?;
    Ok(format!(
        "s = {cantor:.12} / {dyadic:.12} / {golden:.12} in {:?}",
        t1.max(t2).max(t3)
    ))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    for name in ["cantor", "dyadic", "moebius"] {
        let s = system(name);
        let constants = estimate_constants(&s, 10, 7).map_err(|e| format!("{name}: {e}"))?;
        for c in check_inequalities(&s, &constants, 10, 1000, 7) {
            ensure(c.checked >= 1000, format!("{name}: {} has {} samples", c.name, c.checked))?;
            ensure(c.passed(), format!("{name}: {} violated: {:?}", c.name, c.witness))?;
        }
    }
    let e = start.elapsed();
    ensure(e < Duration::from_secs(30), format!("took {e:?}"))?;
    Ok(format!("3 systems, every check >= 1000 samples, no violations, {e:?}"))
}

/// Distance from the fixed point of `f_w` to `E \ E_w` on the Cantor set,
/// in exact rationals, compared with `d_w / 3`.
fn cantor_exclusion_exact(word: &[u16]) -> bool {
    let third = Q::new(1, 3);
    let size = |n: usize| (0..n).fold(Q::from_integer(1), |a, _| a * third);
    let left = |u: &[u16]| u.iter().enumerate().fold(Q::from_integer(0), |a, (i, &s)| a + size(i + 1) * Q::from_integer(2 * (s as i128 - 1)));
    let x = left(word) / (Q::from_integer(1) - size(word.len()));
    let radius = third * size(word.len());
    (0..word.len()).all(|k| {
        let mut sib = word[..k].to_vec();
        sib.push(3 - word[k]);
        let a = left(&sib);
        let b = a + size(k + 1);
        let gap = if x < a { a - x } else { x - b };
        gap >= radius
    })
}

fn criterion_3() -> Outcome {
    let e = system("cantor");
    let mut words = 0;
    for k in 1..=8 {
        for w in Word::all_of_length(2, k) {
            ensure(cantor_exclusion_exact(w.symbols()), format!("exact exclusion fails at ({w})"))?;
            let x = fixed_point(&e, &w).map_err(|e| e.to_string())?;
            ensure(exclusion_holds(&e, &w, &x, e.diameter_of(&w) / 3.0 * (1.0 - 1e-9)), format!("library exclusion fails at ({w})"))?;
            words += 1;
        }
    }
    let d = system("dyadic");
    let constants = estimate_constants(&d, 10, 7).map_err(|e| e.to_string())?;
    let report = check_separation(&d, &constants, 8).map_err(|e| e.to_string())?;
    // exact: E_w = [a, a + 2^-k] and E \ E_w lies outside it, so the ball
    // about f_w(1/2) = a + 2^-(k+1) of radius c d_w r0 must stay inside E_w
    let c = constants.lower;
    let scale = (1i128 << 60) as f64;
    ensure((c * scale).fract() == 0.0, "c is not a multiple of 2^-60")?;
    let c = Q::new((c * scale) as i128, 1 << 60);
    for k in 0..=8usize {
        for w in Word::all_of_length(2, k) {
            let a = w.symbols().iter().enumerate().fold(Q::from_integer(0), |acc, (i, &s)| acc + Q::new(s as i128 - 1, 1 << (i + 1)));
            let size = Q::new(1, 1 << k);
            let centre = a + size / 2;
            let r = c * size / 2;
            ensure(centre - r >= a && centre + r <= a + size, format!("dyadic exclusion fails at ({w})"))?;
        }
    }
    Ok(format!("cantor b = 1/3 at {words} fixed points; dyadic {report:?}"))
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let s = scenario("pair_grouping");
    let (src, dst) = certified(&s);
    let mut cfg = s.extension.clone().unwrap();
    cfg.epsilon *= dst.system.diameter();
    let run = thm1_construct(&src, &dst, &s.subset, s.transducer.as_ref().unwrap(), &cfg).map_err(|e| e.to_string())?;
    let highs: Vec<f64> = run.stages.iter().map(|st| st.table.bounds.high()).collect();
    let (lo, hi) = highs.iter().fold((f64::INFINITY, 0.0f64), |a, &v| (a.0.min(v), a.1.max(v)));
    ensure(hi <= 1.1 * lo, format!("stage constants spread: {highs:?}"))?;
    let gaps: Vec<f64> = run.stages.iter().map(|st| st.density_gap).collect();
    ensure(gaps.windows(2).all(|p| p[1] <= p[0]), format!("density gap not monotone: {gaps:?}"))?;
    ensure(*gaps.last().unwrap() < run.mesh, format!("density gap {gaps:?} above mesh {}", run.mesh))?;
    let tables: Vec<MapTable> = run.stages.iter().map(|st| st.table.clone()).collect();
    let limit = extract_limit(&tables, 0.01 * dst.system.diameter()).map_err(|e| e.to_string())?;
    ensure(verify_map_table(&limit.table, None, 0.0, VerifyMode::Into).passed, "limit fails into verification")?;

    let id = scenario("cantor_identity");
    let (a, b) = certified(&id);
    let idrun = thm1_construct(&a, &b, &id.subset, id.transducer.as_ref().unwrap(), id.extension.as_ref().unwrap())
        .map_err(|e| e.to_string())?;
    for st in &idrun.stages {
        let bounds = (st.table.bounds.min_ratio, st.table.bounds.max_ratio);
        ensure(bounds == (1.0, 1.0), format!("identity stage {} has {bounds:?}", st.k))?;
    }
    let e = start.elapsed();
    ensure(e < Duration::from_secs(120), format!("took {e:?}"))?;
    Ok(format!(
        "L_high in [{lo:.9}, {hi:.9}] over k = {:?}, density gap {:?}, K0 index {:?}, identity (1,1), {e:?}",
        cfg.schedule,
        gaps.last().unwrap(),
        limit.tail_start
    ))
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let s = scenario("grouping_inverse");
    let (src, dst) = certified(&s);
    let h = s.transducer.as_ref().unwrap();
    let mut cfg = s.extension.clone().unwrap();
    cfg.epsilon *= dst.system.diameter();
    let run = thm2_construct(&src, &dst, &s.subset, h, &cfg).map_err(|e| e.to_string())?;
    for st in &run.stages {
        let r = &st.report;
        let margins = &r.cover.margins;
        ensure(margins.iter().all(|&(a, b)| a > 0.0 && b > 0.0), format!("k = {}: sandwich margins {margins:?}", r.k))?;
        let pieces = binary_partition(&dst.system, r.m_k).map_err(|e| e.to_string())?;
        ensure(pieces.antichain.len() == r.m_k && r.partition.len() == r.m_k, format!("k = {}: partition size", r.k))?;
    }
    let mut longer = cfg.clone();
    let last = *cfg.schedule.last().unwrap();
    longer.schedule.extend([last + 1, last + 2]);
    let extended = thm2_construct(&src, &dst, &s.subset, h, &longer).map_err(|e| e.to_string())?;
    ensure(extended.m() == run.m(), format!("m = {} grows to {} when extended", run.m(), extended.m()))?;
    let tables: Vec<MapTable> = run.stages.iter().map(|st| st.table.clone()).collect();
    let limit = extract_limit(&tables, cfg.epsilon).map_err(|e| e.to_string())?;
    let eps = 2.0 * run.target_net.threshold;
    let verdict = verify_map_table(&limit.table, Some(&run.target_net.points), eps, VerifyMode::Onto);
    ensure(verdict.passed, format!("onto verification failed: {:?}", verdict.witnesses))?;
    let e = start.elapsed();
    ensure(e < Duration::from_secs(180), format!("took {e:?}"))?;
    Ok(format!("m = {} for k <= {}, onto gap {:?} <= {eps:.3e}, {e:?}", run.m(), last + 2, verdict.onto_gap.unwrap()))
}

fn criterion_6() -> Outcome {
    let whole = SymbolicSubset::whole();
    let cases = [
        ("identity", "cantor", "cantor"),
        ("swap", "cantor", "cantor"),
        ("pair_grouping", "cantor", "cantor_four"),
        ("grouping_inverse", "cantor_four", "cantor"),
    ];
    let mut notes = Vec::new();
    for (t, e, f) in cases {
        let text = std::fs::read_to_string(root().join(format!("transducers/{t}.txt"))).unwrap();
        let h = lipext::transducer_file::parse_transducer(&text, whole.clone()).map_err(|e| e.to_string())?;
        let (e, f) = (system(e), system(f));
        let at = transducer_bilip_estimate(&h, &e, &f, 8).map_err(|e| e.to_string())?;
        let deeper = transducer_bilip_estimate(&h, &e, &f, 10).map_err(|e| e.to_string())?;
        let (a, b) = (at.high(), deeper.high());
        ensure((b / a - 1.0).abs() <= 0.1, format!("{t}: {a} vs {b}"))?;
        notes.push(format!("{t} {a:.6}"));
        if t == "pair_grouping" {
            ensure((at.low() - 1.0).abs() < 1e-9 && (at.high() - 1.0).abs() < 1e-9, format!("pair grouping {at:?}"))?;
        }
    }
    Ok(format!("L_high at 8 and 10 agree: {}", notes.join(", ")))
}

fn criterion_7() -> Outcome {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    for (name, stage) in [("dimension_mismatch", "dimension"), ("dyadic_strong", "separation"), ("collapse", "oracle")] {
        let o = run_scenario(&root().join(format!("scenarios/{name}.toml")), &Overrides { out: Some(tmp.path().join(name)), ..Default::default() })
            .map_err(|e| e.to_string())?;
        ensure(o.exit_code() == 1, format!("{name} exits {}", o.exit_code()))?;
        ensure(o.manifest.failed_stage.as_deref() == Some(stage), format!("{name} fails at {:?}", o.manifest.failed_stage))?;
    }
    let text = std::fs::read_to_string(root().join("transducers/collapse.txt")).unwrap();
    let h = lipext::transducer_file::parse_transducer(&text, SymbolicSubset::whole()).map_err(|e| e.to_string())?;
    let e = system("cantor");
    let a = transducer_bilip_estimate(&h, &e, &e, 8).map_err(|e| e.to_string())?.high();
    let b = transducer_bilip_estimate(&h, &e, &e, 10).map_err(|e| e.to_string())?.high();
    ensure(b / a > 2.0, format!("collapse growth {}", b / a))?;
    ensure(certify_transducer(&h, &e, &e, 8).is_err(), "collapse certified")?;
    Ok(format!("gate, separation and oracle reject; collapse L_high {a:.1} -> {b:.1}"))
}

fn criterion_8() -> Outcome {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut files = 0;
    let mut names: Vec<String> = std::fs::read_dir(root().join("scenarios"))
        .map_err(|e| e.to_string())?
        .map(|e| e.unwrap().path().file_stem().unwrap().to_string_lossy().into_owned())
        .collect();
    names.sort();
    for name in &names {
        let path = root().join(format!("scenarios/{name}.toml"));
        let a = run_scenario(&path, &Overrides { out: Some(tmp.path().join(format!("{name}_a"))), ..Default::default() }).map_err(|e| e.to_string())?;
        let b = run_scenario(&path, &Overrides { out: Some(tmp.path().join(format!("{name}_b"))), ..Default::default() }).map_err(|e| e.to_string())?;
        ensure(a.manifest.artifacts == b.manifest.artifacts, format!("{name}: artifact lists differ"))?;
        for f in a.manifest.artifacts.iter().filter(|f| f.ends_with(".csv")) {
            let (x, y) = (std::fs::read(a.out_dir.join(f)).unwrap(), std::fs::read(b.out_dir.join(f)).unwrap());
            ensure(x == y, format!("{name}: {f} differs"))?;
            files += 1;
        }
    }
    Ok(format!("{} scenarios, {files} CSV files byte-identical", names.len()))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("dimension", criterion_1),
        ("inequality suite", criterion_2),
        ("exclusion balls", criterion_3),
        ("into extension", criterion_4),
        ("onto extension", criterion_5),
        ("oracle equivalence", criterion_6),
        ("negative controls", criterion_7),
        ("determinism", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("criterion {} ({name}): PASS  {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} ({name}): FAIL  {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
