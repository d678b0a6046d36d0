//! Scenario and system files.
//!
//! Both are TOML. Every real number is a string holding an integer or a
//! rational `"p/q"`, so that `1/3` is read without decimal loss.
//!
//! A system file:
//!
//! ```toml
//! name = "cantor"
//! separation = "strong"          # or "open", which needs [open_set]
//!
//! [[maps]]
//! ratio = "1/3"
//! translation = ["0"]
//!
//! [[maps]]
//! moebius = ["0", "2", "-1", "3"]  # x -> (a x + b) / (c x + d)
//!
//! [domain]                         # optional closed ball holding the maps
//! center = ["1/2"]
//! radius = "3/4"
//!
//! [open_set]                       # open ball O with x0 and r0
//! center = ["1/2"]
//! radius = "1/2"
//! x0 = ["1/2"]
//! r0 = "1/2"
//! ```
//!
//! A scenario file names two systems (paths relative to the scenario, or
//! inline tables), the subset `E'`, a transducer and the construction
//! parameters; see the shipped `scenarios/` directory.

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use lipext_core::{AddressTransducer, Ball, ConformalMap, ExtensionConfig, IfsSystem, OpenSetWitness, Separation, SymbolicSubset, Word};
use num_rational::Ratio;
use num_traits::ToPrimitive;
use serde::Deserialize;

use crate::error::{HarnessError, Result};
use crate::transducer_file::parse_transducer;

/// Parses `"p/q"` or `"p"` exactly and rounds once to `f64`.
pub fn parse_rational(s: &str) -> Result<f64> {
    let q = Ratio::<i128>::from_str(s.trim()).map_err(|e| HarnessError::Input(format!("bad rational `{s}`: {e}")))?;
    q.to_f64().ok_or_else(|| HarnessError::Input(format!("rational `{s}` out of range")))
}

fn parse_all(v: &[String]) -> Result<Vec<f64>> {
    v.iter().map(|s| parse_rational(s)).collect()
}

fn parse_word(s: &str) -> Result<Word> {
    Word::from_str(s.trim()).map_err(|e| HarnessError::Input(format!("bad word `{s}`: {e}")))
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapSpec {
    pub ratio: Option<String>,
    pub translation: Option<Vec<String>>,
    /// Orthogonal part, row-major; identity when absent.
    pub orthogonal: Option<Vec<String>>,
    /// One-dimensional shortcut for `orthogonal = ["-1"]`.
    #[serde(default)]
    pub reflect: bool,
    pub moebius: Option<[String; 4]>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BallSpec {
    pub center: Vec<String>,
    pub radius: String,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OpenSetSpec {
    pub center: Vec<String>,
    pub radius: String,
    pub x0: Vec<String>,
    pub r0: String,
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum SeparationKind {
    Strong,
    Open,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSpec {
    pub name: String,
    pub separation: SeparationKind,
    pub maps: Vec<MapSpec>,
    pub domain: Option<BallSpec>,
    pub open_set: Option<OpenSetSpec>,
}

fn ball(spec: &BallSpec) -> Result<Ball> {
    Ok(Ball::new(parse_all(&spec.center)?, parse_rational(&spec.radius)?))
}

impl MapSpec {
    fn build(&self) -> Result<ConformalMap> {
        let core = |e: lipext_core::Error| HarnessError::Input(format!("invalid map: {e}"));
        match (&self.ratio, &self.moebius) {
            (Some(r), None) => {
                let ratio = parse_rational(r)?;
                let t = parse_all(self.translation.as_deref().unwrap_or_default())?;
                if t.is_empty() {
                    return Err(HarnessError::Input("similarity needs a translation".into()));
                }
                let orthogonal = match (&self.orthogonal, self.reflect) {
                    (Some(_), true) => return Err(HarnessError::Input("give either `orthogonal` or `reflect`".into())),
                    (Some(o), false) => parse_all(o)?,
                    (None, reflect) if t.len() == 1 => vec![if reflect { -1.0 } else { 1.0 }],
                    (None, false) => {
                        let n = t.len();
                        (0..n * n).map(|i| if i % (n + 1) == 0 { 1.0 } else { 0.0 }).collect()
                    }
                    (None, true) => return Err(HarnessError::Input("`reflect` is one-dimensional".into())),
                };
                ConformalMap::similarity(ratio, orthogonal, t).map_err(core)
            }
            (None, Some(m)) => {
                if self.translation.is_some() || self.orthogonal.is_some() || self.reflect {
                    return Err(HarnessError::Input("Möbius maps take only `moebius`".into()));
                }
                let [a, b, c, d] = [0, 1, 2, 3].map(|i| parse_rational(&m[i]));
                ConformalMap::moebius(a?, b?, c?, d?).map_err(core)
            }
            _ => Err(HarnessError::Input("each map needs exactly one of `ratio` or `moebius`".into())),
        }
    }
}

impl SystemSpec {
    pub fn build(&self) -> Result<IfsSystem> {
        let maps = self.maps.iter().map(MapSpec::build).collect::<Result<Vec<_>>>()?;
        let separation = match (self.separation, &self.open_set) {
            (SeparationKind::Strong, None) => Separation::Strong,
            (SeparationKind::Open, Some(o)) => Separation::Open(OpenSetWitness {
                open: ball(&BallSpec { center: o.center.clone(), radius: o.radius.clone() })?,
                x0: parse_all(&o.x0)?,
                r0: parse_rational(&o.r0)?,
            }),
            (SeparationKind::Strong, Some(_)) => return Err(HarnessError::Input("`open_set` given with strong separation".into())),
            (SeparationKind::Open, None) => return Err(HarnessError::Input("open separation needs `open_set`".into())),
        };
        let domain = self.domain.as_ref().map(ball).transpose()?;
        IfsSystem::new(maps, separation, domain).map_err(|e| HarnessError::Input(format!("system `{}`: {e}", self.name)))
    }
}

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(HarnessError::io(path))
}

fn from_toml<T: for<'de> Deserialize<'de>>(text: &str, path: &Path) -> Result<T> {
    toml::from_str(text).map_err(|e| HarnessError::Input(format!("{}: {e}", path.display())))
}

pub fn load_system(path: &Path) -> Result<SystemSpec> {
    from_toml(&read_text(path)?, path)
}

/// A system given by path or inline.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum SystemRef {
    Path(String),
    Inline(SystemSpec),
}

/// A transducer given by file or by one of the built-in families.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum TransducerRef {
    Path(String),
    Builtin(BuiltinTransducer),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BuiltinTransducer {
    /// `identity`, `permutation`, `grouping` or `ungrouping`.
    pub builtin: String,
    /// Alphabet size `n` for identity, grouping and ungrouping.
    pub n: Option<usize>,
    pub permutation: Option<Vec<u16>>,
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Thm1,
    Thm2,
    Constants,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Thm1 => "thm1",
            Mode::Thm2 => "thm2",
            Mode::Constants => "constants",
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtensionSpec {
    pub schedule: Vec<usize>,
    /// Cauchy tolerance relative to `d(F)`.
    pub epsilon: String,
    pub ball_constant: Option<String>,
    /// Period of the density point, e.g. `"1,2"`.
    pub witness: String,
    #[serde(default = "default_oracle_level")]
    pub oracle_level: usize,
    pub tol_dim: Option<String>,
}

fn default_oracle_level() -> usize {
    8
}

fn default_depth() -> usize {
    10
}

fn default_samples() -> usize {
    1000
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSpec {
    pub name: String,
    pub mode: Mode,
    #[serde(default)]
    pub seed: u64,
    /// Sampling depth of the constants and information level of the nets.
    #[serde(default = "default_depth")]
    pub depth: usize,
    /// Sampled pairs per inequality.
    #[serde(default = "default_samples")]
    pub samples: usize,
    pub source: SystemRef,
    pub target: Option<SystemRef>,
    /// Words of `E'`; the whole attractor when empty.
    #[serde(default)]
    pub subset: Vec<String>,
    pub transducer: Option<TransducerRef>,
    pub declared_lipschitz: Option<String>,
    pub extension: Option<ExtensionSpec>,
}

/// A parsed scenario with every file it references resolved.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub spec: ScenarioSpec,
    pub source: SystemSpec,
    pub target: Option<SystemSpec>,
    pub subset: SymbolicSubset,
    pub transducer: Option<AddressTransducer>,
    pub extension: Option<ExtensionConfig>,
}

fn resolve(base: &Path, r: &SystemRef) -> Result<SystemSpec> {
    match r {
        SystemRef::Path(p) => load_system(&base.join(p)),
        SystemRef::Inline(s) => Ok(s.clone()),
    }
}

fn builtin(b: &BuiltinTransducer, domain: SymbolicSubset) -> Result<AddressTransducer> {
    let n = || b.n.ok_or_else(|| HarnessError::Input(format!("builtin `{}` needs `n`", b.builtin)));
    let built = match b.builtin.as_str() {
        "identity" => AddressTransducer::identity(n()?, domain),
        "grouping" => AddressTransducer::grouping(n()?, domain),
        "ungrouping" => AddressTransducer::ungrouping(n()?, domain),
        "permutation" => {
            let p = b.permutation.as_ref().ok_or_else(|| HarnessError::Input("builtin `permutation` needs `permutation`".into()))?;
            AddressTransducer::permutation(p, domain)
        }
        other => return Err(HarnessError::Input(format!("unknown builtin transducer `{other}`"))),
    };
    built.map_err(|e| HarnessError::Input(format!("transducer: {e}")))
}

impl Scenario {
    /// Reads and validates a scenario. Every failure is an input error.
    pub fn load(path: &Path) -> Result<Scenario> {
        let spec: ScenarioSpec = from_toml(&read_text(path)?, path)?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_else(|| PathBuf::from("."));
        Scenario::from_spec(spec, &base)
    }

    pub fn from_spec(spec: ScenarioSpec, base: &Path) -> Result<Scenario> {
        let source = resolve(base, &spec.source)?;
        let target = spec.target.as_ref().map(|t| resolve(base, t)).transpose()?;
        let words = spec.subset.iter().map(|s| parse_word(s)).collect::<Result<Vec<_>>>()?;
        let subset = if words.is_empty() {
            SymbolicSubset::whole()
        } else {
            SymbolicSubset::new(words).map_err(|e| HarnessError::Input(format!("subset: {e}")))?
        };
        subset
            .validate(source.maps.len())
            .map_err(|_| HarnessError::Input("subset uses symbols outside the source alphabet".into()))?;
        if spec.depth < 4 {
            return Err(HarnessError::Input("depth must be at least 4".into()));
        }
        let needs_pipeline = spec.mode != Mode::Constants;
        if needs_pipeline && (target.is_none() || spec.transducer.is_none() || spec.extension.is_none()) {
            return Err(HarnessError::Input(format!("mode `{}` needs `target`, `transducer` and `[extension]`", spec.mode.name())));
        }
        let transducer = match &spec.transducer {
            None => None,
            Some(TransducerRef::Builtin(b)) => Some(builtin(b, subset.clone())?),
            Some(TransducerRef::Path(p)) => {
                let file = base.join(p);
                Some(parse_transducer(&read_text(&file)?, subset.clone()).map_err(|e| match e {
                    HarnessError::Input(m) => HarnessError::Input(format!("{}: {m}", file.display())),
                    other => other,
                })?)
            }
        };
        let transducer = match (transducer, &spec.declared_lipschitz) {
            (Some(t), Some(l)) => Some(t.with_declared(parse_rational(l)?)),
            (t, _) => t,
        };
        if let (Some(t), Some(f)) = (&transducer, &target) {
            if t.source_symbols() != source.maps.len() || t.target_symbols() != f.maps.len() {
                return Err(HarnessError::Input("transducer alphabets do not match the systems".into()));
            }
        }
        let extension = match &spec.extension {
            None => None,
            Some(x) => {
                let cfg = ExtensionConfig {
                    schedule: x.schedule.clone(),
                    net_level: spec.depth,
                    epsilon: parse_rational(&x.epsilon)?,
                    ball_constant: x.ball_constant.as_deref().map(parse_rational).transpose()?,
                    witness: parse_word(&x.witness)?,
                    oracle_level: x.oracle_level,
                    tol_dim: match &x.tol_dim {
                        Some(t) => parse_rational(t)?,
                        None => lipext_core::tolerance::TOL_DIM,
                    },
                };
                cfg.validate().map_err(|e| HarnessError::Input(format!("[extension]: {e}")))?;
                Some(cfg)
            }
        };
        Ok(Scenario { spec, source, target, subset, transducer, extension })
    }

    pub fn with_depth(mut self, depth: usize) -> Result<Scenario> {
        if depth < 4 {
            return Err(HarnessError::Input("depth must be at least 4".into()));
        }
        self.spec.depth = depth;
        if let Some(cfg) = &mut self.extension {
            cfg.net_level = depth;
        }
        Ok(self)
    }
}
