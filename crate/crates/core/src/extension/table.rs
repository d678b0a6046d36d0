use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::geometry::{distance, Point};
use crate::tolerance::TOL_GEOM;

/// Extremes of `|u - v| / |x - y|` over pairs of a finite map.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioBounds {
    pub min_ratio: f64,
    pub max_ratio: f64,
}

impl RatioBounds {
    /// Brute force over all pairs with distinct sources.
    pub fn from_pairs(sources: &[Point], images: &[Point]) -> Result<Self> {
        let mut lo = f64::INFINITY;
        let mut hi = 0.0f64;
        for i in 0..sources.len() {
            for j in i + 1..sources.len() {
                let dx = distance(&sources[i], &sources[j]);
                let du = distance(&images[i], &images[j]);
                if dx == 0.0 {
                    if du > 0.0 {
                        return Err(Error::NotBilipschitz(alloc::format!("source point {:?} has two images", sources[i])));
                    }
                    continue;
                }
                let r = du / dx;
                lo = lo.min(r);
                hi = hi.max(r);
            }
        }
        if hi == 0.0 && lo.is_infinite() {
            return Err(Error::Degenerate);
        }
        Ok(RatioBounds { min_ratio: lo, max_ratio: hi })
    }

    /// `L_low`: the smallest distance ratio.
    pub fn low(&self) -> f64 {
        self.min_ratio
    }

    /// `L_high`: the least `L` with every ratio in `[1/L, L]`.
    pub fn high(&self) -> f64 {
        libm::fmax(self.max_ratio, 1.0 / self.min_ratio)
    }

    pub fn admits(&self, ratio: f64) -> bool {
        let l = self.high();
        ratio * l >= 1.0 - TOL_GEOM && ratio <= l * (1.0 + TOL_GEOM)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TableEntry {
    /// Canonical source address.
    pub key: String,
    pub source: Point,
    pub image: Point,
}

/// A finite map on a net with its empirical bilipschitz bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct MapTable {
    pub entries: Vec<TableEntry>,
    /// Density of the net in its domain.
    pub mesh: f64,
    pub bounds: RatioBounds,
    pub provenance: String,
}

impl MapTable {
    pub fn new(mut entries: Vec<TableEntry>, mesh: f64, provenance: impl Into<String>) -> Result<Self> {
        if !(mesh > 0.0) {
            return Err(Error::Config("net mesh must be positive".to_string()));
        }
        entries.sort_by(|a, b| a.key.cmp(&b.key));
        if let Some(p) = entries.windows(2).find(|p| p[0].key == p[1].key) {
            return Err(Error::Config(alloc::format!("duplicate table key {}", p[0].key)));
        }
        let sources: Vec<Point> = entries.iter().map(|e| e.source.clone()).collect();
        let images: Vec<Point> = entries.iter().map(|e| e.image.clone()).collect();
        let bounds = RatioBounds::from_pairs(&sources, &images)?;
        Ok(MapTable { entries, mesh, bounds, provenance: provenance.into() })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, key: &str) -> Option<&TableEntry> {
        self.entries.binary_search_by(|e| e.key.as_str().cmp(key)).ok().map(|i| &self.entries[i])
    }

    pub fn images(&self) -> Vec<Point> {
        self.entries.iter().map(|e| e.image.clone()).collect()
    }

    pub fn sources(&self) -> Vec<Point> {
        self.entries.iter().map(|e| e.source.clone()).collect()
    }

    /// The table on the given keys only (those present).
    pub fn restrict(&self, keys: &[&str]) -> Result<MapTable> {
        let entries = self.entries.iter().filter(|e| keys.contains(&e.key.as_str())).cloned().collect();
        MapTable::new(entries, self.mesh, self.provenance.clone())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifyMode {
    Into,
    Onto,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub mode: VerifyMode,
    pub passed: bool,
    /// Bounds recomputed from the entries.
    pub bounds: RatioBounds,
    /// Pairs whose ratio falls outside the stored bounds.
    pub ratio_violations: usize,
    /// Largest distance from a target point to the image, in onto mode.
    pub onto_gap: Option<f64>,
    pub witnesses: Vec<String>,
}

/// Re-checks the stored ratio invariant and, in onto mode, that every target
/// point lies within `epsilon` of an image point.
pub fn verify_map_table(table: &MapTable, target: Option<&[Point]>, epsilon: f64, mode: VerifyMode) -> Verdict {
    let mut witnesses = Vec::new();
    let mut ratio_violations = 0;
    let mut lo = f64::INFINITY;
    let mut hi = 0.0f64;
    let e = &table.entries;
    for i in 0..e.len() {
        for j in i + 1..e.len() {
            let dx = distance(&e[i].source, &e[j].source);
            if dx == 0.0 {
                continue;
            }
            let r = distance(&e[i].image, &e[j].image) / dx;
            lo = lo.min(r);
            hi = hi.max(r);
            if !table.bounds.admits(r) {
                ratio_violations += 1;
                if witnesses.len() < 8 {
                    witnesses.push(alloc::format!("pair {} / {}: ratio {r}", e[i].key, e[j].key));
                }
            }
        }
    }
    let bounds = RatioBounds { min_ratio: lo, max_ratio: hi };
    let consistent = table.bounds.min_ratio <= table.bounds.high() && lo.is_finite();
    let mut passed = ratio_violations == 0 && consistent;
    let mut onto_gap = None;
    if mode == VerifyMode::Onto {
        let target = target.unwrap_or(&[]);
        let mut gap = 0.0f64;
        let mut far: Option<&Point> = None;
        for y in target {
            let d = e.iter().map(|t| distance(&t.image, y)).fold(f64::INFINITY, f64::min);
            if d > gap {
                gap = d;
                far = Some(y);
            }
        }
        onto_gap = Some(gap);
        if target.is_empty() || !(gap <= epsilon) {
            passed = false;
            match far {
                Some(y) => witnesses.push(alloc::format!("target point {y:?} is {gap} from the image")),
                None => witnesses.push("no target points".to_string()),
            }
        }
    }
    Verdict { mode, passed, bounds, ratio_violations, onto_gap, witnesses }
}
