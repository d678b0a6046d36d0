use alloc::string::ToString;
use alloc::vec::Vec;

use super::cover::{cover_image, symbolic_cover, Cover};
use crate::error::{Error, Result};
use crate::extension::{certify_transducer, dimension_gate, AddressTransducer, CertifiedSystem, ExtensionConfig, MapTable, RatioBounds, TableEntry};
use crate::extension::{check_domain_inside, witness_address};
use crate::geometry::Point;
use crate::ifs::{set_distance, IfsSystem};
use crate::symbolic::{binary_partition, moran_threshold, net_below, Address, Antichain, Net, SymbolicSubset, Word};
use crate::tolerance::{le_rel, TOL_GEOM};

#[derive(Debug, Clone, PartialEq)]
pub struct CoverReport {
    pub k: usize,
    pub i: Word,
    pub d_i: f64,
    pub cover: Cover,
    pub m_k: usize,
    /// Largest `m_k` so far along the schedule.
    pub m: usize,
    pub partition: Antichain,
    /// Smallest partition piece diameter.
    pub c2: f64,
    /// Smallest gap between partition pieces.
    pub m1: f64,
    /// Smallest gap between cover cylinders, over `d_i`.
    pub m2: f64,
    /// Ratio bound for pairs routed through one piece.
    pub piece_bound: f64,
    /// Ratio bound for pairs routed through different pieces.
    pub cross_bound: f64,
    pub c3: f64,
    pub c4: f64,
    pub c5: f64,
}

impl CoverReport {
    /// Certified bilipschitz bound of the stage table.
    pub fn bound(&self) -> f64 {
        if self.m_k > 1 {
            libm::fmax(self.piece_bound, self.cross_bound)
        } else {
            self.piece_bound
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Thm2Stage {
    pub report: CoverReport,
    pub table: MapTable,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Thm2Run {
    pub s_src: f64,
    pub s_dst: f64,
    pub oracle: (RatioBounds, RatioBounds),
    pub lipschitz: f64,
    pub mesh: f64,
    /// Net of the target at the same information level.
    pub target_net: Net,
    pub stages: Vec<Thm2Stage>,
}

impl Thm2Run {
    /// `m = max_k m_k`.
    pub fn m(&self) -> usize {
        self.stages.iter().map(|s| s.report.m_k).max().unwrap_or(0)
    }

    /// `L' = max_k` of the certified stage bounds.
    pub fn l_prime(&self) -> f64 {
        self.stages.iter().map(|s| s.report.bound()).fold(0.0, f64::max)
    }
}

fn min_gap(system: &IfsSystem, words: &[Word]) -> f64 {
    let mut gap = f64::INFINITY;
    for a in 0..words.len() {
        for b in a + 1..words.len() {
            gap = gap.min(set_distance(system, &words[a], &words[b]).0);
        }
    }
    gap
}

/// Builds onto tables `h_k` for a target with two maps under strong
/// separation. `E_{i_k}` is the length-`k` prefix of the witness address.
pub fn thm2_construct(
    src: &CertifiedSystem,
    dst: &CertifiedSystem,
    domain: &SymbolicSubset,
    h: &AddressTransducer,
    cfg: &ExtensionConfig,
) -> Result<Thm2Run> {
    cfg.validate()?;
    let (e, f) = (&src.system, &dst.system);
    if f.n_maps() != 2 {
        return Err(Error::Unsupported(alloc::format!(
            "onto extension needs a two-map target, got {} maps",
            f.n_maps()
        )));
    }
    if !f.separation().is_strong() || !e.separation().is_strong() {
        return Err(Error::Config("onto extension needs strong separation on both systems".to_string()));
    }
    domain.validate(e.n_maps())?;
    check_domain_inside(domain, h)?;
    let (s_src, s_dst) = dimension_gate(src, dst, cfg.tol_dim)?;
    let oracle = certify_transducer(h, e, f, cfg.oracle_level)?;
    let l = libm::fmax(oracle.0.high(), oracle.1.high());
    let x = witness_address(domain, &cfg.witness)?;

    let c = libm::fmin(src.constants.lower, dst.constants.lower);
    let big_c = libm::fmax(src.constants.upper, dst.constants.upper);
    let mesh = moran_threshold(e, s_src, cfg.net_level);
    let full = net_below(e, &[Word::empty()], mesh)?;
    let target_net = net_below(f, &[Word::empty()], moran_threshold(f, s_dst, cfg.net_level))?;

    let mut stages = Vec::new();
    let mut m = 0;
    for &k in &cfg.schedule {
        let i = x.take(k);
        let d_i = e.diameter_of(&i);
        let a_k = domain
            .pull_back(&i)
            .ok_or_else(|| Error::construction("A_k", alloc::format!("E' misses E_({i}) at k = {k}")))?;
        let roots: Vec<Word> = a_k.words().iter().map(|w| i.concat(w)).collect();

        // the sampled cover must agree with the exact one
        let local = net_below(e, &roots, mesh * d_i / e.diameter())?;
        let images: Vec<Point> = local
            .words
            .iter()
            .map(|v| f.address_point(&h.apply_address(&Address::anchored(v.clone()))?))
            .collect::<Result<_>>()?;
        let cover = cover_image(f, &images, d_i, c, big_c, l)?;
        let exact = symbolic_cover(h, f, &roots, d_i, c, big_c, l)?;
        if cover.words != exact.words {
            return Err(Error::construction(
                "cover",
                alloc::format!("net cover has {} cylinders, exact cover {}", cover.len(), exact.len()),
            ));
        }
        let m_k = cover.len();
        m = m.max(m_k);
        let partition = binary_partition(f, m_k)?;
        let pieces = partition.antichain.words();
        if pieces.len() != m_k {
            return Err(Error::construction("partition", alloc::format!("{} pieces for m_k = {m_k}", pieces.len())));
        }

        let m1 = min_gap(f, pieces);
        let m2 = min_gap(f, &cover.words) / d_i;
        let mut piece_bound: f64 = 0.0;
        for (d_l, piece) in cover.diameters.iter().zip(pieces) {
            let d_piece = f.diameter_of(piece);
            let upper = big_c * d_i * l * big_c * d_piece / (c * d_l);
            let lower = c * d_i / l * c * d_piece / (big_c * d_l);
            piece_bound = piece_bound.max(upper).max(1.0 / lower);
        }
        let cross_bound = libm::fmax(f.diameter() * l * big_c / m2, e.diameter() / m1);
        let largest_piece = pieces.iter().map(|p| f.diameter_of(p)).fold(0.0, f64::max);
        let c3 = 1.0 / (dst.constants.upper * largest_piece);
        let r = dst.constants.local_radius;
        let report = CoverReport {
            k,
            i: i.clone(),
            d_i,
            m_k,
            m,
            c2: partition.min_diameter,
            partition: partition.antichain.clone(),
            m1,
            m2,
            piece_bound,
            cross_bound,
            c3,
            c4: c3 * c * c * r / (l * big_c),
            c5: l + 1.0 + c3 * r,
            cover,
        };

        let mut entries = Vec::new();
        for (v, p) in full.words.iter().zip(&full.points) {
            let a = Address::anchored(v.clone());
            if !a_k.words().iter().any(|u| a.starts_with(u)) {
                continue;
            }
            let image = h.apply_address(&a.prepend(&i))?;
            let slot = report
                .cover
                .words
                .iter()
                .position(|w| image.starts_with(w))
                .ok_or_else(|| Error::construction("routing", alloc::format!("net point {p:?} maps outside the cover")))?;
            let rest = image.strip_prefix(&report.cover.words[slot]).expect("prefix checked");
            entries.push(TableEntry {
                key: a.canonical().to_string(),
                source: p.clone(),
                image: f.address_point(&rest.prepend(&pieces[slot]))?,
            });
        }
        let table = MapTable::new(entries, mesh, alloc::format!("h_{k}"))?;
        if !le_rel(table.bounds.high(), report.bound(), TOL_GEOM) {
            return Err(Error::Certification(alloc::format!(
                "bilip(h_{k}) = {} exceeds the two-case bound {}",
                table.bounds.high(),
                report.bound()
            )));
        }
        stages.push(Thm2Stage { report, table });
    }
    Ok(Thm2Run { s_src, s_dst, oracle, lipschitz: l, mesh, target_net, stages })
}
