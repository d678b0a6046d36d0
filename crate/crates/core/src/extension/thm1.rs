use alloc::string::ToString;
use alloc::vec::Vec;

use super::lemma2::{lemma2_ball_constant, lemma2_indices};
use super::oracle::certify_transducer;
use super::table::{MapTable, RatioBounds, TableEntry};
use super::transducer::AddressTransducer;
use super::{CertifiedSystem, ExtensionConfig};
use crate::error::{Error, Result};
use crate::geometry::distance;
use crate::ifs::sampling::ADDRESS_LENGTH;
use crate::symbolic::{moran_threshold, net_below, shortest_index, Address, SymbolicSubset, Word};
use crate::tolerance::{le_rel, TOL_GEOM};

/// One rescaled map `h_k = g_j^{-1} ∘ h ∘ f_i` on `A_k = f_i^{-1}(E' ∩ E_i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Thm1Stage {
    pub k: usize,
    pub j: Word,
    pub i: Word,
    pub e_j: f64,
    pub d_i: f64,
    /// `b e_j / (C L)`, the floor `d_i` respects.
    pub d_i_floor: f64,
    pub a_k: SymbolicSubset,
    pub table: MapTable,
    /// Largest distance from a net point of the source to the net of `A_k`.
    pub density_gap: f64,
    /// Largest `|h(f_i(a)) - y| / (b e_j)` over the net.
    pub image_spread: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Thm1Run {
    pub s_src: f64,
    pub s_dst: f64,
    /// Oracle bounds of the given map at the oracle level and two deeper.
    pub oracle: (RatioBounds, RatioBounds),
    pub lipschitz: f64,
    pub ball_constant: f64,
    /// `max(C b / c, C^2 L^2 / (c b))`.
    pub l_prime: f64,
    pub mesh: f64,
    pub skipped: Vec<Word>,
    pub stages: Vec<Thm1Stage>,
}

/// Fails unless the two dimensions agree within `tol`.
pub fn dimension_gate(src: &CertifiedSystem, dst: &CertifiedSystem, tol: f64) -> Result<(f64, f64)> {
    let (s, t) = (src.constants.dimension, dst.constants.dimension);
    if !(libm::fabs(s - t) < tol) {
        return Err(Error::DimensionMismatch { src: s, dst: t });
    }
    Ok((s, t))
}

pub(crate) fn check_domain_inside(domain: &SymbolicSubset, h: &AddressTransducer) -> Result<()> {
    for u in domain.words() {
        if !h.domain().words().iter().any(|d| d.is_prefix_of(u)) {
            return Err(Error::Config(alloc::format!("subset word ({u}) lies outside the transducer domain")));
        }
    }
    Ok(())
}

pub(crate) fn witness_address(domain: &SymbolicSubset, witness: &Word) -> Result<Address> {
    let x = Address::periodic(witness.clone())?;
    if !domain.words().iter().any(|u| x.starts_with(u)) {
        return Err(Error::construction("witness", alloc::format!("fixed point of ({witness}) is outside the subset")));
    }
    Ok(x)
}

/// Builds the tables of `h_k` for every `k` in the schedule.
pub fn thm1_construct(
    src: &CertifiedSystem,
    dst: &CertifiedSystem,
    domain: &SymbolicSubset,
    h: &AddressTransducer,
    cfg: &ExtensionConfig,
) -> Result<Thm1Run> {
    cfg.validate()?;
    let (e, f) = (&src.system, &dst.system);
    domain.validate(e.n_maps())?;
    check_domain_inside(domain, h)?;
    let (s_src, s_dst) = dimension_gate(src, dst, cfg.tol_dim)?;
    let oracle = certify_transducer(h, e, f, cfg.oracle_level)?;
    let l = libm::fmax(oracle.0.high(), oracle.1.high());

    let x = witness_address(domain, &cfg.witness)?;
    let y_address = h.apply_address(&x)?;
    let y = f.address_point(&y_address)?;
    let b = match cfg.ball_constant {
        Some(b) => b,
        None => lemma2_ball_constant(f, &dst.constants)?,
    };
    let max_k = *cfg.schedule.last().expect("validated");
    let indices = lemma2_indices(f, &y_address, max_k + 8, b)?;

    let c = libm::fmin(src.constants.lower, dst.constants.lower);
    let big_c = libm::fmax(src.constants.upper, dst.constants.upper);
    let l_prime = libm::fmax(big_c * b / c, big_c * big_c * l * l / (c * b));
    let mesh = moran_threshold(e, s_src, cfg.net_level);
    let full = net_below(e, &[Word::empty()], mesh)?;

    let mut stages = Vec::new();
    for &k in &cfg.schedule {
        let j = indices
            .at_least(k)
            .ok_or_else(|| Error::construction("lemma 2", alloc::format!("no verified prefix of length >= {k}")))?
            .clone();
        let e_j = f.diameter_of(&j);
        let bound = b * e_j;
        let si = shortest_index(e, &x.take(ADDRESS_LENGTH + 4 * k), l, bound, src.constants.upper)?;
        let i = si.word;
        let a_k = domain
            .pull_back(&i)
            .ok_or_else(|| Error::construction("A_k", alloc::format!("E' misses E_({i}) at k = {k}")))?;
        let net = net_below(e, a_k.words(), mesh)?;
        let mut entries = Vec::with_capacity(net.len());
        let mut image_spread: f64 = 0.0;
        for (v, p) in net.words.iter().zip(&net.points) {
            let a = Address::anchored(v.clone());
            let image = h.apply_address(&a.prepend(&i))?;
            image_spread = image_spread.max(distance(&f.address_point(&image)?, &y) / bound);
            let rest = image
                .strip_prefix(&j)
                .ok_or_else(|| Error::construction("h_k", alloc::format!("image of ({i}) {a} leaves F_({j})")))?;
            entries.push(TableEntry { key: a.canonical().to_string(), source: p.clone(), image: f.address_point(&rest)? });
        }
        if !le_rel(image_spread, 1.0, TOL_GEOM) {
            return Err(Error::Certification(alloc::format!(
                "h(E' ∩ E_i) leaves B(y, b e_j) at k = {k}: spread {image_spread}"
            )));
        }
        let table = MapTable::new(entries, mesh, alloc::format!("h_{k}"))?;
        if !le_rel(table.bounds.high(), l_prime, TOL_GEOM) {
            return Err(Error::Certification(alloc::format!(
                "bilip(h_{k}) = {} exceeds L' = {l_prime}",
                table.bounds.high()
            )));
        }
        let density_gap = full
            .points
            .iter()
            .map(|a| net.points.iter().map(|q| distance(a, q)).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max);
        stages.push(Thm1Stage {
            k,
            j,
            i,
            e_j,
            d_i: si.diameter,
            d_i_floor: si.lower_bound,
            a_k,
            table,
            density_gap,
            image_spread,
        });
    }
    Ok(Thm1Run {
        s_src,
        s_dst,
        oracle,
        lipschitz: l,
        ball_constant: b,
        l_prime,
        mesh,
        skipped: indices.skipped,
        stages,
    })
}
