use alloc::vec::Vec;

use super::table::RatioBounds;
use super::transducer::AddressTransducer;
use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::ifs::IfsSystem;
use crate::measure::moran_dimension;
use crate::symbolic::{moran_threshold, net_below, Address, Net};

/// Dimension used to size nets: exact for similarities, a fixed-depth Moran
/// estimate otherwise.
pub fn net_dimension(system: &IfsSystem) -> Result<f64> {
    let depth = if system.is_similarity() { 1 } else { 10 };
    Ok(moran_dimension(system, depth)?.s)
}

/// Net of the transducer domain at information level `level` together with
/// the image of every net point.
pub fn transducer_net(h: &AddressTransducer, src: &IfsSystem, dst: &IfsSystem, level: usize) -> Result<(Net, Vec<Point>)> {
    if h.source_symbols() != src.n_maps() || h.target_symbols() != dst.n_maps() {
        return Err(Error::Transducer("alphabet sizes do not match the systems".into()));
    }
    let s = net_dimension(src)?;
    let net = net_below(src, h.domain().words(), moran_threshold(src, s, level))?;
    let images = net
        .words
        .iter()
        .map(|w| dst.address_point(&h.apply_address(&Address::anchored(w.clone()))?))
        .collect::<Result<Vec<_>>>()?;
    Ok((net, images))
}

/// Brute-force distance ratios of the map induced by `h`, over all pairs of
/// net points of its domain at information level `level`.
pub fn transducer_bilip_estimate(h: &AddressTransducer, src: &IfsSystem, dst: &IfsSystem, level: usize) -> Result<RatioBounds> {
    if level < 2 {
        return Err(Error::Config("oracle level must be at least 2".into()));
    }
    let (net, images) = transducer_net(h, src, dst, level)?;
    RatioBounds::from_pairs(&net.points, &images)
}

/// Growth of `L_high` from `level` to `level + 2` above which a map is
/// treated as not bilipschitz.
pub const GROWTH_LIMIT: f64 = 1.1;

/// Oracle bounds at `level`, rejected when `L_high` keeps growing two levels
/// deeper or exceeds the declared constant.
pub fn certify_transducer(h: &AddressTransducer, src: &IfsSystem, dst: &IfsSystem, level: usize) -> Result<(RatioBounds, RatioBounds)> {
    let at = transducer_bilip_estimate(h, src, dst, level)?;
    let deeper = transducer_bilip_estimate(h, src, dst, level + 2)?;
    let growth = deeper.high() / at.high();
    if growth > GROWTH_LIMIT {
        return Err(Error::NotBilipschitz(alloc::format!(
            "L_high grows from {} to {} between levels {level} and {}",
            at.high(),
            deeper.high(),
            level + 2
        )));
    }
    if let Some(l) = h.declared() {
        if deeper.high() > l * (1.0 + crate::tolerance::TOL_SAMPLE) {
            return Err(Error::NotBilipschitz(alloc::format!("measured {} exceeds declared {l}", deeper.high())));
        }
    }
    Ok((at, deeper))
}
