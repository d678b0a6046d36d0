use alloc::boxed::Box;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::table::MapTable;
use crate::error::{Error, NonConvergence, Result};
use crate::geometry::distance;

#[derive(Debug, Clone, PartialEq)]
pub struct LimitReport {
    /// The last table of the selected subsequence, on the common net.
    pub table: MapTable,
    /// Indices of the selected tables.
    pub selected: Vec<usize>,
    /// Start of an epsilon-Cauchy tail, when the whole tail qualifies.
    pub tail_start: Option<usize>,
    pub sup_distances: Vec<Vec<f64>>,
}

fn sup_distance(a: &MapTable, b: &MapTable) -> f64 {
    a.entries.iter().zip(&b.entries).map(|(u, v)| distance(&u.image, &v.image)).fold(0.0, f64::max)
}

/// Restricts the tables to their common keys and looks for an
/// epsilon-Cauchy tail; failing that, for the longest subsequence whose
/// tables are pairwise within `epsilon`, built greedily from each start.
pub fn extract_limit(tables: &[MapTable], epsilon: f64) -> Result<LimitReport> {
    if tables.len() < 2 {
        return Err(Error::Config("need at least two tables".to_string()));
    }
    if !(epsilon > 0.0) {
        return Err(Error::Config("epsilon must be positive".to_string()));
    }
    let keys: Vec<String> = tables[0]
        .entries
        .iter()
        .map(|e| e.key.clone())
        .filter(|k| tables[1..].iter().all(|t| t.get(k).is_some()))
        .collect();
    let key_refs: Vec<&str> = keys.iter().map(String::as_str).collect();
    let restricted = tables.iter().map(|t| t.restrict(&key_refs)).collect::<Result<Vec<_>>>()?;
    let n = restricted.len();
    let mut d = alloc::vec![alloc::vec![0.0; n]; n];
    for a in 0..n {
        for b in a + 1..n {
            d[a][b] = sup_distance(&restricted[a], &restricted[b]);
            d[b][a] = d[a][b];
        }
    }
    let close = |a: usize, b: usize| d[a][b] <= epsilon;
    let tail_start = (0..n - 1).find(|&t| (t..n).all(|a| (a + 1..n).all(|b| close(a, b))));
    let selected: Vec<usize> = match tail_start {
        Some(t) => (t..n).collect(),
        None => {
            let mut best: Vec<usize> = Vec::new();
            for start in 0..n {
                let mut chain = alloc::vec![start];
                for b in start + 1..n {
                    if chain.iter().all(|&a| close(a, b)) {
                        chain.push(b);
                    }
                }
                if chain.len() > best.len() {
                    best = chain;
                }
            }
            best
        }
    };
    if selected.len() < 2 {
        return Err(Error::NonConvergence(Box::new(NonConvergence { epsilon, sup_distances: d })));
    }
    let table = restricted[*selected.last().expect("non-empty")].clone();
    let max_in = tables.iter().map(|t| t.bounds.high()).fold(0.0, f64::max);
    debug_assert!(table.bounds.high() <= max_in * (1.0 + 1e-12));
    Ok(LimitReport { table, selected, tail_start, sup_distances: d })
}
