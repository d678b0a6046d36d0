mod common;

use common::*;
use lipext_core::extension::{
    extract_limit, verify_map_table, AddressTransducer, ExtensionConfig, MapTable, TableEntry, VerifyMode,
};
use lipext_core::onto::{cover_image, symbolic_cover, thm2_construct};
use lipext_core::symbolic::{address_to_point, binary_partition, net_below};
use lipext_core::{Error, IfsSystem, Separation, SymbolicSubset, Word};

fn config(schedule: std::ops::RangeInclusive<usize>, witness: &[u16]) -> ExtensionConfig {
    ExtensionConfig {
        schedule: schedule.collect(),
        net_level: 10,
        epsilon: 0.01,
        ball_constant: None,
        witness: w(witness),
        oracle_level: 8,
        tol_dim: 1e-6,
    }
}

fn cyl(s: &[u16]) -> SymbolicSubset {
    SymbolicSubset::new(vec![w(s)]).unwrap()
}

#[test]
fn grouping_inverse_run() {
    let (e, f) = (certified(four()), certified(cantor()));
    let domain = cyl(&[2]);
    let h = AddressTransducer::ungrouping(2, domain.clone()).unwrap();
    let run = thm2_construct(&e, &f, &domain, &h, &config(1..=6, &[2, 3])).unwrap();
    assert!((run.lipschitz - 1.0).abs() < 1e-9);
    for s in &run.stages {
        let r = &s.report;
        assert!(r.cover.violations.is_empty());
        assert!(r.cover.margins.iter().all(|&(lo, hi)| lo > 0.0 && hi > 0.0));
        assert_eq!(r.partition.len(), r.m_k);
        assert_eq!(binary_partition(&f.system, r.m_k).unwrap().antichain, r.partition);
        assert!(r.m_k <= r.m);
        assert!(s.table.bounds.high() <= r.bound() * (1.0 + 1e-9));
        assert!(verify_map_table(&s.table, None, 0.0, VerifyMode::Into).passed);
        // every cover word has diameter below (c / L) d_i and its parent does not
        for word in &r.cover.words {
            assert!(f.system.diameter_of(word) < r.cover.threshold);
            assert!(f.system.diameter_of(&word.parent().unwrap()) >= r.cover.threshold);
        }
    }
    let longer = thm2_construct(&e, &f, &domain, &h, &config(1..=8, &[2, 3])).unwrap();
    assert_eq!(run.m(), longer.m());
    assert!(run.m() >= 1);

    let tables: Vec<MapTable> = run.stages.iter().map(|s| s.table.clone()).collect();
    let limit = extract_limit(&tables, 0.01 * f.system.diameter()).unwrap();
    let eps = 2.0 * run.target_net.threshold;
    let verdict = verify_map_table(&limit.table, Some(&run.target_net.points), eps, VerifyMode::Onto);
    assert!(verdict.passed, "{verdict:?}");
}

/// The first stage by hand: `i = (2)`, `h(E_(2))` is `F_(1,2)`, whose
/// maximal subcylinders below `(c / L) / 9` are the four of depth 4.
#[test]
fn first_cover_by_hand() {
    let (e, f) = (certified(four()), certified(cantor()));
    let domain = cyl(&[2]);
    let h = AddressTransducer::ungrouping(2, domain.clone()).unwrap();
    let run = thm2_construct(&e, &f, &domain, &h, &config(1..=1, &[2, 3])).unwrap();
    let r = &run.stages[0].report;
    assert_eq!(r.i, w(&[2]));
    let c = e.constants.lower.min(f.constants.lower);
    let threshold = c / run.lipschitz / 9.0;
    let expected: Vec<Word> = Word::all_of_length(2, 6)
        .filter(|u| u.symbols()[..2] == [1, 2])
        .filter(|u| 3f64.powi(-(u.len() as i32)) < threshold)
        .map(|u| {
            // shorten to the maximal cylinder below the threshold
            let mut k = 2;
            while 3f64.powi(-k) >= threshold {
                k += 1;
            }
            u.prefix(k as usize)
        })
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect();
    assert_eq!(r.cover.words, expected);
    assert_eq!(r.m_k, expected.len());
}

#[test]
fn identity_onto() {
    let e = certified(cantor());
    let id = AddressTransducer::identity(2, SymbolicSubset::whole()).unwrap();
    let run = thm2_construct(&e, &e, &SymbolicSubset::whole(), &id, &config(1..=4, &[1])).unwrap();
    for s in &run.stages {
        let r = &s.report;
        // the threshold sits just below d_i / 3, so E_i splits into its four grandchildren
        let i = Word::constant(1, r.k);
        let grand: Vec<Word> = Word::all_of_length(2, 2).map(|u| i.concat(&u)).collect();
        assert_eq!(r.cover.words, grand);
        assert_eq!(r.m_k, 4);
        assert_eq!((s.table.bounds.min_ratio, s.table.bounds.max_ratio), (1.0, 1.0));
    }
    let last = &run.stages.last().unwrap().table;
    let images = last.images();
    let verdict = verify_map_table(last, Some(&run.target_net.points), 1e-12, VerifyMode::Onto);
    assert!(verdict.passed);
    assert_eq!(images.len(), run.target_net.points.len());
}

#[test]
fn three_map_target_is_unsupported() {
    let maps = (0..3).map(|i| sim(0.2, 0.4 * i as f64)).collect();
    let three = certified(IfsSystem::new(maps, Separation::Strong, None).unwrap());
    let e = certified(cantor());
    let h = AddressTransducer::new(2, 3, 1, 0, &[(0, 1, 0, w(&[1])), (0, 2, 0, w(&[3]))], SymbolicSubset::whole()).unwrap();
    let err = thm2_construct(&e, &three, &SymbolicSubset::whole(), &h, &config(1..=2, &[1])).unwrap_err();
    assert!(matches!(err, Error::Unsupported(_)));
}

#[test]
fn open_set_target_is_rejected() {
    let d = certified(dyadic());
    let id = AddressTransducer::identity(2, SymbolicSubset::whole()).unwrap();
    let err = thm2_construct(&d, &d, &SymbolicSubset::whole(), &id, &config(1..=2, &[1])).unwrap_err();
    assert!(matches!(err, Error::Config(_)));
}

#[test]
fn cover_inside_one_cylinder() {
    let e = cantor();
    let (p, _) = address_to_point(&e, &w(&[1, 2, 1])).unwrap();
    let (q, _) = address_to_point(&e, &w(&[1, 1, 2])).unwrap();
    // threshold c d_i / L = 0.5 > e_(1) = 1/3
    let cover = cover_image(&e, &[p, q], 1.0, 0.5, 3.0, 1.0).unwrap();
    assert_eq!(cover.words, vec![w(&[1])]);
    assert!(cover.violations.is_empty());
}

/// Brute force: depth-2 cylinders whose interval contains an image point.
fn meeting_depth_two(points: &[f64]) -> Vec<Word> {
    Word::all_of_length(2, 2)
        .filter(|u| points.iter().any(|&x| (cantor_left(u)..=cantor_left(u) + 1.0 / 9.0).contains(&x)))
        .collect()
}

#[test]
fn cover_straddling_the_gap() {
    let c = certified(cantor());
    let domain = SymbolicSubset::new(vec![w(&[1, 2, 2, 2]), w(&[2, 1, 1, 1])]).unwrap();
    let id = AddressTransducer::identity(2, domain.clone()).unwrap();
    let net = net_below(&c.system, domain.words(), 1e-3).unwrap();
    let (lo, hi) = (c.constants.lower, c.constants.upper);
    let cover = cover_image(&c.system, &net.points, 1.0, lo, hi, 1.0).unwrap();
    assert_eq!(cover.words, vec![w(&[1, 2]), w(&[2, 1])]);
    let flat: Vec<f64> = net.points.iter().map(|p| p[0]).collect();
    assert_eq!(cover.words, meeting_depth_two(&flat));
    assert!(cover.violations.is_empty());
    let exact = symbolic_cover(&id, &c.system, domain.words(), 1.0, lo, hi, 1.0).unwrap();
    assert_eq!(exact.words, cover.words);
}

#[test]
fn sandwich_violation_is_flagged() {
    let e = cantor();
    // lower bound c d_i / (L C) = 0.9 exceeds every cylinder below the threshold
    let cover = cover_image(&e, &[vec![0.0]], 1.0, 0.95, 1.0, 1.0).unwrap();
    assert_eq!(cover.words, vec![w(&[1])]);
    assert_eq!(cover.violations, vec![0]);
}

fn identity_table(system: &IfsSystem, roots: &[Word]) -> MapTable {
    let net = net_below(system, roots, 0.01).unwrap();
    let entries = net
        .words
        .iter()
        .zip(&net.points)
        .map(|(k, p)| TableEntry { key: k.to_string(), source: p.clone(), image: p.clone() })
        .collect();
    MapTable::new(entries, 0.01, "id").unwrap()
}

#[test]
fn onto_verdicts() {
    let e = cantor();
    let full = net_below(&e, &[Word::empty()], 0.01).unwrap();
    let table = identity_table(&e, &[Word::empty()]);
    for eps in [1e-12, 0.5] {
        assert!(verify_map_table(&table, Some(&full.points), eps, VerifyMode::Onto).passed);
    }
    let left = identity_table(&e, &[w(&[1])]);
    let verdict = verify_map_table(&left, Some(&full.points), 0.1, VerifyMode::Onto);
    assert!(!verdict.passed);
    assert!(verdict.onto_gap.unwrap() >= 1.0 / 3.0);
    let witness = &verdict.witnesses[0];
    let x: f64 = witness[witness.find('[').unwrap() + 1..witness.find(']').unwrap()].parse().unwrap();
    assert!(x >= 2.0 / 3.0, "{witness}");
    assert!(verify_map_table(&left, None, 0.1, VerifyMode::Into).passed);
}
