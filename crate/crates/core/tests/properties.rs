mod common;

use common::*;
use lipext_core::extension::{AddressTransducer, MapTable, TableEntry};
use lipext_core::measure::{ball_measure, cylinder_measure, moran_dimension};
use lipext_core::symbolic::{address_to_point, binary_partition, point_to_address};
use lipext_core::{Address, IfsSystem, SymbolicSubset, Word};
use proptest::prelude::*;

fn word(n: u16, max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(1..=n, 0..=max_len).prop_map(Word::new)
}

fn systems() -> Vec<IfsSystem> {
    vec![cantor(), four(), golden(), moebius()]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn canonical_addresses_agree(prefix in word(2, 6), period in word(2, 4).prop_filter("non-empty", |w| !w.is_empty()), reps in 1usize..4) {
        let a = Address::new(prefix.clone(), period.clone()).unwrap();
        let mut unrolled = period.clone();
        for _ in 1..reps { unrolled = unrolled.concat(&period); }
        let b = Address::new(prefix.concat(&period), unrolled).unwrap();
        prop_assert_eq!(a.canonical(), b.canonical());
        prop_assert_eq!(a.canonical().canonical(), a.canonical());
        for n in 0..30 { prop_assert_eq!(a.symbol(n), b.symbol(n)); }
    }

    #[test]
    fn prepend_then_strip(prefix in word(3, 5), body in word(3, 5), period in word(3, 3).prop_filter("non-empty", |w| !w.is_empty())) {
        let a = Address::new(body, period).unwrap();
        let b = a.prepend(&prefix);
        prop_assert!(b.starts_with(&prefix));
        prop_assert_eq!(b.strip_prefix(&prefix).unwrap().canonical(), a.canonical());
    }

    #[test]
    fn binary_partitions_cover(m in 1usize..60, golden_ratio in any::<bool>()) {
        let system = if golden_ratio { golden() } else { cantor() };
        let p = binary_partition(&system, m).unwrap();
        prop_assert_eq!(p.antichain.len(), m);
        prop_assert!(p.antichain.is_covering(2));
        let total: f64 = p.antichain.words().iter().map(|u| cylinder_measure(&system, u, moran_dimension(&system, 1).unwrap().s)).sum();
        prop_assert!((total - 1.0).abs() < 1e-9);
    }

    #[test]
    fn measure_is_additive(u in word(2, 8), which in 0usize..4) {
        let system = &systems()[which];
        let n = system.n_maps() as u16;
        let u = Word::new(u.symbols().iter().map(|&s| (s - 1) % n + 1).collect());
        let s = moran_dimension(system, 8).unwrap().s;
        let parent = cylinder_measure(system, &u, s);
        let children: f64 = (1..=n).map(|a| cylinder_measure(system, &u.child(a), s)).sum();
        let tol = if system.is_similarity() { 1e-12 } else { 1e-5 };
        prop_assert!((parent - children).abs() <= tol * parent.max(1e-300), "{parent} vs {children}");
    }

    #[test]
    fn ball_measure_is_monotone(u in word(2, 10), r in 1e-4f64..0.5, grow in 1.0f64..3.0) {
        let e = cantor();
        let s = moran_dimension(&e, 1).unwrap().s;
        let (x, _) = address_to_point(&e, &u).unwrap();
        let small = ball_measure(&e, &x, r, s, 12).unwrap();
        let large = ball_measure(&e, &x, r * grow, s, 12).unwrap();
        prop_assert!(small.lo <= small.hi);
        prop_assert!(small.lo <= large.hi + 1e-15);
        prop_assert!(small.lo <= large.lo + 1e-15 && small.hi <= large.hi + 1e-15);
    }

    #[test]
    fn grouping_inverts_ungrouping(u in word(2, 12)) {
        let even = u.prefix(u.len() / 2 * 2);
        let g = AddressTransducer::grouping(2, SymbolicSubset::whole()).unwrap();
        let inv = AddressTransducer::ungrouping(2, SymbolicSubset::whole()).unwrap();
        let grouped = g.apply(&even).unwrap();
        prop_assert_eq!(grouped.len(), even.len() / 2);
        prop_assert_eq!(inv.apply(&grouped).unwrap(), even);
    }

    #[test]
    fn permutation_round_trip(u in word(3, 10), perm in Just(vec![1u16, 2, 3]).prop_shuffle()) {
        let p = AddressTransducer::permutation(&perm, SymbolicSubset::whole()).unwrap();
        let mut inverse = vec![0u16; 3];
        for (i, &q) in perm.iter().enumerate() { inverse[q as usize - 1] = i as u16 + 1; }
        let back = AddressTransducer::permutation(&inverse, SymbolicSubset::whole()).unwrap();
        prop_assert_eq!(back.apply(&p.apply(&u).unwrap()).unwrap(), u);
    }

    #[test]
    fn table_ratios_within_bounds(points in prop::collection::btree_map(-1000i32..1000, -1e3f64..1e3, 2..12)) {
        let entries: Vec<TableEntry> = points.iter().map(|(&x, &y)| TableEntry { key: x.to_string(), source: vec![x as f64], image: vec![y] }).collect();
        let distinct = {
            let mut ys: Vec<f64> = points.values().copied().collect();
            ys.sort_by(f64::total_cmp);
            ys.windows(2).all(|p| p[0] != p[1])
        };
        prop_assume!(distinct);
        let t = MapTable::new(entries, 1.0, "p").unwrap();
        prop_assert!(t.bounds.low() <= t.bounds.high());
        for a in &t.entries {
            for b in &t.entries {
                if a.key == b.key { continue; }
                let r = (a.image[0] - b.image[0]).abs() / (a.source[0] - b.source[0]).abs();
                prop_assert!(t.bounds.admits(r));
            }
        }
    }

    #[test]
    fn coding_round_trip(u in word(2, 14), which in 0usize..4) {
        let system = &systems()[which];
        let n = system.n_maps() as u16;
        let u = Word::new(u.symbols().iter().map(|&s| (s - 1) % n + 1).collect());
        let (p, _) = address_to_point(system, &u).unwrap();
        prop_assert_eq!(point_to_address(system, &p, u.len()).unwrap(), u);
    }

    #[test]
    fn word_distance_matches_direct(u in word(2, 6), x in -0.25f64..1.25, y in -0.25f64..1.25) {
        let m = moebius();
        let direct = {
            let (mut a, mut b) = (x, y);
            for &s in u.symbols().iter().rev() { a = moebius_f(s, a); b = moebius_f(s, b); }
            (a - b).abs()
        };
        let stable = m.word_distance(&u, &[x], &[y]);
        prop_assert!((stable - direct).abs() <= 1e-12 + 1e-9 * direct, "{stable} vs {direct}");
    }
}
