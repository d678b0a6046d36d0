mod common;

use common::*;
use lipext_core::ifs::{
    check_inequalities, check_separation, compose_word, cylinder_diameter, estimate_constants, strong_separation_gap,
    SeparationReport,
};
use lipext_core::{Ball, ConformalMap, Error, IfsSystem, Separation};

#[test]
fn evaluates_generators() {
    let v = Ball::interval(-1.0, 2.0);
    assert_eq!(sim(1.0 / 3.0, 0.0).evaluate(&[1.0], &v).unwrap(), vec![1.0 / 3.0]);
    assert_eq!(sim(1.0 / 3.0, 2.0 / 3.0).evaluate(&[0.0], &v).unwrap(), vec![2.0 / 3.0]);
    let m = ConformalMap::moebius(1.0, 0.0, 1.0, 2.0).unwrap();
    assert!(close(m.evaluate(&[1.0], &v).unwrap()[0], 1.0 / 3.0, 1e-15));
    assert_eq!(m.evaluate(&[5.0], &v), Err(Error::Domain));
}

#[test]
fn derivative_norms() {
    assert_eq!(sim(1.0 / 3.0, 0.0).derivative_norm(&[0.7]), 1.0 / 3.0);
    let m = ConformalMap::moebius(1.0, 0.0, 1.0, 2.0).unwrap();
    assert_eq!(m.derivative_norm(&[0.0]), 0.5);
    // pole at -2 inside the ball
    assert!(matches!(m.derivative_range(&Ball::interval(-3.0, 0.0)), Err(Error::Config(_))));
    let e = cantor();
    for k in 0..8 {
        let word = lipext_core::Word::constant(2, k);
        assert!(close(e.word_derivative_norm(&word, &[0.3]), 3f64.powi(-(k as i32)), 1e-14));
    }
}

#[test]
fn composition_order() {
    let e = cantor();
    let one = w(&[1]);
    assert_eq!(compose_word(&e, &one).unwrap().apply(&[0.0]).unwrap(), vec![0.0]);
    let word = w(&[1, 2]);
    assert!(close(compose_word(&e, &word).unwrap().apply(&[0.0]).unwrap()[0], 2.0 / 9.0, 1e-15));
    let empty = w(&[]);
    assert_eq!(compose_word(&e, &empty).unwrap().apply(&[0.42]).unwrap(), vec![0.42]);
    let bad = w(&[3]);
    assert!(compose_word(&e, &bad).is_err());
}

#[test]
fn similarity_diameters() {
    let e = cantor();
    assert!(close(cylinder_diameter(&e, &w(&[1, 2]), 2).unwrap().value, 1.0 / 9.0, 1e-15));
    let d = dyadic();
    for k in 0..12 {
        let word = lipext_core::Word::constant(1, k);
        assert!(close(cylinder_diameter(&d, &word, k).unwrap().value, 2f64.powi(-(k as i32)), 1e-15));
    }
    assert!(cylinder_diameter(&e, &w(&[1, 2]), 1).is_err());
}

#[test]
fn similarity_diameters_multiply() {
    let e = golden();
    let u = w(&[1, 2, 2]);
    let v = w(&[2, 1]);
    assert!(close(e.diameter_of(&u.concat(&v)) * e.diameter(), e.diameter_of(&u) * e.diameter_of(&v), 1e-14));
}

#[test]
fn moebius_diameter_matches_sampling() {
    let m = moebius();
    // all depth-12 points under (1): f_1 f_v(0) for |v| = 11
    let mut pts = vec![0.0f64];
    for _ in 0..11 {
        pts = pts.iter().flat_map(|&x| [moebius_f(1, x), moebius_f(2, x)]).collect();
    }
    let pts: Vec<f64> = pts.iter().map(|&x| moebius_f(1, x)).collect();
    let lo = pts.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = pts.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let sampled = hi - lo;
    let d = cylinder_diameter(&m, &w(&[1]), 12).unwrap();
    let slack = 2.0 * m.contraction().powi(12) * m.diameter();
    assert!(sampled <= d.value + d.error + 1e-12);
    assert!(d.value - sampled <= slack);
    // hull endpoints are the fixed points 0 and 1, so d_(1) = f_1(1) - f_1(0)
    assert!(close(d.value, 1.0 / 3.0, 1e-12));
}

#[test]
fn moebius_requires_invariant_domain() {
    let maps = || vec![ConformalMap::moebius(1.0, 0.0, 1.0, 2.0).unwrap(), ConformalMap::moebius(0.0, 2.0, -1.0, 3.0).unwrap()];
    assert!(IfsSystem::new(maps(), Separation::Strong, None).is_err());
    // pole of the second map at x = 3
    assert!(IfsSystem::new(maps(), Separation::Strong, Some(Ball::interval(-0.25, 3.5))).is_err());
}

#[test]
fn similarity_constants() {
    let e = cantor();
    let c = estimate_constants(&e, 8, 1).unwrap();
    assert_eq!(c.distortion, 1.0);
    assert!(close(c.contraction, 1.0 / 3.0, 1e-15));
    assert!(close(c.derivative_min, 1.0 / 3.0, 1e-15) && close(c.derivative_max, 1.0 / 3.0, 1e-15));
    assert!(close(c.brackets.derivative.0, 1.0, 1e-12) && close(c.brackets.derivative.1, 1.0, 1e-12));
    assert!(close(c.brackets.bilipschitz.0, 1.0, 1e-12) && close(c.brackets.bilipschitz.1, 1.0, 1e-12));
    assert!(c.lower < 1.0 && c.upper >= 3.0);

    let d = estimate_constants(&dyadic(), 8, 1).unwrap();
    assert_eq!(d.contraction, 0.5);
    assert_eq!(d.distortion, 1.0);
    assert!(close(d.dimension, 1.0, 1e-12));
}

#[test]
fn moebius_distortion_from_sampled_pairs() {
    let m = moebius();
    let c = estimate_constants(&m, 10, 3).unwrap();
    // oracle: max over words and a fine grid of |Df_w(x)| / |Df_w(y)|
    let deriv = |word: &[u16], mut x: f64| {
        let mut d = 1.0;
        for &s in word.iter().rev() {
            d *= match s {
                1 => 2.0 / ((x + 2.0) * (x + 2.0)),
                _ => 2.0 / ((3.0 - x) * (3.0 - x)),
            };
            x = moebius_f(s, x);
        }
        d
    };
    let mut k_oracle: f64 = 1.0;
    for len in 1..=10 {
        for word in lipext_core::Word::all_of_length(2, len) {
            let vals: Vec<f64> = (0..=64).map(|j| deriv(word.symbols(), -0.25 + 1.5 * j as f64 / 64.0)).collect();
            let hi = vals.iter().cloned().fold(0.0, f64::max);
            let lo = vals.iter().cloned().fold(f64::INFINITY, f64::min);
            k_oracle = k_oracle.max(hi / lo);
        }
    }
    assert!(c.distortion >= 1.0);
    assert!(k_oracle <= c.distortion * (1.0 + 1e-9));
    assert!(c.distortion <= k_oracle * 1.01);
}

#[test]
fn constants_are_deterministic() {
    let m = moebius();
    assert_eq!(estimate_constants(&m, 6, 11).unwrap(), estimate_constants(&m, 6, 11).unwrap());
    assert!(estimate_constants(&m, 3, 11).is_err());
}

#[test]
fn sampled_inequalities_hold() {
    for system in [cantor(), dyadic(), moebius(), golden()] {
        let c = estimate_constants(&system, 10, 5).unwrap();
        for check in check_inequalities(&system, &c, 10, 1000, 17) {
            assert!(check.passed(), "{}: {:?}", check.name, check.witness);
            assert!(check.checked >= 1000 || check.name.contains("parent") || check.name.contains("gap"));
        }
    }
}

/// Independent check of the bilipschitz inequality on random pairs.
#[test]
fn cylinder_bilipschitz_against_direct_evaluation() {
    use rand::{Rng, SeedableRng};
    let m = moebius();
    let c = estimate_constants(&m, 10, 5).unwrap();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
    let point = |rng: &mut rand_chacha::ChaCha8Rng| {
        let mut x = 0.0;
        for _ in 0..60 {
            x = moebius_f(rng.gen_range(1..=2), x);
        }
        x
    };
    for _ in 0..500 {
        let len = rng.gen_range(1..=10);
        let word: Vec<u16> = (0..len).map(|_| rng.gen_range(1..=2)).collect();
        let (x, y) = (point(&mut rng), point(&mut rng));
        let apply = |mut z: f64| {
            for &s in word.iter().rev() {
                z = moebius_f(s, z);
            }
            z
        };
        let d = m.diameter_of(&w(&word));
        let img = (apply(x) - apply(y)).abs();
        if (x - y).abs() < 1e-6 {
            continue;
        }
        assert!(c.lower * d * (x - y).abs() <= img * (1.0 + 1e-9));
        assert!(img <= c.upper * d * (x - y).abs() * (1.0 + 1e-9));
    }
}

#[test]
fn diameter_decay_and_parent_child() {
    for system in [cantor(), moebius()] {
        let c = estimate_constants(&system, 8, 5).unwrap();
        for len in 0..=8 {
            for word in lipext_core::Word::all_of_length(2, len) {
                let d = system.diameter_of(&word);
                assert!(d <= c.contraction.powi(len as i32) * system.diameter() * (1.0 + 1e-9));
                for i in (1..=2).filter(|_| len < 8) {
                    assert!(d <= c.upper * system.diameter_of(&word.child(i)));
                }
            }
        }
    }
}

#[test]
fn cantor_gap_is_one_third() {
    let e = cantor();
    let g = strong_separation_gap(&e, 6).unwrap();
    // brute force: gaps between sibling intervals from ternary endpoints
    let mut oracle = f64::INFINITY;
    for len in 0..6 {
        for p in lipext_core::Word::all_of_length(2, len) {
            let d = 3f64.powi(-(len as i32));
            let right_of_first = cantor_left(&p.child(1)) + d / 3.0;
            oracle = oracle.min((cantor_left(&p.child(2)) - right_of_first) / d);
        }
    }
    assert!(close(oracle, 1.0 / 3.0, 1e-12));
    assert!(close(g.gap_constant, oracle, 1e-9));
}

#[test]
fn dyadic_is_not_strongly_separated() {
    let d = IfsSystem::new(vec![sim(0.5, 0.0), sim(0.5, 0.5)], Separation::Strong, None).unwrap();
    assert!(matches!(strong_separation_gap(&d, 4), Err(Error::Separation(_))));
}

#[test]
fn dyadic_open_set_exclusion() {
    let d = dyadic();
    let c = estimate_constants(&d, 8, 5).unwrap();
    match check_separation(&d, &c, 8).unwrap() {
        SeparationReport::Open { words_checked, .. } => assert_eq!(words_checked, 511),
        other => panic!("{other:?}"),
    }
}

#[test]
fn overlapping_open_set_witness_is_rejected() {
    let witness = lipext_core::OpenSetWitness { open: Ball::interval(0.0, 1.0), x0: vec![0.5], r0: 0.5 };
    let maps = vec![sim(0.6, 0.0), sim(0.6, 0.4)];
    assert!(IfsSystem::new(maps, Separation::Open(witness), None).is_err());
}
