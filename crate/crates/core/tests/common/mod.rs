#![allow(dead_code)]

use lipext_core::extension::CertifiedSystem;
use lipext_core::ifs::estimate_constants;
use lipext_core::{Ball, ConformalMap, IfsSystem, OpenSetWitness, Separation, Word};

pub fn sim(r: f64, t: f64) -> ConformalMap {
    ConformalMap::similarity_1d(r, false, t).unwrap()
}

/// Middle-third Cantor set.
pub fn cantor() -> IfsSystem {
    IfsSystem::new(vec![sim(1.0 / 3.0, 0.0), sim(1.0 / 3.0, 2.0 / 3.0)], Separation::Strong, None).unwrap()
}

/// Four maps of ratio 1/9 whose attractor is the middle-third Cantor set.
pub fn four() -> IfsSystem {
    let t = [0.0, 2.0 / 9.0, 2.0 / 3.0, 8.0 / 9.0];
    IfsSystem::new(t.iter().map(|&t| sim(1.0 / 9.0, t)).collect(), Separation::Strong, None).unwrap()
}

pub fn dyadic_witness() -> OpenSetWitness {
    OpenSetWitness { open: Ball::interval(0.0, 1.0), x0: vec![0.5], r0: 0.5 }
}

pub fn dyadic() -> IfsSystem {
    IfsSystem::new(vec![sim(0.5, 0.0), sim(0.5, 0.5)], Separation::Open(dyadic_witness()), None).unwrap()
}

pub fn golden() -> IfsSystem {
    IfsSystem::new(vec![sim(0.5, 0.0), sim(0.25, 0.75)], Separation::Strong, None).unwrap()
}

/// `x / (x + 2)` and `2 / (3 - x)` on `[-1/4, 5/4]`.
pub fn moebius() -> IfsSystem {
    let maps = vec![ConformalMap::moebius(1.0, 0.0, 1.0, 2.0).unwrap(), ConformalMap::moebius(0.0, 2.0, -1.0, 3.0).unwrap()];
    IfsSystem::new(maps, Separation::Strong, Some(Ball::interval(-0.25, 1.25))).unwrap()
}

pub fn moebius_f(i: u16, x: f64) -> f64 {
    match i {
        1 => x / (x + 2.0),
        _ => 2.0 / (3.0 - x),
    }
}

pub fn certified(system: IfsSystem) -> CertifiedSystem {
    let constants = estimate_constants(&system, 10, 7).unwrap();
    CertifiedSystem { system, constants }
}

pub fn w(s: &[u16]) -> Word {
    Word::from_slice(s)
}

/// Left endpoint of the Cantor cylinder `w`, from the ternary expansion.
pub fn cantor_left(word: &Word) -> f64 {
    word.symbols().iter().enumerate().map(|(i, &a)| 2.0 * (a - 1) as f64 * 3f64.powi(-(i as i32) - 1)).sum()
}

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}
