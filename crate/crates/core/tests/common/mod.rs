#![allow(dead_code)]

use quasifloquet::floquet::rotation_block;
use quasifloquet::SymplecticMatrix;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `I + spread·U` with `U` uniform in [-1, 1], rescaled to unit determinant.
pub fn random_sl2(rng: &mut ChaCha8Rng, spread: f64) -> SymplecticMatrix {
    loop {
        let mut e = [1.0, 0.0, 0.0, 1.0];
        for v in &mut e {
            *v += spread * rng.gen_range(-1.0..1.0);
        }
        let det = e[0] * e[3] - e[1] * e[2];
        if det > 0.05 {
            let s = det.sqrt();
            return SymplecticMatrix::new(e[0] / s, e[1] / s, e[2] / s, e[3] / s).unwrap();
        }
    }
}

/// Rotation by `theta` in a random symplectic frame.
pub fn random_elliptic(rng: &mut ChaCha8Rng, spread: f64) -> SymplecticMatrix {
    let p = random_sl2(rng, spread);
    let theta = rng.gen_range(0.1..3.0);
    rotation_block(1.0, theta).conjugate_by(&p)
}

/// Two elliptic matrices whose frames differ by a small random perturbation,
/// so that long words stay well conditioned in double precision.
pub fn near_commuting_pair(rng: &mut ChaCha8Rng) -> (SymplecticMatrix, SymplecticMatrix) {
    let p = random_sl2(rng, 0.5);
    let q = random_sl2(rng, 0.01);
    let t1 = rng.gen_range(0.1..3.0);
    let t2 = rng.gen_range(0.1..3.0);
    let g1 = rotation_block(1.0, t1).conjugate_by(&p);
    let g2 = rotation_block(1.0, t2).conjugate_by(&q).conjugate_by(&p);
    (g1, g2)
}

pub fn rel_diff(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

/// Max entrywise difference relative to the larger matrix scale.
pub fn matrix_rel_diff(a: &SymplecticMatrix, b: &SymplecticMatrix) -> f64 {
    a.max_abs_diff(b) / a.scale().max(b.scale()).max(1.0)
}
