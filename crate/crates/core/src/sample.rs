//! Seeded sampling of spectral parameters.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::integrability::Parametrization;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `u` with `|Re u| ≤ 1`, `|Im u| ≤ 0.5`, which keeps `tanh u`, `tanh(u ± v)`
/// at least `0.5` away from their poles.
pub fn additive(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-0.5..=0.5))
}

/// `u` for additive parametrisations, `e^u` for multiplicative ones.
pub fn point(param: Parametrization, rng: &mut ChaCha8Rng) -> Complex64 {
    let u = additive(rng);
    match param {
        Parametrization::Hyperbolic => u,
        Parametrization::Multiplicative => u.exp(),
    }
}

pub fn angle(rng: &mut ChaCha8Rng) -> f64 {
    rng.gen_range(0.0..core::f64::consts::PI)
}
