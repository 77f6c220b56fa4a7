#![allow(dead_code)]

use harmonic_classes::series::EvalPoint;
use harmonic_classes::{ClassParams, HarmonicFunction};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random parameters with λ ∈ [0, 2].
pub fn random_params(rng: &mut impl Rng) -> ClassParams {
    ClassParams::new(
        rng.gen_range(0.0..0.95),
        rng.gen_range(0.0..2.0),
        rng.gen_range(0.0..=1.0),
        rng.gen_range(0.0..0.95),
    )
    .unwrap()
}

/// Random general-form function, coefficient moduli ≤ 1, indices ≤ `max_index`.
pub fn random_general(rng: &mut impl Rng, max_index: u32) -> HarmonicFunction {
    let mut a = Vec::new();
    let mut b = Vec::new();
    for n in 1..=max_index {
        if n >= 2 && rng.gen_bool(0.6) {
            a.push((n, Complex64::from_polar(rng.gen_range(0.0..1.0), rng.gen_range(0.0..6.3))));
        }
        if rng.gen_bool(0.5) {
            b.push((n, Complex64::from_polar(rng.gen_range(0.0..1.0), rng.gen_range(0.0..6.3))));
        }
    }
    HarmonicFunction::new(a, b).unwrap()
}

/// Random point with `lo ≤ |z| ≤ hi`.
pub fn random_point(rng: &mut impl Rng, lo: f64, hi: f64) -> EvalPoint {
    EvalPoint::from_polar(rng.gen_range(lo..=hi), rng.gen_range(0.0..std::f64::consts::TAU)).unwrap()
}

/// Parameter sets exercised by the seeded suites.
pub fn suite_params() -> Vec<ClassParams> {
    [
        (0.5, 0.0, 0.0, 0.0),
        (0.5, 1.0, 1.0, 0.0),
        (0.0, 0.5, 0.0, 0.5),
        (0.25, 2.0, 0.3, 0.75),
        (0.9, 0.7, 1.0, 0.25),
    ]
    .into_iter()
    .map(|(b, l, k, n)| ClassParams::new(b, l, k, n).unwrap())
    .collect()
}
