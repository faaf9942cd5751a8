#![allow(dead_code)]

use qtele_core::qmath::{c, ComplexMatrix, DensityMatrix};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random probability vector with all entries strictly positive.
pub fn random_spectrum(rng: &mut impl Rng) -> [f64; 4] {
    let raw: [f64; 4] = std::array::from_fn(|_| rng.gen_range(0.01..1.0));
    let total: f64 = raw.iter().sum();
    raw.map(|x| x / total)
}

pub fn random_matrix(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

/// Full-rank random density matrix G G^dagger / tr.
pub fn random_density(rng: &mut impl Rng, dims: Vec<usize>) -> DensityMatrix {
    let n = dims.iter().product();
    let g = random_matrix(rng, n);
    let m = &g * &g.adjoint();
    let t = m.trace().re;
    DensityMatrix::new(dims, m.scale_real(1.0 / t)).unwrap()
}

/// Random SU(2) element from Euler angles.
pub fn random_qubit_unitary(rng: &mut impl Rng) -> ComplexMatrix {
    let a: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let b: f64 = rng.gen_range(0.0..std::f64::consts::PI);
    let d: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let (s, co) = (b / 2.0).sin_cos();
    let e = |phase: f64| c(phase.cos(), phase.sin());
    ComplexMatrix::from_rows(&[
        [e(-(a + d) / 2.0) * co, -e(-(a - d) / 2.0) * s],
        [e((a - d) / 2.0) * s, e((a + d) / 2.0) * co],
    ])
}

pub fn theta_grid(steps: usize, denom: f64) -> Vec<f64> {
    (0..=steps).map(|n| n as f64 * std::f64::consts::PI / denom).collect()
}
