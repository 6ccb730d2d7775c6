#![allow(dead_code)]

use pwcalc::linalg::op_norm;
use pwcalc::{CMatrix, PsdMatrix, ToleranceConfig, C64};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

pub fn tol() -> ToleranceConfig {
    ToleranceConfig::default()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `p(M)` by Horner's rule; `coeffs[i]` multiplies `M^i`.
pub fn poly_matrix(coeffs: &[f64], m: &CMatrix) -> CMatrix {
    let n = m.nrows();
    let mut out = CMatrix::zeros(n, n);
    for &c in coeffs.iter().rev() {
        out = &out * m + CMatrix::identity(n, n) * C64::new(c, 0.0);
    }
    out
}

pub fn poly(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

pub fn random_poly(rng: &mut impl Rng, max_degree: usize) -> Vec<f64> {
    let d = rng.random_range(0..=max_degree);
    (0..=d).map(|_| rng.random_range(-1.0..1.0)).collect()
}

/// `||x - y||_2 / max(||y||_2, floor)`.
pub fn rel(x: &CMatrix, y: &CMatrix, floor: f64) -> f64 {
    op_norm(&(x - y)) / op_norm(y).max(floor)
}

/// A random PSD pair with independent ranks in `0..=n`.
pub fn any_pair(rng: &mut impl Rng, max_n: usize) -> (PsdMatrix, PsdMatrix) {
    let n = rng.random_range(1..=max_n);
    let ra = rng.random_range(0..=n);
    let rb = rng.random_range(0..=n);
    pwcalc::sample::random_pair(n, ra, rb, rng, &tol()).unwrap()
}
