//! Seedable random generators for tests, benches and the acceptance suite.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::linalg::{CMatrix, CVector, PsdMatrix, C64};
use crate::tol::ToleranceConfig;

fn gaussian(rng: &mut impl Rng) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// `rows x cols` matrix of standard complex Gaussians.
pub fn gaussian_matrix(rows: usize, cols: usize, rng: &mut impl Rng) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

/// `(G + G*)/2` for a complex Gaussian `G`.
pub fn random_hermitian(n: usize, rng: &mut impl Rng) -> CMatrix {
    let g = gaussian_matrix(n, n, rng);
    (&g + g.adjoint()) * C64::new(0.5, 0.0)
}

/// Haar-distributed unitary via QR with the phase correction on `R`.
pub fn random_unitary(n: usize, rng: &mut impl Rng) -> CMatrix {
    let qr = gaussian_matrix(n, n, rng).qr();
    let (mut q, r) = qr.unpack();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// `G G*` with `G` of size `n x rank`; rank is `min(n, rank)` almost surely.
pub fn random_psd(n: usize, rank: usize, rng: &mut impl Rng, tol: &ToleranceConfig) -> Result<PsdMatrix> {
    let g = gaussian_matrix(n, rank, rng);
    PsdMatrix::from_constructed(&g * g.adjoint(), tol)
}

/// Positive definite matrix with spectrum in `[lo, hi]`.
pub fn random_definite(n: usize, lo: f64, hi: f64, rng: &mut impl Rng, tol: &ToleranceConfig) -> Result<PsdMatrix> {
    let u = random_unitary(n, rng);
    let d = CMatrix::from_diagonal(&CVector::from_fn(n, |_, _| C64::new(rng.random_range(lo..=hi), 0.0)));
    PsdMatrix::from_constructed(&u * d * u.adjoint(), tol)
}

/// Random density matrix of full rank.
pub fn random_state(n: usize, rng: &mut impl Rng, tol: &ToleranceConfig) -> Result<PsdMatrix> {
    let m = random_psd(n, n, rng, tol)?;
    let t = m.trace();
    Ok(if t > 0.0 { m.scaled(1.0 / t) } else { PsdMatrix::identity(n).scaled(1.0 / n as f64) })
}

/// `G G^T` with small integer entries in `G`, so kernels are exact.
pub fn integer_psd(n: usize, rank: usize, rng: &mut impl Rng, tol: &ToleranceConfig) -> Result<PsdMatrix> {
    let g = CMatrix::from_fn(n, rank, |_, _| C64::new(rng.random_range(-2..=2) as f64, 0.0));
    PsdMatrix::from_constructed(&g * g.transpose(), tol)
}

/// A random pair with prescribed ranks.
pub fn random_pair(
    n: usize,
    rank_a: usize,
    rank_b: usize,
    rng: &mut impl Rng,
    tol: &ToleranceConfig,
) -> Result<(PsdMatrix, PsdMatrix)> {
    Ok((random_psd(n, rank_a, rng, tol)?, random_psd(n, rank_b, rng, tol)?))
}

/// `A = W diag(a_1..a_k, 0..0) W*` with `W` unitary and `a_i` in `[lo, hi]`,
/// paired with a positive definite `B` whose spectrum lies in `[lo, hi]`.
pub fn structured_pair(
    n: usize,
    k: usize,
    lo: f64,
    hi: f64,
    rng: &mut impl Rng,
    tol: &ToleranceConfig,
) -> Result<(PsdMatrix, PsdMatrix)> {
    let w = random_unitary(n, rng);
    let d = CVector::from_fn(n, |i, _| if i < k { C64::new(rng.random_range(lo..=hi), 0.0) } else { C64::new(0.0, 0.0) });
    let a = PsdMatrix::from_constructed(&w * CMatrix::from_diagonal(&d) * w.adjoint(), tol)?;
    let b = random_definite(n, lo, hi, rng, tol)?;
    Ok((a, b))
}

/// Rescales both matrices by the same factor so that `||A + B|| <= 1`.
pub fn normalize_pair(a: &PsdMatrix, b: &PsdMatrix, tol: &ToleranceConfig) -> Result<(PsdMatrix, PsdMatrix)> {
    let s = a.add(b, tol)?.norm();
    if s <= 1.0 {
        return Ok((a.clone(), b.clone()));
    }
    Ok((a.scaled(1.0 / s), b.scaled(1.0 / s)))
}
