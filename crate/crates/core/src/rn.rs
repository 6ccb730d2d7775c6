//! Radon-Nikodym factors for a nonsingular first argument.
//!
//! With `A` positive definite the support of `A + B` is the whole space and
//! `B_c = A^{1/2} h(XX*) A^{1/2}` for `h(x) = (1 - x)/x` on `(0, 1]`. The same
//! shape `A^{1/2} h_f(XX*) A^{1/2}` with `h_f(x) = f(x)/x` reproduces any
//! function of the pair that vanishes at `x = 0`.

use crate::error::{PwError, Result};
use crate::function::{ExtendedReal, PwFunction, SpectralClass};
use crate::lebesgue::abs_cont_part;
use crate::linalg::{eig_hermitian, op_norm, psd_sqrt, CMatrix, CVector, HermitianMatrix, PsdMatrix, SpectralDecomposition};
use crate::rep::{build_rep, check_same_dim, PwRepresentation};
use crate::tol::ToleranceConfig;

#[derive(Debug, Clone)]
pub struct RnResult {
    /// `h(XX*)`.
    pub h: PsdMatrix,
    /// `H^{1/2} A^{1/2}`.
    pub z: CMatrix,
    /// `||Z*Z - target||_2 / ||target||_2` (absolute when the target is 0).
    pub residual: f64,
    /// Largest value of `h` on the retained spectrum.
    pub condition: f64,
    /// Eigenvalues of `XX*` classified as zero; `h` is suppressed there.
    pub infinite_directions: usize,
    /// Retained eigenvalues of `XX*` below `10 zero_tol`.
    pub near_singular: usize,
}

impl RnResult {
    /// `Z*Z = A^{1/2} H A^{1/2}`.
    pub fn form(&self) -> CMatrix {
        self.z.adjoint() * &self.z
    }
}

struct Prepared {
    rep: PwRepresentation,
    xx: SpectralDecomposition,
}

fn prepare(a: &PsdMatrix, b: &PsdMatrix, tol: &ToleranceConfig) -> Result<Prepared> {
    check_same_dim(a, b)?;
    let spec = a.spectrum();
    let cut = tol.support_threshold(a.dim(), spec.max_eigenvalue());
    if a.dim() > 0 && spec.min_eigenvalue() <= cut {
        return Err(PwError::Precondition(format!(
            "A must be nonsingular: smallest eigenvalue {:e} is at or below the support cutoff {cut:e}",
            spec.min_eigenvalue()
        )));
    }
    let rep = build_rep(a, b, tol)?;
    let xx = eig_hermitian(&HermitianMatrix::symmetrized(rep.x() * rep.x().adjoint()))?;
    Ok(Prepared { rep, xx })
}

fn relative_residual(approx: &CMatrix, target: &CMatrix) -> f64 {
    let diff = op_norm(&(approx - target));
    let scale = op_norm(target);
    if scale > 0.0 {
        diff / scale
    } else {
        diff
    }
}

fn assemble(
    a: &PsdMatrix,
    xx: &SpectralDecomposition,
    h_values: Vec<f64>,
    target: &CMatrix,
    tol: &ToleranceConfig,
) -> Result<RnResult> {
    let zt = tol.zero_tol;
    let infinite_directions = xx.eigenvalues.iter().filter(|&&x| x <= zt).count();
    let near_singular = xx.eigenvalues.iter().filter(|&&x| x > zt && x < 10.0 * zt).count();
    let condition = xx
        .eigenvalues
        .iter()
        .zip(&h_values)
        .filter(|(&x, _)| x > zt)
        .map(|(_, &h)| h)
        .fold(0.0_f64, f64::max);
    let h = PsdMatrix::from_constructed(xx.weighted(&h_values), tol)?;
    let z = psd_sqrt(&h).matrix() * psd_sqrt(a).matrix();
    let residual = relative_residual(&(z.adjoint() * &z), target);
    Ok(RnResult { h, z, residual, condition, infinite_directions, near_singular })
}

/// `h(x) = (1 - x)/x`, zero on eigenvalues classified as 0 or 1.
fn rn_weight(x: f64, tol: &ToleranceConfig) -> f64 {
    match SpectralClass::of(x, tol.zero_tol, tol.one_tol) {
        SpectralClass::Interior => (1.0 - x) / x,
        _ => 0.0,
    }
}

/// `H = h(XX*)` and `Z = H^{1/2} A^{1/2}` with `Z*Z = B_c`.
pub fn rn_factor(a: &PsdMatrix, b: &PsdMatrix, tol: &ToleranceConfig) -> Result<RnResult> {
    let prep = prepare(a, b, tol)?;
    let h_values: Vec<f64> = prep.xx.eigenvalues.iter().map(|&x| rn_weight(x, tol)).collect();
    let bc = abs_cont_part(a, b, tol)?;
    assemble(a, &prep.xx, h_values, bc.matrix(), tol)
}

/// `f(A, B)` written as `A^{1/2} h_f(XX*) A^{1/2}` with `h_f(x) = f(x)/x`.
/// The residual is measured against the direct calculus value.
pub fn kubo_ando_form(a: &PsdMatrix, b: &PsdMatrix, f: &PwFunction, tol: &ToleranceConfig) -> Result<RnResult> {
    if !f.vanishes_at_zero() {
        return Err(PwError::Input(format!("{} does not vanish at x = 0 (f(0) = {})", f.id(), f.f0())));
    }
    let prep = prepare(a, b, tol)?;
    let mut h_values = Vec::with_capacity(prep.xx.dim());
    for &x in &prep.xx.eigenvalues {
        let class = SpectralClass::of(x, tol.zero_tol, tol.one_tol);
        let v = f.classified(class, x)?;
        if v.is_infinite() {
            return Err(PwError::ExtendedValue { function: f.id().to_string() });
        }
        if v < 0.0 {
            return Err(PwError::Input(format!("{} is negative ({v:e}) at spectral point {x}", f.id())));
        }
        h_values.push(match class {
            SpectralClass::Zero => 0.0,
            SpectralClass::One => v,
            SpectralClass::Interior => v / x,
        });
    }
    let direct = prep.rep.evaluate(f)?.matrix;
    assemble(a, &prep.xx, h_values, direct.matrix(), tol)
}

/// `p(xi) = sum_i h(x_i) ||P_i xi||^2` over the spectrum of `XX*`.
pub fn form_p(a: &PsdMatrix, b: &PsdMatrix, xi: &CVector, tol: &ToleranceConfig) -> Result<ExtendedReal> {
    if xi.len() != a.dim() {
        return Err(PwError::DimensionMismatch { expected: a.dim(), got: xi.len() });
    }
    let prep = prepare(a, b, tol)?;
    let coords = prep.xx.basis.adjoint() * xi;
    let value = prep
        .xx
        .eigenvalues
        .iter()
        .zip(coords.iter())
        .map(|(&x, c)| rn_weight(x, tol) * c.norm_sqr())
        .sum();
    Ok(ExtendedReal::Finite(value))
}
