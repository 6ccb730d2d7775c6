//! Weighted geometric means, the power functionals `(x/y)^alpha y`, the
//! entropy functional `x log(x/y)`, their pairings with positive functionals
//! `rho`, and the tensor-product identities they satisfy.
//!
//! Values are exactly the calculus values `f(A, B)(rho)`; no identification
//! with a named quantum divergence is implied.

use crate::error::{PwError, Result};
use crate::function::{ExtendedReal, PwFunction};
use crate::linalg::{kron_psd, PsdMatrix};
use crate::rep::build_rep;
use crate::tol::ToleranceConfig;

/// A pairing value split into its finite part and the spectral weight that
/// met `+inf`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairingResult {
    pub value: ExtendedReal,
    pub finite_part: f64,
    pub infinite_weight: f64,
}

/// Functionals with a product rule under tensor products.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TensorFunctional {
    /// `(x/y)^alpha y`, multiplicative.
    Power(f64),
    /// `x log(x/y)`, additive with weights `rho(A)`.
    Entropy,
}

impl TensorFunctional {
    pub fn function(&self) -> Result<PwFunction> {
        match *self {
            Self::Power(alpha) => PwFunction::power(alpha),
            Self::Entropy => Ok(PwFunction::entropy()),
        }
    }

    /// Recognizes `power:alpha` and `entropy`.
    pub fn from_function(f: &PwFunction) -> Result<Self> {
        let id = f.id();
        if id == "entropy" {
            return Ok(Self::Entropy);
        }
        if let Some(alpha) = id.strip_prefix("power:").and_then(|p| p.parse().ok()) {
            return Ok(Self::Power(alpha));
        }
        Err(PwError::Input(format!("tensor check supports power:ALPHA and entropy, got {id}")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TensorPairingReport {
    /// Pairing of `rho1 (x) rho2` with `f(A1 (x) A2, B1 (x) B2)`.
    pub left: ExtendedReal,
    /// The same value assembled from the factors.
    pub right: ExtendedReal,
    /// `|left - right| / max(1, |left|)` when both are finite, 0 when both
    /// are `+inf`, `+inf` when exactly one is.
    pub residual: f64,
    pub infinity_consistent: bool,
}

/// `A #_alpha B`, the calculus of `x^alpha y^(1-alpha)`.
pub fn weighted_geometric_mean(a: &PsdMatrix, b: &PsdMatrix, alpha: f64, tol: &ToleranceConfig) -> Result<PsdMatrix> {
    let f = PwFunction::geom(alpha)?;
    let out = build_rep(a, b, tol)?.evaluate(&f)?;
    PsdMatrix::from_constructed(out.matrix.into_matrix(), tol)
}

pub fn phi_alpha_pairing(
    a: &PsdMatrix,
    b: &PsdMatrix,
    alpha: f64,
    rho: &PsdMatrix,
    tol: &ToleranceConfig,
) -> Result<PairingResult> {
    build_rep(a, b, tol)?.pairing(&PwFunction::power(alpha)?, rho)
}

pub fn psi_pairing(a: &PsdMatrix, b: &PsdMatrix, rho: &PsdMatrix, tol: &ToleranceConfig) -> Result<PairingResult> {
    build_rep(a, b, tol)?.pairing(&PwFunction::entropy(), rho)
}

/// `Tr f(A, B)`, the pairing with the identity.
pub fn trace_functional(a: &PsdMatrix, b: &PsdMatrix, f: &PwFunction, tol: &ToleranceConfig) -> Result<PairingResult> {
    build_rep(a, b, tol)?.pairing(f, &PsdMatrix::identity(a.dim()))
}

/// `rho(A) = Tr(rho A)`.
fn state_value(rho: &PsdMatrix, a: &PsdMatrix) -> f64 {
    (rho.matrix() * a.matrix()).trace().re.max(0.0)
}

#[allow(clippy::too_many_arguments)]
pub fn tensor_pairing_check(
    a1: &PsdMatrix,
    b1: &PsdMatrix,
    a2: &PsdMatrix,
    b2: &PsdMatrix,
    rho1: &PsdMatrix,
    rho2: &PsdMatrix,
    functional: TensorFunctional,
    tol: &ToleranceConfig,
) -> Result<TensorPairingReport> {
    let f = functional.function()?;
    let a = kron_psd(a1, a2, tol)?;
    let b = kron_psd(b1, b2, tol)?;
    let rho = kron_psd(rho1, rho2, tol)?;
    let left = build_rep(&a, &b, tol)?.pairing(&f, &rho)?.value;
    let p1 = build_rep(a1, b1, tol)?.pairing(&f, rho1)?.value;
    let p2 = build_rep(a2, b2, tol)?.pairing(&f, rho2)?.value;
    let right = match functional {
        TensorFunctional::Power(_) => p1 * p2,
        TensorFunctional::Entropy => {
            let w2 = ExtendedReal::Finite(state_value(rho2, a2));
            let w1 = ExtendedReal::Finite(state_value(rho1, a1));
            product_signed(p1, w2) + product_signed(p2, w1)
        }
    };
    let (residual, infinity_consistent) = match (left, right) {
        (ExtendedReal::Finite(l), ExtendedReal::Finite(r)) => ((l - r).abs() / l.abs().max(1.0), true),
        (ExtendedReal::PosInfinity, ExtendedReal::PosInfinity) => (0.0, true),
        _ => (f64::INFINITY, false),
    };
    Ok(TensorPairingReport { left, right, residual, infinity_consistent })
}

// Entropy pairings may be negative; only the `+inf` case needs the 0*inf rule.
fn product_signed(value: ExtendedReal, weight: ExtendedReal) -> ExtendedReal {
    match (value, weight) {
        (ExtendedReal::Finite(v), ExtendedReal::Finite(w)) => ExtendedReal::Finite(v * w),
        _ => value * weight,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::real_diag;

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn psd(n: usize, rows: &[f64]) -> PsdMatrix {
        PsdMatrix::from_real(n, rows, &tol()).unwrap()
    }

    #[test]
    fn geometric_mean_of_equal_pair() {
        let a = psd(2, &[2.0, 0.5, 0.5, 1.0]);
        let g = weighted_geometric_mean(&a, &a, 0.3, &tol()).unwrap();
        assert!((g.matrix() - a.matrix()).camax() < 1e-13);
        assert!(weighted_geometric_mean(&a, &a, 1.5, &tol()).is_err());
    }

    #[test]
    fn power_pairing_examples() {
        let i = PsdMatrix::identity(3);
        let rho = i.scaled(1.0 / 3.0);
        let p = phi_alpha_pairing(&i, &i, 2.0, &rho, &tol()).unwrap();
        assert!((p.value.to_f64() - 1.0).abs() < 1e-14);
        let p = phi_alpha_pairing(&psd(1, &[1.0]), &psd(1, &[0.0]), 2.0, &psd(1, &[1.0]), &tol()).unwrap();
        assert_eq!(p.value, ExtendedReal::PosInfinity);
        assert!(p.infinite_weight > 0.0);
    }

    #[test]
    fn power_pairing_on_commuting_diagonals() {
        let (a, b, r): ([f64; 3], [f64; 3], [f64; 3]) = ([1.0, 2.0, 0.5], [3.0, 0.5, 2.0], [0.2, 0.3, 0.5]);
        let alpha = 1.5;
        let expected: f64 = (0..3).map(|i| r[i] * a[i].powf(alpha) * b[i].powf(1.0 - alpha)).sum();
        let p = phi_alpha_pairing(
            &PsdMatrix::from_matrix(real_diag(&a), &tol()).unwrap(),
            &PsdMatrix::from_matrix(real_diag(&b), &tol()).unwrap(),
            alpha,
            &PsdMatrix::from_matrix(real_diag(&r), &tol()).unwrap(),
            &tol(),
        )
        .unwrap();
        assert!((p.value.to_f64() - expected).abs() < 1e-13);
    }

    #[test]
    fn entropy_pairing_examples() {
        let a = psd(2, &[2.0, 0.5, 0.5, 1.0]);
        assert!(psi_pairing(&a, &a, &PsdMatrix::identity(2), &tol()).unwrap().value.to_f64().abs() < 1e-14);
        let v = psi_pairing(&psd(1, &[2.0]), &psd(1, &[1.0]), &psd(1, &[1.0]), &tol()).unwrap();
        assert!((v.value.to_f64() - 2.0 * 2f64.ln()).abs() < 1e-14);
        let v = psi_pairing(&psd(1, &[1.0]), &psd(1, &[0.0]), &psd(1, &[1.0]), &tol()).unwrap();
        assert_eq!(v.value, ExtendedReal::PosInfinity);
    }

    #[test]
    fn trace_examples() {
        let a = psd(2, &[2.0, 0.5, 0.5, 1.0]);
        let b = psd(2, &[1.0, 0.0, 0.0, 4.0]);
        let t = trace_functional(&a, &b, &PwFunction::arith(), &tol()).unwrap();
        assert!((t.value.to_f64() - 8.0).abs() < 1e-13);
        let t = trace_functional(&a, &a, &PwFunction::entropy(), &tol()).unwrap();
        assert!(t.value.to_f64().abs() < 1e-14);
    }

    #[test]
    fn tensor_check_on_identities() {
        let i = PsdMatrix::identity(2);
        let r = tensor_pairing_check(&i, &i, &i, &i, &i, &i, TensorFunctional::Entropy, &tol()).unwrap();
        assert_eq!(r.left.to_f64().abs() < 1e-14, true);
        assert!(r.residual < 1e-14 && r.infinity_consistent);
    }

    #[test]
    fn tensor_check_with_infinite_factor() {
        let a1 = psd(1, &[1.0]);
        let b1 = psd(1, &[0.0]);
        let a2 = psd(2, &[2.0, 0.5, 0.5, 1.0]);
        let b2 = psd(2, &[1.0, 0.2, 0.2, 3.0]);
        let rho2 = psd(2, &[0.5, 0.1, 0.1, 0.5]);
        let r = tensor_pairing_check(&a1, &b1, &a2, &b2, &a1, &rho2, TensorFunctional::Entropy, &tol()).unwrap();
        assert_eq!(r.left, ExtendedReal::PosInfinity);
        assert_eq!(r.right, ExtendedReal::PosInfinity);
        assert!(r.infinity_consistent);
    }

    #[test]
    fn tensor_functional_names() {
        assert_eq!(TensorFunctional::from_function(&PwFunction::entropy()).unwrap(), TensorFunctional::Entropy);
        assert_eq!(
            TensorFunctional::from_function(&PwFunction::power(2.5).unwrap()).unwrap(),
            TensorFunctional::Power(2.5)
        );
        assert!(TensorFunctional::from_function(&PwFunction::parallel()).is_err());
    }
}
