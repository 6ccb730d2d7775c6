//! Lebesgue decomposition `B = B_c + B_s` relative to `A`, the projection
//! `P_{A,B}` with `B_c = B^{1/2} P B^{1/2}`, singularity and absolute
//! continuity tests, and parallel sums with the limit `(nA):B -> B_c`.

use crate::error::Result;
use crate::function::{PwFunction, SpectralClass};
use crate::linalg::{eig_hermitian, op_norm, support_projection, CMatrix, HermitianMatrix, PsdMatrix};
use crate::rep::{build_rep, check_same_dim, PwRepresentation};
use crate::tol::ToleranceConfig;

/// PSD-order slack used when checking monotonicity of parallel-sum iterates.
const MONOTONE_SLACK: f64 = 1e-9;
/// Distance of `P_{A,B}` from the identity below which `B` counts as
/// absolutely continuous.
const ABS_CONT_LIMIT: f64 = 1e-7;

#[derive(Debug, Clone)]
pub struct LebesgueDiagnostics {
    /// Rank of `A + B`.
    pub rank: usize,
    /// Eigenvalues of `R` classified as zero.
    pub num_zero_eigs: usize,
    /// Distance of the smallest retained eigenvalue of `R` above `zero_tol`.
    pub spectral_margin: Option<f64>,
    /// `||B - B_c - B_s||_2`.
    pub residual_sum: f64,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct LebesgueDecomposition {
    pub bc: PsdMatrix,
    pub bs: PsdMatrix,
    pub p: HermitianMatrix,
    pub diagnostics: LebesgueDiagnostics,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SingularityCheck {
    pub singular: bool,
    /// Eigenvalue of `R` farthest from `{0, 1}`, if `R` is nonempty.
    pub witness: Option<f64>,
    /// Distance of the witness from `{0, 1}`.
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AbsContinuity {
    pub abs_continuous: bool,
    /// `||P_{A,B} - I||_2`.
    pub deviation: f64,
}

#[derive(Debug, Clone)]
pub struct ParallelSumLimit {
    pub limit: PsdMatrix,
    /// `(2^k A):B` for `k = 0, 1, ...` up to the stopping index.
    pub iterates: Vec<HermitianMatrix>,
    /// Frobenius distance between consecutive iterates.
    pub gaps: Vec<f64>,
    pub converged: bool,
    /// Whether every step was nondecreasing in the PSD order (with slack).
    pub monotone: bool,
}

/// The four closed forms of `A:B` written through `X` and `Y`.
#[derive(Debug, Clone)]
pub struct ParallelSumExpressions {
    /// `B^{1/2} (I - Y Y*) B^{1/2}`
    pub e1: CMatrix,
    /// `A^{1/2} (I - X X*) A^{1/2}`
    pub e2: CMatrix,
    /// `A^{1/2} X Y* B^{1/2}`
    pub e3: CMatrix,
    /// `B^{1/2} Y X* A^{1/2}`
    pub e4: CMatrix,
}

fn eval_psd(rep: &PwRepresentation, f: &PwFunction) -> Result<PsdMatrix> {
    PsdMatrix::from_constructed(rep.evaluate(f)?.matrix.into_matrix(), rep.tolerances())
}

/// `[A]B`, the maximal part of `B` absolutely continuous with respect to `A`.
pub fn abs_cont_part(a: &PsdMatrix, b: &PsdMatrix, tol: &ToleranceConfig) -> Result<PsdMatrix> {
    eval_psd(&build_rep(a, b, tol)?, &PwFunction::abs_part())
}

pub fn lebesgue_decompose(a: &PsdMatrix, b: &PsdMatrix, tol: &ToleranceConfig) -> Result<LebesgueDecomposition> {
    let rep = build_rep(a, b, tol)?;
    let bc = eval_psd(&rep, &PwFunction::abs_part())?;
    // computed spectrally, not as B - B_c
    let bs = eval_psd(&rep, &PwFunction::singular_part())?;
    let p = projection_from_rep(&rep)?;
    let residual_sum = op_norm(&(b.matrix() - bc.matrix() - bs.matrix()));

    let mut warnings: Vec<String> = rep.margin_warning().into_iter().collect();
    let check = is_mutually_singular(a, &bs, tol)?;
    if !check.singular {
        warnings.push(format!(
            "singular part is not numerically singular to A: R-eigenvalue {:e} lies {:e} from {{0, 1}} (tolerance max(zero_tol, one_tol) = {:e})",
            check.witness.unwrap_or(f64::NAN),
            check.distance,
            tol.zero_tol.max(tol.one_tol)
        ));
    }
    Ok(LebesgueDecomposition {
        bc,
        bs,
        p,
        diagnostics: LebesgueDiagnostics {
            rank: rep.rank(),
            num_zero_eigs: rep.count_class(SpectralClass::Zero),
            spectral_margin: rep.zero_margin(),
            residual_sum,
            warnings,
        },
    })
}

/// `1_{(0, inf)}(I - Y Y*)`: the projection with `[A]B = B^{1/2} P B^{1/2}`.
pub fn projection_p(a: &PsdMatrix, b: &PsdMatrix, tol: &ToleranceConfig) -> Result<HermitianMatrix> {
    projection_from_rep(&build_rep(a, b, tol)?)
}

pub(crate) fn projection_from_rep(rep: &PwRepresentation) -> Result<HermitianMatrix> {
    let one_tol = rep.tolerances().one_tol;
    let yy = HermitianMatrix::symmetrized(rep.y() * rep.y().adjoint());
    let spec = eig_hermitian(&yy)?;
    Ok(HermitianMatrix::symmetrized(spec.apply(|e| if e < 1.0 - one_tol { 1.0 } else { 0.0 })))
}

/// Projection onto `{xi : B^{1/2} xi in ran A^{1/2}}`, computed directly as
/// the kernel of `(I - P_ran(A)) B^{1/2}` without the pair representation.
pub fn solvable_subspace_projection(
    a: &PsdMatrix,
    b: &PsdMatrix,
    tol: &ToleranceConfig,
) -> Result<HermitianMatrix> {
    check_same_dim(a, b)?;
    let n = a.dim();
    let p_a = support_projection(a, tol);
    let b_sqrt = crate::linalg::psd_sqrt(b);
    let m = (CMatrix::identity(n, n) - p_a.matrix()) * b_sqrt.matrix();
    let gram = HermitianMatrix::symmetrized(m.adjoint() * &m);
    let spec = eig_hermitian(&gram)?;
    let cut = tol.support_threshold(n, b.norm());
    Ok(HermitianMatrix::symmetrized(spec.apply(|g| if g <= cut { 1.0 } else { 0.0 })))
}

/// `A` and `B` are mutually singular iff `R` is a projection. The zero pair
/// is singular.
pub fn is_mutually_singular(a: &PsdMatrix, b: &PsdMatrix, tol: &ToleranceConfig) -> Result<SingularityCheck> {
    let rep = build_rep(a, b, tol)?;
    let limit = tol.zero_tol.max(tol.one_tol);
    let mut witness = None;
    let mut distance = 0.0_f64;
    for &x in &rep.r_spectrum().eigenvalues {
        let d = x.abs().min((1.0 - x).abs());
        if witness.is_none() || d > distance {
            witness = Some(x);
            distance = d;
        }
    }
    Ok(SingularityCheck { singular: distance <= limit, witness, distance })
}

/// `B` is `A`-absolutely continuous iff `P_{A,B} = I`.
pub fn is_abs_continuous(a: &PsdMatrix, b: &PsdMatrix, tol: &ToleranceConfig) -> Result<AbsContinuity> {
    let p = projection_p(a, b, tol)?;
    let n = a.dim();
    let deviation = op_norm(&(p.matrix() - CMatrix::identity(n, n)));
    Ok(AbsContinuity { abs_continuous: deviation < ABS_CONT_LIMIT, deviation })
}

/// `A:B`, the functional calculus of `xy / (x + y)`.
pub fn parallel_sum(a: &PsdMatrix, b: &PsdMatrix, tol: &ToleranceConfig) -> Result<PsdMatrix> {
    eval_psd(&build_rep(a, b, tol)?, &PwFunction::parallel())
}

/// `(nA):B`, evaluated through the representation of `(A, B)` as the
/// calculus of `nxy / (nx + y)`. This avoids forming `nA + B`, whose
/// conditioning grows with `n`.
pub fn scaled_parallel_sum(a: &PsdMatrix, b: &PsdMatrix, n: f64, tol: &ToleranceConfig) -> Result<PsdMatrix> {
    eval_psd(&build_rep(a, b, tol)?, &PwFunction::scaled_parallel(n)?)
}

/// Iterates `(2^k A):B` until consecutive iterates are within `conv_tol`
/// (Frobenius) or `k` reaches `max_doublings`.
pub fn parallel_sum_limit(a: &PsdMatrix, b: &PsdMatrix, tol: &ToleranceConfig) -> Result<ParallelSumLimit> {
    let rep = build_rep(a, b, tol)?;
    let slack = MONOTONE_SLACK * b.norm().max(1.0);
    let mut iterates: Vec<HermitianMatrix> = Vec::new();
    let mut gaps = Vec::new();
    let mut converged = false;
    let mut monotone = true;
    for k in 0..=tol.max_doublings {
        let f = PwFunction::scaled_parallel(2f64.powi(k as i32))?;
        let current = rep.evaluate(&f)?.matrix;
        if let Some(prev) = iterates.last() {
            let step = current.matrix() - prev.matrix();
            gaps.push(step.norm());
            if crate::linalg::min_eigenvalue(&step)? < -slack {
                monotone = false;
            }
        }
        iterates.push(current);
        if gaps.last().is_some_and(|&g| g < tol.conv_tol) {
            converged = true;
            break;
        }
    }
    let last = iterates.last().expect("at least one iterate").matrix().clone();
    Ok(ParallelSumLimit {
        limit: PsdMatrix::from_constructed(last, tol)?,
        iterates,
        gaps,
        converged,
        monotone,
    })
}

pub fn parallel_sum_expressions(
    a: &PsdMatrix,
    b: &PsdMatrix,
    tol: &ToleranceConfig,
) -> Result<ParallelSumExpressions> {
    let rep = build_rep(a, b, tol)?;
    let n = a.dim();
    let id = CMatrix::identity(n, n);
    let (ra, rb) = (rep.a_sqrt().matrix(), rep.b_sqrt().matrix());
    let (x, y) = (rep.x(), rep.y());
    Ok(ParallelSumExpressions {
        e1: rb * (&id - y * y.adjoint()) * rb,
        e2: ra * (&id - x * x.adjoint()) * ra,
        e3: ra * x * y.adjoint() * rb,
        e4: rb * y * x.adjoint() * ra,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{real_diag, real_matrix};

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn psd(n: usize, rows: &[f64]) -> PsdMatrix {
        PsdMatrix::from_real(n, rows, &tol()).unwrap()
    }

    fn ando() -> (PsdMatrix, PsdMatrix) {
        (psd(2, &[1.0, 0.0, 0.0, 0.0]), psd(2, &[1.0, 1.0, 1.0, 1.0]))
    }

    #[test]
    fn commuting_diagonal_decomposition() {
        let a = psd(3, &[1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0]);
        let b = psd(3, &[5.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 3.0]);
        let d = lebesgue_decompose(&a, &b, &tol()).unwrap();
        assert!((d.bc.matrix() - real_diag(&[5.0, 0.0, 0.0])).camax() < 1e-14);
        assert!((d.bs.matrix() - real_diag(&[0.0, 0.0, 3.0])).camax() < 1e-14);
        assert!(d.diagnostics.warnings.is_empty());
    }

    #[test]
    fn degenerate_first_argument() {
        let b = psd(2, &[2.0, 1.0, 1.0, 3.0]);
        let zero = PsdMatrix::zeros(2);
        assert!(abs_cont_part(&zero, &b, &tol()).unwrap().matrix().camax() < 1e-15);
        let a = psd(2, &[1.0, 0.2, 0.2, 0.5]);
        assert!((abs_cont_part(&a, &b, &tol()).unwrap().matrix() - b.matrix()).camax() < 1e-13);
        assert!(abs_cont_part(&a, &zero, &tol()).unwrap().matrix().camax() < 1e-15);
    }

    #[test]
    fn identity_first_argument() {
        let b = psd(2, &[2.0, 1.0, 1.0, 3.0]);
        let d = lebesgue_decompose(&PsdMatrix::identity(2), &b, &tol()).unwrap();
        assert!((d.bc.matrix() - b.matrix()).camax() < 1e-13);
        assert!(d.bs.matrix().camax() < 1e-13);
        assert!((d.p.matrix() - CMatrix::identity(2, 2)).camax() < 1e-13);
        assert!((projection_p(&PsdMatrix::identity(2), &b, &tol()).unwrap().matrix() - CMatrix::identity(2, 2)).camax() < 1e-13);
    }

    #[test]
    fn ando_pair() {
        let (a, b) = ando();
        let d = lebesgue_decompose(&a, &b, &tol()).unwrap();
        assert!(d.bc.matrix().camax() < 1e-10);
        assert!((d.bs.matrix() - b.matrix()).camax() < 1e-10);
        let expected_p = real_matrix(2, &[0.5, -0.5, -0.5, 0.5]);
        assert!((d.p.matrix() - &expected_p).camax() < 1e-10);
        let s = solvable_subspace_projection(&a, &b, &tol()).unwrap();
        assert!((s.matrix() - &expected_p).camax() < 1e-10);
        assert!(is_mutually_singular(&a, &b, &tol()).unwrap().singular);
        assert!(!is_abs_continuous(&a, &b, &tol()).unwrap().abs_continuous);
        let lim = parallel_sum_limit(&a, &b, &tol()).unwrap();
        assert!(lim.iterates.iter().all(|it| it.matrix().camax() < 1e-10));
        assert!(lim.converged);
    }

    #[test]
    fn solvable_subspace_trivial_cases() {
        let b = psd(2, &[2.0, 1.0, 1.0, 3.0]);
        let a = psd(2, &[1.0, 0.2, 0.2, 0.5]);
        let s = solvable_subspace_projection(&a, &b, &tol()).unwrap();
        assert!((s.matrix() - CMatrix::identity(2, 2)).camax() < 1e-12);
        let s = solvable_subspace_projection(&psd(2, &[1.0, 0.0, 0.0, 0.0]), &PsdMatrix::zeros(2), &tol()).unwrap();
        assert!((s.matrix() - CMatrix::identity(2, 2)).camax() < 1e-12);
    }

    #[test]
    fn singularity_examples() {
        let c = is_mutually_singular(&psd(2, &[1.0, 0.0, 0.0, 0.0]), &psd(2, &[0.0, 0.0, 0.0, 1.0]), &tol()).unwrap();
        assert!(c.singular);
        let i = PsdMatrix::identity(2);
        let c = is_mutually_singular(&i, &i, &tol()).unwrap();
        assert!(!c.singular);
        assert!((c.witness.unwrap() - 0.5).abs() < 1e-15);
        let z = PsdMatrix::zeros(2);
        let c = is_mutually_singular(&z, &z, &tol()).unwrap();
        assert!(c.singular);
        assert_eq!(c.witness, None);
    }

    #[test]
    fn abs_continuity_examples() {
        let a = psd(2, &[2.0, 1.0, 1.0, 1.0]);
        assert!(is_abs_continuous(&a, &a.scaled(0.5), &tol()).unwrap().abs_continuous);
        let d = is_abs_continuous(&psd(2, &[1.0, 0.0, 0.0, 0.0]), &psd(2, &[0.0, 0.0, 0.0, 1.0]), &tol()).unwrap();
        assert!(!d.abs_continuous);
    }

    #[test]
    fn parallel_sum_examples() {
        let i = PsdMatrix::identity(2);
        let half = parallel_sum(&i, &i, &tol()).unwrap();
        assert!((half.matrix() - real_diag(&[0.5, 0.5])).camax() < 1e-15);
        let z = parallel_sum(&psd(2, &[1.0, 0.0, 0.0, 0.0]), &psd(2, &[0.0, 0.0, 0.0, 1.0]), &tol()).unwrap();
        assert!(z.matrix().camax() < 1e-15);
    }

    #[test]
    fn limit_at_identity_follows_scalar_formula() {
        let i = PsdMatrix::identity(2);
        let lim = parallel_sum_limit(&i, &i, &tol()).unwrap();
        for (k, it) in lim.iterates.iter().enumerate() {
            let n = 2f64.powi(k as i32);
            assert!((it.matrix() - real_diag(&[n / (n + 1.0); 2])).camax() < 1e-14);
        }
        assert!(lim.converged && lim.monotone);
        assert!((lim.limit.matrix() - CMatrix::identity(2, 2)).camax() < 1e-8);
    }

    #[test]
    fn limit_reports_unconverged() {
        let i = PsdMatrix::identity(2);
        let short = ToleranceConfig { max_doublings: 3, ..tol() };
        let lim = parallel_sum_limit(&i, &i, &short).unwrap();
        assert!(!lim.converged);
        assert_eq!(lim.iterates.len(), 4);
        assert_eq!(lim.gaps.len(), 3);
    }

    #[test]
    fn expressions_at_identity() {
        let i = PsdMatrix::identity(2);
        let e = parallel_sum_expressions(&i, &i, &tol()).unwrap();
        let half = real_diag(&[0.5, 0.5]);
        for m in [&e.e1, &e.e2, &e.e3, &e.e4] {
            assert!((m - &half).camax() < 1e-15);
        }
        let one = psd(1, &[1.0]);
        let e = parallel_sum_expressions(&one, &one, &tol()).unwrap();
        assert!((e.e3[(0, 0)].re - 0.5).abs() < 1e-15);
    }
}
