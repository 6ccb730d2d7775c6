//! Dense Hermitian linear algebra: validated matrix types, a cyclic Jacobi
//! eigensolver, square roots, pseudo-inverse roots, support projections,
//! polar parts and Kronecker products.
//!
//! Everything here is a pure function of its inputs. Eigenvector phases are
//! not canonical, so callers only ever compare basis-independent objects
//! (full matrices, projections, eigenvalue lists).

use nalgebra::{Complex, DMatrix, DVector};

use crate::error::{PwError, Result};
use crate::tol::ToleranceConfig;

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

const MAX_SWEEPS: usize = 100;

/// A square complex matrix equal to its own adjoint.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    entries: CMatrix,
}

impl HermitianMatrix {
    /// Validates symmetry within `herm_tol * max(1, max |entry|)` and stores
    /// the exactly symmetrized matrix `(M + M*) / 2`.
    pub fn new(entries: CMatrix, tol: &ToleranceConfig) -> Result<Self> {
        if !entries.is_square() {
            return Err(PwError::Input(format!(
                "matrix must be square, got {}x{}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(PwError::Input("matrix has non-finite entries".into()));
        }
        let n = entries.nrows();
        let scale = entries.iter().map(|z| z.norm()).fold(1.0_f64, f64::max);
        let mut asymmetry = 0.0_f64;
        for i in 0..n {
            for j in i..n {
                asymmetry = asymmetry.max((entries[(i, j)] - entries[(j, i)].conj()).norm());
            }
        }
        let bound = tol.herm_tol * scale;
        if asymmetry > bound {
            return Err(PwError::NotHermitian { asymmetry, tol: bound });
        }
        Ok(Self::symmetrized(entries))
    }

    /// Symmetrizes without validation; for matrices Hermitian by construction.
    pub(crate) fn symmetrized(m: CMatrix) -> Self {
        let n = m.nrows();
        let mut out = CMatrix::zeros(n, n);
        for i in 0..n {
            out[(i, i)] = C64::new(m[(i, i)].re, 0.0);
            for j in (i + 1)..n {
                let z = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
                out[(i, j)] = z;
                out[(j, i)] = z.conj();
            }
        }
        Self { entries: out }
    }

    /// Builds a real symmetric matrix from row-major entries.
    pub fn from_real(n: usize, rows: &[f64], tol: &ToleranceConfig) -> Result<Self> {
        if rows.len() != n * n {
            return Err(PwError::DimensionMismatch { expected: n * n, got: rows.len() });
        }
        Self::new(CMatrix::from_fn(n, n, |i, j| C64::new(rows[i * n + j], 0.0)), tol)
    }

    pub fn identity(n: usize) -> Self {
        Self { entries: CMatrix::identity(n, n) }
    }

    pub fn zeros(n: usize) -> Self {
        Self { entries: CMatrix::zeros(n, n) }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.entries
    }

    pub fn into_matrix(self) -> CMatrix {
        self.entries
    }

    pub fn trace(&self) -> f64 {
        self.entries.diagonal().iter().map(|z| z.re).sum()
    }
}

/// Eigenvalues in ascending order with an orthonormal eigenbasis (columns).
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub basis: CMatrix,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    /// `sum_i f(lambda_i) v_i v_i*`.
    pub fn apply(&self, mut f: impl FnMut(f64) -> f64) -> CMatrix {
        let weights: Vec<f64> = self.eigenvalues.iter().map(|&x| f(x)).collect();
        self.weighted(&weights)
    }

    /// `sum_i w_i v_i v_i*` for per-eigenvector weights.
    pub fn weighted(&self, weights: &[f64]) -> CMatrix {
        let n = self.basis.nrows();
        let mut scaled = self.basis.clone();
        for (j, &w) in weights.iter().enumerate() {
            scaled.column_mut(j).scale_mut(w);
        }
        if n == 0 {
            return CMatrix::zeros(0, 0);
        }
        &scaled * self.basis.adjoint()
    }

    pub fn reconstruct(&self) -> CMatrix {
        self.apply(|x| x)
    }
}

/// Cyclic two-sided Jacobi eigensolver for Hermitian matrices.
///
/// Rotations are skipped once `|a_pq| <= eps * sqrt(|a_pp a_qq|)`, which keeps
/// small eigenvalues accurate relative to their own size. The sweep order is
/// fixed, so identical input bits give identical output bits.
pub fn eig_hermitian(m: &HermitianMatrix) -> Result<SpectralDecomposition> {
    jacobi(m.matrix().clone())
}

fn jacobi(mut a: CMatrix) -> Result<SpectralDecomposition> {
    let n = a.nrows();
    let mut v = CMatrix::identity(n, n);
    let mut converged = n < 2;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let mag = apq.norm();
                if mag == 0.0 {
                    continue;
                }
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                if mag <= f64::EPSILON * (app.abs() * aqq.abs()).sqrt() || mag < f64::MIN_POSITIVE {
                    a[(p, q)] = C64::new(0.0, 0.0);
                    a[(q, p)] = C64::new(0.0, 0.0);
                    continue;
                }
                rotated = true;
                let phase = (apq / mag).conj();
                let theta = (aqq - app) / (2.0 * mag);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    let sign = if theta >= 0.0 { 1.0 } else { -1.0 };
                    sign / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // J = diag(1, e^{-i arg a_pq}) * [[c, s], [-s, c]]
                let jpp = C64::new(c, 0.0);
                let jpq = C64::new(s, 0.0);
                let jqp = phase * (-s);
                let jqq = phase * c;
                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    let new_kp = akp * jpp + akq * jqp;
                    let new_kq = akp * jpq + akq * jqq;
                    a[(k, p)] = new_kp;
                    a[(p, k)] = new_kp.conj();
                    a[(k, q)] = new_kq;
                    a[(q, k)] = new_kq.conj();
                }
                a[(p, p)] = C64::new(app - t * mag, 0.0);
                a[(q, q)] = C64::new(aqq + t * mag, 0.0);
                a[(p, q)] = C64::new(0.0, 0.0);
                a[(q, p)] = C64::new(0.0, 0.0);
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * jpp + vkq * jqp;
                    v[(k, q)] = vkp * jpq + vkq * jqq;
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(PwError::Numeric(format!(
            "Jacobi eigensolver did not converge within {MAX_SWEEPS} sweeps"
        )));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let eigenvalues = order.iter().map(|&i| a[(i, i)].re).collect();
    let basis = CMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok(SpectralDecomposition { eigenvalues, basis })
}

/// Hermitian matrix with nonnegative spectrum; eigenvalues in
/// `[-psd_tol, 0)` are clamped to zero on construction.
#[derive(Debug, Clone, PartialEq)]
pub struct PsdMatrix {
    base: HermitianMatrix,
    spectrum: SpectralDecomposition,
    min_eig: f64,
}

impl PsdMatrix {
    pub fn new(base: HermitianMatrix, tol: &ToleranceConfig) -> Result<Self> {
        let spectrum = eig_hermitian(&base)?;
        let min_eig = spectrum.min_eigenvalue();
        let norm = spectrum
            .eigenvalues
            .iter()
            .fold(0.0_f64, |m, x| m.max(x.abs()));
        let psd_tol = tol.psd_rel_tol * norm;
        if min_eig < -psd_tol {
            return Err(PwError::NotPsd { min_eig, tol: psd_tol });
        }
        if min_eig < 0.0 {
            let mut clamped = spectrum;
            for x in clamped.eigenvalues.iter_mut() {
                *x = x.max(0.0);
            }
            let base = HermitianMatrix::symmetrized(clamped.reconstruct());
            return Ok(Self { base, spectrum: clamped, min_eig });
        }
        Ok(Self { base, spectrum, min_eig })
    }

    /// Validates a raw matrix as Hermitian and then as PSD.
    pub fn from_matrix(m: CMatrix, tol: &ToleranceConfig) -> Result<Self> {
        Self::new(HermitianMatrix::new(m, tol)?, tol)
    }

    pub fn from_real(n: usize, rows: &[f64], tol: &ToleranceConfig) -> Result<Self> {
        Self::new(HermitianMatrix::from_real(n, rows, tol)?, tol)
    }

    /// Builds from a matrix that is PSD by construction up to rounding.
    pub(crate) fn from_constructed(m: CMatrix, tol: &ToleranceConfig) -> Result<Self> {
        Self::new(HermitianMatrix::symmetrized(m), tol).map_err(|e| match e {
            PwError::NotPsd { min_eig, tol } => PwError::Numeric(format!(
                "constructed operator lost positivity (min eigenvalue {min_eig:e}, tolerance {tol:e})"
            )),
            other => other,
        })
    }

    fn from_spectrum(spectrum: SpectralDecomposition) -> Self {
        let base = HermitianMatrix::symmetrized(spectrum.reconstruct());
        let min_eig = spectrum.min_eigenvalue();
        Self { base, spectrum, min_eig }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_spectrum(SpectralDecomposition {
            eigenvalues: vec![1.0; n],
            basis: CMatrix::identity(n, n),
        })
    }

    pub fn zeros(n: usize) -> Self {
        Self::from_spectrum(SpectralDecomposition {
            eigenvalues: vec![0.0; n],
            basis: CMatrix::identity(n, n),
        })
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn hermitian(&self) -> &HermitianMatrix {
        &self.base
    }

    pub fn matrix(&self) -> &CMatrix {
        self.base.matrix()
    }

    pub fn spectrum(&self) -> &SpectralDecomposition {
        &self.spectrum
    }

    /// Smallest eigenvalue seen at validation, before clamping.
    pub fn min_eig(&self) -> f64 {
        self.min_eig
    }

    pub fn trace(&self) -> f64 {
        self.base.trace()
    }

    pub fn scaled(&self, t: f64) -> Self {
        assert!(t >= 0.0, "PSD matrices only scale by nonnegative factors");
        let mut spectrum = self.spectrum.clone();
        for x in spectrum.eigenvalues.iter_mut() {
            *x *= t;
        }
        Self {
            base: HermitianMatrix::symmetrized(self.matrix() * C64::new(t, 0.0)),
            spectrum,
            min_eig: self.min_eig * t,
        }
    }

    pub fn add(&self, other: &Self, tol: &ToleranceConfig) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(PwError::DimensionMismatch { expected: self.dim(), got: other.dim() });
        }
        Self::from_constructed(self.matrix() + other.matrix(), tol)
    }

    /// Spectral norm (largest eigenvalue).
    pub fn norm(&self) -> f64 {
        self.spectrum.max_eigenvalue().max(0.0)
    }
}

/// Principal square root, computed spectrally.
pub fn psd_sqrt(m: &PsdMatrix) -> PsdMatrix {
    let mut spectrum = m.spectrum().clone();
    for x in spectrum.eigenvalues.iter_mut() {
        *x = x.max(0.0).sqrt();
    }
    PsdMatrix::from_spectrum(spectrum)
}

/// Moore-Penrose pseudo-inverse of `psd_sqrt(m)`; eigenvalues at or below
/// the support cutoff are inverted to zero.
pub fn pinv_sqrt(m: &PsdMatrix, tol: &ToleranceConfig) -> HermitianMatrix {
    let spec = m.spectrum();
    let cut = tol.support_threshold(m.dim(), spec.max_eigenvalue());
    HermitianMatrix::symmetrized(spec.apply(|x| if x > cut { 1.0 / x.sqrt() } else { 0.0 }))
}

/// Orthogonal projection onto the range of `m`.
pub fn support_projection(m: &PsdMatrix, tol: &ToleranceConfig) -> HermitianMatrix {
    let spec = m.spectrum();
    let cut = tol.support_threshold(m.dim(), spec.max_eigenvalue());
    HermitianMatrix::symmetrized(spec.apply(|x| if x > cut { 1.0 } else { 0.0 }))
}

/// Partial isometry `W` of the polar decomposition `M = W (M*M)^{1/2}`.
///
/// Directions where `M*M` has eigenvalue at or below
/// `cols * eps * largest_eigenvalue` are treated as kernel.
pub fn polar_isometry(m: &CMatrix) -> Result<CMatrix> {
    let gram = HermitianMatrix::symmetrized(m.adjoint() * m);
    let spec = eig_hermitian(&gram)?;
    let cut = m.ncols() as f64 * f64::EPSILON * spec.max_eigenvalue().max(0.0);
    Ok(polar_from_gram(m, &spec, |x| x > cut))
}

/// `M * sum_{keep(x_i)} x_i^{-1/2} P_i` where `sum x_i P_i` is the given
/// spectral decomposition of `M*M`.
pub(crate) fn polar_from_gram(
    m: &CMatrix,
    gram: &SpectralDecomposition,
    keep: impl Fn(f64) -> bool,
) -> CMatrix {
    let inv_root = gram.apply(|x| if keep(x) && x > 0.0 { 1.0 / x.sqrt() } else { 0.0 });
    m * inv_root
}

/// Kronecker product `m (x) n` with row index `i1 * n2 + i2`.
pub fn kron(m: &CMatrix, n: &CMatrix, max_dim: usize) -> Result<CMatrix> {
    let rows = m.nrows().checked_mul(n.nrows());
    let cols = m.ncols().checked_mul(n.ncols());
    match (rows, cols) {
        (Some(r), Some(c)) if r <= max_dim && c <= max_dim => {}
        _ => {
            return Err(PwError::Input(format!(
                "Kronecker product of {}x{} and {}x{} exceeds the dimension limit {max_dim}",
                m.nrows(),
                m.ncols(),
                n.nrows(),
                n.ncols()
            )))
        }
    }
    let (r2, c2) = (n.nrows(), n.ncols());
    Ok(CMatrix::from_fn(m.nrows() * r2, m.ncols() * c2, |i, j| {
        m[(i / r2, j / c2)] * n[(i % r2, j % c2)]
    }))
}

/// Kronecker product of two PSD matrices, which is again PSD.
pub fn kron_psd(m: &PsdMatrix, n: &PsdMatrix, tol: &ToleranceConfig) -> Result<PsdMatrix> {
    PsdMatrix::from_constructed(kron(m.matrix(), n.matrix(), tol.max_kron_dim)?, tol)
}

/// Operator 2-norm (largest singular value).
pub fn op_norm(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    let gram = if m.nrows() >= m.ncols() { m.adjoint() * m } else { m * m.adjoint() };
    match eig_hermitian(&HermitianMatrix::symmetrized(gram)) {
        Ok(spec) => spec.max_eigenvalue().max(0.0).sqrt(),
        Err(_) => m.norm(),
    }
}

/// Smallest eigenvalue of a Hermitian matrix given as raw entries.
pub fn min_eigenvalue(m: &CMatrix) -> Result<f64> {
    Ok(eig_hermitian(&HermitianMatrix::symmetrized(m.clone()))?.min_eigenvalue())
}

/// `true` when `lower <= upper + slack * I` in the PSD order.
pub fn psd_le(lower: &CMatrix, upper: &CMatrix, slack: f64) -> Result<bool> {
    Ok(min_eigenvalue(&(upper - lower))? >= -slack)
}

pub fn real_matrix(n: usize, rows: &[f64]) -> CMatrix {
    assert_eq!(rows.len(), n * n);
    CMatrix::from_fn(n, n, |i, j| C64::new(rows[i * n + j], 0.0))
}

pub fn real_diag(values: &[f64]) -> CMatrix {
    let n = values.len();
    CMatrix::from_fn(n, n, |i, j| C64::new(if i == j { values[i] } else { 0.0 }, 0.0))
}
