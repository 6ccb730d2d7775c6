//! The canonical representation of a pair `(A, B)` on the support of `A + B`
//! and the binary functional calculus built on it.
//!
//! With `Q` an orthonormal basis of `ran(A + B)` and `Lambda` the positive
//! eigenvalues there, `T = Lambda^{1/2} Q*` maps the ambient space onto the
//! support. The contractions `X`, `Y` solve `X T = A^{1/2}`, `Y T = B^{1/2}`,
//! and `R = X*X`, `S = Y*Y` commute with `R + S = I`. A function of the pair
//! is then `T* f(R) T`, evaluated on the spectrum of `R`.

use crate::error::{PwError, Result};
use crate::function::{ExtendedReal, PwFunction, SpectralClass};
use crate::linalg::{
    eig_hermitian, op_norm, psd_sqrt, CMatrix, HermitianMatrix, PsdMatrix, SpectralDecomposition,
};
use crate::means::PairingResult;
use crate::tol::ToleranceConfig;

/// Relative residual above which `X T = A^{1/2}` counts as a solver failure.
const FACTOR_RESIDUAL_LIMIT: f64 = 1e-6;
/// Relative round-trip residual separating dominated operators from the rest.
const DOMINATION_LIMIT: f64 = 1e-8;
/// Slack allowed on the spectrum of `R` outside `[0, 1]`.
const SPECTRUM_SLACK: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct PwRepresentation {
    n: usize,
    support_basis: CMatrix,
    lambda: Vec<f64>,
    t: CMatrix,
    x: CMatrix,
    y: CMatrix,
    r_op: CMatrix,
    s_op: CMatrix,
    u: CMatrix,
    v: CMatrix,
    spec_r: SpectralDecomposition,
    classes: Vec<SpectralClass>,
    // T* times the eigenbasis of R: columns push spectral projections of R
    // back to the ambient space.
    lifted: CMatrix,
    a_sqrt: PsdMatrix,
    b_sqrt: PsdMatrix,
    tol: ToleranceConfig,
}

/// An operator `T* f(R) T` together with how close the spectrum came to the
/// classification thresholds.
#[derive(Debug, Clone)]
pub struct Evaluation {
    pub matrix: HermitianMatrix,
    /// Smallest distance of an interior eigenvalue of `R` to either threshold.
    pub margin: Option<f64>,
}

/// Values of a sequence of pairings and their successive gaps.
#[derive(Debug, Clone)]
pub struct SequenceReport {
    pub values: Vec<ExtendedReal>,
    pub gaps: Vec<f64>,
    pub converged: bool,
}

pub fn check_same_dim(a: &PsdMatrix, b: &PsdMatrix) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(PwError::DimensionMismatch { expected: a.dim(), got: b.dim() });
    }
    Ok(())
}

/// Builds the representation of `(A, B)`.
pub fn build_rep(a: &PsdMatrix, b: &PsdMatrix, tol: &ToleranceConfig) -> Result<PwRepresentation> {
    check_same_dim(a, b)?;
    tol.validate()?;
    let n = a.dim();
    let sum = a.add(b, tol)?;
    let spec = sum.spectrum();
    let cut = tol.support_threshold(n, spec.max_eigenvalue());
    let kept: Vec<usize> = (0..n).filter(|&i| spec.eigenvalues[i] > cut).collect();
    let r = kept.len();
    let lambda: Vec<f64> = kept.iter().map(|&i| spec.eigenvalues[i]).collect();
    let q = CMatrix::from_fn(n, r, |i, j| spec.basis[(i, kept[j])]);

    let mut t = q.adjoint();
    let mut inv = q.clone();
    for (j, &l) in lambda.iter().enumerate() {
        t.row_mut(j).scale_mut(l.sqrt());
        inv.column_mut(j).scale_mut(1.0 / l.sqrt());
    }

    let a_sqrt = psd_sqrt(a);
    let b_sqrt = psd_sqrt(b);
    let x = a_sqrt.matrix() * &inv;
    let y = b_sqrt.matrix() * &inv;

    let scale = op_norm(a_sqrt.matrix()).max(op_norm(b_sqrt.matrix()));
    if scale > 0.0 {
        let res_a = op_norm(&(&x * &t - a_sqrt.matrix())) / scale;
        let res_b = op_norm(&(&y * &t - b_sqrt.matrix())) / scale;
        let worst = res_a.max(res_b);
        if worst > FACTOR_RESIDUAL_LIMIT {
            return Err(PwError::Numeric(format!(
                "factorization residual {worst:e} through the support of A+B exceeds {FACTOR_RESIDUAL_LIMIT:e}"
            )));
        }
    }

    let r_op = HermitianMatrix::symmetrized(inv.adjoint() * a.matrix() * &inv).into_matrix();
    let s_op = HermitianMatrix::symmetrized(CMatrix::identity(r, r) - &r_op).into_matrix();
    let spec_r = eig_hermitian(&HermitianMatrix::symmetrized(r_op.clone()))?;
    if spec_r.min_eigenvalue() < -SPECTRUM_SLACK || spec_r.max_eigenvalue() > 1.0 + SPECTRUM_SLACK {
        return Err(PwError::Numeric(format!(
            "spectrum of R escapes [0, 1]: [{:e}, {}]",
            spec_r.min_eigenvalue(),
            spec_r.max_eigenvalue()
        )));
    }
    let classes: Vec<SpectralClass> = spec_r
        .eigenvalues
        .iter()
        .map(|&x| SpectralClass::of(x, tol.zero_tol, tol.one_tol))
        .collect();

    // Polar parts use the same classification as the calculus: U*U is the
    // projection onto R's eigenvalues classified nonzero, V*V onto S's.
    let u = &x * spec_r.apply(|e| if e > tol.zero_tol { 1.0 / e.sqrt() } else { 0.0 });
    let v = &y * spec_r.apply(|e| if 1.0 - e > tol.one_tol { 1.0 / (1.0 - e).sqrt() } else { 0.0 });

    let lifted = t.adjoint() * &spec_r.basis;

    Ok(PwRepresentation {
        n,
        support_basis: q,
        lambda,
        t,
        x,
        y,
        r_op,
        s_op,
        u,
        v,
        spec_r,
        classes,
        lifted,
        a_sqrt,
        b_sqrt,
        tol: *tol,
    })
}

impl PwRepresentation {
    pub fn dim(&self) -> usize {
        self.n
    }

    /// Rank of `A + B`, the dimension of the support space.
    pub fn rank(&self) -> usize {
        self.lambda.len()
    }

    /// Orthonormal basis of `ran(A + B)` (`n x r`).
    pub fn support_basis(&self) -> &CMatrix {
        &self.support_basis
    }

    /// Eigenvalues of `A + B` on its support.
    pub fn support_eigenvalues(&self) -> &[f64] {
        &self.lambda
    }

    /// `T = Lambda^{1/2} Q*` (`r x n`).
    pub fn t(&self) -> &CMatrix {
        &self.t
    }

    pub fn x(&self) -> &CMatrix {
        &self.x
    }

    pub fn y(&self) -> &CMatrix {
        &self.y
    }

    pub fn r_op(&self) -> &CMatrix {
        &self.r_op
    }

    pub fn s_op(&self) -> &CMatrix {
        &self.s_op
    }

    pub fn u(&self) -> &CMatrix {
        &self.u
    }

    pub fn v(&self) -> &CMatrix {
        &self.v
    }

    pub fn r_spectrum(&self) -> &SpectralDecomposition {
        &self.spec_r
    }

    pub fn classes(&self) -> &[SpectralClass] {
        &self.classes
    }

    pub fn a_sqrt(&self) -> &PsdMatrix {
        &self.a_sqrt
    }

    pub fn b_sqrt(&self) -> &PsdMatrix {
        &self.b_sqrt
    }

    pub fn tolerances(&self) -> &ToleranceConfig {
        &self.tol
    }

    pub fn count_class(&self, class: SpectralClass) -> usize {
        self.classes.iter().filter(|&&c| c == class).count()
    }

    /// Smallest eigenvalue of `R` not classified as zero.
    pub fn min_retained(&self) -> Option<f64> {
        self.spec_r
            .eigenvalues
            .iter()
            .zip(&self.classes)
            .filter(|(_, &c)| c != SpectralClass::Zero)
            .map(|(&x, _)| x)
            .reduce(f64::min)
    }

    /// Distance from `zero_tol` to the nearest eigenvalue above it.
    pub fn zero_margin(&self) -> Option<f64> {
        self.min_retained().map(|x| x - self.tol.zero_tol)
    }

    /// Distance from interior eigenvalues to the nearer threshold.
    pub fn spectral_margin(&self) -> Option<f64> {
        let (lo, hi) = (self.tol.zero_tol, 1.0 - self.tol.one_tol);
        self.spec_r
            .eigenvalues
            .iter()
            .zip(&self.classes)
            .filter(|(_, &c)| c == SpectralClass::Interior)
            .map(|(&x, _)| (x - lo).min(hi - x))
            .reduce(f64::min)
    }

    /// Interior eigenvalues lying in `(zero_tol, 10 zero_tol)`.
    pub fn near_zero_count(&self) -> usize {
        let zt = self.tol.zero_tol;
        self.spec_r
            .eigenvalues
            .iter()
            .filter(|&&x| x > zt && x < 10.0 * zt)
            .count()
    }

    /// Names `zero_tol` and the measured margin when eigenvalues of `R` sit in
    /// `(zero_tol, 10 zero_tol)`.
    pub fn margin_warning(&self) -> Option<String> {
        let near = self.near_zero_count();
        (near > 0).then(|| {
            format!(
                "low spectral margin: {near} eigenvalue(s) of R in (zero_tol, 10*zero_tol) with zero_tol = {:e}; margin = {:e}",
                self.tol.zero_tol,
                self.zero_margin().unwrap_or(f64::INFINITY)
            )
        })
    }

    /// Values of `f` on the classified spectrum of `R`.
    pub fn spectral_values(&self, f: &PwFunction) -> Result<Vec<f64>> {
        self.spec_r
            .eigenvalues
            .iter()
            .zip(&self.classes)
            .map(|(&x, &c)| f.classified(c, x))
            .collect()
    }

    /// `T* (sum_i w_i P_i) T` for weights attached to the eigenvectors of `R`.
    pub fn lift_weights(&self, weights: &[f64]) -> CMatrix {
        let mut scaled = self.lifted.clone();
        for (j, &w) in weights.iter().enumerate() {
            scaled.column_mut(j).scale_mut(w);
        }
        if self.rank() == 0 {
            return CMatrix::zeros(self.n, self.n);
        }
        scaled * self.lifted.adjoint()
    }

    /// `Gamma(C~) = T* C~ T`.
    pub fn gamma(&self, ct: &HermitianMatrix) -> Result<HermitianMatrix> {
        if ct.dim() != self.rank() {
            return Err(PwError::DimensionMismatch { expected: self.rank(), got: ct.dim() });
        }
        Ok(HermitianMatrix::symmetrized(self.t.adjoint() * ct.matrix() * &self.t))
    }

    /// The unique `C~ = D D*` on the support with `Gamma(C~) = C`, where
    /// `D = Lambda^{-1/2} Q* C^{1/2}`. Formed as `Lambda^{-1/2} Q* C Q Lambda^{-1/2}`
    /// so rounding noise of `C` off the support is not square-rooted.
    pub fn gamma_inv(&self, c: &PsdMatrix) -> Result<PsdMatrix> {
        if c.dim() != self.n {
            return Err(PwError::DimensionMismatch { expected: self.n, got: c.dim() });
        }
        let mut pulled = self.support_basis.adjoint() * c.matrix() * &self.support_basis;
        for (j, &l) in self.lambda.iter().enumerate() {
            let s = 1.0 / l.sqrt();
            pulled.row_mut(j).scale_mut(s);
            pulled.column_mut(j).scale_mut(s);
        }
        let pulled = HermitianMatrix::symmetrized(pulled).into_matrix();
        let back = self.t.adjoint() * &pulled * &self.t;
        let scale = c.norm();
        if scale > 0.0 {
            let residual = op_norm(&(back - c.matrix())) / scale;
            if residual > DOMINATION_LIMIT {
                return Err(PwError::NotDominated { residual });
            }
        }
        PsdMatrix::from_constructed(pulled, &self.tol)
    }

    /// `f(A, B) = T* f(R) T`; fails if `f` is `+inf` on a present eigenvalue.
    pub fn evaluate(&self, f: &PwFunction) -> Result<Evaluation> {
        let values = self.spectral_values(f)?;
        if values.iter().any(|v| v.is_infinite()) {
            return Err(PwError::ExtendedValue { function: f.id().to_string() });
        }
        Ok(Evaluation {
            matrix: HermitianMatrix::symmetrized(self.lift_weights(&values)),
            margin: self.spectral_margin(),
        })
    }

    /// Spectral weights `w_i = Tr(P_i T rho T*)` of a positive functional.
    pub fn spectral_weights(&self, rho: &PsdMatrix) -> Result<Vec<f64>> {
        if rho.dim() != self.n {
            return Err(PwError::DimensionMismatch { expected: self.n, got: rho.dim() });
        }
        let pulled = self.lifted.adjoint() * rho.matrix() * &self.lifted;
        Ok((0..self.rank()).map(|i| pulled[(i, i)].re.max(0.0)).collect())
    }

    /// `sum_i f(x_i) w_i`, where terms of weight at most `weight_tol`
    /// contribute nothing even when `f(x_i) = +inf`.
    pub fn pairing(&self, f: &PwFunction, rho: &PsdMatrix) -> Result<PairingResult> {
        let values = self.spectral_values(f)?;
        let weights = self.spectral_weights(rho)?;
        let mut finite_part = 0.0;
        let mut infinite_weight = 0.0;
        for (&v, &w) in values.iter().zip(&weights) {
            if w <= self.tol.weight_tol {
                continue;
            }
            if v.is_infinite() {
                infinite_weight += w;
            } else {
                finite_part += v * w;
            }
        }
        let value = if infinite_weight > self.tol.weight_tol {
            ExtendedReal::PosInfinity
        } else {
            ExtendedReal::Finite(finite_part)
        };
        Ok(PairingResult { value, finite_part, infinite_weight })
    }
}

pub fn gamma(rep: &PwRepresentation, ct: &HermitianMatrix) -> Result<HermitianMatrix> {
    rep.gamma(ct)
}

pub fn gamma_inv(rep: &PwRepresentation, c: &PsdMatrix) -> Result<PsdMatrix> {
    rep.gamma_inv(c)
}

/// `f(A, B)` as a bounded operator.
pub fn pw_eval(a: &PsdMatrix, b: &PsdMatrix, f: &PwFunction, tol: &ToleranceConfig) -> Result<HermitianMatrix> {
    Ok(build_rep(a, b, tol)?.evaluate(f)?.matrix)
}

/// `f(A, B)(rho)`, possibly `+inf`.
pub fn pw_pairing(
    a: &PsdMatrix,
    b: &PsdMatrix,
    f: &PwFunction,
    rho: &PsdMatrix,
    tol: &ToleranceConfig,
) -> Result<ExtendedReal> {
    Ok(build_rep(a, b, tol)?.pairing(f, rho)?.value)
}

/// Pairings of `rho` against each `f_k(A, B)`. The sequence counts as
/// converged once the last three values sit within `conv_tol` of each other.
pub fn eval_sequence(
    a: &PsdMatrix,
    b: &PsdMatrix,
    fs: &[PwFunction],
    rho: &PsdMatrix,
    tol: &ToleranceConfig,
) -> Result<SequenceReport> {
    if fs.is_empty() {
        return Err(PwError::Input("function sequence is empty".into()));
    }
    let rep = build_rep(a, b, tol)?;
    let values = fs
        .iter()
        .map(|f| rep.pairing(f, rho).map(|p| p.value))
        .collect::<Result<Vec<_>>>()?;
    let gaps: Vec<f64> = values.windows(2).map(|w| w[1].gap(&w[0])).collect();
    let converged = gaps.len() >= 2 && gaps[gaps.len() - 2..].iter().all(|&g| g < tol.conv_tol);
    Ok(SequenceReport { values, gaps, converged })
}
