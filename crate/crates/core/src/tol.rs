//! Numerical thresholds shared by every routine in the crate.

use crate::error::{PwError, Result};

/// Thresholds that turn exact spectral statements into floating-point tests.
///
/// `psd_rel_tol` is relative to the spectral norm of the matrix being
/// validated. `support_tol` is an absolute eigenvalue cutoff when set; when
/// `None` the cutoff is `n * f64::EPSILON * largest_eigenvalue` for the matrix
/// at hand. `zero_tol` and `one_tol` are absolute, on spectra inside `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToleranceConfig {
    pub herm_tol: f64,
    pub psd_rel_tol: f64,
    pub support_tol: Option<f64>,
    pub zero_tol: f64,
    pub one_tol: f64,
    pub weight_tol: f64,
    pub conv_tol: f64,
    pub max_doublings: u32,
    pub max_kron_dim: usize,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            herm_tol: 1e-10,
            psd_rel_tol: 1e-9,
            support_tol: None,
            zero_tol: 1e-8,
            one_tol: 1e-8,
            weight_tol: 1e-12,
            conv_tol: 1e-9,
            max_doublings: 60,
            max_kron_dim: 4096,
        }
    }
}

impl ToleranceConfig {
    pub fn validate(&self) -> Result<()> {
        let checks = [
            ("herm_tol", self.herm_tol),
            ("psd_rel_tol", self.psd_rel_tol),
            ("support_tol", self.support_tol.unwrap_or(1.0)),
            ("zero_tol", self.zero_tol),
            ("one_tol", self.one_tol),
            ("weight_tol", self.weight_tol),
            ("conv_tol", self.conv_tol),
        ];
        for (name, value) in checks {
            if !(value > 0.0 && value.is_finite()) {
                return Err(PwError::Input(format!("{name} must be positive and finite, got {value}")));
            }
        }
        if self.zero_tol >= 0.5 || self.one_tol >= 0.5 {
            return Err(PwError::Input("zero_tol and one_tol must be below 1/2".into()));
        }
        if self.max_doublings == 0 || self.max_kron_dim == 0 {
            return Err(PwError::Input("max_doublings and max_kron_dim must be positive".into()));
        }
        Ok(())
    }

    /// Eigenvalue cutoff below which a direction counts as kernel.
    pub fn support_threshold(&self, n: usize, largest_eigenvalue: f64) -> f64 {
        self.support_tol
            .unwrap_or(n as f64 * f64::EPSILON * largest_eigenvalue.max(0.0))
    }

    pub fn with_zero_tol(mut self, zero_tol: f64) -> Self {
        self.zero_tol = zero_tol;
        self
    }

    pub fn with_one_tol(mut self, one_tol: f64) -> Self {
        self.one_tol = one_tol;
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        ToleranceConfig::default().validate().unwrap();
    }

    #[test]
    fn rejects_nonpositive() {
        let tol = ToleranceConfig { zero_tol: 0.0, ..Default::default() };
        assert!(tol.validate().is_err());
        let tol = ToleranceConfig { support_tol: Some(-1.0), ..Default::default() };
        assert!(tol.validate().is_err());
    }

    #[test]
    fn support_threshold_scales_with_dimension() {
        let tol = ToleranceConfig::default();
        assert_eq!(tol.support_threshold(4, 2.0), 8.0 * f64::EPSILON);
        assert_eq!(tol.support_threshold(4, -1.0), 0.0);
        let fixed = ToleranceConfig { support_tol: Some(1e-6), ..Default::default() };
        assert_eq!(fixed.support_threshold(4, 2.0), 1e-6);
    }
}
