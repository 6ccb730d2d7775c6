//! Matrix and vector files.

use std::fs;
use std::path::Path;

use pwcalc::{CMatrix, CVector, HermitianMatrix, PsdMatrix, ToleranceConfig, C64};
use serde::Deserialize;
use sha2::{Digest, Sha256};

use crate::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub n: usize,
    pub re: Vec<Vec<f64>>,
    #[serde(default)]
    pub im: Option<Vec<Vec<f64>>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VectorFile {
    pub n: usize,
    pub re: Vec<f64>,
    #[serde(default)]
    pub im: Option<Vec<f64>>,
}

fn check_rows(name: &str, n: usize, rows: &[Vec<f64>]) -> Result<(), CliError> {
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(CliError::Input(format!("{name} must be an {n}x{n} array")));
    }
    Ok(())
}

impl MatrixFile {
    pub fn to_matrix(&self) -> Result<CMatrix, CliError> {
        check_rows("re", self.n, &self.re)?;
        if let Some(im) = &self.im {
            check_rows("im", self.n, im)?;
        }
        Ok(CMatrix::from_fn(self.n, self.n, |i, j| {
            let im = self.im.as_ref().map_or(0.0, |m| m[i][j]);
            C64::new(self.re[i][j], im)
        }))
    }
}

impl VectorFile {
    pub fn to_vector(&self) -> Result<CVector, CliError> {
        if self.re.len() != self.n || self.im.as_ref().is_some_and(|v| v.len() != self.n) {
            return Err(CliError::Input(format!("re and im must have length {}", self.n)));
        }
        Ok(CVector::from_fn(self.n, |i, _| C64::new(self.re[i], self.im.as_ref().map_or(0.0, |v| v[i]))))
    }
}

/// A file that has been read, with its digest.
pub struct Loaded<T> {
    pub value: T,
    pub path: String,
    pub sha256: String,
}

fn read<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<Loaded<T>, CliError> {
    let bytes = fs::read(path).map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    let value = serde_json::from_slice(&bytes)
        .map_err(|e| CliError::Input(format!("cannot parse {}: {e}", path.display())))?;
    Ok(Loaded { value, path: path.display().to_string(), sha256: hex::encode(Sha256::digest(&bytes)) })
}

pub fn read_psd(path: &Path, tol: &ToleranceConfig) -> Result<Loaded<PsdMatrix>, CliError> {
    let file: Loaded<MatrixFile> = read(path)?;
    let m = file.value.to_matrix()?;
    let h = HermitianMatrix::new(m, tol).map_err(CliError::Lib)?;
    let value = PsdMatrix::new(h, tol).map_err(CliError::Lib)?;
    Ok(Loaded { value, path: file.path, sha256: file.sha256 })
}

pub fn read_vector(path: &Path) -> Result<Loaded<CVector>, CliError> {
    let file: Loaded<VectorFile> = read(path)?;
    let value = file.value.to_vector()?;
    Ok(Loaded { value, path: file.path, sha256: file.sha256 })
}
