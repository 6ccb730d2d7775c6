//! Functional calculus for pairs of positive semidefinite matrices.
//!
//! A pair `(A, B)` is represented through the compression `R` of `A` to the
//! support of `A + B`. A function `f` on `[0, 1]` (with values at the endpoints
//! allowed to be `+inf`) then gives the operator `f(A, B)`, and pairings with
//! positive functionals give extended real numbers. On top of this sit the
//! Lebesgue decomposition of `B` relative to `A`, parallel sums,
//! Radon-Nikodym factors, weighted geometric means and power/entropy
//! functionals.

pub mod error;
pub mod function;
pub mod lebesgue;
pub mod linalg;
pub mod means;
pub mod rep;
pub mod rn;
pub mod sample;
pub mod tol;

pub use error::{PwError, Result};
pub use function::{ExtendedReal, PwFunction, SpectralClass};
pub use lebesgue::{
    abs_cont_part, is_abs_continuous, is_mutually_singular, lebesgue_decompose, parallel_sum,
    parallel_sum_expressions, parallel_sum_limit, projection_p, scaled_parallel_sum, solvable_subspace_projection,
    AbsContinuity, LebesgueDecomposition, LebesgueDiagnostics, ParallelSumExpressions, ParallelSumLimit,
    SingularityCheck,
};
pub use linalg::{CMatrix, CVector, HermitianMatrix, PsdMatrix, SpectralDecomposition, C64};
pub use means::{
    phi_alpha_pairing, psi_pairing, tensor_pairing_check, trace_functional, weighted_geometric_mean, PairingResult,
    TensorFunctional, TensorPairingReport,
};
pub use rep::{build_rep, eval_sequence, gamma, gamma_inv, pw_eval, pw_pairing, Evaluation, PwRepresentation, SequenceReport};
pub use rn::{form_p, kubo_ando_form, rn_factor, RnResult};
pub use tol::ToleranceConfig;
