//! One function per subcommand; each fills the report and returns the error
//! that decides the exit code.

use std::path::Path;

use pwcalc::lebesgue::{
    is_abs_continuous, is_mutually_singular, lebesgue_decompose, parallel_sum, parallel_sum_limit,
};
use pwcalc::{
    build_rep, form_p, kubo_ando_form, rn_factor, tensor_pairing_check, trace_functional, PsdMatrix, PwFunction,
    SpectralClass, TensorFunctional, ToleranceConfig,
};

use crate::io::{read_psd, read_vector, Loaded};
use crate::report::{matrix, vector, Json, Report};
use crate::{CliError, Common};

type Run = Result<(), CliError>;

pub fn run(name: &str, args: &Common, tol: &ToleranceConfig, report: &mut Report) -> Run {
    if let Some(phi) = &args.phi {
        report.config.push("phi", phi.as_str());
    }
    if let Some(alpha) = args.alpha {
        report.config.push("alpha", alpha);
    }
    let a = load(report, "a", &args.a, tol)?;
    let b = load(report, "b", &args.b, tol)?;
    if a.dim() != b.dim() {
        return Err(pwcalc::PwError::DimensionMismatch { expected: a.dim(), got: b.dim() }.into());
    }
    match name {
        "rep" => rep(&a, &b, tol, report),
        "eval" => eval(&a, &b, args, tol, report),
        "lebesgue" => lebesgue(&a, &b, tol, report),
        "psum" => psum(&a, &b, tol, report),
        "psum-limit" => psum_limit(&a, &b, tol, report),
        "singular" => singular(&a, &b, tol, report),
        "abscont" => abscont(&a, &b, tol, report),
        "rn" => rn(&a, &b, tol, report),
        "kubo" => kubo(&a, &b, args, tol, report),
        "pair" => pair(&a, &b, args, tol, report),
        "trace" => trace(&a, &b, args, tol, report),
        "tensor-check" => tensor_check(&a, &b, args, tol, report),
        "form-p" => form_p_cmd(&a, &b, args, tol, report),
        other => Err(CliError::Internal(format!("unhandled subcommand {other}"))),
    }
}

fn load(report: &mut Report, key: &str, path: &Path, tol: &ToleranceConfig) -> Result<PsdMatrix, CliError> {
    let Loaded { value, path, sha256 } = read_psd(path, tol).map_err(|e| prefix(key, e))?;
    report.inputs.push(key, Json::obj().with("path", path).with("sha256", sha256));
    Ok(value)
}

fn load_optional(
    report: &mut Report,
    key: &str,
    path: Option<&Path>,
    n: usize,
    tol: &ToleranceConfig,
) -> Result<PsdMatrix, CliError> {
    match path {
        Some(p) => {
            let m = load(report, key, p, tol)?;
            if m.dim() != n {
                return Err(pwcalc::PwError::DimensionMismatch { expected: n, got: m.dim() }.into());
            }
            Ok(m)
        }
        None => Ok(PsdMatrix::identity(n)),
    }
}

fn prefix(key: &str, e: CliError) -> CliError {
    match e {
        CliError::Input(m) => CliError::Input(format!("--{key}: {m}")),
        other => other,
    }
}

fn required<'a, T>(flag: &str, op: &str, v: Option<&'a T>) -> Result<&'a T, CliError>
where
    T: ?Sized,
{
    v.ok_or_else(|| CliError::Input(format!("--{flag} is required for {op}")))
}

fn function(args: &Common, op: &str) -> Result<PwFunction, CliError> {
    let phi = required("phi", op, args.phi.as_deref())?;
    Ok(PwFunction::parse(phi, args.alpha)?)
}

fn margin(report: &mut Report, m: Option<f64>) {
    report.diagnostics.push("spectral_margin", m);
}

fn rep(a: &PsdMatrix, b: &PsdMatrix, tol: &ToleranceConfig, report: &mut Report) -> Run {
    let rep = build_rep(a, b, tol)?;
    report.outputs.push("rank", rep.rank());
    report.outputs.push("support_eigenvalues", rep.support_eigenvalues().to_vec());
    report.outputs.push("R", matrix(rep.r_op()));
    report.outputs.push("S", matrix(rep.s_op()));
    report.outputs.push("r_eigenvalues", rep.r_spectrum().eigenvalues.clone());
    report.outputs.push(
        "classes",
        Json::obj()
            .with("zero", rep.count_class(SpectralClass::Zero))
            .with("interior", rep.count_class(SpectralClass::Interior))
            .with("one", rep.count_class(SpectralClass::One)),
    );
    margin(report, rep.spectral_margin());
    report.diagnostics.push("zero_margin", rep.zero_margin());
    report.warnings.extend(rep.margin_warning());
    Ok(())
}

fn eval(a: &PsdMatrix, b: &PsdMatrix, args: &Common, tol: &ToleranceConfig, report: &mut Report) -> Run {
    let f = function(args, "eval")?;
    let rep = build_rep(a, b, tol)?;
    report.warnings.extend(rep.margin_warning());
    margin(report, rep.spectral_margin());
    let out = rep.evaluate(&f)?;
    report.outputs.push("function", f.id());
    report.outputs.push("F", matrix(out.matrix.matrix()));
    Ok(())
}

fn lebesgue(a: &PsdMatrix, b: &PsdMatrix, tol: &ToleranceConfig, report: &mut Report) -> Run {
    let d = lebesgue_decompose(a, b, tol)?;
    report.outputs.push("Bc", matrix(d.bc.matrix()));
    report.outputs.push("Bs", matrix(d.bs.matrix()));
    report.outputs.push("P", matrix(d.p.matrix()));
    report.diagnostics.push("rank", d.diagnostics.rank);
    report.diagnostics.push("num_zero_eigs", d.diagnostics.num_zero_eigs);
    margin(report, d.diagnostics.spectral_margin);
    report.diagnostics.push("residual_sum", d.diagnostics.residual_sum);
    report.warnings.extend(d.diagnostics.warnings);
    Ok(())
}

fn psum(a: &PsdMatrix, b: &PsdMatrix, tol: &ToleranceConfig, report: &mut Report) -> Run {
    let p = parallel_sum(a, b, tol)?;
    report.outputs.push("parallel_sum", matrix(p.matrix()));
    Ok(())
}

fn psum_limit(a: &PsdMatrix, b: &PsdMatrix, tol: &ToleranceConfig, report: &mut Report) -> Run {
    let lim = parallel_sum_limit(a, b, tol)?;
    let last_gap = lim.gaps.last().copied();
    report.outputs.push("limit", matrix(lim.limit.matrix()));
    report.outputs.push("iterations", lim.iterates.len());
    report.outputs.push("converged", lim.converged);
    report.outputs.push("monotone", lim.monotone);
    report.diagnostics.push("final_gap", last_gap);
    report.diagnostics.push("gaps", lim.gaps.clone());
    if !lim.converged {
        report.warnings.push(format!(
            "not converged within max_doublings = {}: last gap {:e} is not below conv_tol = {:e}",
            tol.max_doublings,
            last_gap.unwrap_or(f64::NAN),
            tol.conv_tol
        ));
    }
    if !lim.monotone {
        report.warnings.push("iterates failed the PSD-monotonicity check (slack 1e-9 * max(1, ||B||))".into());
    }
    Ok(())
}

fn singular(a: &PsdMatrix, b: &PsdMatrix, tol: &ToleranceConfig, report: &mut Report) -> Run {
    let s = is_mutually_singular(a, b, tol)?;
    report.outputs.push("singular", s.singular);
    report.outputs.push("witness", s.witness);
    report.outputs.push("distance", s.distance);
    report.diagnostics.push("threshold", tol.zero_tol.max(tol.one_tol));
    Ok(())
}

fn abscont(a: &PsdMatrix, b: &PsdMatrix, tol: &ToleranceConfig, report: &mut Report) -> Run {
    let r = is_abs_continuous(a, b, tol)?;
    report.outputs.push("abs_continuous", r.abs_continuous);
    report.outputs.push("deviation", r.deviation);
    Ok(())
}

fn rn_outputs(r: &pwcalc::RnResult, tol: &ToleranceConfig, report: &mut Report) {
    report.outputs.push("H", matrix(r.h.matrix()));
    report.outputs.push("Z", matrix(&r.z));
    report.diagnostics.push("residual", r.residual);
    report.diagnostics.push("condition", r.condition);
    report.diagnostics.push("infinite_directions", r.infinite_directions);
    report.diagnostics.push("near_singular", r.near_singular);
    if r.near_singular > 0 {
        report.warnings.push(format!(
            "{} retained eigenvalue(s) of XX* in (zero_tol, 10*zero_tol) with zero_tol = {:e}; condition = {:e}",
            r.near_singular, tol.zero_tol, r.condition
        ));
    }
}

fn rn(a: &PsdMatrix, b: &PsdMatrix, tol: &ToleranceConfig, report: &mut Report) -> Run {
    let r = rn_factor(a, b, tol)?;
    rn_outputs(&r, tol, report);
    Ok(())
}

fn kubo(a: &PsdMatrix, b: &PsdMatrix, args: &Common, tol: &ToleranceConfig, report: &mut Report) -> Run {
    let f = function(args, "kubo")?;
    let r = kubo_ando_form(a, b, &f, tol)?;
    report.outputs.push("function", f.id());
    rn_outputs(&r, tol, report);
    report.outputs.push("F", matrix(&r.form()));
    Ok(())
}

fn pairing_outputs(p: &pwcalc::PairingResult, report: &mut Report) {
    report.outputs.push("value", p.value);
    report.outputs.push("finite_part", p.finite_part);
    report.outputs.push("infinite_weight", p.infinite_weight);
}

fn pair(a: &PsdMatrix, b: &PsdMatrix, args: &Common, tol: &ToleranceConfig, report: &mut Report) -> Run {
    let f = function(args, "pair")?;
    let rho_path = required("rho", "pair", args.rho.as_deref())?;
    let rho = load_optional(report, "rho", Some(rho_path), a.dim(), tol)?;
    let rep = build_rep(a, b, tol)?;
    report.warnings.extend(rep.margin_warning());
    margin(report, rep.spectral_margin());
    report.outputs.push("function", f.id());
    pairing_outputs(&rep.pairing(&f, &rho)?, report);
    Ok(())
}

fn trace(a: &PsdMatrix, b: &PsdMatrix, args: &Common, tol: &ToleranceConfig, report: &mut Report) -> Run {
    let f = function(args, "trace")?;
    report.outputs.push("function", f.id());
    pairing_outputs(&trace_functional(a, b, &f, tol)?, report);
    Ok(())
}

const TENSOR_LIMIT: f64 = 1e-7;

fn tensor_check(a: &PsdMatrix, b: &PsdMatrix, args: &Common, tol: &ToleranceConfig, report: &mut Report) -> Run {
    let f = function(args, "tensor-check")?;
    let functional = TensorFunctional::from_function(&f)?;
    let a2p = required("a2", "tensor-check", args.a2.as_deref())?;
    let b2p = required("b2", "tensor-check", args.b2.as_deref())?;
    let a2 = load(report, "a2", a2p, tol)?;
    let b2 = load(report, "b2", b2p, tol)?;
    if a2.dim() != b2.dim() {
        return Err(pwcalc::PwError::DimensionMismatch { expected: a2.dim(), got: b2.dim() }.into());
    }
    let rho1 = load_optional(report, "rho", args.rho.as_deref(), a.dim(), tol)?;
    let rho2 = load_optional(report, "rho2", args.rho2.as_deref(), a2.dim(), tol)?;
    let r = tensor_pairing_check(a, b, &a2, &b2, &rho1, &rho2, functional, tol)?;
    report.outputs.push("function", f.id());
    report.outputs.push("left", r.left);
    report.outputs.push("right", r.right);
    report.outputs.push("residual", r.residual);
    report.outputs.push("infinity_consistent", r.infinity_consistent);
    if !r.infinity_consistent {
        report.warnings.push(format!("exactly one side of the identity is +inf with weight_tol = {:e}", tol.weight_tol));
    } else if r.residual > TENSOR_LIMIT {
        report.warnings.push(format!("identity residual {:e} exceeds {TENSOR_LIMIT:e}", r.residual));
    }
    Ok(())
}

fn form_p_cmd(a: &PsdMatrix, b: &PsdMatrix, args: &Common, tol: &ToleranceConfig, report: &mut Report) -> Run {
    let path = required("xi", "form-p", args.xi.as_deref())?;
    let Loaded { value: xi, path, sha256 } = read_vector(path).map_err(|e| prefix("xi", e))?;
    report.inputs.push("xi", Json::obj().with("path", path).with("sha256", sha256));
    let v = form_p(a, b, &xi, tol)?;
    report.outputs.push("xi", vector(&xi));
    report.outputs.push("value", v);
    Ok(())
}
