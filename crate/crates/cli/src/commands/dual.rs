//! `kframe dual`: verify a candidate dual, emit the canonical dual, or
//! compare coefficient energies against random admissible duals.

use std::path::{Path, PathBuf};

use kframe_core::duality::{check_dual, minimal_norm_check, DualityReport};
use kframe_core::jframe::canonical_dual;
use kframe_core::krein::classify_subspace;
use kframe_core::sampling::{random_admissible_dual, rng_from_seed};
use serde_json::Value;

use super::{load_family, resolve_seed, write_output};
use crate::document::FrameDocument;
use crate::failure::Failure;
use crate::report::{ReportDocument, Tolerances};

/// Random unit vectors drawn per minimal-norm comparison.
const MINIMAL_NORM_TRIALS: usize = 20;

pub enum Mode {
    /// Check a candidate dual family read from a file.
    Check { path_g: PathBuf },
    /// Write the canonical dual and report its duality checks.
    Canonical { output: PathBuf },
    /// Sample admissible duals and test the minimal-norm property.
    Random { count: usize },
}

pub fn run(
    path_f: &Path,
    mode: Mode,
    seed: Option<u64>,
    tol: Tolerances,
) -> Result<ReportDocument, Failure> {
    let mut report = ReportDocument::new("dual", tol);
    let f = load_family(path_f, &mut report)?;

    match mode {
        Mode::Check { path_g } => {
            let g = load_family(&path_g, &mut report)?;
            let duality = check_dual(&f, &g, tol.residual_tol)?;
            record_duality(&mut report, &duality, tol.rtol);
        }
        Mode::Canonical { output } => {
            let g = canonical_dual(&f)?;
            let duality = check_dual(&f, &g, tol.residual_tol)?;
            record_duality(&mut report, &duality, tol.rtol);
            write_output(
                &output,
                &FrameDocument::from_family(&g).render(),
                &mut report,
            )?;
        }
        Mode::Random { count } => {
            if count == 0 {
                return Err(Failure::Parse("--random needs at least one dual".into()));
            }
            let seed = resolve_seed(seed)?;
            report.set_seed(seed);
            let mut rng = rng_from_seed(seed);
            let duals: Vec<_> = (0..count)
                .map(|_| random_admissible_dual(&f, &mut rng))
                .collect::<Result<_, _>>()?;
            let minimal =
                minimal_norm_check(&f, &duals, MINIMAL_NORM_TRIALS, tol.residual_tol, &mut rng)?;
            report.verdict("minimal_norm.pass", minimal.pass);
            report.verdict("minimal_norm.dual_count", count as u64);
            report.verdict("minimal_norm.trials", minimal.trials as u64);
            report.residual("minimal_norm.worst_margin", minimal.worst_margin);
        }
    }
    Ok(report)
}

fn record_duality(report: &mut ReportDocument, duality: &DualityReport, rtol: f64) {
    report.verdict("dual.is_dual", duality.is_dual);
    report.verdict("dual.is_jframe_dual", duality.is_jframe_dual);
    report.verdict(
        "dual.sign_violations",
        Value::from(
            duality
                .sign_violations
                .iter()
                .map(|&i| i as u64)
                .collect::<Vec<_>>(),
        ),
    );
    report.verdict("dual.kernel_split_ok", duality.kernel_split_ok);
    report.verdict("dual.intersection_trivial", duality.intersection_trivial);
    report.verdict("dual.range_criterion_plus", duality.range_criterion_plus);
    report.verdict("dual.range_criterion_minus", duality.range_criterion_minus);
    report.verdict("dual.span_plus_dim", duality.n_plus.dim() as u64);
    report.verdict("dual.span_minus_dim", duality.n_minus.dim() as u64);
    report.verdict(
        "dual.span_plus_class",
        classify_subspace(&duality.n_plus, rtol).as_str(),
    );
    report.verdict(
        "dual.span_minus_class",
        classify_subspace(&duality.n_minus, rtol).as_str(),
    );
    report.residual("dual.residual_plus", duality.residual_plus);
    report.residual("dual.residual_minus", duality.residual_minus);
    report.residual(
        "dual.reconstruction_residual",
        duality.reconstruction_residual,
    );
    if let Some(w) = &duality.w {
        report.residual("dual.perturbation_norm", w.entries().norm());
    }
}
