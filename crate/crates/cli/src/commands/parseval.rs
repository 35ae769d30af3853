//! `kframe parseval`: the Parseval equivalence battery, the canonical
//! Parseval family, and Naimark dilation documents.

use std::path::{Path, PathBuf};

use kframe_core::linalg;
use kframe_core::parseval::{
    canonical_parseval, naimark_coefficient_check, naimark_dilate, parseval_equivalence,
};

use super::{load_family, write_output};
use crate::document::{DilationDocument, FrameDocument};
use crate::failure::Failure;
use crate::report::{ReportDocument, Tolerances};

pub enum Mode {
    /// Run the equivalent Parseval tests and report their agreement.
    Check,
    /// Write the canonical Parseval family derived via the inverse root.
    Canonical { output: PathBuf },
    /// Write the dilation realizing the family as a projected orthobasis.
    Dilate { output: PathBuf },
}

pub fn run(path: &Path, mode: Mode, tol: Tolerances) -> Result<ReportDocument, Failure> {
    let mut report = ReportDocument::new("parseval", tol);
    let f = load_family(path, &mut report)?;

    match mode {
        Mode::Check => {
            let eq = parseval_equivalence(&f, tol.residual_tol)?;
            let coeff = naimark_coefficient_check(&f, tol.residual_tol)?;
            let all_agree = eq.verdicts_agree() && coeff.passes() == eq.is_parseval();
            report.verdict("parseval.is_parseval", eq.is_parseval());
            report.verdict("parseval.isometry_ok", eq.isometry_deviation <= eq.tol);
            report.verdict("parseval.projection_ok", eq.projection_deviation <= eq.tol);
            report.verdict("parseval.coefficient_ok", coeff.passes());
            report.verdict("parseval.verdicts_agree", all_agree);
            report.residual("parseval.identity_deviation", eq.identity_deviation);
            report.residual("parseval.isometry_deviation", eq.isometry_deviation);
            report.residual("parseval.projection_deviation", eq.projection_deviation);
            report.residual("parseval.coefficient_max_residual", coeff.max_residual);
        }
        Mode::Canonical { output } => {
            let p = canonical_parseval(&f)?;
            let eq = parseval_equivalence(&p, tol.residual_tol)?;
            report.verdict("canonical.is_parseval", eq.is_parseval());
            report.verdict("canonical.signs_preserved", p.signs() == f.signs());
            report.residual("canonical.identity_deviation", eq.identity_deviation);
            write_output(
                &output,
                &FrameDocument::from_family(&p).render(),
                &mut report,
            )?;
        }
        Mode::Dilate { output } => {
            let dilation = naimark_dilate(&f, tol.residual_tol)?;
            let check = dilation.check(&f)?;
            let rank = linalg::rank(dilation.projection().entries(), tol.rtol);
            report.verdict("dilation.big_dim", dilation.big_space().dim() as u64);
            report.verdict("dilation.projection_rank", rank as u64);
            report.verdict("dilation.rank_matches_dim", rank == f.space().dim());
            report.residual("dilation.basis_defect", check.basis_defect);
            report.residual(
                "dilation.embed_isometry_defect",
                check.embed_isometry_defect,
            );
            report.residual("dilation.idempotency_defect", check.idempotency_defect);
            report.residual("dilation.compatibility_defect", check.compatibility_defect);
            report.residual("dilation.recovery_defect", check.recovery_defect);
            report.residual(
                "dilation.projection_selfadjoint_defect",
                check.projection_selfadjoint_defect,
            );
            report.residual("dilation.worst_structural", check.worst_structural());
            // Nothing in this binary reads dilation documents back, so guard
            // the writer by re-parsing what is about to be written.
            let doc = DilationDocument::from_dilation(&dilation);
            let text = doc.render();
            match DilationDocument::parse(&text) {
                Ok(reread) if reread == doc => {}
                _ => {
                    return Err(Failure::Precondition(
                        "dilation document failed its round-trip self-check".into(),
                    ))
                }
            }
            write_output(&output, &text, &mut report)?;
        }
    }
    Ok(report)
}
