//! `kframe inspect`: classify a family file.
//!
//! Parse success means exit 0; every classification outcome, including "not
//! a J-frame", is report data.

use std::path::Path;

use kframe_core::jframe::{analyze_jframe, nullspace_splitting};
use kframe_core::krein::classify_subspace;
use kframe_core::{FrameBounds, Sign};
use serde_json::Value;

use super::load_family;
use crate::failure::Failure;
use crate::report::{ReportDocument, Tolerances};

pub fn run(path: &Path, tol: Tolerances) -> Result<ReportDocument, Failure> {
    let mut report = ReportDocument::new("inspect", tol);
    let family = load_family(path, &mut report)?;

    report.verdict("family.dim", family.space().dim() as u64);
    report.verdict("family.vector_count", family.len() as u64);
    report.verdict("family.excess", family.excess() as u64);
    report.verdict(
        "family.near_neutral",
        Value::from(
            family
                .near_neutral()
                .iter()
                .map(|&i| i as u64)
                .collect::<Vec<_>>(),
        ),
    );

    let analysis = analyze_jframe(&family, tol.rtol);
    report.verdict("family.is_jframe", analysis.is_jframe());
    report.verdict("diagnostics", Value::from(analysis.diagnostics().to_vec()));

    report.verdict("spans.plus_dim", analysis.m_plus().dim() as u64);
    report.verdict("spans.minus_dim", analysis.m_minus().dim() as u64);
    report.verdict(
        "spans.plus_class",
        classify_subspace(analysis.m_plus(), tol.rtol).as_str(),
    );
    report.verdict(
        "spans.minus_class",
        classify_subspace(analysis.m_minus(), tol.rtol).as_str(),
    );
    report.verdict("spans.decompose", analysis.q().is_some());

    record_bounds(&mut report, "bounds.plus", analysis.bounds(Sign::Plus));
    record_bounds(&mut report, "bounds.minus", analysis.bounds(Sign::Minus));
    record_bounds(&mut report, "bounds.hilbert", family.frame_bounds());

    if let Ok(defect) = analysis.s().j_selfadjoint_defect() {
        report.residual("operator.j_selfadjoint_defect", defect);
    }

    // The kernel splitting is defined for J-frames only; report the reason
    // instead of failing so inspect keeps its exit-0-on-parse contract.
    if analysis.is_jframe() {
        match nullspace_splitting(&family, tol.residual_tol) {
            Ok(split) => {
                report.verdict("kernel.dim", split.null_dim as u64);
                report.verdict("kernel.plus_dim", split.null_plus_dim as u64);
                report.verdict("kernel.minus_dim", split.null_minus_dim as u64);
                report.verdict("kernel.splits", split.null_splits);
                report.verdict("kernel.companion_splits", split.companion_splits);
                report.verdict("kernel.pass", split.pass);
                report.residual("kernel.commutation_residual", split.commutation_residual);
            }
            Err(e) => report.verdict("kernel.error", e.to_string()),
        }
    }

    Ok(report)
}

fn record_bounds(report: &mut ReportDocument, prefix: &str, bounds: Option<FrameBounds>) {
    if let Some(b) = bounds {
        report.verdict(&format!("{prefix}.lower"), b.lower);
        report.verdict(&format!("{prefix}.upper"), b.upper);
    }
}
