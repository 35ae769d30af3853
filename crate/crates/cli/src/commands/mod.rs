//! One module per subcommand, plus shared loading and seeding helpers.

pub mod dual;
pub mod generate;
pub mod inspect;
pub mod parseval;

use std::path::Path;

use kframe_core::FrameFamily;

use crate::document::load_frame_document;
use crate::failure::Failure;
use crate::report::ReportDocument;

/// Environment variable consulted when no `--seed` flag is given.
pub const SEED_ENV: &str = "KFRAME_SEED";

/// Reads a family file, recording the input bytes in the report.
fn load_family(path: &Path, report: &mut ReportDocument) -> Result<FrameFamily, Failure> {
    let (doc, bytes) = load_frame_document(path)?;
    report.record_input(path, &bytes);
    Ok(doc.to_family()?)
}

/// Writes an emitted document, recording the output bytes in the report.
fn write_output(path: &Path, text: &str, report: &mut ReportDocument) -> Result<(), Failure> {
    std::fs::write(path, text)
        .map_err(|e| Failure::Precondition(format!("cannot write {}: {e}", path.display())))?;
    report.record_output(path, text.as_bytes());
    Ok(())
}

/// Seed precedence: the `--seed` flag, then the `KFRAME_SEED` environment
/// variable, then zero.
fn resolve_seed(flag: Option<u64>) -> Result<u64, Failure> {
    if let Some(seed) = flag {
        return Ok(seed);
    }
    match std::env::var(SEED_ENV) {
        Ok(text) => text.trim().parse().map_err(|_| {
            Failure::Parse(format!("{SEED_ENV} is not an unsigned integer: {text:?}"))
        }),
        Err(std::env::VarError::NotPresent) => Ok(0),
        Err(e) => Err(Failure::Parse(format!("{SEED_ENV}: {e}"))),
    }
}
