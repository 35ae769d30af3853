//! On-disk document formats: frame families and dilations as JSON.
//!
//! Reading goes through serde; writing is hand-rendered with a fixed field
//! order, two-space indent, one vector per line, and every float printed with
//! 17 significant digits. That many digits reproduce the exact `f64` bits on
//! re-parse, so write -> read -> write is byte-identical and fixtures diff
//! cleanly.

use std::fmt;
use std::path::Path;

use kframe_core::linalg::CVec;
use kframe_core::parseval::Dilation;
use kframe_core::{FrameFamily, KreinSpace};
use num_complex::Complex64;
use serde::Deserialize;

/// Accepted version tag of a frame family document.
pub const FRAME_SCHEMA: &str = "kframe/1";

/// Accepted version tag of a dilation document.
pub const DILATION_SCHEMA: &str = "kframe-dilation/1";

/// Why a document could not be read.
#[derive(Debug)]
pub enum DocumentError {
    /// The file itself could not be read.
    Read { path: String, cause: std::io::Error },
    /// The bytes are not valid JSON; the cause carries line and column.
    Json(serde_json::Error),
    /// The JSON parsed but violates the document schema.
    Schema(String),
}

impl fmt::Display for DocumentError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DocumentError::Read { path, cause } => write!(f, "cannot read {path}: {cause}"),
            DocumentError::Json(cause) => write!(f, "malformed document: {cause}"),
            DocumentError::Schema(msg) => write!(f, "invalid document: {msg}"),
        }
    }
}

impl std::error::Error for DocumentError {}

/// A frame family over a signature, stored as explicit [re, im] pairs.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameDocument {
    pub schema_version: String,
    /// Signature of the ambient space, entries +1 or -1.
    pub signature: Vec<i8>,
    /// One entry per frame vector; each vector lists [re, im] per coordinate.
    pub vectors: Vec<Vec<[f64; 2]>>,
    /// Optional display names, one per vector.
    #[serde(default)]
    pub labels: Option<Vec<String>>,
}

impl FrameDocument {
    /// Parses and validates a document from JSON text.
    pub fn parse(text: &str) -> Result<Self, DocumentError> {
        let doc: FrameDocument = serde_json::from_str(text).map_err(DocumentError::Json)?;
        doc.validate()?;
        Ok(doc)
    }

    /// Schema-level checks: version tag, signature entries, vector shapes,
    /// finite coordinates, label count.
    pub fn validate(&self) -> Result<(), DocumentError> {
        if self.schema_version != FRAME_SCHEMA {
            return Err(DocumentError::Schema(format!(
                "unrecognized schema_version {:?}, expected {FRAME_SCHEMA:?}",
                self.schema_version
            )));
        }
        validate_signature(&self.signature)?;
        let dim = self.signature.len();
        for (i, v) in self.vectors.iter().enumerate() {
            if v.len() != dim {
                return Err(DocumentError::Schema(format!(
                    "vectors[{i}] has {} coordinates, expected {dim}",
                    v.len()
                )));
            }
            for (k, pair) in v.iter().enumerate() {
                if !pair[0].is_finite() || !pair[1].is_finite() {
                    return Err(DocumentError::Schema(format!(
                        "vectors[{i}][{k}] is not finite"
                    )));
                }
            }
        }
        if let Some(labels) = &self.labels {
            if labels.len() != self.vectors.len() {
                return Err(DocumentError::Schema(format!(
                    "labels has {} entries, expected {}",
                    labels.len(),
                    self.vectors.len()
                )));
            }
        }
        Ok(())
    }

    /// Captures a family for writing. Labels are not part of the family and
    /// stay empty.
    pub fn from_family(f: &FrameFamily) -> Self {
        FrameDocument {
            schema_version: FRAME_SCHEMA.to_string(),
            signature: f.space().signature().to_vec(),
            vectors: f
                .vectors()
                .iter()
                .map(|v| v.iter().map(|z| [z.re, z.im]).collect())
                .collect(),
            labels: None,
        }
    }

    /// Builds the in-memory family. Assumes `validate` already passed, so any
    /// residual constructor error is reported as a schema violation.
    pub fn to_family(&self) -> Result<FrameFamily, DocumentError> {
        let space = KreinSpace::from_signs(self.signature.clone())
            .map_err(|e| DocumentError::Schema(e.to_string()))?;
        let vectors: Vec<CVec> = self
            .vectors
            .iter()
            .map(|v| CVec::from_iterator(v.len(), v.iter().map(|p| Complex64::new(p[0], p[1]))))
            .collect();
        FrameFamily::new(space, vectors).map_err(|e| DocumentError::Schema(e.to_string()))
    }

    /// Renders the canonical byte representation.
    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str("{\n");
        push_string_field(&mut out, "schema_version", &self.schema_version);
        out.push_str(",\n");
        push_signature(&mut out, &self.signature);
        out.push_str(",\n");
        push_vector_block(&mut out, "vectors", &self.vectors);
        if let Some(labels) = &self.labels {
            out.push_str(",\n");
            push_labels(&mut out, labels);
        }
        out.push_str("\n}\n");
        out
    }
}

/// A Naimark dilation: the big space, the orthonormal basis being projected
/// (as columns), and the projection matrix (as rows).
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DilationDocument {
    pub schema_version: String,
    /// Signature of the big space.
    pub signature: Vec<i8>,
    /// Orthonormal basis vectors of the big space, one per frame index.
    pub basis_columns: Vec<Vec<[f64; 2]>>,
    /// Rows of the projection onto the embedded copy of the original space.
    pub projection_rows: Vec<Vec<[f64; 2]>>,
}

impl DilationDocument {
    pub fn parse(text: &str) -> Result<Self, DocumentError> {
        let doc: DilationDocument = serde_json::from_str(text).map_err(DocumentError::Json)?;
        doc.validate()?;
        Ok(doc)
    }

    pub fn validate(&self) -> Result<(), DocumentError> {
        if self.schema_version != DILATION_SCHEMA {
            return Err(DocumentError::Schema(format!(
                "unrecognized schema_version {:?}, expected {DILATION_SCHEMA:?}",
                self.schema_version
            )));
        }
        validate_signature(&self.signature)?;
        let dim = self.signature.len();
        let check_rows = |name: &str, rows: &[Vec<[f64; 2]>]| -> Result<(), DocumentError> {
            for (i, row) in rows.iter().enumerate() {
                if row.len() != dim {
                    return Err(DocumentError::Schema(format!(
                        "{name}[{i}] has {} entries, expected {dim}",
                        row.len()
                    )));
                }
                if row.iter().any(|p| !p[0].is_finite() || !p[1].is_finite()) {
                    return Err(DocumentError::Schema(format!("{name}[{i}] is not finite")));
                }
            }
            Ok(())
        };
        check_rows("basis_columns", &self.basis_columns)?;
        check_rows("projection_rows", &self.projection_rows)?;
        for (name, count) in [
            ("basis_columns", self.basis_columns.len()),
            ("projection_rows", self.projection_rows.len()),
        ] {
            if count != dim {
                return Err(DocumentError::Schema(format!(
                    "{name} has {count} entries, expected {dim}"
                )));
            }
        }
        Ok(())
    }

    pub fn from_dilation(d: &Dilation) -> Self {
        let basis = d.basis();
        let proj = d.projection().entries();
        DilationDocument {
            schema_version: DILATION_SCHEMA.to_string(),
            signature: d.big_space().signature().to_vec(),
            basis_columns: (0..basis.ncols())
                .map(|j| basis.column(j).iter().map(|z| [z.re, z.im]).collect())
                .collect(),
            projection_rows: (0..proj.nrows())
                .map(|i| proj.row(i).iter().map(|z| [z.re, z.im]).collect())
                .collect(),
        }
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str("{\n");
        push_string_field(&mut out, "schema_version", &self.schema_version);
        out.push_str(",\n");
        push_signature(&mut out, &self.signature);
        out.push_str(",\n");
        push_vector_block(&mut out, "basis_columns", &self.basis_columns);
        out.push_str(",\n");
        push_vector_block(&mut out, "projection_rows", &self.projection_rows);
        out.push_str("\n}\n");
        out
    }
}

/// Reads and validates a frame document, returning the raw bytes as well so
/// callers can hash exactly what was read.
pub fn load_frame_document(path: &Path) -> Result<(FrameDocument, Vec<u8>), DocumentError> {
    let bytes = std::fs::read(path).map_err(|cause| DocumentError::Read {
        path: path.display().to_string(),
        cause,
    })?;
    let text = std::str::from_utf8(&bytes)
        .map_err(|_| DocumentError::Schema(format!("{} is not UTF-8", path.display())))?;
    let doc = FrameDocument::parse(text)?;
    Ok((doc, bytes))
}

/// Formats a float with 17 significant digits, enough to reproduce the exact
/// bits on re-parse.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn validate_signature(signature: &[i8]) -> Result<(), DocumentError> {
    if signature.is_empty() {
        return Err(DocumentError::Schema("signature is empty".into()));
    }
    for (i, &s) in signature.iter().enumerate() {
        if s != 1 && s != -1 {
            return Err(DocumentError::Schema(format!(
                "signature[{i}] must be +1 or -1, got {s}"
            )));
        }
    }
    Ok(())
}

fn push_string_field(out: &mut String, key: &str, value: &str) {
    out.push_str("  \"");
    out.push_str(key);
    out.push_str("\": ");
    out.push_str(&serde_json::to_string(value).expect("strings always serialize"));
}

fn push_signature(out: &mut String, signature: &[i8]) {
    out.push_str("  \"signature\": [");
    for (i, s) in signature.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        out.push_str(&s.to_string());
    }
    out.push(']');
}

fn push_vector(out: &mut String, v: &[[f64; 2]]) {
    out.push('[');
    for (k, pair) in v.iter().enumerate() {
        if k > 0 {
            out.push_str(", ");
        }
        out.push('[');
        out.push_str(&fmt_f64(pair[0]));
        out.push_str(", ");
        out.push_str(&fmt_f64(pair[1]));
        out.push(']');
    }
    out.push(']');
}

fn push_vector_block(out: &mut String, key: &str, rows: &[Vec<[f64; 2]>]) {
    out.push_str("  \"");
    out.push_str(key);
    out.push_str("\": [");
    if rows.is_empty() {
        out.push(']');
        return;
    }
    out.push('\n');
    for (i, row) in rows.iter().enumerate() {
        out.push_str("    ");
        push_vector(out, row);
        if i + 1 < rows.len() {
            out.push(',');
        }
        out.push('\n');
    }
    out.push_str("  ]");
}

fn push_labels(out: &mut String, labels: &[String]) {
    out.push_str("  \"labels\": [");
    for (i, label) in labels.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        out.push_str(&serde_json::to_string(label).expect("strings always serialize"));
    }
    out.push(']');
}
