//! `kframe generate`: emit a random J-frame with prescribed signature and
//! per-sign vector counts, self-checked before writing.

use std::path::Path;

use kframe_core::jframe::analyze_jframe;
use kframe_core::linalg::CVec;
use kframe_core::sampling::random_jframe;
use kframe_core::{FrameBounds, FrameFamily, GenSpec, KreinSpace, Sign};

use super::{resolve_seed, write_output};
use crate::document::FrameDocument;
use crate::failure::Failure;
use crate::report::{ReportDocument, Tolerances};

#[allow(clippy::too_many_arguments)]
pub fn run(
    dim: Option<usize>,
    signature_text: &str,
    n_plus: usize,
    n_minus: usize,
    seed: Option<u64>,
    output: &Path,
    tol: Tolerances,
) -> Result<ReportDocument, Failure> {
    let signature = parse_signature(signature_text)?;
    if let Some(d) = dim {
        if d != signature.len() {
            return Err(Failure::Parse(format!(
                "--dim {d} disagrees with the {}-entry signature",
                signature.len()
            )));
        }
    }
    let p = signature.iter().filter(|&&s| s == 1).count();
    let q = signature.len() - p;

    let mut report = ReportDocument::new("generate", tol);
    let seed = resolve_seed(seed)?;
    report.set_seed(seed);

    // The generator works over its own coordinate order, so relabel the
    // coordinates afterwards to match the requested signature layout; the
    // relabeling pairs equal signs and therefore preserves every indefinite
    // product.
    let spec = GenSpec::new(p, q, n_plus, n_minus).with_seed(seed);
    let family = permute_to_signature(&random_jframe(&spec)?, &signature)?;

    let analysis = analyze_jframe(&family, tol.rtol);
    if !analysis.is_jframe() {
        return Err(Failure::Precondition(format!(
            "generated family failed its self-check: {}",
            analysis.diagnostics().join("; ")
        )));
    }

    report.verdict("generated.is_jframe", true);
    report.verdict("generated.dim", family.space().dim() as u64);
    report.verdict("generated.vector_count", family.len() as u64);
    report.verdict("generated.excess", family.excess() as u64);
    record_bounds(
        &mut report,
        "generated.bounds_plus",
        analysis.bounds(Sign::Plus),
    );
    record_bounds(
        &mut report,
        "generated.bounds_minus",
        analysis.bounds(Sign::Minus),
    );

    write_output(
        output,
        &FrameDocument::from_family(&family).render(),
        &mut report,
    )?;
    Ok(report)
}

fn record_bounds(report: &mut ReportDocument, prefix: &str, bounds: Option<FrameBounds>) {
    if let Some(b) = bounds {
        report.verdict(&format!("{prefix}.lower"), b.lower);
        report.verdict(&format!("{prefix}.upper"), b.upper);
    }
}

/// Accepts "++-", "+,+,-", "(+1, +1, -1)" and the like.
fn parse_signature(text: &str) -> Result<Vec<i8>, Failure> {
    let cleaned: String = text
        .chars()
        .filter(|c| !c.is_whitespace() && *c != '(' && *c != ')')
        .collect();
    let mut signs = Vec::new();
    if cleaned.contains(',') {
        for token in cleaned.split(',').filter(|t| !t.is_empty()) {
            match token {
                "+" | "+1" | "1" => signs.push(1),
                "-" | "-1" => signs.push(-1),
                _ => {
                    return Err(Failure::Parse(format!(
                        "signature token {token:?} is not one of +, +1, 1, -, -1"
                    )))
                }
            }
        }
    } else {
        for c in cleaned.chars() {
            match c {
                '+' => signs.push(1),
                '-' => signs.push(-1),
                _ => {
                    return Err(Failure::Parse(format!(
                        "signature character {c:?} is not + or -"
                    )))
                }
            }
        }
    }
    if signs.is_empty() {
        return Err(Failure::Parse("signature is empty".into()));
    }
    Ok(signs)
}

/// Relabels coordinates so the family's signature becomes `requested`,
/// pairing the k-th positive coordinate with the k-th requested positive
/// position and likewise for the negative ones.
fn permute_to_signature(f: &FrameFamily, requested: &[i8]) -> Result<FrameFamily, Failure> {
    let generated = f.space().signature();
    let positions = |sig: &[i8], sign: i8| -> Vec<usize> {
        sig.iter()
            .enumerate()
            .filter(|(_, &s)| s == sign)
            .map(|(i, _)| i)
            .collect()
    };
    let mut dest = vec![0usize; generated.len()];
    for sign in [1i8, -1] {
        let from = positions(generated, sign);
        let to = positions(requested, sign);
        if from.len() != to.len() {
            return Err(Failure::Precondition(
                "requested signature disagrees with the generated one".into(),
            ));
        }
        for (src, dst) in from.into_iter().zip(to) {
            dest[src] = dst;
        }
    }
    let vectors = f
        .vectors()
        .iter()
        .map(|v| {
            let mut out = CVec::zeros(v.len());
            for (i, z) in v.iter().enumerate() {
                out[dest[i]] = *z;
            }
            out
        })
        .collect();
    let space = KreinSpace::from_signs(requested.to_vec())?;
    Ok(FrameFamily::new(space, vectors)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use kframe_core::krein::indef_product;

    #[test]
    fn signature_forms_parse_equivalently() {
        let expected = vec![1, 1, -1];
        for text in ["++-", "+,+,-", "(+1, +1, -1)", " + + - ", "1,1,-1"] {
            assert_eq!(parse_signature(text).unwrap(), expected, "{text:?}");
        }
        assert!(parse_signature("").is_err());
        assert!(parse_signature("+0-").is_err());
        assert!(parse_signature("+,x").is_err());
    }

    #[test]
    fn relabeling_preserves_indefinite_products() {
        let spec = GenSpec::new(2, 1, 3, 2).with_seed(5);
        let f = random_jframe(&spec).unwrap();
        let requested = vec![-1, 1, 1];
        let g = permute_to_signature(&f, &requested).unwrap();
        assert_eq!(g.space().signature(), requested.as_slice());
        for i in 0..f.len() {
            for j in 0..f.len() {
                let a = indef_product(f.space(), f.vector(i), f.vector(j)).unwrap();
                let b = indef_product(g.space(), g.vector(i), g.vector(j)).unwrap();
                assert!((a - b).norm() < 1e-12);
            }
        }
    }
}
