//! Dual families of a J-frame: verification of the duality identities, the
//! criterion for a dual family to be a J-frame itself, the additive
//! W-parametrization of all duals, and the minimal-norm property of the
//! canonical dual.
//!
//! Throughout, F is a J-frame with synthesis T and partition signs sigma_i,
//! and a candidate dual G has synthesis V. Duality means
//! f = sum_i sigma_i [f, f_i] g_i = sum_i sigma_i [f, g_i] f_i together with
//! the sign condition sgn[g_i, g_i] = sigma_i.

use rand::Rng;

use crate::error::{Error, Result};
use crate::frame::{FrameFamily, Sign};
use crate::jframe::{
    self, canonical_dual, coefficient_projection, jframe_operator_matrix, require_jframe,
};
use crate::krein::{j_companion, OperatorMatrix, Subspace};
use crate::linalg::{self, CMat, CVec};
use crate::{DEFAULT_RESIDUAL_TOL, DEFAULT_RTOL};

/// Everything learned about a candidate dual family.
#[derive(Debug, Clone)]
pub struct DualityReport {
    /// Sign condition and both duality identities hold at tolerance.
    pub is_dual: bool,
    /// `is_dual` and the dual family is itself a J-frame.
    pub is_jframe_dual: bool,
    /// Indices with sgn[g_i, g_i] != sigma_i.
    pub sign_violations: Vec<usize>,
    /// ‖T P+ V+ − Q‖.
    pub residual_plus: f64,
    /// ‖T P− V+ − (I − Q)‖.
    pub residual_minus: f64,
    /// ‖V T+ − I‖.
    pub reconstruction_residual: f64,
    /// Span of the positively signed dual vectors, N+ = R(V+).
    pub n_plus: Subspace,
    /// Span of the negatively signed dual vectors, N− = R(V−).
    pub n_minus: Subspace,
    /// N+ ∩ N− = {0} at the principal-angle threshold.
    pub intersection_trivial: bool,
    /// N(V) splits along the signed coordinate blocks.
    pub kernel_split_ok: bool,
    /// R(V+) = M−^{[⊥]}.
    pub range_criterion_plus: bool,
    /// R(V−) = M+^{[⊥]}.
    pub range_criterion_minus: bool,
    /// Perturbation W = V − S^{-1}T, available when the family is dual.
    pub w: Option<OperatorMatrix>,
}

/// Verifies the duality identities of G against the J-frame F.
///
/// The projection identities T P± V+ = Q, I−Q are equivalent to the two
/// reconstruction sums; their residuals are reported separately. The
/// J-frame-dual fields are filled as well, so one report answers both
/// questions.
pub fn check_dual(f: &FrameFamily, g: &FrameFamily, tol: f64) -> Result<DualityReport> {
    if f.len() != g.len() {
        return Err(Error::IndexSetMismatch {
            left: f.len(),
            right: g.len(),
        });
    }
    let analysis = require_jframe(f, DEFAULT_RTOL)?;
    let space = f.space();
    let dim = space.dim();
    let j = space.j_matrix();
    let j2 = f.coefficient_space().j_matrix();

    let sign_violations: Vec<usize> = (0..f.len())
        .filter(|&i| {
            let sp = crate::krein::indef_product(space, g.vector(i), g.vector(i))
                .expect("dual vectors live in the ambient space")
                .re;
            match f.signs()[i] {
                Sign::Plus => sp < 0.0,
                Sign::Minus => sp >= 0.0,
            }
        })
        .collect();

    let t = f.synthesis();
    let tm = t.entries();
    let v = g.synthesis();
    let vm = v.entries();
    // V+ uses the partition of F: the sign condition ties G to that
    // signature even while it is under test.
    let v_plus_adj = &j2 * vm.adjoint() * &j;
    let q = analysis
        .q()
        .expect("a J-frame carries the projection Q")
        .entries()
        .clone();
    let id = CMat::identity(dim, dim);

    let residual_plus = (tm * f.sign_projector(Sign::Plus) * &v_plus_adj - &q).norm();
    let residual_minus = (tm * f.sign_projector(Sign::Minus) * &v_plus_adj - (&id - &q)).norm();
    let t_adj = t.j_adjoint();
    let reconstruction_residual = (vm * t_adj.entries() - &id).norm();

    let is_dual = sign_violations.is_empty()
        && residual_plus <= tol
        && residual_minus <= tol
        && reconstruction_residual <= tol;

    // Kernel-splitting test deciding whether the dual family is itself a
    // J-frame.
    let n_plus = Subspace::from_span(
        space.clone(),
        &signed_columns_of(f, g, Sign::Plus),
        DEFAULT_RTOL,
    )?;
    let n_minus = Subspace::from_span(
        space.clone(),
        &signed_columns_of(f, g, Sign::Minus),
        DEFAULT_RTOL,
    )?;
    let intersection_trivial = n_plus.intersects_trivially(&n_minus);

    let null_v = linalg::nullspace_basis(vm, DEFAULT_RTOL);
    let kernel_split_ok = jframe::supported_part_dim(f, &null_v, Sign::Plus)
        + jframe::supported_part_dim(f, &null_v, Sign::Minus)
        == null_v.ncols();

    let angle_tol = tol.max(1e-8);
    let range_criterion_plus = linalg::max_principal_angle(
        n_plus.basis(),
        j_companion(analysis.m_minus()).basis(),
        DEFAULT_RTOL,
    ) < angle_tol;
    let range_criterion_minus = linalg::max_principal_angle(
        n_minus.basis(),
        j_companion(analysis.m_plus()).basis(),
        DEFAULT_RTOL,
    ) < angle_tol;

    let w = if is_dual {
        let s = jframe_operator_matrix(f);
        let w_entries = vm - linalg::solve(&s, tm)?;
        Some(OperatorMatrix::new(
            f.coefficient_space(),
            space.clone(),
            w_entries,
        )?)
    } else {
        None
    };

    Ok(DualityReport {
        is_dual,
        is_jframe_dual: is_dual && intersection_trivial && kernel_split_ok,
        sign_violations,
        residual_plus,
        residual_minus,
        reconstruction_residual,
        n_plus,
        n_minus,
        intersection_trivial,
        kernel_split_ok,
        range_criterion_plus,
        range_criterion_minus,
        w,
    })
}

/// Columns of G on one side of F's partition.
fn signed_columns_of(f: &FrameFamily, g: &FrameFamily, sign: Sign) -> CMat {
    let idx = f.indices(sign);
    let mut m = CMat::zeros(f.space().dim(), idx.len());
    for (j, &i) in idx.iter().enumerate() {
        m.set_column(j, g.vector(i));
    }
    m
}

/// Decides whether the dual family G is a J-frame, via the kernel-splitting
/// criterion; the range criterion R(V±) = M∓^{[⊥]} is evaluated on the same
/// report for cross-validation.
///
/// Errors when G is not a dual family of F at tolerance `tol`.
pub fn dual_is_jframe(f: &FrameFamily, g: &FrameFamily, tol: f64) -> Result<DualityReport> {
    let report = check_dual(f, g, tol)?;
    if !report.is_dual {
        return Err(Error::NotADual(format!(
            "residuals {:.3e}/{:.3e}/{:.3e}, {} sign violations",
            report.residual_plus,
            report.residual_minus,
            report.reconstruction_residual,
            report.sign_violations.len()
        )));
    }
    Ok(report)
}

/// Extracts the perturbation W = V − S^{-1}T of a dual family.
///
/// For a genuine dual, W kills the range of T+, i.e. W T+ = 0; a residual
/// beyond `DEFAULT_RESIDUAL_TOL` (relative to ‖W‖·‖T+‖) means G is not
/// consistent with the parametrization.
pub fn extract_w(f: &FrameFamily, g: &FrameFamily) -> Result<OperatorMatrix> {
    if f.len() != g.len() {
        return Err(Error::IndexSetMismatch {
            left: f.len(),
            right: g.len(),
        });
    }
    require_jframe(f, DEFAULT_RTOL)?;
    let s = jframe_operator_matrix(f);
    let t = f.synthesis();
    let w_entries = g.synthesis().entries() - linalg::solve(&s, t.entries())?;
    let t_adj = t.j_adjoint();
    let scale = (w_entries.norm() * t_adj.entries().norm()).max(1.0);
    let residual = (&w_entries * t_adj.entries()).norm() / scale;
    if residual > DEFAULT_RESIDUAL_TOL {
        return Err(Error::InconsistentDual { residual });
    }
    OperatorMatrix::new(f.coefficient_space(), f.space().clone(), w_entries)
}

/// Projects a raw perturbation onto the admissible set {W : W T+ = 0} by
/// right-multiplying with I − E, E the coefficient projection onto
/// N(T)^{[⊥]}.
pub fn project_admissible(f: &FrameFamily, w_raw: &OperatorMatrix) -> Result<OperatorMatrix> {
    let n = f.len();
    if w_raw.entries().nrows() != f.space().dim() || w_raw.entries().ncols() != n {
        return Err(Error::ShapeMismatch {
            context: "dual perturbation",
            expected: format!("{}x{}", f.space().dim(), n),
            got: format!("{}x{}", w_raw.entries().nrows(), w_raw.entries().ncols()),
        });
    }
    let e = coefficient_projection(f)?;
    let projected = w_raw.entries() * (CMat::identity(n, n) - e.entries());
    OperatorMatrix::new(f.coefficient_space(), f.space().clone(), projected)
}

/// Builds the dual family with synthesis V = S^{-1}T + W.
///
/// The perturbation is first projected onto the admissible set, so any W of
/// the right shape parametrizes a family satisfying the reconstruction
/// identities; the sign condition is checked afterwards and violations are
/// reported as an error listing the offending indices.
pub fn generate_dual(f: &FrameFamily, w: &OperatorMatrix) -> Result<FrameFamily> {
    require_jframe(f, DEFAULT_RTOL)?;
    let w = project_admissible(f, w)?;
    let s = jframe_operator_matrix(f);
    let t = f.synthesis();
    let v = linalg::solve(&s, t.entries())? + w.entries();
    let g = FrameFamily::from_columns(f.space().clone(), &v)?;
    let violations: Vec<usize> = (0..f.len())
        .filter(|&i| f.signs()[i] != g.signs()[i])
        .collect();
    if !violations.is_empty() {
        return Err(Error::SignViolation(violations));
    }
    Ok(g)
}

/// Range test of the W-parametrization.
#[derive(Debug, Clone, Copy)]
pub struct WRangeReport {
    /// W(l2(I+)) ⊆ M−^{[⊥]}.
    pub plus_ok: bool,
    /// W(l2(I−)) ⊆ M+^{[⊥]}.
    pub minus_ok: bool,
    pub residual_plus: f64,
    pub residual_minus: f64,
}

impl WRangeReport {
    pub fn holds(&self) -> bool {
        self.plus_ok && self.minus_ok
    }
}

/// Tests whether the extracted W maps each signed coordinate block into the
/// companion of the opposite range, which characterizes duals that are
/// J-frames.
pub fn w_range_criterion(f: &FrameFamily, g: &FrameFamily, tol: f64) -> Result<WRangeReport> {
    let analysis = require_jframe(f, DEFAULT_RTOL)?;
    let w = extract_w(f, g)?;
    let wm = w.entries();
    let w_plus = wm * f.sign_projector(Sign::Plus);
    let w_minus = wm * f.sign_projector(Sign::Minus);
    let comp_minus = j_companion(analysis.m_minus());
    let comp_plus = j_companion(analysis.m_plus());
    // Residuals are measured against the dual synthesis scale, not ‖W‖: the
    // canonical dual has W = 0 up to roundoff, and dividing its companion
    // leakage by its own noise norm would report a spurious violation.
    let scale = g.synthesis().entries().norm().max(f64::MIN_POSITIVE);
    let leak = |m: &CMat, q: &CMat| (m - q * (q.adjoint() * m)).norm() / scale;
    let residual_plus = leak(&w_plus, comp_minus.basis());
    let residual_minus = leak(&w_minus, comp_plus.basis());
    Ok(WRangeReport {
        plus_ok: residual_plus <= tol,
        minus_ok: residual_minus <= tol,
        residual_plus,
        residual_minus,
    })
}

/// Signed coefficient energies of `v` against the family `g` under the
/// partition of `f`: (sum over I+ of |[v, g_i]|², same over I−).
pub fn coefficient_energies(f: &FrameFamily, g: &FrameFamily, v: &CVec) -> (f64, f64) {
    let j = f.space().j_matrix();
    let coeffs = g.synthesis().entries().adjoint() * (&j * v);
    let mut plus = 0.0;
    let mut minus = 0.0;
    for (i, sign) in f.signs().iter().enumerate() {
        let e = coeffs[i].norm_sqr();
        match sign {
            Sign::Plus => plus += e,
            Sign::Minus => minus += e,
        }
    }
    (plus, minus)
}

/// Outcome of the minimal-norm comparison against the canonical dual.
#[derive(Debug, Clone, Copy)]
pub struct MinimalNormReport {
    pub trials: usize,
    /// Smallest observed slack (competitor energy − canonical energy) per
    /// side and trial, on unit test vectors; ≥ −tol for a pass.
    pub worst_margin: f64,
    pub pass: bool,
}

/// For random unit vectors, verifies per side that the canonical dual's
/// coefficient energy never exceeds that of any provided dual family.
pub fn minimal_norm_check<R: Rng>(
    f: &FrameFamily,
    duals: &[FrameFamily],
    trials: usize,
    tol: f64,
    rng: &mut R,
) -> Result<MinimalNormReport> {
    let canonical = canonical_dual(f)?;
    for g in duals {
        let report = check_dual(f, g, DEFAULT_RESIDUAL_TOL)?;
        if !report.is_dual {
            return Err(Error::NotADual(
                "minimal-norm comparison needs dual families".into(),
            ));
        }
    }
    let dim = f.space().dim();
    let mut worst = f64::INFINITY;
    for _ in 0..trials {
        let mut v = jframe::random_cvec(rng, dim);
        let norm = v.norm();
        if norm == 0.0 {
            continue;
        }
        v /= linalg::cr(norm);
        let (canon_plus, canon_minus) = coefficient_energies(f, &canonical, &v);
        for g in duals {
            let (gp, gm) = coefficient_energies(f, g, &v);
            worst = worst.min(gp - canon_plus).min(gm - canon_minus);
        }
    }
    if worst == f64::INFINITY {
        worst = 0.0;
    }
    Ok(MinimalNormReport {
        trials,
        worst_margin: worst,
        pass: worst >= -tol,
    })
}
