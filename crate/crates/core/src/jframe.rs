//! J-frame classification, the J-frame operator S = T T+ with its positive
//! parts S±, the canonical dual family, reconstruction checks, and the
//! structural facts about N(T) and the coefficient projection.
//!
//! A family is a J-frame iff the span of its positive-signed vectors is
//! maximal uniformly J-positive and the span of the negative-signed ones is
//! maximal uniformly J-negative; the two spans then decompose the space and
//! carry the oblique projection Q onto M+ along M−.

use rand::Rng;

use crate::error::{Error, Result};
use crate::frame::{FrameBounds, FrameFamily, Sign};
use crate::krein::{
    self, classify_subspace, j_companion, KreinSpace, OperatorMatrix, Subspace, SubspaceClass,
};
use crate::linalg::{self, CMat, CVec};
use crate::DEFAULT_RTOL;

/// Everything `analyze_jframe` learns about a family.
///
/// The operator fields are always filled (they are defined for any family);
/// `q` and the bounds exist only when the corresponding spans behave, and
/// `diagnostics` lists every violated criterion in plain text.
#[derive(Debug, Clone)]
pub struct JFrameAnalysis {
    is_jframe: bool,
    m_plus: Subspace,
    m_minus: Subspace,
    q: Option<OperatorMatrix>,
    s: OperatorMatrix,
    s_plus: OperatorMatrix,
    s_minus: OperatorMatrix,
    bounds_plus: Option<FrameBounds>,
    bounds_minus: Option<FrameBounds>,
    diagnostics: Vec<String>,
}

impl JFrameAnalysis {
    pub fn is_jframe(&self) -> bool {
        self.is_jframe
    }

    /// Span of the positively signed vectors, M+.
    pub fn m_plus(&self) -> &Subspace {
        &self.m_plus
    }

    /// Span of the negatively signed vectors, M−.
    pub fn m_minus(&self) -> &Subspace {
        &self.m_minus
    }

    /// Projection onto M+ along M−, available when the spans decompose the
    /// space.
    pub fn q(&self) -> Option<&OperatorMatrix> {
        self.q.as_ref()
    }

    /// J-frame operator S = T T+.
    pub fn s(&self) -> &OperatorMatrix {
        &self.s
    }

    /// Positive part S+ = T P+ T* J; range M+ for a J-frame.
    pub fn s_plus(&self) -> &OperatorMatrix {
        &self.s_plus
    }

    /// Negative part S− = T P− T* J, so that S = S+ − S−.
    pub fn s_minus(&self) -> &OperatorMatrix {
        &self.s_minus
    }

    /// Frame bounds of the positive or negative side, measured against
    /// ±[f, f] on M±. `None` when that side is empty or not definite.
    pub fn bounds(&self, sign: Sign) -> Option<FrameBounds> {
        match sign {
            Sign::Plus => self.bounds_plus,
            Sign::Minus => self.bounds_minus,
        }
    }

    pub fn diagnostics(&self) -> &[String] {
        &self.diagnostics
    }
}

/// J-frame operator S = T J2 T* J as a plain matrix.
pub fn jframe_operator_matrix(f: &FrameFamily) -> CMat {
    let t = f.synthesis();
    let tm = t.entries();
    tm * f.coefficient_space().j_matrix() * tm.adjoint() * f.space().j_matrix()
}

/// One-sided operator S± = T P± T* J as a plain matrix.
pub fn signed_operator_matrix(f: &FrameFamily, sign: Sign) -> CMat {
    let t = f.synthesis();
    let tm = t.entries();
    tm * f.sign_projector(sign) * tm.adjoint() * f.space().j_matrix()
}

fn side_bounds(f: &FrameFamily, sign: Sign, span: &Subspace) -> Option<FrameBounds> {
    if span.dim() == 0 {
        return None;
    }
    let j = f.space().j_matrix();
    let b = span.basis();
    let cols = f.signed_columns(sign);
    // Quadratic form sum_{i in I±} |[f, f_i]|^2 compressed to the span.
    let jb = &j * b;
    let a = jb.adjoint() * &cols * cols.adjoint() * &jb;
    // ±[f, f] compressed to the span; positive definite on a definite span.
    let g = linalg::scale(&(b.adjoint() * &j * b), sign.as_f64());
    let vals = linalg::generalized_hermitian_eigenvalues(&a, &g).ok()?;
    Some(FrameBounds {
        lower: vals.first().copied()?,
        upper: vals.last().copied()?,
    })
}

/// Classifies a family as a J-frame and assembles the associated operators.
///
/// `tol` is the definiteness margin for subspace classification. Failures
/// are reported in the diagnostics, never as errors.
pub fn analyze_jframe(f: &FrameFamily, tol: f64) -> JFrameAnalysis {
    let space = f.space().clone();
    let m_plus = f.signed_span(Sign::Plus);
    let m_minus = f.signed_span(Sign::Minus);
    let mut diagnostics = Vec::new();

    for &i in f.near_neutral() {
        diagnostics.push(format!(
            "vector {i} is numerically neutral ([f,f] = {:.3e})",
            f.self_products()[i]
        ));
    }

    let plus_ok = match classify_subspace(&m_plus, tol) {
        SubspaceClass::UniformlyPositive => {
            let maximal = m_plus.dim() == space.num_positive();
            if !maximal {
                diagnostics.push(format!(
                    "positive span has dimension {} but the signature allows {}",
                    m_plus.dim(),
                    space.num_positive()
                ));
            }
            maximal
        }
        SubspaceClass::Zero if space.num_positive() == 0 => true,
        other => {
            diagnostics.push(format!(
                "positive span classifies as {}, expected uniformly_positive",
                other.as_str()
            ));
            false
        }
    };
    let minus_ok = match classify_subspace(&m_minus, tol) {
        SubspaceClass::UniformlyNegative => {
            let maximal = m_minus.dim() == space.num_negative();
            if !maximal {
                diagnostics.push(format!(
                    "negative span has dimension {} but the signature allows {}",
                    m_minus.dim(),
                    space.num_negative()
                ));
            }
            maximal
        }
        SubspaceClass::Zero if space.num_negative() == 0 => true,
        other => {
            diagnostics.push(format!(
                "negative span classifies as {}, expected uniformly_negative",
                other.as_str()
            ));
            false
        }
    };
    let is_jframe = plus_ok && minus_ok;

    let q = if is_jframe {
        krein::oblique_projection_matrix(m_plus.basis(), m_minus.basis(), DEFAULT_RTOL)
            .ok()
            .map(|e| {
                OperatorMatrix::new(space.clone(), space.clone(), e)
                    .expect("projection is square on the ambient space")
            })
    } else {
        None
    };

    let s = OperatorMatrix::new(space.clone(), space.clone(), jframe_operator_matrix(f))
        .expect("S is square on the ambient space");
    let s_plus = OperatorMatrix::new(
        space.clone(),
        space.clone(),
        signed_operator_matrix(f, Sign::Plus),
    )
    .expect("S+ is square on the ambient space");
    let s_minus = OperatorMatrix::new(
        space.clone(),
        space.clone(),
        signed_operator_matrix(f, Sign::Minus),
    )
    .expect("S- is square on the ambient space");

    let bounds_plus = side_bounds(f, Sign::Plus, &m_plus);
    let bounds_minus = side_bounds(f, Sign::Minus, &m_minus);

    JFrameAnalysis {
        is_jframe,
        m_plus,
        m_minus,
        q,
        s,
        s_plus,
        s_minus,
        bounds_plus,
        bounds_minus,
        diagnostics,
    }
}

/// As `analyze_jframe`, but a non-J-frame becomes an error carrying the
/// diagnostics.
pub fn require_jframe(f: &FrameFamily, tol: f64) -> Result<JFrameAnalysis> {
    let analysis = analyze_jframe(f, tol);
    if analysis.is_jframe {
        Ok(analysis)
    } else {
        Err(Error::NotAJFrame(analysis.diagnostics.join("; ")))
    }
}

/// S f by direct summation: sum_i sigma_i [f, f_i] f_i.
///
/// This is the summation-form oracle for the matrix S = T J2 T* J; the two
/// agree to roundoff for any family.
pub fn jframe_operator_apply(f: &FrameFamily, v: &CVec) -> Result<CVec> {
    if v.len() != f.space().dim() {
        return Err(Error::ShapeMismatch {
            context: "J-frame operator application",
            expected: format!("vector of length {}", f.space().dim()),
            got: format!("{}", v.len()),
        });
    }
    let mut out = CVec::zeros(f.space().dim());
    for (i, fi) in f.vectors().iter().enumerate() {
        let coeff = krein::indef_product(f.space(), v, fi)?;
        let sigma = f.signs()[i].as_f64();
        out += fi.map(|z| z * coeff * sigma);
    }
    Ok(out)
}

/// Canonical dual {S^{-1} f_i} of a J-frame.
pub fn canonical_dual(f: &FrameFamily) -> Result<FrameFamily> {
    require_jframe(f, DEFAULT_RTOL)?;
    let s = jframe_operator_matrix(f);
    let s_inv = linalg::inverse(&s)?;
    let t = f.synthesis();
    FrameFamily::from_columns(f.space().clone(), &(s_inv * t.entries()))
}

/// Outcome of a randomized two-sided reconstruction check.
#[derive(Debug, Clone, Copy)]
pub struct ReconstructionReport {
    pub trials: usize,
    pub max_relative_residual: f64,
    pub tol: f64,
    pub pass: bool,
}

/// Tests both reconstruction sums, f = sum_i sigma_i [f, g_i] f_i and
/// f = sum_i sigma_i [f, f_i] g_i, on random vectors. The signs sigma_i come
/// from the partition of `f`.
pub fn check_reconstruction<R: Rng>(
    f: &FrameFamily,
    g: &FrameFamily,
    trials: usize,
    tol: f64,
    rng: &mut R,
) -> Result<ReconstructionReport> {
    if f.len() != g.len() {
        return Err(Error::IndexSetMismatch {
            left: f.len(),
            right: g.len(),
        });
    }
    let dim = f.space().dim();
    let j = f.space().j_matrix();
    let j2 = f.coefficient_space().j_matrix();
    let tf = f.synthesis();
    let tg = g.synthesis();
    // Mixed operators T_F J2 T_G* J and T_G J2 T_F* J; both equal the
    // identity exactly when the families are dual.
    let mixed_fg = tf.entries() * &j2 * tg.entries().adjoint() * &j;
    let mixed_gf = tg.entries() * &j2 * tf.entries().adjoint() * &j;
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let x = random_cvec(rng, dim);
        let norm = x.norm().max(f64::MIN_POSITIVE);
        let r1 = (&mixed_fg * &x - &x).norm() / norm;
        let r2 = (&mixed_gf * &x - &x).norm() / norm;
        worst = worst.max(r1).max(r2);
    }
    Ok(ReconstructionReport {
        trials,
        max_relative_residual: worst,
        tol,
        pass: worst <= tol,
    })
}

/// Dimensions and residuals of the coordinate splitting of N(T) and of its
/// J2-orthogonal companion.
#[derive(Debug, Clone, Copy)]
pub struct NullspaceSplittingReport {
    pub null_dim: usize,
    pub null_plus_dim: usize,
    pub null_minus_dim: usize,
    pub null_splits: bool,
    pub companion_dim: usize,
    pub companion_plus_dim: usize,
    pub companion_minus_dim: usize,
    pub companion_splits: bool,
    /// ‖P+ P_N − P_N P+‖ with P_N the orthogonal projector onto N(T).
    pub commutation_residual: f64,
    pub pass: bool,
}

/// Dimension of the part of `basis`'s span supported on the coordinates of
/// one sign, i.e. of span ∩ l2(I±). `basis` must have orthonormal columns so
/// the supported part shows up as singular values below an absolute cutoff.
pub(crate) fn supported_part_dim(f: &FrameFamily, basis: &CMat, sign: Sign) -> usize {
    let other = f.sign_projector(sign.flip());
    let z = linalg::nullspace_basis_abs(&(&other * basis), linalg::SV_RTOL_FLOOR);
    z.ncols()
}

/// Verifies that N(T) and N(T)^{[⊥]} split along the signed coordinate
/// blocks of the coefficient space.
pub fn nullspace_splitting(f: &FrameFamily, tol: f64) -> Result<NullspaceSplittingReport> {
    require_jframe(f, DEFAULT_RTOL)?;
    let t = f.synthesis();
    let null = linalg::nullspace_basis(t.entries(), DEFAULT_RTOL);
    let null_dim = null.ncols();
    let null_plus_dim = supported_part_dim(f, &null, Sign::Plus);
    let null_minus_dim = supported_part_dim(f, &null, Sign::Minus);
    // Parts supported on disjoint coordinate sets are orthogonal, so the
    // splitting holds exactly when the dimensions add up.
    let null_splits = null_plus_dim + null_minus_dim == null_dim;

    let j2 = f.coefficient_space().j_matrix();
    let companion = linalg::orthonormal_complement(&(&j2 * &null));
    let companion_dim = companion.ncols();
    let companion_plus_dim = supported_part_dim(f, &companion, Sign::Plus);
    let companion_minus_dim = supported_part_dim(f, &companion, Sign::Minus);
    let companion_splits = companion_plus_dim + companion_minus_dim == companion_dim;

    let p_null = &null * null.adjoint();
    let p_plus = f.sign_projector(Sign::Plus);
    let commutation_residual = (&p_plus * &p_null - &p_null * &p_plus).norm();

    Ok(NullspaceSplittingReport {
        null_dim,
        null_plus_dim,
        null_minus_dim,
        null_splits,
        companion_dim,
        companion_plus_dim,
        companion_minus_dim,
        companion_splits,
        commutation_residual,
        pass: null_splits && companion_splits && commutation_residual <= tol,
    })
}

/// The J2-selfadjoint projection E = T+ S^{-1} T onto N(T)^{[⊥]} in the
/// coefficient space.
pub fn coefficient_projection(f: &FrameFamily) -> Result<OperatorMatrix> {
    require_jframe(f, DEFAULT_RTOL)?;
    let t = f.synthesis();
    let t_plus = t.j_adjoint();
    let s = jframe_operator_matrix(f);
    let s_inv_t = linalg::solve(&s, t.entries())?;
    let e = t_plus.entries() * s_inv_t;
    OperatorMatrix::new(f.coefficient_space(), f.coefficient_space(), e)
}

/// Margin of J-positivity of X: the smallest eigenvalue of the Hermitian
/// part of J X, normalized by ‖X‖. Nonnegative (up to tolerance) iff
/// [Xf, f] >= 0 for all f.
pub fn j_positivity_margin(space: &KreinSpace, x: &CMat) -> f64 {
    let scale = linalg::op_norm(x);
    if scale == 0.0 {
        return 0.0;
    }
    linalg::min_hermitian_eigenvalue(&(space.j_matrix() * x)) / scale
}

/// Outcome of the extremality check for S± among J-selfadjoint operators
/// with ranges in M±.
#[derive(Debug, Clone, Copy)]
pub struct ExtremalityReport {
    /// S ≤_J S+ holds.
    pub s_below_plus: bool,
    /// −S− ≤_J S holds.
    pub minus_below_s: bool,
    pub plus_competitors_ok: usize,
    pub minus_competitors_ok: usize,
    pub trials: usize,
    /// Most negative normalized positivity margin observed across all
    /// checks; ≥ −tol for a pass.
    pub worst_margin: f64,
}

impl ExtremalityReport {
    pub fn pass(&self) -> bool {
        self.s_below_plus
            && self.minus_below_s
            && self.plus_competitors_ok == self.trials
            && self.minus_competitors_ok == self.trials
    }
}

/// Random J-positive operator with range inside the given span: Y Y* J with
/// Y = B M for a random coefficient matrix M.
fn random_j_positive_into<R: Rng>(rng: &mut R, space: &KreinSpace, span: &Subspace) -> CMat {
    let y = span.basis() * random_cmat(rng, span.dim(), space.dim());
    &y * y.adjoint() * space.j_matrix()
}

/// Checks that S+ is minimal above S among J-selfadjoint operators with
/// range in M+, and −S− maximal below S with range in M−: the two defining
/// inequalities plus `trials` randomized competitors on each side.
pub fn splus_extremality_check<R: Rng>(
    f: &FrameFamily,
    trials: usize,
    tol: f64,
    rng: &mut R,
) -> Result<ExtremalityReport> {
    let analysis = require_jframe(f, DEFAULT_RTOL)?;
    let space = f.space();
    let s = analysis.s().entries();
    let s_plus = analysis.s_plus().entries();
    let s_minus = analysis.s_minus().entries();
    let q = analysis
        .q()
        .expect("a J-frame has the projection Q")
        .entries()
        .clone();
    let q_adj = OperatorMatrix::new(space.clone(), space.clone(), q.clone())?
        .j_adjoint()
        .into_entries();
    let id = CMat::identity(space.dim(), space.dim());

    let mut worst = f64::INFINITY;
    let mut track = |margin: f64| {
        worst = worst.min(margin);
        margin >= -tol
    };

    let s_below_plus = track(j_positivity_margin(space, &(s_plus - s)));
    let minus_below_s = track(j_positivity_margin(space, &(s + s_minus)));

    let mut plus_competitors_ok = 0;
    let mut minus_competitors_ok = 0;
    for _ in 0..trials {
        // X = S+ + Q R Q+ stays J-selfadjoint with range in M+; the claim
        // under test is S+ ≤_J X.
        let r = random_j_positive_into(rng, space, analysis.m_plus());
        let x = s_plus + &q * r * &q_adj;
        if track(j_positivity_margin(space, &(&x - s_plus))) {
            plus_competitors_ok += 1;
        }
        // Y = −S− − (I−Q) R' (I−Q)+ has range in M−; claim: Y ≤_J −S−.
        let rp = random_j_positive_into(rng, space, analysis.m_minus());
        let y = linalg::scale(s_minus, -1.0) - (&id - &q) * rp * (&id - &q_adj);
        if track(j_positivity_margin(
            space,
            &(linalg::scale(s_minus, -1.0) - y),
        )) {
            minus_competitors_ok += 1;
        }
    }

    Ok(ExtremalityReport {
        s_below_plus,
        minus_below_s,
        plus_competitors_ok,
        minus_competitors_ok,
        trials,
        worst_margin: worst,
    })
}

/// Per-condition verdicts of the three-part J-frame operator test.
#[derive(Debug, Clone, Copy)]
pub struct CharacterizationReport {
    /// S maps the witness onto a maximal uniformly J-positive subspace.
    pub image_maximal_positive: bool,
    /// [Sf, f] >= 0 on the witness subspace.
    pub nonnegative_on_witness: bool,
    /// [Sg, g] <= 0 on the J-orthogonal companion of the image.
    pub nonpositive_on_companion: bool,
}

impl CharacterizationReport {
    pub fn pass(&self) -> bool {
        self.image_maximal_positive && self.nonnegative_on_witness && self.nonpositive_on_companion
    }
}

/// Tests whether an invertible J-selfadjoint operator acts like a J-frame
/// operator relative to the witness subspace `l_plus`.
pub fn jframe_operator_characterization(
    s_cand: &OperatorMatrix,
    l_plus: &Subspace,
    tol: f64,
) -> Result<CharacterizationReport> {
    let space = s_cand.domain().clone();
    let defect = s_cand.j_selfadjoint_defect()?;
    if defect > tol {
        return Err(Error::NotJSelfadjoint { deviation: defect });
    }
    let s = s_cand.entries();
    if linalg::rank(s, DEFAULT_RTOL) < space.dim() {
        return Err(Error::Singular {
            context: "J-frame operator candidate",
        });
    }

    let image = Subspace::from_span(space.clone(), &(s * l_plus.basis()), DEFAULT_RTOL)?;
    let image_maximal_positive = classify_subspace(&image, tol) == SubspaceClass::UniformlyPositive
        && image.dim() == space.num_positive();

    // [Sf, f] compressed to a subspace is the Hermitian form B* J S B.
    let j = space.j_matrix();
    let witness_form = l_plus.basis().adjoint() * &j * s * l_plus.basis();
    let nonnegative_on_witness = if l_plus.dim() == 0 {
        true
    } else {
        let min = linalg::min_hermitian_eigenvalue(&witness_form);
        min >= -tol * linalg::op_norm(&witness_form).max(1.0)
    };

    let companion = j_companion(&image);
    let companion_form = companion.basis().adjoint() * &j * s * companion.basis();
    let nonpositive_on_companion = if companion.dim() == 0 {
        true
    } else {
        let (vals, _) = linalg::hermitian_eigen(&companion_form);
        let max = vals.last().copied().unwrap_or(0.0);
        max <= tol * linalg::op_norm(&companion_form).max(1.0)
    };

    Ok(CharacterizationReport {
        image_maximal_positive,
        nonnegative_on_witness,
        nonpositive_on_companion,
    })
}

/// The witness subspace M−^{[⊥]} that always satisfies the three-part test
/// for the J-frame operator of `f`.
pub fn canonical_positive_witness(f: &FrameFamily) -> Result<Subspace> {
    let analysis = require_jframe(f, DEFAULT_RTOL)?;
    Ok(j_companion(analysis.m_minus()))
}

/// Random complex vector with entries uniform in the unit square.
pub(crate) fn random_cvec<R: Rng>(rng: &mut R, n: usize) -> CVec {
    CVec::from_fn(n, |_, _| {
        num_complex::Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    })
}

/// Random complex matrix with entries uniform in the unit square.
pub(crate) fn random_cmat<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> CMat {
    CMat::from_fn(rows, cols, |_, _| {
        num_complex::Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    })
}
