//! Finite-dimensional Krein spaces: signatures, the indefinite product,
//! J-adjoints, subspace classification, J-orthogonal companions, and
//! J-selfadjoint projections.
//!
//! A space is `C^n` equipped with the fundamental symmetry J = diag(sigma)
//! for a +/-1 signature sigma, giving [x, y] = <Jx, y>. Subspaces carry
//! Hilbert-orthonormal bases so span comparisons reduce to principal angles.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, CMat, CVec};

/// `C^n` with a +/-1 signature defining the indefinite inner product.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KreinSpace {
    signature: Vec<i8>,
}

impl KreinSpace {
    /// Builds a space from explicit +/-1 signs, one per coordinate.
    pub fn from_signs(signature: Vec<i8>) -> Result<Self> {
        if let Some(bad) = signature.iter().position(|s| *s != 1 && *s != -1) {
            return Err(Error::BadSignature(bad));
        }
        Ok(KreinSpace { signature })
    }

    /// Space with `p` positive coordinates followed by `q` negative ones.
    pub fn from_pq(p: usize, q: usize) -> Self {
        let mut signature = vec![1i8; p];
        signature.extend(std::iter::repeat_n(-1i8, q));
        KreinSpace { signature }
    }

    /// Ordinary Hilbert space: all signs positive.
    pub fn hilbert(dim: usize) -> Self {
        KreinSpace {
            signature: vec![1i8; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.signature.len()
    }

    /// Number of positive signature entries.
    pub fn num_positive(&self) -> usize {
        self.signature.iter().filter(|s| **s > 0).count()
    }

    /// Number of negative signature entries.
    pub fn num_negative(&self) -> usize {
        self.signature.iter().filter(|s| **s < 0).count()
    }

    pub fn signature(&self) -> &[i8] {
        &self.signature
    }

    /// Fundamental symmetry J = diag(signature).
    pub fn j_matrix(&self) -> CMat {
        CMat::from_fn(self.dim(), self.dim(), |i, j| {
            if i == j {
                linalg::cr(self.signature[i] as f64)
            } else {
                linalg::C_ZERO
            }
        })
    }

    /// Indices of the positive and negative signature entries.
    pub fn sign_split(&self) -> (Vec<usize>, Vec<usize>) {
        let pos = (0..self.dim()).filter(|&i| self.signature[i] > 0).collect();
        let neg = (0..self.dim()).filter(|&i| self.signature[i] < 0).collect();
        (pos, neg)
    }
}

/// Indefinite product [x, y] = sum_i sigma_i x_i conj(y_i).
pub fn indef_product(sp: &KreinSpace, x: &CVec, y: &CVec) -> Result<Complex64> {
    if x.len() != sp.dim() || y.len() != sp.dim() {
        return Err(Error::ShapeMismatch {
            context: "indefinite product",
            expected: format!("vectors of length {}", sp.dim()),
            got: format!("{} and {}", x.len(), y.len()),
        });
    }
    Ok((0..sp.dim())
        .map(|i| linalg::cr(sp.signature[i] as f64) * x[i] * y[i].conj())
        .sum())
}

/// A matrix together with the Krein spaces it maps between.
///
/// The coefficient space of a frame is itself a `KreinSpace` (the sign of
/// each index plays the signature role), so one type covers synthesis
/// operators, frame operators, and projections alike.
#[derive(Debug, Clone)]
pub struct OperatorMatrix {
    domain: KreinSpace,
    codomain: KreinSpace,
    entries: CMat,
}

impl OperatorMatrix {
    pub fn new(domain: KreinSpace, codomain: KreinSpace, entries: CMat) -> Result<Self> {
        if entries.nrows() != codomain.dim() || entries.ncols() != domain.dim() {
            return Err(Error::ShapeMismatch {
                context: "operator construction",
                expected: format!("{}x{}", codomain.dim(), domain.dim()),
                got: format!("{}x{}", entries.nrows(), entries.ncols()),
            });
        }
        Ok(OperatorMatrix {
            domain,
            codomain,
            entries,
        })
    }

    pub fn domain(&self) -> &KreinSpace {
        &self.domain
    }

    pub fn codomain(&self) -> &KreinSpace {
        &self.codomain
    }

    pub fn entries(&self) -> &CMat {
        &self.entries
    }

    pub fn into_entries(self) -> CMat {
        self.entries
    }

    /// J-adjoint A+ = J_dom A* J_cod, mapping the codomain back to the
    /// domain. Satisfies [Ax, y] = [x, A+ y].
    pub fn j_adjoint(&self) -> OperatorMatrix {
        let entries = self.domain.j_matrix() * self.entries.adjoint() * self.codomain.j_matrix();
        OperatorMatrix {
            domain: self.codomain.clone(),
            codomain: self.domain.clone(),
            entries,
        }
    }

    /// Relative deviation from J-selfadjointness, ‖A − A⁺‖/‖A‖.
    ///
    /// Only meaningful for endomorphisms; a domain/codomain mismatch is a
    /// shape error.
    pub fn j_selfadjoint_defect(&self) -> Result<f64> {
        if self.domain != self.codomain {
            return Err(Error::ShapeMismatch {
                context: "J-selfadjointness test",
                expected: "matching domain and codomain".into(),
                got: "different spaces".into(),
            });
        }
        Ok(linalg::rel_residual(
            self.j_adjoint().entries(),
            &self.entries,
        ))
    }
}

/// Classification of a subspace under the indefinite product.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubspaceClass {
    UniformlyPositive,
    UniformlyNegative,
    IndefiniteOrDegenerate,
    Zero,
}

impl SubspaceClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            SubspaceClass::UniformlyPositive => "uniformly_positive",
            SubspaceClass::UniformlyNegative => "uniformly_negative",
            SubspaceClass::IndefiniteOrDegenerate => "indefinite_or_degenerate",
            SubspaceClass::Zero => "zero",
        }
    }
}

/// Subspace of a Krein space, stored as a Hilbert-orthonormal basis.
#[derive(Debug, Clone)]
pub struct Subspace {
    ambient: KreinSpace,
    basis: CMat,
}

impl Subspace {
    /// Subspace spanned by the columns of `span`; the basis is orthonormalized
    /// and near-dependent columns are dropped at `rtol`.
    pub fn from_span(ambient: KreinSpace, span: &CMat, rtol: f64) -> Result<Self> {
        if span.nrows() != ambient.dim() {
            return Err(Error::ShapeMismatch {
                context: "subspace span",
                expected: format!("{} rows", ambient.dim()),
                got: format!("{} rows", span.nrows()),
            });
        }
        let basis = linalg::range_basis(span, rtol);
        Ok(Subspace { ambient, basis })
    }

    /// Wraps an already orthonormal basis.
    pub fn from_orthonormal(ambient: KreinSpace, basis: CMat) -> Result<Self> {
        if basis.nrows() != ambient.dim() {
            return Err(Error::ShapeMismatch {
                context: "subspace basis",
                expected: format!("{} rows", ambient.dim()),
                got: format!("{} rows", basis.nrows()),
            });
        }
        let k = basis.ncols();
        let defect = (basis.adjoint() * &basis - CMat::identity(k, k)).norm();
        if defect > 1e-10 {
            return Err(Error::Precondition(format!(
                "basis columns are not orthonormal (defect {defect:.3e})"
            )));
        }
        Ok(Subspace { ambient, basis })
    }

    pub fn zero(ambient: KreinSpace) -> Self {
        let dim = ambient.dim();
        Subspace {
            ambient,
            basis: CMat::zeros(dim, 0),
        }
    }

    pub fn full(ambient: KreinSpace) -> Self {
        let dim = ambient.dim();
        Subspace {
            ambient,
            basis: CMat::identity(dim, dim),
        }
    }

    pub fn ambient(&self) -> &KreinSpace {
        &self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn basis(&self) -> &CMat {
        &self.basis
    }

    /// Orthogonal (Hilbert) projector onto the subspace.
    pub fn orthogonal_projector(&self) -> CMat {
        &self.basis * self.basis.adjoint()
    }

    /// Span equality at tolerance `tol`, via the gap ‖P_self − P_other‖.
    pub fn coincides_with(&self, other: &Subspace, tol: f64) -> bool {
        self.ambient == other.ambient
            && self.dim() == other.dim()
            && linalg::op_norm(&(self.orthogonal_projector() - other.orthogonal_projector())) <= tol
    }

    /// True when the intersection with `other` is trivial, decided by the
    /// largest principal-angle cosine staying below 1 − 1e-9.
    pub fn intersects_trivially(&self, other: &Subspace) -> bool {
        let cos = linalg::principal_angle_cosines(&self.basis, &other.basis, crate::DEFAULT_RTOL);
        cos.first().map(|c| *c < 1.0 - 1e-9).unwrap_or(true)
    }
}

/// Classifies the subspace from the spectrum of its indefinite Gram matrix.
///
/// With a Hilbert-orthonormal basis the Gram eigenvalues lie in [−1, 1], so
/// `tol` is an absolute eigenvalue threshold.
pub fn classify_subspace(s: &Subspace, tol: f64) -> SubspaceClass {
    if s.dim() == 0 {
        return SubspaceClass::Zero;
    }
    let gram = s.basis().adjoint() * s.ambient().j_matrix() * s.basis();
    let (vals, _) = linalg::hermitian_eigen(&gram);
    let min = vals.first().copied().unwrap_or(0.0);
    let max = vals.last().copied().unwrap_or(0.0);
    if min > tol {
        SubspaceClass::UniformlyPositive
    } else if max < -tol {
        SubspaceClass::UniformlyNegative
    } else {
        SubspaceClass::IndefiniteOrDegenerate
    }
}

/// Maximality test for definite subspaces: a uniformly positive subspace is
/// maximal iff its dimension equals the number of positive signature entries,
/// and symmetrically for negative ones.
pub fn is_maximal_definite(s: &Subspace, tol: f64) -> Result<bool> {
    match classify_subspace(s, tol) {
        SubspaceClass::UniformlyPositive => Ok(s.dim() == s.ambient().num_positive()),
        SubspaceClass::UniformlyNegative => Ok(s.dim() == s.ambient().num_negative()),
        other => Err(Error::NotDefinite {
            found: other.as_str(),
        }),
    }
}

/// J-orthogonal companion: the ordinary orthogonal complement of J·span(s).
pub fn j_companion(s: &Subspace) -> Subspace {
    let jb = s.ambient().j_matrix() * s.basis();
    // J is unitary, so the columns of J·B stay orthonormal.
    let basis = linalg::orthonormal_complement(&jb);
    Subspace {
        ambient: s.ambient().clone(),
        basis,
    }
}

/// Oblique projection onto `range` along `along`, as a plain matrix.
///
/// Requires the two spans to decompose the space; near-failure of that
/// decomposition surfaces as a singular solve.
pub(crate) fn oblique_projection_matrix(range: &CMat, along: &CMat, _rtol: f64) -> Result<CMat> {
    // E = B (D* B)^{-1} D* with D an orthonormal basis of (span along)^perp:
    // then E x = x on span(range) and E x = 0 on span(along).
    let d = linalg::orthonormal_complement(along);
    if d.ncols() != range.ncols() {
        return Err(Error::Singular {
            context: "oblique projection: spans do not decompose the space",
        });
    }
    let m = d.adjoint() * range;
    let coeff = linalg::solve(&m, &d.adjoint().into_owned())?;
    Ok(range * coeff)
}

/// The J-selfadjoint projection onto a regular subspace, i.e. the oblique
/// projection onto `s` along its J-orthogonal companion.
pub fn j_projection(s: &Subspace, rtol: f64) -> Result<OperatorMatrix> {
    let comp = j_companion(s);
    let cos = linalg::principal_angle_cosines(s.basis(), comp.basis(), rtol);
    let max_cos = cos.first().copied().unwrap_or(0.0);
    if s.dim() + comp.dim() != s.ambient().dim() || max_cos >= 1.0 - rtol {
        return Err(Error::DegenerateSubspace {
            min_angle: max_cos.min(1.0).acos(),
        });
    }
    let e = oblique_projection_matrix(s.basis(), comp.basis(), rtol).map_err(|_| {
        Error::DegenerateSubspace {
            min_angle: max_cos.min(1.0).acos(),
        }
    })?;
    OperatorMatrix::new(s.ambient().clone(), s.ambient().clone(), e)
}
