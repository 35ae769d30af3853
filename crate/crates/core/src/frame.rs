//! Frame families over a Krein space: sign partition of the index set,
//! synthesis operators, Hilbert frame bounds, and excess.
//!
//! The coefficient space of a family is itself a Krein space: index i
//! carries the sign of [f_i, f_i], which equips l2(I) with the symmetry
//! J2 = P+ − P−. Families are ordered and may repeat vectors.

use crate::error::{Error, Result};
use crate::krein::{indef_product, KreinSpace, OperatorMatrix, Subspace};
use crate::linalg::{self, CMat, CVec};
use crate::DEFAULT_RTOL;

/// Side of the sign partition of the index set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn as_f64(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// Optimal Hilbert frame bounds, the extreme eigenvalues of T T*.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameBounds {
    pub lower: f64,
    pub upper: f64,
}

/// Ordered family of vectors in a Krein space with its derived sign
/// partition.
///
/// Index i goes to the plus side iff [f_i, f_i] >= 0. Vectors whose
/// self-product is small relative to their norm are additionally recorded as
/// near-neutral; a genuine J-frame has none of those, but the constructor
/// only flags them so diagnostics stay visible.
#[derive(Debug, Clone)]
pub struct FrameFamily {
    space: KreinSpace,
    vectors: Vec<CVec>,
    signs: Vec<Sign>,
    self_products: Vec<f64>,
    near_neutral: Vec<usize>,
}

impl FrameFamily {
    /// Builds a family and classifies every index by the sign of its
    /// self-product, flagging near-neutral vectors at the default relative
    /// tolerance.
    pub fn new(space: KreinSpace, vectors: Vec<CVec>) -> Result<Self> {
        Self::with_neutrality_tol(space, vectors, DEFAULT_RTOL)
    }

    /// As `new`, with an explicit neutrality threshold: index i is flagged
    /// when |[f_i, f_i]| <= tol · ‖f_i‖².
    pub fn with_neutrality_tol(space: KreinSpace, vectors: Vec<CVec>, tol: f64) -> Result<Self> {
        let mut signs = Vec::with_capacity(vectors.len());
        let mut self_products = Vec::with_capacity(vectors.len());
        let mut near_neutral = Vec::new();
        for (i, v) in vectors.iter().enumerate() {
            let p = indef_product(&space, v, v)?;
            // [v, v] is real up to roundoff.
            let p = p.re;
            self_products.push(p);
            signs.push(if p >= 0.0 { Sign::Plus } else { Sign::Minus });
            if p.abs() <= tol * v.norm_squared() {
                near_neutral.push(i);
            }
        }
        Ok(FrameFamily {
            space,
            vectors,
            signs,
            self_products,
            near_neutral,
        })
    }

    /// Family whose vectors are the columns of `columns`.
    pub fn from_columns(space: KreinSpace, columns: &CMat) -> Result<Self> {
        let vectors = (0..columns.ncols())
            .map(|j| columns.column(j).into_owned())
            .collect();
        Self::new(space, vectors)
    }

    pub fn space(&self) -> &KreinSpace {
        &self.space
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[CVec] {
        &self.vectors
    }

    pub fn vector(&self, i: usize) -> &CVec {
        &self.vectors[i]
    }

    pub fn signs(&self) -> &[Sign] {
        &self.signs
    }

    /// Self-products [f_i, f_i] (real parts; the values are real).
    pub fn self_products(&self) -> &[f64] {
        &self.self_products
    }

    /// Indices flagged as numerically neutral.
    pub fn near_neutral(&self) -> &[usize] {
        &self.near_neutral
    }

    /// Indices on the requested side of the partition.
    pub fn indices(&self, sign: Sign) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.signs[i] == sign).collect()
    }

    /// Coefficient space l2(I): one coordinate per family index, signed by
    /// the partition.
    pub fn coefficient_space(&self) -> KreinSpace {
        let signature = self
            .signs
            .iter()
            .map(|s| match s {
                Sign::Plus => 1i8,
                Sign::Minus => -1i8,
            })
            .collect();
        KreinSpace::from_signs(signature).expect("signs are +/-1 by construction")
    }

    /// Diagonal coordinate projector P± of the coefficient space.
    pub fn sign_projector(&self, sign: Sign) -> CMat {
        CMat::from_fn(self.len(), self.len(), |i, j| {
            if i == j && self.signs[i] == sign {
                linalg::C_ONE
            } else {
                linalg::C_ZERO
            }
        })
    }

    /// Synthesis operator T: l2(I) -> H, the matrix with columns f_i.
    pub fn synthesis(&self) -> OperatorMatrix {
        let mut t = CMat::zeros(self.space.dim(), self.len());
        for (j, v) in self.vectors.iter().enumerate() {
            t.set_column(j, v);
        }
        OperatorMatrix::new(self.coefficient_space(), self.space.clone(), t)
            .expect("synthesis shape matches by construction")
    }

    /// One-sided synthesis T± = T P±: columns off the requested side are
    /// zeroed, the shape is kept.
    pub fn synthesis_signed(&self, sign: Sign) -> OperatorMatrix {
        let mut t = CMat::zeros(self.space.dim(), self.len());
        for (j, v) in self.vectors.iter().enumerate() {
            if self.signs[j] == sign {
                t.set_column(j, v);
            }
        }
        OperatorMatrix::new(self.coefficient_space(), self.space.clone(), t)
            .expect("synthesis shape matches by construction")
    }

    /// The vectors on one side of the partition, as matrix columns (no
    /// zero padding).
    pub fn signed_columns(&self, sign: Sign) -> CMat {
        let idx = self.indices(sign);
        let mut m = CMat::zeros(self.space.dim(), idx.len());
        for (j, &i) in idx.iter().enumerate() {
            m.set_column(j, &self.vectors[i]);
        }
        m
    }

    /// Span of the vectors on one side, the range M± of T±.
    pub fn signed_span(&self, sign: Sign) -> Subspace {
        Subspace::from_span(self.space.clone(), &self.signed_columns(sign), DEFAULT_RTOL)
            .expect("columns live in the ambient space")
    }

    /// Optimal Hilbert frame bounds from the eigenvalues of T T*, or `None`
    /// when the family does not span the space.
    pub fn frame_bounds(&self) -> Option<FrameBounds> {
        let t = self.synthesis();
        let t = t.entries();
        if linalg::rank(t, DEFAULT_RTOL) < self.space.dim() {
            return None;
        }
        let gram = t * t.adjoint();
        let (vals, _) = linalg::hermitian_eigen(&gram);
        Some(FrameBounds {
            lower: vals.first().copied().unwrap_or(0.0),
            upper: vals.last().copied().unwrap_or(0.0),
        })
    }

    /// Excess n − rank(T): the dimension of the nullspace of the synthesis.
    pub fn excess(&self) -> usize {
        self.len() - linalg::rank(self.synthesis().entries(), DEFAULT_RTOL)
    }
}

/// Invertible V with V f_i = g_i for all i, when one exists at tolerance
/// `tol`; `None` when the families are not similar.
pub fn similarity_witness(
    f: &FrameFamily,
    g: &FrameFamily,
    tol: f64,
) -> Result<Option<OperatorMatrix>> {
    if f.len() != g.len() {
        return Err(Error::IndexSetMismatch {
            left: f.len(),
            right: g.len(),
        });
    }
    if f.space().dim() != g.space().dim() {
        return Err(Error::ShapeMismatch {
            context: "similarity witness",
            expected: format!("ambient dimension {}", f.space().dim()),
            got: format!("{}", g.space().dim()),
        });
    }
    let tf = f.synthesis();
    let tg = g.synthesis();
    let tf = tf.entries();
    let tg = tg.entries();
    // Least-squares candidate; exact on range(T_F) when F spans the space.
    let v = tg * linalg::pseudo_inverse(tf, DEFAULT_RTOL);
    let residual = (&v * tf - tg).norm();
    if residual > tol * tg.norm().max(f64::MIN_POSITIVE) {
        return Ok(None);
    }
    if linalg::rank(&v, DEFAULT_RTOL) < f.space().dim() {
        return Ok(None);
    }
    Ok(Some(OperatorMatrix::new(
        f.space().clone(),
        g.space().clone(),
        v,
    )?))
}
