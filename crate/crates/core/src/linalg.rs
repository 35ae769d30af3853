//! Dense complex linear algebra underlying the Krein-space routines.
//!
//! Everything operates on `DMatrix<Complex64>`. Ranks, range and nullspace
//! bases, complements, and principal angles are all derived from Hermitian
//! eigendecompositions of Gram matrices rather than from the matrix library's
//! SVD, whose complex implementation returns inconsistent factors for some
//! well-conditioned inputs. Squaring into a Gram matrix costs accuracy on
//! tiny singular values, so thresholds are floored at `SV_RTOL_FLOOR` (see
//! there). This module also provides a complex Schur triangularization
//! (Householder reduction to Hessenberg form followed by shifted QR iteration
//! with Givens rotations) and the principal matrix square root computed by
//! the standard triangular recurrence on the Schur factor.

use nalgebra::{Cholesky, DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense complex matrix.
pub type CMat = DMatrix<Complex64>;
/// Dense complex column vector.
pub type CVec = DVector<Complex64>;

pub(crate) const C_ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const C_ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Real scalar promoted to a complex one.
pub fn cr(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Entrywise scaling by a real factor.
pub fn scale(a: &CMat, s: f64) -> CMat {
    a.map(|z| z * s)
}

/// Hermitian part (A + A*)/2.
pub fn hermitian_part(a: &CMat) -> CMat {
    scale(&(a + a.adjoint()), 0.5)
}

/// Deviation from Hermitian symmetry, ‖A − A*‖.
pub fn hermitian_defect(a: &CMat) -> f64 {
    (a - a.adjoint()).norm()
}

/// Singular-value thresholds passed to the rank-revealing helpers are raised
/// to at least this value. Singular values come from eigenvalues of a Gram
/// matrix, so anything below sqrt(eigensolver noise) ~ 1e-8 of the largest
/// singular value cannot be told apart from zero; the floor keeps rank
/// decisions away from that region.
pub const SV_RTOL_FLOOR: f64 = 1e-7;

/// Eigenvalues of the Hermitian part of `a`, ascending, paired with columns.
fn hermitian_eigen_raw(a: CMat) -> (Vec<f64>, CMat) {
    let n = a.nrows();
    if n == 0 {
        return (Vec::new(), CMat::zeros(0, 0));
    }
    let es = SymmetricEigen::new(hermitian_part(&a));
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| es.eigenvalues[i].total_cmp(&es.eigenvalues[j]));
    let vals = order.iter().map(|&i| es.eigenvalues[i]).collect();
    let mut vecs = CMat::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vecs.set_column(dst, &es.eigenvectors.column(src));
    }
    (vals, vecs)
}

/// Singular values of `a`, descending, via the smaller Gram matrix.
pub fn singular_values(a: &CMat) -> Vec<f64> {
    if a.nrows() == 0 || a.ncols() == 0 {
        return Vec::new();
    }
    let gram = if a.nrows() <= a.ncols() {
        a * a.adjoint()
    } else {
        a.adjoint() * a
    };
    let (vals, _) = hermitian_eigen_raw(gram);
    vals.iter().rev().map(|&l| l.max(0.0).sqrt()).collect()
}

/// Operator 2-norm (largest singular value).
pub fn op_norm(a: &CMat) -> f64 {
    singular_values(a).first().copied().unwrap_or(0.0)
}

/// ‖A − B‖ / ‖B‖ in the Frobenius norm, falling back to the absolute
/// deviation when the reference is zero.
pub fn rel_residual(actual: &CMat, reference: &CMat) -> f64 {
    let dev = (actual - reference).norm();
    let den = reference.norm();
    if den > 0.0 {
        dev / den
    } else {
        dev
    }
}

/// Rank with singular values thresholded relative to the largest one. The
/// threshold is floored at `SV_RTOL_FLOOR`.
pub fn rank(a: &CMat, rtol: f64) -> usize {
    let sv = singular_values(a);
    let smax = sv.first().copied().unwrap_or(0.0);
    if smax <= 0.0 {
        return 0;
    }
    let cut = rtol.max(SV_RTOL_FLOOR) * smax;
    sv.iter().filter(|&&s| s > cut).count()
}

/// Orthonormal basis of the column space, as matrix columns.
pub fn range_basis(a: &CMat, rtol: f64) -> CMat {
    let m = a.nrows();
    if m == 0 || a.ncols() == 0 {
        return CMat::zeros(m, 0);
    }
    let (vals, vecs) = hermitian_eigen_raw(a * a.adjoint());
    let lmax = vals.last().copied().unwrap_or(0.0).max(0.0);
    if lmax <= 0.0 {
        return CMat::zeros(m, 0);
    }
    let cut = rtol.max(SV_RTOL_FLOOR) * lmax.sqrt();
    // Eigenvalues ascending; keep descending order in the output.
    let keep: Vec<usize> = (0..vals.len())
        .rev()
        .filter(|&k| vals[k].max(0.0).sqrt() > cut)
        .collect();
    select_columns(&vecs, &keep)
}

fn select_columns(a: &CMat, indices: &[usize]) -> CMat {
    let mut out = CMat::zeros(a.nrows(), indices.len());
    for (dst, &src) in indices.iter().enumerate() {
        out.set_column(dst, &a.column(src));
    }
    out
}

/// Orthonormal basis of the nullspace, as matrix columns.
pub fn nullspace_basis(a: &CMat, rtol: f64) -> CMat {
    let n = a.ncols();
    if n == 0 {
        return CMat::zeros(0, 0);
    }
    let (vals, vecs) = hermitian_eigen_raw(a.adjoint() * a);
    let lmax = vals.last().copied().unwrap_or(0.0).max(0.0);
    let cut = rtol.max(SV_RTOL_FLOOR) * lmax.sqrt();
    let keep: Vec<usize> = (0..vals.len())
        .filter(|&k| lmax <= 0.0 || vals[k].max(0.0).sqrt() <= cut)
        .collect();
    select_columns(&vecs, &keep)
}

/// Nullspace basis with an absolute singular-value cutoff, for inputs whose
/// natural scale the caller already knows (e.g. products of orthonormal
/// bases and coordinate projectors, bounded by one). A cutoff relative to
/// the largest singular value would keep nothing when the whole matrix is
/// numerically zero.
pub fn nullspace_basis_abs(a: &CMat, cut: f64) -> CMat {
    let n = a.ncols();
    if n == 0 {
        return CMat::zeros(0, 0);
    }
    let (vals, vecs) = hermitian_eigen_raw(a.adjoint() * a);
    let keep: Vec<usize> = (0..vals.len())
        .filter(|&k| vals[k].max(0.0).sqrt() <= cut)
        .collect();
    select_columns(&vecs, &keep)
}

/// Orthonormal basis of the orthogonal complement of the span of `q`.
///
/// `q` must already have orthonormal columns.
pub fn orthonormal_complement(q: &CMat) -> CMat {
    let m = q.nrows();
    if q.ncols() == 0 {
        return CMat::identity(m, m);
    }
    // Eigenvalues of the complementary projector are 0 or 1.
    let p = CMat::identity(m, m) - q * q.adjoint();
    let (vals, vecs) = hermitian_eigen_raw(p);
    let keep: Vec<usize> = (0..vals.len()).filter(|&k| vals[k] > 0.5).collect();
    select_columns(&vecs, &keep)
}

/// Cosines of the principal angles between the column spaces of `a` and `b`,
/// sorted in descending order and clamped to [0, 1].
pub fn principal_angle_cosines(a: &CMat, b: &CMat, rtol: f64) -> Vec<f64> {
    let qa = range_basis(a, rtol);
    let qb = range_basis(b, rtol);
    if qa.ncols() == 0 || qb.ncols() == 0 {
        return Vec::new();
    }
    singular_values(&(qa.adjoint() * qb))
        .iter()
        .map(|s| s.clamp(0.0, 1.0))
        .collect()
}

/// Largest principal angle between two subspaces given as column spans.
///
/// Returns π/2 when the ranks differ, so a small value certifies span
/// equality. For equal ranks the angle comes from the orthogonal-projector
/// gap, ‖P_A − P_B‖ = sin θ_max, which resolves tiny angles that a cosine
/// plus acos would round away.
pub fn max_principal_angle(a: &CMat, b: &CMat, rtol: f64) -> f64 {
    let qa = range_basis(a, rtol);
    let qb = range_basis(b, rtol);
    if qa.ncols() != qb.ncols() {
        return std::f64::consts::FRAC_PI_2;
    }
    if qa.ncols() == 0 {
        return 0.0;
    }
    let gap = op_norm(&(&qa * qa.adjoint() - &qb * qb.adjoint()));
    gap.clamp(0.0, 1.0).asin()
}

/// Relative residual of the containment range(a) ⊆ span(q), where `q` has
/// orthonormal columns: ‖a − q q* a‖ / ‖a‖, zero for a = 0.
pub fn containment_residual(a: &CMat, q: &CMat) -> f64 {
    let na = a.norm();
    if na == 0.0 {
        return 0.0;
    }
    (a - q * (q.adjoint() * a)).norm() / na
}

/// Eigenvalues (ascending) and matching eigenvector columns of the Hermitian
/// part of `a`.
pub fn hermitian_eigen(a: &CMat) -> (Vec<f64>, CMat) {
    hermitian_eigen_raw(a.clone())
}

/// Smallest eigenvalue of the Hermitian part of `a`.
pub fn min_hermitian_eigenvalue(a: &CMat) -> f64 {
    let (vals, _) = hermitian_eigen(a);
    vals.first().copied().unwrap_or(0.0)
}

/// Eigenvalues (ascending) of the pencil A x = λ B x with A Hermitian and B
/// Hermitian positive definite, via a Cholesky reduction to standard form.
pub fn generalized_hermitian_eigenvalues(a: &CMat, b: &CMat) -> Result<Vec<f64>> {
    let chol = Cholesky::new(hermitian_part(b)).ok_or(Error::Precondition(
        "generalized eigenproblem needs a positive definite right-hand matrix".into(),
    ))?;
    let l = chol.l();
    let la = l
        .solve_lower_triangular(&hermitian_part(a))
        .ok_or(Error::Singular {
            context: "Cholesky factor in generalized eigenproblem",
        })?;
    let c = l
        .solve_lower_triangular(&la.adjoint())
        .ok_or(Error::Singular {
            context: "Cholesky factor in generalized eigenproblem",
        })?
        .adjoint();
    let (vals, _) = hermitian_eigen(&c);
    Ok(vals)
}

/// Solves A X = B by LU factorization.
pub fn solve(a: &CMat, b: &CMat) -> Result<CMat> {
    // A 0x0 system is trivially solved; the LU path cannot handle it.
    if a.nrows() == 0 && a.ncols() == 0 {
        return Ok(CMat::zeros(0, b.ncols()));
    }
    a.clone().lu().solve(b).ok_or(Error::Singular {
        context: "LU solve",
    })
}

/// Matrix inverse by LU factorization.
pub fn inverse(a: &CMat) -> Result<CMat> {
    if a.nrows() == 0 && a.ncols() == 0 {
        return Ok(CMat::zeros(0, 0));
    }
    a.clone().try_inverse().ok_or(Error::Singular {
        context: "matrix inverse",
    })
}

/// Moore-Penrose pseudoinverse with singular values below `rtol·σ_max`
/// (floored at `SV_RTOL_FLOOR`) treated as zero.
pub fn pseudo_inverse(a: &CMat, rtol: f64) -> CMat {
    let (m, n) = (a.nrows(), a.ncols());
    if m == 0 || n == 0 {
        return CMat::zeros(n, m);
    }
    // A+ = V diag(1/λ) V* A* from the eigenpairs of the Gram matrix A*A.
    let (vals, vecs) = hermitian_eigen_raw(a.adjoint() * a);
    let lmax = vals.last().copied().unwrap_or(0.0).max(0.0);
    if lmax <= 0.0 {
        return CMat::zeros(n, m);
    }
    let cut = rtol.max(SV_RTOL_FLOOR) * lmax.sqrt();
    let mut core = CMat::zeros(n, n);
    for (k, &l) in vals.iter().enumerate() {
        if l.max(0.0).sqrt() > cut {
            core += scale(&(vecs.column(k) * vecs.column(k).adjoint()), 1.0 / l);
        }
    }
    core * a.adjoint()
}

/// Complex Schur form A = Q T Q* with Q unitary and T upper triangular.
#[derive(Debug, Clone)]
pub struct SchurDecomposition {
    pub q: CMat,
    pub t: CMat,
}

impl SchurDecomposition {
    /// Diagonal of the triangular factor, i.e. the eigenvalues of A in the
    /// order produced by the iteration.
    pub fn eigenvalues(&self) -> Vec<Complex64> {
        (0..self.t.nrows()).map(|i| self.t[(i, i)]).collect()
    }
}

/// Computes the complex Schur form of a square matrix.
pub fn schur(a: &CMat) -> Result<SchurDecomposition> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(Error::ShapeMismatch {
            context: "Schur decomposition",
            expected: "square matrix".into(),
            got: format!("{}x{}", a.nrows(), a.ncols()),
        });
    }
    if n == 0 {
        return Ok(SchurDecomposition {
            q: CMat::zeros(0, 0),
            t: CMat::zeros(0, 0),
        });
    }
    let (mut q, mut h) = hessenberg(a);
    qr_iteration(&mut q, &mut h)?;
    // The iteration leaves roundoff dust below the diagonal.
    for j in 0..n {
        for i in j + 1..n {
            h[(i, j)] = C_ZERO;
        }
    }
    Ok(SchurDecomposition { q, t: h })
}

/// Eigenvalues of a square matrix, in no particular order.
pub fn eigenvalues(a: &CMat) -> Result<Vec<Complex64>> {
    Ok(schur(a)?.eigenvalues())
}

/// Unitary reduction to upper Hessenberg form, A = Q H Q*.
fn hessenberg(a: &CMat) -> (CMat, CMat) {
    let n = a.nrows();
    let mut h = a.clone();
    let mut q = CMat::identity(n, n);
    for k in 0..n.saturating_sub(2) {
        let mut v: Vec<Complex64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let xnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if xnorm == 0.0 {
            continue;
        }
        let x0 = v[0];
        let phase = if x0.norm() == 0.0 {
            C_ONE
        } else {
            x0 / x0.norm()
        };
        let alpha = -phase * xnorm;
        v[0] -= alpha;
        let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            continue;
        }
        for e in v.iter_mut() {
            *e /= vnorm;
        }
        // Reflector I − 2vv* on coordinates k+1..n, applied as a similarity.
        for j in k..n {
            let s: Complex64 = (0..v.len()).map(|i| v[i].conj() * h[(k + 1 + i, j)]).sum();
            for i in 0..v.len() {
                h[(k + 1 + i, j)] -= cr(2.0) * v[i] * s;
            }
        }
        for i in 0..n {
            let s: Complex64 = (0..v.len()).map(|j| h[(i, k + 1 + j)] * v[j]).sum();
            for j in 0..v.len() {
                h[(i, k + 1 + j)] -= cr(2.0) * s * v[j].conj();
            }
        }
        for i in 0..n {
            let s: Complex64 = (0..v.len()).map(|j| q[(i, k + 1 + j)] * v[j]).sum();
            for j in 0..v.len() {
                q[(i, k + 1 + j)] -= cr(2.0) * s * v[j].conj();
            }
        }
        h[(k + 1, k)] = alpha;
        for i in k + 2..n {
            h[(i, k)] = C_ZERO;
        }
    }
    (q, h)
}

/// Rotation (c, s) with |c|² + |s|² = 1 mapping (f, g) to (r, 0) under
/// [[c̄, s̄], [−s, c]].
fn givens(f: Complex64, g: Complex64) -> (Complex64, Complex64) {
    let rho = (f.norm_sqr() + g.norm_sqr()).sqrt();
    if rho == 0.0 {
        (C_ONE, C_ZERO)
    } else {
        (f / rho, g / rho)
    }
}

/// Shifted QR iteration driving a Hessenberg matrix to triangular form while
/// accumulating the unitary similarity into `q`.
fn qr_iteration(q: &mut CMat, h: &mut CMat) -> Result<()> {
    let n = h.nrows();
    if n <= 1 {
        return Ok(());
    }
    let eps = f64::EPSILON;
    let hnorm = h.norm().max(f64::MIN_POSITIVE);
    let budget = 60 * n * n + 200;
    let mut sweeps = 0usize;
    let mut since_deflation = 0usize;
    let mut hi = n - 1;
    while hi > 0 {
        // Split at the first negligible subdiagonal entry above `hi`.
        let mut lo = hi;
        loop {
            if lo == 0 {
                break;
            }
            let local = h[(lo - 1, lo - 1)].norm() + h[(lo, lo)].norm();
            let floor = if local == 0.0 { hnorm } else { local };
            if h[(lo, lo - 1)].norm() <= eps * floor {
                h[(lo, lo - 1)] = C_ZERO;
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            hi -= 1;
            since_deflation = 0;
            continue;
        }
        sweeps += 1;
        since_deflation += 1;
        if sweeps > budget {
            return Err(Error::NoConvergence(sweeps));
        }
        let mu = if since_deflation.is_multiple_of(25) {
            // Exceptional shift breaks rare symmetric stalls.
            h[(hi, hi)] + cr(0.75 * h[(hi, hi - 1)].norm())
        } else {
            // Wilkinson shift: trailing 2x2 eigenvalue closest to the corner.
            let a = h[(hi - 1, hi - 1)];
            let b = h[(hi - 1, hi)];
            let c = h[(hi, hi - 1)];
            let d = h[(hi, hi)];
            let half = (a + d) * cr(0.5);
            let disc = (half * half - (a * d - b * c)).sqrt();
            let e1 = half + disc;
            let e2 = half - disc;
            if (e1 - d).norm() <= (e2 - d).norm() {
                e1
            } else {
                e2
            }
        };
        // Explicit QR step on the active block: factor H − μI with Givens
        // rotations, then apply the same rotations as a similarity.
        let m = hi - lo + 1;
        let mut blk = h.view((lo, lo), (m, m)).into_owned();
        for i in 0..m {
            blk[(i, i)] -= mu;
        }
        let mut rotations = Vec::with_capacity(m - 1);
        for i in 0..m - 1 {
            let (c, s) = givens(blk[(i, i)], blk[(i + 1, i)]);
            rotations.push((lo + i, c, s));
            for j in i..m {
                let t1 = blk[(i, j)];
                let t2 = blk[(i + 1, j)];
                blk[(i, j)] = c.conj() * t1 + s.conj() * t2;
                blk[(i + 1, j)] = -s * t1 + c * t2;
            }
        }
        for &(i, c, s) in &rotations {
            for j in 0..n {
                let t1 = h[(i, j)];
                let t2 = h[(i + 1, j)];
                h[(i, j)] = c.conj() * t1 + s.conj() * t2;
                h[(i + 1, j)] = -s * t1 + c * t2;
            }
        }
        for &(i, c, s) in &rotations {
            for r in 0..n {
                let t1 = h[(r, i)];
                let t2 = h[(r, i + 1)];
                h[(r, i)] = t1 * c + t2 * s;
                h[(r, i + 1)] = -t1 * s.conj() + t2 * c.conj();
            }
            for r in 0..n {
                let t1 = q[(r, i)];
                let t2 = q[(r, i + 1)];
                q[(r, i)] = t1 * c + t2 * s;
                q[(r, i + 1)] = -t1 * s.conj() + t2 * c.conj();
            }
        }
    }
    Ok(())
}

/// Principal square root of an upper triangular matrix whose diagonal stays
/// off the closed negative real axis.
pub fn sqrt_triangular(t: &CMat) -> Result<CMat> {
    let n = t.nrows();
    let mut r = CMat::zeros(n, n);
    for i in 0..n {
        r[(i, i)] = t[(i, i)].sqrt();
    }
    for k in 1..n {
        for i in 0..n - k {
            let j = i + k;
            let mut s = C_ZERO;
            for l in i + 1..j {
                s += r[(i, l)] * r[(l, j)];
            }
            let denom = r[(i, i)] + r[(j, j)];
            if denom.norm() == 0.0 {
                return Err(Error::SpectrumOnAxis {
                    eigenvalue: t[(i, i)],
                });
            }
            r[(i, j)] = (t[(i, j)] - s) / denom;
        }
    }
    Ok(r)
}

/// Principal square root of a square matrix with spectrum in the open right
/// half-plane.
///
/// Eigenvalues whose real part falls below `axis_tol` times the spectral
/// scale are rejected, since the principal branch degenerates there.
pub fn principal_sqrt_matrix(a: &CMat, axis_tol: f64) -> Result<CMat> {
    let dec = schur(a)?;
    let eigs = dec.eigenvalues();
    let scale = eigs.iter().map(|z| z.norm()).fold(0.0, f64::max);
    for &lam in &eigs {
        if lam.re <= axis_tol * scale {
            return Err(Error::SpectrumOnAxis { eigenvalue: lam });
        }
    }
    let r = sqrt_triangular(&dec.t)?;
    Ok(&dec.q * r * dec.q.adjoint())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Deterministic full-rank-ish complex test matrix.
    fn probe(n: usize, m: usize, seed: f64) -> CMat {
        CMat::from_fn(n, m, |i, j| {
            let t = seed + 2.3 * i as f64 + 1.7 * j as f64;
            c(t.sin(), (0.6 * t).cos())
        })
    }

    #[test]
    fn rank_and_bases_of_rank_deficient_matrix() {
        // Third row is the sum of the first two, fourth column the sum of
        // the first and third.
        let mut a = CMat::zeros(3, 4);
        a[(0, 0)] = c(1.0, 0.0);
        a[(0, 2)] = c(2.0, 1.0);
        a[(1, 1)] = c(0.0, 3.0);
        a[(1, 2)] = c(-1.0, 0.0);
        a[(2, 0)] = a[(0, 0)];
        a[(2, 1)] = a[(1, 1)];
        a[(2, 2)] = a[(0, 2)] + a[(1, 2)];
        for i in 0..3 {
            a[(i, 3)] = a[(i, 0)] + a[(i, 2)];
        }
        assert_eq!(rank(&a, 1e-12), 2);

        let q = range_basis(&a, 1e-12);
        assert_eq!(q.shape(), (3, 2));
        assert!((q.adjoint() * &q - CMat::identity(2, 2)).norm() < 1e-12);

        let ns = nullspace_basis(&a, 1e-12);
        assert_eq!(ns.shape(), (4, 2));
        assert!((&a * &ns).norm() < 1e-12);
        assert!((ns.adjoint() * &ns - CMat::identity(2, 2)).norm() < 1e-12);

        let comp = orthonormal_complement(&q);
        assert_eq!(comp.shape(), (3, 1));
        assert!((q.adjoint() * &comp).norm() < 1e-12);
    }

    #[test]
    fn principal_angles_between_coordinate_planes() {
        let mut a = CMat::zeros(3, 2);
        a[(0, 0)] = C_ONE;
        a[(1, 1)] = C_ONE;
        let mut b = CMat::zeros(3, 2);
        b[(1, 0)] = C_ONE;
        b[(2, 1)] = C_ONE;
        let cos = principal_angle_cosines(&a, &b, 1e-12);
        assert_eq!(cos.len(), 2);
        assert!((cos[0] - 1.0).abs() < 1e-12);
        assert!(cos[1].abs() < 1e-12);
        assert!((max_principal_angle(&a, &a, 1e-12)).abs() < 1e-7);
    }

    #[test]
    fn hermitian_eigen_sorts_ascending() {
        let a = CMat::from_diagonal(&CVec::from_vec(vec![c(3.0, 0.0), c(1.0, 0.0), c(2.0, 0.0)]));
        let (vals, vecs) = hermitian_eigen(&a);
        assert!((vals[0] - 1.0).abs() < 1e-14);
        assert!((vals[1] - 2.0).abs() < 1e-14);
        assert!((vals[2] - 3.0).abs() < 1e-14);
        // Eigenvector columns match the sorted eigenvalues.
        for (k, &lam) in vals.iter().enumerate() {
            let v = vecs.column(k).into_owned();
            assert!((&a * &v - v.map(|z| z * lam)).norm() < 1e-12);
        }
    }

    #[test]
    fn generalized_eigenvalues_reduce_by_cholesky() {
        let a = CMat::from_diagonal(&CVec::from_vec(vec![c(2.0, 0.0), c(8.0, 0.0)]));
        let b = CMat::from_diagonal(&CVec::from_vec(vec![c(1.0, 0.0), c(4.0, 0.0)]));
        let vals = generalized_hermitian_eigenvalues(&a, &b).unwrap();
        assert!((vals[0] - 2.0).abs() < 1e-12);
        assert!((vals[1] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn schur_reconstructs_and_triangularizes() {
        for n in [1, 2, 3, 5, 8] {
            let a = probe(n, n, 0.4);
            let dec = schur(&a).unwrap();
            let unitary_defect = (dec.q.adjoint() * &dec.q - CMat::identity(n, n)).norm();
            assert!(unitary_defect < 1e-12, "n={n}: {unitary_defect:.3e}");
            let recon = &dec.q * &dec.t * dec.q.adjoint();
            let res = rel_residual(&recon, &a);
            assert!(res < 1e-12, "n={n}: {res:.3e}");
            for j in 0..n {
                for i in j + 1..n {
                    assert_eq!(dec.t[(i, j)], C_ZERO);
                }
            }
        }
    }

    #[test]
    fn schur_recovers_known_spectrum() {
        // A = V D V^{ -1 } with D = diag(1, 2, 3) and unit upper triangular V.
        let d = CMat::from_diagonal(&CVec::from_vec(vec![c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0)]));
        let mut v = CMat::identity(3, 3);
        v[(0, 1)] = c(1.0, 1.0);
        v[(1, 2)] = c(-2.0, 0.5);
        let a = &v * d * inverse(&v).unwrap();
        let mut eigs = eigenvalues(&a).unwrap();
        eigs.sort_by(|x, y| x.re.total_cmp(&y.re));
        for (lam, want) in eigs.iter().zip([1.0, 2.0, 3.0]) {
            assert!((lam - c(want, 0.0)).norm() < 1e-10);
        }
    }

    #[test]
    fn principal_sqrt_of_diagonal_and_nonnormal() {
        let a = CMat::from_diagonal(&CVec::from_vec(vec![c(4.0, 0.0), c(9.0, 0.0)]));
        let r = principal_sqrt_matrix(&a, 1e-12).unwrap();
        assert!((r[(0, 0)] - c(2.0, 0.0)).norm() < 1e-13);
        assert!((r[(1, 1)] - c(3.0, 0.0)).norm() < 1e-13);

        let mut t = CMat::zeros(2, 2);
        t[(0, 0)] = c(4.0, 0.0);
        t[(0, 1)] = c(10.0, 0.0);
        t[(1, 1)] = c(9.0, 0.0);
        let r = principal_sqrt_matrix(&t, 1e-12).unwrap();
        assert!(rel_residual(&(&r * &r), &t) < 1e-13);
        assert!((r[(0, 1)] - c(2.0, 0.0)).norm() < 1e-13);

        // Non-normal similarity of a positive diagonal.
        let mut v = CMat::identity(3, 3);
        v[(0, 1)] = c(3.0, -1.0);
        v[(0, 2)] = c(0.0, 2.0);
        v[(1, 2)] = c(1.0, 0.0);
        let d = CMat::from_diagonal(&CVec::from_vec(vec![
            c(1.0, 0.0),
            c(4.0, 0.0),
            c(0.25, 0.0),
        ]));
        let a = &v * d * inverse(&v).unwrap();
        let r = principal_sqrt_matrix(&a, 1e-12).unwrap();
        assert!(rel_residual(&(&r * &r), &a) < 1e-10);
        for lam in eigenvalues(&r).unwrap() {
            assert!(lam.arg().abs() < std::f64::consts::FRAC_PI_4);
        }
    }

    #[test]
    fn principal_sqrt_rejects_axis_spectrum() {
        let a = CMat::from_diagonal(&CVec::from_vec(vec![c(-1.0, 0.0), c(1.0, 0.0)]));
        assert!(matches!(
            principal_sqrt_matrix(&a, 1e-12),
            Err(Error::SpectrumOnAxis { .. })
        ));
        let mut nilp = CMat::zeros(2, 2);
        nilp[(0, 1)] = C_ONE;
        assert!(matches!(
            principal_sqrt_matrix(&nilp, 1e-12),
            Err(Error::SpectrumOnAxis { .. })
        ));
    }

    #[test]
    fn pseudo_inverse_matches_least_squares() {
        let a = probe(4, 2, 1.1);
        let p = pseudo_inverse(&a, 1e-12);
        assert!((&p * &a - CMat::identity(2, 2)).norm() < 1e-12);
        // Defining identities of the Moore-Penrose inverse.
        assert!(rel_residual(&(&a * &p * &a), &a) < 1e-12);
        assert!(rel_residual(&(&p * &a * &p), &p) < 1e-12);
    }

    #[test]
    fn operator_norm_is_largest_singular_value() {
        let a = CMat::from_diagonal(&CVec::from_vec(vec![c(3.0, 0.0), c(0.0, -4.0)]));
        assert!((op_norm(&a) - 4.0).abs() < 1e-14);
    }
}
