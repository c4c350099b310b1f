//! Dense complex-matrix instruments shared by every construction: the
//! Hilbert–Schmidt inner product, numerical span rank via Gram matrices,
//! orthonormal span bases, and subspace comparison.
//!
//! Operators live on spaces of dimension d^2 with d <= 32, so everything is
//! dense `Complex<f64>` arithmetic; the only factorization in play is the
//! Hermitian eigen-decomposition of (small) Gram matrices.

use nalgebra::linalg::SymmetricEigen;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// Dense complex matrix, the carrier for every operator and (as a single
/// column) every state vector.
pub type CMatrix = DMatrix<Complex64>;

/// Dense complex column vector.
pub type CVector = DVector<Complex64>;

pub(crate) const C_ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Numerical thresholds governing rank, equality and residual decisions.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ToleranceConfig {
    /// Relative eigenvalue cutoff for Gram-rank decisions: an eigenvalue is
    /// retained iff it exceeds `rank_rel_eps` times the largest one.
    pub rank_rel_eps: f64,
    /// Absolute Frobenius-norm cutoff for equality and residual checks.
    pub residual_abs_eps: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            rank_rel_eps: 1e-9,
            residual_abs_eps: 1e-10,
        }
    }
}

impl ToleranceConfig {
    /// Builds a configuration, rejecting thresholds outside (0, 1e-3).
    pub fn new(rank_rel_eps: f64, residual_abs_eps: f64) -> Result<Self> {
        let check = |name: &'static str, value: f64| -> Result<()> {
            if !(value > 0.0 && value < 1e-3) {
                return Err(Error::InvalidTolerance { name, value });
            }
            Ok(())
        };
        check("rank_rel_eps", rank_rel_eps)?;
        check("residual_abs_eps", residual_abs_eps)?;
        Ok(Self {
            rank_rel_eps,
            residual_abs_eps,
        })
    }
}

fn ensure_square(m: &CMatrix) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    Ok(m.nrows())
}

fn ensure_same_square(a: &CMatrix, b: &CMatrix) -> Result<usize> {
    let n = ensure_square(a)?;
    ensure_square(b)?;
    if b.nrows() != n {
        return Err(Error::ShapeMismatch {
            left_rows: a.nrows(),
            left_cols: a.ncols(),
            right_rows: b.nrows(),
            right_cols: b.ncols(),
        });
    }
    Ok(n)
}

/// Rejects NaN/Inf entries.
pub fn check_finite(m: &CMatrix) -> Result<()> {
    for (idx, z) in m.as_slice().iter().enumerate() {
        if !z.re.is_finite() || !z.im.is_finite() {
            // column-major storage
            return Err(Error::NonFinite {
                row: idx % m.nrows(),
                col: idx / m.nrows(),
            });
        }
    }
    Ok(())
}

/// acc += alpha · x without temporaries.
pub(crate) fn add_scaled(acc: &mut CMatrix, alpha: Complex64, x: &CMatrix) {
    acc.zip_apply(x, |a, b| *a += alpha * b);
}

fn split_parts(m: &CMatrix) -> (DMatrix<f64>, DMatrix<f64>) {
    let mut re = DMatrix::<f64>::zeros(m.nrows(), m.ncols());
    let mut im = DMatrix::<f64>::zeros(m.nrows(), m.ncols());
    let (rs, is) = (re.as_mut_slice(), im.as_mut_slice());
    for (k, z) in m.as_slice().iter().enumerate() {
        rs[k] = z.re;
        is[k] = z.im;
    }
    (re, im)
}

fn merge_parts(re: DMatrix<f64>, im: DMatrix<f64>) -> CMatrix {
    let mut out = CMatrix::zeros(re.nrows(), re.ncols());
    let os = out.as_mut_slice();
    for (k, (r, i)) in re.as_slice().iter().zip(im.as_slice()).enumerate() {
        os[k] = Complex64::new(*r, *i);
    }
    out
}

/// Dense complex product assembled from four real products.
///
/// The real kernels are SIMD-backed and an order of magnitude faster than
/// the generic complex path, which dominates every conjugation-heavy check.
pub fn matmul(a: &CMatrix, b: &CMatrix) -> CMatrix {
    assert_eq!(a.ncols(), b.nrows(), "matmul shape mismatch");
    let (ar, ai) = split_parts(a);
    let (br, bi) = split_parts(b);
    let (m, n) = (a.nrows(), b.ncols());
    let mut re = DMatrix::<f64>::zeros(m, n);
    re.gemm(1.0, &ar, &br, 0.0);
    re.gemm(-1.0, &ai, &bi, 1.0);
    let mut im = DMatrix::<f64>::zeros(m, n);
    im.gemm(1.0, &ar, &bi, 0.0);
    im.gemm(1.0, &ai, &br, 1.0);
    merge_parts(re, im)
}

/// a† b without materializing the adjoint.
pub fn matmul_adjoint_left(a: &CMatrix, b: &CMatrix) -> CMatrix {
    assert_eq!(a.nrows(), b.nrows(), "matmul shape mismatch");
    let (ar, ai) = split_parts(a);
    let (br, bi) = split_parts(b);
    let (m, n) = (a.ncols(), b.ncols());
    let mut re = DMatrix::<f64>::zeros(m, n);
    re.gemm_tr(1.0, &ar, &br, 0.0);
    re.gemm_tr(1.0, &ai, &bi, 1.0);
    let mut im = DMatrix::<f64>::zeros(m, n);
    im.gemm_tr(1.0, &ar, &bi, 0.0);
    im.gemm_tr(-1.0, &ai, &br, 1.0);
    merge_parts(re, im)
}

/// Hilbert–Schmidt inner product tr(a† b), antilinear in the first argument.
pub fn hs_inner(a: &CMatrix, b: &CMatrix) -> Result<Complex64> {
    ensure_same_square(a, b)?;
    Ok(a.as_slice()
        .iter()
        .zip(b.as_slice().iter())
        .map(|(x, y)| x.conj() * y)
        .sum())
}

/// Frobenius (Hilbert–Schmidt) norm.
pub fn hs_norm(m: &CMatrix) -> f64 {
    m.norm()
}

/// u a u† for same-shaped square `u`, `a`.
pub fn conjugate(u: &CMatrix, a: &CMatrix) -> Result<CMatrix> {
    ensure_same_square(u, a)?;
    Ok(matmul(&matmul(u, a), &u.adjoint()))
}

/// ‖u†u − I‖_F; zero for exactly unitary input.
pub fn unitary_residual(u: &CMatrix) -> f64 {
    let n = u.nrows();
    (matmul_adjoint_left(u, u) - CMatrix::identity(n, n)).norm()
}

/// True iff `u` is square and ‖u†u − I‖_F ≤ `residual_abs_eps`.
pub fn is_unitary(u: &CMatrix, tol: &ToleranceConfig) -> bool {
    u.nrows() == u.ncols() && unitary_residual(u) <= tol.residual_abs_eps
}

/// max(‖p² − p‖_F, ‖p − p†‖_F); zero for an exact orthogonal projector.
pub fn projector_residual(p: &CMatrix) -> Result<f64> {
    ensure_square(p)?;
    let idem = (matmul(p, p) - p).norm();
    let herm = (p - p.adjoint()).norm();
    Ok(idem.max(herm))
}

fn ensure_uniform(ops: &[CMatrix]) -> Result<()> {
    if let Some(first) = ops.first() {
        ensure_square(first)?;
        for op in &ops[1..] {
            ensure_same_square(first, op)?;
        }
    }
    Ok(())
}

fn stacked_gram(stacked: &CMatrix) -> CMatrix {
    let g = matmul_adjoint_left(stacked, stacked);
    (&g + g.adjoint()) * Complex64::new(0.5, 0.0)
}

/// Hermitian positive-semidefinite Gram matrix G_ij = ⟨ops_i, ops_j⟩_HS,
/// symmetrized against roundoff.
pub fn gram_matrix(ops: &[CMatrix]) -> Result<CMatrix> {
    ensure_uniform(ops)?;
    for op in ops {
        check_finite(op)?;
    }
    if ops.is_empty() {
        return Ok(CMatrix::zeros(0, 0));
    }
    Ok(stacked_gram(&flatten_basis(ops)))
}

/// Eigenvalues of a Hermitian matrix sorted descending, with the matching
/// eigenvector columns.
fn eigen_desc(g: CMatrix) -> (Vec<f64>, CMatrix) {
    let n = g.nrows();
    let eig = SymmetricEigen::new(g);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

fn gram_eigen(ops: &[CMatrix]) -> Result<(Vec<f64>, CMatrix)> {
    Ok(eigen_desc(gram_matrix(ops)?))
}

/// Gram eigenvalues sorted descending. Empty input gives an empty list.
pub fn gram_spectrum(ops: &[CMatrix]) -> Result<Vec<f64>> {
    if ops.is_empty() {
        return Ok(Vec::new());
    }
    Ok(gram_eigen(ops)?.0)
}

fn retained_count(spectrum: &[f64], tol: &ToleranceConfig) -> usize {
    let max = spectrum.first().copied().unwrap_or(0.0);
    if max <= 0.0 {
        return 0;
    }
    spectrum.iter().filter(|&&v| v > tol.rank_rel_eps * max).count()
}

/// Numerical dimension of span(ops): the count of Gram eigenvalues above
/// `rank_rel_eps` times the largest one.
pub fn gram_rank(ops: &[CMatrix], tol: &ToleranceConfig) -> Result<usize> {
    if ops.is_empty() {
        return Ok(0);
    }
    let spectrum = gram_spectrum(ops)?;
    Ok(retained_count(&spectrum, tol))
}

/// Retained eigenvector columns rescaled by 1/√λ; the stacked basis is then
/// one product `stacked · combo`.
fn basis_combination(values: &[f64], vectors: &CMatrix, rank: usize) -> CMatrix {
    let mut combo = vectors.columns(0, rank).into_owned();
    for (k, value) in values.iter().enumerate().take(rank) {
        let scale = Complex64::new(1.0 / value.sqrt(), 0.0);
        combo.column_mut(k).apply(|z| *z *= scale);
    }
    combo
}

fn unstack_columns(stacked: &CMatrix, rows: usize, cols: usize) -> Vec<CMatrix> {
    (0..stacked.ncols())
        .map(|k| {
            let mut m = CMatrix::zeros(rows, cols);
            m.as_mut_slice()
                .copy_from_slice(stacked.column(k).as_slice());
            m
        })
        .collect()
}

/// HS-orthonormal basis of span(ops) with exactly `gram_rank(ops, tol)`
/// elements, assembled from the retained Gram eigenvectors.
pub fn orthonormal_span_basis(ops: &[CMatrix], tol: &ToleranceConfig) -> Result<Vec<CMatrix>> {
    ensure_uniform(ops)?;
    for op in ops {
        check_finite(op)?;
    }
    if ops.is_empty() {
        return Ok(Vec::new());
    }
    let stacked = flatten_basis(ops);
    let (values, vectors) = eigen_desc(stacked_gram(&stacked));
    let rank = retained_count(&values, tol);
    let combo = basis_combination(&values, &vectors, rank);
    let basis_mat = matmul(&stacked, &combo);
    Ok(unstack_columns(&basis_mat, ops[0].nrows(), ops[0].ncols()))
}

/// ‖x − Π(x)‖_F where Π projects onto the span of an HS-orthonormal basis.
pub fn span_residual(x: &CMatrix, basis: &[CMatrix]) -> Result<f64> {
    let mut r = x.clone();
    for b in basis {
        let c = hs_inner(b, x)?;
        add_scaled(&mut r, -c, b);
    }
    Ok(r.norm())
}

/// max_ij |Gram(basis)_ij − δ_ij|-style deviation, as a Frobenius norm.
pub fn orthonormality_deviation(basis: &[CMatrix]) -> Result<f64> {
    if basis.is_empty() {
        return Ok(0.0);
    }
    let g = gram_matrix(basis)?;
    let n = basis.len();
    Ok((g - CMatrix::identity(n, n)).norm())
}

fn ensure_orthonormal(basis: &[CMatrix], tol: &ToleranceConfig) -> Result<()> {
    let deviation = orthonormality_deviation(basis)?;
    if deviation > tol.residual_abs_eps {
        return Err(Error::NotOrthonormal { deviation });
    }
    Ok(())
}

/// Stacks a basis as the columns of an n² × r matrix (column-major
/// vectorization), so HS inner products become ordinary column products.
fn flatten_basis(basis: &[CMatrix]) -> CMatrix {
    let n2 = basis.first().map_or(0, |b| b.nrows() * b.ncols());
    let mut stacked = CMatrix::zeros(n2, basis.len());
    for (k, b) in basis.iter().enumerate() {
        stacked.column_mut(k).copy_from_slice(b.as_slice());
    }
    stacked
}

/// Residual-form projector distance between two stacked column bases, both
/// nonempty: sqrt(Σ‖a_k − Π_b a_k‖² + Σ‖b_l − Π_a b_l‖²).
fn stacked_distance(ma: &CMatrix, mb: &CMatrix) -> f64 {
    let coeff_b = matmul_adjoint_left(mb, ma);
    let coeff_a = matmul_adjoint_left(ma, mb);
    let acc = (ma - matmul(mb, &coeff_b)).norm_squared()
        + (mb - matmul(ma, &coeff_a)).norm_squared();
    acc.sqrt()
}

/// Frobenius distance ‖Π_a − Π_b‖_F between the HS-space projectors onto the
/// spans of two orthonormal bases.
///
/// Computed as the residual sum Σ‖a_k − Π_b(a_k)‖² + Σ‖b_l − Π_a(b_l)‖²,
/// which is exact for orthonormal inputs and, unlike the trace expansion
/// r_a + r_b − 2 tr(Π_a Π_b), does not cancel catastrophically when the
/// subspaces coincide.
pub fn subspace_distance(
    basis_a: &[CMatrix],
    basis_b: &[CMatrix],
    tol: &ToleranceConfig,
) -> Result<f64> {
    ensure_uniform(basis_a)?;
    ensure_uniform(basis_b)?;
    if let (Some(a), Some(b)) = (basis_a.first(), basis_b.first()) {
        ensure_same_square(a, b)?;
    }
    ensure_orthonormal(basis_a, tol)?;
    ensure_orthonormal(basis_b, tol)?;
    let ma = flatten_basis(basis_a);
    let mb = flatten_basis(basis_b);
    if basis_a.is_empty() || basis_b.is_empty() {
        // the projector onto an empty span is zero
        return Ok((ma.norm_squared() + mb.norm_squared()).sqrt());
    }
    Ok(stacked_distance(&ma, &mb))
}

/// All pairwise projector distances between several orthonormal bases of the
/// same operator space.
///
/// One orthonormal frame for the union span is grown incrementally over the
/// families; every family is expressed in frame coefficients and the pairwise
/// residual-form distances are taken there. Each reported entry includes the
/// 2(ε_i + ε_j) perturbation bound from the families' frame residuals ε, so
/// values are conservative; with well-conditioned inputs the residuals sit at
/// roundoff level and the correction is negligible. This touches each basis
/// O(1) times instead of once per pair, which is what makes dimension sweeps
/// affordable.
pub fn pairwise_subspace_distances(
    families: &[&[CMatrix]],
    tol: &ToleranceConfig,
) -> Result<Vec<Vec<f64>>> {
    let mut all: Vec<CMatrix> = Vec::new();
    let mut ranges = Vec::with_capacity(families.len());
    for family in families {
        if family.is_empty() {
            return Err(Error::EmptyGenerators);
        }
        ensure_uniform(family)?;
        ensure_same_square(&families[0][0], &family[0])?;
        ranges.push(all.len()..all.len() + family.len());
        all.extend_from_slice(family);
    }
    let stacked = flatten_basis(&all);

    // Grow the frame one family at a time: project the family on the current
    // frame and append the orthonormalized residual directions carrying more
    // than rank_rel_eps of a unit column. Keeps every product at frame width
    // instead of the full column count.
    let mut frame: Option<CMatrix> = None;
    for range in &ranges {
        let block = stacked.columns(range.start, range.len()).into_owned();
        let residual = match &frame {
            Some(u) => &block - matmul(u, &matmul_adjoint_left(u, &block)),
            None => block,
        };
        let (values, vectors) = eigen_desc(stacked_gram(&residual));
        let new_rank = values
            .iter()
            .take_while(|&&v| v > tol.rank_rel_eps)
            .count();
        if new_rank > 0 {
            let fresh = matmul(&residual, &basis_combination(&values, &vectors, new_rank));
            frame = Some(match frame {
                None => fresh,
                Some(u) => {
                    let mut widened = CMatrix::zeros(u.nrows(), u.ncols() + new_rank);
                    widened.columns_mut(0, u.ncols()).copy_from(&u);
                    widened.columns_mut(u.ncols(), new_rank).copy_from(&fresh);
                    widened
                }
            });
        }
    }
    let frame = frame.expect("families are nonempty");

    // frame coefficients of every column, and the parts the frame misses
    let coeffs = matmul_adjoint_left(&frame, &stacked);
    let residual = &stacked - matmul(&frame, &coeffs);
    let mut eps = Vec::with_capacity(families.len());
    for range in &ranges {
        let r = range.clone();
        eps.push(residual.columns(r.start, r.len()).norm_squared().sqrt());
        // orthonormality of the family, reconstructed without cancellation:
        // X†X = C†C + E†E when E is the frame-orthogonal remainder
        let c = coeffs.columns(r.start, r.len()).into_owned();
        let e = residual.columns(r.start, r.len()).into_owned();
        let gram = matmul_adjoint_left(&c, &c) + matmul_adjoint_left(&e, &e);
        let deviation = (gram - CMatrix::identity(r.len(), r.len())).norm();
        if deviation > tol.residual_abs_eps {
            return Err(Error::NotOrthonormal { deviation });
        }
    }

    let count = families.len();
    let mut distances = vec![vec![0.0; count]; count];
    for i in 0..count {
        let ci = coeffs.columns(ranges[i].start, ranges[i].len()).into_owned();
        for j in (i + 1)..count {
            let cj = coeffs.columns(ranges[j].start, ranges[j].len()).into_owned();
            let d = stacked_distance(&ci, &cj) + 2.0 * (eps[i] + eps[j]);
            distances[i][j] = d;
            distances[j][i] = d;
        }
    }
    Ok(distances)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cm(data: &[(f64, f64)], n: usize) -> CMatrix {
        // row-major input for readability
        CMatrix::from_fn(n, n, |i, j| {
            let (re, im) = data[i * n + j];
            Complex64::new(re, im)
        })
    }

    fn ident(n: usize) -> CMatrix {
        CMatrix::identity(n, n)
    }

    #[test]
    fn split_matmul_matches_generic_product() {
        let a = CMatrix::from_fn(17, 17, |i, j| {
            Complex64::new((i * 3 + j) as f64 * 0.1 - 1.0, (i as f64 - j as f64) * 0.2)
        });
        let b = CMatrix::from_fn(17, 17, |i, j| {
            Complex64::new((j * 5 + i) as f64 * 0.03, (i * j % 11) as f64 * 0.07 - 0.3)
        });
        let fast = matmul(&a, &b);
        let generic = &a * &b;
        assert!((fast - generic).norm() < 1e-10);
    }

    #[test]
    fn hs_inner_of_identities_is_dimension() {
        for d in [1, 2, 5, 9] {
            let v = hs_inner(&ident(d), &ident(d)).unwrap();
            assert!((v - Complex64::new(d as f64, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn hs_inner_traceless_orthogonal_to_identity() {
        let z = cm(&[(1.0, 0.0), (0.0, 0.0), (0.0, 0.0), (-1.0, 0.0)], 2);
        let v = hs_inner(&ident(2), &z).unwrap();
        assert!(v.norm() < 1e-15);
    }

    #[test]
    fn hs_inner_is_conjugate_symmetric() {
        let a = cm(&[(1.0, 2.0), (0.5, -1.0), (0.0, 3.0), (2.0, 0.0)], 2);
        let b = cm(&[(0.3, -0.7), (1.5, 0.2), (-1.0, 1.0), (0.0, -2.0)], 2);
        let ab = hs_inner(&a, &b).unwrap();
        let ba = hs_inner(&b, &a).unwrap();
        assert!((ab - ba.conj()).norm() < 1e-14);
    }

    #[test]
    fn hs_inner_rejects_shape_mismatch() {
        let err = hs_inner(&ident(2), &ident(3)).unwrap_err();
        assert!(matches!(err, Error::ShapeMismatch { .. }));
    }

    #[test]
    fn gram_rank_counts_proportional_family_once() {
        let tol = ToleranceConfig::default();
        assert_eq!(gram_rank(&[ident(4)], &tol).unwrap(), 1);
        let two_i = ident(2) * Complex64::new(2.0, 0.0);
        assert_eq!(gram_rank(&[ident(2), two_i], &tol).unwrap(), 1);
        assert_eq!(gram_rank(&[], &tol).unwrap(), 0);
    }

    #[test]
    fn gram_rank_of_zero_family_is_zero() {
        let tol = ToleranceConfig::default();
        let z = CMatrix::zeros(3, 3);
        assert_eq!(gram_rank(&[z], &tol).unwrap(), 0);
    }

    #[test]
    fn span_basis_normalizes_rank_one_family() {
        let tol = ToleranceConfig::default();
        let two_i = ident(2) * Complex64::new(2.0, 0.0);
        let basis = orthonormal_span_basis(&[ident(2), two_i], &tol).unwrap();
        assert_eq!(basis.len(), 1);
        // the single element is I/sqrt(2) up to phase
        let expected = ident(2) * Complex64::new(1.0 / 2.0_f64.sqrt(), 0.0);
        let aligned = hs_inner(&basis[0], &expected).unwrap().norm();
        assert!((aligned - 1.0).abs() < 1e-12);
        assert!((basis[0].norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn span_basis_of_empty_family_is_empty() {
        let tol = ToleranceConfig::default();
        assert!(orthonormal_span_basis(&[], &tol).unwrap().is_empty());
    }

    #[test]
    fn subspace_distance_zero_on_identical_lines() {
        let tol = ToleranceConfig::default();
        let b = vec![ident(3) * Complex64::new(1.0 / 3.0_f64.sqrt(), 0.0)];
        let dist = subspace_distance(&b, &b, &tol).unwrap();
        assert!(dist < 1e-12);
    }

    #[test]
    fn subspace_distance_of_orthogonal_lines_is_sqrt_two() {
        let tol = ToleranceConfig::default();
        let s = Complex64::new(1.0 / 2.0_f64.sqrt(), 0.0);
        let a = vec![ident(2) * s];
        let z = cm(&[(1.0, 0.0), (0.0, 0.0), (0.0, 0.0), (-1.0, 0.0)], 2) * s;
        let dist = subspace_distance(&a, &[z], &tol).unwrap();
        assert!((dist - 2.0_f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn batched_distances_match_pairwise_calls() {
        let tol = ToleranceConfig::default();
        // three deterministic pseudo-random families over 3x3 operators
        let mut state = 1234567u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        let families: Vec<Vec<CMatrix>> = (0..3)
            .map(|k| {
                let ops: Vec<CMatrix> = (0..k + 1)
                    .map(|_| CMatrix::from_fn(3, 3, |_, _| Complex64::new(next(), next())))
                    .collect();
                orthonormal_span_basis(&ops, &tol).unwrap()
            })
            .collect();
        let refs: Vec<&[CMatrix]> = families.iter().map(|f| f.as_slice()).collect();
        let batched = pairwise_subspace_distances(&refs, &tol).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let direct = subspace_distance(&families[i], &families[j], &tol).unwrap();
                assert!(
                    (batched[i][j] - direct).abs() < 1e-9,
                    "({i},{j}): batched {} vs direct {}",
                    batched[i][j],
                    direct
                );
            }
        }
    }

    #[test]
    fn batched_distances_reject_bad_families() {
        let tol = ToleranceConfig::default();
        let line = vec![ident(2) * Complex64::new(1.0 / 2.0_f64.sqrt(), 0.0)];
        assert!(matches!(
            pairwise_subspace_distances(&[&line, &[]], &tol),
            Err(Error::EmptyGenerators)
        ));
        let skew = vec![ident(2)];
        assert!(matches!(
            pairwise_subspace_distances(&[&line, &skew], &tol),
            Err(Error::NotOrthonormal { .. })
        ));
    }

    #[test]
    fn subspace_distance_rejects_non_orthonormal_input() {
        let tol = ToleranceConfig::default();
        let err = subspace_distance(&[ident(2)], &[ident(2)], &tol).unwrap_err();
        assert!(matches!(err, Error::NotOrthonormal { .. }));
    }

    #[test]
    fn is_unitary_on_simple_cases() {
        let tol = ToleranceConfig::default();
        assert!(is_unitary(&ident(5), &tol));
        let stretched = cm(&[(1.0, 0.0), (0.0, 0.0), (0.0, 0.0), (2.0, 0.0)], 2);
        assert!(!is_unitary(&stretched, &tol));
    }

    #[test]
    fn conjugate_simple_cases() {
        let a = cm(&[(1.0, 0.0), (2.0, 1.0), (0.0, -1.0), (3.0, 0.0)], 2);
        let by_identity = conjugate(&ident(2), &a).unwrap();
        assert!((by_identity - &a).norm() < 1e-15);
        // conjugating the identity by any unitary returns the identity
        let phase = cm(&[(0.0, 1.0), (0.0, 0.0), (0.0, 0.0), (0.0, -1.0)], 2);
        let back = conjugate(&phase, &ident(2)).unwrap();
        assert!((back - ident(2)).norm() < 1e-15);
    }

    #[test]
    fn tolerance_bounds_are_enforced() {
        assert!(ToleranceConfig::new(1e-9, 1e-10).is_ok());
        assert!(ToleranceConfig::new(0.0, 1e-10).is_err());
        assert!(ToleranceConfig::new(1e-9, 1e-2).is_err());
        assert!(ToleranceConfig::new(-1e-9, 1e-10).is_err());
        assert!(ToleranceConfig::new(f64::NAN, 1e-10).is_err());
    }

    #[test]
    fn check_finite_flags_nan() {
        let mut m = ident(2);
        m[(0, 1)] = Complex64::new(f64::NAN, 0.0);
        assert!(matches!(check_finite(&m), Err(Error::NonFinite { .. })));
    }
}
