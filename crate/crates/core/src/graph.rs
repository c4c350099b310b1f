//! Operator graphs and their structural checkers.
//!
//! An operator graph here is a finite generator family on a Hilbert space of
//! recorded dimension together with an HS-orthonormal basis of its span. The
//! checkers certify, up to the configured residual threshold: the graph axioms
//! (identity membership and adjoint closure of the span), resolution-of-identity
//! partitions, invariance of the span under a supplied set of unitaries, and
//! the Knill–Laflamme anticlique condition P V P = C·P.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{
    check_finite, conjugate, gram_matrix, hs_norm, is_unitary, matmul, orthonormal_span_basis,
    projector_residual, span_residual, CMatrix, ToleranceConfig,
};

/// A generator family with its orthonormalized span basis.
///
/// Axioms are verified, never enforced: construction performs no silent
/// augmentation with the identity or adjoints, so a defective generator set
/// shows up in [`check_graph_axioms`] instead of being masked.
#[derive(Debug, Clone)]
pub struct OperatorGraph {
    space_dim: usize,
    generators: Vec<CMatrix>,
    span_basis: Vec<CMatrix>,
    dim: usize,
}

impl OperatorGraph {
    /// Dimension of the underlying Hilbert space.
    pub fn space_dim(&self) -> usize {
        self.space_dim
    }

    /// The generator family, as supplied.
    pub fn generators(&self) -> &[CMatrix] {
        &self.generators
    }

    /// HS-orthonormal basis of span(generators).
    pub fn span_basis(&self) -> &[CMatrix] {
        &self.span_basis
    }

    /// Numerical dimension of the span.
    pub fn dim(&self) -> usize {
        self.dim
    }
}

/// Builds a graph from a nonempty family of `space_dim` x `space_dim`
/// generators.
pub fn build_graph(
    space_dim: usize,
    generators: Vec<CMatrix>,
    tol: &ToleranceConfig,
) -> Result<OperatorGraph> {
    if generators.is_empty() {
        return Err(Error::EmptyGenerators);
    }
    for g in &generators {
        if g.nrows() != space_dim || g.ncols() != space_dim {
            return Err(Error::ShapeMismatch {
                left_rows: space_dim,
                left_cols: space_dim,
                right_rows: g.nrows(),
                right_cols: g.ncols(),
            });
        }
        check_finite(g)?;
    }
    let span_basis = orthonormal_span_basis(&generators, tol)?;
    let dim = span_basis.len();
    Ok(OperatorGraph {
        space_dim,
        generators,
        span_basis,
        dim,
    })
}

/// Largest residual among the graph-axiom membership checks: the identity
/// against the span, and every basis element's adjoint against the span.
pub fn graph_axioms_residual(g: &OperatorGraph) -> Result<f64> {
    let id = CMatrix::identity(g.space_dim, g.space_dim);
    let mut worst = span_residual(&id, &g.span_basis)?;
    for b in &g.span_basis {
        worst = worst.max(span_residual(&b.adjoint(), &g.span_basis)?);
    }
    Ok(worst)
}

/// True iff the identity lies in the span and the span is adjoint-closed,
/// both within `residual_abs_eps`.
pub fn check_graph_axioms(g: &OperatorGraph, tol: &ToleranceConfig) -> bool {
    graph_axioms_residual(g)
        .map(|r| r <= tol.residual_abs_eps)
        .unwrap_or(false)
}

/// Largest violation among: each element being an orthogonal projector, and
/// the family summing to the identity.
pub fn identity_partition_residual(projectors: &[CMatrix]) -> Result<f64> {
    let first = projectors.first().ok_or(Error::EmptyGenerators)?;
    let n = first.nrows();
    let mut worst = 0.0_f64;
    let mut sum = CMatrix::zeros(n, n);
    for p in projectors {
        worst = worst.max(projector_residual(p)?);
        sum += p;
    }
    worst = worst.max((sum - CMatrix::identity(n, n)).norm());
    Ok(worst)
}

/// True iff every element is an orthogonal projector and the family sums to
/// the identity, within `residual_abs_eps`.
pub fn check_identity_partition(projectors: &[CMatrix], tol: &ToleranceConfig) -> bool {
    identity_partition_residual(projectors)
        .map(|r| r <= tol.residual_abs_eps)
        .unwrap_or(false)
}

/// Largest residual of u B u† against the span, over the supplied unitaries u
/// and span-basis elements B. A value within `residual_abs_eps` certifies the
/// span invariant under the sampled action.
pub fn check_covariance(
    g: &OperatorGraph,
    group_unitaries: &[CMatrix],
    tol: &ToleranceConfig,
) -> Result<f64> {
    for u in group_unitaries {
        if !is_unitary(u, tol) {
            return Err(Error::NotUnitary {
                residual: crate::numerics::unitary_residual(u),
            });
        }
    }
    let mut worst = 0.0_f64;
    for u in group_unitaries {
        for b in &g.span_basis {
            let moved = conjugate(u, b)?;
            worst = worst.max(span_residual(&moved, &g.span_basis)?);
        }
    }
    Ok(worst)
}

/// Outcome of a Knill–Laflamme compression check for one projector.
#[derive(Debug, Clone, Serialize)]
pub struct AnticliqueReport {
    pub projector_label: String,
    /// Compression scalar of the first generator.
    pub scalar: Complex64,
    pub max_residual: f64,
    pub passed: bool,
}

/// Per-generator compression scalars λ_A = tr(pAp)/tr(p) and residuals
/// ‖pAp − λ_A p‖_F.
///
/// λ is the unique candidate: taking the trace of pAp = λp forces it, so the
/// residual is a one-sided certificate rather than a fit.
pub fn anticlique_details(
    p: &CMatrix,
    g: &OperatorGraph,
    tol: &ToleranceConfig,
) -> Result<Vec<(Complex64, f64)>> {
    let residual = projector_residual(p)?;
    if residual > tol.residual_abs_eps {
        return Err(Error::NotProjector { residual });
    }
    let tr = p.trace();
    if tr.norm() <= tol.residual_abs_eps {
        return Err(Error::DegenerateProjector);
    }
    let mut details = Vec::with_capacity(g.generators.len());
    for a in &g.generators {
        let pap = matmul(&matmul(p, a), p);
        let lambda = pap.trace() / tr;
        let residual = hs_norm(&(&pap - p * lambda));
        details.push((lambda, residual));
    }
    Ok(details)
}

/// Checks the anticlique condition p · span(g) · p = C·p generator by
/// generator.
pub fn check_anticlique(
    label: &str,
    p: &CMatrix,
    g: &OperatorGraph,
    tol: &ToleranceConfig,
) -> Result<AnticliqueReport> {
    let details = anticlique_details(p, g, tol)?;
    let scalar = details.first().map(|d| d.0).unwrap_or_default();
    let max_residual = details.iter().map(|d| d.1).fold(0.0, f64::max);
    Ok(AnticliqueReport {
        projector_label: label.to_string(),
        scalar,
        max_residual,
        passed: max_residual <= tol.residual_abs_eps,
    })
}

/// Frobenius deviation of Gram(basis) from the identity; diagnostic companion
/// to [`OperatorGraph::span_basis`].
pub fn basis_gram_deviation(g: &OperatorGraph) -> Result<f64> {
    let gram = gram_matrix(&g.span_basis)?;
    let n = g.dim;
    Ok((gram - CMatrix::identity(n, n)).norm())
}
