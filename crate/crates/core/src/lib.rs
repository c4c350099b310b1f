//! Construction and numerical verification of non-commutative operator graphs
//! on C^d ⊗ C^d.
//!
//! Two families are built and checked end to end:
//!
//! * circle module: orbit graphs of the circle-group representation
//!   U_φ = Σ_s e^{iφ(s+1)} P_s acting on seed projections over the generalized
//!   Bell basis, together with the Bell-shift unitaries that generate the same
//!   span;
//! * heisenberg_weyl module: the graph spanned by the symmetric block shifts
//!   attached to the shift/clock pair lifted to the doubled space.
//!
//! The numerics module supplies the measurement instruments (Hilbert–Schmidt
//! inner product, Gram rank, orthonormal span bases, subspace distance) and
//! the graph module the structural checkers (graph axioms, resolutions of
//! identity, covariance, Knill–Laflamme anticliques). The report module turns
//! verification sweeps into deterministic JSON and text summaries for the CLI.

pub mod circle;
pub mod error;
pub mod graph;
pub mod heisenberg_weyl;
pub mod numerics;
pub mod report;

pub use error::{Error, Result};
pub use graph::{build_graph, AnticliqueReport, OperatorGraph};
pub use numerics::{CMatrix, CVector, ToleranceConfig};

/// Smallest supported local dimension.
pub const MIN_DIM: usize = 2;

/// Largest supported local dimension; operators are then 1024x1024.
pub const MAX_DIM: usize = 32;

pub(crate) fn check_dim(d: usize) -> Result<()> {
    if !(MIN_DIM..=MAX_DIM).contains(&d) {
        return Err(Error::DimensionOutOfRange {
            d,
            min: MIN_DIM,
            max: MAX_DIM,
        });
    }
    Ok(())
}
