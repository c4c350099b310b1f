//! The Heisenberg–Weyl pair and its lifted action on H = C^d ⊗ C^d.
//!
//! On C^d the shift and clock unitaries S|j⟩ = |j+1 mod d⟩ and
//! M|j⟩ = e^{2πij/d}|j⟩ satisfy MS = e^{2πi/d} SM and generate the rank-d
//! Heisenberg–Weyl group. On the doubled space the entangled reference basis
//!
//!   h_k^j = (1/√d) Σ_m e^{2πikm/d} |m, m+j mod d⟩  (= (I ⊗ S^j) h_k^0)
//!
//! carries a lifted representation fixing each shifted subspace
//! H_j = span{h_k^j : k}: the lifted shift advances the Fourier label k, the
//! lifted clock multiplies by e^{2πik/d}.
//!
//! The graph is spanned by symmetric block shifts h_p built from the sums of
//! matrix units y_{ml} = Σ_k |h_k^m⟩⟨h_k^l| that map H_l onto H_m identically;
//! these commute with the lifted representation, so the span is invariant
//! under it. Since h_p = h_{d−p}, the distinct generators are h_0..h_{⌊d/2⌋}
//! and the span dimension is ⌊d/2⌋ + 1.

use num_complex::Complex64;
use serde::Serialize;

use crate::check_dim;
use crate::error::{Error, Result};
use crate::graph::{build_graph, OperatorGraph};
use crate::numerics::{gram_rank, matmul, CMatrix, CVector, ToleranceConfig, C_ONE};

const TAU: f64 = std::f64::consts::TAU;

fn check_index(index: usize, bound: usize) -> Result<()> {
    if index >= bound {
        return Err(Error::IndexOutOfRange { index, bound });
    }
    Ok(())
}

/// The defining shift/clock pair (S, M) on C^d; both unitary of order d.
pub fn shift_clock(d: usize) -> Result<(CMatrix, CMatrix)> {
    check_dim(d)?;
    let mut shift = CMatrix::zeros(d, d);
    let mut clock = CMatrix::zeros(d, d);
    for j in 0..d {
        shift[((j + 1) % d, j)] = C_ONE;
        clock[(j, j)] = Complex64::from_polar(1.0, TAU * j as f64 / d as f64);
    }
    Ok((shift, clock))
}

/// Closed-form span dimension of the Heisenberg–Weyl graph: ⌊d/2⌋ + 1
/// (equivalently (d−1)/2 + 1 for odd d, d/2 + 1 for even d).
pub fn dimension_formula(d: usize) -> usize {
    d / 2 + 1
}

/// All derived Heisenberg–Weyl objects for a fixed local dimension.
///
/// Block matrix units are assembled on demand; a d×d array of dense
/// d²×d² matrices would dwarf everything else held here.
#[derive(Debug, Clone)]
pub struct HwInstance {
    d: usize,
    shift: CMatrix,
    clock: CMatrix,
    /// h_k^j at index k·d + j.
    h_vectors: Vec<CVector>,
    rep_shift: CMatrix,
    rep_clock: CMatrix,
    generators: Vec<CMatrix>,
}

impl HwInstance {
    pub fn new(d: usize) -> Result<Self> {
        check_dim(d)?;
        let (shift, clock) = shift_clock(d)?;
        let dd = d * d;
        let norm = 1.0 / (d as f64).sqrt();
        let mut h_vectors = Vec::with_capacity(dd);
        for k in 0..d {
            for j in 0..d {
                let mut v = CVector::zeros(dd);
                for m in 0..d {
                    let phase = TAU * (k as f64) * (m as f64) / d as f64;
                    v[m * d + (m + j) % d] = Complex64::from_polar(norm, phase);
                }
                h_vectors.push(v);
            }
        }
        let mut h_mat = CMatrix::zeros(dd, dd);
        for (i, h) in h_vectors.iter().enumerate() {
            h_mat.set_column(i, h);
        }
        let h_adj = h_mat.adjoint();

        // lifted shift advances the Fourier label, lifted clock phases by it
        let mut shifted = CMatrix::zeros(dd, dd);
        let mut phased = h_mat.clone();
        for k in 0..d {
            let phase = Complex64::from_polar(1.0, TAU * k as f64 / d as f64);
            for j in 0..d {
                shifted.set_column(k * d + j, &h_vectors[((k + 1) % d) * d + j]);
                phased.column_mut(k * d + j).apply(|z| *z *= phase);
            }
        }
        let rep_shift = matmul(&shifted, &h_adj);
        let rep_clock = matmul(&phased, &h_adj);

        // h_p = X_p + X_p^dagger with X_p = sum_m y_{m+p mod d, m} the
        // one-sided block shift
        let mut generators = Vec::with_capacity(d);
        generators.push(CMatrix::identity(dd, dd));
        for p in 1..d {
            let mut perm = CMatrix::zeros(dd, dd);
            for k in 0..d {
                for j in 0..d {
                    perm.set_column(k * d + j, &h_vectors[k * d + (j + p) % d]);
                }
            }
            let x = matmul(&perm, &h_adj);
            generators.push(&x + x.adjoint());
        }

        Ok(Self {
            d,
            shift,
            clock,
            h_vectors,
            rep_shift,
            rep_clock,
            generators,
        })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Dimension of H = C^d ⊗ C^d.
    pub fn space_dim(&self) -> usize {
        self.d * self.d
    }

    pub fn shift(&self) -> &CMatrix {
        &self.shift
    }

    pub fn clock(&self) -> &CMatrix {
        &self.clock
    }

    /// Entangled reference vector h_k^j.
    pub fn entangled_vector(&self, k: usize, j: usize) -> Result<&CVector> {
        check_index(k, self.d)?;
        check_index(j, self.d)?;
        Ok(&self.h_vectors[k * self.d + j])
    }

    /// Lifted shift: h_k^j ↦ h_{k+1 mod d}^j.
    pub fn rep_shift(&self) -> &CMatrix {
        &self.rep_shift
    }

    /// Lifted clock: h_k^j ↦ e^{2πik/d} h_k^j.
    pub fn rep_clock(&self) -> &CMatrix {
        &self.rep_clock
    }

    /// Sum of matrix units y_{ml} = Σ_k |h_k^m⟩⟨h_k^l| carrying the shifted
    /// subspace H_l onto H_m; satisfies y_{ml} y_{l'm'} = δ_{ll'} y_{mm'} and
    /// y_{ml}† = y_{lm}.
    pub fn block_unit(&self, m: usize, l: usize) -> Result<CMatrix> {
        check_index(m, self.d)?;
        check_index(l, self.d)?;
        let dd = self.space_dim();
        let mut y = CMatrix::zeros(dd, dd);
        for k in 0..self.d {
            y.gerc(
                C_ONE,
                &self.h_vectors[k * self.d + m],
                &self.h_vectors[k * self.d + l],
                C_ONE,
            );
        }
        Ok(y)
    }

    /// Graph generator h_p: the identity for p = 0, otherwise the Hermitian
    /// sum Σ_m y_{m+p mod d, m} + y_{m, m+p mod d}. Satisfies h_p = h_{d−p}.
    pub fn generator(&self, p: usize) -> Result<&CMatrix> {
        check_index(p, self.d)?;
        Ok(&self.generators[p])
    }

    /// The full family {h_p : 0 ≤ p ≤ d−1}.
    pub fn generators(&self) -> &[CMatrix] {
        &self.generators
    }

    /// Graph spanned by {h_p}.
    pub fn graph(&self, tol: &ToleranceConfig) -> Result<OperatorGraph> {
        build_graph(self.space_dim(), self.generators.clone(), tol)
    }
}

/// Graph spanned by the Heisenberg–Weyl generators for local dimension d.
pub fn hw_graph(d: usize, tol: &ToleranceConfig) -> Result<OperatorGraph> {
    HwInstance::new(d)?.graph(tol)
}

/// Outcome of the span-dimension verification: the numerical Gram rank of
/// {h_p} against the closed form ⌊d/2⌋+1, the coinciding generator pairs,
/// and the shortest prefix h_0..h_m already spanning the whole graph.
#[derive(Debug, Clone, Serialize)]
pub struct DimensionReport {
    pub d: usize,
    pub computed_dim: usize,
    pub formula_dim: usize,
    /// Length of the shortest spanning prefix of the generator list.
    pub minimal_generator_count: usize,
    /// Exactly-coinciding generator pairs (p, p'), p < p'.
    pub equal_pairs: Vec<(usize, usize)>,
    pub passed: bool,
}

/// Verifies the dimension formula and the h_p = h_{d−p} pairing for one
/// local dimension.
pub fn verify_hw_dimension(d: usize, tol: &ToleranceConfig) -> Result<DimensionReport> {
    let inst = HwInstance::new(d)?;
    let gens = inst.generators();
    let computed_dim = gram_rank(gens, tol)?;
    let formula_dim = dimension_formula(d);

    let mut equal_pairs = Vec::new();
    for p in 0..d {
        for q in (p + 1)..d {
            if (&gens[p] - &gens[q]).norm() <= tol.residual_abs_eps {
                equal_pairs.push((p, q));
            }
        }
    }
    let expected_pairs: Vec<(usize, usize)> =
        (1..d).filter(|&p| p < d - p).map(|p| (p, d - p)).collect();

    let mut minimal_generator_count = gens.len();
    for count in 1..=gens.len() {
        if gram_rank(&gens[..count], tol)? == computed_dim {
            minimal_generator_count = count;
            break;
        }
    }

    let passed = computed_dim == formula_dim && equal_pairs == expected_pairs;
    Ok(DimensionReport {
        d,
        computed_dim,
        formula_dim,
        minimal_generator_count,
        equal_pairs,
        passed,
    })
}
