//! The circle-group family on H = C^d ⊗ C^d.
//!
//! Ingredients, all in the product-basis ordering |a b⟩ ↦ a·d + b:
//!
//! * generalized Bell states ψ_{sn} = (1/√d) Σ_k e^{2πisk/d} |k, k−n mod d⟩,
//!   an orthonormal basis indexed by a phase label s and a shift label n;
//! * family projectors P_s onto H_s = span{ψ_{sn} : n};
//! * the representation φ ↦ U_φ = Σ_s e^{iφ(s+1)} P_s of the circle;
//! * seed projectors Q_j = |j⟩⟨j| ⊗ I, whose U_φ-orbits generate the graphs;
//! * Bell-shift unitaries W_n mapping ψ_{l r} ↦ ψ_{l+n mod d, r}.
//!
//! Indices are 0-based everywhere; every formula is mod-d periodic in its
//! labels, so this is a pure relabeling of the 1-based convention.
//!
//! The d-point sampling φ_{kj} = 2π(k+j)/d turns each orbit into a finite
//! generating set whose span equals span{W_n}: at lattice angles the
//! conjugated seed expands exactly as
//! U_φ Q_j U_φ† = (1/d) Σ_n e^{i(φ−2πj/d)n} W_n. Off the lattice the phase
//! e^{iφ(s−l)} is not d-periodic in s−l, the wraparound terms decouple, and
//! the full orbit spans a strictly larger (2d−1)-dimensional space; the
//! covariance sampling therefore also draws from the lattice, the stabilizer
//! of the d-point span.

use num_complex::Complex64;
use serde::Serialize;

use crate::check_dim;
use crate::error::{Error, Result};
use crate::graph::{build_graph, OperatorGraph};
use crate::numerics::{add_scaled, matmul, CMatrix, CVector, ToleranceConfig};

const TAU: f64 = std::f64::consts::TAU;

fn check_index(index: usize, bound: usize) -> Result<()> {
    if index >= bound {
        return Err(Error::IndexOutOfRange { index, bound });
    }
    Ok(())
}

/// Generalized Bell state ψ_{sn} = (1/√d) Σ_k e^{2πisk/d} |k, k−n mod d⟩.
pub fn bell_state(d: usize, s: usize, n: usize) -> Result<CVector> {
    check_dim(d)?;
    check_index(s, d)?;
    check_index(n, d)?;
    let norm = 1.0 / (d as f64).sqrt();
    let mut v = CVector::zeros(d * d);
    for k in 0..d {
        let phase = TAU * (s as f64) * (k as f64) / (d as f64);
        v[k * d + (k + d - n) % d] = Complex64::from_polar(norm, phase);
    }
    Ok(v)
}

/// All derived circle-family objects for a fixed local dimension.
#[derive(Debug, Clone)]
pub struct CircleInstance {
    d: usize,
    /// ψ_{sn} at index s·d + n.
    bell: Vec<CVector>,
    family_projectors: Vec<CMatrix>,
    seed_projectors: Vec<CMatrix>,
    shift_unitaries: Vec<CMatrix>,
}

impl CircleInstance {
    pub fn new(d: usize) -> Result<Self> {
        check_dim(d)?;
        let dd = d * d;
        let mut bell = Vec::with_capacity(dd);
        for s in 0..d {
            for n in 0..d {
                bell.push(bell_state(d, s, n)?);
            }
        }
        let mut bell_mat = CMatrix::zeros(dd, dd);
        for (i, psi) in bell.iter().enumerate() {
            bell_mat.set_column(i, psi);
        }
        let bell_adj = bell_mat.adjoint();

        let mut family_projectors = Vec::with_capacity(d);
        for s in 0..d {
            let block = bell_mat.columns(s * d, d).into_owned();
            family_projectors.push(matmul(&block, &block.adjoint()));
        }
        let one = Complex64::new(1.0, 0.0);
        let mut seed_projectors = Vec::with_capacity(d);
        for j in 0..d {
            let mut q = CMatrix::zeros(dd, dd);
            for b in 0..d {
                q[(j * d + b, j * d + b)] = one;
            }
            seed_projectors.push(q);
        }
        // W_n = (Bell matrix with shifted phase labels) * (Bell matrix)^dagger
        let mut shift_unitaries = Vec::with_capacity(d);
        for n in 0..d {
            let mut shifted = CMatrix::zeros(dd, dd);
            for l in 0..d {
                for r in 0..d {
                    shifted.set_column(l * d + r, &bell[((l + n) % d) * d + r]);
                }
            }
            shift_unitaries.push(matmul(&shifted, &bell_adj));
        }
        Ok(Self {
            d,
            bell,
            family_projectors,
            seed_projectors,
            shift_unitaries,
        })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Dimension of H = C^d ⊗ C^d.
    pub fn space_dim(&self) -> usize {
        self.d * self.d
    }

    pub fn bell_state(&self, s: usize, n: usize) -> Result<&CVector> {
        check_index(s, self.d)?;
        check_index(n, self.d)?;
        Ok(&self.bell[s * self.d + n])
    }

    /// Projector P_s onto the s-th Bell family H_s; trace d.
    pub fn family_projector(&self, s: usize) -> Result<&CMatrix> {
        check_index(s, self.d)?;
        Ok(&self.family_projectors[s])
    }

    pub fn family_projectors(&self) -> &[CMatrix] {
        &self.family_projectors
    }

    /// Seed projector Q_j = |j⟩⟨j| ⊗ I; trace d.
    pub fn seed_projector(&self, j: usize) -> Result<&CMatrix> {
        check_index(j, self.d)?;
        Ok(&self.seed_projectors[j])
    }

    pub fn seed_projectors(&self) -> &[CMatrix] {
        &self.seed_projectors
    }

    /// Bell-shift unitary W_n: ψ_{l r} ↦ ψ_{l+n mod d, r}. W_0 = I.
    pub fn shift_unitary(&self, n: usize) -> Result<&CMatrix> {
        check_index(n, self.d)?;
        Ok(&self.shift_unitaries[n])
    }

    pub fn shift_unitaries(&self) -> &[CMatrix] {
        &self.shift_unitaries
    }

    /// The representation U_φ = Σ_s e^{iφ(s+1)} P_s; 2π-periodic in φ.
    pub fn unitary(&self, phi: f64) -> CMatrix {
        let dd = self.space_dim();
        let mut u = CMatrix::zeros(dd, dd);
        for s in 0..self.d {
            let phase = Complex64::from_polar(1.0, phi * (s as f64 + 1.0));
            add_scaled(&mut u, phase, &self.family_projectors[s]);
        }
        u
    }

    /// The orbit sampling φ_{kj} = 2π(k+j)/d, k = 0..d−1, at which the
    /// conjugated seed expands exactly over the W_n.
    pub fn default_orbit_phis(&self, j: usize) -> Result<Vec<f64>> {
        check_index(j, self.d)?;
        Ok((0..self.d)
            .map(|k| TAU * (k + j) as f64 / self.d as f64)
            .collect())
    }

    /// One orbit generator U_φ Q_j U_φ†.
    ///
    /// Q_j has rank d with range spanned by the product kets |j b⟩, so the
    /// conjugate is assembled from d outer products of U_φ's columns instead
    /// of two dense multiplications.
    pub fn orbit_generator(&self, j: usize, phi: f64) -> Result<CMatrix> {
        check_index(j, self.d)?;
        let u = self.unitary(phi);
        let cols = u.columns(j * self.d, self.d).into_owned();
        Ok(matmul(&cols, &cols.adjoint()))
    }

    /// Graph generated by {U_φ Q_j U_φ† : φ ∈ phis}.
    pub fn orbit_graph(
        &self,
        j: usize,
        phis: &[f64],
        tol: &ToleranceConfig,
    ) -> Result<OperatorGraph> {
        if phis.is_empty() {
            return Err(Error::EmptySamples);
        }
        let generators = phis
            .iter()
            .map(|&phi| self.orbit_generator(j, phi))
            .collect::<Result<Vec<_>>>()?;
        build_graph(self.space_dim(), generators, tol)
    }

    /// Graph generated by the Bell shifts {W_n}.
    pub fn shift_graph(&self, tol: &ToleranceConfig) -> Result<OperatorGraph> {
        build_graph(self.space_dim(), self.shift_unitaries.clone(), tol)
    }

    /// Recovers every W_m from the j-th orbit by the inverse DFT
    /// W_m = Σ_k e^{−2πikm/d} · U_{φ_{kj}} Q_j U_{φ_{kj}}†.
    pub fn shifts_from_orbit_dft(&self, j: usize) -> Result<Vec<CMatrix>> {
        let phis = self.default_orbit_phis(j)?;
        let orbit = phis
            .iter()
            .map(|&phi| self.orbit_generator(j, phi))
            .collect::<Result<Vec<_>>>()?;
        let dd = self.space_dim();
        let mut shifts = Vec::with_capacity(self.d);
        for m in 0..self.d {
            let mut w = CMatrix::zeros(dd, dd);
            for (k, a) in orbit.iter().enumerate() {
                let phase =
                    Complex64::from_polar(1.0, -TAU * (k as f64) * (m as f64) / self.d as f64);
                add_scaled(&mut w, phase, a);
            }
            shifts.push(w);
        }
        Ok(shifts)
    }

    /// Covariance sampling policy: `count` rotations drawn from the order-d
    /// lattice {2πk/d}, the subgroup that stabilizes the d-point orbit span.
    pub fn covariance_unitaries(&self, count: usize) -> Vec<CMatrix> {
        (0..count)
            .map(|k| self.unitary(TAU * k as f64 / self.d as f64))
            .collect()
    }
}

/// Outcome of the orbit-coincidence verification for one local dimension:
/// every default-sampled orbit graph V_j has span dimension d, all V_j
/// coincide pairwise and with the span of the Bell shifts, and the shifts are
/// recovered from any single orbit by inverse DFT.
#[derive(Debug, Clone, Serialize)]
pub struct CoincidenceReport {
    pub d: usize,
    /// Span dimension of each verified orbit graph.
    pub dims: Vec<usize>,
    /// Subspace distances between the verified orbit graphs.
    pub pairwise_distances: Vec<Vec<f64>>,
    /// Largest distance from an orbit graph to span{W_n}.
    pub shift_span_distance: f64,
    /// Largest ‖W_m(recovered) − W_m(direct)‖_F over the verified orbits.
    pub dft_residual: f64,
    pub passed: bool,
}

pub(crate) fn verify_coincidence_for(
    inst: &CircleInstance,
    js: &[usize],
    tol: &ToleranceConfig,
) -> Result<CoincidenceReport> {
    let d = inst.d();
    let mut graphs = Vec::with_capacity(js.len());
    for &j in js {
        let phis = inst.default_orbit_phis(j)?;
        graphs.push(inst.orbit_graph(j, &phis, tol)?);
    }
    let shift_graph = inst.shift_graph(tol)?;

    let dims: Vec<usize> = graphs.iter().map(|g| g.dim()).collect();
    let m = graphs.len();
    // one batched pass over all orbit spans plus span{W_n}
    let mut families: Vec<&[CMatrix]> = graphs.iter().map(|g| g.span_basis()).collect();
    families.push(shift_graph.span_basis());
    let all_distances = crate::numerics::pairwise_subspace_distances(&families, tol)?;
    let mut pairwise = vec![vec![0.0; m]; m];
    for a in 0..m {
        for b in 0..m {
            pairwise[a][b] = all_distances[a][b];
        }
    }
    let shift_span_distance = (0..m).fold(0.0_f64, |acc, a| acc.max(all_distances[a][m]));
    let mut dft_residual = 0.0_f64;
    for &j in js {
        let recovered = inst.shifts_from_orbit_dft(j)?;
        for (m, w) in recovered.iter().enumerate() {
            dft_residual = dft_residual.max((w - inst.shift_unitary(m)?).norm());
        }
    }
    let eps = tol.residual_abs_eps;
    let passed = dims.iter().all(|&x| x == d)
        && pairwise.iter().flatten().all(|&x| x <= eps)
        && shift_span_distance <= eps
        && dft_residual <= eps;
    Ok(CoincidenceReport {
        d,
        dims,
        pairwise_distances: pairwise,
        shift_span_distance,
        dft_residual,
        passed,
    })
}

/// Runs the full coincidence verification over every seed index j.
pub fn verify_circle_coincidence(d: usize, tol: &ToleranceConfig) -> Result<CoincidenceReport> {
    let inst = CircleInstance::new(d)?;
    let js: Vec<usize> = (0..d).collect();
    verify_coincidence_for(&inst, &js, tol)
}
