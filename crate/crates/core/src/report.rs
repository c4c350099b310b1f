//! Verification suites and their serialized reports.
//!
//! A report is a list of named checks (metric + pass flag) plus the family's
//! structural verification block. Serialization is deterministic: fixed field
//! order, no timestamps or wall-clock data in the JSON (wall time is carried
//! on the struct for the text summary only), floats in serde_json's shortest
//! round-trip encoding.

use std::fmt::Write as _;
use std::str::FromStr;
use std::time::Instant;

use serde::Serialize;

use crate::circle::{verify_coincidence_for, CircleInstance, CoincidenceReport};
use crate::error::{Error, Result};
use crate::graph::{
    anticlique_details, check_covariance, graph_axioms_residual, identity_partition_residual,
};
use crate::heisenberg_weyl::{verify_hw_dimension, DimensionReport, HwInstance};
use crate::numerics::{matmul, CMatrix, CVector, ToleranceConfig};

pub const SCHEMA_VERSION: &str = "1";

/// Rotations sampled when certifying circle covariance.
const COVARIANCE_SAMPLES: usize = 16;

/// One named verification check.
#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub metric: f64,
    pub detail: String,
}

fn check(name: &str, metric: f64, gate: f64, detail: &str) -> CheckResult {
    CheckResult {
        name: name.to_string(),
        passed: metric <= gate,
        metric,
        detail: detail.to_string(),
    }
}

/// Full verification outcome for one instance and local dimension.
#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub schema_version: String,
    pub instance: String,
    pub d: usize,
    pub tolerance: ToleranceConfig,
    pub checks: Vec<CheckResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coincidence: Option<CoincidenceReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dimension: Option<DimensionReport>,
    /// Text-summary diagnostic only; deliberately absent from the JSON so
    /// identical invocations serialize byte-identically.
    #[serde(skip)]
    pub wall_time_ms: u64,
}

impl VerificationReport {
    pub fn overall_pass(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
            && self.coincidence.as_ref().is_none_or(|c| c.passed)
            && self.dimension.as_ref().is_none_or(|t| t.passed)
    }
}

fn circle_checks(
    inst: &CircleInstance,
    js: &[usize],
    tol: &ToleranceConfig,
) -> Result<Vec<CheckResult>> {
    let d = inst.d();
    let eps = tol.residual_abs_eps;
    let mut checks = Vec::new();

    let mut worst = 0.0_f64;
    for a in 0..d * d {
        for b in 0..d * d {
            let va = inst.bell_state(a / d, a % d)?;
            let vb = inst.bell_state(b / d, b % d)?;
            let want = if a == b { 1.0 } else { 0.0 };
            worst = worst.max((va.dotc(vb) - num_complex::Complex64::new(want, 0.0)).norm());
        }
    }
    checks.push(check(
        "bell_orthonormality",
        worst,
        eps,
        "max deviation of <psi_sn|psi_s'n'> from the identity pattern",
    ));

    checks.push(check(
        "family_projector_partition",
        identity_partition_residual(inst.family_projectors())?,
        eps,
        "P_s are orthogonal projectors summing to the identity",
    ));
    checks.push(check(
        "seed_projector_partition",
        identity_partition_residual(inst.seed_projectors())?,
        eps,
        "Q_j are orthogonal projectors summing to the identity",
    ));

    let pairs = [
        (0.0, 1.0),
        (0.3, 1.1),
        (0.77, 2.9),
        (1.618, 0.577),
        (3.9, 5.2),
        (2.0, 6.0),
    ];
    let mut worst = 0.0_f64;
    for (phi, psi) in pairs {
        let lhs = matmul(&inst.unitary(phi), &inst.unitary(psi));
        worst = worst.max((lhs - inst.unitary(phi + psi)).norm());
    }
    checks.push(check(
        "rotation_group_law",
        worst,
        eps,
        "U_phi U_psi = U_{phi+psi} on fixed angle pairs",
    ));

    let mut worst = 0.0_f64;
    if d <= 8 {
        for n in 0..d {
            for m in 0..d {
                let lhs = matmul(inst.shift_unitary(n)?, inst.shift_unitary(m)?);
                worst = worst.max((lhs - inst.shift_unitary((n + m) % d)?).norm());
            }
        }
    } else {
        // generator chain pins the cyclic law without the d^2 sweep
        for n in 0..d {
            let lhs = matmul(inst.shift_unitary(n)?, inst.shift_unitary(1)?);
            worst = worst.max((lhs - inst.shift_unitary((n + 1) % d)?).norm());
        }
    }
    checks.push(check(
        "shift_group_law",
        worst,
        eps,
        "W_n W_m = W_{n+m mod d} (exhaustive for d <= 8, chained above)",
    ));

    let mut worst = 0.0_f64;
    for n in [1, d - 1] {
        let w = inst.shift_unitary(n)?;
        for l in 0..d {
            for r in 0..d {
                let moved = w * inst.bell_state(l, r)?;
                worst = worst.max((moved - inst.bell_state((l + n) % d, r)?).norm());
            }
        }
    }
    checks.push(check(
        "shift_permutation_action",
        worst,
        eps,
        "W_n maps psi_{l,r} to psi_{l+n mod d, r}",
    ));

    let mut graphs = Vec::with_capacity(js.len());
    for &j in js {
        graphs.push(inst.orbit_graph(j, &inst.default_orbit_phis(j)?, tol)?);
    }
    let shifts = inst.shift_graph(tol)?;

    let mut worst = graph_axioms_residual(&shifts)?;
    for g in &graphs {
        worst = worst.max(graph_axioms_residual(g)?);
    }
    checks.push(check(
        "graph_axioms",
        worst,
        eps,
        "identity membership and adjoint closure of every constructed span",
    ));

    let rotations = inst.covariance_unitaries(COVARIANCE_SAMPLES);
    let mut worst = 0.0_f64;
    for g in &graphs {
        worst = worst.max(check_covariance(g, &rotations, tol)?);
    }
    checks.push(check(
        "covariance",
        worst,
        eps,
        "orbit spans invariant under 16 rotations sampled from the 2 pi k / d lattice",
    ));

    let expected = 1.0 / d as f64;
    let mut worst = 0.0_f64;
    for g in &graphs {
        for s in 0..d {
            for (lambda, residual) in anticlique_details(inst.family_projector(s)?, g, tol)? {
                let deviation = (lambda - num_complex::Complex64::new(expected, 0.0)).norm();
                worst = worst.max(residual).max(deviation);
            }
        }
    }
    checks.push(check(
        "anticliques",
        worst,
        eps,
        "P_s compresses every orbit generator to (1/d) P_s",
    ));

    Ok(checks)
}

fn hw_checks(inst: &HwInstance, tol: &ToleranceConfig) -> Result<Vec<CheckResult>> {
    let d = inst.d();
    let dd = inst.space_dim();
    let eps = tol.residual_abs_eps;
    let omega = num_complex::Complex64::from_polar(1.0, std::f64::consts::TAU / d as f64);
    let mut checks = Vec::new();

    let mut worst = 0.0_f64;
    for a in 0..dd {
        for b in 0..dd {
            let va = inst.entangled_vector(a / d, a % d)?;
            let vb = inst.entangled_vector(b / d, b % d)?;
            let want = if a == b { 1.0 } else { 0.0 };
            worst = worst.max((va.dotc(vb) - num_complex::Complex64::new(want, 0.0)).norm());
        }
    }
    checks.push(check(
        "h_orthonormality",
        worst,
        eps,
        "max deviation of <h_k^j|h_k'^j'> from the identity pattern",
    ));

    let matpow = |m: &CMatrix, k: usize| {
        let mut acc = CMatrix::identity(m.nrows(), m.nrows());
        for _ in 0..k {
            acc = matmul(&acc, m);
        }
        acc
    };

    let (s, m) = (inst.shift(), inst.clock());
    let id = CMatrix::identity(d, d);
    let worst = [
        (matpow(s, d) - &id).norm(),
        (matpow(m, d) - &id).norm(),
        (matmul(m, s) - matmul(s, m) * omega).norm(),
    ]
    .into_iter()
    .fold(0.0, f64::max);
    checks.push(check(
        "shift_clock_relations",
        worst,
        eps,
        "S^d = M^d = I and M S = e^{2 pi i / d} S M",
    ));

    let (ps, pm) = (inst.rep_shift(), inst.rep_clock());
    let mut worst = crate::numerics::unitary_residual(ps)
        .max(crate::numerics::unitary_residual(pm))
        .max((matmul(pm, ps) - matmul(ps, pm) * omega).norm());
    if d <= 16 {
        let idd = CMatrix::identity(dd, dd);
        worst = worst
            .max((matpow(ps, d) - &idd).norm())
            .max((matpow(pm, d) - &idd).norm());
    } else {
        // dense d-th powers are disproportionate here; certify the order on
        // the k = 0 slice of the basis instead
        for j in 0..d {
            let v = inst.entangled_vector(0, j)?;
            let mut moved: CVector = v.clone();
            for _ in 0..d {
                moved = ps * &moved;
            }
            worst = worst.max((&moved - v).norm());
            let mut phased: CVector = v.clone();
            for _ in 0..d {
                phased = pm * &phased;
            }
            worst = worst.max((&phased - v).norm());
        }
    }
    checks.push(check(
        "lifted_pair_relations",
        worst,
        eps,
        "lifted shift/clock are unitary, of order d, with the same commutation",
    ));

    let diag: Vec<CMatrix> = (0..d)
        .map(|i| inst.block_unit(i, i))
        .collect::<Result<Vec<_>>>()?;
    checks.push(check(
        "block_unit_partition",
        identity_partition_residual(&diag)?,
        eps,
        "diagonal block units are projectors summing to the identity",
    ));

    let mut worst = 0.0_f64;
    if d <= 5 {
        for mi in 0..d {
            for li in 0..d {
                let y_ml = inst.block_unit(mi, li)?;
                worst = worst.max((y_ml.adjoint() - inst.block_unit(li, mi)?).norm());
                for lp in 0..d {
                    for mp in 0..d {
                        let prod = matmul(&y_ml, &inst.block_unit(lp, mp)?);
                        let want = if li == lp {
                            inst.block_unit(mi, mp)?
                        } else {
                            CMatrix::zeros(dd, dd)
                        };
                        worst = worst.max((prod - want).norm());
                    }
                }
            }
        }
    } else {
        let probes = [(0usize, 1usize, 1usize, 2usize), (0, 1, 2, 1), (1, 0, 0, 0)];
        for (mi, li, lp, mp) in probes {
            let prod = matmul(&inst.block_unit(mi, li)?, &inst.block_unit(lp, mp)?);
            let want = if li == lp {
                inst.block_unit(mi, mp)?
            } else {
                CMatrix::zeros(dd, dd)
            };
            worst = worst.max((prod - want).norm());
        }
        worst = worst.max((inst.block_unit(0, 1)?.adjoint() - inst.block_unit(1, 0)?).norm());
    }
    checks.push(check(
        "block_unit_algebra",
        worst,
        eps,
        "y_ml y_l'm' = delta_ll' y_mm' and y_ml^dagger = y_lm (exhaustive for d <= 5)",
    ));

    let mut pairing = 0.0_f64;
    let mut separation = f64::INFINITY;
    for p in 0..d {
        for q in (p + 1)..d {
            let dist = (inst.generator(p)? - inst.generator(q)?).norm();
            if q == d - p {
                pairing = pairing.max(dist);
            } else {
                separation = separation.min(dist);
            }
        }
    }
    let mut pairing_check = check(
        "generator_pairing",
        pairing,
        eps,
        "h_p = h_{d-p}; all other generator pairs stay far apart",
    );
    pairing_check.passed = pairing_check.passed && separation > 1.0;
    checks.push(pairing_check);

    let graph = inst.graph(tol)?;
    checks.push(check(
        "graph_axioms",
        graph_axioms_residual(&graph)?,
        eps,
        "identity membership and adjoint closure of the generator span",
    ));

    let unitaries = [ps.clone(), pm.clone()];
    checks.push(check(
        "covariance",
        check_covariance(&graph, &unitaries, tol)?,
        eps,
        "generator span invariant under the lifted shift/clock conjugation",
    ));

    Ok(checks)
}

/// Runs the full circle suite (all seed indices, or only `j` when given).
pub fn run_circle(d: usize, j: Option<usize>, tol: &ToleranceConfig) -> Result<VerificationReport> {
    let start = Instant::now();
    let inst = CircleInstance::new(d)?;
    let js: Vec<usize> = match j {
        Some(j) => {
            if j >= d {
                return Err(Error::IndexOutOfRange { index: j, bound: d });
            }
            vec![j]
        }
        None => (0..d).collect(),
    };
    let checks = circle_checks(&inst, &js, tol)?;
    let coincidence = verify_coincidence_for(&inst, &js, tol)?;
    Ok(VerificationReport {
        schema_version: SCHEMA_VERSION.to_string(),
        instance: "circle".to_string(),
        d,
        tolerance: *tol,
        checks,
        coincidence: Some(coincidence),
        dimension: None,
        wall_time_ms: start.elapsed().as_millis() as u64,
    })
}

/// Runs the full Heisenberg–Weyl suite.
pub fn run_hw(d: usize, tol: &ToleranceConfig) -> Result<VerificationReport> {
    let start = Instant::now();
    let inst = HwInstance::new(d)?;
    let checks = hw_checks(&inst, tol)?;
    let dimension = verify_hw_dimension(d, tol)?;
    Ok(VerificationReport {
        schema_version: SCHEMA_VERSION.to_string(),
        instance: "hw".to_string(),
        d,
        tolerance: *tol,
        checks,
        coincidence: None,
        dimension: Some(dimension),
        wall_time_ms: start.elapsed().as_millis() as u64,
    })
}

/// Which suites a sweep runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepInstance {
    Circle,
    Hw,
    All,
}

impl FromStr for SweepInstance {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "circle" => Ok(Self::Circle),
            "hw" => Ok(Self::Hw),
            "all" => Ok(Self::All),
            other => Err(Error::UnknownInstance {
                name: other.to_string(),
            }),
        }
    }
}

/// Runs the chosen suites for every d in `d_min..=d_max`, ordered by
/// ascending d (circle before hw within one d).
pub fn run_sweep(
    instance: SweepInstance,
    d_min: usize,
    d_max: usize,
    tol: &ToleranceConfig,
) -> Result<Vec<VerificationReport>> {
    if d_min > d_max {
        return Err(Error::DimensionOutOfRange {
            d: d_min,
            min: crate::MIN_DIM,
            max: d_max,
        });
    }
    crate::check_dim(d_min)?;
    crate::check_dim(d_max)?;
    let mut reports = Vec::new();
    for d in d_min..=d_max {
        if matches!(instance, SweepInstance::Circle | SweepInstance::All) {
            reports.push(run_circle(d, None, tol)?);
        }
        if matches!(instance, SweepInstance::Hw | SweepInstance::All) {
            reports.push(run_hw(d, tol)?);
        }
    }
    Ok(reports)
}

/// Serializes one report as pretty JSON with a trailing newline.
pub fn report_to_json(report: &VerificationReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serialization cannot fail");
    s.push('\n');
    s
}

/// Serializes a sweep as a JSON array with a trailing newline.
pub fn reports_to_json(reports: &[VerificationReport]) -> String {
    let mut s = serde_json::to_string_pretty(reports).expect("report serialization cannot fail");
    s.push('\n');
    s
}

/// Fixed-width text summary of one report.
pub fn render_report(report: &VerificationReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "instance={} d={}  rank_rel_eps={:.1e} residual_abs_eps={:.1e}  wall_ms={}",
        report.instance,
        report.d,
        report.tolerance.rank_rel_eps,
        report.tolerance.residual_abs_eps,
        report.wall_time_ms
    );
    let _ = writeln!(out, "  {:<28} {:<6} {:<12} detail", "check", "status", "metric");
    for c in &report.checks {
        let _ = writeln!(
            out,
            "  {:<28} {:<6} {:<12.3e} {}",
            c.name,
            if c.passed { "pass" } else { "FAIL" },
            c.metric,
            c.detail
        );
    }
    if let Some(c) = &report.coincidence {
        let max_pairwise = c
            .pairwise_distances
            .iter()
            .flatten()
            .fold(0.0_f64, |a, &b| a.max(b));
        let _ = writeln!(
            out,
            "  coincidence: dims={:?} max_pairwise={:.3e} shift_span={:.3e} dft={:.3e} status={}",
            c.dims,
            max_pairwise,
            c.shift_span_distance,
            c.dft_residual,
            if c.passed { "pass" } else { "FAIL" }
        );
    }
    if let Some(t) = &report.dimension {
        let _ = writeln!(
            out,
            "  dimension: computed={} formula={} minimal_prefix={} equal_pairs={:?} status={}",
            t.computed_dim,
            t.formula_dim,
            t.minimal_generator_count,
            t.equal_pairs,
            if t.passed { "pass" } else { "FAIL" }
        );
    }
    let _ = writeln!(
        out,
        "  overall: {}",
        if report.overall_pass() { "PASS" } else { "FAIL" }
    );
    out
}

fn sweep_row(report: &VerificationReport) -> (usize, usize) {
    match (&report.coincidence, &report.dimension) {
        (Some(c), _) => (c.dims.first().copied().unwrap_or(0), report.d),
        (_, Some(t)) => (t.computed_dim, t.formula_dim),
        _ => (0, 0),
    }
}

/// Fixed-width sweep table: one row per report with span dimension against
/// the closed-form prediction.
pub fn render_sweep_table(reports: &[VerificationReport]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{:<10} {:>3} {:>5} {:>8}  status", "instance", "d", "dim", "formula");
    for r in reports {
        let (dim, formula) = sweep_row(r);
        let _ = writeln!(
            out,
            "{:<10} {:>3} {:>5} {:>8}  {}",
            r.instance,
            r.d,
            dim,
            formula,
            if r.overall_pass() { "pass" } else { "FAIL" }
        );
    }
    out
}

/// One dumped matrix in row-major [re, im] form.
#[derive(Debug, Clone, Serialize)]
pub struct MatrixDump {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<[f64; 2]>,
}

impl MatrixDump {
    fn from_matrix(m: &CMatrix) -> Self {
        let mut entries = Vec::with_capacity(m.nrows() * m.ncols());
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                let z = m[(i, j)];
                entries.push([z.re, z.im]);
            }
        }
        Self {
            rows: m.nrows(),
            cols: m.ncols(),
            entries,
        }
    }

    fn from_vector(v: &CVector) -> Self {
        let entries = v.iter().map(|z| [z.re, z.im]).collect();
        Self {
            rows: v.len(),
            cols: 1,
            entries,
        }
    }
}

/// A dump of one object family with an index manifest naming each matrix.
#[derive(Debug, Clone, Serialize)]
pub struct DumpFile {
    pub schema_version: String,
    pub instance: String,
    pub d: usize,
    pub object: String,
    pub index: Vec<String>,
    pub matrices: Vec<MatrixDump>,
}

/// Builds the requested matrix dump for `instance` in {"circle", "hw"}.
pub fn dump_object(instance: &str, d: usize, object: &str) -> Result<DumpFile> {
    let unknown = || Error::UnknownObject {
        name: object.to_string(),
        instance: instance.to_string(),
    };
    let (index, matrices): (Vec<String>, Vec<MatrixDump>) = match instance {
        "circle" => {
            let inst = CircleInstance::new(d)?;
            match object {
                "bell_states" => {
                    let mut index = Vec::new();
                    let mut mats = Vec::new();
                    for s in 0..d {
                        for n in 0..d {
                            index.push(format!("s={s},n={n}"));
                            mats.push(MatrixDump::from_vector(inst.bell_state(s, n)?));
                        }
                    }
                    (index, mats)
                }
                "p_projectors" => (
                    (0..d).map(|s| format!("s={s}")).collect(),
                    inst.family_projectors()
                        .iter()
                        .map(MatrixDump::from_matrix)
                        .collect(),
                ),
                "q_projectors" => (
                    (0..d).map(|j| format!("j={j}")).collect(),
                    inst.seed_projectors()
                        .iter()
                        .map(MatrixDump::from_matrix)
                        .collect(),
                ),
                "w_unitaries" => (
                    (0..d).map(|n| format!("n={n}")).collect(),
                    inst.shift_unitaries()
                        .iter()
                        .map(MatrixDump::from_matrix)
                        .collect(),
                ),
                _ => return Err(unknown()),
            }
        }
        "hw" => {
            let inst = HwInstance::new(d)?;
            match object {
                "h_vectors" => {
                    let mut index = Vec::new();
                    let mut mats = Vec::new();
                    for k in 0..d {
                        for j in 0..d {
                            index.push(format!("k={k},j={j}"));
                            mats.push(MatrixDump::from_vector(inst.entangled_vector(k, j)?));
                        }
                    }
                    (index, mats)
                }
                "y_units" => {
                    let mut index = Vec::new();
                    let mut mats = Vec::new();
                    for m in 0..d {
                        for l in 0..d {
                            index.push(format!("m={m},l={l}"));
                            mats.push(MatrixDump::from_matrix(&inst.block_unit(m, l)?));
                        }
                    }
                    (index, mats)
                }
                "h_generators" => (
                    (0..d).map(|p| format!("p={p}")).collect(),
                    inst.generators()
                        .iter()
                        .map(MatrixDump::from_matrix)
                        .collect(),
                ),
                "pi_generators" => (
                    vec!["shift".to_string(), "clock".to_string()],
                    vec![
                        MatrixDump::from_matrix(inst.rep_shift()),
                        MatrixDump::from_matrix(inst.rep_clock()),
                    ],
                ),
                _ => return Err(unknown()),
            }
        }
        other => {
            return Err(Error::UnknownInstance {
                name: other.to_string(),
            })
        }
    };
    Ok(DumpFile {
        schema_version: SCHEMA_VERSION.to_string(),
        instance: instance.to_string(),
        d,
        object: object.to_string(),
        index,
        matrices,
    })
}

/// Serializes a dump as pretty JSON with a trailing newline.
pub fn dump_to_json(dump: &DumpFile) -> String {
    let mut s = serde_json::to_string_pretty(dump).expect("dump serialization cannot fail");
    s.push('\n');
    s
}
