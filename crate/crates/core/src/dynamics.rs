//! Tensor-product and lab-frame Hamiltonians, propagation, and CPT
//! certificates.

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::frames::{build_w, general_even_frame, EntangledFrame};
use crate::linalg::{
    basis, identity, kron, matexp_unitary, matexp_unitary_with, orthogonal_deviation, vectorize,
    CMatrix, CVector, HermitianEigen, Tolerances,
};
use crate::pythagorean::{CouplingParams, LabCouplings};
use crate::su2::{spin_generators, y_matrix};

/// `2Δ J₃ + 2Ω J₁` in the `n`-dimensional representation; `Δσz + Ωσx` for `n = 2`.
pub fn build_h_single(n: usize, delta: f64, omega: f64) -> Result<CMatrix> {
    Ok(spin_generators(n)?.drive(delta, omega))
}

/// `h₁ ⊗ I + I ⊗ h₂`.
pub fn build_h_tp(n: usize, params: &CouplingParams) -> Result<CMatrix> {
    let h1 = build_h_single(n, params.delta1, params.omega1)?;
    let h2 = build_h_single(n, params.delta2, params.omega2)?;
    Ok(kron_sum(&h1, &h2))
}

fn kron_sum(h1: &CMatrix, h2: &CMatrix) -> CMatrix {
    kron(h1, &identity(h2.nrows())) + kron(&identity(h1.nrows()), h2)
}

/// `W H Wᵀ` for a real orthogonal `W` (equal to `W H W` when `W` is symmetric).
pub fn to_lab(h_tp: &CMatrix, w: &CMatrix) -> Result<CMatrix> {
    if w.shape() != h_tp.shape() {
        return Err(Error::DimensionMismatch {
            expected: format!("{}×{} frame", h_tp.nrows(), h_tp.ncols()),
            got: format!("{}×{}", w.nrows(), w.ncols()),
        });
    }
    let deviation = orthogonal_deviation(w);
    if deviation > 1e-10 {
        return Err(Error::NotOrthogonal { deviation });
    }
    let h = w * h_tp * w.transpose();
    Ok((&h + h.adjoint()).scale(0.5))
}

/// Lab-frame basis change: either a Σ-product frame or a completed even frame.
#[derive(Clone, Debug)]
pub enum LabFrame {
    Entangled(EntangledFrame),
    General(CMatrix),
}

impl LabFrame {
    /// The canonical frame for dimension `n`: the Σ-product frame when
    /// `n ∈ {2, 4, 8}`, otherwise the completed even frame.
    pub fn default_for(n: usize) -> Result<Self> {
        match n {
            2 => Ok(Self::Entangled(build_w(1)?)),
            4 => Ok(Self::Entangled(build_w(2)?)),
            8 => Ok(Self::Entangled(build_w(3)?)),
            _ => Ok(Self::General(general_even_frame(n)?)),
        }
    }

    pub fn matrix(&self) -> &CMatrix {
        match self {
            Self::Entangled(f) => &f.w,
            Self::General(m) => m,
        }
    }
}

/// `exp(-i h t)`.
pub fn propagator(h: &CMatrix, t: f64) -> Result<CMatrix> {
    matexp_unitary(h, t)
}

/// Factored tensor-product propagator `u₁ ⊗ u₂`.
#[derive(Clone, Debug)]
pub struct TpPropagator {
    pub u1: CMatrix,
    pub u2: CMatrix,
}

impl TpPropagator {
    pub fn new(n: usize, params: &CouplingParams, t: f64) -> Result<Self> {
        Self::with_tolerances(n, params, t, &Tolerances::default())
    }

    pub fn with_tolerances(n: usize, params: &CouplingParams, t: f64, tol: &Tolerances) -> Result<Self> {
        let h1 = build_h_single(n, params.delta1, params.omega1)?;
        let h2 = build_h_single(n, params.delta2, params.omega2)?;
        Ok(Self { u1: matexp_unitary_with(&h1, t, tol)?, u2: matexp_unitary_with(&h2, t, tol)? })
    }

    pub fn full(&self) -> CMatrix {
        kron(&self.u1, &self.u2)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum TimeUnit {
    Absolute,
    /// Times are multiples of the transfer time `tau`.
    Tau { tau: f64 },
}

#[derive(Clone, Debug, Serialize)]
pub struct SimulationResult {
    pub times: Vec<f64>,
    pub time_unit: TimeUnit,
    /// One row per time: `|⟨e_i|ψ(t)⟩|²` for every basis state.
    pub populations: Vec<Vec<f64>>,
    /// `|1⟩ … |d⟩`, 1-based.
    pub labels: Vec<String>,
}

impl SimulationResult {
    /// Re-expresses absolute times as multiples of `tau`.
    pub fn in_tau_units(mut self, tau: f64) -> Self {
        if self.time_unit == TimeUnit::Absolute {
            self.times.iter_mut().for_each(|t| *t /= tau);
            self.time_unit = TimeUnit::Tau { tau };
        }
        self
    }

    pub fn population(&self, time_index: usize, state: usize) -> f64 {
        self.populations[time_index][state]
    }

    /// Max over the grid of the population of `state` (0-based).
    pub fn max_population(&self, state: usize) -> f64 {
        self.populations.iter().map(|p| p[state]).fold(0.0, f64::max)
    }
}

/// Inclusive uniform grid of `steps` intervals on `[0, t_max]`.
pub fn uniform_grid(t_max: f64, steps: usize) -> Vec<f64> {
    if steps == 0 {
        return vec![0.0];
    }
    (0..=steps).map(|k| t_max * k as f64 / steps as f64).collect()
}

pub fn simulate(h: &CMatrix, psi0: &CVector, times: &[f64]) -> Result<SimulationResult> {
    if psi0.len() != h.nrows() {
        return Err(Error::DimensionMismatch {
            expected: format!("state of dimension {}", h.nrows()),
            got: format!("dimension {}", psi0.len()),
        });
    }
    let norm = psi0.norm();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::NotNormalized { norm });
    }
    let eig = HermitianEigen::new(h)?;
    let populations = times
        .iter()
        .map(|&t| eig.evolve(psi0, t).iter().map(|z| z.norm_sqr()).collect())
        .collect();
    Ok(SimulationResult {
        times: times.to_vec(),
        time_unit: TimeUnit::Absolute,
        populations,
        labels: (1..=h.nrows()).map(|i| format!("|{i}⟩")).collect(),
    })
}

#[derive(Clone, Debug)]
pub struct SystemSpec {
    pub n: usize,
    pub params: CouplingParams,
    pub frame: Option<LabFrame>,
}

impl SystemSpec {
    pub fn new(n: usize, params: CouplingParams) -> Self {
        Self { n, params, frame: None }
    }

    pub fn with_frame(mut self, frame: LabFrame) -> Self {
        self.frame = Some(frame);
        self
    }

    fn resolve_frame(&self) -> Result<LabFrame> {
        let frame = match &self.frame {
            Some(f) => f.clone(),
            None => LabFrame::default_for(self.n)?,
        };
        let dim = self.n * self.n;
        if frame.matrix().shape() != (dim, dim) {
            return Err(Error::DimensionMismatch {
                expected: format!("{dim}×{dim} frame"),
                got: format!("{}×{}", frame.matrix().nrows(), frame.matrix().ncols()),
            });
        }
        Ok(frame)
    }

    pub fn h_tp(&self) -> Result<CMatrix> {
        build_h_tp(self.n, &self.params)
    }

    pub fn h_lab(&self) -> Result<CMatrix> {
        to_lab(&self.h_tp()?, self.resolve_frame()?.matrix())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CptCertificate {
    pub n: usize,
    /// 1-based lab index `n² - n + 1`.
    pub target_index: usize,
    pub tau: f64,
    /// `|⟨e_target|U_Lab(τ)|e₁⟩|²`.
    pub fidelity: f64,
    /// `|⟨V(Y)/√n|U_TP(τ)|V(I)/√n⟩|²`.
    pub tp_overlap: f64,
    /// Phase of the transfer amplitude; not part of the pass criterion.
    pub phase: f64,
    pub pass: bool,
}

pub fn verify_cpt(spec: &SystemSpec) -> Result<CptCertificate> {
    verify_cpt_with(spec, &Tolerances::default())
}

pub fn verify_cpt_with(spec: &SystemSpec, tol: &Tolerances) -> Result<CptCertificate> {
    let n = spec.n;
    if n % 2 == 1 {
        let y = y_matrix(&spin_generators(n)?);
        return Err(Error::OddDimension { n, trace: y.trace().re });
    }
    let frame = spec.resolve_frame()?;
    let g = frame.matrix();
    let tau = spec.params.tau;
    let u_tp = TpPropagator::with_tolerances(n, &spec.params, tau, tol)?.full();

    let target = n * n - n;
    // Column 0 of G U Gᵀ, row `target`: (row target of G)·U·(row 0 of G)ᵀ.
    let amplitude = (g.row(target) * &u_tp * g.row(0).transpose())[(0, 0)];
    let fidelity = amplitude.norm_sqr();

    let scale = 1.0 / (n as f64).sqrt();
    let v_i = vectorize(&identity(n)).scale(scale);
    let v_y = vectorize(&y_matrix(&spin_generators(n)?)).scale(scale);
    let tp_overlap = v_y.dotc(&(&u_tp * &v_i)).norm_sqr();

    Ok(CptCertificate {
        n,
        target_index: target + 1,
        tau,
        fidelity,
        tp_overlap,
        phase: amplitude.arg(),
        pass: (1.0 - fidelity).abs() <= tol.cpt,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ForbiddenReport {
    pub max_e2: f64,
    pub max_e4: f64,
    pub points: usize,
    pub t_max: f64,
    /// Both maxima strictly below `1 - 1e-6`.
    pub pass: bool,
}

/// Largest populations of `e₂` and `e₄` reached from `e₁` in the four-level
/// lab frame, over the given time grid.
pub fn forbidden_scan(params: &CouplingParams, times: &[f64]) -> Result<ForbiddenReport> {
    let h = SystemSpec::new(2, *params).h_lab()?;
    let sim = simulate(&h, &basis(4, 0), times)?;
    let (max_e2, max_e4) = (sim.max_population(1), sim.max_population(3));
    Ok(ForbiddenReport {
        max_e2,
        max_e4,
        points: times.len(),
        t_max: times.iter().copied().fold(0.0, f64::max),
        pass: max_e2 < 1.0 - 1e-6 && max_e4 < 1.0 - 1e-6,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Edge {
    /// 0-based endpoints, `i < j`.
    pub i: usize,
    pub j: usize,
    pub weight: f64,
    pub weight_im: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CouplingGraph {
    pub nodes: usize,
    pub edges: Vec<Edge>,
    pub diagonal: Vec<f64>,
}

/// Undirected coupling graph: an edge wherever `|h[i,j]| > rel_tol · max|h|`.
pub fn coupling_graph(h_lab: &CMatrix, rel_tol: f64) -> CouplingGraph {
    let threshold = rel_tol * h_lab.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let nodes = h_lab.nrows();
    let mut edges = Vec::new();
    for i in 0..nodes {
        for j in i + 1..nodes {
            let z = h_lab[(i, j)];
            if z.norm() > threshold {
                edges.push(Edge { i, j, weight: z.re, weight_im: z.im });
            }
        }
    }
    let diagonal = (0..nodes)
        .map(|i| {
            let d = h_lab[(i, i)].re;
            if d.abs() > threshold {
                d
            } else {
                0.0
            }
        })
        .collect();
    CouplingGraph { nodes, edges, diagonal }
}

pub const DEFAULT_ZERO_TOL: f64 = 1e-10;

/// Lab Hamiltonian as `V₁₂ B₁₂ + V₂₃ B₂₃ + V₃₄ B₃₄ + V₁₄ B₁₄`; returns the four
/// coefficient matrices in that order.
pub fn lab_coefficients(n: usize, frame: &CMatrix) -> Result<[CMatrix; 4]> {
    let unit = |v12, v23, v34, v14| -> Result<CMatrix> {
        let params = LabCouplings { v12, v23, v34, v14 }.to_params(1.0);
        to_lab(&build_h_tp(n, &params)?, frame)
    };
    Ok([unit(1., 0., 0., 0.)?, unit(0., 1., 0., 0.)?, unit(0., 0., 1., 0.)?, unit(0., 0., 0., 1.)?])
}

/// Symbolic name of one matrix element, e.g. `√3·V12` or `-V34`.
pub fn symbolic_entry(coeffs: &[CMatrix; 4], i: usize, j: usize) -> String {
    const NAMES: [&str; 4] = ["V12", "V23", "V34", "V14"];
    let mut terms = Vec::new();
    for (m, name) in coeffs.iter().zip(NAMES) {
        let c = m[(i, j)].re;
        if c.abs() < 1e-9 {
            continue;
        }
        let mag = c.abs();
        let factor = if (mag - 1.0).abs() < 1e-9 {
            String::new()
        } else if (mag - 3f64.sqrt()).abs() < 1e-9 {
            "√3·".to_string()
        } else if (mag - mag.round()).abs() < 1e-9 {
            format!("{}·", mag.round())
        } else {
            format!("{mag:.6}·")
        };
        let sign = if c < 0.0 { "-" } else if terms.is_empty() { "" } else { "+" };
        terms.push(format!("{sign}{factor}{name}"));
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.concat()
    }
}

/// Sum of eigenvalues of the two factors, sorted; the spectrum of `h₁ ⊗ I + I ⊗ h₂`.
pub fn kron_sum_spectrum(h1: &CMatrix, h2: &CMatrix) -> Result<Vec<f64>> {
    let e1 = HermitianEigen::new(h1)?.values;
    let e2 = HermitianEigen::new(h2)?.values;
    let mut out: Vec<f64> = e1.iter().flat_map(|a| e2.iter().map(move |b| a + b)).collect();
    out.sort_by(f64::total_cmp);
    Ok(out)
}

/// Measured `e^{iθ}` for which `U(T,0) ≈ e^{iθ} Y`, or `None` if no phase fits.
pub fn global_phase(u: &CMatrix, y: &CMatrix, tol: f64) -> Option<C64> {
    let m = crate::linalg::phase_match(u.as_slice(), y.as_slice());
    (m.residual <= tol).then(|| C64::from_polar(1.0, m.phase))
}
