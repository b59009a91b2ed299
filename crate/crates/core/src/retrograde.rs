//! Piecewise-constant schedules and the retrograde canon.
//!
//! A base schedule `H(t)` on `[0, T]` is doubled into
//! `𝓗(t) = -H(T-t) ⊗ I + I ⊗ H(t)` (retrograde) or
//! `𝓗(t) = H*(T-t) ⊗ I + I ⊗ H(t)` (semi-retrograde). Both are again
//! piecewise constant, with breakpoints at the base breakpoints and their
//! mirror images, so the doubled propagator is an exact product of segment
//! exponentials. Units have `ħ = 1`.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{
    basis, identity, kron, EntryMax, kron_vec, max_diff, phase_match, unitary_deviation, vectorize, CMatrix,
    CVector, HermitianEigen, Tolerances,
};
use crate::pythagorean::{coupling_params, triple_from_pair, OddPair, Sign};
use crate::su2::{spin_generators, y_matrix};

/// Tolerance for the equalities checked in this module.
pub const CHECK_TOL: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct Segment {
    pub h: CMatrix,
    pub duration: f64,
    eig: HermitianEigen,
}

impl Segment {
    pub fn propagator(&self, dt: f64) -> CMatrix {
        self.eig.propagator(dt)
    }
}

/// `H(t)` constant on consecutive segments; `T` is the sum of durations.
#[derive(Clone, Debug)]
pub struct PulseSchedule {
    segments: Vec<Segment>,
    dim: usize,
    total: f64,
}

impl PulseSchedule {
    pub fn new(segments: Vec<(CMatrix, f64)>) -> Result<Self> {
        let dim = segments
            .first()
            .map(|(h, _)| h.nrows())
            .ok_or_else(|| Error::InvalidSchedule("no segments".into()))?;
        let tol = Tolerances::default().hermitian;
        let mut built = Vec::with_capacity(segments.len());
        for (k, (h, duration)) in segments.into_iter().enumerate() {
            if h.shape() != (dim, dim) {
                return Err(Error::DimensionMismatch {
                    expected: format!("{dim}×{dim} segment Hamiltonian"),
                    got: format!("{}×{} in segment {k}", h.nrows(), h.ncols()),
                });
            }
            if !(duration > 0.0 && duration.is_finite()) {
                return Err(Error::InvalidSchedule(format!(
                    "segment {k} has non-positive duration {duration}"
                )));
            }
            let eig = HermitianEigen::with_tolerance(&h, tol)?;
            built.push(Segment { h, duration, eig });
        }
        let total = built.iter().map(|s| s.duration).sum();
        Ok(Self { segments: built, dim, total })
    }

    pub fn constant(h: CMatrix, duration: f64) -> Result<Self> {
        Self::new(vec![(h, duration)])
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn total_duration(&self) -> f64 {
        self.total
    }

    /// Segment boundaries `0 = b₀ < b₁ < … < b_m = T`.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut acc = 0.0;
        std::iter::once(0.0)
            .chain(self.segments.iter().map(|s| {
                acc += s.duration;
                acc
            }))
            .collect()
    }

    /// `H(t)`, right-continuous, with `H(T)` taken from the last segment.
    pub fn hamiltonian_at(&self, t: f64) -> &CMatrix {
        let mut end = 0.0;
        for s in &self.segments {
            end += s.duration;
            if t < end {
                return &s.h;
            }
        }
        &self.segments.last().expect("schedule is nonempty").h
    }

    fn check_time(&self, t: f64) -> Result<f64> {
        let slack = 1e-12 * self.total.max(1.0);
        if !(t >= -slack && t <= self.total + slack) {
            return Err(Error::TimeOutOfRange { t, total: self.total });
        }
        Ok(t.clamp(0.0, self.total))
    }

    /// Time-ordered `U(t1, t0)`; for `t1 < t0` this is `U(t0, t1)†`.
    pub fn propagator(&self, t0: f64, t1: f64) -> Result<CMatrix> {
        let (t0, t1) = (self.check_time(t0)?, self.check_time(t1)?);
        if t1 < t0 {
            return Ok(self.forward(t1, t0).adjoint());
        }
        Ok(self.forward(t0, t1))
    }

    fn forward(&self, t0: f64, t1: f64) -> CMatrix {
        let mut u = identity(self.dim);
        let mut start = 0.0;
        for s in &self.segments {
            let end = start + s.duration;
            let dt = end.min(t1) - start.max(t0);
            if dt > 0.0 {
                u = s.propagator(dt) * u;
            }
            start = end;
            if start >= t1 {
                break;
            }
        }
        u
    }
}

/// Time-ordered propagator `U(t1, t0)` of `schedule`.
pub fn ordered_propagator(schedule: &PulseSchedule, t0: f64, t1: f64) -> Result<CMatrix> {
    schedule.propagator(t0, t1)
}

/// Two-level pulse: `Δ₁σz + Ω₁σx` for `τ`, then `-Δ₂σz - Ω₂σx` for `τ`.
pub fn pythagorean_pulse(pair: OddPair, k: f64) -> Result<PulseSchedule> {
    pythagorean_pulse_in(pair, k, 2)
}

/// The same two-segment pulse with `2ΔJ₃ + 2ΩJ₁` generators in dimension `n`.
pub fn pythagorean_pulse_in(pair: OddPair, k: f64, n: usize) -> Result<PulseSchedule> {
    let params = coupling_params(&triple_from_pair(pair, Sign::Plus, Sign::Plus), k);
    let rep = spin_generators(n)?;
    PulseSchedule::new(vec![
        (rep.drive(params.delta1, params.omega1), params.tau),
        (-rep.drive(params.delta2, params.omega2), params.tau),
    ])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    /// `-H(T-t) ⊗ I + I ⊗ H(t)`.
    Retrograde,
    /// `H*(T-t) ⊗ I + I ⊗ H(t)`.
    SemiRetrograde,
}

#[derive(Clone, Debug)]
pub struct RetrogradeSystem {
    pub base: PulseSchedule,
    pub variant: Variant,
    /// The doubled Hamiltonian as an explicit piecewise-constant schedule.
    pub doubled: PulseSchedule,
}

pub fn retrograde_hamiltonian(base: &PulseSchedule) -> Result<RetrogradeSystem> {
    RetrogradeSystem::new(base, Variant::Retrograde)
}

pub fn semi_retrograde_hamiltonian(base: &PulseSchedule) -> Result<RetrogradeSystem> {
    RetrogradeSystem::new(base, Variant::SemiRetrograde)
}

impl RetrogradeSystem {
    pub fn new(base: &PulseSchedule, variant: Variant) -> Result<Self> {
        let total = base.total_duration();
        let mut cuts: Vec<f64> = base.breakpoints();
        cuts.extend(base.breakpoints().iter().map(|b| total - b));
        cuts.sort_by(f64::total_cmp);
        let eps = 1e-12 * total.max(1.0);
        cuts.dedup_by(|a, b| (*a - *b).abs() <= eps);

        let segments = cuts
            .windows(2)
            .filter(|w| w[1] - w[0] > eps)
            .map(|w| {
                let mid = 0.5 * (w[0] + w[1]);
                (Self::hamiltonian_from(base, variant, mid), w[1] - w[0])
            })
            .collect();
        Ok(Self { base: base.clone(), variant, doubled: PulseSchedule::new(segments)? })
    }

    fn hamiltonian_from(base: &PulseSchedule, variant: Variant, t: f64) -> CMatrix {
        let d = base.dim();
        let mirrored = base.hamiltonian_at(base.total_duration() - t);
        let first = match variant {
            Variant::Retrograde => -mirrored.clone(),
            Variant::SemiRetrograde => mirrored.conjugate(),
        };
        kron(&first, &identity(d)) + kron(&identity(d), base.hamiltonian_at(t))
    }

    /// `𝓗(t)` evaluated directly from the base schedule.
    pub fn hamiltonian_at(&self, t: f64) -> CMatrix {
        Self::hamiltonian_from(&self.base, self.variant, t)
    }

    /// `𝓤(t1, t0)` from the doubled schedule.
    pub fn propagator(&self, t0: f64, t1: f64) -> Result<CMatrix> {
        self.doubled.propagator(t0, t1)
    }

    /// `U(T-t1, T-t0) ⊗ U(t1, t0)`, with the first factor conjugated for the
    /// semi-retrograde variant.
    pub fn factorized_propagator(&self, t0: f64, t1: f64) -> Result<CMatrix> {
        let total = self.base.total_duration();
        let mirrored = self.base.propagator(total - t0, total - t1)?;
        let first = match self.variant {
            Variant::Retrograde => mirrored,
            Variant::SemiRetrograde => mirrored.conjugate(),
        };
        Ok(kron(&first, &self.base.propagator(t0, t1)?))
    }

    pub fn half_time(&self) -> f64 {
        0.5 * self.base.total_duration()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EquivalenceReport {
    pub variant: Variant,
    /// `U(T,0) = e^{iθ} y`.
    pub operator_side: bool,
    /// `𝓤(T/2,0) V(I)/√n = e^{iθ'} V(y)/√n`.
    pub state_side: bool,
    /// Operator side holds and the state side follows from it.
    pub forward: bool,
    /// State side holds and the operator side follows from it.
    pub backward: bool,
    /// Both sides agree, true or false.
    pub biconditional_holds: bool,
    pub operator_phase: Option<f64>,
    pub state_phase: Option<f64>,
    pub operator_residual: f64,
    pub state_residual: f64,
    pub trace_re: f64,
    pub trace_im: f64,
    /// `tr y = 0`, i.e. `V(I) ⟂ V(y)`.
    pub trace_zero: bool,
    /// The state side holds and it moves population between orthogonal states.
    pub cpt: bool,
}

/// Compares both sides of `U(T,0) = y ⟺ 𝓤(T/2,0)V(I) = V(y)`, each up to a
/// global phase which is reported.
///
/// `y` must be unitary and invariant under the unitaries the schedule
/// generates: `u y uᵀ = y` for the retrograde variant, `u y u† = y` for the
/// semi-retrograde one.
pub fn check_equivalence(base: &PulseSchedule, y: &CMatrix, variant: Variant) -> Result<EquivalenceReport> {
    let n = base.dim();
    if y.shape() != (n, n) {
        return Err(Error::DimensionMismatch {
            expected: format!("{n}×{n} target"),
            got: format!("{}×{}", y.nrows(), y.ncols()),
        });
    }
    let deviation = unitary_deviation(y);
    if deviation > Tolerances::default().unitary {
        return Err(Error::NotUnitary { deviation });
    }

    let total = base.total_duration();
    let u_full = base.propagator(0.0, total)?;
    let u_half = base.propagator(0.0, total / 2.0)?;
    let mut generated: Vec<CMatrix> =
        base.segments().iter().map(|s| s.propagator(s.duration)).collect();
    generated.push(u_full.clone());
    generated.push(u_half);
    let invariance = generated
        .iter()
        .map(|u| {
            let image = match variant {
                Variant::Retrograde => u * y * u.transpose(),
                Variant::SemiRetrograde => u * y * u.adjoint(),
            };
            max_diff(&image, y)
        })
        .fold(0.0, f64::max);
    if invariance > CHECK_TOL {
        return Err(Error::NotInvariant { deviation: invariance });
    }

    let op = phase_match(u_full.as_slice(), y.as_slice());
    let operator_side = op.residual <= CHECK_TOL;

    let system = RetrogradeSystem::new(base, variant)?;
    let scale = 1.0 / (n as f64).sqrt();
    let v_i = vectorize(&identity(n)).scale(scale);
    let v_y = vectorize(y).scale(scale);
    let image = system.propagator(0.0, system.half_time())? * v_i;
    let st = phase_match(image.as_slice(), v_y.as_slice());
    let state_side = st.residual <= CHECK_TOL;

    let trace = y.trace();
    let trace_zero = trace.norm() <= CHECK_TOL;
    Ok(EquivalenceReport {
        variant,
        operator_side,
        state_side,
        forward: operator_side && state_side,
        backward: state_side && operator_side,
        biconditional_holds: operator_side == state_side,
        operator_phase: operator_side.then_some(op.phase),
        state_phase: state_side.then_some(st.phase),
        operator_residual: op.residual,
        state_residual: st.residual,
        trace_re: trace.re,
        trace_im: trace.im,
        trace_zero,
        cpt: state_side && trace_zero,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct RecipeResult {
    #[serde(skip)]
    pub initial: CVector,
    #[serde(skip)]
    pub final_state: CVector,
    /// `max |𝓤(T/2,0)·initial - final|`.
    pub mapping_error: f64,
    /// `|⟨initial|final⟩|`.
    pub overlap: f64,
    pub certified: bool,
}

/// Builds the transfer `(-e^{iφ}|ii⟩ + |ff⟩) → (-|hg⟩ + |gh⟩)` with
/// `g = U(T/2,0)|i⟩`, `h = U(T/2,0)|f⟩`, both normalized.
///
/// Requires `|⟨i|f⟩| < 1`, `U(T,0)|i⟩ = |f⟩` and `U(T,0)|f⟩ = e^{iφ}|i⟩`. The
/// doubled propagator at `T/2` is `U(T/2,T) ⊗ U(T/2,0)` with
/// `U(T/2,T) = U(T/2,0) U(T,0)†`.
pub fn general_recipe(
    u_t: &CMatrix,
    u_half: &CMatrix,
    i: &CVector,
    f: &CVector,
    phi: f64,
) -> Result<RecipeResult> {
    let d = i.len();
    for (name, m) in [("U(T,0)", u_t), ("U(T/2,0)", u_half)] {
        if m.shape() != (d, d) {
            return Err(Error::DimensionMismatch {
                expected: format!("{d}×{d} {name}"),
                got: format!("{}×{}", m.nrows(), m.ncols()),
            });
        }
    }
    if f.len() != d {
        return Err(Error::DimensionMismatch {
            expected: format!("|f⟩ of dimension {d}"),
            got: format!("dimension {}", f.len()),
        });
    }
    for v in [i, f] {
        let norm = v.norm();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::NotNormalized { norm });
        }
    }
    let overlap_if = i.dotc(f).norm();
    if overlap_if >= 1.0 - CHECK_TOL {
        return Err(Error::RecipeCondition {
            condition: 1,
            detail: format!("|⟨i|f⟩| = {overlap_if} is not below 1"),
        });
    }
    let e2 = (u_t * i - f).entry_max();
    if e2 > CHECK_TOL {
        return Err(Error::RecipeCondition {
            condition: 2,
            detail: format!("max |U(T,0)|i⟩ - |f⟩| = {e2:e}"),
        });
    }
    let rot = C64::from_polar(1.0, phi);
    let e3 = (u_t * f - i * rot).entry_max();
    if e3 > CHECK_TOL {
        return Err(Error::RecipeCondition {
            condition: 3,
            detail: format!("max |U(T,0)|f⟩ - e^(iφ)|i⟩| = {e3:e}"),
        });
    }

    let initial = normalized(kron_vec(i, i) * (-rot) + kron_vec(f, f));
    let g = u_half * i;
    let h = u_half * f;
    let final_state = normalized(kron_vec(&g, &h) - kron_vec(&h, &g));

    let retro = kron(&(u_half * u_t.adjoint()), u_half);
    let propagated = retro * &initial;
    let mapping_error = (&propagated - &final_state).entry_max();
    let overlap = initial.dotc(&final_state).norm();
    Ok(RecipeResult {
        initial,
        final_state,
        mapping_error,
        overlap,
        certified: mapping_error <= CHECK_TOL && overlap <= CHECK_TOL,
    })
}

fn normalized(v: CVector) -> CVector {
    let norm = v.norm();
    v.unscale(norm)
}

#[derive(Clone, Debug, Serialize)]
pub struct FamilySample {
    pub t: f64,
    pub overlap: f64,
    pub mapping_error: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct TimeIndependentReport {
    /// `φ` with `U(2T)|i⟩ = e^{iφ}|i⟩`, when condition 1 holds.
    pub phi: Option<f64>,
    pub return_residual: f64,
    pub condition1: bool,
    /// `|⟨i|U(T)|i⟩|`.
    pub self_overlap: f64,
    pub condition2: bool,
    pub recipe: Option<RecipeResult>,
    /// Transfers from `U(t) ⊗ U(t)` applied to the recipe's initial state.
    pub family: Vec<FamilySample>,
    pub all_certified: bool,
}

/// For constant `h`: checks `U(2T)|i⟩ = e^{iφ}|i⟩` and `|⟨i|U(T)|i⟩| < 1`, and
/// when both hold certifies the family of transfers over `t ∈ [0, 2T]`.
pub fn time_independent_conditions(h: &CMatrix, i: &CVector, period: f64) -> Result<TimeIndependentReport> {
    let norm = i.norm();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::NotNormalized { norm });
    }
    let eig = HermitianEigen::new(h)?;
    let back = eig.evolve(i, 2.0 * period);
    let m = phase_match(back.as_slice(), i.as_slice());
    let condition1 = m.residual <= CHECK_TOL;
    let self_overlap = i.dotc(&eig.evolve(i, period)).norm();
    let condition2 = self_overlap < 1.0 - CHECK_TOL;

    let mut report = TimeIndependentReport {
        phi: condition1.then_some(m.phase),
        return_residual: m.residual,
        condition1,
        self_overlap,
        condition2,
        recipe: None,
        family: Vec::new(),
        all_certified: false,
    };
    if !(condition1 && condition2) {
        return Ok(report);
    }

    let u_t = eig.propagator(period);
    let u_half = eig.propagator(period / 2.0);
    let f = &u_t * i;
    let recipe = general_recipe(&u_t, &u_half, i, &f, m.phase)?;
    let retro = kron(&eig.propagator(-period / 2.0), &u_half);
    for t in crate::dynamics::uniform_grid(2.0 * period, 8) {
        let ut = eig.propagator(t);
        let pair = kron(&ut, &ut);
        let init_t = &pair * &recipe.initial;
        let fin_t = &retro * &init_t;
        report.family.push(FamilySample {
            t,
            overlap: init_t.dotc(&fin_t).norm(),
            mapping_error: (fin_t - &pair * &recipe.final_state).entry_max(),
        });
    }
    report.all_certified = recipe.certified
        && report.family.iter().all(|s| s.overlap <= CHECK_TOL && s.mapping_error <= CHECK_TOL);
    report.recipe = Some(recipe);
    Ok(report)
}

#[derive(Clone, Debug, Serialize)]
pub struct BasicCptRecord {
    /// 1-based level `i`; the initial state is `(|ii⟩ + |n+1-i, n+1-i⟩)/√2`.
    pub level: usize,
    #[serde(skip)]
    pub initial: CVector,
    #[serde(skip)]
    pub final_state: CVector,
    pub overlap: f64,
    pub certified: bool,
    /// Distance (up to global phase) from the recipe's predicted final state.
    pub recipe_residual: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct UniversalCpt {
    #[serde(skip)]
    pub final_state: CVector,
    #[serde(skip)]
    pub target: CVector,
    /// `max |final - V(Y)/√n|`.
    pub raw_error: f64,
    /// `max |(-1)^{(p+q)/2} final - V(Y)/√n|`.
    pub normalized_error: f64,
    pub overlap: f64,
    pub certified: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct BasicCptReport {
    pub n: usize,
    pub p: i64,
    pub q: i64,
    pub k: f64,
    /// Measured `s` in `U(T,0) = s Y`.
    pub measured_sign: f64,
    /// `(-1)^{(p+q)/2}`.
    pub predicted_sign: f64,
    pub records: Vec<BasicCptRecord>,
    /// `|⟨ψ₀|𝓤 ψ₀⟩|` for superpositions `ψ₀ = Σ cᵢ (basic initial)ᵢ`.
    pub family_overlaps: Vec<f64>,
    pub universal: UniversalCpt,
    pub all_certified: bool,
}

pub const FAMILY_SAMPLES: usize = 20;

/// Deterministic unit vectors in `C^m` used to sample superpositions of the
/// basic transfers.
pub fn family_coefficients(m: usize, samples: usize) -> Vec<Vec<C64>> {
    const GOLDEN: f64 = 0.618_033_988_749_894_9;
    (0..samples)
        .map(|s| {
            let raw: Vec<C64> = (0..m)
                .map(|i| {
                    let x = ((s * m + i) as f64 * GOLDEN + 0.1).fract();
                    let y = ((s * m + i) as f64 * GOLDEN * GOLDEN + 0.3).fract();
                    C64::from_polar(0.2 + x, 2.0 * PI * y)
                })
                .collect();
            let norm = raw.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            raw.into_iter().map(|z| z / norm).collect()
        })
        .collect()
}

/// The `n/2` basic transfers of the lifted two-segment pulse, superpositions
/// of them, and the parameter-independent transfer `V(I)/√n → V(Y)/√n`.
pub fn basic_cpts(n: usize, pair: OddPair, k: f64) -> Result<BasicCptReport> {
    let rep = spin_generators(n)?;
    let y = y_matrix(&rep);
    if n % 2 == 1 {
        return Err(Error::OddDimension { n, trace: y.trace().re });
    }
    let base = pythagorean_pulse_in(pair, k, n)?;
    let system = retrograde_hamiltonian(&base)?;
    let half = system.half_time();
    let u_retro = system.propagator(0.0, half)?;
    let u_t = base.propagator(0.0, base.total_duration())?;
    let u_half = base.propagator(0.0, half)?;
    let sign = phase_match(u_t.as_slice(), y.as_slice());
    let measured_sign = C64::from_polar(1.0, sign.phase).re.signum();

    let pair_state = |a: usize, b: usize| {
        let (ea, eb) = (basis(n, a), basis(n, b));
        kron_vec(&ea, &ea) + kron_vec(&eb, &eb)
    };
    let mut records = Vec::with_capacity(n / 2);
    let mut initials = Vec::with_capacity(n / 2);
    for level in 1..=n / 2 {
        let (a, b) = (level - 1, n - level);
        let initial = pair_state(a, b).unscale(2f64.sqrt());
        let final_state = &u_retro * &initial;
        let overlap = initial.dotc(&final_state).norm();

        let ei = basis(n, a);
        let f = &u_t * &ei;
        let phi = phase_match((&u_t * &f).as_slice(), ei.as_slice()).phase;
        let recipe = general_recipe(&u_t, &u_half, &ei, &f, phi)?;
        let recipe_residual = phase_match(final_state.as_slice(), recipe.final_state.as_slice()).residual;

        records.push(BasicCptRecord {
            level,
            certified: overlap <= CHECK_TOL && recipe_residual <= CHECK_TOL,
            initial: initial.clone(),
            final_state,
            overlap,
            recipe_residual,
        });
        initials.push(initial);
    }

    let family_overlaps = family_coefficients(n / 2, FAMILY_SAMPLES)
        .iter()
        .map(|coeffs| {
            let psi = coeffs
                .iter()
                .zip(&initials)
                .fold(CVector::zeros(n * n), |acc, (c, v)| acc + v * *c);
            psi.dotc(&(&u_retro * &psi)).norm()
        })
        .collect::<Vec<_>>();

    let scale = 1.0 / (n as f64).sqrt();
    let uni_initial = vectorize(&identity(n)).scale(scale);
    let target = vectorize(&y).scale(scale);
    let final_state = &u_retro * &uni_initial;
    let predicted_sign = pair.parity_sign();
    let raw_error = (&final_state - &target).entry_max();
    let normalized_error = (final_state.scale(predicted_sign) - &target).entry_max();
    let overlap = uni_initial.dotc(&final_state).norm();
    let universal = UniversalCpt {
        certified: normalized_error <= CHECK_TOL && overlap <= CHECK_TOL,
        final_state,
        target,
        raw_error,
        normalized_error,
        overlap,
    };

    let all_certified = records.iter().all(|r| r.certified)
        && family_overlaps.iter().all(|&o| o <= CHECK_TOL)
        && universal.certified
        && sign.residual <= CHECK_TOL
        && measured_sign == predicted_sign;
    Ok(BasicCptReport {
        n,
        p: pair.p(),
        q: pair.q(),
        k,
        measured_sign,
        predicted_sign,
        records,
        family_overlaps,
        universal,
        all_certified,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct OddDimReport {
    #[serde(skip)]
    pub u_t: CMatrix,
    /// `max |U(T,0) - Y₃|`.
    pub y_deviation: f64,
    /// Residuals of `|1⟩ → |3⟩`, `|2⟩ → -|2⟩`, `|3⟩ → |1⟩`.
    pub action_residuals: [f64; 3],
    /// The one basic transfer, from `(-|11⟩ + |33⟩)/√2`.
    pub basic_cpt: RecipeResult,
    /// Distance of the basic initial state from `(-|11⟩ + |33⟩)/√2`, up to phase.
    pub basic_initial_residual: f64,
    /// Distance of the doubled-dynamics image from the recipe's final state.
    pub basic_dynamics_residual: f64,
    /// `|⟨V(I)/√3, V(Y)/√3⟩|`.
    pub vi_vy_overlap: f64,
    pub equivalence: EquivalenceReport,
    /// `V(I) → V(Y)` happens but is not a transfer between orthogonal states.
    pub universal_is_cpt: bool,
}

/// Spin-1 lift of the two-segment pulse: `U(T,0) = Y₃` holds, but
/// `tr Y₃ = -1` so `V(I) → V(Y)` is not a complete transfer.
pub fn odd_dim_demo(pair: OddPair, k: f64) -> Result<OddDimReport> {
    const N: usize = 3;
    let y = y_matrix(&spin_generators(N)?);
    let base = pythagorean_pulse_in(pair, k, N)?;
    let total = base.total_duration();
    let u_t = base.propagator(0.0, total)?;
    let u_half = base.propagator(0.0, total / 2.0)?;

    let e = |i: usize| basis(N, i);
    let action_residuals = [
        (&u_t * e(0) - e(2)).entry_max(),
        (&u_t * e(1) + e(1)).entry_max(),
        (&u_t * e(2) - e(0)).entry_max(),
    ];

    let f = &u_t * e(0);
    let phi = phase_match((&u_t * &f).as_slice(), e(0).as_slice()).phase;
    let basic_cpt = general_recipe(&u_t, &u_half, &e(0), &f, phi)?;
    let expected_initial = (kron_vec(&e(2), &e(2)) - kron_vec(&e(0), &e(0))).unscale(2f64.sqrt());
    let basic_initial_residual =
        phase_match(basic_cpt.initial.as_slice(), expected_initial.as_slice()).residual;
    let system = retrograde_hamiltonian(&base)?;
    let image = system.propagator(0.0, system.half_time())? * &basic_cpt.initial;
    let basic_dynamics_residual = (image - &basic_cpt.final_state).entry_max();

    let scale = 1.0 / (N as f64).sqrt();
    let v_i = vectorize(&identity(N)).scale(scale);
    let v_y = vectorize(&y).scale(scale);
    let vi_vy_overlap = v_i.dotc(&v_y).norm();
    let equivalence = check_equivalence(&base, &y, Variant::Retrograde)?;

    Ok(OddDimReport {
        y_deviation: max_diff(&u_t, &y),
        u_t,
        action_residuals,
        basic_cpt,
        basic_initial_residual,
        basic_dynamics_residual,
        vi_vy_overlap,
        universal_is_cpt: equivalence.cpt,
        equivalence,
    })
}
