//! Master-equation dynamics in the instantaneous eigenbasis, heat, and the
//! weak-coupling and fast-relaxation heat estimates.
//!
//! The state is `(ρ_gg, ρ_ge)` with `ρ_ee = 1 − ρ_gg`. The equations of motion
//! are split into the driven Bloch part (unitary, with the basis-rotation
//! element `v_ge`) and the environment part `L(ρ)`, obtained as the
//! difference between the full right-hand side and the unitary one.

use alloc::vec::Vec;

use libm::{exp, sqrt};

use crate::cpb::{
    band_structure_unchecked, bath_rates_unchecked, drive_unchecked, power_operator, BandStructure, DriveSample,
    ModelParams, RateBundle,
};
use crate::linalg::{Complex, DensityMatrix, Mat2};
use crate::ode::rk4_sampled;
use crate::quad::simpson;
use crate::{Error, DEFAULT_DT};

/// Populations may leave `[0, 1]` by at most this much before the run aborts.
pub const POSITIVITY_ABORT: f64 = 1e-4;
/// `|W − ΔE − Q|` tolerance for master-equation runs.
pub const FIRST_LAW_TOL: f64 = 1e-3;
/// Smallest `min_q Γ_Σ·T` at which the fast-relaxation formula is trusted.
pub const FAST_REGIME_MIN: f64 = 20.0;
/// Largest `∫Γ_eg dt` at which the weak-coupling estimate is trusted.
pub const WEAK_REGIME_MAX: f64 = 0.2;
/// Default Simpson node count for the fast-relaxation quadrature.
pub const DEFAULT_QUAD_NODES: usize = 2001;

/// Two-level density matrix in the adiabatic basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochState {
    pub rho_gg: f64,
    pub rho_ge: Complex,
}

impl BlochState {
    pub const GROUND: BlochState = BlochState { rho_gg: 1.0, rho_ge: Complex::new(0.0, 0.0) };
    pub const EXCITED: BlochState = BlochState { rho_gg: 0.0, rho_ge: Complex::new(0.0, 0.0) };

    pub fn new(rho_gg: f64, rho_ge: Complex) -> Result<Self, Error> {
        let s = Self { rho_gg, rho_ge };
        s.validate()?;
        Ok(s)
    }

    /// Gibbs state `ρ_gg = 1/(1 + e^{−βω₀})` at gate charge `q`.
    pub fn thermal(q: f64, eps: f64, beta: f64) -> Self {
        let omega0 = band_structure_unchecked(q, eps).omega0;
        let rho_gg = if beta.is_infinite() { 1.0 } else { 1.0 / (1.0 + exp(-beta * omega0)) };
        Self { rho_gg, rho_ge: Complex::new(0.0, 0.0) }
    }

    pub fn validate(&self) -> Result<(), Error> {
        if !self.rho_gg.is_finite() || !self.rho_ge.re.is_finite() || !self.rho_ge.im.is_finite() {
            return Err(Error::NonFinite { what: "BlochState" });
        }
        self.to_density_matrix().map(|_| ())
    }

    /// `ρ` as a matrix in the `{|g⟩, |e⟩}` basis.
    pub fn to_mat(&self) -> Mat2 {
        Mat2::from_rows(
            [Complex::new(self.rho_gg, 0.0), self.rho_ge],
            [self.rho_ge.conj(), Complex::new(1.0 - self.rho_gg, 0.0)],
        )
    }

    pub fn to_density_matrix(&self) -> Result<DensityMatrix, Error> {
        DensityMatrix::new(self.to_mat())
    }

    /// `ρ` in the charge basis.
    pub fn to_charge(&self, band: &BandStructure) -> Mat2 {
        let b = band.basis();
        b * self.to_mat() * b.adjoint()
    }

    /// `⟨H⟩ = −(ω₀/2)(ρ_gg − ρ_ee)`.
    pub fn energy(&self, band: &BandStructure) -> f64 {
        -0.5 * band.omega0 * (2.0 * self.rho_gg - 1.0)
    }

    fn from_raw(y: &[f64]) -> Self {
        Self { rho_gg: y[0], rho_ge: Complex::new(y[1], y[2]) }
    }
}

/// Average work, energy change and heat released to the environment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeatLedger {
    pub work: f64,
    pub delta_e: f64,
    pub heat: f64,
}

impl HeatLedger {
    /// `W − ΔE − Q`; zero when the first law holds.
    pub fn residual(&self) -> f64 {
        self.work - self.delta_e - self.heat
    }

    pub fn check(&self, tolerance: f64) -> Result<(), Error> {
        let residual = self.residual().abs();
        if !(residual <= tolerance) {
            return Err(Error::FirstLaw { residual, tolerance });
        }
        Ok(())
    }
}

/// Driven Bloch equations: `ρ̇ = −i[H, ρ]` in the moving eigenbasis.
pub fn unitary_rhs(state: &BlochState, band: &BandStructure, v_ge: f64) -> BlochState {
    BlochState {
        rho_gg: -2.0 * v_ge * state.rho_ge.re,
        rho_ge: Complex::new(0.0, band.omega0) * state.rho_ge + v_ge * (2.0 * state.rho_gg - 1.0),
    }
}

fn full_rhs(state: &BlochState, band: &BandStructure, r: &RateBundle) -> BlochState {
    let (gg, ge) = (state.rho_gg, state.rho_ge);
    let v = r.v_ge;
    let w0 = band.omega0;
    let i = Complex::new(0.0, 1.0);
    let d_gg = -2.0 * v * ge.re - r.gamma_sum() * gg + r.gamma_eg + r.gamma_t0 * ge.re;
    // Transcribed term by term; the bracket is kept exactly as given, including
    // Γ_φ appearing both outside and inside it.
    let bracket = (r.gamma_eg - r.gamma_ge) - 2.0 * (r.gamma_plus + r.gamma_minus) * gg
        + 2.0 * r.gamma_plus
        + r.gamma_phi * (2.0 * gg - 1.0)
        + 2.0 * (r.gamma_t0 - r.gamma_t_plus - r.gamma_t_minus) * ge.re;
    let d_ge = v * (2.0 * gg - 1.0) + i * w0 * ge - i * r.gamma_sum() * ge.im - r.gamma_phi * ge
        + (r.gamma_t_plus + r.gamma_t_minus) * gg
        - r.gamma_t_plus
        + i * (v / w0) * bracket;
    BlochState { rho_gg: d_gg, rho_ge: d_ge }
}

/// Full master-equation right-hand side at a given drive sample.
pub fn me_rhs_at(sample: &DriveSample, state: &BlochState, params: &ModelParams) -> BlochState {
    let band = band_structure_unchecked(sample.q, params.eps);
    full_rhs(state, &band, &bath_rates_unchecked(sample, params))
}

/// Full master-equation right-hand side at time `t` of the ramp.
pub fn me_rhs(t: f64, state: &BlochState, params: &ModelParams) -> BlochState {
    me_rhs_at(&drive_unchecked(t, params), state, params)
}

/// `L(ρ)`: full right-hand side minus the driven Bloch part.
pub fn dissipator_at(sample: &DriveSample, state: &BlochState, params: &ModelParams) -> BlochState {
    let band = band_structure_unchecked(sample.q, params.eps);
    let rates = bath_rates_unchecked(sample, params);
    dissipator(state, &band, &rates)
}

fn dissipator(state: &BlochState, band: &BandStructure, rates: &RateBundle) -> BlochState {
    let full = full_rhs(state, band, rates);
    let unitary = unitary_rhs(state, band, rates.v_ge);
    BlochState { rho_gg: full.rho_gg - unitary.rho_gg, rho_ge: full.rho_ge - unitary.rho_ge }
}

/// `−Tr{L(ρ)H}`, the rate of energy released to the environment.
fn heat_rate(l: &BlochState, band: &BandStructure) -> f64 {
    // L is traceless and hermitian: L_ee = −L_gg, L_eg = L_ge*.
    let l_mat =
        Mat2::from_rows([Complex::new(l.rho_gg, 0.0), l.rho_ge], [l.rho_ge.conj(), Complex::new(-l.rho_gg, 0.0)]);
    let h = Mat2::diag(Complex::new(band.energy_ground(), 0.0), Complex::new(band.energy_excited(), 0.0));
    -(l_mat * h).trace().re
}

/// `Tr{ρP}` with `ρ` taken to the charge basis.
pub fn power_expectation(state: &BlochState, sample: &DriveSample, band: &BandStructure) -> f64 {
    (state.to_charge(band) * power_operator(sample)).trace().re
}

/// Sampled master-equation run.
#[derive(Debug, Clone)]
pub struct OpenRun {
    pub times: Vec<f64>,
    pub states: Vec<BlochState>,
    /// `W`, `ΔE` and `Q = −∫Tr{L(ρ)H}dt`.
    pub ledger: HeatLedger,
    /// Alternative heat `∫ω₀ L_gg dt` from the population channel of the
    /// dissipator alone. Equal to `ledger.heat` because `H` is diagonal in
    /// the eigenbasis; the coherences carry no energy.
    pub heat_population: f64,
}

impl OpenRun {
    /// `Q − ∫ω₀ L_gg dt`.
    pub fn heat_form_difference(&self) -> f64 {
        self.ledger.heat - self.heat_population
    }

    pub fn final_state(&self) -> BlochState {
        *self.states.last().expect("run has at least one sample")
    }
}

/// Integrates the master equation over the ramp with the default RK4 step.
pub fn integrate_open(params: &ModelParams, rho0: &BlochState, n_steps: usize) -> Result<OpenRun, Error> {
    integrate_open_with_dt(params, rho0, n_steps, DEFAULT_DT)
}

/// As [`integrate_open`], with RK4 steps no longer than `max_dt`.
pub fn integrate_open_with_dt(
    params: &ModelParams,
    rho0: &BlochState,
    n_steps: usize,
    max_dt: f64,
) -> Result<OpenRun, Error> {
    params.validate()?;
    rho0.validate()?;
    if n_steps == 0 {
        return Err(Error::InvalidParam { name: "n_steps", value: 0.0, reason: "must be positive" });
    }
    if !(max_dt > 0.0) {
        return Err(Error::InvalidParam { name: "dt", value: max_dt, reason: "must be positive" });
    }
    let p = *params;
    // y = [ρ_gg, Re ρ_ge, Im ρ_ge, W, Q, Q_pop]
    let rhs = move |t: f64, y: &[f64; 6]| {
        let sample = drive_unchecked(t, &p);
        let band = band_structure_unchecked(sample.q, p.eps);
        let rates = bath_rates_unchecked(&sample, &p);
        let s = BlochState::from_raw(y);
        let d = full_rhs(&s, &band, &rates);
        let l = dissipator(&s, &band, &rates);
        [
            d.rho_gg,
            d.rho_ge.re,
            d.rho_ge.im,
            power_expectation(&s, &sample, &band),
            heat_rate(&l, &band),
            band.omega0 * l.rho_gg,
        ]
    };
    let check = |t: f64, y: &[f64; 6]| {
        if y[0] < -POSITIVITY_ABORT || y[0] > 1.0 + POSITIVITY_ABORT {
            return Err(Error::Positivity { time: t, rho_gg: y[0] });
        }
        Ok(())
    };
    let h = params.t_ramp / n_steps as f64;
    let substeps = libm::ceil(h / max_dt).max(1.0) as usize;
    let y0 = [rho0.rho_gg, rho0.rho_ge.re, rho0.rho_ge.im, 0.0, 0.0, 0.0];
    let traj = rk4_sampled(rhs, y0, 0.0, params.t_ramp, n_steps, substeps, check)?;

    let last = traj.states.last().expect("trajectory is never empty");
    let band_start = band_structure_unchecked(-0.5, params.eps);
    let band_end = band_structure_unchecked(0.5, params.eps);
    let delta_e = BlochState::from_raw(last).energy(&band_end) - rho0.energy(&band_start);
    let ledger = HeatLedger { work: last[3], delta_e, heat: last[4] };
    ledger.check(FIRST_LAW_TOL)?;
    Ok(OpenRun {
        times: traj.times,
        states: traj.states.iter().map(|y| BlochState::from_raw(y)).collect(),
        ledger,
        heat_population: last[5],
    })
}

/// Weak-coupling heat-to-work ratio and its validity measure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeakCouplingEstimate {
    /// `r κ² (2ε)² T`.
    pub heat_over_work: f64,
    /// `∫Γ_eg dt` over the ramp.
    pub relaxation_integral: f64,
    pub valid: bool,
}

/// Heat over work to first order in the coupling, for a ground-state start
/// at zero temperature.
pub fn weak_coupling_estimate(params: &ModelParams) -> Result<WeakCouplingEstimate, Error> {
    params.validate()?;
    let (eps, t) = (params.eps, params.t_ramp);
    let heat_over_work = params.r_env * params.kappa * params.kappa * 4.0 * eps * eps * t;
    let n = 401;
    let values: Vec<f64> =
        symmetric_nodes(n).map(|q| bath_rates_unchecked(&DriveSample { q, qdot: 1.0 / t }, params).gamma_eg).collect();
    let relaxation_integral = t * simpson(&values, 1.0 / (n - 1) as f64)?;
    Ok(WeakCouplingEstimate { heat_over_work, relaxation_integral, valid: relaxation_integral < WEAK_REGIME_MAX })
}

/// Fast-relaxation heat and its diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FastRelaxationHeat {
    /// `(β/T) ∫ η² / (Γ_Σ cosh²(βω₀/2)) dq`.
    pub heat: f64,
    /// `(4/T) ∫ q/(ω₀Γ_Σ) · d(Γ_eg/Γ_Σ)/dq dq`, with the derivative taken by
    /// central differences of the rates.
    pub heat_from_rates: f64,
    /// `∫ ω₀ dρ_gg⁽⁰⁾`, heat of the quasi-static solution.
    pub zeroth_order: f64,
    /// `|ω₀ δρ_gg⁽¹⁾|` summed over both ends of the ramp.
    pub boundary: f64,
    /// `min_q Γ_Σ·T`.
    pub min_relaxation_product: f64,
    pub in_regime: bool,
}

// Grid on [−½, ½] with q_{n−1−i} = −q_i exactly.
fn symmetric_nodes(n: usize) -> impl Iterator<Item = f64> {
    let m = (n - 1) as f64;
    (0..n).map(move |i| (2.0 * i as f64 - m) / (2.0 * m))
}

// 1/cosh²(x) without overflow.
fn sech2(x: f64) -> f64 {
    let e = exp(-2.0 * x.abs());
    4.0 * e / ((1.0 + e) * (1.0 + e))
}

/// Heat for relaxation much faster than the ramp, by Simpson quadrature on
/// `n_quad` nodes (odd, at least 3).
pub fn fast_relaxation_heat(params: &ModelParams, n_quad: usize) -> Result<FastRelaxationHeat, Error> {
    params.validate()?;
    let beta = params.beta;
    if !beta.is_finite() {
        return Err(Error::InvalidParam {
            name: "beta",
            value: beta,
            reason: "fast-relaxation heat needs a finite temperature",
        });
    }
    if n_quad < 3 || n_quad.is_multiple_of(2) {
        return Err(Error::InvalidParam {
            name: "n_quad",
            value: n_quad as f64,
            reason: "Simpson's rule needs an odd number of nodes, at least 3",
        });
    }
    let t = params.t_ramp;
    let qdot = 1.0 / t;
    let h = 1.0 / (n_quad - 1) as f64;
    let fd = 1e-5;
    let ratio = |q: f64| {
        let r = bath_rates_unchecked(&DriveSample { q, qdot }, params);
        r.gamma_eg / r.gamma_sum()
    };

    let mut line2 = Vec::with_capacity(n_quad);
    let mut line1 = Vec::with_capacity(n_quad);
    let mut zeroth = Vec::with_capacity(n_quad);
    let mut min_sum = f64::INFINITY;
    for q in symmetric_nodes(n_quad) {
        let band = band_structure_unchecked(q, params.eps);
        let rates = bath_rates_unchecked(&DriveSample { q, qdot }, params);
        let sum = rates.gamma_sum();
        if !(sum > 0.0) {
            return Err(Error::ZeroRelaxation { q });
        }
        min_sum = min_sum.min(sum);
        let w0 = band.omega0;
        let s2 = sech2(0.5 * beta * w0);
        line2.push(band.eta * band.eta * s2 / sum);
        let d_ratio = (ratio(q + fd) - ratio(q - fd)) / (2.0 * fd);
        line1.push(q / (w0 * sum) * d_ratio);
        // ω₀ dρ⁽⁰⁾/dq with ρ⁽⁰⁾ = 1/(1+e^{−βω₀}) and dω₀/dq = 4q/ω₀.
        zeroth.push(w0 * 0.25 * beta * s2 * 4.0 * q / w0);
    }
    let heat = beta / t * simpson(&line2, h)?;
    let heat_from_rates = 4.0 / t * simpson(&line1, h)?;
    let zeroth_order = simpson(&zeroth, h)?;

    let boundary = [-0.5, 0.5]
        .iter()
        .map(|&q| {
            let band = band_structure_unchecked(q, params.eps);
            let rates = bath_rates_unchecked(&DriveSample { q, qdot }, params);
            let rho_dot = qdot * 0.25 * beta * sech2(0.5 * beta * band.omega0) * 4.0 * q / band.omega0;
            (band.omega0 * rho_dot / rates.gamma_sum()).abs()
        })
        .sum();

    let min_relaxation_product = min_sum * t;
    Ok(FastRelaxationHeat {
        heat,
        heat_from_rates,
        zeroth_order,
        boundary,
        min_relaxation_product,
        in_regime: min_relaxation_product >= FAST_REGIME_MIN,
    })
}

/// Gap at the start of the ramp, `2√(¼ + ε²)`.
pub fn initial_gap(eps: f64) -> f64 {
    2.0 * sqrt(0.25 + eps * eps)
}
