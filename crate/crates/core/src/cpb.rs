//! The Cooper-pair box as a driven two-level system.
//!
//! Charge basis `{|0⟩, |1⟩}` (zero or one excess Cooper pair on the island).
//! With `q(t) = −1/2 + t/T` the Hamiltonian is
//! `H/E_C = q(|0⟩⟨0| − |1⟩⟨1|) − ε(|0⟩⟨1| + |1⟩⟨0|)` and the gap is
//! `ω₀ = 2√(q² + ε²)`.
//!
//! The environment is a resistor `R` coupled through the gate capacitance.
//! Its voltage noise has the ohmic, detailed-balance spectrum
//! `S(ω) = 2Rħω / (1 − e^{−βħω})`; every rate below is a coupling squared
//! times `(R/R_Q)·s(ω)` with `s(ω) = 2ω/(1 − e^{−βω})` in normalized units.

use libm::{expm1, sqrt};

use crate::linalg::{Complex, Mat2, Vec2};
use crate::Error;

/// Largest `ε = E_J/(2E_C)` for which the two-level truncation is kept.
pub const EPS_MAX: f64 = 0.2;

/// Physical knobs in normalized units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    /// `ε = E_J / (2 E_C)`.
    pub eps: f64,
    /// Ramp duration in units of `ħ/E_C`.
    pub t_ramp: f64,
    /// Gate coupling `C_g / C_Σ`.
    pub kappa: f64,
    /// Environment resistance `R / R_Q` with `R_Q = ħ/e²`.
    pub r_env: f64,
    /// Inverse bath temperature in units of `1/E_C`; `f64::INFINITY` is a
    /// zero-temperature bath.
    pub beta: f64,
    /// `E_C / k_B` in kelvin; only used to convert physical inputs.
    pub e_c_kelvin: Option<f64>,
}

impl ModelParams {
    /// Isolated box: no environment coupling.
    pub fn closed(eps: f64, t_ramp: f64) -> Self {
        Self { eps, t_ramp, kappa: 0.0, r_env: 0.0, beta: f64::INFINITY, e_c_kelvin: None }
    }

    pub fn with_environment(mut self, kappa: f64, r_env: f64, beta: f64) -> Self {
        self.kappa = kappa;
        self.r_env = r_env;
        self.beta = beta;
        self
    }

    pub fn with_t_ramp(mut self, t_ramp: f64) -> Self {
        self.t_ramp = t_ramp;
        self
    }

    pub fn validate(&self) -> Result<(), Error> {
        let bad = |name, value, reason| Err(Error::InvalidParam { name, value, reason });
        if !(self.eps > 0.0 && self.eps <= EPS_MAX) {
            return bad("eps", self.eps, "two-level regime requires 0 < eps <= 0.2");
        }
        if !(self.t_ramp > 0.0 && self.t_ramp.is_finite()) {
            return bad("t_ramp", self.t_ramp, "must be positive and finite");
        }
        if !(self.kappa >= 0.0 && self.kappa < 1.0) {
            return bad("kappa", self.kappa, "must lie in [0, 1)");
        }
        if !(self.r_env >= 0.0 && self.r_env.is_finite()) {
            return bad("r_env", self.r_env, "must be non-negative and finite");
        }
        if !(self.beta > 0.0) {
            return bad("beta", self.beta, "must be positive (use infinity for T = 0)");
        }
        if let Some(ec) = self.e_c_kelvin {
            if !(ec > 0.0 && ec.is_finite()) {
                return bad("e_c_kelvin", ec, "must be positive and finite");
            }
        }
        Ok(())
    }

    /// Landau-Zener adiabaticity `δ = ε² T / 2`.
    pub fn delta(&self) -> f64 {
        0.5 * self.eps * self.eps * self.t_ramp
    }

    /// Rough adiabatic parameter `χ = ħ / (2 T E_J)`.
    pub fn adiabatic_parameter(&self) -> f64 {
        1.0 / (4.0 * self.t_ramp * self.eps)
    }
}

/// Gate charge and its rate at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriveSample {
    pub q: f64,
    pub qdot: f64,
}

impl DriveSample {
    /// A frozen gate charge (no drive).
    pub fn frozen(q: f64) -> Self {
        Self { q, qdot: 0.0 }
    }
}

/// Linear ramp `q(t) = −1/2 + t/T`.
pub fn drive(t: f64, params: &ModelParams) -> Result<DriveSample, Error> {
    params.validate()?;
    let slack = 1e-12 * params.t_ramp;
    if !(t >= -slack && t <= params.t_ramp + slack) {
        return Err(Error::OutOfRamp { time: t, t_ramp: params.t_ramp });
    }
    Ok(drive_unchecked(t, params))
}

#[inline]
pub(crate) fn drive_unchecked(t: f64, params: &ModelParams) -> DriveSample {
    DriveSample { q: -0.5 + t / params.t_ramp, qdot: 1.0 / params.t_ramp }
}

/// Hamiltonian in units of `E_C`.
pub fn hamiltonian(sample: &DriveSample, eps: f64) -> Mat2 {
    Mat2::real(sample.q, -eps, -eps, -sample.q)
}

/// Power operator `∂H/∂t = E_C q̇ (𝟙 − 2n̂)` in units of `E_C²/ħ`.
pub fn power_operator(sample: &DriveSample) -> Mat2 {
    Mat2::real(sample.qdot, 0.0, 0.0, -sample.qdot)
}

/// `(H, P)` at one drive sample.
pub fn hamiltonian_and_power(sample: &DriveSample, params: &ModelParams) -> Result<(Mat2, Mat2), Error> {
    params.validate()?;
    if !sample.q.is_finite() || !sample.qdot.is_finite() {
        return Err(Error::NonFinite { what: "DriveSample" });
    }
    Ok((hamiltonian(sample, params.eps), power_operator(sample)))
}

/// Instantaneous eigen-decomposition of `H`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandStructure {
    /// Gap `ω₀` in units of `E_C/ħ`.
    pub omega0: f64,
    /// `η = q / √(q² + ε²)`.
    pub eta: f64,
    pub g: Vec2,
    pub e: Vec2,
}

impl BandStructure {
    pub fn energy_ground(&self) -> f64 {
        -0.5 * self.omega0
    }

    pub fn energy_excited(&self) -> f64 {
        0.5 * self.omega0
    }

    /// Unitary whose columns are `|g⟩, |e⟩`; maps adiabatic amplitudes to
    /// charge amplitudes.
    pub fn basis(&self) -> Mat2 {
        Mat2::from_rows([self.g.c0, self.e.c0], [self.g.c1, self.e.c1])
    }

    /// Charge-basis vector for adiabatic amplitudes `(a_g, a_e)`.
    pub fn to_charge(&self, a_g: Complex, a_e: Complex) -> Vec2 {
        self.g.scale(a_g) + self.e.scale(a_e)
    }
}

pub(crate) fn band_structure_unchecked(q: f64, eps: f64) -> BandStructure {
    let r = sqrt(q * q + eps * eps);
    let eta = q / r;
    let a = sqrt(0.5 * (1.0 - eta));
    let b = sqrt(0.5 * (1.0 + eta));
    BandStructure { omega0: 2.0 * r, eta, g: Vec2::real(a, b), e: Vec2::real(b, -a) }
}

/// `|g⟩ = (√(1−η)|0⟩ + √(1+η)|1⟩)/√2`, `|e⟩ = (√(1+η)|0⟩ − √(1−η)|1⟩)/√2`.
pub fn band_structure(sample: &DriveSample, params: &ModelParams) -> Result<BandStructure, Error> {
    params.validate()?;
    Ok(band_structure_unchecked(sample.q, params.eps))
}

/// Environment rates and the non-adiabatic drive element, all in `E_C/ħ`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RateBundle {
    /// Excitation `g → e`.
    pub gamma_ge: f64,
    /// Relaxation `e → g`.
    pub gamma_eg: f64,
    pub gamma_phi: f64,
    pub gamma_plus: f64,
    pub gamma_minus: f64,
    pub gamma_t_plus: f64,
    pub gamma_t_minus: f64,
    pub gamma_t0: f64,
    /// `Γ₀ = 2 m₂² S(0)`. Defined alongside the others but absent from the
    /// master equation.
    pub gamma_zero: f64,
    /// `v_ge = ε q̇ / (2(q² + ε²))`.
    pub v_ge: f64,
    /// Longitudinal coupling `m₁ = −η κ` (units of `e`).
    pub m1: f64,
    /// Transverse coupling `m₂ = √(1−η²) κ` (units of `e`).
    pub m2: f64,
}

impl RateBundle {
    /// `Γ_Σ = Γ_ge + Γ_eg`.
    pub fn gamma_sum(&self) -> f64 {
        self.gamma_ge + self.gamma_eg
    }
}

/// Normalized ohmic spectrum `s(ω) = 2ω / (1 − e^{−βω})`, `s(0) = 2/β`.
pub fn spectral_density(omega: f64, beta: f64) -> f64 {
    if beta.is_infinite() {
        return if omega > 0.0 { 2.0 * omega } else { 0.0 };
    }
    if omega == 0.0 {
        return 2.0 / beta;
    }
    2.0 * omega / -expm1(-beta * omega)
}

pub(crate) fn bath_rates_unchecked(sample: &DriveSample, params: &ModelParams) -> RateBundle {
    let (q, eps) = (sample.q, params.eps);
    let r2 = q * q + eps * eps;
    let r = sqrt(r2);
    let eta = q / r;
    let omega0 = 2.0 * r;
    let m1 = -eta * params.kappa;
    let m2 = (eps / r) * params.kappa;
    let s_plus = params.r_env * spectral_density(omega0, params.beta);
    let s_minus = params.r_env * spectral_density(-omega0, params.beta);
    let s_zero = params.r_env * spectral_density(0.0, params.beta);
    RateBundle {
        gamma_ge: m2 * m2 * s_minus,
        gamma_eg: m2 * m2 * s_plus,
        gamma_phi: 2.0 * m1 * m1 * s_zero,
        gamma_plus: m1 * m1 * s_plus,
        gamma_minus: m1 * m1 * s_minus,
        gamma_t_plus: m1 * m2 * s_plus,
        gamma_t_minus: m1 * m2 * s_minus,
        gamma_t0: 2.0 * m1 * m2 * s_zero,
        gamma_zero: 2.0 * m2 * m2 * s_zero,
        v_ge: 0.5 * eps / r2 * sample.qdot,
        m1,
        m2,
    }
}

/// Rates of the box master equation at one drive sample.
pub fn bath_rates(sample: &DriveSample, params: &ModelParams) -> Result<RateBundle, Error> {
    params.validate()?;
    if !sample.q.is_finite() || !sample.qdot.is_finite() {
        return Err(Error::NonFinite { what: "DriveSample" });
    }
    Ok(bath_rates_unchecked(sample, params))
}

/// `R_Q = ħ/e²` in ohms (CODATA exact SI values).
pub fn resistance_quantum_ohm() -> f64 {
    const HBAR: f64 = 1.054_571_817e-34;
    const E: f64 = 1.602_176_634e-19;
    HBAR / (E * E)
}
