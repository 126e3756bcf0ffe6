//! Instantaneous Landau-Zener model.
//!
//! The ramp is treated as adiabatic following everywhere except at the
//! degeneracy `t = T/2`, where a single transfer matrix mixes the adiabatic
//! states. Everything here is closed form; [`crate::closed`] provides the
//! exact numerical counterpart.
//!
//! Phase conventions follow the piecewise evolution formulas of the model
//! literally (ground amplitude `e^{−iξ}`, excited `e^{+iξ}` between
//! transitions), which is what makes the average work come out as
//! `(2α²−1)P + 2α√(1−α²)√(P(1−P)) cos(γ + φ + 2ξ₁)`.

use alloc::vec::Vec;
use core::f64::consts::PI;

use libm::{asinh, exp, log, sqrt};

use crate::closed::WorkMoments;
use crate::cpb::{band_structure_unchecked, ModelParams};
use crate::gamma::ln_gamma;
use crate::linalg::{cis, Complex, Mat2, Vec2};
use crate::quad::simpson;
use crate::Error;

/// `α|g(0)⟩ + √(1−α²) e^{iγ}|e(0)⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitialState {
    pub alpha: f64,
    pub gamma: f64,
}

impl InitialState {
    pub const GROUND: InitialState = InitialState { alpha: 1.0, gamma: 0.0 };
    pub const EXCITED: InitialState = InitialState { alpha: 0.0, gamma: 0.0 };

    pub fn new(alpha: f64, gamma: f64) -> Result<Self, Error> {
        let s = Self { alpha, gamma };
        s.validate()?;
        Ok(s)
    }

    /// Equal-weight superposition `(|g⟩ + e^{iγ}|e⟩)/√2`.
    pub fn balanced(gamma: f64) -> Self {
        Self { alpha: core::f64::consts::FRAC_1_SQRT_2, gamma }
    }

    pub fn validate(&self) -> Result<(), Error> {
        if !(0.0..=1.0).contains(&self.alpha) {
            return Err(Error::InvalidParam { name: "alpha", value: self.alpha, reason: "must lie in [0, 1]" });
        }
        if !self.gamma.is_finite() {
            return Err(Error::InvalidParam { name: "gamma", value: self.gamma, reason: "must be finite" });
        }
        Ok(())
    }

    /// `√(1−α²)`.
    pub fn beta(&self) -> f64 {
        sqrt((1.0 - self.alpha * self.alpha).max(0.0))
    }

    /// Amplitudes on `(|g(0)⟩, |e(0)⟩)`.
    pub fn amplitudes(&self) -> (Complex, Complex) {
        (Complex::new(self.alpha, 0.0), cis(self.gamma) * self.beta())
    }

    /// The state in the charge basis at the start of the ramp.
    pub fn to_charge_basis(&self, params: &ModelParams) -> Result<Vec2, Error> {
        params.validate()?;
        self.validate()?;
        let bs = band_structure_unchecked(-0.5, params.eps);
        let (a_g, a_e) = self.amplitudes();
        Ok(bs.to_charge(a_g, a_e))
    }

    /// True when the state has no coherence between `|g(0)⟩` and `|e(0)⟩`.
    pub fn is_eigenstate(&self) -> bool {
        self.alpha == 0.0 || self.alpha == 1.0
    }
}

/// Parameters of the instantaneous transition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LzParams {
    /// Adiabaticity `δ = ε² T / 2`.
    pub delta: f64,
    /// Transition probability `e^{−2πδ}`.
    pub p_lz: f64,
    /// Stokes phase `δ(ln δ − 1) + arg Γ(1 − iδ) − π/4`.
    pub phi: f64,
    /// Half the integrated gap over the first half of the ramp.
    pub xi1: f64,
    /// Half the integrated gap over the second half of the ramp.
    pub xi2: f64,
    pub eps: f64,
    pub t_ramp: f64,
}

/// `∫₀^q √(s² + ε²) ds` up to a constant: `[q√(q²+ε²) + ε² asinh(q/ε)]/2`.
fn gap_antiderivative(q: f64, eps: f64) -> f64 {
    0.5 * (q * sqrt(q * q + eps * eps) + eps * eps * asinh(q / eps))
}

/// Stokes phase for adiabaticity `δ`.
pub fn stokes_phase(delta: f64) -> f64 {
    let dlog = if delta > 0.0 { delta * (log(delta) - 1.0) } else { 0.0 };
    dlog + ln_gamma(Complex::new(1.0, -delta)).im - PI / 4.0
}

pub fn lz_parameters(params: &ModelParams) -> Result<LzParams, Error> {
    params.validate()?;
    let (eps, t) = (params.eps, params.t_ramp);
    let delta = params.delta();
    let half = t * (gap_antiderivative(0.0, eps) - gap_antiderivative(-0.5, eps));
    Ok(LzParams {
        delta,
        p_lz: exp(-2.0 * PI * delta),
        phi: stokes_phase(delta),
        xi1: half,
        xi2: t * (gap_antiderivative(0.5, eps) - gap_antiderivative(0.0, eps)),
        eps,
        t_ramp: t,
    })
}

/// Simpson estimate of `ξ₁ = ∫₀^{T/2} ω₀/2 dt`, independent of the
/// antiderivative.
pub fn xi1_quadrature(params: &ModelParams, n_nodes: usize) -> Result<f64, Error> {
    params.validate()?;
    let h = 0.5 / (n_nodes.max(2) - 1) as f64;
    let values: Vec<f64> = (0..n_nodes)
        .map(|i| {
            let q = -0.5 + i as f64 * h;
            sqrt(q * q + params.eps * params.eps)
        })
        .collect();
    Ok(params.t_ramp * simpson(&values, h)?)
}

impl LzParams {
    /// Transfer matrix in the basis `{|g(T/2)⟩, |e(T/2)⟩}`.
    pub fn transfer_matrix(&self) -> Mat2 {
        let c = sqrt(1.0 - self.p_lz);
        let s = sqrt(self.p_lz);
        Mat2::from_rows([cis(self.phi) * c, Complex::new(-s, 0.0)], [Complex::new(s, 0.0), cis(-self.phi) * c])
    }

    /// `ξ₁^t` for `t ≤ T/2`.
    pub fn xi1_at(&self, t: f64) -> f64 {
        let q = -0.5 + t / self.t_ramp;
        self.t_ramp * (gap_antiderivative(q, self.eps) - gap_antiderivative(-0.5, self.eps))
    }

    /// `ξ₂^t` for `t ≥ T/2`.
    pub fn xi2_at(&self, t: f64) -> f64 {
        let q = -0.5 + t / self.t_ramp;
        self.t_ramp * (gap_antiderivative(q, self.eps) - gap_antiderivative(0.0, self.eps))
    }

    /// Phase of the interference term in the average work, `γ + φ + 2ξ₁`.
    pub fn interference_phase(&self, init: &InitialState) -> f64 {
        init.gamma + self.phi + 2.0 * self.xi1
    }
}

/// Adiabatic-basis amplitudes `(a_g, a_e)` at time `t` under the
/// instantaneous-transition model.
pub fn evolve_instantaneous(lz: &LzParams, init: &InitialState, t: f64) -> Result<(Complex, Complex), Error> {
    init.validate()?;
    let slack = 1e-12 * lz.t_ramp;
    if !(t >= -slack && t <= lz.t_ramp + slack) {
        return Err(Error::OutOfRamp { time: t, t_ramp: lz.t_ramp });
    }
    let (alpha, beta, gamma) = (init.alpha, init.beta(), init.gamma);
    if t <= 0.5 * lz.t_ramp {
        let xi = lz.xi1_at(t);
        return Ok((cis(-xi) * alpha, cis(gamma + xi) * beta));
    }
    let (xi1, xi2) = (lz.xi1, lz.xi2_at(t));
    let c = sqrt(1.0 - lz.p_lz);
    let s = sqrt(lz.p_lz);
    let a_g = cis(-(xi1 + xi2 + lz.phi)) * (alpha * c) - cis(gamma + xi1 - xi2) * (beta * s);
    let a_e = cis(xi2 - xi1) * (alpha * s) + cis(gamma + xi1 + xi2 + lz.phi) * (beta * c);
    Ok((a_g, a_e))
}

/// Closed-form `⟨W⟩` and `⟨W²⟩ = P_LZ E_C²`.
pub fn work_stats_analytic(lz: &LzParams, init: &InitialState) -> Result<WorkMoments, Error> {
    init.validate()?;
    let p = lz.p_lz;
    let (alpha, beta) = (init.alpha, init.beta());
    let w1 = (2.0 * alpha * alpha - 1.0) * p
        + 2.0 * alpha * beta * sqrt((1.0 - p) * p) * libm::cos(lz.interference_phase(init));
    Ok(WorkMoments::new(w1, p))
}

/// Discrete work distribution as `(work, probability)` atoms.
#[derive(Debug, Clone, PartialEq)]
pub struct WorkDistribution {
    pub atoms: Vec<(f64, f64)>,
}

impl WorkDistribution {
    /// `Σ pᵢ Wᵢⁿ`.
    pub fn moment(&self, n: i32) -> f64 {
        self.atoms.iter().map(|(w, p)| p * libm::pow(*w, n as f64)).sum()
    }

    pub fn total_probability(&self) -> f64 {
        self.atoms.iter().map(|(_, p)| p).sum()
    }

    /// `G(u) = Σ pᵢ e^{iuWᵢ}`.
    pub fn characteristic(&self, u: f64) -> Complex {
        self.atoms.iter().map(|(w, p)| cis(u * w) * *p).sum()
    }
}

/// Work distribution and generating function `G(u) = 1 + P(e^{iuE_C} − 1)`
/// for a ramp started in the ground state.
pub fn work_distribution_ground(
    lz: &LzParams,
    init: &InitialState,
    u_samples: &[f64],
) -> Result<(WorkDistribution, Vec<Complex>), Error> {
    init.validate()?;
    if init.alpha != 1.0 {
        return Err(Error::NotDiagonal { alpha: init.alpha });
    }
    let p = lz.p_lz;
    let dist = WorkDistribution { atoms: alloc::vec![(0.0, 1.0 - p), (1.0, p)] };
    let g = u_samples.iter().map(|&u| Complex::new(1.0, 0.0) + (cis(u) - Complex::new(1.0, 0.0)) * p).collect();
    Ok((dist, g))
}

/// Charge-basis evaluation of the work moments with `η` replaced by its sign.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChargeOracle {
    /// `⟨n̂⟩` for `t < T/2`.
    pub n_before: f64,
    /// `⟨n̂⟩` for `t > T/2`.
    pub n_after: f64,
    /// `∫∫ Re⟨n̂ᴴ(t₂)n̂ᴴ(t₁)⟩` over `t₁ < t₂ < T/2`, `t₁ < T/2 < t₂`,
    /// `T/2 < t₁ < t₂`.
    pub contributions: [f64; 3],
    /// Sum of the three contributions (ordered-time triangle).
    pub triangle_integral: f64,
    pub w1: f64,
    pub w2: f64,
}

pub fn charge_basis_oracle(lz: &LzParams, init: &InitialState) -> Result<ChargeOracle, Error> {
    init.validate()?;
    let (p, t) = (lz.p_lz, lz.t_ramp);
    let (alpha, beta) = (init.alpha, init.beta());
    let a2 = alpha * alpha;
    let cos = libm::cos(lz.interference_phase(init));
    let coherent = alpha * beta * sqrt((1.0 - p) * p) * cos;

    let n_before = 1.0 - a2;
    let n_after = (1.0 - 2.0 * a2) * p + a2 - 2.0 * coherent;

    let contributions = [t * t / 8.0 * (1.0 - a2), t * t / 4.0 * ((1.0 - a2) * p - coherent), t * t / 8.0 * n_after];
    let triangle_integral = contributions.iter().sum::<f64>();

    let mean_n = 0.5 * t * (n_before + n_after);
    let w1 = 1.0 - 2.0 / t * mean_n;
    // The full square is twice the ordered-time triangle.
    let w2 = 2.0 * w1 - (1.0 - 4.0 / (t * t) * 2.0 * triangle_integral);

    let reference = work_stats_analytic(lz, init)?;
    for (what, lhs, rhs) in [("oracle <W>", w1, reference.w1), ("oracle <W^2>", w2, reference.w2)] {
        if (lhs - rhs).abs() > 1e-12 {
            return Err(Error::Mismatch { what, lhs, rhs });
        }
    }
    Ok(ChargeOracle { n_before, n_after, contributions, triangle_integral, w1, w2 })
}
