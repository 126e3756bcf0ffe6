//! Unitary evolution of the box and its first two work moments.
//!
//! With `P = E_C q̇(𝟙 − 2n̂)` and `q̇ = 1/T`, the moments reduce to integrals
//! of the Heisenberg-picture number operator:
//!
//! ```text
//! ⟨W⟩  = E_C (1 − (2/T) ∫ ⟨n̂ᴴ(t)⟩ dt)
//! ⟨W²⟩ = 2E_C⟨W⟩ − E_C² [1 − (4/T²) ∫∫ ⟨n̂ᴴ(t₂) n̂ᴴ(t₁)⟩ dt₁ dt₂]
//! ```

use alloc::vec::Vec;

use crate::cpb::{band_structure_unchecked, drive_unchecked, hamiltonian, power_operator, ModelParams};
use crate::linalg::{cis, Complex, Mat2, Vec2};
use crate::lz::InitialState;
use crate::ode::rk4_sampled;
use crate::open::HeatLedger;
use crate::quad::trapezoid;
use crate::{Error, DEFAULT_DT};

/// Smallest accepted number of stored grid intervals.
pub const MIN_STEPS: usize = 1000;
/// Propagators further than this from unitarity abort the run.
pub const UNITARITY_ABORT: f64 = 1e-6;
/// `|W − ΔE|` tolerance for the closed-system first law.
pub const FIRST_LAW_TOL: f64 = 1e-4;

/// First and second moments of work, in `E_C` and `E_C²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WorkMoments {
    pub w1: f64,
    pub w2: f64,
    pub var: f64,
}

impl WorkMoments {
    pub fn new(w1: f64, w2: f64) -> Self {
        Self { w1, w2, var: w2 - w1 * w1 }
    }

    /// Weighted average over an incoherent mixture of pure-state runs.
    /// Weights are normalized here.
    pub fn mixture(parts: &[(f64, WorkMoments)]) -> Self {
        let total: f64 = parts.iter().map(|(w, _)| w).sum();
        let w1 = parts.iter().map(|(w, m)| w * m.w1).sum::<f64>() / total;
        let w2 = parts.iter().map(|(w, m)| w * m.w2).sum::<f64>() / total;
        Self::new(w1, w2)
    }
}

/// Time-evolution operators and states on a uniform grid over the ramp.
#[derive(Debug, Clone)]
pub struct PropagatorGrid {
    pub times: Vec<f64>,
    /// `U(t_k)` from `0` to `t_k`, charge basis.
    pub u: Vec<Mat2>,
    /// `U(t_k)|ψ₀⟩`.
    pub psi: Vec<Vec2>,
}

impl PropagatorGrid {
    pub fn duration(&self) -> f64 {
        *self.times.last().unwrap_or(&0.0)
    }

    pub fn spacing(&self) -> f64 {
        self.duration() / (self.times.len().max(2) - 1) as f64
    }

    /// Largest `‖U†U − 𝟙‖` on the grid.
    pub fn max_unitarity_defect(&self) -> f64 {
        self.u.iter().map(Mat2::unitarity_defect).fold(0.0, f64::max)
    }

    pub fn final_state(&self) -> Vec2 {
        *self.psi.last().expect("grid has at least one point")
    }
}

/// Propagates `iħ dU/dt = H(t)U` over the ramp with the default RK4 step.
pub fn propagate(params: &ModelParams, psi0: &Vec2, n_steps: usize) -> Result<PropagatorGrid, Error> {
    propagate_with_dt(params, psi0, n_steps, DEFAULT_DT)
}

/// As [`propagate`], with RK4 steps no longer than `max_dt`.
pub fn propagate_with_dt(
    params: &ModelParams,
    psi0: &Vec2,
    n_steps: usize,
    max_dt: f64,
) -> Result<PropagatorGrid, Error> {
    params.validate()?;
    let (eps, t_ramp) = (params.eps, params.t_ramp);
    // dU/dt = −i H U with H real: rows (r0, r1) ↦ (q r0 − ε r1, −ε r0 − q r1).
    let rhs = move |t: f64, y: &[f64; 8]| {
        let q = -0.5 + t / t_ramp;
        let mut hu = [0.0; 8];
        for k in 0..4 {
            hu[k] = q * y[k] - eps * y[k + 4];
            hu[k + 4] = -eps * y[k] - q * y[k + 4];
        }
        let mut d = [0.0; 8];
        for k in (0..8).step_by(2) {
            d[k] = hu[k + 1];
            d[k + 1] = -hu[k];
        }
        d
    };
    integrate_propagator(rhs, t_ramp, psi0, n_steps, max_dt)
}

/// Propagates under an arbitrary Hamiltonian `h(t)` (units of `E_C`) over
/// `[0, duration]`.
pub fn propagate_hamiltonian<F>(
    h: F,
    duration: f64,
    psi0: &Vec2,
    n_steps: usize,
    max_dt: f64,
) -> Result<PropagatorGrid, Error>
where
    F: Fn(f64) -> Mat2,
{
    let minus_i = Complex::new(0.0, -1.0);
    let rhs = move |t: f64, y: &[f64; 8]| (h(t) * Mat2::from_real(y)).scale(minus_i).to_real();
    integrate_propagator(rhs, duration, psi0, n_steps, max_dt)
}

fn integrate_propagator<F>(
    rhs: F,
    duration: f64,
    psi0: &Vec2,
    n_steps: usize,
    max_dt: f64,
) -> Result<PropagatorGrid, Error>
where
    F: FnMut(f64, &[f64; 8]) -> [f64; 8],
{
    psi0.check_finite()?;
    if (psi0.norm_sqr() - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidParam { name: "psi0", value: psi0.norm_sqr(), reason: "state must be normalized" });
    }
    if n_steps < MIN_STEPS {
        return Err(Error::InvalidParam {
            name: "n_steps",
            value: n_steps as f64,
            reason: "at least 1000 grid intervals are required",
        });
    }
    if !(max_dt > 0.0) {
        return Err(Error::InvalidParam { name: "dt", value: max_dt, reason: "must be positive" });
    }
    let h = duration / n_steps as f64;
    let substeps = libm::ceil(h / max_dt).max(1.0) as usize;
    let traj = rk4_sampled(rhs, Mat2::IDENTITY.to_real(), 0.0, duration, n_steps, substeps, |_, _| Ok(()))?;

    let mut u = Vec::with_capacity(traj.states.len());
    let mut psi = Vec::with_capacity(traj.states.len());
    for (t, y) in traj.times.iter().zip(&traj.states) {
        let m = Mat2::from_real(y);
        let drift = m.unitarity_defect();
        if drift > UNITARITY_ABORT {
            return Err(Error::Unitarity { time: *t, drift });
        }
        psi.push(m * *psi0);
        u.push(m);
    }
    Ok(PropagatorGrid { times: traj.times, u, psi })
}

fn check_grid(grid: &PropagatorGrid, params: &ModelParams) -> Result<(), Error> {
    params.validate()?;
    if grid.times.len() < 2 || grid.u.len() != grid.times.len() || grid.psi.len() != grid.times.len() {
        return Err(Error::InvalidParam { name: "grid", value: grid.times.len() as f64, reason: "inconsistent grid" });
    }
    if (grid.duration() - params.t_ramp).abs() > 1e-9 * params.t_ramp {
        return Err(Error::InvalidParam {
            name: "grid",
            value: grid.duration(),
            reason: "grid does not span the ramp of these parameters",
        });
    }
    Ok(())
}

/// `⟨n̂ᴴ(t_k)⟩` at every grid point.
pub fn number_expectation(grid: &PropagatorGrid) -> Vec<f64> {
    grid.psi.iter().map(|p| p.c1.norm_sqr()).collect()
}

/// `⟨W⟩` from the number operator (charge-basis formula).
fn work_from_number(grid: &PropagatorGrid, t_ramp: f64) -> f64 {
    1.0 - 2.0 / t_ramp * trapezoid(&number_expectation(grid), grid.spacing())
}

/// `∫₀ᵀ dt₂ ∫₀ᵀ dt₁ Re⟨n̂ᴴ(t₂)n̂ᴴ(t₁)⟩`, as twice the ordered-time triangle
/// with nested trapezoids.
///
/// The correlator factorizes: `⟨n̂ᴴ(t₂)n̂ᴴ(t₁)⟩ = a(t₂)†a(t₁)` with
/// `a(t) = ⟨1|ψ(t)⟩ · (⟨1|U(t)⟩)*`, so the inner integral is a running sum.
pub fn number_correlation_integral(grid: &PropagatorGrid) -> f64 {
    let h = grid.spacing();
    let a: Vec<[Complex; 2]> =
        grid.u.iter().zip(&grid.psi).map(|(u, p)| [p.c1 * u.m[1][0].conj(), p.c1 * u.m[1][1].conj()]).collect();
    let mut running = [Complex::new(0.0, 0.0); 2];
    let mut inner = Vec::with_capacity(a.len());
    for k in 0..a.len() {
        if k > 0 {
            for c in 0..2 {
                running[c] += (a[k - 1][c] + a[k][c]) * (0.5 * h);
            }
        }
        inner.push((a[k][0].conj() * running[0] + a[k][1].conj() * running[1]).re);
    }
    2.0 * trapezoid(&inner, h)
}

/// `⟨ψ₀|U†(t₂) n̂ U(t₂) U†(t₁) n̂ U(t₁)|ψ₀⟩` by explicit operator products.
pub fn number_correlator(grid: &PropagatorGrid, psi0: &Vec2, k2: usize, k1: usize) -> Complex {
    let n = Mat2::number();
    let (u2, u1) = (grid.u[k2], grid.u[k1]);
    let op = u2.adjoint() * n * u2 * u1.adjoint() * n * u1;
    op.expectation(psi0)
}

/// First and second work moments of a pure-state run.
pub fn work_moments(grid: &PropagatorGrid, psi0: &Vec2, params: &ModelParams) -> Result<WorkMoments, Error> {
    check_grid(grid, params)?;
    if (grid.psi[0] - *psi0).norm_sqr() > 1e-18 {
        return Err(Error::InvalidParam {
            name: "psi0",
            value: psi0.norm_sqr(),
            reason: "grid was built from another initial state",
        });
    }
    let t = params.t_ramp;
    let w1 = work_from_number(grid, t);
    let d = number_correlation_integral(grid);
    let w2 = 2.0 * w1 - (1.0 - 4.0 / (t * t) * d);
    Ok(WorkMoments::new(w1, w2))
}

/// `∫ ⟨ψ(t)|P(t)|ψ(t)⟩ dt`, the power-integral form of the average work.
pub fn power_work(grid: &PropagatorGrid, params: &ModelParams) -> Result<f64, Error> {
    check_grid(grid, params)?;
    let values: Vec<f64> = grid
        .times
        .iter()
        .zip(&grid.psi)
        .map(|(t, p)| power_operator(&drive_unchecked(*t, params)).expectation(p).re)
        .collect();
    Ok(trapezoid(&values, grid.spacing()))
}

/// `⟨W⟩ = ΔE`, `Q = 0` for unitary evolution.
pub fn first_law_closed(grid: &PropagatorGrid, psi0: &Vec2, params: &ModelParams) -> Result<HeatLedger, Error> {
    check_grid(grid, params)?;
    let energy = |t: f64, psi: &Vec2| hamiltonian(&drive_unchecked(t, params), params.eps).expectation(psi).re;
    let delta_e = energy(params.t_ramp, &grid.final_state()) - energy(0.0, psi0);
    let work = work_from_number(grid, params.t_ramp);
    let ledger = HeatLedger { work, delta_e, heat: 0.0 };
    let residual = ledger.residual().abs();
    if residual > FIRST_LAW_TOL {
        return Err(Error::FirstLaw { residual, tolerance: FIRST_LAW_TOL });
    }
    Ok(ledger)
}

/// Two-measurement generating function `Tr{U† e^{iuH(T)} U e^{−iuH(0)} ρ₀}`
/// for a run started in an eigenstate of `H(0)`.
pub fn generating_function(
    grid: &PropagatorGrid,
    params: &ModelParams,
    init: &InitialState,
    u: f64,
) -> Result<Complex, Error> {
    check_grid(grid, params)?;
    if !init.is_eigenstate() {
        return Err(Error::NotDiagonal { alpha: init.alpha });
    }
    let start = band_structure_unchecked(-0.5, params.eps);
    let end = band_structure_unchecked(0.5, params.eps);
    let e0 = if init.alpha == 1.0 { start.energy_ground() } else { start.energy_excited() };
    let psi = grid.final_state();
    let weights =
        [(end.g.inner(&psi).norm_sqr(), end.energy_ground()), (end.e.inner(&psi).norm_sqr(), end.energy_excited())];
    Ok(weights.iter().map(|(p, e)| cis(u * (e - e0)) * *p).sum())
}

/// Propagates from `init` and returns the grid with its work moments.
pub fn simulate(
    params: &ModelParams,
    init: &InitialState,
    n_steps: usize,
) -> Result<(PropagatorGrid, WorkMoments), Error> {
    let psi0 = init.to_charge_basis(params)?;
    let grid = propagate(params, &psi0, n_steps)?;
    let moments = work_moments(&grid, &psi0, params)?;
    Ok((grid, moments))
}
