use core::fmt;

/// Everything that can go wrong in the numerical core.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A matrix, vector or scalar had a NaN or infinite component.
    NonFinite { what: &'static str },
    /// A physical parameter is outside its admissible range.
    InvalidParam { name: &'static str, value: f64, reason: &'static str },
    /// The integrator produced a non-finite state.
    Diverged { time: f64 },
    /// The RK4 grid does not divide the interval evenly.
    GridMismatch { span: f64, dt: f64 },
    /// A time outside the ramp was requested.
    OutOfRamp { time: f64, t_ramp: f64 },
    /// The propagator drifted away from unitarity.
    Unitarity { time: f64, drift: f64 },
    /// Master-equation populations left the physical interval.
    Positivity { time: f64, rho_gg: f64 },
    /// A density matrix failed hermiticity, normalization or positivity.
    NotDensityMatrix { reason: &'static str },
    /// The initial state is not diagonal in the initial Hamiltonian.
    NotDiagonal { alpha: f64 },
    /// A relaxation rate vanished where the formula divides by it.
    ZeroRelaxation { q: f64 },
    /// First-law bookkeeping failed its tolerance.
    FirstLaw { residual: f64, tolerance: f64 },
    /// Two analytic routes that must agree did not.
    Mismatch { what: &'static str, lhs: f64, rhs: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NonFinite { what } => write!(f, "non-finite value in {what}"),
            Error::InvalidParam { name, value, reason } => {
                write!(f, "invalid {name} = {value}: {reason}")
            }
            Error::Diverged { time } => write!(f, "integration produced a non-finite state at t = {time}"),
            Error::GridMismatch { span, dt } => {
                write!(f, "interval length {span} is not an integer multiple of dt = {dt}")
            }
            Error::OutOfRamp { time, t_ramp } => {
                write!(f, "time {time} lies outside the ramp [0, {t_ramp}]")
            }
            Error::Unitarity { time, drift } => {
                write!(f, "propagator lost unitarity at t = {time} (drift {drift:e}); reduce the step size")
            }
            Error::Positivity { time, rho_gg } => {
                write!(f, "master-equation population rho_gg = {rho_gg} left [0, 1] at t = {time}")
            }
            Error::NotDensityMatrix { reason } => write!(f, "not a density matrix: {reason}"),
            Error::NotDiagonal { alpha } => {
                write!(f, "initial state with alpha = {alpha} is not the ground state of H(0)")
            }
            Error::ZeroRelaxation { q } => write!(f, "total relaxation rate vanishes at q = {q}"),
            Error::FirstLaw { residual, tolerance } => {
                write!(f, "first-law residual {residual:e} exceeds {tolerance:e}; integration is too coarse")
            }
            Error::Mismatch { what, lhs, rhs } => write!(f, "{what}: {lhs} != {rhs}"),
        }
    }
}

impl core::error::Error for Error {}
