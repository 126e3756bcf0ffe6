//! Work statistics and heat for a Cooper-pair box driven through a
//! Landau-Zener avoided crossing.
//!
//! Everything here is expressed in normalized units: energies in the charging
//! energy `E_C`, times in `ħ/E_C`, rates in `E_C/ħ`. The crate is `no_std`
//! (it needs `alloc` for trajectories); file formats and the command line
//! live in the `qwork` crate.
//!
//! Layout:
//! - [`linalg`], [`ode`], [`quad`]: 2×2 complex algebra, fixed-step RK4,
//!   trapezoid/Simpson rules.
//! - [`cpb`]: drive protocol, Hamiltonian, adiabatic basis, bath rates.
//! - [`closed`]: unitary propagation and the first two work moments.
//! - [`lz`]: the instantaneous Landau-Zener model in closed form.
//! - [`open`]: master-equation dynamics, heat, and the two heat estimates.
#![no_std]
// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod closed;
pub mod cpb;
mod error;
pub mod gamma;
pub mod linalg;
pub mod lz;
pub mod ode;
pub mod open;
pub mod quad;

pub use error::Error;

pub use closed::{PropagatorGrid, WorkMoments};
pub use cpb::{BandStructure, DriveSample, ModelParams, RateBundle};
pub use linalg::{Complex, DensityMatrix, Mat2, Vec2};
pub use lz::{InitialState, LzParams, WorkDistribution};
pub use open::{BlochState, HeatLedger};

/// Default RK4 step in units of `ħ/E_C`.
pub const DEFAULT_DT: f64 = 5e-4;

/// Default number of stored grid intervals per ramp.
pub const DEFAULT_GRID: usize = 4000;
