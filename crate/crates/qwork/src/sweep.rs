//! Sweep orchestration and CSV emission.

use std::fmt::Write as _;

use qwork_core::closed::{self, WorkMoments};
use qwork_core::lz::{self, work_distribution_ground, work_stats_analytic};
use qwork_core::open::{fast_relaxation_heat, integrate_open, weak_coupling_estimate};
use qwork_core::{BlochState, Complex, Error, InitialState, ModelParams};
use rayon::prelude::*;

use crate::config::{Initial, Mode, SweepConfig};
use crate::error::RunError;

pub const CLOSED_HEADER: &[&str] = &[
    "T_ramp",
    "W_over_Ec",
    "W2_over_Ec2",
    "var_over_Ec2",
    "dE_over_Ec",
    "analytic_W_over_Ec",
    "analytic_var_over_Ec2",
    "P_LZ",
];
pub const OPEN_HEADER: &[&str] =
    &["T_ramp_or_eps2", "W_over_Ec", "dE_over_Ec", "Q_over_Ec", "Q_over_W", "eq10_estimate", "eq11_estimate", "status"];
pub const LZ_HEADER: &[&str] = &["T_ramp", "delta", "P_LZ", "phi", "xi1", "W_over_Ec", "var_over_Ec2"];
pub const DISTRIBUTION_HEADER: &[&str] = &["W_over_Ec", "probability"];

/// A failed sweep point.
#[derive(Debug, Clone, PartialEq)]
pub struct PointFailure {
    pub axis_value: f64,
    pub code: &'static str,
    pub message: String,
}

#[derive(Debug, Clone)]
pub struct SweepOutput {
    pub csv: String,
    pub failures: Vec<PointFailure>,
}

/// Short stable code for a numerical failure.
pub fn error_code(e: &Error) -> &'static str {
    match e {
        Error::NonFinite { .. } => "non_finite",
        Error::InvalidParam { .. } => "invalid_param",
        Error::Diverged { .. } => "diverged",
        Error::GridMismatch { .. } => "grid_mismatch",
        Error::OutOfRamp { .. } => "out_of_ramp",
        Error::Unitarity { .. } => "unitarity",
        Error::Positivity { .. } => "positivity",
        Error::NotDensityMatrix { .. } => "not_density_matrix",
        Error::NotDiagonal { .. } => "not_diagonal",
        Error::ZeroRelaxation { .. } => "zero_relaxation",
        Error::FirstLaw { .. } => "first_law",
        Error::Mismatch { .. } => "mismatch",
    }
}

/// 12 significant digits in scientific notation.
pub fn format_number(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        format!("{x:.11e}")
    }
}

type Row = (Vec<f64>, Option<&'static str>);

fn closed_point(cfg: &SweepConfig, p: &ModelParams) -> Result<Vec<f64>, Error> {
    let lzp = lz::lz_parameters(p)?;
    let run = |init: &InitialState| -> Result<(WorkMoments, f64, WorkMoments), Error> {
        let psi0 = init.to_charge_basis(p)?;
        let grid = closed::propagate(p, &psi0, cfg.n_steps)?;
        let m = closed::work_moments(&grid, &psi0, p)?;
        let ledger = closed::first_law_closed(&grid, &psi0, p)?;
        Ok((m, ledger.delta_e, work_stats_analytic(&lzp, init)?))
    };
    let (m, de, a) = match cfg.initial {
        Initial::Pure(init) => run(&init)?,
        Initial::Mixture { ground_weight: w } => {
            let (mg, dg, ag) = run(&InitialState::GROUND)?;
            let (me, dx, ae) = run(&InitialState::EXCITED)?;
            (
                WorkMoments::mixture(&[(w, mg), (1.0 - w, me)]),
                w * dg + (1.0 - w) * dx,
                WorkMoments::mixture(&[(w, ag), (1.0 - w, ae)]),
            )
        }
    };
    Ok(vec![p.t_ramp, m.w1, m.w2, m.var, de, a.w1, a.var, lzp.p_lz])
}

fn open_point(cfg: &SweepConfig, p: &ModelParams, x: f64) -> Result<Vec<f64>, Error> {
    let rho0 = match cfg.rho_gg0 {
        Some(g) => BlochState::new(g, Complex::new(0.0, 0.0))?,
        None => BlochState::thermal(-0.5, p.eps, p.beta),
    };
    let run = integrate_open(p, &rho0, cfg.n_steps)?;
    let l = run.ledger;
    let eq10 = weak_coupling_estimate(p)?.heat_over_work;
    // Undefined at zero temperature or without relaxation.
    let eq11 = fast_relaxation_heat(p, cfg.n_quad).map(|f| f.heat).unwrap_or(f64::NAN);
    let ratio = if l.work != 0.0 { l.heat / l.work } else { f64::NAN };
    Ok(vec![x, l.work, l.delta_e, l.heat, ratio, eq10, eq11])
}

fn lz_point(cfg: &SweepConfig, p: &ModelParams) -> Result<Vec<f64>, Error> {
    let lzp = lz::lz_parameters(p)?;
    let init = match cfg.initial {
        Initial::Pure(init) => init,
        Initial::Mixture { .. } => unreachable!("rejected by the config parser"),
    };
    let m = work_stats_analytic(&lzp, &init)?;
    Ok(vec![p.t_ramp, lzp.delta, lzp.p_lz, lzp.phi, lzp.xi1, m.w1, m.var])
}

fn header(mode: Mode) -> &'static [&'static str] {
    match mode {
        Mode::ClosedSweep => CLOSED_HEADER,
        Mode::OpenSweep => OPEN_HEADER,
        Mode::LzAnalytic => LZ_HEADER,
        Mode::Distribution => DISTRIBUTION_HEADER,
    }
}

fn compute_rows(cfg: &SweepConfig) -> Result<(Vec<Row>, Vec<PointFailure>), Error> {
    if cfg.mode == Mode::Distribution {
        let lzp = lz::lz_parameters(&cfg.params)?;
        let init = match cfg.initial {
            Initial::Pure(init) => init,
            Initial::Mixture { .. } => unreachable!("rejected by the config parser"),
        };
        let (dist, _) = work_distribution_ground(&lzp, &init, &[])?;
        let rows = dist.atoms.iter().map(|(w, p)| (vec![*w, *p], None)).collect();
        return Ok((rows, Vec::new()));
    }
    let axis = cfg.axis.expect("sweep modes always carry an axis");
    let columns = header(cfg.mode).len() - usize::from(cfg.mode == Mode::OpenSweep);
    let results: Vec<(f64, Result<Vec<f64>, Error>)> = axis
        .points()
        .into_par_iter()
        .map(|x| {
            let p = axis.apply(&cfg.params, x);
            let r = match cfg.mode {
                Mode::ClosedSweep => closed_point(cfg, &p),
                Mode::OpenSweep => open_point(cfg, &p, x),
                Mode::LzAnalytic => lz_point(cfg, &p),
                Mode::Distribution => unreachable!(),
            };
            (x, r)
        })
        .collect();

    let mut rows = Vec::with_capacity(results.len());
    let mut failures = Vec::new();
    for (x, r) in results {
        match r {
            Ok(v) => rows.push((v, Some("ok"))),
            Err(e) => {
                let code = error_code(&e);
                let mut v = vec![f64::NAN; columns];
                v[0] = x;
                rows.push((v, Some(code)));
                failures.push(PointFailure { axis_value: x, code, message: e.to_string() });
            }
        }
    }
    Ok((rows, failures))
}

/// Runs every sweep point on `workers` threads (all cores when `None`) and
/// renders the CSV. Output is independent of the worker count.
pub fn run_sweep(cfg: &SweepConfig, workers: Option<usize>) -> Result<SweepOutput, RunError> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(workers.unwrap_or(0)).build()?;
    let (rows, failures) = pool.install(|| compute_rows(cfg)).map_err(RunError::Numerics)?;

    let mut csv = String::new();
    let _ = writeln!(csv, "# qwork {} {}", env!("CARGO_PKG_VERSION"), cfg.mode);
    for line in cfg.echo().lines() {
        let _ = writeln!(csv, "# {line}");
    }
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    let cols = header(cfg.mode);
    w.write_record(cols).expect("writing to memory");
    let with_status = cols.last() == Some(&"status");
    for (values, status) in rows {
        let mut record: Vec<String> = values.iter().map(|v| format_number(*v)).collect();
        if with_status {
            record.push(status.unwrap_or("ok").to_string());
        }
        w.write_record(&record).expect("writing to memory");
    }
    let bytes = w.into_inner().expect("flushing to memory");
    csv.push_str(std::str::from_utf8(&bytes).expect("CSV is ASCII"));
    Ok(SweepOutput { csv, failures })
}
