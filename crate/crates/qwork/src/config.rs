//! Flat `key = value` sweep configuration (TOML syntax, no tables).
//!
//! Physical inputs (`resistance_ohm`, `temperature_k` with `e_c_kelvin`) are
//! converted to normalized units here and nowhere else.

use std::fmt::{self, Write as _};

use qwork_core::cpb::{resistance_quantum_ohm, EPS_MAX};
use qwork_core::{InitialState, ModelParams, DEFAULT_GRID};
use toml::{Table, Value};

use crate::error::ConfigError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Mode {
    ClosedSweep,
    OpenSweep,
    LzAnalytic,
    Distribution,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::ClosedSweep => "closed-sweep",
            Mode::OpenSweep => "open-sweep",
            Mode::LzAnalytic => "lz-analytic",
            Mode::Distribution => "distribution",
        }
    }

    fn from_name(s: &str) -> Option<Self> {
        [Mode::ClosedSweep, Mode::OpenSweep, Mode::LzAnalytic, Mode::Distribution].into_iter().find(|m| m.name() == s)
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxisKind {
    TRamp,
    EpsSquared,
}

impl AxisKind {
    pub fn name(self) -> &'static str {
        match self {
            AxisKind::TRamp => "t_ramp",
            AxisKind::EpsSquared => "eps_squared",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub kind: AxisKind,
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl Axis {
    /// Evenly spaced points, ascending, endpoints included.
    pub fn points(&self) -> Vec<f64> {
        let n = self.count;
        (0..n)
            .map(|i| if i + 1 == n { self.max } else { self.min + (self.max - self.min) * i as f64 / (n - 1) as f64 })
            .collect()
    }

    /// Model parameters at one axis value.
    pub fn apply(&self, base: &ModelParams, value: f64) -> ModelParams {
        match self.kind {
            AxisKind::TRamp => base.with_t_ramp(value),
            AxisKind::EpsSquared => ModelParams { eps: value.sqrt(), ..*base },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Initial {
    Pure(InitialState),
    /// Incoherent mixture of `|g(0)⟩` (this weight) and `|e(0)⟩`.
    Mixture {
        ground_weight: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub mode: Mode,
    /// Parameters shared by every point; the axis overrides one of them.
    pub params: ModelParams,
    pub initial: Initial,
    pub axis: Option<Axis>,
    pub n_steps: usize,
    /// Simpson nodes for the fast-relaxation quadrature (open-sweep).
    pub n_quad: usize,
    /// Initial ground population for open runs; thermal at `q = −1/2` when
    /// absent.
    pub rho_gg0: Option<f64>,
}

const KEYS: &[&str] = &[
    "mode",
    "eps",
    "t_ramp",
    "axis",
    "axis_min",
    "axis_max",
    "axis_count",
    "alpha",
    "gamma",
    "mixture_ground_weight",
    "kappa",
    "r_env",
    "resistance_ohm",
    "beta",
    "temperature_k",
    "e_c_kelvin",
    "n_steps",
    "n_quad",
    "rho_gg0",
];

struct Reader {
    table: Table,
    problems: Vec<String>,
}

impl Reader {
    fn has(&self, key: &str) -> bool {
        self.table.contains_key(key)
    }

    fn float(&mut self, key: &str) -> Option<f64> {
        match self.table.get(key)? {
            Value::Float(f) => Some(*f),
            Value::Integer(i) => Some(*i as f64),
            other => {
                self.problems.push(format!("{key}: expected a number, found {}", other.type_str()));
                None
            }
        }
    }

    fn count(&mut self, key: &str) -> Option<usize> {
        match self.table.get(key)? {
            Value::Integer(i) if *i >= 0 => Some(*i as usize),
            other => {
                self.problems.push(format!("{key}: expected a non-negative integer, found {other}"));
                None
            }
        }
    }

    fn string(&mut self, key: &str) -> Option<String> {
        match self.table.get(key)? {
            Value::String(s) => Some(s.clone()),
            other => {
                self.problems.push(format!("{key}: expected a string, found {}", other.type_str()));
                None
            }
        }
    }

    fn require_float(&mut self, key: &str) -> Option<f64> {
        if !self.has(key) {
            self.problems.push(format!("{key}: required"));
            return None;
        }
        self.float(key)
    }

    fn forbid(&mut self, key: &str, why: &str) {
        if self.has(key) {
            self.problems.push(format!("{key}: {why}"));
        }
    }

    fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        if !ok {
            self.problems.push(msg());
        }
    }
}

/// Parses and validates a configuration for `mode`. Every problem found is
/// reported together.
pub fn parse_config(text: &str, mode: Mode) -> Result<SweepConfig, ConfigError> {
    let table: Table = toml::from_str(text).map_err(|e| ConfigError::new(vec![format!("syntax: {}", e.message())]))?;
    let mut r = Reader { table, problems: Vec::new() };

    let unknown: Vec<String> = r.table.keys().filter(|k| !KEYS.contains(&k.as_str())).cloned().collect();
    for k in unknown {
        r.problems.push(format!("{k}: unknown key"));
    }
    if let Some(m) = r.string("mode") {
        match Mode::from_name(&m) {
            Some(found) if found == mode => {}
            Some(found) => r.problems.push(format!("mode: file says {found} but {mode} was requested")),
            None => r.problems.push(format!("mode: unknown mode {m:?}")),
        }
    }

    // Axis.
    let axis = if mode == Mode::Distribution {
        for k in ["axis", "axis_min", "axis_max", "axis_count"] {
            r.forbid(k, "distribution mode has no sweep axis");
        }
        None
    } else {
        let kind = match r.string("axis").as_deref() {
            None if !r.has("axis") => {
                r.problems.push("axis: required".into());
                None
            }
            None => None,
            Some("t_ramp") => Some(AxisKind::TRamp),
            Some("eps_squared") => Some(AxisKind::EpsSquared),
            Some(other) => {
                r.problems.push(format!("axis: expected \"t_ramp\" or \"eps_squared\", found {other:?}"));
                None
            }
        };
        if kind == Some(AxisKind::EpsSquared) && mode != Mode::OpenSweep {
            r.problems.push(format!("axis: {mode} sweeps only along t_ramp"));
        }
        let min = r.require_float("axis_min");
        let max = r.require_float("axis_max");
        let count = if r.has("axis_count") {
            r.count("axis_count")
        } else {
            r.problems.push("axis_count: required".into());
            None
        };
        if let Some(c) = count {
            r.check(c >= 2, || format!("axis_count: must be at least 2, found {c}"));
        }
        if let (Some(lo), Some(hi)) = (min, max) {
            r.check(lo > 0.0 && hi > 0.0, || format!("axis_min/axis_max: must be positive, found {lo} and {hi}"));
            r.check(lo < hi, || format!("axis_min/axis_max: need axis_min < axis_max, found {lo} and {hi}"));
            if kind == Some(AxisKind::EpsSquared) {
                r.check(hi <= EPS_MAX * EPS_MAX, || {
                    format!("axis_max: eps^2 = {hi} exceeds the two-level bound {}", EPS_MAX * EPS_MAX)
                });
            }
        }
        match (kind, min, max, count) {
            (Some(kind), Some(min), Some(max), Some(count)) => Some(Axis { kind, min, max, count }),
            _ => None,
        }
    };
    let axis_kind = axis.map(|a| a.kind).or(match r.table.get("axis") {
        Some(Value::String(s)) if s == "eps_squared" => Some(AxisKind::EpsSquared),
        Some(_) => Some(AxisKind::TRamp),
        None => None,
    });

    // Base protocol; the swept quantity must not also be fixed.
    let eps = if axis_kind == Some(AxisKind::EpsSquared) {
        r.forbid("eps", "set by the eps_squared axis");
        Some(0.1)
    } else {
        r.require_float("eps")
    };
    let t_ramp = if axis_kind == Some(AxisKind::TRamp) {
        r.forbid("t_ramp", "set by the t_ramp axis");
        Some(1.0)
    } else {
        r.require_float("t_ramp")
    };
    if let Some(e) = eps {
        r.check(e > 0.0 && e <= EPS_MAX, || format!("eps: {e} outside (0, {EPS_MAX}] where the two-level model holds"));
    }
    if let Some(t) = t_ramp {
        r.check(t > 0.0 && t.is_finite(), || format!("t_ramp: must be positive, found {t}"));
    }

    // Initial state.
    let initial = if r.has("mixture_ground_weight") {
        r.forbid("alpha", "cannot be combined with mixture_ground_weight");
        r.forbid("gamma", "cannot be combined with mixture_ground_weight");
        if mode != Mode::ClosedSweep {
            r.problems.push(format!("mixture_ground_weight: only used by closed-sweep, not {mode}"));
        }
        let w = r.float("mixture_ground_weight").unwrap_or(1.0);
        r.check((0.0..=1.0).contains(&w), || format!("mixture_ground_weight: must lie in [0, 1], found {w}"));
        Initial::Mixture { ground_weight: w }
    } else if mode == Mode::OpenSweep {
        r.forbid("alpha", "open-sweep starts from a diagonal state, see rho_gg0");
        r.forbid("gamma", "open-sweep starts from a diagonal state, see rho_gg0");
        Initial::Pure(InitialState::GROUND)
    } else {
        let alpha = r.float("alpha").unwrap_or(1.0);
        let gamma = r.float("gamma").unwrap_or(0.0);
        r.check((0.0..=1.0).contains(&alpha), || format!("alpha: must lie in [0, 1], found {alpha}"));
        r.check(gamma.is_finite(), || format!("gamma: must be finite, found {gamma}"));
        if mode == Mode::Distribution {
            r.check(alpha == 1.0, || {
                format!("alpha: distribution mode needs a ground-state start (alpha = 1), found {alpha}")
            });
        }
        Initial::Pure(InitialState { alpha, gamma })
    };

    // Environment.
    let mut kappa = 0.0;
    let mut r_env = 0.0;
    let mut beta = f64::INFINITY;
    let mut e_c_kelvin = None;
    let mut rho_gg0 = None;
    if mode == Mode::OpenSweep {
        if let Some(k) = r.require_float("kappa") {
            r.check((0.0..1.0).contains(&k), || format!("kappa: must lie in [0, 1), found {k}"));
            kappa = k;
        }
        match (r.has("r_env"), r.has("resistance_ohm")) {
            (true, true) => r.problems.push("r_env/resistance_ohm: give only one".into()),
            (false, false) => r.problems.push("r_env or resistance_ohm: required".into()),
            (true, false) => r_env = r.float("r_env").unwrap_or(0.0),
            (false, true) => r_env = r.float("resistance_ohm").unwrap_or(0.0) / resistance_quantum_ohm(),
        }
        r.check(r_env >= 0.0 && r_env.is_finite(), || format!("r_env: must be non-negative, found {r_env}"));
        e_c_kelvin = r.float("e_c_kelvin");
        if let Some(ec) = e_c_kelvin {
            r.check(ec > 0.0, || format!("e_c_kelvin: must be positive, found {ec}"));
        }
        match (r.has("beta"), r.has("temperature_k")) {
            (true, true) => r.problems.push("beta/temperature_k: give only one".into()),
            (false, false) => r.problems.push("beta or temperature_k: required".into()),
            (true, false) => beta = r.float("beta").unwrap_or(f64::INFINITY),
            (false, true) => {
                let t = r.float("temperature_k").unwrap_or(0.0);
                r.check(t >= 0.0, || format!("temperature_k: must be non-negative, found {t}"));
                match e_c_kelvin {
                    Some(ec) if t > 0.0 => beta = ec / t,
                    Some(_) => beta = f64::INFINITY,
                    None => r.problems.push("e_c_kelvin: required with temperature_k".into()),
                }
            }
        }
        r.check(beta > 0.0, || format!("beta: must be positive, found {beta}"));
        rho_gg0 = r.float("rho_gg0");
        if let Some(g) = rho_gg0 {
            r.check((0.0..=1.0).contains(&g), || format!("rho_gg0: must lie in [0, 1], found {g}"));
        }
    } else {
        for k in ["kappa", "r_env", "resistance_ohm", "beta", "temperature_k", "e_c_kelvin", "rho_gg0", "n_quad"] {
            r.forbid(k, &format!("not used by {mode}"));
        }
    }

    let n_steps = r.count("n_steps").unwrap_or(DEFAULT_GRID);
    r.check(n_steps >= 1000, || format!("n_steps: at least 1000 required, found {n_steps}"));
    let n_quad = r.count("n_quad").unwrap_or(qwork_core::open::DEFAULT_QUAD_NODES);
    r.check(n_quad >= 3 && n_quad % 2 == 1, || format!("n_quad: must be odd and at least 3, found {n_quad}"));

    if !r.problems.is_empty() {
        return Err(ConfigError::new(r.problems));
    }
    let params = ModelParams { eps: eps.unwrap_or(0.1), t_ramp: t_ramp.unwrap_or(1.0), kappa, r_env, beta, e_c_kelvin };
    Ok(SweepConfig { mode, params, initial, axis, n_steps, n_quad, rho_gg0 })
}

fn num(x: f64) -> String {
    if x.is_infinite() {
        if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        format!("{x:?}")
    }
}

impl SweepConfig {
    /// Normalized configuration text; parsing it back gives an equal config.
    pub fn echo(&self) -> String {
        let mut s = String::new();
        let mut line = |k: &str, v: String| {
            let _ = writeln!(s, "{k} = {v}");
        };
        line("mode", format!("{:?}", self.mode.name()));
        if let Some(a) = self.axis {
            line("axis", format!("{:?}", a.kind.name()));
            line("axis_min", num(a.min));
            line("axis_max", num(a.max));
            line("axis_count", a.count.to_string());
        }
        let kind = self.axis.map(|a| a.kind);
        if kind != Some(AxisKind::EpsSquared) {
            line("eps", num(self.params.eps));
        }
        if kind != Some(AxisKind::TRamp) {
            line("t_ramp", num(self.params.t_ramp));
        }
        match self.initial {
            _ if self.mode == Mode::OpenSweep => {}
            Initial::Pure(init) => {
                line("alpha", num(init.alpha));
                line("gamma", num(init.gamma));
            }
            Initial::Mixture { ground_weight } => line("mixture_ground_weight", num(ground_weight)),
        }
        if self.mode == Mode::OpenSweep {
            line("kappa", num(self.params.kappa));
            line("r_env", num(self.params.r_env));
            line("beta", num(self.params.beta));
            if let Some(ec) = self.params.e_c_kelvin {
                line("e_c_kelvin", num(ec));
            }
            if let Some(g) = self.rho_gg0 {
                line("rho_gg0", num(g));
            }
            line("n_quad", self.n_quad.to_string());
        }
        line("n_steps", self.n_steps.to_string());
        s
    }
}
