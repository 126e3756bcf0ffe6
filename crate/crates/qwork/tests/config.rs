use qwork::{parse_config, AxisKind, Initial, Mode};

const CLOSED: &str = r#"
# ground-state sweep
axis = "t_ramp"
axis_min = 10.0
axis_max = 400.0
axis_count = 40
eps = 0.05
"#;

const OPEN: &str = r#"
axis = "eps_squared"
axis_min = 0.0005
axis_max = 0.0025
axis_count = 9
t_ramp = 100
kappa = 0.05
resistance_ohm = 10000
temperature_k = 0.0
e_c_kelvin = 1.0
rho_gg0 = 1.0
"#;

fn problems(text: &str, mode: Mode) -> Vec<String> {
    parse_config(text, mode).unwrap_err().problems
}

#[test]
fn resistance_is_normalized() {
    let cfg = parse_config(OPEN, Mode::OpenSweep).unwrap();
    assert!((cfg.params.r_env - 2.4341).abs() < 1e-4);
    assert_eq!(cfg.params.beta, f64::INFINITY);
    assert_eq!(cfg.axis.unwrap().kind, AxisKind::EpsSquared);
}

#[test]
fn temperature_is_normalized() {
    let text = OPEN.replace("temperature_k = 0.0", "temperature_k = 0.1");
    let cfg = parse_config(&text, Mode::OpenSweep).unwrap();
    assert!((cfg.params.beta - 10.0).abs() < 1e-12);
}

#[test]
fn defaults_for_closed_sweep() {
    let cfg = parse_config(CLOSED, Mode::ClosedSweep).unwrap();
    assert_eq!(cfg.n_steps, 4000);
    assert_eq!(cfg.initial, Initial::Pure(qwork_core::InitialState::GROUND));
    assert_eq!(cfg.axis.unwrap().points().len(), 40);
}

#[test]
fn echo_round_trips() {
    let texts = [
        (CLOSED.to_string(), Mode::ClosedSweep),
        (CLOSED.to_string() + "mixture_ground_weight = 0.3\n", Mode::ClosedSweep),
        (CLOSED.replace("eps = 0.05", "eps = 0.1\nalpha = 0.6\ngamma = -1.25"), Mode::LzAnalytic),
        (OPEN.to_string(), Mode::OpenSweep),
        (OPEN.replace("temperature_k = 0.0", "temperature_k = 0.3"), Mode::OpenSweep),
        ("eps = 0.05\nt_ramp = 200.0\n".to_string(), Mode::Distribution),
    ];
    for (text, mode) in texts {
        let cfg = parse_config(&text, mode).unwrap();
        let again = parse_config(&cfg.echo(), mode).unwrap();
        assert_eq!(cfg, again, "{}", cfg.echo());
        assert_eq!(cfg.echo(), again.echo());
    }
}

#[test]
fn eps_above_two_level_bound_rejected() {
    let p = problems(&CLOSED.replace("eps = 0.05", "eps = 0.3"), Mode::ClosedSweep);
    assert_eq!(p.len(), 1);
    assert!(p[0].starts_with("eps:"));
}

#[test]
fn empty_document_lists_required_keys() {
    let p = problems("", Mode::OpenSweep);
    for key in
        ["axis", "axis_min", "axis_max", "axis_count", "kappa", "r_env or resistance_ohm", "beta or temperature_k"]
    {
        assert!(p.iter().any(|m| m.starts_with(&format!("{key}:"))), "{key} missing from {p:?}");
    }
    let p = problems("", Mode::Distribution);
    assert!(p.iter().any(|m| m.starts_with("eps:")));
    assert!(p.iter().any(|m| m.starts_with("t_ramp:")));
}

#[test]
fn every_problem_reported_at_once() {
    let text = CLOSED.replace("eps = 0.05", "eps = 0.3\nepsilon = 0.1\nalpha = 2.0") + "axis_count = 1\n";
    // Duplicate key is a syntax error; check the others separately.
    assert!(parse_config(&text, Mode::ClosedSweep).is_err());
    let text = CLOSED
        .replace("eps = 0.05", "eps = 0.3\nepsilon = 0.1\nalpha = 2.0")
        .replace("axis_count = 40", "axis_count = 1");
    let p = problems(&text, Mode::ClosedSweep);
    assert_eq!(p.len(), 4, "{p:?}");
    assert!(p.iter().any(|m| m == "epsilon: unknown key"));
}

#[test]
fn conflicting_keys_rejected() {
    let both = OPEN.replace("resistance_ohm = 10000", "resistance_ohm = 10000\nr_env = 2.0");
    assert!(problems(&both, Mode::OpenSweep).iter().any(|m| m.contains("give only one")));
    let swept = CLOSED.to_string() + "t_ramp = 5.0\n";
    assert!(problems(&swept, Mode::ClosedSweep).iter().any(|m| m.starts_with("t_ramp:")));
    let no_ec = OPEN.replace("e_c_kelvin = 1.0", "");
    assert!(problems(&no_ec, Mode::OpenSweep).iter().any(|m| m.starts_with("e_c_kelvin:")));
    let wrong_mode = CLOSED.to_string() + "mode = \"open-sweep\"\n";
    assert!(problems(&wrong_mode, Mode::ClosedSweep).iter().any(|m| m.starts_with("mode:")));
    let excited = "eps = 0.05\nt_ramp = 200.0\nalpha = 0.0\n";
    assert!(problems(excited, Mode::Distribution).iter().any(|m| m.starts_with("alpha:")));
}

#[test]
fn syntax_errors_are_config_errors() {
    let p = problems("eps = = 1", Mode::Distribution);
    assert!(p[0].starts_with("syntax:"));
}

mod round_trip {
    use proptest::prelude::*;
    use qwork::{parse_config, Mode};

    proptest! {
        #[test]
        fn closed_configs(
            eps in 1e-3f64..0.2, lo in 1e-2f64..100.0, span in 1e-3f64..1e3, count in 2usize..500,
            alpha in 0.0f64..=1.0, gamma in -10.0f64..10.0, n_steps in 1000usize..100_000,
        ) {
            let text = format!(
                "axis = \"t_ramp\"\naxis_min = {lo:?}\naxis_max = {:?}\naxis_count = {count}\neps = {eps:?}\nalpha = {alpha:?}\ngamma = {gamma:?}\nn_steps = {n_steps}\n",
                lo + span
            );
            let cfg = parse_config(&text, Mode::ClosedSweep).unwrap();
            prop_assert_eq!(parse_config(&cfg.echo(), Mode::ClosedSweep).unwrap(), cfg);
        }

        #[test]
        fn open_configs(
            t in 1.0f64..1e4, lo in 1e-6f64..1e-2, span in 1e-6f64..0.02, kappa in 0.0f64..0.99,
            ohm in 0.0f64..1e6, temp in 0.0f64..5.0, ec in 0.1f64..5.0, gg in proptest::option::of(0.0f64..=1.0),
        ) {
            let mut text = format!(
                "axis = \"eps_squared\"\naxis_min = {lo:?}\naxis_max = {:?}\naxis_count = 5\nt_ramp = {t:?}\nkappa = {kappa:?}\nresistance_ohm = {ohm:?}\ntemperature_k = {temp:?}\ne_c_kelvin = {ec:?}\n",
                lo + span
            );
            if let Some(g) = gg {
                text.push_str(&format!("rho_gg0 = {g:?}\n"));
            }
            let cfg = parse_config(&text, Mode::OpenSweep).unwrap();
            prop_assert_eq!(parse_config(&cfg.echo(), Mode::OpenSweep).unwrap(), cfg);
        }
    }
}
