//! Built-in configurations, selectable by name wherever a config path is
//! accepted.

use crate::config::{
    Diagnostics, Expectations, GridConfig, InitialData, RunConfig, Schedule, WindowConfig, SCHEMA_VERSION,
};

pub const NAMES: [&str; 4] = ["soliton-translate", "identity-audit", "gaussian-decay", "virial-gaussian"];

fn gaussian() -> InitialData {
    InitialData::Gaussian {
        amplitude: 1.0,
        width: 5.0,
        center: 0.0,
    }
}

pub fn builtin(name: &str) -> Option<RunConfig> {
    let base = |alpha: f64, n: usize, length: f64, dt: f64, t_end: f64| RunConfig {
        version: SCHEMA_VERSION,
        scenario: name.to_string(),
        alpha,
        grid: GridConfig { n, length },
        dt,
        t_end,
        dealias: true,
        initial: gaussian(),
        window: WindowConfig::default(),
        schedule: Schedule::Uniform {
            dt_sample: 1.0,
            start: 0.0,
        },
        diagnostics: Diagnostics::default(),
        expect: Expectations::default(),
        output: name.to_string(),
        seed: 0,
    };
    let cfg = match name {
        // KdV soliton over ten time units.
        "soliton-translate" => RunConfig {
            initial: InitialData::Soliton {
                speed: 1.0,
                center: 0.0,
                tol: 1e-12,
            },
            diagnostics: Diagnostics {
                l1_fit: true,
                soliton_tracking: true,
                ..Diagnostics::default()
            },
            expect: Expectations {
                max_drift: Some(1e-8),
                max_soliton_error: Some(1e-6),
                ..Expectations::default()
            },
            ..base(1.0, 1024, 100.0, 0.005, 10.0)
        },
        // Both identity ledgers at t = e^2 and e^3.
        "identity-audit" => {
            let e = std::f64::consts::E;
            RunConfig {
                diagnostics: Diagnostics {
                    ledgers: vec![e * e, e * e * e],
                    ..Diagnostics::default()
                },
                expect: Expectations {
                    max_ledger_residual: Some(1e-6),
                    max_drift: Some(1e-8),
                    ..Expectations::default()
                },
                ..base(0.5, 4096, 800.0, 1e-3, 20.25)
            }
        }
        "gaussian-decay" => RunConfig {
            schedule: Schedule::Uniform {
                dt_sample: 1.0,
                start: 10.0,
            },
            diagnostics: Diagnostics {
                decay: true,
                l1_fit: true,
                ..Diagnostics::default()
            },
            ..base(0.5, 8192, 1600.0, 0.02, 200.0)
        },
        "virial-gaussian" => RunConfig {
            schedule: Schedule::Uniform {
                dt_sample: 0.5,
                start: 0.0,
            },
            diagnostics: Diagnostics {
                virial: true,
                ..Diagnostics::default()
            },
            expect: Expectations {
                max_virial_mismatch: Some(1e-4),
                ..Expectations::default()
            },
            ..base(0.5, 1 << 15, 6400.0, 0.02, 50.0)
        },
        _ => return None,
    };
    Some(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_validate() {
        for name in NAMES {
            let cfg = builtin(name).unwrap();
            cfg.validate(name).unwrap();
            assert_eq!(cfg.output, name);
        }
        assert!(builtin("nope").is_none());
    }
}
