//! JSON run configuration, schema version 1.
//!
//! Unknown keys are rejected at every level. Errors carry the JSON path of
//! the offending value.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::LabError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub version: u32,
    pub scenario: String,
    pub alpha: f64,
    pub grid: GridConfig,
    pub dt: f64,
    pub t_end: f64,
    #[serde(default = "yes")]
    pub dealias: bool,
    pub initial: InitialData,
    #[serde(default)]
    pub window: WindowConfig,
    pub schedule: Schedule,
    #[serde(default)]
    pub diagnostics: Diagnostics,
    #[serde(default)]
    pub expect: Expectations,
    /// Output directory, relative to the output root.
    pub output: String,
    #[serde(default)]
    pub seed: u64,
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub n: usize,
    pub length: f64,
}

/// Initial datum, tagged by `kind`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialData {
    /// `amplitude exp(-((x - center) / width)^2)`
    Gaussian {
        amplitude: f64,
        width: f64,
        #[serde(default)]
        center: f64,
    },
    /// Solitary wave of the configured `alpha`, peak at `center`.
    Soliton {
        #[serde(default = "unit")]
        speed: f64,
        #[serde(default)]
        center: f64,
        #[serde(default = "soliton_tol")]
        tol: f64,
    },
    /// `amplitude cos(2 pi k x / L)`
    Mode { k: i64, amplitude: f64 },
    /// Random band-limited field with modes `1..=max_mode`, scaled so that
    /// `max|u| = amplitude`; drawn from `seed`.
    Random { max_mode: usize, amplitude: f64 },
    /// Checkpoint file; relative paths resolve against the config file.
    File { path: PathBuf },
}

fn unit() -> f64 {
    1.0
}

fn soliton_tol() -> f64 {
    1e-12
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindowConfig {
    #[serde(default)]
    pub a: f64,
    #[serde(default = "unit")]
    pub c: f64,
}

impl Default for WindowConfig {
    fn default() -> Self {
        Self { a: 0.0, c: 1.0 }
    }
}

/// Times at which the state is recorded.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Schedule {
    /// `start, start + dt_sample, ...` up to `t_end`.
    Uniform {
        dt_sample: f64,
        #[serde(default)]
        start: f64,
    },
    /// `t_n = (log n)^{1/(epsilon (alpha + 2))}` from the first `t_n >= t_min`.
    LogSequence { epsilon: f64, count: usize },
    Explicit { times: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Diagnostics {
    #[serde(default)]
    pub l1_fit: bool,
    #[serde(default)]
    pub decay: bool,
    /// Times at which both identity ledgers are evaluated.
    #[serde(default)]
    pub ledgers: Vec<f64>,
    /// Sample spacing for the ledger stencils.
    #[serde(default = "ledger_delta")]
    pub ledger_delta: f64,
    #[serde(default)]
    pub virial: bool,
    /// Compare against the initial state translated at the soliton speed.
    #[serde(default)]
    pub soliton_tracking: bool,
    #[serde(default = "yes")]
    pub checkpoints: bool,
    #[serde(default = "yes")]
    pub plots: bool,
}

fn ledger_delta() -> f64 {
    0.02
}

impl Default for Diagnostics {
    fn default() -> Self {
        Self {
            l1_fit: false,
            decay: false,
            ledgers: Vec::new(),
            ledger_delta: ledger_delta(),
            virial: false,
            soliton_tracking: false,
            checkpoints: true,
            plots: true,
        }
    }
}

/// Thresholds turned into pass/fail checks in the summary.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expectations {
    pub max_drift: Option<f64>,
    pub max_soliton_error: Option<f64>,
    pub max_ledger_residual: Option<f64>,
    pub max_virial_mismatch: Option<f64>,
    pub min_decay_factor: Option<f64>,
}

impl RunConfig {
    /// Parses JSON; `source_name` labels errors (usually the file path).
    pub fn from_json(text: &str, source_name: &str) -> Result<Self, LabError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let cfg: RunConfig = serde_path_to_error::deserialize(de).map_err(|e| {
            let field = e.path().to_string();
            LabError::config(source_name, &field, e.into_inner().to_string())
        })?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, LabError> {
        let text = std::fs::read_to_string(path).map_err(|e| LabError::io(path, e))?;
        let mut cfg = Self::from_json(&text, &path.display().to_string())?;
        if let InitialData::File { path: p } = &mut cfg.initial {
            if p.is_relative() {
                if let Some(dir) = path.parent() {
                    *p = dir.join(&*p);
                }
            }
        }
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Static checks that need no computation. Checks that depend on the
    /// initial datum happen in the runner before evolution starts.
    pub fn validate(&self, source_name: &str) -> Result<(), LabError> {
        let err = |field: &str, msg: String| Err(LabError::config(source_name, field, msg));
        if self.version != SCHEMA_VERSION {
            return err("version", format!("unsupported schema version {}, expected {SCHEMA_VERSION}", self.version));
        }
        if self.scenario.trim().is_empty() {
            return err("scenario", "must not be empty".into());
        }
        if !(0.0..=1.0).contains(&self.alpha) {
            return err("alpha", format!("must lie in [0, 1], got {}", self.alpha));
        }
        if let Err(e) = dgbo_core::Grid64::new(self.grid.n, self.grid.length) {
            return err("grid", e.to_string());
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return err("dt", format!("must be positive, got {}", self.dt));
        }
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return err("t_end", format!("must be positive, got {}", self.t_end));
        }
        if self.output.trim().is_empty() || Path::new(&self.output).is_absolute() {
            return err("output", "must be a non-empty relative directory name".into());
        }
        match &self.initial {
            InitialData::Gaussian { amplitude, width, center } => {
                if !amplitude.is_finite() || !center.is_finite() {
                    return err("initial", "amplitude and center must be finite".into());
                }
                if !(*width > 0.0 && width.is_finite()) {
                    return err("initial.width", format!("must be positive, got {width}"));
                }
            }
            InitialData::Soliton { speed, center, tol } => {
                if !(*speed > 0.0 && speed.is_finite()) {
                    return err("initial.speed", format!("must be positive, got {speed}"));
                }
                if !center.is_finite() {
                    return err("initial.center", "must be finite".into());
                }
                if !(*tol > 0.0) {
                    return err("initial.tol", "must be positive".into());
                }
            }
            InitialData::Mode { k, amplitude } => {
                if k.unsigned_abs() as usize * 3 > self.grid.n {
                    return err("initial.k", format!("mode {k} is removed by dealiasing on N = {}", self.grid.n));
                }
                if !amplitude.is_finite() {
                    return err("initial.amplitude", "must be finite".into());
                }
            }
            InitialData::Random { max_mode, amplitude } => {
                if *max_mode == 0 || *max_mode * 3 > self.grid.n {
                    return err("initial.max_mode", format!("must be in 1..={}", self.grid.n / 3));
                }
                if !(*amplitude > 0.0 && amplitude.is_finite()) {
                    return err("initial.amplitude", "must be positive".into());
                }
            }
            InitialData::File { .. } => {}
        }
        if let Err(e) = dgbo_core::WindowLaw64::new(self.window.a, self.window.c) {
            return err("window", e.to_string());
        }
        match &self.schedule {
            Schedule::Uniform { dt_sample, start } => {
                if !(*dt_sample > 0.0 && dt_sample.is_finite()) {
                    return err("schedule.dt_sample", "must be positive".into());
                }
                if !(*start >= 0.0 && *start <= self.t_end) {
                    return err("schedule.start", format!("must lie in [0, t_end = {}]", self.t_end));
                }
            }
            Schedule::LogSequence { epsilon, count } => {
                if !(*epsilon > 0.0 && epsilon.is_finite()) {
                    return err("schedule.epsilon", "must be positive".into());
                }
                if *count < 2 {
                    return err("schedule.count", "at least two times are required".into());
                }
            }
            Schedule::Explicit { times } => {
                if times.is_empty() {
                    return err("schedule.times", "must not be empty".into());
                }
                if times.iter().any(|t| !(*t >= 0.0 && *t <= self.t_end)) {
                    return err("schedule.times", format!("all times must lie in [0, t_end = {}]", self.t_end));
                }
                if times.windows(2).any(|w| w[1] <= w[0]) {
                    return err("schedule.times", "must be strictly increasing".into());
                }
            }
        }
        let needs_window = self.diagnostics.decay || !self.diagnostics.ledgers.is_empty();
        if needs_window {
            if let Err(e) = dgbo_core::WindowLaw64::for_alpha(self.window.a, self.window.c, self.alpha) {
                let msg = match e {
                    dgbo_core::Error::InvalidParameter { reason, .. } => reason,
                    other => other.to_string(),
                };
                return err("window.a", msg);
            }
        }
        let d = &self.diagnostics;
        if !d.ledgers.is_empty() {
            if !(d.ledger_delta > 0.0 && d.ledger_delta.is_finite()) {
                return err("diagnostics.ledger_delta", "must be positive".into());
            }
            for (i, &t) in d.ledgers.iter().enumerate() {
                if !(t - 4.0 * d.ledger_delta >= 0.0 && t + 4.0 * d.ledger_delta <= self.t_end) {
                    return err(
                        &format!("diagnostics.ledgers[{i}]"),
                        format!("t = {t} needs samples at t +- 4 * ledger_delta inside [0, t_end]"),
                    );
                }
            }
        }
        if d.soliton_tracking && !matches!(self.initial, InitialData::Soliton { .. }) {
            return err("diagnostics.soliton_tracking", "requires soliton initial data".into());
        }
        for (name, v) in [
            ("expect.max_drift", self.expect.max_drift),
            ("expect.max_soliton_error", self.expect.max_soliton_error),
            ("expect.max_ledger_residual", self.expect.max_ledger_residual),
            ("expect.max_virial_mismatch", self.expect.max_virial_mismatch),
            ("expect.min_decay_factor", self.expect.min_decay_factor),
        ] {
            if let Some(v) = v {
                if !(v >= 0.0 && v.is_finite()) {
                    return err(name, "must be a nonnegative number".into());
                }
            }
        }
        Ok(())
    }
}
