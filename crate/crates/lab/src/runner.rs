//! Executes a [`RunConfig`] and writes its outputs.
//!
//! Layout of `<root>/<output>/`:
//!
//! ```text
//! config.json        normalized config as run
//! summary.json       machine-readable summary
//! conserved.csv      t,mass,l2,energy,l1
//! decay.csv          t,J,runmin_J            (decay)
//! ledgers.csv        step,t,ddt,A1,A2,A3,A31,A32,A33,A4,closure,relative,fd_error  (ledgers)
//! virial.csv         t,lhs,rhs               (virial)
//! checkpoints/       initial.ckpt, final.ckpt
//! plots/             whitespace .dat files and RECIPE.txt
//! ```
//!
//! Nothing time- or host-dependent is written, so equal configs give equal
//! bytes.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use dgbo_core::evolution::{evolve, l1_monitor, EquationParams, L1Fit, Trajectory};
use dgbo_core::functionals::{decay_report, sample_times, step1_ledger, step2_ledger, virial, DecayReport, IdentityLedger, VirialReport};
use dgbo_core::ground_state::solve_petviashvili;
use dgbo_core::spectral::{random_band_limited, Grid, RealField};
use dgbo_core::weights::WindowLaw;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::checkpoint::Checkpoint;
use crate::config::{InitialData, RunConfig, Schedule};
use crate::error::LabError;

pub const OUTPUT_ROOT_VAR: &str = "DGBO_OUTPUT_ROOT";

/// `$DGBO_OUTPUT_ROOT`, else `./dgbo-output`.
pub fn output_root() -> PathBuf {
    std::env::var_os(OUTPUT_ROOT_VAR)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("dgbo-output"))
}

#[derive(Debug, Clone, Serialize)]
pub struct Drift {
    pub mass_abs: f64,
    pub l2_rel: f64,
    pub energy_rel: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct DecaySummary {
    pub t_first: f64,
    pub t_last: f64,
    pub j_first: f64,
    pub j_last: f64,
    pub j_max: f64,
    pub j_min: f64,
    pub decay_factor: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct LedgerSummary {
    pub step1_max_residual: f64,
    pub step2_max_residual: f64,
    pub coercive_min: f64,
    pub fd_limited: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct VirialSummary {
    pub max_mismatch: f64,
    pub slope: f64,
    pub expected_slope: f64,
    pub slope_error: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SummaryCheck {
    pub name: String,
    pub value: f64,
    pub limit: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub scenario: String,
    pub alpha: f64,
    pub n: usize,
    pub length: f64,
    pub dt: f64,
    pub t_end: f64,
    pub seed: u64,
    pub samples: usize,
    pub final_time: f64,
    pub drift: Drift,
    pub l1_fit: Option<L1Fit<f64>>,
    pub decay: Option<DecaySummary>,
    pub ledgers: Option<LedgerSummary>,
    pub virial: Option<VirialSummary>,
    pub soliton_error: Option<f64>,
    pub checks: Vec<SummaryCheck>,
    pub passed: bool,
}

#[derive(Debug)]
pub struct RunOutcome {
    pub summary: Summary,
    pub dir: PathBuf,
}

/// Initial datum after validation; for solitons also the speed.
fn initial_field(cfg: &RunConfig, grid: &Grid<f64>, source: &str) -> Result<RealField<f64>, LabError> {
    let u = match &cfg.initial {
        InitialData::Gaussian { amplitude, width, center } => {
            RealField::from_fn(grid, |x| amplitude * (-((x - center) / width).powi(2)).exp())
        }
        InitialData::Soliton { speed, center, tol } => {
            let wave = solve_petviashvili(cfg.alpha, *speed, grid, *tol)
                .map_err(|e| LabError::core(format!("{source}: initial"), e))?;
            if *center == 0.0 {
                wave.profile
            } else {
                wave.profile.translate(*center)
            }
        }
        InitialData::Mode { k, amplitude } => {
            let w = std::f64::consts::TAU * *k as f64 / grid.length();
            RealField::from_fn(grid, |x| amplitude * (w * x).cos())
        }
        InitialData::Random { max_mode, amplitude } => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            let u = random_band_limited(grid, *max_mode, &mut rng)
                .map_err(|e| LabError::config(source, "initial.max_mode", e.to_string()))?;
            u.scale(amplitude / u.max_abs())
        }
        InitialData::File { path } => {
            let ck = Checkpoint::read(path)?;
            if ck.n() != grid.n_points() || ck.length != grid.length() {
                return Err(LabError::config(
                    source,
                    "initial.path",
                    format!(
                        "checkpoint grid (N = {}, L = {}) differs from config grid (N = {}, L = {})",
                        ck.n(),
                        ck.length,
                        grid.n_points(),
                        grid.length()
                    ),
                ));
            }
            ck.to_field()
                .map_err(|e| LabError::config(source, "initial.path", e.to_string()))?
        }
    };
    Ok(u)
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1.0)
}

/// Schedule times plus `t = 0` plus ledger stencils, sorted. Schedule
/// samples inside a stencil are dropped so that stencil points are
/// consecutive.
fn recording_times(cfg: &RunConfig, law: &WindowLaw<f64>, source: &str) -> Result<Vec<f64>, LabError> {
    let mut times = vec![0.0];
    match &cfg.schedule {
        Schedule::Uniform { dt_sample, start } => {
            let mut k = 0u64;
            loop {
                let t = start + k as f64 * dt_sample;
                if t > cfg.t_end * (1.0 + 1e-12) {
                    break;
                }
                times.push(t.min(cfg.t_end));
                k += 1;
            }
        }
        Schedule::LogSequence { epsilon, count } => {
            let s = sample_times(*epsilon, cfg.alpha, *count, law.t_min())
                .map_err(|e| LabError::config(source, "schedule", e.to_string()))?;
            if let Some(last) = s.times.last() {
                if *last > cfg.t_end {
                    return Err(LabError::config(
                        source,
                        "schedule.count",
                        format!("the log sequence reaches t = {last} beyond t_end = {}", cfg.t_end),
                    ));
                }
            }
            times.extend(s.times);
        }
        Schedule::Explicit { times: ts } => times.extend(ts.iter().copied()),
    }
    let delta = cfg.diagnostics.ledger_delta;
    for &c in &cfg.diagnostics.ledgers {
        times.retain(|&t| (t - c).abs() >= 4.0 * delta * (1.0 - 1e-9) || t == 0.0);
    }
    for &c in &cfg.diagnostics.ledgers {
        for k in [-4.0, -2.0, -1.0, 0.0, 1.0, 2.0, 4.0] {
            times.push(c + k * delta);
        }
        // Fill -3 and 3 so the neighbours of the centre are at spacing delta.
        times.push(c - 3.0 * delta);
        times.push(c + 3.0 * delta);
    }
    times.sort_by(|a, b| a.partial_cmp(b).unwrap());
    times.dedup_by(|a, b| close(*a, *b));
    Ok(times)
}

fn max_or_zero(it: impl Iterator<Item = f64>) -> f64 {
    it.fold(0.0, f64::max)
}

struct Diagnostics {
    l1_fit: Option<L1Fit<f64>>,
    decay: Option<DecayReport<f64>>,
    ledgers: Vec<IdentityLedger<f64>>,
    virial: Option<VirialReport<f64>>,
    soliton_error: Option<f64>,
}

fn diagnose(cfg: &RunConfig, traj: &Trajectory<f64>, law: &WindowLaw<f64>) -> Result<Diagnostics, LabError> {
    let d = &cfg.diagnostics;
    let l1_fit = if d.l1_fit {
        Some(l1_monitor(traj).map_err(|e| LabError::core("diagnostics.l1_fit", e))?)
    } else {
        None
    };
    let decay = if d.decay {
        Some(decay_report(traj, law, cfg.alpha).map_err(|e| LabError::core("diagnostics.decay", e))?)
    } else {
        None
    };
    let mut ledgers = Vec::new();
    for (i, &t) in d.ledgers.iter().enumerate() {
        let ctx = format!("diagnostics.ledgers[{i}]");
        ledgers.push(step1_ledger(traj, law, cfg.alpha, t).map_err(|e| LabError::core(&ctx, e))?);
        ledgers.push(step2_ledger(traj, law, cfg.alpha, t).map_err(|e| LabError::core(&ctx, e))?);
    }
    let virial = if d.virial {
        Some(virial(traj).map_err(|e| LabError::core("diagnostics.virial", e))?)
    } else {
        None
    };
    let soliton_error = match (&cfg.initial, d.soliton_tracking) {
        (InitialData::Soliton { speed, .. }, true) => {
            let (first, last) = (&traj.states[0], traj.states.last().unwrap());
            let t = *traj.times.last().unwrap();
            let expected = first.translate(speed * t);
            Some(last.max_abs_diff(&expected).map_err(|e| LabError::core("diagnostics.soliton_tracking", e))?)
        }
        _ => None,
    };
    Ok(Diagnostics {
        l1_fit,
        decay,
        ledgers,
        virial,
        soliton_error,
    })
}

/// Validates, evolves, diagnoses and writes. `source` labels config errors.
pub fn run(cfg: &RunConfig, source: &str, root: &Path) -> Result<RunOutcome, LabError> {
    cfg.validate(source)?;
    let grid = Grid::new(cfg.grid.n, cfg.grid.length).map_err(|e| LabError::config(source, "grid", e.to_string()))?;
    let law = WindowLaw::new(cfg.window.a, cfg.window.c).map_err(|e| LabError::config(source, "window", e.to_string()))?;
    let u0 = initial_field(cfg, &grid, source)?;

    let mut params = EquationParams::new(cfg.alpha, cfg.dt, cfg.t_end);
    params.dealias = cfg.dealias;
    params.validate(&u0).map_err(|e| LabError::config(source, "dt", e.to_string()))?;
    let times = recording_times(cfg, &law, source)?;
    if cfg.diagnostics.decay && !times.iter().any(|&t| t >= law.t_min()) {
        return Err(LabError::config(
            source,
            "schedule",
            format!("decay needs samples at or after t_min = {}", law.t_min()),
        ));
    }
    if cfg.diagnostics.l1_fit && times.len() < 3 {
        return Err(LabError::config(source, "schedule", "the L1 fit needs at least 3 samples"));
    }

    let traj = evolve(&u0, &params, &times).map_err(|e| LabError::core("evolve", e))?;
    let diag = diagnose(cfg, &traj, &law)?;
    let summary = summarize(cfg, &traj, &diag);

    let dir = root.join(&cfg.output);
    write_outputs(&dir, cfg, &traj, &diag, &summary)?;
    Ok(RunOutcome { summary, dir })
}

fn summarize(cfg: &RunConfig, traj: &Trajectory<f64>, diag: &Diagnostics) -> Summary {
    let (mass_abs, l2_rel, energy_rel) = traj.drifts();
    let decay = diag.decay.as_ref().map(|r| DecaySummary {
        t_first: r.times[0],
        t_last: *r.times.last().unwrap(),
        j_first: r.j_values[0],
        j_last: *r.j_values.last().unwrap(),
        j_max: r.j_values.iter().copied().fold(f64::MIN, f64::max),
        j_min: r.j_values.iter().copied().fold(f64::MAX, f64::min),
        decay_factor: r.decay_factor(),
    });
    let ledgers = (!diag.ledgers.is_empty()).then(|| {
        let of = |s| {
            max_or_zero(
                diag.ledgers
                    .iter()
                    .filter(|l| l.step == s)
                    .map(|l| l.relative_residual()),
            )
        };
        LedgerSummary {
            step1_max_residual: of(dgbo_core::functionals::LedgerStep::One),
            step2_max_residual: of(dgbo_core::functionals::LedgerStep::Two),
            coercive_min: diag
                .ledgers
                .iter()
                .filter_map(|l| l.a3_split.map(|(_, b, c)| b.min(c)))
                .fold(f64::INFINITY, f64::min),
            fd_limited: diag.ledgers.iter().any(|l| l.fd_limited),
        }
    });
    let virial = diag.virial.as_ref().map(|v| VirialSummary {
        max_mismatch: v.max_mismatch,
        slope: v.slope,
        expected_slope: v.expected_slope,
        slope_error: v.slope_error,
    });

    let mut checks = Vec::new();
    let at_most = |name: &str, value: f64, limit: Option<f64>| {
        limit.map(|limit| SummaryCheck {
            name: name.into(),
            value,
            limit,
            passed: value <= limit,
        })
    };
    let e = &cfg.expect;
    checks.extend(at_most("drift", l2_rel.max(energy_rel), e.max_drift));
    if let Some(v) = diag.soliton_error {
        checks.extend(at_most("soliton_error", v, e.max_soliton_error));
    }
    if let Some(l) = &ledgers {
        checks.extend(at_most(
            "ledger_residual",
            l.step1_max_residual.max(l.step2_max_residual),
            e.max_ledger_residual,
        ));
        if l.coercive_min.is_finite() {
            checks.push(SummaryCheck {
                name: "coercive_terms_nonnegative".into(),
                value: l.coercive_min,
                limit: 0.0,
                passed: l.coercive_min >= 0.0,
            });
        }
    }
    if let Some(v) = &virial {
        checks.extend(at_most("virial_mismatch", v.max_mismatch, e.max_virial_mismatch));
    }
    if let (Some(d), Some(limit)) = (&decay, e.min_decay_factor) {
        checks.push(SummaryCheck {
            name: "decay_factor".into(),
            value: d.decay_factor,
            limit,
            passed: d.decay_factor >= limit,
        });
    }
    let passed = checks.iter().all(|c| c.passed);
    Summary {
        scenario: cfg.scenario.clone(),
        alpha: cfg.alpha,
        n: cfg.grid.n,
        length: cfg.grid.length,
        dt: cfg.dt,
        t_end: cfg.t_end,
        seed: cfg.seed,
        samples: traj.len(),
        final_time: *traj.times.last().unwrap(),
        drift: Drift {
            mass_abs,
            l2_rel,
            energy_rel,
        },
        l1_fit: diag.l1_fit,
        decay,
        ledgers,
        virial,
        soliton_error: diag.soliton_error,
        checks,
        passed,
    }
}

fn write_csv<R: Serialize>(path: &Path, rows: impl IntoIterator<Item = R>) -> Result<(), LabError> {
    let mut w = csv::Writer::from_path(path).map_err(|e| LabError::Format {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    for r in rows {
        w.serialize(r).map_err(|e| LabError::Format {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
    }
    w.flush().map_err(|e| LabError::io(path, e))
}

fn write_text(path: &Path, text: &str) -> Result<(), LabError> {
    fs::write(path, text).map_err(|e| LabError::io(path, e))
}

/// Whitespace-separated columns with a `#` header line.
fn dat(header: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> String {
    let mut s = format!("# {}\n", header.join(" "));
    for r in rows {
        let line: Vec<String> = r.iter().map(|v| format!("{v:e}")).collect();
        s.push_str(&line.join(" "));
        s.push('\n');
    }
    s
}

#[derive(Serialize)]
struct ConservedRow {
    t: f64,
    mass: f64,
    l2: f64,
    energy: f64,
    l1: f64,
}

#[derive(Serialize)]
struct DecayRow {
    t: f64,
    #[serde(rename = "J")]
    j: f64,
    #[serde(rename = "runmin_J")]
    runmin: f64,
}

#[derive(Serialize)]
struct LedgerRow {
    step: u8,
    t: f64,
    ddt: f64,
    #[serde(rename = "A1")]
    a1: f64,
    #[serde(rename = "A2")]
    a2: f64,
    #[serde(rename = "A3")]
    a3: f64,
    #[serde(rename = "A31")]
    a31: Option<f64>,
    #[serde(rename = "A32")]
    a32: Option<f64>,
    #[serde(rename = "A33")]
    a33: Option<f64>,
    #[serde(rename = "A4")]
    a4: f64,
    closure: f64,
    relative: f64,
    fd_error: f64,
}

#[derive(Serialize)]
struct VirialRow {
    t: f64,
    lhs: f64,
    rhs: f64,
}

fn write_outputs(
    dir: &Path,
    cfg: &RunConfig,
    traj: &Trajectory<f64>,
    diag: &Diagnostics,
    summary: &Summary,
) -> Result<(), LabError> {
    fs::create_dir_all(dir).map_err(|e| LabError::io(dir, e))?;
    write_text(&dir.join("config.json"), &(cfg.to_json() + "\n"))?;
    let json = serde_json::to_string_pretty(summary).expect("summary serializes");
    write_text(&dir.join("summary.json"), &(json + "\n"))?;

    write_csv(
        &dir.join("conserved.csv"),
        traj.times.iter().zip(&traj.conserved).zip(&traj.l1_norms).map(|((t, c), l1)| ConservedRow {
            t: *t,
            mass: c.mass,
            l2: c.l2,
            energy: c.energy,
            l1: *l1,
        }),
    )?;
    if let Some(r) = &diag.decay {
        write_csv(
            &dir.join("decay.csv"),
            (0..r.times.len()).map(|i| DecayRow {
                t: r.times[i],
                j: r.j_values[i],
                runmin: r.running_min[i],
            }),
        )?;
    }
    if !diag.ledgers.is_empty() {
        write_csv(
            &dir.join("ledgers.csv"),
            diag.ledgers.iter().map(|l| LedgerRow {
                step: match l.step {
                    dgbo_core::functionals::LedgerStep::One => 1,
                    dgbo_core::functionals::LedgerStep::Two => 2,
                },
                t: l.t,
                ddt: l.ddt_term,
                a1: l.a1,
                a2: l.a2,
                a3: l.a3,
                a31: l.a3_split.map(|s| s.0),
                a32: l.a3_split.map(|s| s.1),
                a33: l.a3_split.map(|s| s.2),
                a4: l.a4,
                closure: l.closure_residual,
                relative: l.relative_residual(),
                fd_error: l.fd_error,
            }),
        )?;
    }
    if let Some(v) = &diag.virial {
        write_csv(
            &dir.join("virial.csv"),
            (0..v.times.len()).map(|i| VirialRow {
                t: v.times[i],
                lhs: v.lhs[i],
                rhs: v.rhs[i],
            }),
        )?;
    }

    if cfg.diagnostics.checkpoints {
        let ck = dir.join("checkpoints");
        fs::create_dir_all(&ck).map_err(|e| LabError::io(&ck, e))?;
        let last = traj.len() - 1;
        Checkpoint::from_field(&traj.states[0], cfg.alpha, traj.times[0]).write(&ck.join("initial.ckpt"))?;
        Checkpoint::from_field(&traj.states[last], cfg.alpha, traj.times[last]).write(&ck.join("final.ckpt"))?;
    }

    if cfg.diagnostics.plots {
        write_plots(&dir.join("plots"), traj, diag)?;
    }
    Ok(())
}

fn write_plots(dir: &Path, traj: &Trajectory<f64>, diag: &Diagnostics) -> Result<(), LabError> {
    fs::create_dir_all(dir).map_err(|e| LabError::io(dir, e))?;
    let mut recipe = String::from(
        "Plot data for this run. Each .dat file has a '#' header naming its columns.\n\
         gnuplot one-liners:\n\n",
    );
    let grid = traj.grid().expect("trajectory is nonempty");
    let x = grid.nodes();
    let last = traj.states.last().unwrap();
    write_text(
        &dir.join("profiles.dat"),
        &dat(
            &["x", "u_initial", "u_final"],
            (0..x.len()).map(|j| vec![x[j], traj.states[0].samples()[j], last.samples()[j]]),
        ),
    )?;
    recipe.push_str("  plot 'profiles.dat' u 1:2 w l t 'u(0)', '' u 1:3 w l t 'u(T)'\n");

    let (m0, e0) = (traj.conserved[0].l2, traj.conserved[0].energy);
    write_text(
        &dir.join("conserved.dat"),
        &dat(
            &["t", "l2_rel_drift", "energy_rel_drift", "l1"],
            traj.times.iter().zip(&traj.conserved).zip(&traj.l1_norms).map(|((t, c), l1)| {
                let rel = |a: f64, b: f64| if b == 0.0 { a - b } else { (a - b) / b };
                vec![*t, rel(c.l2, m0), rel(c.energy, e0), *l1]
            }),
        ),
    )?;
    recipe.push_str("  plot 'conserved.dat' u 1:2 w lp t 'M drift', '' u 1:3 w lp t 'E drift'\n");
    recipe.push_str("  set logscale xy; plot 'conserved.dat' u 1:4 w lp t 'L1 norm'; unset logscale\n");

    if let Some(r) = &diag.decay {
        write_text(
            &dir.join("decay.dat"),
            &dat(
                &["t", "J", "runmin_J"],
                (0..r.times.len()).map(|i| vec![r.times[i], r.j_values[i], r.running_min[i]]),
            ),
        )?;
        recipe.push_str("  set logscale y; plot 'decay.dat' u 1:2 w lp t 'J', '' u 1:3 w l t 'running min'; unset logscale\n");
    }
    if let Some(v) = &diag.virial {
        write_text(
            &dir.join("virial.dat"),
            &dat(
                &["t", "d_dt_first_moment", "half_l2"],
                (0..v.times.len()).map(|i| vec![v.times[i], v.lhs[i], v.rhs[i]]),
            ),
        )?;
        recipe.push_str("  plot 'virial.dat' u 1:2 w p t 'd/dt int xu', '' u 1:3 w l t '1/2 int u^2'\n");
    }
    if !diag.ledgers.is_empty() {
        let mut s = String::from("# step t relative_closure\n");
        for l in &diag.ledgers {
            let step = match l.step {
                dgbo_core::functionals::LedgerStep::One => 1,
                dgbo_core::functionals::LedgerStep::Two => 2,
            };
            let _ = writeln!(s, "{step} {:e} {:e}", l.t, l.relative_residual());
        }
        write_text(&dir.join("ledgers.dat"), &s)?;
        recipe.push_str("  set logscale y; plot 'ledgers.dat' u 2:($1==1?$3:1/0) t 'step 1', '' u 2:($1==2?$3:1/0) t 'step 2'; unset logscale\n");
    }
    write_text(&dir.join("RECIPE.txt"), &recipe)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{Diagnostics as DiagConfig, Expectations, GridConfig, WindowConfig};

    fn small(output: &str) -> RunConfig {
        RunConfig {
            version: 1,
            scenario: "small".into(),
            alpha: 0.5,
            grid: GridConfig { n: 256, length: 100.0 },
            dt: 0.01,
            t_end: 9.0,
            dealias: true,
            initial: InitialData::Random {
                max_mode: 20,
                amplitude: 0.5,
            },
            window: WindowConfig::default(),
            schedule: Schedule::Uniform { dt_sample: 0.5, start: 0.0 },
            diagnostics: DiagConfig {
                decay: true,
                l1_fit: true,
                ledgers: vec![4.0],
                ..DiagConfig::default()
            },
            expect: Expectations::default(),
            output: output.into(),
            seed: 11,
        }
    }

    #[test]
    fn recording_times_keep_stencils_consecutive() {
        let cfg = small("x");
        let law = WindowLaw::new(0.0, 1.0).unwrap();
        let t = recording_times(&cfg, &law, "x").unwrap();
        let i = t.iter().position(|v| close(*v, 4.0)).unwrap();
        for k in 1..=4 {
            assert!(close(t[i + k], 4.0 + 0.02 * k as f64));
            assert!(close(t[i - k], 4.0 - 0.02 * k as f64));
        }
        assert!(t.windows(2).all(|w| w[1] > w[0]));
        assert_eq!(t[0], 0.0);
    }

    #[test]
    fn run_writes_expected_files() {
        let root = tempfile::tempdir().unwrap();
        let out = run(&small("a"), "small", root.path()).unwrap();
        for f in ["config.json", "summary.json", "conserved.csv", "decay.csv", "ledgers.csv", "plots/RECIPE.txt", "checkpoints/final.ckpt"] {
            assert!(out.dir.join(f).exists(), "{f}");
        }
        let header = fs::read_to_string(out.dir.join("ledgers.csv")).unwrap();
        assert!(header.starts_with("step,t,ddt,A1,A2,A3,A31,A32,A33,A4,closure,relative,fd_error"));
        assert!(out.summary.ledgers.is_some());
        let ck = Checkpoint::read(&out.dir.join("checkpoints/final.ckpt")).unwrap();
        assert_eq!(ck.t, 9.0);
    }

    #[test]
    fn errors_name_the_config_path() {
        let root = tempfile::tempdir().unwrap();
        let mut cfg = small("b");
        cfg.dt = 1.0;
        let e = run(&cfg, "small.json", root.path()).unwrap_err();
        assert_eq!(e.exit_code(), 2);
        assert!(e.to_string().starts_with("small.json: dt:"), "{e}");
        cfg.dt = 0.01;
        cfg.initial = InitialData::File { path: root.path().join("missing.ckpt") };
        assert_eq!(run(&cfg, "small.json", root.path()).unwrap_err().exit_code(), 1);
    }
}
