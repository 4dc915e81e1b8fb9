//! The acceptance criteria and the operator invariants, as tables of
//! checks. Shared by `dgbo verify` and the acceptance test binary.

use std::f64::consts::{E, PI, TAU};
use std::path::PathBuf;

use dgbo_core::commutators::{
    apply_r, remainder_bound_from_transform, weight_remainder_bound, CommutatorSpec,
};
use dgbo_core::evolution::{evolve, EquationParams, Trajectory};
use dgbo_core::functionals::{
    cubic_weight_check, decay_report, first_moment, gn_check, leibniz_check, sobolev_norm, step1_ledger,
    step2_ledger, virial, weighted_j,
};
use dgbo_core::ground_state::{bo_profile, kdv_profile, profile_equation_residual, solve_petviashvili};
use dgbo_core::oracle;
use dgbo_core::spectral::{
    dealias, derivative, fractional_derivative, hilbert, random_band_limited, Grid, RealField,
};
use dgbo_core::weights::{moment_integral, phi_prime_hat, WeightSpec, WindowLaw};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::function::gamma::gamma;

use crate::checkpoint::Checkpoint;
use crate::config::{Diagnostics, Expectations, GridConfig, InitialData, RunConfig, Schedule, WindowConfig};

#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub value: f64,
    /// Human-readable acceptance condition, e.g. `<= 1e-6`.
    pub limit: String,
    pub passed: bool,
}

#[derive(Debug, Clone)]
pub struct Criterion {
    /// 0 for the operator invariants, 1..=10 for the acceptance criteria.
    pub id: u8,
    pub title: &'static str,
    pub checks: Vec<Check>,
}

impl Criterion {
    pub fn passed(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.passed)
    }

    /// First failing check, or the worst one when all pass.
    pub fn headline(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.passed).or(self.checks.first())
    }
}

fn le(name: impl Into<String>, value: f64, limit: f64) -> Check {
    Check {
        name: name.into(),
        value,
        limit: format!("<= {limit:e}"),
        passed: value <= limit,
    }
}

fn ge(name: impl Into<String>, value: f64, limit: f64) -> Check {
    Check {
        name: name.into(),
        value,
        limit: format!(">= {limit:e}"),
        passed: value >= limit,
    }
}

fn within(name: impl Into<String>, value: f64, lo: f64, hi: f64) -> Check {
    Check {
        name: name.into(),
        value,
        limit: format!("in [{lo}, {hi}]"),
        passed: (lo..=hi).contains(&value),
    }
}

fn flag(name: impl Into<String>, ok: bool) -> Check {
    Check {
        name: name.into(),
        value: if ok { 1.0 } else { 0.0 },
        limit: "true".into(),
        passed: ok,
    }
}

fn failed(name: impl Into<String>, err: impl std::fmt::Display) -> Check {
    Check {
        name: format!("{} ({err})", name.into()),
        value: f64::NAN,
        limit: "no error".into(),
        passed: false,
    }
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn nine_alphas() -> impl Iterator<Item = f64> {
    (1..=9).map(|i| i as f64 / 10.0)
}

fn grid(n: usize, length: f64) -> Grid<f64> {
    Grid::new(n, length).expect("valid grid")
}

fn gaussian(g: &Grid<f64>, amplitude: f64, width: f64) -> RealField<f64> {
    RealField::from_fn(g, |x| amplitude * (-(x / width).powi(2)).exp())
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

pub const TITLES: [&str; 11] = [
    "operator invariants",
    "weight Fourier identity",
    "moment integral",
    "commutator remainder bound",
    "solitary-wave oracles",
    "evolution correctness",
    "virial identity",
    "identity ledgers",
    "decay proxy",
    "inequality diagnostics",
    "reproducibility",
];

pub fn run(id: u8) -> Criterion {
    let checks = match id {
        0 => operators(),
        1 => weight_transform(),
        2 => moments(),
        3 => commutator_bound(),
        4 => solitary_waves(),
        5 => evolution(),
        6 => virial_identity(),
        7 => ledgers(),
        8 => decay_proxy(),
        9 => inequalities(),
        10 => reproducibility(),
        _ => vec![failed(format!("criterion {id}"), "no such criterion")],
    };
    Criterion {
        id,
        title: TITLES.get(id as usize).copied().unwrap_or("unknown"),
        checks,
    }
}

fn operators() -> Vec<Check> {
    let mut out = Vec::new();
    let n = 32;
    let length = 11.0;
    let g = grid(n, length);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let u = random_band_limited(&g, 15, &mut rng).unwrap();

    // Parseval: sum |c_m|^2 L = int u^2
    let parseval = rel(u.to_spectral().energy() * length, u.norm_l2().powi(2));
    out.push(le("Parseval identity", parseval, 1e-13));

    let dense_err = |fast: &RealField<f64>, m: &oracle::Matrix| max_diff(fast.samples(), &oracle::apply(m, u.samples()));
    for s in [0.5, 1.0, 1.5, 2.75] {
        let fast = fractional_derivative(&u, s).unwrap();
        let e = dense_err(&fast, &oracle::fractional_derivative(n, length, s)) / fast.max_abs();
        out.push(le(format!("D^{s} vs dense DFT"), e, 1e-12));
    }
    let h = hilbert(&u);
    out.push(le("H vs dense DFT", dense_err(&h, &oracle::hilbert(n, length)) / h.max_abs(), 1e-12));
    let d = derivative(&u);
    out.push(le("d/dx vs dense DFT", dense_err(&d, &oracle::derivative(n, length)) / d.max_abs(), 1e-12));

    let hh = hilbert(&h).add(&u).unwrap().max_abs() / u.max_abs();
    out.push(le("H^2 = -I on zero-mean fields", hh, 1e-13));
    let d1 = fractional_derivative(&u, 1.0).unwrap();
    let hd = hilbert(&derivative(&u));
    out.push(le("D = H d/dx", d1.max_abs_diff(&hd).unwrap() / d1.max_abs(), 1e-13));

    let big = grid(256, TAU);
    let sin = RealField::from_fn(&big, f64::sin);
    let d1 = fractional_derivative(&sin, 1.0).unwrap();
    out.push(le("D sin = sin", d1.max_abs_diff(&sin).unwrap(), 1e-13));
    let c = RealField::constant(&big, 3.0);
    let zero_mode = fractional_derivative(&c, 0.7).unwrap().max_abs();
    out.push(le("D^s kills constants", zero_mode, 1e-14));

    // 2/3 rule: the product of two modes at m = 60 lands at 120 > N/3 and is removed.
    let m60 = RealField::from_fn(&big, |x| (60.0 * x).cos());
    let sq = dealias(&m60.mul(&m60).unwrap().to_spectral());
    let kept = sq.coefficient(120).norm() + sq.coefficient(-120).norm();
    out.push(le("dealiasing removes |m| > N/3", kept, 1e-15));
    out.push(le(
        "dealiasing keeps the mean",
        (sq.coefficient(0).re - 0.5).abs(),
        1e-14,
    ));
    out
}

fn weight_transform() -> Vec<Check> {
    let mut out = Vec::new();
    let mut worst: f64 = 0.0;
    for i in 0..=50 {
        let xi = i as f64 * 0.1;
        let exact = PI * (-TAU * xi).exp();
        match phi_prime_hat(xi, 0.0) {
            Ok(v) => worst = worst.max(rel(v, exact)),
            Err(e) => return vec![failed("phi'^ at alpha = 0", e)],
        }
    }
    out.push(le("alpha=0 vs pi exp(-2 pi |xi|), xi in [0,5]", worst, 1e-6));
    for alpha in nine_alphas() {
        let oracle = PI.sqrt() * gamma((alpha + 1.0) / 2.0) / gamma((alpha + 2.0) / 2.0);
        match phi_prime_hat(0.0, alpha) {
            Ok(v) => out.push(le(format!("phi'^(0) alpha={alpha:.1}"), rel(v, oracle), 1e-8)),
            Err(e) => out.push(failed(format!("phi'^(0) alpha={alpha:.1}"), e)),
        }
    }
    out
}

fn moments() -> Vec<Check> {
    let mut out = Vec::new();
    let mut row = |name: String, alpha: f64, exact: f64| match moment_integral(alpha) {
        Ok(v) => out.push(le(name, rel(v, exact), 1e-6)),
        Err(e) => out.push(failed(name, e)),
    };
    for alpha in nine_alphas() {
        let e = (2.0 * alpha + 3.0) / 2.0;
        row(format!("moment alpha={alpha:.1} vs Gamma closed form"), alpha, gamma(e) / PI.powf(e));
    }
    row("moment alpha=1 vs 3/(4 pi^2)".into(), 1.0, 3.0 / (4.0 * PI * PI));
    row("moment alpha=0 vs 1/(2 pi)".into(), 0.0, 1.0 / TAU);
    out
}

/// Sum of three Gaussian wave packets with random centre, width, carrier
/// and phase.
fn random_packets(g: &Grid<f64>, rng: &mut ChaCha8Rng) -> RealField<f64> {
    let params: Vec<(f64, f64, f64, f64, f64)> = (0..3)
        .map(|_| {
            (
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-30.0..30.0),
                rng.gen_range(2.0..6.0),
                rng.gen_range(0.0..2.0),
                rng.gen_range(0.0..TAU),
            )
        })
        .collect();
    RealField::from_fn(g, |x| {
        params
            .iter()
            .map(|(a, c, w, k, p)| a * (-((x - c) / w).powi(2)).exp() * (k * x + p).cos())
            .sum()
    })
}

fn commutator_bound() -> Vec<Check> {
    let mut out = Vec::new();
    let g = grid(2048, 512.0);
    let gauss_width = 2.0;
    for (ai, alpha) in [0.25, 0.5, 0.75].into_iter().enumerate() {
        let order = alpha + 2.0;
        let mut weights: Vec<(String, CommutatorSpec<f64>, f64)> = Vec::new();
        for scale in [1.0, 8.0] {
            let w = WeightSpec::new(alpha, scale).unwrap();
            let spec = CommutatorSpec::for_weight(order, 0, 0.0, &g, &w).unwrap();
            let bound = weight_remainder_bound(&w, order).unwrap();
            weights.push((format!("phi_alpha(x/{scale})"), spec, bound));
        }
        let f = RealField::from_fn(&g, |x| (-(x / gauss_width).powi(2) / 2.0).exp());
        let spec = CommutatorSpec::periodic(order, 0, 0.0, f).unwrap();
        let s = gauss_width;
        let bound = remainder_bound_from_transform(order, |k| s * TAU.sqrt() * (-(s * k).powi(2) / 2.0).exp()).unwrap();
        weights.push((format!("gaussian(sigma={s})"), spec, bound));

        for (wi, (name, spec, bound)) in weights.iter().enumerate() {
            let mut rng = ChaCha8Rng::seed_from_u64(100 + 10 * ai as u64 + wi as u64);
            let mut worst: f64 = 0.0;
            for _ in 0..100 {
                let h = random_packets(&g, &mut rng);
                let r = apply_r(spec, &h).unwrap();
                worst = worst.max(r.norm_l2() / (bound * h.norm_l2()));
            }
            out.push(le(format!("alpha={alpha} {name}: max |R h|/(bound |h|) over 100 h"), worst, 1.05));
        }
    }

    // dense oracle at N = 64
    let n = 64;
    let g = grid(n, 30.0);
    let f = RealField::from_fn(&g, |x| (-(x / 3.0).powi(2)).exp());
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (order, terms) in [(2.5, 0usize), (3.5, 1)] {
        let spec = CommutatorSpec::periodic(order, terms, 0.0, f.clone()).unwrap();
        let dense = oracle::remainder_matrix(&g, f.samples(), spec.weight_derivative().samples(), order, terms);
        let mut worst: f64 = 0.0;
        for _ in 0..5 {
            let h = random_band_limited(&g, 20, &mut rng).unwrap();
            let fast = apply_r(&spec, &h).unwrap();
            worst = worst.max(max_diff(fast.samples(), &oracle::apply(&dense, h.samples())));
        }
        out.push(le(format!("R_{terms}({order}) vs dense oracle, N=64"), worst, 1e-10));
    }
    out
}

fn solitary_waves() -> Vec<Check> {
    let mut out = Vec::new();
    let g = grid(1024, 100.0);
    match solve_petviashvili(1.0, 1.0, &g, 1e-12) {
        Ok(w) => {
            let e = w.profile.max_abs_diff(&kdv_profile(&g, 1.0)).unwrap();
            out.push(le("alpha=1 iteration vs 3 sech^2(x/2)", e, 1e-6));
        }
        Err(e) => out.push(failed("alpha=1 iteration", e)),
    }
    let g = grid(1 << 14, 400.0 * PI);
    let r = profile_equation_residual(&bo_profile(&g, 1.0), 0.0, 1.0).unwrap();
    out.push(le("alpha=0 residual of 4/(1+x^2), L=400 pi", r, 1e-3));

    // Q_2(x) = 2 Q_1(kappa x) with kappa = 2^{1/(1+alpha)}: solving speed 1
    // on a box kappa times longer puts both profiles on matching nodes.
    let alpha = 0.5;
    let kappa = 2f64.powf(1.0 / (1.0 + alpha));
    let (n, length) = (2048, 200.0);
    let q2 = solve_petviashvili(alpha, 2.0, &grid(n, length), 1e-12);
    let q1 = solve_petviashvili(alpha, 1.0, &grid(n, kappa * length), 1e-12);
    match (q2, q1) {
        (Ok(q2), Ok(q1)) => {
            let scaled: Vec<f64> = q1.profile.samples().iter().map(|v| 2.0 * v).collect();
            let e = max_diff(q2.profile.samples(), &scaled) / q2.profile.max_abs();
            out.push(le("speed scaling Q_2(x) = 2 Q_1(2^(2/3) x), alpha=1/2", e, 1e-6));
        }
        (Err(e), _) | (_, Err(e)) => out.push(failed("speed scaling", e)),
    }
    out
}

fn uniform_times(dt: f64, t_end: f64) -> Vec<f64> {
    let n = (t_end / dt).round() as usize;
    (0..=n).map(|k| (k as f64 * dt).min(t_end)).collect()
}

fn evolution() -> Vec<Check> {
    let mut out = Vec::new();

    let g = grid(1024, 100.0);
    let q = kdv_profile(&g, 1.0);
    match evolve(&q, &EquationParams::new(1.0, 0.01, 10.0), &[0.0, 10.0]) {
        Ok(tr) => {
            let e = tr.states[1].max_abs_diff(&q.translate(10.0)).unwrap();
            out.push(le("soliton translation error at T=10, alpha=1", e, 1e-6));
        }
        Err(e) => out.push(failed("soliton translation", e)),
    }

    let g = grid(256, 20.0 * PI);
    let (eps, k0, alpha) = (1e-8, 0.3, 0.5);
    let u0 = RealField::from_fn(&g, |x| eps * (k0 * x).cos());
    match evolve(&u0, &EquationParams::new(alpha, 0.01, 10.0), &[10.0]) {
        Ok(tr) => {
            let w = k0 * k0.powf(alpha + 1.0);
            let exact = RealField::from_fn(&g, |x| eps * (k0 * x + w * 10.0).cos());
            out.push(le("linear mode phase, eps=1e-8, T=10 (absolute)", tr.states[0].max_abs_diff(&exact).unwrap(), 1e-12));
        }
        Err(e) => out.push(failed("linear mode", e)),
    }

    let g = grid(4096, 400.0);
    let u0 = gaussian(&g, 1.0, 5.0);
    match evolve(&u0, &EquationParams::new(0.5, 0.01, 100.0), &uniform_times(1.0, 100.0)) {
        Ok(tr) => {
            let (mass, m, e) = tr.drifts();
            out.push(le("mass drift over T=100 / ||u0||_1", mass / u0.norm_l1(), 1e-13));
            out.push(le("relative M drift over T=100", m, 1e-8));
            out.push(le("relative E drift over T=100", e, 1e-8));
        }
        Err(e) => out.push(failed("conservation run", e)),
    }

    // Fourth order: state error against a dt/32 reference for dt = bound, bound/2, bound/4.
    let params = EquationParams::new(0.5, 1.0, 20.0);
    let bound = params.dt_bound(&u0);
    let at = |dt: f64| evolve(&u0, &EquationParams::new(0.5, dt, 20.0), &[20.0]).map(|t| t.states[0].clone());
    match (at(bound / 32.0), at(bound), at(bound / 2.0), at(bound / 4.0)) {
        (Ok(r), Ok(a), Ok(b), Ok(c)) => {
            let ea = a.max_abs_diff(&r).unwrap();
            let eb = b.max_abs_diff(&r).unwrap();
            let ec = c.max_abs_diff(&r).unwrap();
            out.push(within("error ratio dt -> dt/2", ea / eb, 13.0, 19.0));
            out.push(within("error ratio dt/2 -> dt/4", eb / ec, 13.0, 19.0));
        }
        _ => out.push(failed("convergence runs", "evolve failed")),
    }
    out
}

fn virial_identity() -> Vec<Check> {
    let g = grid(1 << 15, 6400.0);
    let u0 = gaussian(&g, 1.0, 5.0);
    let tr = match evolve(&u0, &EquationParams::new(0.5, 0.02, 50.0), &uniform_times(0.5, 50.0)) {
        Ok(t) => t,
        Err(e) => return vec![failed("virial run", e)],
    };
    let rep = match virial(&tr) {
        Ok(r) => r,
        Err(e) => return vec![failed("virial", e)],
    };
    let moments: Vec<f64> = tr.states.iter().map(first_moment).collect();
    vec![
        le("slope of int xu vs M/2 (relative)", rep.slope_error, 1e-3),
        le("max |d/dt int xu - 1/2 int u^2| / (1/2 int u^2)", rep.max_mismatch, 1e-4),
        flag("int xu strictly increasing", moments.windows(2).all(|w| w[1] > w[0])),
    ]
}

/// Samples every second up to `t_end`, plus 5-point stencils (with the
/// Richardson points) around each ledger time.
fn ledger_times(centres: &[f64], delta: f64, t_end: f64) -> Vec<f64> {
    let mut times: Vec<f64> = uniform_times(1.0, t_end.floor())
        .into_iter()
        .filter(|t| centres.iter().all(|c| (t - c).abs() > 4.5 * delta))
        .collect();
    for &c in centres {
        for k in -4..=4 {
            times.push(c + k as f64 * delta);
        }
    }
    times.push(t_end);
    times.sort_by(|a, b| a.partial_cmp(b).unwrap());
    times.dedup();
    times
}

fn ledgers() -> Vec<Check> {
    let mut out = Vec::new();
    let centres = [E * E, E * E * E];
    let delta = 0.02;
    let t_end = centres[1] + 0.1;
    let g = grid(4096, 800.0);
    let u0 = gaussian(&g, 1.0, 5.0);
    let law = WindowLaw::new(0.0, 1.0).unwrap();
    for alpha in [0.25, 0.5, 0.75] {
        let tr = match evolve(&u0, &EquationParams::new(alpha, 1e-3, t_end), &ledger_times(&centres, delta, t_end)) {
            Ok(t) => t,
            Err(e) => {
                out.push(failed(format!("alpha={alpha} run"), e));
                continue;
            }
        };
        for (label, t) in [("e^2", centres[0]), ("e^3", centres[1])] {
            match (step1_ledger(&tr, &law, alpha, t), step2_ledger(&tr, &law, alpha, t)) {
                (Ok(s1), Ok(s2)) => {
                    out.push(le(format!("alpha={alpha} t={label} step 1 closure"), s1.relative_residual(), 1e-6));
                    out.push(le(format!("alpha={alpha} t={label} step 2 closure"), s2.relative_residual(), 1e-6));
                    let (_, a32, a33) = s2.a3_split.unwrap_or((f64::NAN, f64::NAN, f64::NAN));
                    out.push(ge(format!("alpha={alpha} t={label} min(A32, A33)"), a32.min(a33), 0.0));
                }
                (Err(e), _) | (_, Err(e)) => out.push(failed(format!("alpha={alpha} t={label} ledger"), e)),
            }
        }
    }
    out
}

fn decay_proxy() -> Vec<Check> {
    let mut out = Vec::new();
    let alpha = 0.5;
    let law = WindowLaw::for_alpha(0.0, 1.0, alpha).unwrap();
    let g = grid(1 << 13, 1600.0);
    let mut times = vec![0.0];
    times.extend((10..=200).map(|t| t as f64));

    let u0 = gaussian(&g, 1.0, 5.0);
    match evolve(&u0, &EquationParams::new(alpha, 0.02, 200.0), &times).and_then(|tr| decay_report(&tr, &law, alpha)) {
        Ok(r) => {
            let ratio = r.running_min_at(10.0).unwrap() / r.running_min_at(200.0).unwrap();
            out.push(ge("gaussian: runmin J(10) / runmin J(200)", ratio, 5.0));
        }
        Err(e) => out.push(failed("gaussian decay run", e)),
    }

    let q = match solve_petviashvili(alpha, 1.0, &g, 1e-10) {
        Ok(w) => w.profile,
        Err(e) => {
            out.push(failed("soliton profile", e));
            return out;
        }
    };
    let run = evolve(&q, &EquationParams::new(alpha, 0.02, 200.0), &[0.0, 10.0, 200.0]);
    match run.and_then(|tr: Trajectory<f64>| {
        let j10 = weighted_j(&tr.states[1], 10.0, &law, alpha)?;
        let j200 = weighted_j(&tr.states[2], 200.0, &law, alpha)?;
        Ok(j200 / j10)
    }) {
        Ok(r) => out.push(le("soliton c=1: J(200) / J(10)", r, 0.2)),
        Err(e) => out.push(failed("soliton decay run", e)),
    }
    out
}

fn inequalities() -> Vec<Check> {
    let mut out = Vec::new();
    let alpha = 0.5;
    let fields = 1000;
    let length = TAU * 4.0;
    let ensemble_max = |n: usize, f: &dyn Fn(&Grid<f64>, &mut ChaCha8Rng) -> f64| {
        let g = grid(n, length);
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        (0..fields).fold(0.0f64, |m, _| m.max(f(&g, &mut rng)))
    };
    let gn = |p: f64| {
        move |g: &Grid<f64>, rng: &mut ChaCha8Rng| {
            let u = random_band_limited(g, 12, rng).unwrap();
            gn_check(&u, p, alpha).unwrap()
        }
    };
    for p in [4.0, 6.0] {
        let coarse = ensemble_max(64, &gn(p));
        let fine = ensemble_max(128, &gn(p));
        out.push(le(format!("GN p={p}: ensemble max change under N 64 -> 128 (max {fine:.4})"), rel(coarse, fine), 0.05));
    }
    let leib = |g: &Grid<f64>, rng: &mut ChaCha8Rng| {
        let f = random_band_limited(g, 12, rng).unwrap();
        let h = random_band_limited(g, 12, rng).unwrap();
        leibniz_check(&f, &h, alpha).unwrap()
    };
    let coarse = ensemble_max(64, &leib);
    let fine = ensemble_max(128, &leib);
    out.push(le(format!("Leibniz: ensemble max change under N 64 -> 128 (max {fine:.4})"), rel(coarse, fine), 0.05));

    // Fixed H^{(alpha+1)/2} norm, shifts over [-50, 50].
    let g = grid(256, 128.0);
    let s = (alpha + 1.0) / 2.0;
    let norm = 1.0;
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut worst_ratio: f64 = 0.0;
    let mut worst_excess: f64 = 0.0;
    let mut all_finite = true;
    for _ in 0..fields {
        let u = random_band_limited(&g, 30, &mut rng).unwrap();
        let u = u.scale(norm / sobolev_norm(&u, s));
        for i in 0..=20 {
            let shift = -50.0 + 5.0 * i as f64;
            let c = cubic_weight_check(&u, shift, alpha, norm).unwrap();
            all_finite &= c.ratio.is_finite();
            worst_ratio = worst_ratio.max(c.ratio);
            worst_excess = worst_excess.max(c.ratio / c.bound);
        }
    }
    out.push(flag("cubic ratio finite over 1000 fields x 21 shifts", all_finite));
    out.push(le(format!("cubic ratio / (C_emb |u|_H) (max ratio {worst_ratio:.4})"), worst_excess, 1.0));
    out
}

fn scratch_dir(tag: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("dgbo-{tag}-{}", std::process::id()));
    p
}

fn read_tree(root: &std::path::Path) -> std::io::Result<Vec<(PathBuf, Vec<u8>)>> {
    let mut out = Vec::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(dir) = stack.pop() {
        for entry in std::fs::read_dir(&dir)? {
            let path = entry?.path();
            if path.is_dir() {
                stack.push(path);
            } else {
                let bytes = std::fs::read(&path)?;
                out.push((path.strip_prefix(root).unwrap().to_path_buf(), bytes));
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Small random-data run exercising every output file.
pub fn reproducibility_config() -> RunConfig {
    RunConfig {
        version: 1,
        scenario: "reproducibility".into(),
        alpha: 0.5,
        grid: GridConfig { n: 256, length: 100.0 },
        dt: 0.01,
        t_end: 9.0,
        dealias: true,
        initial: InitialData::Random {
            max_mode: 25,
            amplitude: 0.5,
        },
        window: WindowConfig::default(),
        schedule: Schedule::Uniform { dt_sample: 0.5, start: 0.0 },
        diagnostics: Diagnostics {
            decay: true,
            l1_fit: true,
            ledgers: vec![4.0],
            ..Diagnostics::default()
        },
        expect: Expectations::default(),
        output: "run".into(),
        seed: 424242,
    }
}

fn reproducibility() -> Vec<Check> {
    let mut out = Vec::new();
    let cfg = reproducibility_config();
    let (a, b) = (scratch_dir("repro-a"), scratch_dir("repro-b"));
    let ra = crate::runner::run(&cfg, "reproducibility", &a);
    let rb = crate::runner::run(&cfg, "reproducibility", &b);
    match (ra, rb) {
        (Ok(_), Ok(_)) => match (read_tree(&a), read_tree(&b)) {
            (Ok(ta), Ok(tb)) => {
                let names_match = ta.len() == tb.len() && ta.iter().zip(&tb).all(|(x, y)| x.0 == y.0);
                let identical = names_match && ta.iter().zip(&tb).all(|(x, y)| x.1 == y.1);
                out.push(ge("output files written", ta.len() as f64, 10.0));
                out.push(flag("same seed, same bytes in every output file", identical));
            }
            _ => out.push(failed("reading outputs", "io error")),
        },
        (Err(e), _) | (_, Err(e)) => out.push(failed("reproducibility run", e)),
    }
    let _ = std::fs::remove_dir_all(&a);
    let _ = std::fs::remove_dir_all(&b);

    let g = grid(512, 37.5);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let u = random_band_limited(&g, 200, &mut rng).unwrap();
    let ck = Checkpoint::from_field(&u, 0.5, PI);
    let bytes = ck.to_bytes();
    let ok = match Checkpoint::from_bytes(&bytes) {
        Ok(back) => {
            back.to_bytes() == bytes
                && back.to_field().map(|f| f.samples().iter().zip(u.samples()).all(|(x, y)| x.to_bits() == y.to_bits())).unwrap_or(false)
        }
        Err(_) => false,
    };
    out.push(flag("checkpoint write -> read -> write is bit-identical", ok));
    out
}
