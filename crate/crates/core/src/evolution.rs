//! Time integration of `u_t - D^{alpha+1} u_x + u u_x = 0` on the periodic
//! grid.
//!
//! In Fourier variables `u^_t = i k |k|^{alpha+1} u^ - (i k / 2) (u^2)^`. The
//! linear part is propagated exactly by an integrating factor and the
//! conservative nonlinear term is stepped with classical RK4.

use num_complex::Complex;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::error::{Error, Result};
use crate::scalar::{lit, Real};
use crate::spectral::{abs_pow, dealias_in_place, fractional_derivative, Grid, RealField};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EquationParams<T> {
    pub alpha: T,
    pub dealias: bool,
    pub dt: T,
    pub t_end: T,
    /// When false the `u u_x` term is dropped.
    #[serde(default = "yes")]
    pub nonlinear: bool,
    /// Integrate the time-reversed system `u_t + D^{alpha+1} u_x - u u_x = 0`.
    #[serde(default)]
    pub reverse: bool,
}

fn yes() -> bool {
    true
}

impl<T: Real> EquationParams<T> {
    pub fn new(alpha: T, dt: T, t_end: T) -> Self {
        Self {
            alpha,
            dealias: true,
            dt,
            t_end,
            nonlinear: true,
            reverse: false,
        }
    }

    pub fn linear(mut self) -> Self {
        self.nonlinear = false;
        self
    }

    pub fn reversed(mut self) -> Self {
        self.reverse = true;
        self
    }

    /// Checks the parameters against the initial datum, including the
    /// transport bound `dt <= 0.5 h / max(1, max|u0|)`.
    pub fn validate(&self, u0: &RealField<T>) -> Result<()> {
        if !(self.alpha >= T::zero() && self.alpha <= T::one()) {
            return Err(Error::param("alpha", format!("must lie in [0, 1], got {}", self.alpha)));
        }
        if !(self.dt > T::zero() && self.dt.is_finite()) {
            return Err(Error::param("dt", "must be positive"));
        }
        if !(self.t_end > T::zero() && self.t_end.is_finite()) {
            return Err(Error::param("t_end", "must be positive"));
        }
        let bound = self.dt_bound(u0);
        if self.dt > bound {
            return Err(Error::TimeStepTooLarge {
                dt: self.dt.to_f64_lossy(),
                bound: bound.to_f64_lossy(),
            });
        }
        Ok(())
    }

    pub fn dt_bound(&self, u0: &RealField<T>) -> T {
        lit::<T>(0.5) * u0.grid().spacing() / u0.max_abs().max(T::one())
    }
}

/// Mass `I = int u`, `M = int u^2` and energy
/// `E = 1/2 int (D^{(1+alpha)/2} u)^2 - 1/6 int u^3`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConservedTriple<T> {
    pub mass: T,
    pub l2: T,
    pub energy: T,
}

pub fn conserved<T: Real>(u: &RealField<T>, alpha: T) -> Result<ConservedTriple<T>> {
    let du = fractional_derivative(u, (T::one() + alpha) / lit(2.0))?;
    let h = u.grid().spacing();
    let mut mass = T::zero();
    let mut l2 = T::zero();
    let mut cubic = T::zero();
    for &v in u.samples() {
        mass += v;
        l2 += v * v;
        cubic += v * v * v;
    }
    let kinetic: T = du.samples().iter().map(|&v| v * v).sum();
    Ok(ConservedTriple {
        mass: mass * h,
        l2: l2 * h,
        energy: (kinetic / lit(2.0) - cubic / lit(6.0)) * h,
    })
}

#[derive(Debug, Clone)]
pub struct Trajectory<T: Real> {
    pub alpha: T,
    pub params: EquationParams<T>,
    pub times: Vec<T>,
    pub states: Vec<RealField<T>>,
    pub conserved: Vec<ConservedTriple<T>>,
    pub l1_norms: Vec<T>,
}

impl<T: Real> Trajectory<T> {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn grid(&self) -> Option<&Grid<T>> {
        self.states.first().map(|s| s.grid())
    }

    /// Index of the sample closest to `t`.
    pub fn nearest(&self, t: T) -> Option<usize> {
        (0..self.times.len()).min_by(|&a, &b| {
            let da = (self.times[a] - t).abs();
            let db = (self.times[b] - t).abs();
            da.partial_cmp(&db).unwrap_or(std::cmp::Ordering::Equal)
        })
    }

    /// Largest relative drift of `M` and `E` from the first sample, and the
    /// absolute drift of `I`.
    pub fn drifts(&self) -> (T, T, T) {
        let Some(first) = self.conserved.first() else {
            return (T::zero(), T::zero(), T::zero());
        };
        let rel = |a: T, b: T| {
            if b.is_zero() {
                (a - b).abs()
            } else {
                ((a - b) / b).abs()
            }
        };
        let mut out = (T::zero(), T::zero(), T::zero());
        for c in &self.conserved {
            out.0 = out.0.max((c.mass - first.mass).abs());
            out.1 = out.1.max(rel(c.l2, first.l2));
            out.2 = out.2.max(rel(c.energy, first.energy));
        }
        out
    }
}

struct Stepper<T: Real> {
    grid: Grid<T>,
    /// `i k |k|^{alpha+1}` with the sign of the system, Nyquist set to 0.
    omega: Vec<T>,
    /// `-(i k / 2)`, with the sign of the system; zero at Nyquist.
    nl: Vec<Complex<T>>,
    dealias: bool,
    nonlinear: bool,
    scratch: Vec<Complex<T>>,
}

impl<T: Real> Stepper<T> {
    fn new(grid: &Grid<T>, params: &EquationParams<T>) -> Self {
        let n = grid.n_points();
        let sign = if params.reverse { -T::one() } else { T::one() };
        let order = params.alpha + T::one();
        let mut omega = Vec::with_capacity(n);
        let mut nl = Vec::with_capacity(n);
        for i in 0..n {
            if grid.is_nyquist(i) {
                omega.push(T::zero());
                nl.push(Complex::new(T::zero(), T::zero()));
            } else {
                let k = grid.wavenumber(i);
                omega.push(sign * k * abs_pow(k, order));
                nl.push(Complex::new(T::zero(), -sign * k / lit(2.0)));
            }
        }
        Self {
            grid: grid.clone(),
            omega,
            nl,
            dealias: params.dealias,
            nonlinear: params.nonlinear,
            scratch: vec![Complex::new(T::zero(), T::zero()); n],
        }
    }

    fn factor(&self, h: T) -> Vec<Complex<T>> {
        self.omega
            .iter()
            .map(|&w| Complex::from_polar(T::one(), w * h))
            .collect()
    }

    /// `h N(v)` written into `out`.
    fn rhs(&mut self, v: &[Complex<T>], h: T, out: &mut [Complex<T>]) {
        if !self.nonlinear {
            out.iter_mut().for_each(|c| *c = Complex::new(T::zero(), T::zero()));
            return;
        }
        self.scratch.copy_from_slice(v);
        self.grid.inverse_in_place(&mut self.scratch);
        for c in self.scratch.iter_mut() {
            *c = Complex::new(c.re * c.re, T::zero());
        }
        self.grid.forward_in_place(&mut self.scratch);
        if self.dealias {
            dealias_in_place(&self.grid, &mut self.scratch);
        }
        for ((o, s), m) in out.iter_mut().zip(&self.scratch).zip(&self.nl) {
            *o = *s * *m * h;
        }
    }

    /// One integrating-factor RK4 step of length `h`, with `e = exp(omega h/2)`.
    fn step(&mut self, u: &mut [Complex<T>], h: T, e: &[Complex<T>]) {
        let n = u.len();
        let zero = Complex::new(T::zero(), T::zero());
        let half = lit::<T>(0.5);
        let mut a = vec![zero; n];
        let mut b = vec![zero; n];
        let mut c = vec![zero; n];
        let mut d = vec![zero; n];
        let mut tmp = vec![zero; n];

        self.rhs(u, h, &mut a);
        for i in 0..n {
            tmp[i] = e[i] * (u[i] + a[i].scale(half));
        }
        self.rhs(&tmp, h, &mut b);
        for i in 0..n {
            tmp[i] = e[i] * u[i] + b[i].scale(half);
        }
        self.rhs(&tmp, h, &mut c);
        for i in 0..n {
            tmp[i] = e[i] * e[i] * u[i] + e[i] * c[i];
        }
        self.rhs(&tmp, h, &mut d);
        let sixth = T::one() / lit(6.0);
        for i in 0..n {
            let e2 = e[i] * e[i];
            u[i] = e2 * u[i] + (e2 * a[i] + e[i] * (b[i] + c[i]).scale(lit(2.0)) + d[i]).scale(sixth);
        }
    }
}

/// Integrates from `u0` and records the state at each requested time.
///
/// The initial datum is dealiased first when dealiasing is on, so the
/// recorded `t = 0` state is the one actually evolved.
pub fn evolve<T: Real>(
    u0: &RealField<T>,
    params: &EquationParams<T>,
    sample_times: &[T],
) -> Result<Trajectory<T>> {
    params.validate(u0)?;
    if sample_times.is_empty() {
        return Err(Error::param("sample_times", "at least one sample time is required"));
    }
    for (i, &t) in sample_times.iter().enumerate() {
        if !(t >= T::zero() && t <= params.t_end) {
            return Err(Error::param("sample_times", format!("time {t} lies outside [0, t_end]")));
        }
        if i > 0 && t <= sample_times[i - 1] {
            return Err(Error::param("sample_times", "times must be strictly increasing"));
        }
    }

    let grid = u0.grid().clone();
    let mut u = grid.forward_real(u0.samples());
    for (i, c) in u.iter_mut().enumerate() {
        if grid.is_nyquist(i) {
            *c = Complex::new(T::zero(), T::zero());
        }
    }
    if params.dealias {
        dealias_in_place(&grid, &mut u);
    }

    let mut stepper = Stepper::new(&grid, params);
    let full = stepper.factor(params.dt / lit(2.0));
    let mut traj = Trajectory {
        alpha: params.alpha,
        params: *params,
        times: Vec::with_capacity(sample_times.len()),
        states: Vec::with_capacity(sample_times.len()),
        conserved: Vec::with_capacity(sample_times.len()),
        l1_norms: Vec::with_capacity(sample_times.len()),
    };

    let mut t = T::zero();
    let mut last_good = RealField::from_trusted(&grid, grid.inverse_real(&u));
    let mut last_good_time = T::zero();
    let slack = lit::<T>(1e-9) * params.dt;
    for &target in sample_times {
        let start = t;
        let mut k = 0usize;
        while t < target {
            let next = start + T::of_usize(k + 1) * params.dt;
            if next < target - slack {
                stepper.step(&mut u, params.dt, &full);
                t = next;
            } else {
                let h = target - t;
                let e = stepper.factor(h / lit(2.0));
                stepper.step(&mut u, h, &e);
                t = target;
            }
            k += 1;
            if u.iter().any(|c| !(c.re.is_finite() && c.im.is_finite())) {
                return Err(Error::BlowUp {
                    t: t.to_f64_lossy(),
                    last_good_time: last_good_time.to_f64_lossy(),
                    last_good: last_good.samples().iter().map(|v| v.to_f64_lossy()).collect(),
                });
            }
        }
        let state = RealField::from_trusted(&grid, grid.inverse_real(&u));
        traj.conserved.push(conserved(&state, params.alpha)?);
        traj.l1_norms.push(state.norm_l1());
        traj.times.push(target);
        last_good = state.clone();
        last_good_time = target;
        traj.states.push(state);
    }
    Ok(traj)
}

/// Least-squares fit `log ||u(t)||_1 = log c0 + a log <t>`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct L1Fit<T> {
    pub a_hat: T,
    pub c0: T,
    /// 95% interval for `a_hat`.
    pub interval: (T, T),
    /// `a_hat < 1 / (2 + alpha)`.
    pub admissible: bool,
    /// Zero solution: no fit is possible and `a_hat = c0 = 0` is reported.
    pub degenerate: bool,
}

pub fn l1_monitor<T: Real>(traj: &Trajectory<T>) -> Result<L1Fit<T>> {
    let n = traj.len();
    if n < 3 {
        return Err(Error::Degenerate(format!("need at least 3 samples for the L1 fit, got {n}")));
    }
    if traj.l1_norms.iter().any(|v| !(*v > T::zero())) {
        let zero = T::zero();
        return Ok(L1Fit {
            a_hat: zero,
            c0: zero,
            interval: (zero, zero),
            admissible: true,
            degenerate: true,
        });
    }
    let xs: Vec<f64> = traj
        .times
        .iter()
        .map(|t| (1.0 + t.to_f64_lossy().powi(2)).sqrt().ln())
        .collect();
    let ys: Vec<f64> = traj.l1_norms.iter().map(|v| v.to_f64_lossy().ln()).collect();
    let nf = n as f64;
    let mx = xs.iter().sum::<f64>() / nf;
    let my = ys.iter().sum::<f64>() / nf;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if !(sxx > 0.0) {
        return Err(Error::Degenerate("sample times do not spread in log<t>".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    let se = (rss / (nf - 2.0) / sxx).sqrt();
    let quantile = StudentsT::new(0.0, 1.0, nf - 2.0)
        .map_err(|e| Error::Degenerate(e.to_string()))?
        .inverse_cdf(0.975);
    let threshold = 1.0 / (2.0 + traj.alpha.to_f64_lossy());
    Ok(L1Fit {
        a_hat: lit(slope),
        c0: lit(intercept.exp()),
        interval: (lit(slope - quantile * se), lit(slope + quantile * se)),
        admissible: slope < threshold,
        degenerate: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{PI, TAU};

    #[test]
    fn conserved_examples() {
        let g = Grid::<f64>::new(64, TAU).unwrap();
        let u = RealField::from_fn(&g, f64::sin);
        let c = conserved(&u, 1.0).unwrap();
        assert!(c.mass.abs() < 1e-14);
        assert!((c.l2 - PI).abs() < 1e-13);
        assert!((c.energy - PI / 2.0).abs() < 1e-13);

        let g = Grid::<f64>::new(32, 10.0).unwrap();
        let k = 1.5;
        let c = conserved(&RealField::constant(&g, k), 0.5).unwrap();
        assert!((c.mass - k * 10.0).abs() < 1e-13);
        assert!((c.l2 - k * k * 10.0).abs() < 1e-13);
        assert!((c.energy + k.powi(3) * 10.0 / 6.0).abs() < 1e-13);
    }

    #[test]
    fn zero_stays_zero() {
        let g = Grid::<f64>::new(64, 20.0).unwrap();
        let p = EquationParams::new(0.5, 0.01, 1.0);
        let traj = evolve(&RealField::zeros(&g), &p, &[0.5, 1.0]).unwrap();
        assert!(traj.states.iter().all(|s| s.is_zero()));
        let fit = l1_monitor(&evolve(&RealField::zeros(&g), &p, &[0.1, 0.5, 1.0]).unwrap()).unwrap();
        assert!(fit.degenerate && fit.a_hat == 0.0 && fit.c0 == 0.0);
    }

    #[test]
    fn linear_mode_phase() {
        let length = TAU * 4.0;
        let g = Grid::<f64>::new(64, length).unwrap();
        let k0 = 3.0 * TAU / length;
        let eps = 1e-8;
        let alpha = 0.5;
        let u0 = RealField::from_fn(&g, |x| eps * (k0 * x).cos());
        let p = EquationParams::new(alpha, 0.01, 5.0);
        let traj = evolve(&u0, &p, &[2.345, 5.0]).unwrap();
        for (t, s) in traj.times.iter().zip(&traj.states) {
            let w = k0 * k0.abs().powf(alpha + 1.0);
            let exact = RealField::from_fn(&g, |x| eps * (k0 * x + w * t).cos());
            assert!(s.max_abs_diff(&exact).unwrap() <= 1e-12);
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        let g = Grid::<f64>::new(64, 20.0).unwrap();
        let u0 = RealField::from_fn(&g, |x| 4.0 * (-x * x).exp());
        assert!(matches!(
            evolve(&u0, &EquationParams::new(0.5, 0.1, 1.0), &[1.0]),
            Err(Error::TimeStepTooLarge { .. })
        ));
        let p = EquationParams::new(0.5, 0.01, 1.0);
        assert!(evolve(&u0, &p, &[2.0]).is_err());
        assert!(evolve(&u0, &p, &[0.5, 0.5]).is_err());
        assert!(evolve(&u0, &EquationParams::new(1.5, 0.01, 1.0), &[1.0]).is_err());
    }

    #[test]
    fn reversal_recovers_data() {
        let g = Grid::<f64>::new(256, 60.0).unwrap();
        let u0 = RealField::from_fn(&g, |x| (-(x / 3.0).powi(2)).exp());
        let p = EquationParams::new(0.5, 0.01, 5.0);
        let fwd = evolve(&u0, &p, &[5.0]).unwrap();
        let back = evolve(&fwd.states[0], &p.reversed(), &[5.0]).unwrap();
        let start = evolve(&u0, &p, &[0.0]).unwrap();
        assert!(back.states[0].max_abs_diff(&start.states[0]).unwrap() <= 1e-8);
    }

    #[test]
    fn mass_is_exact() {
        let g = Grid::<f64>::new(256, 60.0).unwrap();
        let u0 = RealField::from_fn(&g, |x| (-(x / 3.0).powi(2)).exp());
        let p = EquationParams::new(0.5, 0.01, 10.0);
        let traj = evolve(&u0, &p, &[1.0, 5.0, 10.0]).unwrap();
        let (dm, _, _) = traj.drifts();
        assert!(dm <= 1e-13);
    }
}
