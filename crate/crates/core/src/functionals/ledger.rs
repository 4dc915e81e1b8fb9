//! Time-dependent weighted identities.
//!
//! With `K = 1/(t^a log^2 t)`, `phi = phi_alpha(x / lambda)` and
//! `phi' = phi_alpha'(x / lambda)`:
//!
//! ```text
//! Step 1:  d/dt[K int phi u] + A1 + A2 + A3 + A4 = 0
//!   A1 = -K' int phi u          A2 = K (lambda'/lambda) int (x/lambda) phi' u
//!   A3 = -K int phi D^{a+1} u_x  A4 = -K/(2 lambda) int phi' u^2
//!
//! Step 2:  1/2 (d/dt[K int phi u^2] + A1 + A2) + A3 + A4 = 0
//!   A1, A2 as above with u^2,    A3 = -K int phi u D^{a+1} u_x = A31 + A32 + A33
//!   A4 = -K/(3 lambda) int phi' u^3
//! ```
//!
//! The time derivative is a 5-point centered difference over samples spaced
//! `delta`; the same stencil at `2 delta` gives a Richardson error estimate.

use serde::{Deserialize, Serialize};

use crate::commutators::{decompose_with_spec, CommutatorSpec};
use crate::error::{Error, Result};
use crate::evolution::Trajectory;
use crate::scalar::{lit, Real};
use crate::spectral::{derivative, fractional_derivative, RealField};
use crate::weights::{WeightSpec, WindowLaw};

/// Relative closure target.
pub const LEDGER_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LedgerStep {
    One,
    Two,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdentityLedger<T> {
    pub step: LedgerStep,
    pub t: T,
    pub ddt_term: T,
    pub a1: T,
    pub a2: T,
    /// Dispersive term exactly as written, weight kept on `phi`.
    pub a3: T,
    /// Step 2 split `(A31, A32, A33)`.
    pub a3_split: Option<(T, T, T)>,
    pub a4: T,
    /// Step 1: `K/lambda int phi' D^{a+1} u`, the integrated-by-parts form
    /// of A3. Step 2: the commutator form `-K/2 <u, [H D^{a+2}, phi] u>`.
    pub a3_alternative: T,
    pub closure_residual: T,
    /// Largest term magnitude entering the closure.
    pub scale: T,
    /// Richardson estimate of the finite-difference error in `ddt_term`.
    pub fd_error: T,
    /// The finite-difference error alone exceeds the closure tolerance.
    pub fd_limited: bool,
}

impl<T: Real> IdentityLedger<T> {
    pub fn relative_residual(&self) -> T {
        if self.scale.is_zero() {
            self.closure_residual
        } else {
            self.closure_residual / self.scale
        }
    }

    pub fn closes(&self, tol: T) -> bool {
        self.relative_residual() <= tol
    }

    /// `A32 + A33`, the coercive part of the Step-2 dispersive term.
    pub fn coercive(&self) -> Option<T> {
        self.a3_split.map(|(_, b, c)| b + c)
    }
}

struct Stencil {
    centre: usize,
    delta: f64,
    /// Indices for offsets -4, -2, -1, 1, 2, 4.
    idx: [usize; 6],
}

fn stencil<T: Real>(traj: &Trajectory<T>, t: T) -> Result<Stencil> {
    let times: Vec<f64> = traj.times.iter().map(|v| v.to_f64_lossy()).collect();
    let t = t.to_f64_lossy();
    let tol = 1e-9 * t.abs().max(1.0);
    let centre = times
        .iter()
        .position(|&s| (s - t).abs() <= tol)
        .ok_or_else(|| Error::Trajectory(format!("no sample at t = {t}")))?;
    if centre + 1 >= times.len() {
        return Err(Error::Trajectory(format!("t = {t} is the last sample")));
    }
    let delta = times[centre + 1] - times[centre];
    let find = |k: i32| -> Result<usize> {
        let target = t + k as f64 * delta;
        times
            .iter()
            .position(|&s| (s - target).abs() <= 1e-6 * delta)
            .ok_or_else(|| {
                Error::Trajectory(format!(
                    "ledger at t = {t} needs a sample at {target} (uniform spacing {delta}, offsets -4..4)"
                ))
            })
    };
    let mut idx = [0; 6];
    for (slot, k) in idx.iter_mut().zip([-4, -2, -1, 1, 2, 4]) {
        *slot = find(k)?;
    }
    Ok(Stencil { centre, delta, idx })
}

struct WeightSamples<T: Real> {
    k: T,
    k_rate: T,
    lambda: T,
    log_rate: T,
    phi: RealField<T>,
    density: RealField<T>,
    spec: WeightSpec<T>,
}

fn weight_at<T: Real>(u: &RealField<T>, t: T, law: &WindowLaw<T>, alpha: T) -> Result<WeightSamples<T>> {
    let lambda = law.lambda(t)?;
    let spec = WeightSpec::new(alpha, lambda)?;
    Ok(WeightSamples {
        k: law.prefactor(t)?,
        k_rate: law.prefactor_rate(t)?,
        lambda,
        log_rate: law.lambda_log_rate(t)?,
        phi: spec.sample_primitive(u.grid())?,
        density: spec.sample_density(u.grid()),
        spec,
    })
}

fn functional<T: Real>(u: &RealField<T>, t: T, law: &WindowLaw<T>, alpha: T, power: i32) -> Result<T> {
    let lambda = law.lambda(t)?;
    let phi = WeightSpec::new(alpha, lambda)?.sample_primitive(u.grid())?;
    Ok(law.prefactor(t)? * u.map(|v| v.powi(power)).inner(&phi)?)
}

fn time_derivative<T: Real>(
    traj: &Trajectory<T>,
    st: &Stencil,
    law: &WindowLaw<T>,
    alpha: T,
    power: i32,
) -> Result<(T, T)> {
    let mut f = [T::zero(); 6];
    for (slot, &i) in f.iter_mut().zip(&st.idx) {
        *slot = functional(&traj.states[i], traj.times[i], law, alpha, power)?;
    }
    let [m4, m2, m1, p1, p2, p4] = f;
    let d = lit::<T>(st.delta);
    let eight = lit::<T>(8.0);
    let fine = (m2 - eight * m1 + eight * p1 - p2) / (lit::<T>(12.0) * d);
    let coarse = (m4 - eight * m2 + eight * p2 - p4) / (lit::<T>(24.0) * d);
    Ok((fine, (fine - coarse).abs() / lit(15.0)))
}

fn check_traj<T: Real>(traj: &Trajectory<T>, alpha: T) -> Result<()> {
    if traj.params.reverse {
        return Err(Error::Trajectory("ledgers apply to the forward equation only".into()));
    }
    if (traj.alpha - alpha).abs() > lit::<T>(1e-12) {
        return Err(Error::Trajectory(format!(
            "trajectory has alpha = {}, ledger asked for {alpha}",
            traj.alpha
        )));
    }
    Ok(())
}

fn x_over_lambda<T: Real>(u: &RealField<T>, lambda: T) -> RealField<T> {
    RealField::from_fn(u.grid(), |x| x / lambda)
}

/// Step-1 identity for the weighted mass at sample time `t`.
pub fn step1_ledger<T: Real>(traj: &Trajectory<T>, law: &WindowLaw<T>, alpha: T, t: T) -> Result<IdentityLedger<T>> {
    check_traj(traj, alpha)?;
    let st = stencil(traj, t)?;
    let u = &traj.states[st.centre];
    let t = traj.times[st.centre];
    let w = weight_at(u, t, law, alpha)?;
    let (ddt, fd_error) = time_derivative(traj, &st, law, alpha, 1)?;

    let a1 = -w.k_rate * u.inner(&w.phi)?;
    let xw = x_over_lambda(u, w.lambda).mul(&w.density)?;
    let a2 = w.k * w.log_rate * u.inner(&xw)?;
    let order = alpha + T::one();
    let disp = fractional_derivative(&derivative(u), order)?;
    let a3 = -w.k * disp.inner(&w.phi)?;
    let a3_alternative = w.k / w.lambda * fractional_derivative(u, order)?.inner(&w.density)?;
    let a4 = if traj.params.nonlinear {
        -w.k / (lit::<T>(2.0) * w.lambda) * u.mul(u)?.inner(&w.density)?
    } else {
        T::zero()
    };
    let terms = [ddt, a1, a2, a3, a4];
    let sum = terms.iter().fold(T::zero(), |s, v| s + *v);
    let scale = terms.iter().fold(T::zero(), |m, v| m.max(v.abs()));
    Ok(IdentityLedger {
        step: LedgerStep::One,
        t,
        ddt_term: ddt,
        a1,
        a2,
        a3,
        a3_split: None,
        a4,
        a3_alternative,
        closure_residual: sum.abs(),
        scale,
        fd_error,
        fd_limited: fd_error > lit::<T>(LEDGER_TOLERANCE) * scale,
    })
}

/// Step-2 identity for the weighted `L2` mass at sample time `t`.
pub fn step2_ledger<T: Real>(traj: &Trajectory<T>, law: &WindowLaw<T>, alpha: T, t: T) -> Result<IdentityLedger<T>> {
    check_traj(traj, alpha)?;
    let st = stencil(traj, t)?;
    let u = &traj.states[st.centre];
    let t = traj.times[st.centre];
    let w = weight_at(u, t, law, alpha)?;
    let (ddt, fd_error) = time_derivative(traj, &st, law, alpha, 2)?;

    let u2 = u.mul(u)?;
    let a1 = -w.k_rate * u2.inner(&w.phi)?;
    let xw = x_over_lambda(u, w.lambda).mul(&w.density)?;
    let a2 = w.k * w.log_rate * u2.inner(&xw)?;
    let disp = fractional_derivative(&derivative(u), alpha + T::one())?;
    let a3 = -w.k * u.mul(&disp)?.inner(&w.phi)?;

    let spec = CommutatorSpec::new(
        alpha + lit(2.0),
        0,
        T::zero(),
        w.phi.clone(),
        w.density.scale(T::one() / w.lambda),
    )?;
    let split = decompose_with_spec(u, &spec, &w.spec, alpha, w.k)?;
    let a4 = if traj.params.nonlinear {
        -w.k / (lit::<T>(3.0) * w.lambda) * u2.mul(u)?.inner(&w.density)?
    } else {
        T::zero()
    };
    let half = lit::<T>(0.5);
    let terms = [half * ddt, half * a1, half * a2, split.a31, split.a32, split.a33, a4];
    let sum = terms.iter().fold(T::zero(), |s, v| s + *v);
    let scale = terms.iter().fold(T::zero(), |m, v| m.max(v.abs()));
    Ok(IdentityLedger {
        step: LedgerStep::Two,
        t,
        ddt_term: ddt,
        a1,
        a2,
        a3,
        a3_split: Some((split.a31, split.a32, split.a33)),
        a4,
        a3_alternative: split.direct,
        closure_residual: sum.abs(),
        scale,
        fd_error: half * fd_error,
        fd_limited: half * fd_error > lit::<T>(LEDGER_TOLERANCE) * scale,
    })
}
