use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evolution::Trajectory;
use crate::scalar::{lit, Real};
use crate::spectral::RealField;

use super::edge_amplitude;

/// Largest `|u|` tolerated in the outer 5% of the box.
pub const LOCALIZATION_THRESHOLD: f64 = 1e-8;

/// `int x u dx` on the grid.
pub fn first_moment<T: Real>(u: &RealField<T>) -> T {
    let g = u.grid();
    g.nodes().into_iter().zip(u.samples()).fold(T::zero(), |s, (x, v)| s + x * *v) * g.spacing()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VirialReport<T> {
    /// Interior sample times where the derivative is taken.
    pub times: Vec<T>,
    /// `d/dt int x u` by centered differences.
    pub lhs: Vec<T>,
    /// `1/2 int u^2`.
    pub rhs: Vec<T>,
    /// `max |lhs - rhs| / rhs`.
    pub max_mismatch: T,
    /// Least-squares slope of `int x u` against `t` over all samples.
    pub slope: T,
    /// `M(t_0) / 2`.
    pub expected_slope: T,
    pub slope_error: T,
}

/// Checks `d/dt int x u = 1/2 int u^2` along a trajectory of localized states.
///
/// Derivatives use the 5-point stencil where four uniform neighbours exist
/// and the 3-point stencil otherwise.
pub fn virial<T: Real>(traj: &Trajectory<T>) -> Result<VirialReport<T>> {
    let n = traj.len();
    if n < 3 {
        return Err(Error::Trajectory("virial needs at least 3 samples".into()));
    }
    for (t, s) in traj.times.iter().zip(&traj.states) {
        let edge = edge_amplitude(s);
        if edge > lit::<T>(LOCALIZATION_THRESHOLD) {
            return Err(Error::Trajectory(format!(
                "state at t = {t} is not localized (|u| = {edge:e} near the box ends)"
            )));
        }
    }
    if traj.params.reverse {
        return Err(Error::Trajectory("virial applies to the forward equation only".into()));
    }
    let moments: Vec<T> = traj.states.iter().map(first_moment).collect();
    let ts = &traj.times;
    let uniform = |i: usize, j: usize| {
        let a = ts[i + 1] - ts[i];
        let b = ts[j + 1] - ts[j];
        (a - b).abs() <= lit::<T>(1e-9) * a.abs()
    };
    let mut times = Vec::new();
    let mut lhs = Vec::new();
    let mut rhs = Vec::new();
    let mut max_mismatch = T::zero();
    for i in 1..n - 1 {
        let d = if i >= 2 && i + 2 < n && (i - 2..i + 2).all(|j| uniform(j, i)) {
            let h = ts[i + 1] - ts[i];
            (moments[i - 2] - lit::<T>(8.0) * moments[i - 1] + lit::<T>(8.0) * moments[i + 1] - moments[i + 2])
                / (lit::<T>(12.0) * h)
        } else if uniform(i - 1, i) {
            (moments[i + 1] - moments[i - 1]) / (ts[i + 1] - ts[i - 1])
        } else {
            continue;
        };
        let r = traj.conserved[i].l2 / lit(2.0);
        let mismatch = if r.is_zero() { d.abs() } else { ((d - r) / r).abs() };
        max_mismatch = max_mismatch.max(mismatch);
        times.push(ts[i]);
        lhs.push(d);
        rhs.push(r);
    }
    if times.is_empty() {
        return Err(Error::Trajectory("no interior sample with uniform neighbours".into()));
    }

    let nf = lit::<T>(n as f64);
    let mt = ts.iter().fold(T::zero(), |s, v| s + *v) / nf;
    let mm = moments.iter().fold(T::zero(), |s, v| s + *v) / nf;
    let mut sxx = T::zero();
    let mut sxy = T::zero();
    for (t, m) in ts.iter().zip(&moments) {
        sxx += (*t - mt) * (*t - mt);
        sxy += (*t - mt) * (*m - mm);
    }
    let slope = sxy / sxx;
    let expected_slope = traj.conserved[0].l2 / lit(2.0);
    let slope_error = if expected_slope.is_zero() {
        slope.abs()
    } else {
        ((slope - expected_slope) / expected_slope).abs()
    };
    Ok(VirialReport {
        times,
        lhs,
        rhs,
        max_mismatch,
        slope,
        expected_slope,
        slope_error,
    })
}
