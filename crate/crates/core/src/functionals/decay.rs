use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evolution::Trajectory;
use crate::scalar::{lit, Real};
use crate::spectral::{fractional_derivative, hilbert, RealField};
use crate::weights::{WeightSpec, WindowLaw};

/// The three weighted integrals making up `J`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JTerms<T> {
    pub mass: T,
    pub derivative: T,
    pub hilbert_derivative: T,
}

impl<T: Real> JTerms<T> {
    pub fn total(&self) -> T {
        self.mass + self.derivative + self.hilbert_derivative
    }
}

/// `int (u^2, (D^mu u)^2, (H D^mu u)^2) phi_alpha'(x / lambda(t)) dx` with
/// `mu = (alpha + 1) / 2`.
pub fn weighted_j_terms<T: Real>(u: &RealField<T>, t: T, law: &WindowLaw<T>, alpha: T) -> Result<JTerms<T>> {
    let lambda = law.lambda(t)?;
    let weight = WeightSpec::new(alpha, lambda)?.sample_density(u.grid());
    let du = fractional_derivative(u, (alpha + T::one()) / lit(2.0))?;
    let hdu = hilbert(&du);
    let sq = |f: &RealField<T>| f.map(|v| v * v).inner(&weight);
    Ok(JTerms {
        mass: sq(u)?,
        derivative: sq(&du)?,
        hilbert_derivative: sq(&hdu)?,
    })
}

pub fn weighted_j<T: Real>(u: &RealField<T>, t: T, law: &WindowLaw<T>, alpha: T) -> Result<T> {
    weighted_j_terms(u, t, law, alpha).map(|j| j.total())
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DecayReport<T> {
    pub times: Vec<T>,
    pub j_values: Vec<T>,
    pub running_min: Vec<T>,
    pub law: WindowLaw<T>,
}

impl<T: Real> DecayReport<T> {
    /// `runmin(first) / runmin(last)`; infinite when the minimum reaches 0.
    pub fn decay_factor(&self) -> T {
        match (self.running_min.first(), self.running_min.last()) {
            (Some(&a), Some(&b)) if b > T::zero() => a / b,
            (Some(_), Some(_)) => T::infinity(),
            _ => T::one(),
        }
    }

    /// Running minimum at the last sample not after `t`.
    pub fn running_min_at(&self, t: T) -> Option<T> {
        self.times.iter().rposition(|&s| s <= t).map(|i| self.running_min[i])
    }
}

/// `J` along every trajectory sample at or after `law.t_min()`.
pub fn decay_report<T: Real>(traj: &Trajectory<T>, law: &WindowLaw<T>, alpha: T) -> Result<DecayReport<T>> {
    let mut times = Vec::new();
    let mut j_values = Vec::new();
    let mut running_min = Vec::new();
    let mut best = T::infinity();
    for (t, state) in traj.times.iter().zip(&traj.states) {
        if *t < law.t_min() {
            continue;
        }
        let j = weighted_j(state, *t, law, alpha)?;
        best = best.min(j);
        times.push(*t);
        j_values.push(j);
        running_min.push(best);
    }
    if times.is_empty() {
        return Err(Error::Trajectory(format!(
            "no samples at or after t_min = {}",
            law.t_min()
        )));
    }
    Ok(DecayReport {
        times,
        j_values,
        running_min,
        law: *law,
    })
}

/// `t_n = (log n)^{1 / (epsilon (alpha + 2))}`.
pub fn sample_time<T: Real>(n: u64, epsilon: T, alpha: T) -> T {
    let n = lit::<T>(n as f64);
    n.ln().powf(T::one() / (epsilon * (alpha + lit(2.0))))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleSchedule<T> {
    /// Index `n` of the first returned time.
    pub first_index: u64,
    pub times: Vec<T>,
}

/// The first `count` times `t_n`, `n >= 2`, with `t_n >= t_min`.
pub fn sample_times<T: Real>(epsilon: T, alpha: T, count: usize, t_min: T) -> Result<SampleSchedule<T>> {
    if !(epsilon > T::zero() && epsilon.is_finite()) {
        return Err(Error::param("epsilon", "must be positive"));
    }
    if !(alpha >= T::zero()) {
        return Err(Error::param("alpha", "must be nonnegative"));
    }
    if count < 2 {
        return Err(Error::param("count", "at least two times are required"));
    }
    // log n >= t_min^{eps (alpha+2)}
    let p = epsilon * (alpha + lit(2.0));
    let need = t_min.max(T::zero()).powf(p);
    let guess = need.exp().to_f64_lossy();
    if !(guess < 1e15) {
        return Err(Error::param("t_min", "first index would exceed 1e15"));
    }
    let mut first = (guess.floor() as u64).max(2);
    while first > 2 && sample_time(first - 1, epsilon, alpha) >= t_min {
        first -= 1;
    }
    while sample_time(first, epsilon, alpha) < t_min {
        first += 1;
    }
    let times = (0..count as u64).map(|i| sample_time(first + i, epsilon, alpha)).collect();
    Ok(SampleSchedule { first_index: first, times })
}
