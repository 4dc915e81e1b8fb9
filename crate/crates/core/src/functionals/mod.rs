//! Diagnostics built on top of evolved states: the weighted decay functional,
//! the Step-1/Step-2 identity ledgers, the virial identity and inequality
//! checks.

mod decay;
mod inequalities;
mod ledger;
mod virial;

pub use decay::{decay_report, sample_time, sample_times, weighted_j, weighted_j_terms, DecayReport, JTerms, SampleSchedule};
pub use inequalities::{
    cubic_weight_check, embedding_constant, gn_check, gn_exponent, leibniz_check, sobolev_norm, CubicWeightCheck,
};
pub use ledger::{step1_ledger, step2_ledger, IdentityLedger, LedgerStep, LEDGER_TOLERANCE};
pub use virial::{first_moment, virial, VirialReport};

use crate::scalar::{lit, Real};
use crate::spectral::RealField;

/// Fraction of `int |g|` carried by the outer 5% of the box on each side.
pub fn seam_fraction<T: Real>(g: &RealField<T>) -> T {
    let grid = g.grid();
    let edge = lit::<T>(0.45) * grid.length();
    let mut outer = T::zero();
    let mut total = T::zero();
    for (x, v) in grid.nodes().into_iter().zip(g.samples()) {
        total += v.abs();
        if x.abs() >= edge {
            outer += v.abs();
        }
    }
    if total.is_zero() {
        T::zero()
    } else {
        outer / total
    }
}

/// Largest `|u|` over the outer 5% of the box on each side.
pub fn edge_amplitude<T: Real>(u: &RealField<T>) -> T {
    let grid = u.grid();
    let edge = lit::<T>(0.45) * grid.length();
    grid.nodes()
        .into_iter()
        .zip(u.samples())
        .filter(|(x, _)| x.abs() >= edge)
        .fold(T::zero(), |m, (_, v)| m.max(v.abs()))
}
