//! Pseudospectral toolkit for the dispersion-generalized Benjamin-Ono equation
//!
//! ```text
//! u_t - D^{alpha+1} u_x + u u_x = 0,    0 <= alpha <= 1,
//! ```
//!
//! on a large periodic box: Fourier multipliers, the algebraic weight family
//! and its transform, commutator expansions, solitary waves, time
//! integration and the weighted-functional diagnostics.
//!
//! Everything is generic over [`Real`] (`f32` or `f64`); the `*64` aliases
//! below fix the scalar to `f64`.

// `!(x > 0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commutators;
pub mod error;
pub mod evolution;
pub mod functionals;
pub mod ground_state;
pub mod oracle;
pub mod quadrature;
pub mod scalar;
pub mod special;
pub mod spectral;
pub mod weights;

pub use error::{Error, Result};
pub use scalar::Real;

pub type Grid64 = spectral::Grid<f64>;
pub type RealField64 = spectral::RealField<f64>;
pub type SpectralField64 = spectral::SpectralField<f64>;
pub type WeightSpec64 = weights::WeightSpec<f64>;
pub type WindowLaw64 = weights::WindowLaw<f64>;
pub type CommutatorSpec64 = commutators::CommutatorSpec<f64>;
pub type SolitaryWave64 = ground_state::SolitaryWave<f64>;
pub type EquationParams64 = evolution::EquationParams<f64>;
pub type Trajectory64 = evolution::Trajectory<f64>;
pub type IdentityLedger64 = functionals::IdentityLedger<f64>;
pub type DecayReport64 = functionals::DecayReport<f64>;

pub type Grid32 = spectral::Grid<f32>;
pub type RealField32 = spectral::RealField<f32>;
