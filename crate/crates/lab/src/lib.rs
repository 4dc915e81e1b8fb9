//! Experiment layer on top of `dgbo-core`: JSON run configurations, the
//! checkpoint format, built-in scenarios, the run pipeline and the
//! verification suites.

// `!(x > 0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod checkpoint;
pub mod config;
pub mod criteria;
pub mod error;
pub mod runner;
pub mod scenarios;
pub mod verify;

pub use error::LabError;
