//! Phase-space toolkit for hyperbolic Pöschl-Teller two-level systems.
//!
//! Closed-form Wigner functions of the ground and first excited states and
//! their superpositions, Wigner currents and stagnation points, one-mode
//! non-Gaussianity quantifiers and a two-mode separability stack. Every
//! closed form has an independent quadrature oracle next to it.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bipartite;
pub mod error;
pub mod flow;
pub mod infoprofile;
pub mod ode;
pub mod ptsystem;
pub mod quadrature;
pub mod specfun;
pub mod taylor;
pub mod wigner;

pub use bipartite::{MomentsMatrix, SeparabilityReport, SymplecticSpectrum, TwoModeCovariance};
pub use error::{Error, Result};
pub use flow::{FlowField, StagnationKind, StagnationPoint};
pub use infoprofile::{CovarianceData, MomentTable, Provenance};
pub use num_complex::Complex64;
pub use ptsystem::{ClassicalRegime, PTParams, PhasePoint, TwoLevelState};
pub use specfun::EigenstateIndex;
pub use wigner::{Grid, WignerField};
