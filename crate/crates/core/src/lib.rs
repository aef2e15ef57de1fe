//! Ground-state nonlinearity measures for one-dimensional quantum oscillators.
//!
//! Two measures are provided for every oscillator in the catalog:
//!
//! * `eta_b`, the Bures distance between the ground state and the ground
//!   state of a reference harmonic oscillator, rescaled to `[0, 1]`;
//! * `eta_ng`, the relative-entropy non-Gaussianity of the ground state,
//!   which for a pure state reduces to `h(sqrt(det sigma))`.
//!
//! The catalog covers the Morse, modified Pöschl-Teller, modified isotonic
//! and Fellows-Smith potentials plus weakly perturbed harmonic oscillators.
//! A finite-difference Schrödinger solver and a truncated number-basis
//! calculator in [`oracle`] serve as independent checks on the analytic
//! states and the closed-form perturbative results.
//!
//! Units: `hbar = m = 1`.

pub mod cli;
pub mod error;
pub mod measures;
pub mod numerics;
pub mod oracle;
pub mod perturbation;
pub mod potentials;
pub mod specfun;

pub use error::{Error, Result};
pub use measures::{measure_report, GaussianState, MeasureReport};
pub use numerics::{CovarianceMatrix, Grid, GridOptions, SampledWavefunction};
pub use potentials::{PotentialSpec, WellStructure};
