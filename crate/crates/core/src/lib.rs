//! Continuous-time quantum walk sampling and classical Markov-chain mixing.
//!
//! The crate is organized bottom-up:
//!
//! - [`graph`] builds symmetric transition matrices for the supported graph families.
//! - [`markov`] holds the classical machinery: distances, spectral gap, mixing times.
//! - [`spectral`] diagonalizes `P` and builds `U_t`, `P_t`, the finite and
//!   infinite Cesaro matrices and the quantum mixing times.
//! - [`sampler`] runs the single- and double-loop measurement samplers.
//! - [`lab`] checks the torus, hypercube and complete-graph results numerically.
//! - [`trotter`] decomposes torus walks by edge coloring and measures Lie-product error.
//! - [`io`] reads and writes the JSON artifacts used by the CLI.

pub mod config;
pub mod error;
pub mod graph;
pub mod io;
pub mod lab;
pub mod markov;
pub mod sampler;
pub mod spectral;
pub mod trotter;

pub use config::Tolerances;
pub use error::{Error, Result};
pub use graph::{GraphSpec, TransitionMatrix};
pub use markov::{Distribution, MixingReport};
pub use spectral::{EigenvalueClasses, SnapshotKind, Spectrum, StochasticSnapshot};

/// Dense real matrix, column `x` holds the transition probabilities out of state `x`.
pub type Matrix = nalgebra::DMatrix<f64>;
/// Dense complex matrix.
pub type CMatrix = nalgebra::DMatrix<num_complex::Complex64>;
