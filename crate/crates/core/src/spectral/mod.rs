//! Quantum-walk core: spectrum of `P`, the walk `U_t = e^{-iPt}`, measurement
//! matrices `P_t`, the finite and infinite Cesaro matrices and quantum mixing times.

mod cesaro;
mod classes;
mod eigen;
pub mod orbits;
mod snapshot;

pub use cesaro::{
    alpha_and_threshold, cesaro_finite, cesaro_infinite, quantum_mixing_time, CesaroKernel,
    QuantumThreshold, QMIX_EPS_FLOOR,
};
pub use classes::{classes_for, group_eigenvalues, EigenvalueClasses};
pub use eigen::{
    eigendecompose, eigendecompose_symmetric, measurement_matrix, propagator, propagator_column,
    unitarity_defect, Spectrum,
};
pub use snapshot::{SnapshotKind, StochasticSnapshot};
pub(crate) use cesaro::threshold_from_kernel;
