//! Numerical tolerances shared by every module.

use serde::{Deserialize, Serialize};

/// Tolerance set. One instance is threaded through every analysis so the
/// acceptance checks have a single knob.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Max-entry residual allowed for `P - Φ Λ Φᵀ`.
    pub eigen_residual: f64,
    /// Max-entry deviation allowed for `ΦᵀΦ - I`.
    pub orthonormality: f64,
    /// Symmetry and column-sum slack for transition matrices.
    pub stochastic: f64,
    /// Column-sum slack for derived snapshots.
    pub snapshot: f64,
    /// Slack for inequality checks between computed quantities.
    pub comparison: f64,
    /// Eigenvalue clustering tolerance as a fraction of the spectral range.
    /// `None` uses [`Tolerances::DEFAULT_CLASS_RELATIVE`].
    pub class_tol: Option<f64>,
    /// Unitarity slack for propagators.
    pub unitarity: f64,
}

impl Tolerances {
    pub const DEFAULT_CLASS_RELATIVE: f64 = 1e-8;

    /// Absolute clustering tolerance for a spectrum spanning `[min, max]`.
    pub fn class_tolerance(&self, min: f64, max: f64) -> f64 {
        if let Some(tol) = self.class_tol {
            return tol;
        }
        let range = max - min;
        if range > 0.0 {
            Self::DEFAULT_CLASS_RELATIVE * range
        } else {
            Self::DEFAULT_CLASS_RELATIVE
        }
    }
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            eigen_residual: 1e-9,
            orthonormality: 1e-10,
            stochastic: 1e-12,
            snapshot: 1e-10,
            comparison: 1e-10,
            class_tol: None,
            unitarity: 1e-10,
        }
    }
}
