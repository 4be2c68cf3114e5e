use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::Matrix;

/// Which construction produced a snapshot.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SnapshotKind {
    /// `P_t` for a single measurement time.
    Measurement { t: f64 },
    /// `P̄_T`, the average of `P_t` over `t ∈ [0, T]`.
    CesaroFinite { horizon: f64 },
    /// `Π = lim P̄_T`.
    CesaroInfinite,
    /// Classical `P^t`.
    ClassicalPower { t: u64 },
    /// Anything else (matrix products, loaded files without a tag).
    Derived,
}

/// Doubly stochastic symmetric matrix tagged with its construction.
#[derive(Debug, Clone, PartialEq)]
pub struct StochasticSnapshot {
    entries: Matrix,
    kind: SnapshotKind,
}

/// Entries down to this value are rounding noise and clamp to zero.
const NEGATIVE_SLACK: f64 = 1e-12;

impl StochasticSnapshot {
    /// Validate column sums and symmetry, clamping tiny negative entries to zero.
    pub fn new(mut entries: Matrix, kind: SnapshotKind, tol: &Tolerances) -> Result<Self> {
        let n = entries.nrows();
        if n == 0 || entries.ncols() != n {
            return Err(Error::invariant("square", format!("got {}x{}", entries.nrows(), entries.ncols())));
        }
        for x in 0..n {
            let mut sum = 0.0;
            for y in 0..n {
                let v = entries[(y, x)];
                if !v.is_finite() || !(-NEGATIVE_SLACK..=1.0 + NEGATIVE_SLACK).contains(&v) {
                    return Err(Error::invariant("entries in [0,1]", format!("entry ({y},{x}) = {v}")));
                }
                if (v - entries[(x, y)]).abs() > tol.snapshot {
                    return Err(Error::invariant("symmetric", format!("entry ({y},{x})")));
                }
                sum += v;
            }
            if (sum - 1.0).abs() > tol.snapshot {
                return Err(Error::invariant("column sums to 1", format!("column {x} sums to {sum}")));
            }
        }
        entries.iter_mut().for_each(|v| *v = v.max(0.0));
        Ok(StochasticSnapshot { entries, kind })
    }

    pub fn n_states(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &Matrix {
        &self.entries
    }

    pub fn kind(&self) -> SnapshotKind {
        self.kind
    }

    pub fn min_entry(&self) -> f64 {
        self.entries.min()
    }

    pub fn column(&self, x: usize) -> Vec<f64> {
        self.entries.column(x).iter().copied().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clamps_rounding_negatives() {
        let m = Matrix::from_row_slice(2, 2, &[1.0 + 1e-13, -1e-13, -1e-13, 1.0 + 1e-13]);
        let s = StochasticSnapshot::new(m, SnapshotKind::Derived, &Tolerances::default()).unwrap();
        assert_eq!(s.entries()[(0, 1)], 0.0);
    }

    #[test]
    fn rejects_real_negatives_and_bad_sums() {
        let tol = Tolerances::default();
        let neg = Matrix::from_row_slice(2, 2, &[1.1, -0.1, -0.1, 1.1]);
        assert!(StochasticSnapshot::new(neg, SnapshotKind::Derived, &tol).is_err());
        let sum = Matrix::from_row_slice(2, 2, &[0.5, 0.4, 0.4, 0.5]);
        assert!(StochasticSnapshot::new(sum, SnapshotKind::Derived, &tol).is_err());
        let asym = Matrix::from_row_slice(2, 2, &[0.7, 0.4, 0.3, 0.6]);
        assert!(StochasticSnapshot::new(asym, SnapshotKind::Derived, &tol).is_err());
    }
}
