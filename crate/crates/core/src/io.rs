//! JSON artifacts: transition matrices, stochastic snapshots and reports.
//!
//! Floats are written in shortest round-trip form, so every artifact reloads
//! to a bit-identical value.

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::graph::{GraphSpec, TransitionMatrix, MAX_STATES};
use crate::spectral::{SnapshotKind, StochasticSnapshot};
use crate::Matrix;

/// On-disk form of a transition matrix. `rows[y][x] = P(y, x)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub n: usize,
    pub spec: GraphSpec,
    pub rows: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub lazy: bool,
}

/// On-disk form of a snapshot: the matrix layout plus a `kind` tag.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnapshotFile {
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spec: Option<GraphSpec>,
    #[serde(flatten)]
    pub kind: SnapshotKind,
    pub rows: Vec<Vec<f64>>,
}

fn rows_of(m: &Matrix) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

fn matrix_from_rows(n: usize, rows: &[Vec<f64>]) -> Result<Matrix> {
    if n == 0 || n > MAX_STATES {
        return Err(Error::Parse(format!("n must lie in 1..={MAX_STATES}, got {n}")));
    }
    if rows.len() != n {
        return Err(Error::ShapeMismatch { left: n, right: rows.len() });
    }
    if let Some(bad) = rows.iter().find(|r| r.len() != n) {
        return Err(Error::ShapeMismatch { left: n, right: bad.len() });
    }
    Ok(Matrix::from_fn(n, n, |y, x| rows[y][x]))
}

/// Degree of the standard walk on `spec`, when the graph is regular.
fn family_degree(spec: &GraphSpec) -> Option<usize> {
    match *spec {
        GraphSpec::Cycle { .. } => Some(2),
        GraphSpec::Torus { d, .. } => Some(2 * d),
        GraphSpec::Hypercube { n } => Some(n),
        GraphSpec::Complete { n, with_self_loops } => Some(if with_self_loops { n } else { n - 1 }),
        GraphSpec::Custom { .. } => None,
    }
}

impl MatrixFile {
    pub fn from_matrix(p: &TransitionMatrix) -> Self {
        MatrixFile {
            n: p.n_states(),
            spec: p.spec().clone(),
            rows: rows_of(p.entries()),
            lazy: p.is_lazy(),
        }
    }

    /// Validate shape, spec and stochasticity.
    pub fn into_matrix(self, tol: &Tolerances) -> Result<TransitionMatrix> {
        self.spec.validate()?;
        let expected = self.spec.n_states()?;
        if expected != self.n {
            return Err(Error::ShapeMismatch { left: expected, right: self.n });
        }
        let entries = matrix_from_rows(self.n, &self.rows)?;
        let degree = family_degree(&self.spec);
        TransitionMatrix::new(entries, self.spec, degree, self.lazy, tol)
    }
}

impl SnapshotFile {
    pub fn from_snapshot(s: &StochasticSnapshot, spec: Option<&GraphSpec>) -> Self {
        SnapshotFile {
            n: s.n_states(),
            spec: spec.cloned(),
            kind: s.kind(),
            rows: rows_of(s.entries()),
        }
    }

    pub fn into_snapshot(self, tol: &Tolerances) -> Result<StochasticSnapshot> {
        if let Some(spec) = &self.spec {
            spec.validate()?;
            let expected = spec.n_states()?;
            if expected != self.n {
                return Err(Error::ShapeMismatch { left: expected, right: self.n });
            }
        }
        let entries = matrix_from_rows(self.n, &self.rows)?;
        StochasticSnapshot::new(entries, self.kind, tol)
    }
}

pub fn parse_matrix_json(text: &str, tol: &Tolerances) -> Result<TransitionMatrix> {
    serde_json::from_str::<MatrixFile>(text)?.into_matrix(tol)
}

pub fn matrix_to_json(p: &TransitionMatrix) -> Result<String> {
    Ok(serde_json::to_string(&MatrixFile::from_matrix(p))?)
}

pub fn parse_snapshot_json(text: &str, tol: &Tolerances) -> Result<StochasticSnapshot> {
    serde_json::from_str::<SnapshotFile>(text)?.into_snapshot(tol)
}

pub fn snapshot_to_json(s: &StochasticSnapshot, spec: Option<&GraphSpec>) -> Result<String> {
    Ok(serde_json::to_string(&SnapshotFile::from_snapshot(s, spec))?)
}

/// Parse a bare graph spec, e.g. `{"family":"torus","p":5,"d":2}`.
pub fn parse_spec_json(text: &str) -> Result<GraphSpec> {
    let spec: GraphSpec = serde_json::from_str(text)?;
    spec.validate()?;
    Ok(spec)
}

pub fn load_matrix(path: impl AsRef<Path>, tol: &Tolerances) -> Result<TransitionMatrix> {
    parse_matrix_json(&fs::read_to_string(path)?, tol)
}

pub fn save_matrix(path: impl AsRef<Path>, p: &TransitionMatrix) -> Result<()> {
    fs::write(path, matrix_to_json(p)?)?;
    Ok(())
}

pub fn load_snapshot(path: impl AsRef<Path>, tol: &Tolerances) -> Result<StochasticSnapshot> {
    parse_snapshot_json(&fs::read_to_string(path)?, tol)
}

pub fn save_snapshot(path: impl AsRef<Path>, s: &StochasticSnapshot, spec: Option<&GraphSpec>) -> Result<()> {
    fs::write(path, snapshot_to_json(s, spec)?)?;
    Ok(())
}

/// Pretty-printed JSON for reports.
pub fn write_json<T: Serialize>(path: impl AsRef<Path>, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

pub fn read_json<T: DeserializeOwned>(path: impl AsRef<Path>) -> Result<T> {
    Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
}
