//! Edge-coloring decomposition of torus walks and the Lie product formula.
//!
//! Each part is a sum of disjoint 2×2 blocks (plus an optional diagonal),
//! so `e^{-iH_k τ}` is computed exactly block by block.

use std::collections::BTreeMap;
use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{GraphSpec, TransitionMatrix};
use crate::spectral::{propagator, Spectrum};
use crate::{CMatrix, Matrix};

/// One summand `H_k`: disjoint weighted edges plus a diagonal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Part {
    /// `(a, b, w)` with `H(a, b) = H(b, a) = w`; no two edges share a vertex.
    pub edges: Vec<(usize, usize, f64)>,
    /// Diagonal of `H_k`; empty when zero.
    pub diagonal: Vec<f64>,
}

impl Part {
    pub fn dense(&self, n: usize) -> Matrix {
        let mut m = Matrix::zeros(n, n);
        for &(a, b, w) in &self.edges {
            m[(a, b)] += w;
            m[(b, a)] += w;
        }
        for (i, v) in self.diagonal.iter().enumerate() {
            m[(i, i)] += v;
        }
        m
    }

    fn diag(&self, i: usize) -> f64 {
        self.diagonal.get(i).copied().unwrap_or(0.0)
    }

    /// Left-multiply `m` by `e^{-iH τ}` in place.
    fn apply_exp(&self, tau: f64, m: &mut CMatrix) {
        let n = m.nrows();
        let mut paired = vec![false; n];
        for &(a, b, w) in &self.edges {
            paired[a] = true;
            paired[b] = true;
            let [[g00, g01], [g10, g11]] = exp_2x2(self.diag(a), self.diag(b), w, tau);
            for col in 0..m.ncols() {
                let (ua, ub) = (m[(a, col)], m[(b, col)]);
                m[(a, col)] = g00 * ua + g01 * ub;
                m[(b, col)] = g10 * ua + g11 * ub;
            }
        }
        for (i, &v) in self.diagonal.iter().enumerate() {
            if !paired[i] && v != 0.0 {
                let phase = Complex64::new(0.0, -v * tau).exp();
                m.row_mut(i).iter_mut().for_each(|z| *z *= phase);
            }
        }
    }
}

/// `exp(-iτ [[p, w], [w, q]])` in closed form.
fn exp_2x2(p: f64, q: f64, w: f64, tau: f64) -> [[Complex64; 2]; 2] {
    let mean = (p + q) / 2.0;
    let half = (p - q) / 2.0;
    let r = half.hypot(w);
    let global = Complex64::new(0.0, -mean * tau).exp();
    let c = (r * tau).cos();
    // sin(rτ)/r, continuous at r = 0.
    let s = if r * tau.abs() < 1e-12 { tau } else { (r * tau).sin() / r };
    let i = Complex64::new(0.0, 1.0);
    [
        [global * (c - i * s * half), global * (-i * s * w)],
        [global * (-i * s * w), global * (c + i * s * half)],
    ]
}

#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonianParts {
    n: usize,
    parts: Vec<Part>,
    /// `(min(a, b), max(a, b)) → part index`.
    coloring: BTreeMap<(usize, usize), usize>,
}

impl HamiltonianParts {
    pub fn n_states(&self) -> usize {
        self.n
    }

    pub fn parts(&self) -> &[Part] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn coloring(&self) -> &BTreeMap<(usize, usize), usize> {
        &self.coloring
    }

    pub fn dense_parts(&self) -> Vec<Matrix> {
        self.parts.iter().map(|p| p.dense(self.n)).collect()
    }

    /// `max |Σ_k H_k - P|`.
    pub fn reassembly_error(&self, p: &Matrix) -> f64 {
        let sum = self.dense_parts().into_iter().fold(Matrix::zeros(self.n, self.n), |acc, m| acc + m);
        (sum - p).amax()
    }

    /// Wrap explicit parts, checking that each is a matching and that they sum to `p`.
    pub fn from_parts(p: &Matrix, parts: Vec<Part>) -> Result<Self> {
        let n = p.nrows();
        let mut coloring = BTreeMap::new();
        for (k, part) in parts.iter().enumerate() {
            if !part.diagonal.is_empty() && part.diagonal.len() != n {
                return Err(Error::ShapeMismatch { left: n, right: part.diagonal.len() });
            }
            let mut used = vec![false; n];
            for &(a, b, _) in &part.edges {
                if a >= n || b >= n {
                    return Err(Error::StateOutOfRange { state: a.max(b), n });
                }
                if a == b || used[a] || used[b] {
                    return Err(Error::invariant("matching", format!("part {k} reuses a vertex at edge ({a}, {b})")));
                }
                used[a] = true;
                used[b] = true;
                if coloring.insert((a.min(b), a.max(b)), k).is_some() {
                    return Err(Error::invariant("edge colored once", format!("edge ({a}, {b}) appears twice")));
                }
            }
        }
        let out = HamiltonianParts { n, parts, coloring };
        let err = out.reassembly_error(p);
        if err > 1e-12 {
            return Err(Error::invariant("parts sum to P", format!("max deviation {err:e}")));
        }
        Ok(out)
    }
}

/// Split a torus, cycle or hypercube walk into matchings.
///
/// Direction `i` of `Z_p^d` contributes one color when `p = 2`, two alternating
/// colors when `p` is even and three when `p` is odd (the wrap edge gets its own).
/// A lazy walk gets an additional diagonal part.
pub fn edge_color_decompose(p: &TransitionMatrix) -> Result<HamiltonianParts> {
    let (modulus, d) = match *p.spec() {
        GraphSpec::Torus { p, d } => (p, d),
        GraphSpec::Cycle { n } => (n, 1),
        GraphSpec::Hypercube { n } => (2, n),
        ref other => return Err(Error::Unsupported(format!("edge coloring of {other}"))),
    };
    let n = p.n_states();
    let m = p.entries();
    let mut parts = Vec::new();
    let mut stride = 1;
    for _ in 0..d {
        let colors = match modulus {
            2 => 1,
            m if m % 2 == 0 => 2,
            _ => 3,
        };
        let base = parts.len();
        parts.extend((0..colors).map(|_| Part { edges: Vec::new(), diagonal: Vec::new() }));
        for x in 0..n {
            let coord = (x / stride) % modulus;
            if modulus == 2 && coord == 1 {
                continue;
            }
            let y = x - coord * stride + ((coord + 1) % modulus) * stride;
            let color = if modulus % 2 == 1 && coord == modulus - 1 { 2 } else { coord % 2 };
            parts[base + color].edges.push((x, y, m[(y, x)]));
        }
        stride *= modulus;
    }
    let diagonal: Vec<f64> = m.diagonal().iter().copied().collect();
    if diagonal.iter().any(|v| *v != 0.0) {
        parts.push(Part { edges: Vec::new(), diagonal });
    }
    HamiltonianParts::from_parts(m, parts)
}

/// `(e^{-iH_1 t/j} ⋯ e^{-iH_r t/j})^j`.
pub fn lie_product(parts: &HamiltonianParts, t: f64, j: u64) -> Result<CMatrix> {
    if j == 0 {
        return Err(Error::InvalidArgument("j must be at least 1".into()));
    }
    let n = parts.n;
    let tau = t / j as f64;
    let mut step = CMatrix::identity(n, n);
    for part in parts.parts.iter().rev() {
        part.apply_exp(tau, &mut step);
    }
    let mut result = CMatrix::identity(n, n);
    let mut base = step;
    let mut e = j;
    while e > 0 {
        if e & 1 == 1 {
            result = &base * &result;
        }
        e >>= 1;
        if e > 0 {
            base = &base * &base;
        }
    }
    Ok(result)
}

pub fn spectral_norm(m: &CMatrix) -> f64 {
    m.clone().svd(false, false).singular_values.max()
}

pub fn spectral_norm_real(m: &Matrix) -> f64 {
    m.clone().svd(false, false).singular_values.max()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommutatorReport {
    pub max: f64,
    /// `(k, l, ‖[H_k, H_l]‖₂)` for `k < l`.
    pub pairs: Vec<(usize, usize, f64)>,
}

pub fn commutator_report(parts: &HamiltonianParts) -> CommutatorReport {
    let dense = parts.dense_parts();
    let r = dense.len();
    let pairs: Vec<(usize, usize, f64)> = (0..r)
        .flat_map(|k| ((k + 1)..r).map(move |l| (k, l)))
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(k, l)| {
            let c = &dense[k] * &dense[l] - &dense[l] * &dense[k];
            (k, l, spectral_norm_real(&c))
        })
        .collect();
    let max = pairs.iter().map(|p| p.2).fold(0.0, f64::max);
    CommutatorReport { max, pairs }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrotterRow {
    pub j: u64,
    /// `‖lie_product - e^{-iPt}‖₂`.
    pub error_2norm: f64,
    /// `(t²/2j) Σ_{k<l} ‖[H_k, H_l]‖₂`.
    pub bound: f64,
    pub error_max_entry: f64,
}

/// Error of the product formula against the spectral propagator for each `j`.
pub fn trotter_sweep(parts: &HamiltonianParts, s: &Spectrum, t: f64, j_list: &[u64]) -> Result<Vec<TrotterRow>> {
    if s.n_states() != parts.n {
        return Err(Error::ShapeMismatch { left: s.n_states(), right: parts.n });
    }
    let exact = propagator(s, t);
    let commutator_sum: f64 = commutator_report(parts).pairs.iter().map(|p| p.2).sum();
    j_list
        .par_iter()
        .map(|&j| {
            let diff = lie_product(parts, t, j)? - &exact;
            Ok(TrotterRow {
                j,
                error_2norm: spectral_norm(&diff),
                bound: t * t / (2.0 * j as f64) * commutator_sum,
                error_max_entry: diff.iter().map(|z| z.norm()).fold(0.0, f64::max),
            })
        })
        .collect()
}

pub fn write_trotter_csv(rows: &[TrotterRow], mut out: impl Write) -> Result<()> {
    writeln!(out, "j,error_2norm,bound,error_max_entry")?;
    for r in rows {
        writeln!(out, "{},{:e},{:e},{:e}", r.j, r.error_2norm, r.bound, r.error_max_entry)?;
    }
    Ok(())
}
