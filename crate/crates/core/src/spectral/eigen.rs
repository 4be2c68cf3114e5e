use nalgebra::SymmetricEigen;
use num_complex::Complex64;

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::graph::TransitionMatrix;
use crate::spectral::{SnapshotKind, StochasticSnapshot};
use crate::{CMatrix, Matrix};

/// Orthonormal eigenpairs of a real symmetric matrix, eigenvalues descending.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    eigenvalues: Vec<f64>,
    eigenvectors: Matrix,
    source: String,
}

impl Spectrum {
    pub fn n_states(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Column `k` is `φ_k`.
    pub fn eigenvectors(&self) -> &Matrix {
        &self.eigenvectors
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    /// `Φ Λ Φᵀ`.
    pub fn reconstruct(&self) -> Matrix {
        let n = self.n_states();
        let scaled = Matrix::from_fn(n, n, |y, k| self.eigenvectors[(y, k)] * self.eigenvalues[k]);
        scaled * self.eigenvectors.transpose()
    }
}

pub fn eigendecompose(p: &TransitionMatrix, tol: &Tolerances) -> Result<Spectrum> {
    eigendecompose_symmetric(p.entries(), p.label(), tol)
}

/// Eigendecomposition of any real symmetric matrix.
///
/// Output is deterministic: eigenpairs are sorted by descending eigenvalue
/// (ties keep solver order) and each eigenvector is signed so that its first
/// entry of maximal magnitude is positive.
pub fn eigendecompose_symmetric(
    m: &Matrix,
    source: impl Into<String>,
    tol: &Tolerances,
) -> Result<Spectrum> {
    let n = m.nrows();
    if n == 0 || m.ncols() != n {
        return Err(Error::invariant("square", format!("got {}x{}", m.nrows(), m.ncols())));
    }
    let eig = SymmetricEigen::new(m.clone());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));

    let eigenvalues: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut eigenvectors = Matrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        let col = eig.eigenvectors.column(src);
        let pivot = col
            .iter()
            .enumerate()
            .fold((0, 0.0_f64), |best, (i, v)| if v.abs() > best.1 + 1e-12 { (i, v.abs()) } else { best })
            .0;
        let sign = if col[pivot] < 0.0 { -1.0 } else { 1.0 };
        eigenvectors.set_column(dst, &(col * sign));
    }
    let spectrum = Spectrum { eigenvalues, eigenvectors, source: source.into() };

    let orth = (spectrum.eigenvectors.transpose() * &spectrum.eigenvectors - Matrix::identity(n, n)).amax();
    if orth > tol.orthonormality {
        return Err(Error::EigenResidual { residual: orth, tolerance: tol.orthonormality });
    }
    let residual = (spectrum.reconstruct() - m).amax();
    if residual > tol.eigen_residual {
        return Err(Error::EigenResidual { residual, tolerance: tol.eigen_residual });
    }
    Ok(spectrum)
}

/// `U_t = Σ_k e^{-iλ_k t} |φ_k⟩⟨φ_k|`.
pub fn propagator(s: &Spectrum, t: f64) -> CMatrix {
    let n = s.n_states();
    let phi = &s.eigenvectors;
    let phi_t = phi.transpose();
    let cos = Matrix::from_fn(n, n, |y, k| phi[(y, k)] * (s.eigenvalues[k] * t).cos());
    let sin = Matrix::from_fn(n, n, |y, k| phi[(y, k)] * (s.eigenvalues[k] * t).sin());
    let re = cos * &phi_t;
    let im = sin * &phi_t;
    CMatrix::from_fn(n, n, |y, x| Complex64::new(re[(y, x)], -im[(y, x)]))
}

/// Column `x` of `U_t`, i.e. `U_t |x⟩`.
pub fn propagator_column(s: &Spectrum, t: f64, x: usize) -> Vec<Complex64> {
    let n = s.n_states();
    let phi = &s.eigenvectors;
    let phases: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(phi[(x, k)], -s.eigenvalues[k] * t))
        .collect();
    (0..n)
        .map(|y| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (k, ph) in phases.iter().enumerate() {
                acc += ph * phi[(y, k)];
            }
            acc
        })
        .collect()
}

/// `max |U†U - I|`.
pub fn unitarity_defect(u: &CMatrix) -> f64 {
    let n = u.nrows();
    let gram = u.adjoint() * u;
    let mut worst = 0.0_f64;
    for y in 0..n {
        for x in 0..n {
            let target = if x == y { 1.0 } else { 0.0 };
            worst = worst.max((gram[(y, x)] - Complex64::new(target, 0.0)).norm());
        }
    }
    worst
}

/// `P_t(y,x) = |⟨y|U_t|x⟩|²`.
pub fn measurement_matrix(s: &Spectrum, t: f64) -> Result<StochasticSnapshot> {
    let u = propagator(s, t);
    let entries = u.map(|z| z.norm_sqr());
    StochasticSnapshot::new(entries, SnapshotKind::Measurement { t }, &Tolerances::default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_transition, lazy, GraphSpec};

    fn spectrum(spec: GraphSpec) -> Spectrum {
        eigendecompose(&build_transition(&spec).unwrap(), &Tolerances::default()).unwrap()
    }

    #[test]
    fn complete_with_loops_eigenvalues() {
        let s = spectrum(GraphSpec::Complete { n: 8, with_self_loops: true });
        assert!((s.eigenvalues()[0] - 1.0).abs() < 1e-12);
        assert!(s.eigenvalues()[1..].iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn hypercube_eigenvalues_are_binomial() {
        for n in 1..=5usize {
            let s = spectrum(GraphSpec::Hypercube { n });
            let mut expected = Vec::new();
            for w in 0..=n {
                let mult = (0..w).fold(1usize, |acc, i| acc * (n - i) / (i + 1));
                expected.extend(std::iter::repeat_n(1.0 - 2.0 * w as f64 / n as f64, mult));
            }
            for (got, want) in s.eigenvalues().iter().zip(&expected) {
                assert!((got - want).abs() < 1e-12, "n={n}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn cycle_eigenvalues_match_circulant_formula() {
        for p in [5usize, 6, 7, 11] {
            let s = spectrum(GraphSpec::Torus { p, d: 1 });
            let mut expected: Vec<f64> =
                (0..p).map(|k| (2.0 * std::f64::consts::PI * k as f64 / p as f64).cos()).collect();
            expected.sort_by(|a, b| b.total_cmp(a));
            for (got, want) in s.eigenvalues().iter().zip(&expected) {
                assert!((got - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn lazy_cycle4_eigenvalues() {
        let p = lazy(&build_transition(&GraphSpec::Cycle { n: 4 }).unwrap());
        let s = eigendecompose(&p, &Tolerances::default()).unwrap();
        let want = [1.0, 0.5, 0.5, 0.0];
        for (got, want) in s.eigenvalues().iter().zip(want) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn deterministic_and_orthonormal() {
        let p = build_transition(&GraphSpec::Torus { p: 5, d: 2 }).unwrap();
        let a = eigendecompose(&p, &Tolerances::default()).unwrap();
        let b = eigendecompose(&p, &Tolerances::default()).unwrap();
        assert_eq!(a, b);
        let n = a.n_states();
        let orth = (a.eigenvectors().transpose() * a.eigenvectors() - Matrix::identity(n, n)).amax();
        assert!(orth < 1e-10);
    }

    #[test]
    fn propagator_at_zero_is_identity() {
        let s = spectrum(GraphSpec::Cycle { n: 7 });
        let u = propagator(&s, 0.0);
        let n = s.n_states();
        assert!((u - CMatrix::identity(n, n)).camax() < 1e-12);
    }

    #[test]
    fn propagator_is_unitary() {
        let s = spectrum(GraphSpec::Torus { p: 4, d: 2 });
        for t in [0.3, 1.0, 17.5, 250.0] {
            assert!(unitarity_defect(&propagator(&s, t)) < 1e-10);
        }
    }

    #[test]
    fn column_matches_full_propagator() {
        let s = spectrum(GraphSpec::Torus { p: 3, d: 2 });
        let u = propagator(&s, 2.7);
        for x in [0usize, 4, 8] {
            let col = propagator_column(&s, 2.7, x);
            for (y, z) in col.iter().enumerate() {
                assert!((z - u[(y, x)]).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn complete_graph_closed_form() {
        let n = 16;
        let p = build_transition(&GraphSpec::Complete { n, with_self_loops: true }).unwrap();
        let s = eigendecompose(&p, &Tolerances::default()).unwrap();
        for t in [0.7, 2.3, 5.0] {
            let u = propagator(&s, t);
            let factor = Complex64::from_polar(1.0, -t) - 1.0;
            let closed = CMatrix::from_fn(n, n, |y, x| {
                let id = if x == y { 1.0 } else { 0.0 };
                Complex64::new(id, 0.0) + factor * p.entries()[(y, x)]
            });
            assert!((u - closed).camax() < 1e-12);
        }
    }

    #[test]
    fn measurement_at_zero_is_identity() {
        let s = spectrum(GraphSpec::Hypercube { n: 3 });
        let m = measurement_matrix(&s, 0.0).unwrap();
        assert!((m.entries() - Matrix::identity(8, 8)).amax() < 1e-12);
    }

    #[test]
    fn complete16_offdiagonal_measurement_bound() {
        let s = spectrum(GraphSpec::Complete { n: 16, with_self_loops: true });
        for t in [0.1, 1.0, 3.0, 10.0, 123.4] {
            let m = measurement_matrix(&s, t).unwrap();
            for y in 0..16 {
                for x in 0..16 {
                    if x != y {
                        assert!(m.entries()[(y, x)] <= 4.0 / 256.0 + 1e-15);
                    }
                }
            }
        }
    }
}
