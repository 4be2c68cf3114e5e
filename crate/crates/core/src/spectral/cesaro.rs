use rayon::prelude::*;
use serde::Serialize;

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::markov::max_pairwise_column_distance;
use crate::spectral::{EigenvalueClasses, SnapshotKind, Spectrum, StochasticSnapshot};
use crate::Matrix;

/// Smallest `ε` accepted by [`quantum_mixing_time`].
pub const QMIX_EPS_FLOOR: f64 = 1e-8;

/// Relative resolution of the reported quantum mixing time.
const QMIX_RESOLUTION: f64 = 1e-3;

/// Upper bound on `max_u |d/du (sin u / u)|` (the true maximum is ≈ 0.4362).
const SINC_SLOPE: f64 = 0.4363;

/// Cached amplitudes are dropped above this many stored floats.
const CACHE_LIMIT: usize = 1 << 23;

/// Closed-form evaluator for `P̄_T` and `Π`.
///
/// With class projectors `E_j = Σ_{k∈C_j} |φ_k⟩⟨φ_k|` and class eigenvalues `μ_j`,
///
/// ```text
/// P̄_T(y,x) = Σ_{j,j'} E_j(y,x) E_j'(y,x) sinc((μ_j - μ_j') T)
/// Π(y,x)   = Σ_j E_j(y,x)²
/// ```
///
/// Eigenvectors are real, so the imaginary part of `(e^{iΔT} - 1)/(iΔT)`
/// cancels between the `(j, j')` and `(j', j)` terms and only `sin(ΔT)/(ΔT)`
/// survives. Every column is assembled independently.
pub struct CesaroKernel<'a> {
    spectrum: &'a Spectrum,
    class_of: Vec<usize>,
    values: Vec<f64>,
    cache: Option<Vec<Matrix>>,
}

/// Constants bounding the cross term `P̄_T - Π`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CrossTermEnvelope {
    /// `K = ½ max_x Σ_y Σ_{j≠j'} |E_j E_j'| / |μ_j - μ_j'|`; distance ≤ `K / T`.
    pub decay: f64,
    /// `½ max_x Σ_y Σ_{j≠j'} |E_j E_j'|`.
    pub mass: f64,
    /// `½ max_x Σ_y Σ_{j≠j'} |E_j E_j'| |μ_j - μ_j'|`.
    pub frequency_mass: f64,
}

impl CrossTermEnvelope {
    /// Lipschitz constant of `T ↦ ‖P̄_T - Π‖` on `[t, ∞)`.
    pub fn lipschitz(&self, t: f64) -> f64 {
        let far = if t > 0.0 { 2.0 * self.mass / t } else { f64::INFINITY };
        (SINC_SLOPE * self.frequency_mass).min(far)
    }

    /// Horizon beyond which the distance is certifiably ≤ `eps`.
    pub fn certified_horizon(&self, eps: f64) -> f64 {
        self.decay / eps
    }
}

fn sinc(u: f64) -> f64 {
    if u.abs() < 1e-8 {
        1.0 - u * u / 6.0
    } else {
        u.sin() / u
    }
}

impl<'a> CesaroKernel<'a> {
    pub fn new(spectrum: &'a Spectrum, classes: &EigenvalueClasses) -> Result<Self> {
        classes.ensure_matches(spectrum)?;
        let mut kernel = CesaroKernel {
            spectrum,
            class_of: classes.class_of(),
            values: classes.values().to_vec(),
            cache: None,
        };
        let n = spectrum.n_states();
        if n * n * kernel.values.len() <= CACHE_LIMIT {
            kernel.cache = Some((0..n).into_par_iter().map(|x| kernel.compute_amplitudes(x)).collect());
        }
        Ok(kernel)
    }

    pub fn n_states(&self) -> usize {
        self.spectrum.n_states()
    }

    pub fn n_classes(&self) -> usize {
        self.values.len()
    }

    /// `V[(y, j)] = E_j(y, x)`.
    fn compute_amplitudes(&self, x: usize) -> Matrix {
        let n = self.n_states();
        let phi = self.spectrum.eigenvectors();
        let mut v = Matrix::zeros(n, self.values.len());
        for (k, &j) in self.class_of.iter().enumerate() {
            let wx = phi[(x, k)];
            for y in 0..n {
                v[(y, j)] += phi[(y, k)] * wx;
            }
        }
        v
    }

    fn with_amplitudes<R>(&self, x: usize, f: impl FnOnce(&Matrix) -> R) -> R {
        match &self.cache {
            Some(cache) => f(&cache[x]),
            None => f(&self.compute_amplitudes(x)),
        }
    }

    /// Class-pair weight matrix `G[(j, j')] = g(μ_j - μ_j')`.
    fn pair_matrix(&self, g: impl Fn(f64) -> f64) -> Matrix {
        let m = self.n_classes();
        Matrix::from_fn(m, m, |a, b| g(self.values[a] - self.values[b]))
    }

    /// Per-column quadratic forms `Σ_{j,j'} V_j V_j' G_{jj'}`, one value per `y`.
    fn column_forms(&self, weights: &Matrix, absolute: bool) -> Vec<Vec<f64>> {
        (0..self.n_states())
            .into_par_iter()
            .map(|x| {
                self.with_amplitudes(x, |v| {
                    let v = if absolute { v.abs() } else { v.clone() };
                    let w = &v * weights;
                    (0..v.nrows()).map(|y| v.row(y).dot(&w.row(y))).collect()
                })
            })
            .collect()
    }

    fn assemble(&self, columns: Vec<Vec<f64>>) -> Matrix {
        let n = self.n_states();
        Matrix::from_fn(n, n, |y, x| columns[x][y])
    }

    pub fn infinite(&self) -> Matrix {
        self.assemble(self.column_forms(&Matrix::identity(self.n_classes(), self.n_classes()), false))
    }

    pub fn finite(&self, horizon: f64) -> Matrix {
        self.assemble(self.column_forms(&self.pair_matrix(|delta| sinc(delta * horizon)), false))
    }

    /// `½‖P̄_T - Π‖₁` (max column sum), computed from the cross term alone.
    pub fn distance_to_limit(&self, horizon: f64) -> f64 {
        let weights = self.pair_matrix(|delta| if delta == 0.0 { 0.0 } else { sinc(delta * horizon) });
        half_max_column_l1(self.column_forms(&weights, false))
    }

    pub fn envelope(&self) -> CrossTermEnvelope {
        let off = |g: fn(f64) -> f64| {
            let w = self.pair_matrix(|delta| if delta == 0.0 { 0.0 } else { g(delta.abs()) });
            half_max_column_l1(self.column_forms(&w, true))
        };
        CrossTermEnvelope {
            decay: off(|d| 1.0 / d),
            mass: off(|_| 1.0),
            frequency_mass: off(|d| d),
        }
    }

    /// Smallest `T` (to relative resolution 1e-3) with `½‖P̄_T' - Π‖₁ ≤ eps` for all `T' ≥ T`.
    ///
    /// Beyond `K/eps` the envelope certifies the bound. Below it the search
    /// walks backwards with steps no longer than the Lipschitz margin
    /// `(eps - D(T)) / L`, floored at the resolution, and bisects the first
    /// violation it meets.
    pub fn mixing_time(&self, eps: f64) -> Result<f64> {
        if !(QMIX_EPS_FLOOR..1.0).contains(&eps) {
            return Err(Error::InvalidArgument(format!(
                "eps must lie in [{QMIX_EPS_FLOOR:e}, 1), got {eps}"
            )));
        }
        let env = self.envelope();
        if env.decay == 0.0 {
            return Ok(0.0);
        }
        let mut good = env.certified_horizon(eps);
        let mut d_good = self.distance_to_limit(good);
        loop {
            let half = good / 2.0;
            let lip = env.lipschitz(half);
            let margin = if lip > 0.0 { (eps - d_good).max(0.0) / lip } else { f64::INFINITY };
            let step = margin.min(half).max(0.5 * QMIX_RESOLUTION * good);
            let t = good - step;
            if t <= 1e-9 {
                return Ok(0.0);
            }
            let d = self.distance_to_limit(t);
            if d > eps {
                let (mut lo, mut hi) = (t, good);
                while hi - lo > QMIX_RESOLUTION * hi {
                    let mid = 0.5 * (lo + hi);
                    if self.distance_to_limit(mid) > eps {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                return Ok(hi);
            }
            good = t;
            d_good = d;
        }
    }
}

fn half_max_column_l1(columns: Vec<Vec<f64>>) -> f64 {
    0.5 * columns
        .iter()
        .map(|col| col.iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

pub fn cesaro_finite(s: &Spectrum, classes: &EigenvalueClasses, horizon: f64) -> Result<StochasticSnapshot> {
    if !(horizon > 0.0 && horizon.is_finite()) {
        return Err(Error::InvalidArgument(format!("T must be positive, got {horizon}")));
    }
    let kernel = CesaroKernel::new(s, classes)?;
    StochasticSnapshot::new(kernel.finite(horizon), SnapshotKind::CesaroFinite { horizon }, &Tolerances::default())
}

pub fn cesaro_infinite(s: &Spectrum, classes: &EigenvalueClasses) -> Result<StochasticSnapshot> {
    let kernel = CesaroKernel::new(s, classes)?;
    StochasticSnapshot::new(kernel.infinite(), SnapshotKind::CesaroInfinite, &Tolerances::default())
}

pub fn quantum_mixing_time(s: &Spectrum, classes: &EigenvalueClasses, eps: f64) -> Result<f64> {
    CesaroKernel::new(s, classes)?.mixing_time(eps)
}

/// `α`, `ε₀ = (1-α)/4` and `τ'_mix = τ'(ε₀)` for one walk.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuantumThreshold {
    pub alpha: f64,
    pub eps0: f64,
    pub tau_prime_mix: f64,
    /// `α` is numerically 1; `τ'_mix` was computed at the `ε` floor instead.
    pub amplification_fails: bool,
}

pub fn alpha_and_threshold(s: &Spectrum, classes: &EigenvalueClasses) -> Result<QuantumThreshold> {
    let kernel = CesaroKernel::new(s, classes)?;
    threshold_from_kernel(&kernel)
}

pub(crate) fn threshold_from_kernel(kernel: &CesaroKernel<'_>) -> Result<QuantumThreshold> {
    let alpha = max_pairwise_column_distance(&kernel.infinite());
    let eps0 = (1.0 - alpha) / 4.0;
    let amplification_fails = alpha >= 1.0 - 1e-9;
    let tau_prime_mix = kernel.mixing_time(eps0.max(QMIX_EPS_FLOOR))?;
    Ok(QuantumThreshold { alpha, eps0, tau_prime_mix, amplification_fails })
}
