//! Classical Markov-chain analysis for symmetric chains.
//!
//! Matrices are column stochastic: column `x` is the distribution after one
//! step from `x`. The stationary distribution of every chain here is uniform.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::graph::TransitionMatrix;
use crate::sampler::{inverse_cdf, trial_rng, SampleTrace};
use crate::spectral::{eigendecompose, Spectrum};
use crate::Matrix;

/// Probability vector over `0..N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Distribution(Vec<f64>);

impl Distribution {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::invariant("nonempty", "distribution has no states"));
        }
        if let Some(i) = probs.iter().position(|p| !p.is_finite() || *p < 0.0) {
            return Err(Error::invariant("nonnegative", format!("entry {i} = {}", probs[i])));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::invariant("sums to 1", format!("sum = {sum}")));
        }
        Ok(Distribution(probs))
    }

    pub fn uniform(n: usize) -> Self {
        Distribution(vec![1.0 / n as f64; n])
    }

    pub fn point(n: usize, x: usize) -> Self {
        let mut probs = vec![0.0; n];
        probs[x] = 1.0;
        Distribution(probs)
    }

    /// Normalize nonnegative counts into a distribution.
    pub fn from_counts(counts: &[u64]) -> Result<Self> {
        let total: u64 = counts.iter().sum();
        if total == 0 {
            return Err(Error::invariant("nonempty", "no samples"));
        }
        Ok(Distribution(counts.iter().map(|&c| c as f64 / total as f64).collect()))
    }

    pub fn probs(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// `½‖p - q‖₁`.
pub fn tv_distance(p: &Distribution, q: &Distribution) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::ShapeMismatch { left: p.len(), right: q.len() });
    }
    Ok(half_l1(p.probs(), q.probs()))
}

fn half_l1(p: &[f64], q: &[f64]) -> f64 {
    0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>()
}

/// `½ max_x Σ_y |A(y,x) - B(y,x)|`.
pub fn matrix_tv_distance(a: &Matrix, b: &Matrix) -> Result<f64> {
    if a.shape() != b.shape() {
        return Err(Error::ShapeMismatch { left: a.nrows(), right: b.nrows() });
    }
    Ok((0..a.ncols())
        .map(|x| half_l1(a.column(x).as_slice(), b.column(x).as_slice()))
        .fold(0.0, f64::max))
}

/// `d(t)` for a matrix power: distance to `u 1ᵀ`.
pub fn distance_to_uniform(m: &Matrix) -> f64 {
    let u = 1.0 / m.nrows() as f64;
    (0..m.ncols())
        .map(|x| 0.5 * m.column(x).iter().map(|v| (v - u).abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// `max_{x,x'} ½‖Q(·,x) - Q(·,x')‖₁`.
pub fn max_pairwise_column_distance(q: &Matrix) -> f64 {
    let n = q.ncols();
    (0..n)
        .into_par_iter()
        .map(|x| {
            let cx = q.column(x);
            ((x + 1)..n)
                .map(|x2| half_l1(cx.as_slice(), q.column(x2).as_slice()))
                .fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralGap {
    /// `δ = 1 - λ`.
    pub delta: f64,
    /// Largest `|λ_k|` over all but the top eigenvalue.
    pub lambda: f64,
    pub second_eigenvalue: f64,
    pub smallest_eigenvalue: f64,
    /// `-1` is an eigenvalue: the chain is bipartite.
    pub periodic: bool,
    /// `λ_2 ≥ |λ_min|`, the ordering the Diaconis–Stroock lower bound presumes.
    pub second_dominates: bool,
}

/// Spectral gap from an existing spectrum. A one-state chain has `δ = 1`.
pub fn spectral_gap_of(s: &Spectrum, tol: &Tolerances) -> SpectralGap {
    let ev = s.eigenvalues();
    if ev.len() == 1 {
        return SpectralGap {
            delta: 1.0,
            lambda: 0.0,
            second_eigenvalue: 0.0,
            smallest_eigenvalue: ev[0],
            periodic: false,
            second_dominates: true,
        };
    }
    let second = ev[1];
    let smallest = ev[ev.len() - 1];
    let lambda = second.abs().max(smallest.abs()).min(1.0);
    SpectralGap {
        delta: 1.0 - lambda,
        lambda,
        second_eigenvalue: second,
        smallest_eigenvalue: smallest,
        periodic: (smallest + 1.0).abs() <= tol.eigen_residual,
        second_dominates: second >= smallest.abs(),
    }
}

pub fn spectral_gap(p: &TransitionMatrix, tol: &Tolerances) -> Result<SpectralGap> {
    Ok(spectral_gap_of(&eigendecompose(p, tol)?, tol))
}

/// Diaconis–Stroock / Aldous bounds on `τ(ε)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MixingBounds {
    pub lower: f64,
    pub upper: f64,
}

/// `lower = ½ λ δ⁻¹ ln(2ε)⁻¹` (0 when `ε ≥ ½`), `upper = δ⁻¹ (ln N + ln ε⁻¹)`.
pub fn mixing_time_bounds(gap: &SpectralGap, n_states: usize, eps: f64) -> Result<MixingBounds> {
    check_eps(eps)?;
    if gap.delta <= 0.0 {
        return Err(Error::NotErgodic("spectral gap is zero".into()));
    }
    let lower = if eps >= 0.5 { 0.0 } else { 0.5 * gap.lambda / gap.delta * (1.0 / (2.0 * eps)).ln() };
    let upper = ((n_states as f64).ln() + (1.0 / eps).ln()) / gap.delta;
    Ok(MixingBounds { lower, upper })
}

fn check_eps(eps: f64) -> Result<()> {
    if eps > 0.0 && eps < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("eps must lie in (0, 1), got {eps}")))
    }
}

/// Exact `τ(ε)` with its certificate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExactMixing {
    pub tau: u64,
    /// Last power examined.
    pub horizon: u64,
    /// `d̄(horizon)`, an upper bound on `d(t)` for every `t ≥ horizon`.
    pub envelope: f64,
}

/// Smallest `T` such that `d(t) ≤ ε` for every `t ≥ T`.
///
/// Powers are examined up to `⌈4 · upper bound⌉`. Since `d(t) ≤ d̄(t)` and
/// `d̄` is submultiplicative (hence non-increasing), `d̄(horizon) ≤ ε` covers
/// every later `t`; otherwise the result is [`Error::Inconclusive`].
pub fn mixing_time_exact(p: &TransitionMatrix, eps: f64, tol: &Tolerances) -> Result<ExactMixing> {
    check_eps(eps)?;
    let gap = spectral_gap(p, tol)?;
    ensure_ergodic(&gap)?;
    let n = p.n_states();
    let bounds = mixing_time_bounds(&gap, n, eps)?;
    let horizon = (4.0 * bounds.upper).ceil().max(1.0) as u64;

    let mut power = Matrix::identity(n, n);
    let mut last_violation = (distance_to_uniform(&power) > eps).then_some(0u64);
    for t in 1..=horizon {
        power = p.entries() * &power;
        if distance_to_uniform(&power) > eps {
            last_violation = Some(t);
        }
    }
    let envelope = max_pairwise_column_distance(&power);
    if envelope > eps {
        return Err(Error::Inconclusive { horizon: horizon as usize, envelope, eps });
    }
    let tau = last_violation.map_or(0, |t| t + 1);
    Ok(ExactMixing { tau, horizon, envelope })
}

fn ensure_ergodic(gap: &SpectralGap) -> Result<()> {
    if gap.periodic || gap.delta <= 1e-12 {
        Err(Error::NotErgodic(format!(
            "spectral gap {:e} (smallest eigenvalue {})",
            gap.delta, gap.smallest_eigenvalue
        )))
    } else {
        Ok(())
    }
}

/// `(t, d(t), d̄(t))` for `t = 0..=t_max`.
pub fn distance_profile(p: &TransitionMatrix, t_max: u64) -> Vec<(u64, f64, f64)> {
    let n = p.n_states();
    let mut power = Matrix::identity(n, n);
    let mut out = Vec::with_capacity(t_max as usize + 1);
    for t in 0..=t_max {
        if t > 0 {
            power = p.entries() * &power;
        }
        out.push((t, distance_to_uniform(&power), max_pairwise_column_distance(&power)));
    }
    out
}

/// Amplification check for one `ε`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Amplified {
    pub eps: f64,
    /// `τ_mix ⌈ln ε⁻¹⌉`.
    pub bound: u64,
    pub exact: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Threshold {
    pub tau_mix: u64,
    pub amplified: Vec<Amplified>,
}

/// `τ_mix = τ(1/2e)`.
pub const THRESHOLD_EPS: f64 = 1.0 / (2.0 * std::f64::consts::E);

pub(crate) fn ceil_log(x: f64, base: f64) -> u64 {
    // Absorb rounding in exact cases such as log₂ 4.
    (x.ln() / base.ln() - 1e-12).ceil().max(0.0) as u64
}

/// `τ_mix` and the amplified bounds `τ_mix ⌈ln ε⁻¹⌉`, each checked against the exact `τ(ε)`.
pub fn threshold_and_amplify(p: &TransitionMatrix, eps_list: &[f64], tol: &Tolerances) -> Result<Threshold> {
    let tau_mix = mixing_time_exact(p, THRESHOLD_EPS, tol)?.tau;
    let amplified = eps_list
        .iter()
        .map(|&eps| {
            let bound = tau_mix * ceil_log(1.0 / eps, std::f64::consts::E);
            let exact = mixing_time_exact(p, eps, tol)?.tau;
            if exact > bound {
                return Err(Error::invariant(
                    "tau(eps) <= tau_mix * ceil(ln 1/eps)",
                    format!("eps = {eps}: exact {exact} > bound {bound}"),
                ));
            }
            Ok(Amplified { eps, bound, exact })
        })
        .collect::<Result<_>>()?;
    Ok(Threshold { tau_mix, amplified })
}

/// `1 - γ(1 - 2(1 - β))` for a matrix with at least `βN` entries ≥ `γ/N` per column.
pub fn entry_floor_bound(beta: f64, gamma: f64) -> Result<f64> {
    if !(beta > 0.5 && beta <= 1.0) {
        return Err(Error::InvalidArgument(format!("beta must lie in (1/2, 1], got {beta}")));
    }
    if !(gamma > 0.0 && gamma <= 1.0) {
        return Err(Error::InvalidArgument(format!("gamma must lie in (0, 1], got {gamma}")));
    }
    Ok(1.0 - gamma * (1.0 - 2.0 * (1.0 - beta)))
}

/// Measured `(β, γ)` for a stochastic matrix, chosen to minimize the entry-floor bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntryFloor {
    pub beta: f64,
    pub gamma: f64,
    pub bound: f64,
}

/// Best `(β, γ)` over thresholds `γ/N` drawn from the matrix's own entries.
/// `None` when no threshold leaves more than half of every column above it.
pub fn measure_entry_floor(q: &Matrix) -> Option<EntryFloor> {
    let n = q.nrows();
    let nf = n as f64;
    let mut sorted_cols: Vec<Vec<f64>> = (0..q.ncols())
        .map(|x| {
            let mut col: Vec<f64> = q.column(x).iter().copied().collect();
            col.sort_by(|a, b| b.total_cmp(a));
            col
        })
        .collect();
    let mut candidates: Vec<f64> = sorted_cols.iter().flatten().copied().filter(|v| *v > 0.0).collect();
    candidates.sort_by(f64::total_cmp);
    candidates.dedup();
    let mut best: Option<EntryFloor> = None;
    for &threshold in &candidates {
        let gamma = (threshold * nf).min(1.0);
        let count = sorted_cols
            .iter_mut()
            .map(|col| col.partition_point(|v| *v >= threshold))
            .min()
            .unwrap_or(0);
        let beta = count as f64 / nf;
        if let Ok(bound) = entry_floor_bound(beta, gamma) {
            if best.is_none_or(|b| bound < b.bound) {
                best = Some(EntryFloor { beta, gamma, bound });
            }
        }
    }
    best
}

/// `2·½‖Q - Q'‖₁ + max pairwise column distance of Q`, checked against `Q'` directly.
pub fn perturbation_bound(q: &Matrix, q_prime: &Matrix, tol: &Tolerances) -> Result<f64> {
    let beta = matrix_tv_distance(q, q_prime)?;
    let bound = 2.0 * beta + max_pairwise_column_distance(q);
    let actual = max_pairwise_column_distance(q_prime);
    if actual > bound + tol.comparison {
        return Err(Error::invariant(
            "perturbation bound",
            format!("column distance {actual} exceeds 2·{beta} + gamma = {bound}"),
        ));
    }
    Ok(bound)
}

/// `exp(-(I - P)t) = Σ_k e^{-(1-λ_k)t} |φ_k⟩⟨φ_k|`.
pub fn poisson_average(s: &Spectrum, t: f64) -> Matrix {
    let n = s.n_states();
    let phi = s.eigenvectors();
    let scaled = Matrix::from_fn(n, n, |y, k| phi[(y, k)] * (-(1.0 - s.eigenvalues()[k]) * t).exp());
    scaled * phi.transpose()
}

/// `(1/T) Σ_{t<T} P^t`.
pub fn cesaro_power_average(p: &TransitionMatrix, horizon: u64) -> Matrix {
    let n = p.n_states();
    let mut power = Matrix::identity(n, n);
    let mut acc = Matrix::zeros(n, n);
    for _ in 0..horizon {
        acc += &power;
        power = p.entries() * &power;
    }
    if horizon > 0 {
        acc /= horizon as f64;
    }
    acc
}

/// Run the chain for `steps` steps from `x0`; trace rounds are `(step, state)`.
pub fn classical_sample(p: &TransitionMatrix, steps: u64, x0: usize, seed: u64, trial: u64) -> Result<SampleTrace> {
    let n = p.n_states();
    if x0 >= n {
        return Err(Error::StateOutOfRange { state: x0, n });
    }
    let mut rng = trial_rng(seed, trial);
    let mut state = x0;
    let mut rounds = Vec::with_capacity(steps as usize);
    for step in 0..steps {
        let column = p.entries().column(state);
        state = inverse_cdf(column.as_slice(), &mut rng);
        rounds.push((step as f64 + 1.0, state));
    }
    Ok(SampleTrace { seed, trial, initial_state: x0, rounds, final_state: state })
}

/// Double loop: `⌈ln ε⁻¹⌉` outer rounds of `tau_mix` steps each.
pub fn classical_double_loop(
    p: &TransitionMatrix,
    tau_mix: u64,
    eps: f64,
    x0: usize,
    seed: u64,
    trial: u64,
) -> Result<SampleTrace> {
    check_eps(eps)?;
    let outer = ceil_log(1.0 / eps, std::f64::consts::E);
    classical_sample(p, tau_mix * outer, x0, seed, trial)
}

/// Everything known about one chain, classical and quantum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixingReport {
    pub graph: String,
    pub n_states: usize,
    pub spectral_gap: f64,
    pub second_eigenvalue: f64,
    pub periodic: bool,
    pub second_dominates: bool,
    /// `ε → τ(ε)`; empty for periodic chains.
    pub tau_eps: BTreeMap<String, u64>,
    pub tau_mix: Option<u64>,
    pub ds_lower: BTreeMap<String, f64>,
    pub ds_upper: BTreeMap<String, f64>,
    pub alpha: f64,
    pub eps0: f64,
    pub tau_prime_eps: BTreeMap<String, f64>,
    pub tau_prime_mix: f64,
    pub amplification_fails: bool,
}

/// Key used for `ε` in report maps.
pub fn eps_key(eps: f64) -> String {
    format!("{eps}")
}

/// Classical and quantum mixing summary for `p` at each `ε`.
pub fn mixing_report(p: &TransitionMatrix, eps_list: &[f64], tol: &Tolerances) -> Result<MixingReport> {
    let s = eigendecompose(p, tol)?;
    let gap = spectral_gap_of(&s, tol);
    let ergodic = ensure_ergodic(&gap).is_ok();

    let mut tau_eps = BTreeMap::new();
    let mut ds_lower = BTreeMap::new();
    let mut ds_upper = BTreeMap::new();
    let mut tau_mix = None;
    if ergodic {
        for &eps in eps_list {
            let exact = mixing_time_exact(p, eps, tol)?;
            let bounds = mixing_time_bounds(&gap, p.n_states(), eps)?;
            tau_eps.insert(eps_key(eps), exact.tau);
            ds_lower.insert(eps_key(eps), bounds.lower);
            ds_upper.insert(eps_key(eps), bounds.upper);
        }
        tau_mix = Some(mixing_time_exact(p, THRESHOLD_EPS, tol)?.tau);
    }

    let classes = crate::spectral::classes_for(p, &s, tol)?;
    let kernel = crate::spectral::CesaroKernel::new(&s, &classes)?;
    let threshold = crate::spectral::threshold_from_kernel(&kernel)?;
    let mut tau_prime_eps = BTreeMap::new();
    for &eps in eps_list {
        tau_prime_eps.insert(eps_key(eps), kernel.mixing_time(eps)?);
    }
    Ok(MixingReport {
        graph: p.label(),
        n_states: p.n_states(),
        spectral_gap: gap.delta,
        second_eigenvalue: gap.second_eigenvalue,
        periodic: gap.periodic,
        second_dominates: gap.second_dominates,
        tau_eps,
        tau_mix,
        ds_lower,
        ds_upper,
        alpha: threshold.alpha,
        eps0: threshold.eps0,
        tau_prime_eps,
        tau_prime_mix: threshold.tau_prime_mix,
        amplification_fails: threshold.amplification_fails,
    })
}
