//! Single- and double-loop quantum samplers.
//!
//! Each trial draws from its own ChaCha8 stream selected by `(seed, trial)`,
//! so trials can run in any order or concurrently and still reproduce
//! bit-for-bit.

use std::io::Write;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::markov::{ceil_log, Distribution};
use crate::spectral::{propagator_column, CesaroKernel, EigenvalueClasses, QuantumThreshold, Spectrum};
use crate::Matrix;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleTrace {
    pub seed: u64,
    pub trial: u64,
    pub initial_state: usize,
    /// `(measurement time, observed state)` per round.
    pub rounds: Vec<(f64, usize)>,
    pub final_state: usize,
}

/// Counter-based stream for one trial.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Inverse-CDF draw over `weights` in index order. Entries below zero are
/// rounding noise and count as zero; the remaining mass is renormalized.
pub fn inverse_cdf(weights: &[f64], rng: &mut impl Rng) -> usize {
    let total: f64 = weights.iter().map(|w| w.max(0.0)).sum();
    let target = rng.random::<f64>() * total;
    let mut acc = 0.0;
    let mut last_positive = 0;
    for (i, w) in weights.iter().enumerate() {
        let w = w.max(0.0);
        if w > 0.0 {
            last_positive = i;
            acc += w;
            if target < acc {
                return i;
            }
        }
    }
    last_positive
}

fn check_state(s: &Spectrum, x0: usize) -> Result<()> {
    if x0 >= s.n_states() {
        return Err(Error::StateOutOfRange { state: x0, n: s.n_states() });
    }
    Ok(())
}

fn check_horizon(horizon: f64) -> Result<()> {
    if horizon > 0.0 && horizon.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("T must be positive, got {horizon}")))
    }
}

fn measure_once(s: &Spectrum, horizon: f64, state: usize, rng: &mut ChaCha8Rng) -> (f64, usize) {
    let t = horizon * rng.random::<f64>();
    let probs: Vec<f64> = propagator_column(s, t, state).iter().map(|z| z.norm_sqr()).collect();
    (t, inverse_cdf(&probs, rng))
}

/// Run the walk from `x0` for `t ~ U[0, T]`, then measure.
pub fn single_loop(s: &Spectrum, horizon: f64, x0: usize, seed: u64, trial: u64) -> Result<SampleTrace> {
    double_loop(s, horizon, 1, x0, seed, trial)
}

/// Repeat the single loop `rounds` times, restarting from each measured state.
pub fn double_loop(
    s: &Spectrum,
    horizon: f64,
    rounds: u64,
    x0: usize,
    seed: u64,
    trial: u64,
) -> Result<SampleTrace> {
    check_state(s, x0)?;
    check_horizon(horizon)?;
    if rounds == 0 {
        return Err(Error::InvalidArgument("T' must be at least 1".into()));
    }
    let mut rng = trial_rng(seed, trial);
    let mut state = x0;
    let mut trace = Vec::with_capacity(rounds as usize);
    for _ in 0..rounds {
        let (t, next) = measure_once(s, horizon, state, &mut rng);
        trace.push((t, next));
        state = next;
    }
    Ok(SampleTrace { seed, trial, initial_state: x0, rounds: trace, final_state: state })
}

/// Column `x0` of `(P̄_T)^{T'}`.
pub fn exact_output_law(
    s: &Spectrum,
    classes: &EigenvalueClasses,
    horizon: f64,
    rounds: u64,
    x0: usize,
) -> Result<Distribution> {
    check_state(s, x0)?;
    check_horizon(horizon)?;
    let kernel = CesaroKernel::new(s, classes)?;
    law_after(&kernel.finite(horizon), rounds, x0)
}

/// Column `x0` of `m^rounds`.
pub fn law_after(m: &Matrix, rounds: u64, x0: usize) -> Result<Distribution> {
    let n = m.nrows();
    if x0 >= n {
        return Err(Error::StateOutOfRange { state: x0, n });
    }
    let mut v = nalgebra::DVector::<f64>::zeros(n);
    v[x0] = 1.0;
    for _ in 0..rounds {
        v = m * v;
    }
    let total: f64 = v.iter().map(|p| p.max(0.0)).sum();
    Distribution::new(v.iter().map(|p| p.max(0.0) / total).collect())
}

/// Inner-loop horizon and outer repetitions for an `ε`-close sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceParams {
    /// `T = τ'_mix`.
    pub horizon: f64,
    /// `T' = ⌈log_{2/(1+α)} ε⁻¹⌉`.
    pub rounds: u64,
    pub alpha: f64,
    pub eps0: f64,
}

/// `⌈log_{2/(1+α)} ε⁻¹⌉`.
pub fn outer_rounds(alpha: f64, eps: f64) -> Result<u64> {
    if !(0.0..1.0 - 1e-9).contains(&alpha) {
        return Err(Error::AmplificationUnavailable { alpha });
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidArgument(format!("eps must lie in (0, 1), got {eps}")));
    }
    Ok(ceil_log(1.0 / eps, 2.0 / (1.0 + alpha)).max(1))
}

pub fn convergence_params(s: &Spectrum, classes: &EigenvalueClasses, eps: f64) -> Result<ConvergenceParams> {
    let threshold = crate::spectral::alpha_and_threshold(s, classes)?;
    params_from_threshold(&threshold, eps)
}

pub fn params_from_threshold(threshold: &QuantumThreshold, eps: f64) -> Result<ConvergenceParams> {
    if threshold.amplification_fails {
        return Err(Error::AmplificationUnavailable { alpha: threshold.alpha });
    }
    Ok(ConvergenceParams {
        horizon: threshold.tau_prime_mix,
        rounds: outer_rounds(threshold.alpha, eps)?,
        alpha: threshold.alpha,
        eps0: threshold.eps0,
    })
}

/// Run `trials` independent double loops and return them in trial order.
pub fn run_trials(
    s: &Spectrum,
    horizon: f64,
    rounds: u64,
    x0: usize,
    seed: u64,
    trials: u64,
) -> Result<Vec<SampleTrace>> {
    (0..trials)
        .into_par_iter()
        .map(|trial| double_loop(s, horizon, rounds, x0, seed, trial))
        .collect()
}

/// Final-state counts over `trials` independent double loops.
pub fn final_state_counts(
    s: &Spectrum,
    horizon: f64,
    rounds: u64,
    x0: usize,
    seed: u64,
    trials: u64,
) -> Result<Vec<u64>> {
    check_state(s, x0)?;
    let n = s.n_states();
    (0..trials)
        .into_par_iter()
        .map(|trial| double_loop(s, horizon, rounds, x0, seed, trial).map(|t| t.final_state))
        .try_fold(
            || vec![0u64; n],
            |mut acc, state| {
                acc[state?] += 1;
                Ok(acc)
            },
        )
        .try_reduce(
            || vec![0u64; n],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                Ok(a)
            },
        )
}

/// One row per round: `trial,round,time,state`.
pub fn write_trace_csv(traces: &[SampleTrace], mut out: impl Write) -> Result<()> {
    writeln!(out, "trial,round,time,state")?;
    for trace in traces {
        writeln!(out, "{},0,0,{}", trace.trial, trace.initial_state)?;
        for (i, (t, state)) in trace.rounds.iter().enumerate() {
            writeln!(out, "{},{},{:.17e},{}", trace.trial, i + 1, t, state)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Tolerances;
    use crate::graph::{build_transition, GraphSpec};
    use crate::markov::tv_distance;
    use crate::spectral::{classes_for, eigendecompose};

    fn setup(spec: GraphSpec) -> (Spectrum, EigenvalueClasses) {
        let p = build_transition(&spec).unwrap();
        let tol = Tolerances::default();
        let s = eigendecompose(&p, &tol).unwrap();
        let c = classes_for(&p, &s, &tol).unwrap();
        (s, c)
    }

    #[test]
    fn inverse_cdf_respects_zero_weights() {
        let mut rng = trial_rng(1, 0);
        for _ in 0..1000 {
            let i = inverse_cdf(&[0.0, -1e-15, 0.7, 0.0, 0.3, 0.0], &mut rng);
            assert!(i == 2 || i == 4);
        }
    }

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let (s, _) = setup(GraphSpec::Cycle { n: 7 });
        let a = double_loop(&s, 5.0, 4, 0, 42, 3).unwrap();
        let b = double_loop(&s, 5.0, 4, 0, 42, 3).unwrap();
        let c = double_loop(&s, 5.0, 4, 0, 42, 4).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.rounds, c.rounds);
        assert_eq!(a.rounds.len(), 4);
        assert!(a.rounds.iter().all(|(t, _)| (0.0..5.0).contains(t)));
    }

    #[test]
    fn tiny_horizon_stays_put() {
        let (s, _) = setup(GraphSpec::Cycle { n: 7 });
        for trial in 0..200 {
            assert_eq!(single_loop(&s, 1e-9, 3, 5, trial).unwrap().final_state, 3);
        }
    }

    #[test]
    fn input_validation() {
        let (s, c) = setup(GraphSpec::Cycle { n: 5 });
        assert!(single_loop(&s, 1.0, 5, 0, 0).is_err());
        assert!(single_loop(&s, 0.0, 0, 0, 0).is_err());
        assert!(double_loop(&s, 1.0, 0, 0, 0, 0).is_err());
        assert!(exact_output_law(&s, &c, 1.0, 1, 9).is_err());
    }

    #[test]
    fn zero_rounds_is_point_mass() {
        let (s, c) = setup(GraphSpec::Cycle { n: 5 });
        let law = exact_output_law(&s, &c, 3.0, 0, 2).unwrap();
        assert_eq!(law, Distribution::point(5, 2));
    }

    #[test]
    fn outer_rounds_examples() {
        assert_eq!(outer_rounds(0.0, 0.25).unwrap(), 2);
        assert_eq!(outer_rounds(1.0 / 3.0, 0.01).unwrap(), 12);
        assert!(outer_rounds(1.0, 0.1).is_err());
    }

    #[test]
    fn doubling_inverse_eps_adds_few_rounds() {
        for alpha in [0.0, 0.2, 0.5, 0.8] {
            let step = ceil_log(2.0, 2.0 / (1.0 + alpha)) + 1;
            let mut eps = 0.4;
            while eps > 1e-6 {
                let a = outer_rounds(alpha, eps).unwrap();
                let b = outer_rounds(alpha, eps / 2.0).unwrap();
                assert!(b >= a && b - a <= step);
                eps /= 2.0;
            }
        }
    }

    #[test]
    fn uniform_start_is_a_fixed_point() {
        let (s, c) = setup(GraphSpec::Torus { p: 3, d: 2 });
        let m = CesaroKernel::new(&s, &c).unwrap().finite(2.5);
        let mut v = nalgebra::DVector::from_element(9, 1.0 / 9.0);
        for _ in 0..5 {
            v = &m * v;
        }
        assert!(v.iter().all(|p| (p - 1.0 / 9.0).abs() < 1e-14));
    }

    #[test]
    fn single_loop_matches_cesaro_column() {
        let (s, c) = setup(GraphSpec::Cycle { n: 5 });
        let counts = final_state_counts(&s, 4.0, 1, 0, 11, 40_000).unwrap();
        let empirical = Distribution::from_counts(&counts).unwrap();
        let exact = exact_output_law(&s, &c, 4.0, 1, 0).unwrap();
        assert!(tv_distance(&empirical, &exact).unwrap() < 0.02);
    }

    #[test]
    fn trace_csv_layout() {
        let (s, _) = setup(GraphSpec::Cycle { n: 5 });
        let traces = run_trials(&s, 1.0, 2, 1, 7, 2).unwrap();
        let mut buf = Vec::new();
        write_trace_csv(&traces, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "trial,round,time,state");
        assert_eq!(lines.len(), 1 + 2 * 3);
        assert!(lines[1].starts_with("0,0,0,1"));
    }
}
