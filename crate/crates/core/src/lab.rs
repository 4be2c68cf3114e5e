//! Numerical checks of the torus, hypercube and complete-graph results.
//!
//! Asymptotic lower bounds are checked against floors recorded in golden
//! files; see [`golden_dir`].

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::graph::{build_transition, GraphSpec};
use crate::markov::{matrix_tv_distance, max_pairwise_column_distance, measure_entry_floor, spectral_gap_of};
use crate::sampler::trial_rng;
use crate::spectral::orbits::{coordinates, is_prime, orbit_partition_mismatch, torus_orbits};
use crate::spectral::{
    alpha_and_threshold, classes_for, eigendecompose, group_eigenvalues, propagator, threshold_from_kernel,
    CesaroKernel, EigenvalueClasses, Spectrum,
};
use crate::Matrix;

/// Environment variable overriding the golden-file directory.
pub const GOLDEN_DIR_ENV: &str = "QWALK_GOLDEN_DIR";

/// `$QWALK_GOLDEN_DIR`, or the `golden/` directory shipped with this crate.
pub fn golden_dir() -> PathBuf {
    std::env::var_os(GOLDEN_DIR_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| Path::new(env!("CARGO_MANIFEST_DIR")).join("golden"))
}

struct Walk {
    spectrum: Spectrum,
    classes: EigenvalueClasses,
}

impl Walk {
    fn new(spec: &GraphSpec, tol: &Tolerances) -> Result<Walk> {
        let p = build_transition(spec)?;
        let spectrum = eigendecompose(&p, tol)?;
        let classes = classes_for(&p, &spectrum, tol)?;
        Ok(Walk { spectrum, classes })
    }

    fn kernel(&self) -> Result<CesaroKernel<'_>> {
        CesaroKernel::new(&self.spectrum, &self.classes)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PiFloor {
    pub n_states: usize,
    pub min_entry: f64,
    /// `N · min Π(y, x)`.
    pub scaled: f64,
    /// `min Π ≥ 1/N² - 1e-12`.
    pub passes: bool,
}

pub fn pi_floor_report(pi: &Matrix) -> PiFloor {
    let n = pi.nrows();
    let nf = n as f64;
    let min_entry = pi.min();
    PiFloor { n_states: n, min_entry, scaled: nf * min_entry, passes: min_entry >= 1.0 / (nf * nf) - 1e-12 }
}

/// `Π` of the walk on `spec`.
pub fn pi_matrix(spec: &GraphSpec, tol: &Tolerances) -> Result<Matrix> {
    Ok(Walk::new(spec, tol)?.kernel()?.infinite())
}

/// `Π(y, 0) = (1/N²) Σ_j (Σ_{k ∈ C_j} cos(2π k·y / p))²` from the orbit classes, expanded
/// to all columns by translation invariance.
pub fn symbolic_torus_pi(p: usize, d: usize) -> Result<Matrix> {
    if !is_prime(p) {
        return Err(Error::InvalidArgument(format!("symbolic classes need prime p, got {p}")));
    }
    let n = GraphSpec::Torus { p, d }.n_states()?;
    let orbits = torus_orbits(p, d);
    let orbit_coords: Vec<Vec<Vec<usize>>> = orbits
        .iter()
        .map(|o| o.members.iter().map(|&k| coordinates(k, p, d)).collect())
        .collect();
    let nf = n as f64;
    let column: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|y| {
            let yc = coordinates(y, p, d);
            orbit_coords
                .iter()
                .map(|members| {
                    let amp: f64 = members
                        .iter()
                        .map(|k| {
                            let dot: usize = k.iter().zip(&yc).map(|(a, b)| a * b).sum::<usize>() % p;
                            (2.0 * PI * dot as f64 / p as f64).cos()
                        })
                        .sum();
                    amp * amp
                })
                .sum::<f64>()
                / (nf * nf)
        })
        .collect();
    let diff = |y: usize, x: usize| {
        let (yc, xc) = (coordinates(y, p, d), coordinates(x, p, d));
        yc.iter().zip(&xc).rev().fold(0, |acc, (a, b)| acc * p + (a + p - b) % p)
    };
    Ok(Matrix::from_fn(n, n, |y, x| column[diff(y, x)]))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TorusAmplificationRow {
    pub p: usize,
    pub d: usize,
    pub n_states: usize,
    /// `N · min Π` from the numerical eigendecomposition.
    pub scaled_min_entry: f64,
    /// The same quantity from the symbolic orbit formula.
    pub symbolic_scaled_min_entry: f64,
    /// `max |Π_numerical - Π_symbolic|`.
    pub symbolic_deviation: f64,
    pub passes_pi_floor: bool,
    pub alpha: f64,
    pub max_class_size: usize,
    /// `2^d · d!`.
    pub class_size_bound: usize,
    pub classes_match_orbits: bool,
    /// Entry-floor bound on `α` from measured `(β, γ)`, if one exists.
    pub entry_floor_alpha_bound: Option<f64>,
}

pub fn torus_amplification_report(p_list: &[usize], d: usize, tol: &Tolerances) -> Result<Vec<TorusAmplificationRow>> {
    p_list
        .iter()
        .map(|&p| {
            if !is_prime(p) {
                return Err(Error::InvalidArgument(format!("symbolic classes need prime p, got {p}")));
            }
            let spec = GraphSpec::Torus { p, d };
            let walk = Walk::new(&spec, tol)?;
            let pi = walk.kernel()?.infinite();
            let symbolic = symbolic_torus_pi(p, d)?;
            let floor = pi_floor_report(&pi);
            let nf = floor.n_states as f64;
            let check = multiplicity_class_check(p, d, tol)?;
            Ok(TorusAmplificationRow {
                p,
                d,
                n_states: floor.n_states,
                scaled_min_entry: floor.scaled,
                symbolic_scaled_min_entry: nf * symbolic.min(),
                symbolic_deviation: (&pi - &symbolic).amax(),
                passes_pi_floor: floor.passes,
                alpha: max_pairwise_column_distance(&pi),
                max_class_size: walk.classes.sizes().into_iter().max().unwrap_or(0),
                class_size_bound: (1 << d) * (1..=d).product::<usize>(),
                classes_match_orbits: check.matches,
                entry_floor_alpha_bound: measure_entry_floor(&pi).map(|f| f.bound),
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassCheck {
    pub p: usize,
    pub d: usize,
    pub n_classes: usize,
    pub orbit_sizes: Vec<usize>,
    pub matches: bool,
    /// Offending pair `(k, l)` when the partitions disagree.
    pub mismatch: Option<(Vec<usize>, Vec<usize>)>,
}

/// Compare numerical eigenvalue clusters of the torus with signed-permutation orbits.
pub fn multiplicity_class_check(p: usize, d: usize, tol: &Tolerances) -> Result<ClassCheck> {
    if !is_prime(p) {
        return Err(Error::InvalidArgument(format!("p = {p} is not prime")));
    }
    let transition = build_transition(&GraphSpec::Torus { p, d })?;
    let s = eigendecompose(&transition, tol)?;
    let ev = s.eigenvalues();
    let abs_tol = tol.class_tolerance(ev[ev.len() - 1], ev[0]);
    let classes = group_eigenvalues(&s, abs_tol)?;
    let orbits = torus_orbits(p, d);
    let orbit_sizes: Vec<usize> = orbits.iter().map(|o| o.members.len()).collect();
    let mut mismatch = orbit_partition_mismatch(p, d, abs_tol);
    if mismatch.is_none() {
        let numerical = classes.sizes().into_iter().zip(classes.values());
        let bad = orbits
            .iter()
            .zip(numerical)
            .find(|(o, (size, value))| o.members.len() != *size || (o.eigenvalue - **value).abs() > 1e-9);
        if let Some((o, _)) = bad {
            mismatch = Some((o.representative.clone(), o.representative.clone()));
        } else if orbits.len() != classes.len() {
            let o = &orbits[orbits.len().min(classes.len()) - 1];
            mismatch = Some((o.representative.clone(), o.representative.clone()));
        }
    }
    Ok(ClassCheck { p, d, n_classes: classes.len(), orbit_sizes, matches: mismatch.is_none(), mismatch })
}

/// Centered representative of `v mod n` in `(-n/2, n/2]`.
pub fn centered_residue(v: i64, n: i64) -> i64 {
    let r = v.rem_euclid(n);
    if 2 * r > n {
        r - n
    } else {
        r
    }
}

/// Number of `x ∈ Z_n` with every centered residue `x·y_i mod n` in `[-n/8d, n/8d]`.
pub fn cancellation_count(n: u64, y: &[u64]) -> Result<u64> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("n must be at least 2, got {n}")));
    }
    if y.is_empty() {
        return Err(Error::InvalidArgument("y must have at least one coordinate".into()));
    }
    let ni = n as i64;
    let radius = n as f64 / (8 * y.len()) as f64;
    let count = (0..ni)
        .filter(|&x| {
            y.iter().all(|&yi| {
                let prod = (x as i128 * (yi % n) as i128 % ni as i128) as i64;
                (centered_residue(prod, ni) as f64).abs() <= radius
            })
        })
        .count();
    Ok(count as u64)
}

/// `n / (8d)^d`.
pub fn cancellation_bound(n: u64, d: usize) -> f64 {
    n as f64 / ((8 * d) as f64).powi(d as i32)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CancellationRow {
    pub trial: u64,
    pub y: Vec<u64>,
    pub count: u64,
    pub bound: f64,
    pub passes: bool,
}

/// Counts for `trials` random `y ∈ Z_n^d`, one stream per trial.
pub fn cancellation_sweep(n: u64, d: usize, trials: u64, seed: u64) -> Result<Vec<CancellationRow>> {
    let bound = cancellation_bound(n, d);
    (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(seed, trial);
            let y: Vec<u64> = (0..d).map(|_| rng.random_range(0..n)).collect();
            let count = cancellation_count(n, &y)?;
            Ok(CancellationRow { trial, y, count, bound, passes: count as f64 >= bound })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Periodicity {
    pub horizon: f64,
    /// `max |U_T - e^{iθ} I|`.
    pub residual: f64,
    /// `θ`.
    pub phase: f64,
}

/// How far `U_T` is from a global phase times the identity.
pub fn periodicity_check(s: &Spectrum, horizon: f64) -> Result<Periodicity> {
    if !(horizon > 0.0 && horizon.is_finite()) {
        return Err(Error::InvalidArgument(format!("T must be positive, got {horizon}")));
    }
    let u = propagator(s, horizon);
    let n = u.nrows();
    let mean: Complex64 = u.diagonal().iter().sum::<Complex64>() / n as f64;
    let phase = mean.arg();
    let target = Complex64::from_polar(1.0, phase);
    let residual = (0..n)
        .flat_map(|y| (0..n).map(move |x| (y, x)))
        .map(|(y, x)| {
            let want = if x == y { target } else { Complex64::new(0.0, 0.0) };
            (u[(y, x)] - want).norm()
        })
        .fold(0.0, f64::max);
    Ok(Periodicity { horizon, residual, phase })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClosedFormRow {
    pub t: f64,
    /// `max |U_t - (I + P(e^{-it} - 1))|`.
    pub deviation: f64,
    /// `max_{y≠x} |U_t(y, x)|²`.
    pub max_off_diagonal: f64,
    pub bound: f64,
    /// `|e^{-it} - 1|`.
    pub phase_gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompleteGraphReport {
    pub n_states: usize,
    pub rows: Vec<ClosedFormRow>,
    pub alpha: f64,
    /// `1 - 2/N`.
    pub expected_alpha: f64,
    pub amplification_fails: bool,
    pub passes: bool,
}

/// Closed-form propagator and the large-`α` regime of the complete graph with loops.
pub fn complete_graph_negative_result(n: usize, t_list: &[f64], tol: &Tolerances) -> Result<CompleteGraphReport> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("N must be at least 2, got {n}")));
    }
    let spec = GraphSpec::Complete { n, with_self_loops: true };
    let transition = build_transition(&spec)?;
    let walk = Walk::new(&spec, tol)?;
    let nf = n as f64;
    let bound = 4.0 / (nf * nf);
    let rows: Vec<ClosedFormRow> = t_list
        .iter()
        .map(|&t| {
            let u = propagator(&walk.spectrum, t);
            let z = Complex64::new(0.0, -t).exp() - 1.0;
            let p = transition.entries();
            let mut deviation: f64 = 0.0;
            let mut max_off_diagonal: f64 = 0.0;
            for y in 0..n {
                for x in 0..n {
                    let id = if x == y { 1.0 } else { 0.0 };
                    let closed = Complex64::new(id, 0.0) + z * p[(y, x)];
                    deviation = deviation.max((u[(y, x)] - closed).norm());
                    if x != y {
                        max_off_diagonal = max_off_diagonal.max(u[(y, x)].norm_sqr());
                    }
                }
            }
            ClosedFormRow { t, deviation, max_off_diagonal, bound, phase_gap: z.norm() }
        })
        .collect();
    let threshold = threshold_from_kernel(&walk.kernel()?)?;
    let expected_alpha = 1.0 - 2.0 / nf;
    let passes = rows.iter().all(|r| r.deviation <= 1e-10 && r.max_off_diagonal <= r.bound + 1e-15)
        && (threshold.alpha - expected_alpha).abs() <= 1e-9;
    Ok(CompleteGraphReport {
        n_states: n,
        rows,
        alpha: threshold.alpha,
        expected_alpha,
        amplification_fails: threshold.amplification_fails || expected_alpha >= 0.5,
        passes,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiameterRow {
    pub graph: String,
    pub n_states: usize,
    pub diameter: usize,
    /// `(1 - λ₂)^{-1/2} ln N`.
    pub gap_scale: f64,
    pub alpha: f64,
    pub tau_prime_mix: f64,
}

pub fn diameter_bound_report(spec: &GraphSpec, tol: &Tolerances) -> Result<DiameterRow> {
    let walk = Walk::new(spec, tol)?;
    let gap = spectral_gap_of(&walk.spectrum, tol);
    let threshold = alpha_and_threshold(&walk.spectrum, &walk.classes)?;
    let n = walk.spectrum.n_states();
    Ok(DiameterRow {
        graph: spec.label(),
        n_states: n,
        diameter: spec.diameter()?,
        gap_scale: (1.0 - gap.second_eigenvalue).powf(-0.5) * (n as f64).ln(),
        alpha: threshold.alpha,
        tau_prime_mix: threshold.tau_prime_mix,
    })
}

/// `N · min Π` floor for one torus dimension.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GoldenFloor {
    pub d: usize,
    pub floor: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoldenCycleRow {
    pub n: usize,
    pub diameter: usize,
    pub tau_prime_mix: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoldenPeriodicity {
    pub graph: String,
    pub horizon: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoldenCommutator {
    pub graph: String,
    pub k: usize,
    pub l: usize,
    pub norm: f64,
}

pub const TORUS_FLOORS_FILE: &str = "torus_amplification_floors.csv";
pub const CYCLE_DIAMETER_FILE: &str = "cycle_diameter.csv";
pub const PERIODICITY_FILE: &str = "periodicity.csv";
pub const COMMUTATOR_FILE: &str = "commutators.csv";

/// Parse a headed CSV table into records.
pub fn parse_golden<T: DeserializeOwned>(text: &str) -> Result<Vec<T>> {
    csv::Reader::from_reader(text.as_bytes())
        .deserialize()
        .map(|r| r.map_err(|e| Error::Parse(e.to_string())))
        .collect()
}

pub fn read_golden<T: DeserializeOwned>(dir: &Path, file: &str) -> Result<Vec<T>> {
    let path = dir.join(file);
    let text = std::fs::read_to_string(&path)
        .map_err(|e| Error::Parse(format!("golden file {}: {e}", path.display())))?;
    parse_golden(&text)
}

/// Which group of checks to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Torus,
    Hypercube,
    Complete,
    All,
}

impl std::str::FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Suite> {
        match s {
            "torus" => Ok(Suite::Torus),
            "hypercube" => Ok(Suite::Hypercube),
            "complete" => Ok(Suite::Complete),
            "all" => Ok(Suite::All),
            other => Err(Error::InvalidArgument(format!("unknown suite {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Evidence table destined for CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabTable {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabReport {
    pub suite: Suite,
    pub passed: bool,
    pub checks: Vec<LabCheck>,
    pub tables: Vec<LabTable>,
}

struct Collector {
    checks: Vec<LabCheck>,
    tables: Vec<LabTable>,
}

impl Collector {
    fn check(&mut self, name: &str, passed: bool, detail: String) {
        self.checks.push(LabCheck { name: name.to_string(), passed, detail });
    }

    fn table(&mut self, name: &str, header: &[&str], rows: Vec<Vec<String>>) {
        let header = header.iter().map(|h| h.to_string()).collect();
        self.tables.push(LabTable { name: name.to_string(), header, rows });
    }
}

fn num(v: f64) -> String {
    format!("{v:e}")
}

pub const TORUS_PRIMES: [usize; 4] = [5, 7, 11, 13];
pub const CANCELLATION_N: u64 = 10007;
pub const CANCELLATION_SEED: u64 = 20240;
pub const CYCLE_RANGE: std::ops::RangeInclusive<usize> = 5..=41;
pub const COMPLETE_TIMES: [f64; 3] = [0.7, 2.3, 5.0];

/// Relative tolerance when comparing recomputed values with golden values.
pub const GOLDEN_RELATIVE: f64 = 1e-6;

fn torus_suite(c: &mut Collector, golden: &Path, tol: &Tolerances) -> Result<()> {
    let floors: Vec<GoldenFloor> = read_golden(golden, TORUS_FLOORS_FILE)?;
    let mut rows = Vec::new();
    for d in [1, 2] {
        let floor = floors
            .iter()
            .find(|f| f.d == d)
            .ok_or_else(|| Error::Parse(format!("no golden floor for d = {d}")))?
            .floor;
        for row in torus_amplification_report(&TORUS_PRIMES, d, tol)? {
            let label = format!("torus({},{})", row.p, row.d);
            c.check(
                "pi_floor",
                row.passes_pi_floor,
                format!("{label}: N·min Π = {}", row.scaled_min_entry),
            );
            c.check(
                "amplification_floor",
                row.scaled_min_entry >= floor && row.symbolic_deviation <= 1e-10,
                format!(
                    "{label}: N·min Π = {} vs floor {floor}, symbolic deviation {:e}",
                    row.scaled_min_entry, row.symbolic_deviation
                ),
            );
            c.check(
                "eigenvalue_multiplicities",
                row.classes_match_orbits && row.max_class_size <= row.class_size_bound,
                format!("{label}: max |C_j| = {} ≤ {}", row.max_class_size, row.class_size_bound),
            );
            c.check(
                "amplification_alpha",
                row.alpha < 1.0 && row.entry_floor_alpha_bound.is_some_and(|b| b < 1.0),
                format!("{label}: α = {}, entry-floor bound {:?}", row.alpha, row.entry_floor_alpha_bound),
            );
            rows.push(vec![
                row.p.to_string(),
                row.d.to_string(),
                row.n_states.to_string(),
                num(row.scaled_min_entry),
                num(row.symbolic_scaled_min_entry),
                num(row.alpha),
                row.max_class_size.to_string(),
                row.entry_floor_alpha_bound.map_or_else(String::new, num),
            ]);
        }
    }
    c.table(
        "torus_amplification",
        &["p", "d", "n_states", "scaled_min_entry", "symbolic_scaled_min_entry", "alpha", "max_class_size", "entry_floor_alpha_bound"],
        rows,
    );

    let sweep = cancellation_sweep(CANCELLATION_N, 2, 100, CANCELLATION_SEED)?;
    let worst = sweep.iter().map(|r| r.count).min().unwrap_or(0);
    c.check(
        "eigenvector_cancellations",
        sweep.iter().all(|r| r.passes),
        format!("n = {CANCELLATION_N}, d = 2: min count {worst} vs bound {}", cancellation_bound(CANCELLATION_N, 2)),
    );
    c.table(
        "cancellations",
        &["trial", "y", "count", "bound"],
        sweep
            .iter()
            .map(|r| {
                let y: Vec<String> = r.y.iter().map(|v| v.to_string()).collect();
                vec![r.trial.to_string(), y.join(" "), r.count.to_string(), num(r.bound)]
            })
            .collect(),
    );

    let golden_periodicity: Vec<GoldenPeriodicity> = read_golden(golden, PERIODICITY_FILE)?;
    for g in golden_periodicity.iter().filter(|g| g.graph.starts_with("torus")) {
        let walk = Walk::new(&GraphSpec::Torus { p: 5, d: 1 }, tol)?;
        let got = periodicity_check(&walk.spectrum, g.horizon)?;
        c.check(
            "periodicity_torus_residual",
            close(got.residual, g.residual),
            format!("{} at T = {}: residual {} vs golden {}", g.graph, g.horizon, got.residual, g.residual),
        );
    }

    let golden_cycles: Vec<GoldenCycleRow> = read_golden(golden, CYCLE_DIAMETER_FILE)?;
    let cycle_rows: Vec<DiameterRow> = CYCLE_RANGE
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|n| diameter_bound_report(&GraphSpec::Cycle { n }, tol))
        .collect::<Result<_>>()?;
    let mut mismatches = Vec::new();
    for (n, row) in CYCLE_RANGE.zip(&cycle_rows) {
        match golden_cycles.iter().find(|g| g.n == n) {
            Some(g) if g.diameter == row.diameter && close_rel(row.tau_prime_mix, g.tau_prime_mix, 2e-3) => {}
            _ => mismatches.push(n),
        }
    }
    c.check(
        "cycle_diameter_table",
        mismatches.is_empty(),
        format!("cycle(5..=41) against golden table, mismatches at {mismatches:?}"),
    );
    c.table("cycle_diameter", &DIAMETER_HEADER, cycle_rows.iter().map(diameter_cells).collect());
    Ok(())
}

const DIAMETER_HEADER: [&str; 6] = ["graph", "n_states", "diameter", "gap_scale", "alpha", "tau_prime_mix"];

fn diameter_cells(r: &DiameterRow) -> Vec<String> {
    vec![
        r.graph.clone(),
        r.n_states.to_string(),
        r.diameter.to_string(),
        num(r.gap_scale),
        num(r.alpha),
        num(r.tau_prime_mix),
    ]
}

fn close(a: f64, b: f64) -> bool {
    close_rel(a, b, GOLDEN_RELATIVE)
}

fn close_rel(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1e-300)
}

fn periodic_certificate(c: &mut Collector, spec: &GraphSpec, horizon: f64, tol: &Tolerances) -> Result<()> {
    let walk = Walk::new(spec, tol)?;
    let periodicity = periodicity_check(&walk.spectrum, horizon)?;
    let kernel = walk.kernel()?;
    let tv = matrix_tv_distance(&kernel.finite(horizon), &kernel.infinite())?;
    c.check(
        "periodicity",
        periodicity.residual <= 1e-9 && tv <= 1e-9,
        format!("{spec} at T = {horizon}: residual {:e}, TV(P̄_T, Π) = {tv:e}", periodicity.residual),
    );
    Ok(())
}

fn hypercube_suite(c: &mut Collector, tol: &Tolerances) -> Result<()> {
    let mut rows = Vec::new();
    for n in [3, 4, 5] {
        let spec = GraphSpec::Hypercube { n };
        periodic_certificate(c, &spec, 2.0 * PI * n as f64, tol)?;
        let floor = pi_floor_report(&pi_matrix(&spec, tol)?);
        c.check("pi_floor", floor.passes, format!("{spec}: min Π = {}", floor.min_entry));
        rows.push(diameter_bound_report(&spec, tol)?);
    }
    c.table("hypercube_diameter", &DIAMETER_HEADER, rows.iter().map(diameter_cells).collect());
    Ok(())
}

fn complete_suite(c: &mut Collector, tol: &Tolerances) -> Result<()> {
    let report = complete_graph_negative_result(16, &COMPLETE_TIMES, tol)?;
    c.check(
        "complete_closed_form",
        report.passes,
        format!("complete(16): α = {} vs 1 - 2/N = {}", report.alpha, report.expected_alpha),
    );
    c.table(
        "complete_closed_form",
        &["t", "deviation", "max_off_diagonal", "bound", "phase_gap"],
        report
            .rows
            .iter()
            .map(|r| vec![num(r.t), num(r.deviation), num(r.max_off_diagonal), num(r.bound), num(r.phase_gap)])
            .collect(),
    );
    let spec = GraphSpec::Complete { n: 8, with_self_loops: true };
    periodic_certificate(c, &spec, 2.0 * PI, tol)?;
    let floor = pi_floor_report(&pi_matrix(&spec, tol)?);
    c.check(
        "pi_floor",
        floor.passes && (floor.min_entry - 2.0 / 64.0).abs() <= 1e-12,
        format!("{spec}: min Π = {} (2/N² = {})", floor.min_entry, 2.0 / 64.0),
    );
    let rows: Vec<DiameterRow> = [4, 8, 16]
        .iter()
        .map(|&n| diameter_bound_report(&GraphSpec::Complete { n, with_self_loops: true }, tol))
        .collect::<Result<_>>()?;
    c.table("complete_diameter", &DIAMETER_HEADER, rows.iter().map(diameter_cells).collect());
    Ok(())
}

/// Run one suite. Golden files are read from `golden`.
pub fn run_suite(suite: Suite, golden: &Path, tol: &Tolerances) -> Result<LabReport> {
    let mut c = Collector { checks: Vec::new(), tables: Vec::new() };
    if matches!(suite, Suite::Torus | Suite::All) {
        torus_suite(&mut c, golden, tol)?;
    }
    if matches!(suite, Suite::Hypercube | Suite::All) {
        hypercube_suite(&mut c, tol)?;
    }
    if matches!(suite, Suite::Complete | Suite::All) {
        complete_suite(&mut c, tol)?;
    }
    let passed = c.checks.iter().all(|ch| ch.passed);
    Ok(LabReport { suite, passed, checks: c.checks, tables: c.tables })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn pi_floor_examples() {
        for spec in [
            GraphSpec::Cycle { n: 9 },
            GraphSpec::Torus { p: 5, d: 2 },
            GraphSpec::Hypercube { n: 4 },
            GraphSpec::Complete { n: 8, with_self_loops: true },
        ] {
            assert!(pi_floor_report(&pi_matrix(&spec, &tol()).unwrap()).passes, "{spec}");
        }
        let two = pi_floor_report(&pi_matrix(&GraphSpec::Complete { n: 2, with_self_loops: false }, &tol()).unwrap());
        assert!(two.min_entry >= 0.25);
        let k8 = pi_floor_report(&pi_matrix(&GraphSpec::Complete { n: 8, with_self_loops: true }, &tol()).unwrap());
        assert!((k8.min_entry - 2.0 / 64.0).abs() < 1e-12);
    }

    #[test]
    fn symbolic_pi_matches_numerical() {
        for (p, d) in [(5, 1), (7, 1), (5, 2), (7, 2)] {
            let numerical = pi_matrix(&GraphSpec::Torus { p, d }, &tol()).unwrap();
            let symbolic = symbolic_torus_pi(p, d).unwrap();
            assert!((numerical - symbolic).amax() < 1e-12, "p={p} d={d}");
        }
        assert!(symbolic_torus_pi(6, 1).is_err());
    }

    #[test]
    fn multiplicity_examples() {
        let c = multiplicity_class_check(7, 1, &tol()).unwrap();
        assert!(c.matches);
        assert_eq!(c.orbit_sizes, vec![1, 2, 2, 2]);
        let c = multiplicity_class_check(7, 2, &tol()).unwrap();
        assert!(c.matches);
        assert!(c.orbit_sizes.iter().all(|s| [1, 4, 8].contains(s)));
        let c = multiplicity_class_check(5, 1, &tol()).unwrap();
        assert!(c.matches);
        assert_eq!(c.n_classes, 3);
        assert!(multiplicity_class_check(9, 1, &tol()).is_err());
    }

    #[test]
    fn cancellation_trivial_cases() {
        assert_eq!(cancellation_count(101, &[0, 0]).unwrap(), 101);
        for y in [[1u64, 1], [50, 77], [100, 3]] {
            assert!(cancellation_count(101, &y).unwrap() >= 1);
        }
        assert!(cancellation_count(1, &[0]).is_err());
    }

    #[test]
    fn cancellation_matches_brute_force() {
        let n = 97u64;
        for y in [[3u64, 11], [48, 49], [96, 1]] {
            let radius = n as f64 / 16.0;
            let brute = (0..n)
                .filter(|x| {
                    y.iter().all(|yi| {
                        let r = (x * yi % n) as f64;
                        r.min(n as f64 - r) <= radius
                    })
                })
                .count() as u64;
            assert_eq!(cancellation_count(n, &y).unwrap(), brute);
        }
    }

    #[test]
    fn centered_residues() {
        assert_eq!(centered_residue(5, 10), 5);
        assert_eq!(centered_residue(6, 10), -4);
        assert_eq!(centered_residue(-1, 7), -1);
        assert_eq!(centered_residue(4, 7), -3);
    }

    #[test]
    fn hypercube_and_complete_are_periodic() {
        for n in [3usize, 4] {
            let walk = Walk::new(&GraphSpec::Hypercube { n }, &tol()).unwrap();
            let check = periodicity_check(&walk.spectrum, 2.0 * PI * n as f64).unwrap();
            assert!(check.residual <= 1e-9);
        }
        let walk = Walk::new(&GraphSpec::Complete { n: 6, with_self_loops: true }, &tol()).unwrap();
        assert!(periodicity_check(&walk.spectrum, 2.0 * PI).unwrap().residual <= 1e-9);
        let walk = Walk::new(&GraphSpec::Torus { p: 5, d: 1 }, &tol()).unwrap();
        assert!(periodicity_check(&walk.spectrum, 2.0 * PI).unwrap().residual > 0.1);
        assert!(periodicity_check(&walk.spectrum, 0.0).is_err());
    }

    #[test]
    fn complete_graph_regime() {
        let r = complete_graph_negative_result(16, &COMPLETE_TIMES, &tol()).unwrap();
        assert!(r.passes);
        assert!(r.amplification_fails);
        assert!(r.rows.iter().all(|row| (0.0..=2.0).contains(&row.phase_gap)));
        let r = complete_graph_negative_result(2, &[1.0], &tol()).unwrap();
        assert!(r.alpha.abs() < 1e-12);
    }

    #[test]
    fn diameter_rows() {
        let r = diameter_bound_report(&GraphSpec::Hypercube { n: 3 }, &tol()).unwrap();
        assert_eq!(r.diameter, 3);
        let r = diameter_bound_report(&GraphSpec::Complete { n: 5, with_self_loops: true }, &tol()).unwrap();
        assert_eq!(r.diameter, 1);
        let r = diameter_bound_report(&GraphSpec::Cycle { n: 9 }, &tol()).unwrap();
        assert_eq!(r.diameter, 4);
    }

    #[test]
    fn suite_names() {
        assert_eq!("all".parse::<Suite>().unwrap(), Suite::All);
        assert!("tori".parse::<Suite>().is_err());
    }

    #[test]
    fn golden_parsing() {
        let rows: Vec<GoldenFloor> = parse_golden("d,floor\n1,0.5\n2,0.25\n").unwrap();
        assert_eq!(rows[1], GoldenFloor { d: 2, floor: 0.25 });
        assert!(parse_golden::<GoldenFloor>("d,floor\nx,1\n").is_err());
    }
}
