use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use qwalk_core::graph::{build_transition, lazy, GraphSpec};
use qwalk_core::lab::{self, LabTable, Suite};
use qwalk_core::markov::{eps_key, max_pairwise_column_distance, mixing_report, tv_distance, Distribution};
use qwalk_core::spectral::{classes_for, eigendecompose, CesaroKernel};
use qwalk_core::{io as qio, sampler, trotter, Error, MixingReport, Result, StochasticSnapshot, Tolerances};

use crate::{Command, Mode, SuiteArg};

/// Returns whether every assertion the command makes passed.
pub fn run(command: Command, tol: &Tolerances) -> Result<bool> {
    match command {
        Command::Generate { family, params, lazy, out } => generate(&family, &params, lazy, out),
        Command::Analyze { matrix, eps, out, profile, t_max } => analyze(&matrix, &eps, out, profile, t_max, tol),
        Command::Cesaro { matrix, horizon, out } => cesaro(&matrix, horizon, out, tol),
        Command::Pi { matrix, out } => pi(&matrix, out, tol),
        Command::Qmix { matrix, eps, out } => qmix(&matrix, &eps, out, tol),
        Command::Sample { matrix, eps, trials, seed, mode, x0, trace, out } => {
            sample(&matrix, SampleArgs { eps, trials, seed, mode, x0 }, trace, out, tol)
        }
        Command::Conjecture { suite, out, csv_dir } => conjecture(suite, &out, csv_dir, tol),
        Command::Trotter { matrix, t, j, out } => run_trotter(&matrix, t, &j, out, tol),
        Command::Report { inputs, out, csv } => report(&inputs, out, csv),
    }
}

fn emit<T: Serialize>(out: Option<PathBuf>, value: &T) -> Result<()> {
    match out {
        Some(path) => qio::write_json(path, value),
        None => {
            println!("{}", serde_json::to_string_pretty(value)?);
            Ok(())
        }
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Parse(e.to_string())
}

fn generate(family: &str, params: &str, make_lazy: bool, out: Option<PathBuf>) -> Result<bool> {
    let spec = GraphSpec::from_params(family, params)?;
    let mut p = build_transition(&spec)?;
    if make_lazy {
        p = lazy(&p);
    }
    match out {
        Some(path) => qio::save_matrix(path, &p)?,
        None => println!("{}", qio::matrix_to_json(&p)?),
    }
    Ok(true)
}

fn analyze(
    matrix: &Path,
    eps: &[f64],
    out: Option<PathBuf>,
    profile: Option<PathBuf>,
    t_max: Option<u64>,
    tol: &Tolerances,
) -> Result<bool> {
    let p = qio::load_matrix(matrix, tol)?;
    let report = mixing_report(&p, eps, tol)?;
    if let Some(path) = profile {
        let longest = report.tau_eps.values().copied().chain(report.tau_mix).max().unwrap_or(0);
        let t_max = t_max.unwrap_or((2 * longest).max(16));
        let mut w = BufWriter::new(File::create(path)?);
        writeln!(w, "t,d,dbar")?;
        for (t, d, dbar) in qwalk_core::markov::distance_profile(&p, t_max) {
            writeln!(w, "{t},{d:e},{dbar:e}")?;
        }
        w.flush()?;
    }
    emit(out, &report)?;
    Ok(true)
}

struct Walk {
    spec: GraphSpec,
    spectrum: qwalk_core::Spectrum,
    classes: qwalk_core::EigenvalueClasses,
}

fn load_walk(matrix: &Path, tol: &Tolerances) -> Result<Walk> {
    let p = qio::load_matrix(matrix, tol)?;
    let spectrum = eigendecompose(&p, tol)?;
    let classes = classes_for(&p, &spectrum, tol)?;
    Ok(Walk { spec: p.spec().clone(), spectrum, classes })
}

fn cesaro(matrix: &Path, horizon: f64, out: Option<PathBuf>, tol: &Tolerances) -> Result<bool> {
    let walk = load_walk(matrix, tol)?;
    let snap = qwalk_core::spectral::cesaro_finite(&walk.spectrum, &walk.classes, horizon)?;
    write_snapshot(out, &snap, &walk.spec)?;
    Ok(true)
}

fn write_snapshot(out: Option<PathBuf>, snap: &StochasticSnapshot, spec: &GraphSpec) -> Result<()> {
    match out {
        Some(path) => qio::save_snapshot(path, snap, Some(spec)),
        None => {
            println!("{}", qio::snapshot_to_json(snap, Some(spec))?);
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct PiSummary {
    graph: String,
    n_states: usize,
    min_entry: f64,
    scaled_min_entry: f64,
    floor: f64,
    passes: bool,
    alpha: f64,
}

fn pi(matrix: &Path, out: Option<PathBuf>, tol: &Tolerances) -> Result<bool> {
    let walk = load_walk(matrix, tol)?;
    let snap = qwalk_core::spectral::cesaro_infinite(&walk.spectrum, &walk.classes)?;
    let floor = lab::pi_floor_report(snap.entries());
    let n = floor.n_states as f64;
    let summary = PiSummary {
        graph: walk.spec.label(),
        n_states: floor.n_states,
        min_entry: floor.min_entry,
        scaled_min_entry: floor.scaled,
        floor: 1.0 / (n * n),
        passes: floor.passes,
        alpha: max_pairwise_column_distance(snap.entries()),
    };
    println!("{}", serde_json::to_string_pretty(&summary)?);
    if let Some(path) = out {
        qio::save_snapshot(path, &snap, Some(&walk.spec))?;
    }
    Ok(floor.passes)
}

#[derive(Serialize)]
struct QmixSummary {
    graph: String,
    alpha: f64,
    eps0: f64,
    tau_prime_mix: f64,
    amplification_fails: bool,
    tau_prime_eps: BTreeMap<String, f64>,
}

fn qmix(matrix: &Path, eps: &[f64], out: Option<PathBuf>, tol: &Tolerances) -> Result<bool> {
    let walk = load_walk(matrix, tol)?;
    let kernel = CesaroKernel::new(&walk.spectrum, &walk.classes)?;
    let threshold = qwalk_core::spectral::alpha_and_threshold(&walk.spectrum, &walk.classes)?;
    let tau_prime_eps = eps.iter().map(|&e| Ok((eps_key(e), kernel.mixing_time(e)?))).collect::<Result<_>>()?;
    emit(
        out,
        &QmixSummary {
            graph: walk.spec.label(),
            alpha: threshold.alpha,
            eps0: threshold.eps0,
            tau_prime_mix: threshold.tau_prime_mix,
            amplification_fails: threshold.amplification_fails,
            tau_prime_eps,
        },
    )?;
    Ok(true)
}

struct SampleArgs {
    eps: f64,
    trials: u64,
    seed: u64,
    mode: Mode,
    x0: usize,
}

/// Output of `sample`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleSummary {
    pub graph: String,
    pub mode: String,
    pub eps: f64,
    pub seed: u64,
    pub trials: u64,
    pub x0: usize,
    #[serde(rename = "T")]
    pub horizon: f64,
    #[serde(rename = "T_prime")]
    pub rounds: u64,
    pub alpha: f64,
    pub tv_to_uniform_exact: f64,
    pub tv_mc_vs_exact: Option<f64>,
}

fn sample(matrix: &Path, args: SampleArgs, trace: Option<PathBuf>, out: Option<PathBuf>, tol: &Tolerances) -> Result<bool> {
    let walk = load_walk(matrix, tol)?;
    let (s, classes) = (&walk.spectrum, &walk.classes);
    let threshold = qwalk_core::spectral::alpha_and_threshold(s, classes)?;
    let (horizon, rounds) = match args.mode {
        Mode::Single => (qwalk_core::spectral::quantum_mixing_time(s, classes, args.eps)?, 1),
        Mode::Double | Mode::Exact => {
            let params = sampler::params_from_threshold(&threshold, args.eps)?;
            (params.horizon, params.rounds)
        }
    };
    let exact = sampler::exact_output_law(s, classes, horizon, rounds, args.x0)?;
    let tv_to_uniform_exact = tv_distance(&exact, &Distribution::uniform(s.n_states()))?;

    let tv_mc_vs_exact = if args.mode == Mode::Exact {
        None
    } else if let Some(path) = trace {
        let traces = sampler::run_trials(s, horizon, rounds, args.x0, args.seed, args.trials)?;
        let mut w = BufWriter::new(File::create(path)?);
        sampler::write_trace_csv(&traces, &mut w)?;
        w.flush()?;
        let mut counts = vec![0u64; s.n_states()];
        traces.iter().for_each(|t| counts[t.final_state] += 1);
        Some(tv_distance(&Distribution::from_counts(&counts)?, &exact)?)
    } else {
        let counts = sampler::final_state_counts(s, horizon, rounds, args.x0, args.seed, args.trials)?;
        Some(tv_distance(&Distribution::from_counts(&counts)?, &exact)?)
    };

    let mode = match args.mode {
        Mode::Single => "single",
        Mode::Double => "double",
        Mode::Exact => "exact",
    };
    let summary = SampleSummary {
        graph: walk.spec.label(),
        mode: mode.into(),
        eps: args.eps,
        seed: args.seed,
        trials: if args.mode == Mode::Exact { 0 } else { args.trials },
        x0: args.x0,
        horizon,
        rounds,
        alpha: threshold.alpha,
        tv_to_uniform_exact,
        tv_mc_vs_exact,
    };
    emit(out, &summary)?;
    // The single loop converges to Π rather than uniform, so only the
    // amplified modes assert ε-closeness.
    Ok(args.mode == Mode::Single || tv_to_uniform_exact <= args.eps)
}

fn write_table(dir: &Path, table: &LabTable) -> Result<()> {
    let mut w = csv::Writer::from_path(dir.join(format!("{}.csv", table.name))).map_err(csv_err)?;
    w.write_record(&table.header).map_err(csv_err)?;
    for row in &table.rows {
        w.write_record(row).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

fn conjecture(suite: SuiteArg, out: &Path, csv_dir: Option<PathBuf>, tol: &Tolerances) -> Result<bool> {
    let suite = match suite {
        SuiteArg::Torus => Suite::Torus,
        SuiteArg::Hypercube => Suite::Hypercube,
        SuiteArg::Complete => Suite::Complete,
        SuiteArg::All => Suite::All,
    };
    let report = lab::run_suite(suite, &lab::golden_dir(), tol)?;
    let parent = out.parent().map(Path::to_path_buf).unwrap_or_default();
    let dir = csv_dir.unwrap_or_else(|| parent.clone());
    for d in [&parent, &dir] {
        if !d.as_os_str().is_empty() {
            fs::create_dir_all(d)?;
        }
    }
    qio::write_json(out, &report)?;
    for table in &report.tables {
        write_table(&dir, table)?;
    }
    let mut stdout = io::stdout().lock();
    for check in &report.checks {
        let status = if check.passed { "pass" } else { "FAIL" };
        writeln!(stdout, "{status}  {}  {}", check.name, check.detail)?;
    }
    Ok(report.passed)
}

#[derive(Serialize)]
struct TrotterSummary {
    graph: String,
    parts: usize,
    reassembly_error: f64,
    max_commutator: f64,
    rows: Vec<trotter::TrotterRow>,
}

fn run_trotter(matrix: &Path, t: f64, j: &[u64], out: Option<PathBuf>, tol: &Tolerances) -> Result<bool> {
    let p = qio::load_matrix(matrix, tol)?;
    let parts = trotter::edge_color_decompose(&p)?;
    let s = eigendecompose(&p, tol)?;
    let rows = trotter::trotter_sweep(&parts, &s, t, j)?;
    match out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            trotter::write_trotter_csv(&rows, &mut w)?;
            w.flush()?;
        }
        None => trotter::write_trotter_csv(&rows, io::stdout().lock())?,
    }
    let summary = TrotterSummary {
        graph: p.label(),
        parts: parts.len(),
        reassembly_error: parts.reassembly_error(p.entries()),
        max_commutator: trotter::commutator_report(&parts).max,
        rows,
    };
    eprintln!("{}", serde_json::to_string(&summary)?);
    Ok(summary.reassembly_error <= 1e-12)
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Artifact {
    Mixing(Box<MixingReport>),
    Sample(SampleSummary),
}

/// One line of the summary table.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ReportRow {
    pub graph: String,
    pub delta: Option<f64>,
    pub tau_mix: Option<u64>,
    pub tau_prime_mix: Option<f64>,
    pub alpha: Option<f64>,
    pub t_prime: Option<u64>,
    pub eps: Option<f64>,
    pub tau_eps: Option<u64>,
    pub quantum_runtime: Option<f64>,
}

fn build_rows(artifacts: Vec<Artifact>) -> Vec<ReportRow> {
    let mut rows: BTreeMap<String, ReportRow> = BTreeMap::new();
    let mut pending = Vec::new();
    for artifact in artifacts {
        match artifact {
            Artifact::Mixing(m) => {
                let row = rows.entry(m.graph.clone()).or_default();
                row.graph = m.graph.clone();
                row.delta = Some(m.spectral_gap);
                row.tau_mix = m.tau_mix;
                row.tau_prime_mix = Some(m.tau_prime_mix);
                row.alpha = Some(m.alpha);
                pending.push(*m);
            }
            Artifact::Sample(s) => {
                let row = rows.entry(s.graph.clone()).or_default();
                row.graph = s.graph.clone();
                row.alpha.get_or_insert(s.alpha);
                row.t_prime = Some(s.rounds);
                row.eps = Some(s.eps);
                row.quantum_runtime = Some(s.horizon * s.rounds as f64);
            }
        }
    }
    for m in pending {
        if let Some(row) = rows.get_mut(&m.graph) {
            if let Some(eps) = row.eps {
                row.tau_eps = m.tau_eps.get(&eps_key(eps)).copied();
            }
        }
    }
    rows.into_values().collect()
}

fn cell<T: ToString>(v: Option<T>) -> String {
    v.map_or_else(|| "-".into(), |v| v.to_string())
}

fn fmt(v: Option<f64>) -> String {
    cell(v.map(|x| format!("{x:.4}")))
}

fn report(inputs: &[PathBuf], out: Option<PathBuf>, csv_path: Option<PathBuf>) -> Result<bool> {
    let artifacts = inputs
        .iter()
        .map(|path| {
            let text = fs::read_to_string(path)?;
            let artifact: Artifact = serde_json::from_str(&text)
                .map_err(|e| Error::Parse(format!("{}: not an analyze or sample output ({e})", path.display())))?;
            Ok(artifact)
        })
        .collect::<Result<Vec<_>>>()?;
    let rows = build_rows(artifacts);

    let mut md = String::from("| graph | δ | τ_mix | τ′_mix | α | T′ | ε | τ(ε) | T·T′ |\n");
    md.push_str("|---|---|---|---|---|---|---|---|---|\n");
    for r in &rows {
        md.push_str(&format!(
            "| {} | {} | {} | {} | {} | {} | {} | {} | {} |\n",
            r.graph,
            fmt(r.delta),
            cell(r.tau_mix),
            fmt(r.tau_prime_mix),
            fmt(r.alpha),
            cell(r.t_prime),
            cell(r.eps),
            cell(r.tau_eps),
            fmt(r.quantum_runtime),
        ));
    }
    match out {
        Some(path) => fs::write(path, &md)?,
        None => print!("{md}"),
    }
    if let Some(path) = csv_path {
        let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
        for r in &rows {
            w.serialize(r).map_err(csv_err)?;
        }
        w.flush()?;
    }
    Ok(true)
}
