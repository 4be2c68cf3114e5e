//! Graph families and their standard (symmetric, doubly stochastic) transition matrices.
//!
//! Vertex order is fixed so golden files are reproducible:
//! the torus `Z_p^d` uses little-endian mixed radix (`index = Σ x_i p^i`) and
//! the hypercube uses bit `i` for coordinate `i`.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::Matrix;

/// Largest state space accepted. Everything downstream is dense.
pub const MAX_STATES: usize = 4096;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum GraphSpec {
    Cycle { n: usize },
    Torus { p: usize, d: usize },
    Hypercube { n: usize },
    Complete { n: usize, with_self_loops: bool },
    Custom { adjacency: Vec<Vec<f64>> },
}

impl GraphSpec {
    /// Number of vertices, checked against [`MAX_STATES`].
    pub fn n_states(&self) -> Result<usize> {
        let n = match *self {
            GraphSpec::Cycle { n } => Some(n),
            GraphSpec::Torus { p, d } => u32::try_from(d).ok().and_then(|d| p.checked_pow(d)),
            GraphSpec::Hypercube { n } => u32::try_from(n).ok().and_then(|n| 1usize.checked_shl(n)),
            GraphSpec::Complete { n, .. } => Some(n),
            GraphSpec::Custom { ref adjacency } => Some(adjacency.len()),
        };
        match n {
            Some(n) if n <= MAX_STATES => Ok(n),
            _ => Err(Error::InvalidSpec(format!("{self} exceeds {MAX_STATES} states"))),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            GraphSpec::Cycle { n } if n < 3 => {
                return Err(Error::InvalidSpec(format!("cycle requires n >= 3, got {n}")))
            }
            GraphSpec::Torus { p, d } if p < 2 || d < 1 => {
                return Err(Error::InvalidSpec(format!(
                    "torus requires p >= 2 and d >= 1, got p={p}, d={d}"
                )))
            }
            GraphSpec::Hypercube { n } if n < 1 => {
                return Err(Error::InvalidSpec("hypercube requires n >= 1".into()))
            }
            GraphSpec::Complete { n, .. } if n < 2 => {
                return Err(Error::InvalidSpec(format!("complete requires N >= 2, got {n}")))
            }
            GraphSpec::Custom { ref adjacency } => validate_adjacency(adjacency)?,
            _ => {}
        }
        self.n_states().map(|_| ())
    }

    /// Parse the CLI form: a family name plus `k=v,...` parameters.
    ///
    /// `custom` is not accepted here since its adjacency comes from a file.
    pub fn from_params(family: &str, params: &str) -> Result<GraphSpec> {
        let mut kv: Vec<(&str, &str)> = Vec::new();
        for item in params.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected k=v, got {item:?}")))?;
            let (k, v) = (k.trim(), v.trim());
            if kv.iter().any(|(seen, _)| *seen == k) {
                return Err(Error::Parse(format!("duplicate parameter {k:?}")));
            }
            kv.push((k, v));
        }
        let take_usize = |key: &str| -> Result<usize> {
            let (_, v) = kv
                .iter()
                .find(|(k, _)| *k == key)
                .ok_or_else(|| Error::Parse(format!("{family} requires parameter {key}")))?;
            v.parse::<usize>()
                .map_err(|_| Error::Parse(format!("parameter {key}={v:?} is not a positive integer")))
        };
        let allowed: &[&str] = match family {
            "cycle" | "hypercube" => &["n"],
            "torus" => &["p", "d"],
            "complete" => &["n", "self_loops"],
            "custom" => {
                return Err(Error::Parse("custom graphs are loaded from an adjacency file".into()))
            }
            other => return Err(Error::Parse(format!("unknown family {other:?}"))),
        };
        if let Some((k, _)) = kv.iter().find(|(k, _)| !allowed.contains(k)) {
            return Err(Error::Parse(format!("unknown parameter {k:?} for {family}")));
        }
        let spec = match family {
            "cycle" => GraphSpec::Cycle { n: take_usize("n")? },
            "hypercube" => GraphSpec::Hypercube { n: take_usize("n")? },
            "torus" => GraphSpec::Torus { p: take_usize("p")?, d: take_usize("d")? },
            _ => {
                let with_self_loops = match kv.iter().find(|(k, _)| *k == "self_loops") {
                    None => true,
                    Some((_, v)) => match *v {
                        "true" | "1" | "yes" => true,
                        "false" | "0" | "no" => false,
                        other => {
                            return Err(Error::Parse(format!("self_loops={other:?} is not a flag")))
                        }
                    },
                };
                GraphSpec::Complete { n: take_usize("n")?, with_self_loops }
            }
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Graph diameter in closed form for the named families, BFS for custom graphs.
    pub fn diameter(&self) -> Result<usize> {
        self.validate()?;
        Ok(match *self {
            GraphSpec::Cycle { n } => n / 2,
            GraphSpec::Torus { p, d } => d * (p / 2),
            GraphSpec::Hypercube { n } => n,
            GraphSpec::Complete { .. } => 1,
            GraphSpec::Custom { ref adjacency } => {
                let n = adjacency.len();
                let adj = Matrix::from_fn(n, n, |i, j| adjacency[i][j]);
                bfs_diameter(&adj)
            }
        })
    }

    /// Short label used in reports, e.g. `torus(5,2)`.
    pub fn label(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for GraphSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphSpec::Cycle { n } => write!(f, "cycle({n})"),
            GraphSpec::Torus { p, d } => write!(f, "torus({p},{d})"),
            GraphSpec::Hypercube { n } => write!(f, "hypercube({n})"),
            GraphSpec::Complete { n, with_self_loops: true } => write!(f, "complete({n},loops)"),
            GraphSpec::Complete { n, with_self_loops: false } => write!(f, "complete({n})"),
            GraphSpec::Custom { adjacency } => write!(f, "custom({})", adjacency.len()),
        }
    }
}

fn validate_adjacency(adjacency: &[Vec<f64>]) -> Result<()> {
    let n = adjacency.len();
    if n == 0 {
        return Err(Error::InvalidSpec("custom adjacency is empty".into()));
    }
    if n > MAX_STATES {
        return Err(Error::InvalidSpec(format!("custom adjacency exceeds {MAX_STATES} states")));
    }
    for (i, row) in adjacency.iter().enumerate() {
        if row.len() != n {
            return Err(Error::InvalidSpec(format!(
                "custom adjacency must be square: row {i} has {} entries, expected {n}",
                row.len()
            )));
        }
        if let Some(j) = row.iter().position(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidSpec(format!(
                "custom adjacency entry ({i},{j}) must be finite and nonnegative"
            )));
        }
    }
    for (i, row) in adjacency.iter().enumerate() {
        for (j, w) in row.iter().enumerate().take(i) {
            if *w != adjacency[j][i] {
                return Err(Error::InvalidSpec(format!("custom adjacency not symmetric at ({i},{j})")));
            }
        }
    }
    let adj = Matrix::from_fn(n, n, |i, j| adjacency[i][j]);
    if n > 1 && adj.iter().all(|w| *w == 0.0) {
        return Err(Error::InvalidSpec("custom adjacency has no edges".into()));
    }
    if !support_connected(&adj) {
        return Err(Error::InvalidSpec("custom adjacency support is disconnected".into()));
    }
    Ok(())
}

/// Symmetric doubly stochastic transition matrix with its provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionMatrix {
    entries: Matrix,
    spec: GraphSpec,
    degree: Option<usize>,
    lazy: bool,
}

/// Build the standard transition matrix for `spec`.
pub fn build_transition(spec: &GraphSpec) -> Result<TransitionMatrix> {
    spec.validate()?;
    let n = spec.n_states()?;
    let (entries, degree) = match *spec {
        GraphSpec::Cycle { n } => (torus_matrix(n, 1), Some(2)),
        GraphSpec::Torus { p, d } => (torus_matrix(p, d), Some(2 * d)),
        GraphSpec::Hypercube { n: dim } => {
            let w = 1.0 / dim as f64;
            let mut m = Matrix::zeros(n, n);
            for x in 0..n {
                for bit in 0..dim {
                    m[(x ^ (1 << bit), x)] += w;
                }
            }
            (m, Some(dim))
        }
        GraphSpec::Complete { n, with_self_loops: true } => {
            (Matrix::from_element(n, n, 1.0 / n as f64), Some(n))
        }
        GraphSpec::Complete { n, with_self_loops: false } => {
            let w = 1.0 / (n - 1) as f64;
            (Matrix::from_fn(n, n, |i, j| if i == j { 0.0 } else { w }), Some(n - 1))
        }
        GraphSpec::Custom { ref adjacency } => custom_matrix(adjacency),
    };
    TransitionMatrix::new(entries, spec.clone(), degree, false, &Tolerances::default())
}

/// Standard walk on `Z_p^d`: `(1/2d) Σ_i (S_i + S_i⁻¹)` with shift `S_i` along coordinate `i`.
/// For `p = 2` both shifts coincide and the weight doubles.
fn torus_matrix(p: usize, d: usize) -> Matrix {
    let n = p.pow(d as u32);
    let w = 1.0 / (2 * d) as f64;
    let mut m = Matrix::zeros(n, n);
    for x in 0..n {
        let mut stride = 1;
        for _ in 0..d {
            let coord = (x / stride) % p;
            let base = x - coord * stride;
            let up = base + ((coord + 1) % p) * stride;
            let down = base + ((coord + p - 1) % p) * stride;
            m[(up, x)] += w;
            m[(down, x)] += w;
            stride *= p;
        }
    }
    m
}

/// Max-degree walk `A/Δ + diag(1 - deg/Δ)`. Equals `A/deg` on regular graphs.
fn custom_matrix(adjacency: &[Vec<f64>]) -> (Matrix, Option<usize>) {
    let n = adjacency.len();
    let degrees: Vec<f64> = adjacency.iter().map(|row| row.iter().sum()).collect();
    let max_degree = degrees.iter().cloned().fold(0.0_f64, f64::max);
    if n == 1 || max_degree == 0.0 {
        return (Matrix::identity(n, n), None);
    }
    let mut m = Matrix::from_fn(n, n, |i, j| adjacency[i][j] / max_degree);
    for (i, deg) in degrees.iter().enumerate() {
        m[(i, i)] += 1.0 - deg / max_degree;
    }
    let regular = degrees.iter().all(|d| *d == max_degree);
    let integral = max_degree.fract() == 0.0;
    (m, (regular && integral).then_some(max_degree as usize))
}

/// Lazy version `(I + P)/2`; all its eigenvalues are nonnegative.
pub fn lazy(p: &TransitionMatrix) -> TransitionMatrix {
    let n = p.n_states();
    let entries = (Matrix::identity(n, n) + &p.entries) * 0.5;
    TransitionMatrix { entries, spec: p.spec.clone(), degree: p.degree, lazy: true }
}

impl TransitionMatrix {
    /// Wrap and validate a matrix. Rejects asymmetric, non-stochastic or reducible input.
    pub fn new(
        entries: Matrix,
        spec: GraphSpec,
        degree: Option<usize>,
        lazy: bool,
        tol: &Tolerances,
    ) -> Result<Self> {
        check_transition_entries(&entries, tol)?;
        Ok(TransitionMatrix { entries, spec, degree, lazy })
    }

    pub fn n_states(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &Matrix {
        &self.entries
    }

    pub fn spec(&self) -> &GraphSpec {
        &self.spec
    }

    pub fn degree(&self) -> Option<usize> {
        self.degree
    }

    pub fn is_lazy(&self) -> bool {
        self.lazy
    }

    pub fn label(&self) -> String {
        if self.lazy {
            format!("lazy({})", self.spec)
        } else {
            self.spec.to_string()
        }
    }

    /// True when the support graph is bipartite, i.e. the chain has period 2.
    /// Symmetric irreducible chains have period at most 2.
    pub fn is_periodic(&self) -> bool {
        let n = self.n_states();
        if n == 1 {
            return false;
        }
        let mut side = vec![u8::MAX; n];
        side[0] = 0;
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for y in 0..n {
                if self.entries[(y, x)] <= 0.0 {
                    continue;
                }
                if side[y] == u8::MAX {
                    side[y] = 1 - side[x];
                    queue.push_back(y);
                } else if side[y] == side[x] {
                    return false;
                }
            }
        }
        true
    }

    /// BFS diameter of the support graph.
    pub fn support_diameter(&self) -> usize {
        bfs_diameter(&self.entries)
    }
}

pub(crate) fn check_transition_entries(m: &Matrix, tol: &Tolerances) -> Result<()> {
    let n = m.nrows();
    if n == 0 || m.ncols() != n {
        return Err(Error::invariant("square", format!("got {}x{}", m.nrows(), m.ncols())));
    }
    if n > MAX_STATES {
        return Err(Error::invariant("size", format!("{n} exceeds {MAX_STATES} states")));
    }
    for x in 0..n {
        let mut sum = 0.0;
        for y in 0..n {
            let v = m[(y, x)];
            if !v.is_finite() || !(0.0..=1.0).contains(&v) {
                return Err(Error::invariant("entries in [0,1]", format!("entry ({y},{x}) = {v}")));
            }
            if (v - m[(x, y)]).abs() > tol.stochastic {
                return Err(Error::invariant(
                    "symmetric",
                    format!("|P({y},{x}) - P({x},{y})| = {:e}", (v - m[(x, y)]).abs()),
                ));
            }
            sum += v;
        }
        if (sum - 1.0).abs() > tol.stochastic {
            return Err(Error::invariant("column sums to 1", format!("column {x} sums to {sum}")));
        }
    }
    if !support_connected(m) {
        return Err(Error::invariant("irreducible", "support graph is disconnected"));
    }
    Ok(())
}

fn support_connected(m: &Matrix) -> bool {
    let n = m.nrows();
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut queue = VecDeque::from([0usize]);
    let mut count = 1;
    while let Some(x) = queue.pop_front() {
        for y in 0..n {
            if !seen[y] && (m[(y, x)] > 0.0 || m[(x, y)] > 0.0) {
                seen[y] = true;
                count += 1;
                queue.push_back(y);
            }
        }
    }
    count == n
}

fn bfs_diameter(m: &Matrix) -> usize {
    let n = m.nrows();
    let neighbors: Vec<Vec<usize>> = (0..n)
        .map(|x| (0..n).filter(|&y| y != x && m[(y, x)] > 0.0).collect())
        .collect();
    let mut diameter = 0;
    let mut dist = vec![usize::MAX; n];
    for source in 0..n {
        dist.fill(usize::MAX);
        dist[source] = 0;
        let mut queue = VecDeque::from([source]);
        while let Some(x) = queue.pop_front() {
            for &y in &neighbors[x] {
                if dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    queue.push_back(y);
                }
            }
        }
        diameter = diameter.max(dist.iter().copied().filter(|d| *d != usize::MAX).max().unwrap_or(0));
    }
    diameter
}

#[cfg(test)]
mod tests {
    use super::*;

    fn build(spec: GraphSpec) -> TransitionMatrix {
        build_transition(&spec).unwrap()
    }

    #[test]
    fn cycle4_neighbors_half() {
        let p = build(GraphSpec::Cycle { n: 4 });
        for x in 0..4 {
            assert_eq!(p.entries()[(x, x)], 0.0);
            assert_eq!(p.entries()[((x + 1) % 4, x)], 0.5);
            assert_eq!(p.entries()[((x + 3) % 4, x)], 0.5);
            assert_eq!(p.entries()[((x + 2) % 4, x)], 0.0);
        }
    }

    #[test]
    fn complete_with_loops_is_uniform() {
        let p = build(GraphSpec::Complete { n: 8, with_self_loops: true });
        assert!(p.entries().iter().all(|v| *v == 0.125));
    }

    #[test]
    fn complete_without_loops() {
        let p = build(GraphSpec::Complete { n: 5, with_self_loops: false });
        assert_eq!(p.entries()[(0, 0)], 0.0);
        assert_eq!(p.entries()[(1, 0)], 0.25);
    }

    #[test]
    fn hypercube2_is_cycle4_up_to_relabeling() {
        let cube = build(GraphSpec::Hypercube { n: 2 });
        let cycle = build(GraphSpec::Cycle { n: 4 });
        // Exhaustive search over all 24 relabelings.
        let mut perm = [0usize, 1, 2, 3];
        let mut found = false;
        permutations(&mut perm, 0, &mut |p| {
            let same = (0..4).all(|i| {
                (0..4).all(|j| cube.entries()[(p[i], p[j])] == cycle.entries()[(i, j)])
            });
            found |= same;
        });
        assert!(found);
    }

    fn permutations(a: &mut [usize; 4], k: usize, f: &mut impl FnMut(&[usize; 4])) {
        if k == a.len() {
            f(a);
            return;
        }
        for i in k..a.len() {
            a.swap(k, i);
            permutations(a, k + 1, f);
            a.swap(k, i);
        }
    }

    #[test]
    fn torus_p_1_is_cycle() {
        for p in 3..12 {
            assert_eq!(
                build(GraphSpec::Torus { p, d: 1 }).entries(),
                build(GraphSpec::Cycle { n: p }).entries()
            );
        }
    }

    #[test]
    fn torus_2_n_is_hypercube() {
        for n in 1..6 {
            assert_eq!(
                build(GraphSpec::Torus { p: 2, d: n }).entries(),
                build(GraphSpec::Hypercube { n }).entries()
            );
        }
    }

    #[test]
    fn torus_index_is_little_endian() {
        let p = build(GraphSpec::Torus { p: 5, d: 2 });
        // (1,0) -> index 1, (0,1) -> index 5; both neighbors of the origin.
        assert_eq!(p.entries()[(1, 0)], 0.25);
        assert_eq!(p.entries()[(5, 0)], 0.25);
        assert_eq!(p.entries()[(4, 0)], 0.25);
        assert_eq!(p.entries()[(20, 0)], 0.25);
        assert_eq!(p.entries()[(6, 0)], 0.0);
    }

    #[test]
    fn lazy_formulas() {
        let l = lazy(&build(GraphSpec::Cycle { n: 4 }));
        assert_eq!(l.entries()[(0, 0)], 0.5);
        assert_eq!(l.entries()[(1, 0)], 0.25);
        assert!(l.is_lazy());
        let k2 = lazy(&build(GraphSpec::Complete { n: 2, with_self_loops: false }));
        assert!(k2.entries().iter().all(|v| *v == 0.5));
    }

    #[test]
    fn every_row_is_a_permutation_of_every_other() {
        let specs = [
            GraphSpec::Cycle { n: 7 },
            GraphSpec::Torus { p: 3, d: 3 },
            GraphSpec::Hypercube { n: 4 },
            GraphSpec::Complete { n: 6, with_self_loops: false },
        ];
        for spec in specs {
            let p = build(spec);
            let sorted = |r: usize| {
                let mut row: Vec<f64> = p.entries().row(r).iter().copied().collect();
                row.sort_by(f64::total_cmp);
                row
            };
            let first = sorted(0);
            for r in 1..p.n_states() {
                assert_eq!(sorted(r), first);
            }
        }
    }

    #[test]
    fn rejects_invalid_specs() {
        assert!(build_transition(&GraphSpec::Cycle { n: 2 }).is_err());
        assert!(build_transition(&GraphSpec::Torus { p: 1, d: 2 }).is_err());
        assert!(build_transition(&GraphSpec::Torus { p: 3, d: 0 }).is_err());
        assert!(build_transition(&GraphSpec::Hypercube { n: 0 }).is_err());
        assert!(build_transition(&GraphSpec::Complete { n: 1, with_self_loops: true }).is_err());
        assert!(build_transition(&GraphSpec::Hypercube { n: 13 }).is_err());
        assert!(build_transition(&GraphSpec::Torus { p: 1 << 20, d: 4 }).is_err());
    }

    #[test]
    fn custom_disconnected_rejected() {
        let adjacency = vec![
            vec![0.0, 1.0, 0.0, 0.0],
            vec![1.0, 0.0, 0.0, 0.0],
            vec![0.0, 0.0, 0.0, 1.0],
            vec![0.0, 0.0, 1.0, 0.0],
        ];
        let err = build_transition(&GraphSpec::Custom { adjacency }).unwrap_err();
        assert!(err.to_string().contains("disconnected"), "{err}");
    }

    #[test]
    fn custom_asymmetric_rejected() {
        let adjacency = vec![vec![0.0, 1.0], vec![2.0, 0.0]];
        assert!(build_transition(&GraphSpec::Custom { adjacency }).is_err());
        let ragged = vec![vec![0.0, 1.0], vec![1.0]];
        assert!(build_transition(&GraphSpec::Custom { adjacency: ragged }).is_err());
    }

    #[test]
    fn custom_path_gets_max_degree_walk() {
        // Path 0 - 1 - 2: degrees 1, 2, 1.
        let adjacency = vec![vec![0.0, 1.0, 0.0], vec![1.0, 0.0, 1.0], vec![0.0, 1.0, 0.0]];
        let p = build(GraphSpec::Custom { adjacency });
        assert_eq!(p.entries()[(0, 0)], 0.5);
        assert_eq!(p.entries()[(1, 0)], 0.5);
        assert_eq!(p.entries()[(1, 1)], 0.0);
        assert_eq!(p.degree(), None);
        assert!(!p.is_periodic());
    }

    #[test]
    fn custom_regular_matches_family() {
        let n = 6;
        let adjacency: Vec<Vec<f64>> = (0..n)
            .map(|i| (0..n).map(|j| if (i + 1) % n == j || (j + 1) % n == i { 1.0 } else { 0.0 }).collect())
            .collect();
        let p = build(GraphSpec::Custom { adjacency });
        assert_eq!(p.entries(), build(GraphSpec::Cycle { n }).entries());
        assert_eq!(p.degree(), Some(2));
    }

    #[test]
    fn periodicity_flags() {
        assert!(build(GraphSpec::Cycle { n: 4 }).is_periodic());
        assert!(!build(GraphSpec::Cycle { n: 5 }).is_periodic());
        assert!(build(GraphSpec::Hypercube { n: 3 }).is_periodic());
        assert!(!lazy(&build(GraphSpec::Cycle { n: 4 })).is_periodic());
    }

    #[test]
    fn closed_form_diameters_match_bfs() {
        let specs = [
            GraphSpec::Cycle { n: 9 },
            GraphSpec::Cycle { n: 10 },
            GraphSpec::Torus { p: 5, d: 2 },
            GraphSpec::Torus { p: 4, d: 3 },
            GraphSpec::Hypercube { n: 5 },
            GraphSpec::Complete { n: 7, with_self_loops: true },
        ];
        for spec in specs {
            let p = build(spec.clone());
            assert_eq!(spec.diameter().unwrap(), p.support_diameter(), "{spec}");
        }
    }

    #[test]
    fn params_parsing() {
        assert_eq!(
            GraphSpec::from_params("torus", "p=5,d=2").unwrap(),
            GraphSpec::Torus { p: 5, d: 2 }
        );
        assert_eq!(
            GraphSpec::from_params("complete", "n=8").unwrap(),
            GraphSpec::Complete { n: 8, with_self_loops: true }
        );
        assert_eq!(
            GraphSpec::from_params("complete", " n = 8 , self_loops=false ").unwrap(),
            GraphSpec::Complete { n: 8, with_self_loops: false }
        );
        assert!(GraphSpec::from_params("torus", "p=5").is_err());
        assert!(GraphSpec::from_params("torus", "p=5,d=2,q=1").is_err());
        assert!(GraphSpec::from_params("torus", "p=5,p=7,d=1").is_err());
        assert!(GraphSpec::from_params("cycle", "n=-3").is_err());
        assert!(GraphSpec::from_params("cycle", "n=2").is_err());
        assert!(GraphSpec::from_params("moebius", "n=4").is_err());
        assert!(GraphSpec::from_params("cycle", "n").is_err());
    }

    #[test]
    fn spec_json_shape() {
        let json = serde_json::to_string(&GraphSpec::Torus { p: 5, d: 2 }).unwrap();
        assert_eq!(json, r#"{"family":"torus","p":5,"d":2}"#);
    }
}
