use serde::Serialize;

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::graph::{GraphSpec, TransitionMatrix};
use crate::spectral::orbits::{is_prime, torus_orbits};
use crate::spectral::Spectrum;

/// Partition of spectrum indices into groups of equal eigenvalue.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenvalueClasses {
    classes: Vec<Vec<usize>>,
    values: Vec<f64>,
    tolerance: f64,
}

impl EigenvalueClasses {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    /// Representative (mean) eigenvalue per class.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.classes.iter().map(Vec::len).collect()
    }

    /// `class_of()[k]` is the class containing spectrum index `k`.
    pub fn class_of(&self) -> Vec<usize> {
        let n = self.classes.iter().map(Vec::len).sum();
        let mut map = vec![0; n];
        for (j, class) in self.classes.iter().enumerate() {
            for &k in class {
                map[k] = j;
            }
        }
        map
    }

    fn check_consistent(&self, s: &Spectrum) -> Result<()> {
        let map_len: usize = self.classes.iter().map(Vec::len).sum();
        if map_len != s.n_states() {
            return Err(Error::ShapeMismatch { left: map_len, right: s.n_states() });
        }
        Ok(())
    }

    pub(crate) fn ensure_matches(&self, s: &Spectrum) -> Result<()> {
        self.check_consistent(s)
    }
}

/// Cluster the (descending) eigenvalues of `s`.
///
/// Consecutive eigenvalues within `tol` share a class. A gap in `(tol, 3·tol]`,
/// or a chain of small gaps spanning more than `tol`, is reported as an error
/// instead of being resolved silently.
pub fn group_eigenvalues(s: &Spectrum, tol: f64) -> Result<EigenvalueClasses> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::InvalidArgument(format!("class tolerance must be positive, got {tol}")));
    }
    let ev = s.eigenvalues();
    let mut classes: Vec<Vec<usize>> = vec![vec![0]];
    for i in 1..ev.len() {
        let gap = ev[i - 1] - ev[i];
        let current = classes.last_mut().expect("nonempty");
        if gap <= tol {
            let head = ev[current[0]];
            if head - ev[i] > tol {
                return Err(Error::InseparableClusters { tol, gap: head - ev[i], left: head, right: ev[i] });
            }
            current.push(i);
        } else if gap <= 3.0 * tol {
            return Err(Error::InseparableClusters { tol, gap, left: ev[i - 1], right: ev[i] });
        } else {
            classes.push(vec![i]);
        }
    }
    let values = classes
        .iter()
        .map(|c| c.iter().map(|&k| ev[k]).sum::<f64>() / c.len() as f64)
        .collect();
    Ok(EigenvalueClasses { classes, values, tolerance: tol })
}

/// Eigenvalue classes for a transition matrix using the configured tolerance.
///
/// For a non-lazy torus `Z_p^d` with `p` prime the numerical
/// clusters are additionally checked against signed-permutation orbits of the
/// Fourier indices; any disagreement is an error.
pub fn classes_for(p: &TransitionMatrix, s: &Spectrum, tol: &Tolerances) -> Result<EigenvalueClasses> {
    let ev = s.eigenvalues();
    let abs_tol = tol.class_tolerance(*ev.last().unwrap_or(&0.0), *ev.first().unwrap_or(&0.0));
    let classes = group_eigenvalues(s, abs_tol)?;
    let torus = match *p.spec() {
        GraphSpec::Torus { p, d } => Some((p, d)),
        GraphSpec::Cycle { n } => Some((n, 1)),
        _ => None,
    };
    if let Some((modulus, d)) = torus.filter(|&(m, _)| !p.is_lazy() && is_prime(m)) {
        cross_check_orbits(&classes, modulus, d)?;
    }
    Ok(classes)
}

/// Compare numerical classes with the symbolic orbit partition by value and size.
pub(crate) fn cross_check_orbits(classes: &EigenvalueClasses, p: usize, d: usize) -> Result<()> {
    let orbits = torus_orbits(p, d);
    if orbits.len() != classes.len() {
        return Err(Error::OrbitMismatch(format!(
            "torus({p},{d}): {} numerical classes vs {} orbits",
            classes.len(),
            orbits.len()
        )));
    }
    for (j, orbit) in orbits.iter().enumerate() {
        let size = classes.classes()[j].len();
        let value = classes.values()[j];
        if size != orbit.members.len() || (value - orbit.eigenvalue).abs() > 1e-9 {
            return Err(Error::OrbitMismatch(format!(
                "torus({p},{d}) class {j}: numerical ({value}, size {size}) vs orbit of {:?} ({}, size {})",
                orbit.representative,
                orbit.eigenvalue,
                orbit.members.len()
            )));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_transition, GraphSpec};
    use crate::spectral::eigendecompose;

    fn classes(spec: GraphSpec) -> EigenvalueClasses {
        let p = build_transition(&spec).unwrap();
        let tol = Tolerances::default();
        let s = eigendecompose(&p, &tol).unwrap();
        classes_for(&p, &s, &tol).unwrap()
    }

    #[test]
    fn complete_has_two_classes() {
        let c = classes(GraphSpec::Complete { n: 8, with_self_loops: true });
        assert_eq!(c.sizes(), vec![1, 7]);
    }

    #[test]
    fn hypercube4_binomial_classes() {
        let c = classes(GraphSpec::Hypercube { n: 4 });
        assert_eq!(c.sizes(), vec![1, 4, 6, 4, 1]);
    }

    #[test]
    fn torus_7_2_orbit_sizes() {
        let c = classes(GraphSpec::Torus { p: 7, d: 2 });
        assert!(c.sizes().iter().all(|s| [1, 4, 8].contains(s)));
        assert_eq!(c.sizes().iter().sum::<usize>(), 49);
    }

    #[test]
    fn torus_11_2_cross_checked() {
        let c = classes(GraphSpec::Torus { p: 11, d: 2 });
        assert_eq!(c.len(), 21);
    }

    #[test]
    fn class_of_inverts_partition() {
        let c = classes(GraphSpec::Cycle { n: 9 });
        let map = c.class_of();
        for (j, class) in c.classes().iter().enumerate() {
            for &k in class {
                assert_eq!(map[k], j);
            }
        }
    }

    #[test]
    fn inseparable_clusters_are_loud() {
        let p = build_transition(&GraphSpec::Cycle { n: 9 }).unwrap();
        let s = eigendecompose(&p, &Tolerances::default()).unwrap();
        // Eigenvalue gaps of C_9 are at least ~0.17; tolerance 0.1 puts the
        // smallest gap inside (tol, 3·tol].
        let err = group_eigenvalues(&s, 0.1).unwrap_err();
        assert!(matches!(err, Error::InseparableClusters { .. }), "{err}");
        assert!(group_eigenvalues(&s, 0.0).is_err());
    }
}
