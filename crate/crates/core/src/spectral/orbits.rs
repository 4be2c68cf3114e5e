//! Signed-permutation orbits of Fourier indices on `Z_p^d`.
//!
//! The standard walk on the torus has eigenvalues
//! `λ_k = (1/d) Σ_j cos(2π k_j / p)` indexed by `k ∈ Z_p^d`. For prime
//! `p > 4d` the classes of equal eigenvalue are exactly the orbits of `k`
//! under permutation and negation of coordinates.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Orbit {
    /// Canonical index vector: coordinates folded to `[0, p/2]`, sorted ascending.
    pub representative: Vec<usize>,
    /// Little-endian mixed-radix indices of every orbit member.
    pub members: Vec<usize>,
    pub eigenvalue: f64,
}

pub fn is_prime(n: usize) -> bool {
    n >= 2 && (2..).take_while(|i| i * i <= n).all(|i| !n.is_multiple_of(i))
}

/// Coordinates of `index` in `Z_p^d`, little-endian.
pub fn coordinates(index: usize, p: usize, d: usize) -> Vec<usize> {
    let mut rest = index;
    (0..d)
        .map(|_| {
            let c = rest % p;
            rest /= p;
            c
        })
        .collect()
}

pub fn torus_eigenvalue(k: &[usize], p: usize) -> f64 {
    k.iter().map(|&kj| (2.0 * PI * kj as f64 / p as f64).cos()).sum::<f64>() / k.len() as f64
}

fn canonical(k: &[usize], p: usize) -> Vec<usize> {
    let mut folded: Vec<usize> = k.iter().map(|&c| c.min(p - c)).collect();
    folded.sort_unstable();
    folded
}

/// All orbits of `Z_p^d`, sorted by descending eigenvalue.
pub fn torus_orbits(p: usize, d: usize) -> Vec<Orbit> {
    let n = p.pow(d as u32);
    let mut groups: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    for index in 0..n {
        groups.entry(canonical(&coordinates(index, p, d), p)).or_default().push(index);
    }
    let mut orbits: Vec<Orbit> = groups
        .into_iter()
        .map(|(representative, members)| {
            let eigenvalue = torus_eigenvalue(&representative, p);
            Orbit { representative, members, eigenvalue }
        })
        .collect();
    orbits.sort_by(|a, b| b.eigenvalue.total_cmp(&a.eigenvalue).then_with(|| a.representative.cmp(&b.representative)));
    orbits
}

/// First pair of inequivalent index vectors `(k, l)` sharing an eigenvalue
/// (within `tol`), if any. Works for any modulus.
pub fn orbit_partition_mismatch(p: usize, d: usize, tol: f64) -> Option<(Vec<usize>, Vec<usize>)> {
    let orbits = torus_orbits(p, d);
    // Orbits are sorted by eigenvalue, so coincidences sit next to each other.
    orbits
        .windows(2)
        .find(|pair| (pair[0].eigenvalue - pair[1].eigenvalue).abs() <= tol)
        .map(|pair| (pair[0].representative.clone(), pair[1].representative.clone()))
}

/// Verify that grouping the indices of `Z_p^d` by eigenvalue reproduces the
/// orbit partition exactly. On failure the error names an offending pair `(k, l)`.
pub fn check_orbit_partition(p: usize, d: usize, tol: f64) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::InvalidArgument(format!("p = {p} is not prime")));
    }
    match orbit_partition_mismatch(p, d, tol) {
        None => Ok(()),
        Some((k, l)) => Err(Error::OrbitMismatch(format!(
            "k = {k:?} and l = {l:?} share an eigenvalue but are not equivalent"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Orbit of `k` by applying all `2^d · d!` signed permutations directly.
    fn brute_orbit(k: &[usize], p: usize) -> Vec<Vec<usize>> {
        let d = k.len();
        let mut perms = vec![vec![]];
        for _ in 0..d {
            perms = perms
                .into_iter()
                .flat_map(|prefix: Vec<usize>| {
                    (0..d)
                        .filter(|i| !prefix.contains(i))
                        .map(|i| {
                            let mut next = prefix.clone();
                            next.push(i);
                            next
                        })
                        .collect::<Vec<_>>()
                })
                .collect();
        }
        let mut out = Vec::new();
        for perm in &perms {
            for signs in 0..(1usize << d) {
                let image: Vec<usize> = (0..d)
                    .map(|i| {
                        let c = k[perm[i]];
                        if signs >> i & 1 == 1 { (p - c) % p } else { c }
                    })
                    .collect();
                if !out.contains(&image) {
                    out.push(image);
                }
            }
        }
        out.sort();
        out
    }

    #[test]
    fn orbits_match_brute_force_signed_permutations() {
        for (p, d) in [(7usize, 2usize), (5, 3), (4, 2)] {
            for orbit in torus_orbits(p, d) {
                let mut members: Vec<Vec<usize>> =
                    orbit.members.iter().map(|&m| coordinates(m, p, d)).collect();
                members.sort();
                let first = members[0].clone();
                assert_eq!(members, brute_orbit(&first, p));
                assert!(members.len() <= (1 << d) * (1..=d).product::<usize>());
            }
        }
    }

    #[test]
    fn z7_squared_orbit_sizes() {
        let mut sizes: Vec<usize> = torus_orbits(7, 2).iter().map(|o| o.members.len()).collect();
        sizes.sort_unstable();
        sizes.dedup();
        assert_eq!(sizes, vec![1, 4, 8]);
    }

    #[test]
    fn z7_classes_are_plus_minus_pairs() {
        let orbits = torus_orbits(7, 1);
        assert_eq!(orbits.len(), 4);
        assert_eq!(orbits[0].members, vec![0]);
        for orbit in &orbits[1..] {
            let k = orbit.members[0];
            assert_eq!(orbit.members, vec![k, 7 - k]);
        }
    }

    #[test]
    fn partition_check_passes_for_primes_above_4d() {
        for (p, d) in [(5usize, 1usize), (7, 1), (11, 2), (13, 2), (13, 3)] {
            check_orbit_partition(p, d, 1e-9).unwrap();
        }
        assert_eq!(torus_orbits(5, 1).len(), 3);
    }

    #[test]
    fn composite_modulus_has_accidental_coincidence() {
        // On Z_6^2, (0,3) and (1,2) both give cos 0 + cos π = cos(π/3) + cos(2π/3) = 0.
        let (k, l) = orbit_partition_mismatch(6, 2, 1e-9).unwrap();
        let mut pair = [k, l];
        pair.sort();
        assert_eq!(pair, [vec![0, 3], vec![1, 2]]);
        assert!(orbit_partition_mismatch(4, 2, 1e-9).is_some());
    }

    #[test]
    fn primes_have_no_coincidence_even_below_4d() {
        for (p, d) in [(5usize, 2usize), (5, 3), (7, 2), (3, 3), (2, 4)] {
            assert_eq!(orbit_partition_mismatch(p, d, 1e-9), None, "Z_{p}^{d}");
        }
    }

    #[test]
    fn non_prime_rejected() {
        assert!(check_orbit_partition(9, 1, 1e-9).is_err());
    }

    #[test]
    fn primality() {
        let primes: Vec<usize> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    }
}
