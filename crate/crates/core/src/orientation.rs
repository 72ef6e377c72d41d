//! Orientability of closed pseudomanifolds by sign propagation.
//!
//! A facet `{v_0 < ... < v_d}` with sign `s` induces the sign `s * (-1)^p` on
//! the ridge that omits `v_p`. An orientation is an assignment of facet signs
//! under which the two facets at every ridge induce opposite signs.

use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::certificate::{capped_list, Certificate, Check, Verdict};
use crate::complex::Complex;
use crate::error::{Error, Result};
use crate::face::{Face, Vertex};
use crate::generators::{format_permutation, is_even_permutation, sphere_bundle};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrientationAssignment {
    pub basepoint: usize,
    /// `+1` or `-1` per facet, relative to its sorted vertex order.
    pub signs: Vec<i8>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Orientability {
    Orientable(OrientationAssignment),
    /// Closed walk of facets, starting and ending at the basepoint, along
    /// which the propagated sign flips.
    NonOrientable { witness: Vec<Face> },
}

impl Orientability {
    pub fn is_orientable(&self) -> bool {
        matches!(self, Orientability::Orientable(_))
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Options {
    pub basepoint: usize,
    /// Shuffles the traversal order of each facet's neighbours.
    pub shuffle_seed: Option<u64>,
}

/// Dual graph edges with the parity `p + q` of the omitted positions.
struct SignedDual {
    adjacency: Vec<Vec<(usize, bool)>>,
}

fn omitted_position(facet: &Face, ridge: &Face) -> usize {
    facet
        .vertices()
        .iter()
        .position(|v| !ridge.contains(*v))
        .expect("ridge is a proper subface")
}

fn signed_dual(x: &Complex) -> Result<SignedDual> {
    if x.is_empty() || !x.is_pure() {
        return Err(Error::NotClosedManifoldLike);
    }
    let mut adjacency = vec![Vec::new(); x.num_facets()];
    for (ridge, fs) in x.ridge_incidence() {
        let [f, g] = fs[..] else {
            return Err(Error::NotClosedManifoldLike);
        };
        let parity = (omitted_position(&x.facets()[f], &ridge)
            + omitted_position(&x.facets()[g], &ridge))
            % 2
            == 1;
        adjacency[f].push((g, parity));
        adjacency[g].push((f, parity));
    }
    let dual = SignedDual { adjacency };
    if reach(&dual, 0) != x.num_facets() {
        return Err(Error::DisconnectedDualGraph);
    }
    Ok(dual)
}

fn reach(dual: &SignedDual, start: usize) -> usize {
    let mut seen = vec![false; dual.adjacency.len()];
    seen[start] = true;
    let mut stack = vec![start];
    let mut count = 1;
    while let Some(f) = stack.pop() {
        for &(g, _) in &dual.adjacency[f] {
            if !seen[g] {
                seen[g] = true;
                count += 1;
                stack.push(g);
            }
        }
    }
    count
}

/// Sign of `g` forced by `f` across a ridge: `s_g = -s_f * (-1)^(p+q)`.
fn forced(sign: i8, odd: bool) -> i8 {
    if odd {
        sign
    } else {
        -sign
    }
}

pub fn orientability(x: &Complex) -> Result<Orientability> {
    orientability_with(x, Options::default())
}

pub fn orientability_with(x: &Complex, opts: Options) -> Result<Orientability> {
    let mut dual = signed_dual(x)?;
    let nf = x.num_facets();
    if opts.basepoint >= nf {
        return Err(Error::DimOutOfRange {
            got: opts.basepoint as i64,
            expected: "basepoint < number of facets",
        });
    }
    if let Some(seed) = opts.shuffle_seed {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for adj in &mut dual.adjacency {
            adj.shuffle(&mut rng);
        }
    }
    let mut signs = vec![0i8; nf];
    signs[opts.basepoint] = 1;
    let mut queue = VecDeque::from([opts.basepoint]);
    let mut coherent = true;
    'bfs: while let Some(f) = queue.pop_front() {
        for &(g, odd) in &dual.adjacency[f] {
            let want = forced(signs[f], odd);
            if signs[g] == 0 {
                signs[g] = want;
                queue.push_back(g);
            } else if signs[g] != want {
                coherent = false;
                break 'bfs;
            }
        }
    }
    if coherent {
        return Ok(Orientability::Orientable(OrientationAssignment {
            basepoint: opts.basepoint,
            signs,
        }));
    }
    let walk = flipping_walk(&dual, opts.basepoint);
    Ok(Orientability::NonOrientable {
        witness: walk.into_iter().map(|f| x.facets()[f].clone()).collect(),
    })
}

/// Shortest closed walk through `base` that returns with the opposite sign,
/// found by breadth-first search on the orientation double cover.
fn flipping_walk(dual: &SignedDual, base: usize) -> Vec<usize> {
    let nf = dual.adjacency.len();
    let key = |f: usize, s: i8| 2 * f + usize::from(s < 0);
    let mut parent = vec![usize::MAX; 2 * nf];
    let start = key(base, 1);
    parent[start] = start;
    let mut queue = VecDeque::from([(base, 1i8)]);
    let goal = key(base, -1);
    while let Some((f, s)) = queue.pop_front() {
        if key(f, s) == goal {
            break;
        }
        for &(g, odd) in &dual.adjacency[f] {
            let t = forced(s, odd);
            if parent[key(g, t)] == usize::MAX {
                parent[key(g, t)] = key(f, s);
                queue.push_back((g, t));
            }
        }
    }
    let mut walk = Vec::new();
    let mut k = goal;
    if parent[goal] == usize::MAX {
        return walk;
    }
    while k != start {
        walk.push(k / 2);
        k = parent[k];
    }
    walk.push(base);
    walk.reverse();
    walk
}

impl OrientationAssignment {
    /// Exhaustive check that every ridge receives opposite induced signs.
    pub fn is_coherent(&self, x: &Complex) -> bool {
        if self.signs.len() != x.num_facets() || self.signs.iter().any(|s| s.abs() != 1) {
            return false;
        }
        x.ridge_incidence().into_iter().all(|(ridge, fs)| {
            let [f, g] = fs[..] else { return false };
            let induced = |i: usize| {
                let p = omitted_position(&x.facets()[i], &ridge);
                self.signs[i] * if p.is_multiple_of(2) { 1 } else { -1 }
            };
            induced(f) + induced(g) == 0
        })
    }
}

pub fn orientability_check(x: &Complex) -> Check {
    match orientability(x) {
        Ok(Orientability::Orientable(a)) => Check::new(
            "orientability",
            Verdict::Pass,
            json!({"orientable": true, "basepoint": a.basepoint, "coherent": a.is_coherent(x)}),
        ),
        Ok(Orientability::NonOrientable { witness }) => Check::new(
            "orientability",
            Verdict::Pass,
            json!({"orientable": false, "flipping_walk": capped_list(&witness)}),
        ),
        Err(e) => Check::new("orientability", Verdict::Fail, json!({"error": e.to_string()})),
    }
}

/// Compares the orientability of the sphere bundle with the parity rule
/// `(md even and sigma even) or (md odd and sigma odd)`.
pub fn bundle_parity_check(d: usize, m: usize, sigma: &[Vertex]) -> Result<Certificate> {
    let x = sphere_bundle(d, m, sigma)?;
    let actual = orientability(&x)?.is_orientable();
    let md_even = (m * d).is_multiple_of(2);
    let sigma_even = is_even_permutation(sigma);
    let predicted = md_even == sigma_even;
    let mut cert = Certificate::new("sphere bundle parity")
        .with_param("d", d)
        .with_param("m", m)
        .with_param("sigma", format_permutation(sigma));
    cert.push(Check::new(
        "bundle-parity",
        Verdict::from_bool(actual == predicted),
        json!({
            "orientable": actual,
            "predicted": predicted,
            "md_even": md_even,
            "sigma_even": sigma_even,
        }),
    ));
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{family_m, family_n, simplex_sphere};

    #[test]
    fn spheres_are_orientable() {
        for d in 1..6 {
            let s = simplex_sphere(d);
            match orientability(&s).unwrap() {
                Orientability::Orientable(a) => assert!(a.is_coherent(&s)),
                other => panic!("{other:?}"),
            }
        }
    }

    #[test]
    fn families_in_low_dimension() {
        assert!(orientability(&family_m(2).unwrap().manifold)
            .unwrap()
            .is_orientable());
        match orientability(&family_n(3).unwrap().manifold).unwrap() {
            Orientability::NonOrientable { witness } => {
                assert!(witness.len() >= 3);
                assert_eq!(witness.first(), witness.last());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn verdict_ignores_basepoint_and_order() {
        let x = sphere_bundle(3, 9, &[1, 2, 3, 4]).unwrap();
        for (basepoint, seed) in [(0, None), (5, Some(1)), (17, Some(99))] {
            let r = orientability_with(
                &x,
                Options {
                    basepoint,
                    shuffle_seed: seed,
                },
            )
            .unwrap();
            assert!(!r.is_orientable());
        }
    }

    #[test]
    fn preconditions() {
        let disk = Complex::from_facets([[0, 1, 2], [0, 2, 3]]).unwrap();
        assert_eq!(orientability(&disk).unwrap_err(), Error::NotClosedManifoldLike);
        let two = simplex_sphere(2).disjoint_union(&simplex_sphere(2), 10);
        assert_eq!(orientability(&two).unwrap_err(), Error::DisconnectedDualGraph);
    }

    #[test]
    fn bundle_examples() {
        for (d, m, sigma) in [
            (2, 7, vec![1, 2, 3]),
            (3, 9, vec![1, 2, 3, 4]),
            (3, 11, vec![2, 1, 3, 4]),
            (3, 10, vec![2, 1, 3, 4]),
        ] {
            let c = bundle_parity_check(d, m, &sigma).unwrap();
            assert_eq!(c.verdict(), Verdict::Pass, "{}", c.to_json());
        }
        assert!(matches!(
            bundle_parity_check(3, 9, &[2, 1, 3, 4]),
            Err(Error::InadmissibleGluing { .. })
        ));
    }
}
