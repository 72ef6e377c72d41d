//! Simplicial homology over GF(2).
//!
//! Betti numbers come from ranks of boundary matrices. Tightness spot checks
//! compare, for sampled induced subcomplexes `Y`, the homology of `Y` with its
//! image in the homology of the ambient complex.

use std::collections::{BTreeSet, HashMap};

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::certificate::{Certificate, Check, Verdict};
use crate::complex::{binomial, Complex};
use crate::error::{Error, Result};
use crate::face::{Face, Vertex};
use crate::gf2::{BitRow, EchelonBasis, Gf2Matrix};

/// Betti numbers over GF(2), `betti[k]` for `0 <= k <= dim`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BettiVector(pub Vec<u64>);

impl BettiVector {
    pub fn get(&self, k: usize) -> u64 {
        self.0.get(k).copied().unwrap_or(0)
    }

    pub fn euler(&self) -> i64 {
        self.0
            .iter()
            .enumerate()
            .map(|(k, &b)| if k % 2 == 0 { b as i64 } else { -(b as i64) })
            .sum()
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.0
    }
}

impl PartialEq<[u64]> for BettiVector {
    fn eq(&self, other: &[u64]) -> bool {
        self.0 == other
    }
}

impl<const N: usize> PartialEq<[u64; N]> for BettiVector {
    fn eq(&self, other: &[u64; N]) -> bool {
        self.0 == other
    }
}

/// Default bound on `C(n, ceil(d/2))` above which homology is refused.
pub const DEFAULT_BINOMIAL_CAP: u64 = 50_000_000;

fn index_of(faces: &[Face]) -> HashMap<&Face, usize> {
    faces.iter().enumerate().map(|(i, f)| (f, i)).collect()
}

/// Boundary operator from `k`-chains to `(k-1)`-chains. Rows are the
/// `(k-1)`-faces and columns the `k`-faces, both in lexicographic order.
pub fn boundary_matrix(x: &Complex, k: usize) -> Result<Gf2Matrix> {
    if k < 1 || k as isize > x.dim() {
        return Err(Error::DimOutOfRange {
            got: k as i64,
            expected: "1 <= k <= dim",
        });
    }
    let lower = x.faces(k - 1);
    let upper = x.faces(k);
    let row_of = index_of(lower);
    let mut m = Gf2Matrix::zeros(lower.len(), upper.len());
    for (c, f) in upper.iter().enumerate() {
        for r in f.ridges() {
            m.set(row_of[&r], c, true);
        }
    }
    Ok(m)
}

/// Boundaries of the `k`-faces as rows over the `(k-1)`-faces. This is the
/// transpose of [`boundary_matrix`] and is what elimination consumes.
fn boundary_rows(x: &Complex, k: usize) -> Gf2Matrix {
    let lower = x.faces(k - 1);
    let row_of = index_of(lower);
    let rows = x
        .faces(k)
        .iter()
        .map(|f| {
            let mut row = BitRow::zeros(lower.len());
            for r in f.ridges() {
                row.set(row_of[&r], true);
            }
            row
        })
        .collect();
    Gf2Matrix::from_rows(lower.len(), rows)
}

pub fn betti(x: &Complex) -> BettiVector {
    if x.dim() < 0 {
        return BettiVector(Vec::new());
    }
    let d = x.dim() as usize;
    // ranks[k] = rank of the k-th boundary map, zero at both ends.
    let mut ranks = vec![0u64; d + 2];
    for (k, rank) in ranks.iter_mut().enumerate().take(d + 1).skip(1) {
        *rank = boundary_rows(x, k).rank() as u64;
    }
    let f = x.f_vector();
    BettiVector(
        (0..=d)
            .map(|k| f.get(k) - ranks[k] - ranks[k + 1])
            .collect(),
    )
}

/// A single Betti number; only the two adjacent boundary maps are reduced.
pub fn betti_number(x: &Complex, k: usize) -> u64 {
    if k as isize > x.dim() {
        return 0;
    }
    let fk = x.faces(k).len() as u64;
    let down = if k >= 1 { boundary_rows(x, k).rank() as u64 } else { 0 };
    let up = if (k + 1) as isize <= x.dim() {
        boundary_rows(x, k + 1).rank() as u64
    } else {
        0
    };
    fk - down - up
}

/// [`betti`] with a size guard: refuses when `C(f0, ceil(d/2))` exceeds `cap`.
pub fn betti_checked(x: &Complex, cap: u64) -> Result<BettiVector> {
    let d = x.dim().max(0) as u64;
    let size = binomial(x.num_vertices() as u64, d.div_ceil(2));
    if size > cap {
        return Err(Error::TooLarge(format!(
            "C({}, {}) = {size} exceeds cap {cap}",
            x.num_vertices(),
            d.div_ceil(2)
        )));
    }
    Ok(betti(x))
}

/// Subcomplex of all faces whose vertices lie in `w`.
pub fn induced(x: &Complex, w: &BTreeSet<Vertex>) -> Result<Complex> {
    if let Some(&v) = w.iter().find(|&&v| !x.has_vertex(v)) {
        return Err(Error::UnknownVertex(v));
    }
    Ok(Complex::from_faces_lenient(x.facets().iter().map(|f| {
        Face::new(f.vertices().iter().copied().filter(|v| w.contains(v)))
    })))
}

/// Result of testing one induced subcomplex for homology injectivity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubsetVerdict {
    pub subset: Vec<Vertex>,
    pub injective: bool,
    pub betti_subcomplex: Vec<u64>,
    pub image_ranks: Vec<u64>,
    /// First degree in which the induced map has a kernel.
    pub failing_degree: Option<usize>,
}

/// Precomputed boundary spaces of an ambient complex, reused across subsets.
pub struct InjectivityChecker<'a> {
    x: &'a Complex,
    index: Vec<HashMap<&'a Face, usize>>,
    boundaries: Vec<EchelonBasis>,
}

impl<'a> InjectivityChecker<'a> {
    pub fn new(x: &'a Complex) -> Self {
        let lattice = x.face_lattice();
        let d = lattice.len();
        let index = lattice.iter().map(|fs| index_of(fs)).collect();
        // boundaries[j] spans B_j(X) inside the j-chains.
        let boundaries = (0..d)
            .map(|j| {
                let mut basis = EchelonBasis::new(lattice[j].len());
                if j + 1 < d {
                    let m = boundary_rows(x, j + 1);
                    for r in 0..m.rows() {
                        basis.insert(m.row(r).clone());
                    }
                }
                basis
            })
            .collect();
        InjectivityChecker {
            x,
            index,
            boundaries,
        }
    }

    /// Checks that `H_j(Y) -> H_j(X)` is injective for every `j`, where `Y` is
    /// induced on `w`.
    pub fn check(&self, w: &BTreeSet<Vertex>) -> Result<SubsetVerdict> {
        let y = induced(self.x, w)?;
        let mut verdict = SubsetVerdict {
            subset: w.iter().copied().collect(),
            injective: true,
            betti_subcomplex: Vec::new(),
            image_ranks: Vec::new(),
            failing_degree: None,
        };
        if y.dim() < 0 {
            return Ok(verdict);
        }
        let dy = y.dim() as usize;
        for j in 0..=dy {
            let faces = y.faces(j);
            // Cycles of Y in degree j.
            let cycles = if j == 0 {
                (0..faces.len())
                    .map(|i| {
                        let mut v = BitRow::zeros(faces.len());
                        v.set(i, true);
                        v
                    })
                    .collect()
            } else {
                boundary_rows(&y, j).transpose().kernel_basis()
            };
            // Homology representatives: cycles independent modulo B_j(Y).
            let mut span = EchelonBasis::new(faces.len());
            if j < dy {
                let m = boundary_rows(&y, j + 1);
                for r in 0..m.rows() {
                    span.insert(m.row(r).clone());
                }
            }
            let reps: Vec<BitRow> = cycles
                .into_iter()
                .filter(|z| span.insert(z.clone()))
                .collect();
            // Push the representatives into X's chain space and count how many
            // stay independent modulo B_j(X).
            let ambient = &self.boundaries[j];
            let mut image = EchelonBasis::new(self.x.faces(j).len());
            let mut rank = 0u64;
            for z in &reps {
                let mut v = BitRow::zeros(self.x.faces(j).len());
                for i in z.ones() {
                    v.set(self.index[j][&faces[i]], true);
                }
                ambient.reduce(&mut v);
                if image.insert(v) {
                    rank += 1;
                }
            }
            verdict.betti_subcomplex.push(reps.len() as u64);
            verdict.image_ranks.push(rank);
            if rank != reps.len() as u64 && verdict.failing_degree.is_none() {
                verdict.injective = false;
                verdict.failing_degree = Some(j);
            }
        }
        Ok(verdict)
    }
}

/// Randomized tightness test over `samples` induced subcomplexes.
///
/// Subset sizes are uniform on `{3, ..., f0 - 1}`, then the subset itself is
/// uniform among subsets of that size. The generator is ChaCha8 seeded from
/// `seed`, so runs are reproducible.
pub fn tightness_spotcheck(x: &Complex, samples: usize, seed: u64) -> Result<Certificate> {
    if !x.is_connected() {
        return Err(Error::NotConnected);
    }
    let checker = InjectivityChecker::new(x);
    let verts = x.vertices();
    let n = verts.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut first_failure = None;
    let mut failures = 0usize;
    let mut run = 0usize;
    if n >= 4 {
        for _ in 0..samples {
            let size = rng.random_range(3..n);
            let w: BTreeSet<Vertex> = index::sample(&mut rng, n, size)
                .into_iter()
                .map(|i| verts[i])
                .collect();
            let v = checker.check(&w)?;
            run += 1;
            if !v.injective {
                failures += 1;
                if first_failure.is_none() {
                    first_failure = Some(v);
                }
            }
        }
    }
    let mut cert = Certificate::new("tightness spot check")
        .with_param("samples", samples)
        .with_param("seed", seed);
    cert.push(Check::new(
        "tightness-spotcheck",
        Verdict::from_bool(failures == 0),
        json!({
            "samples_run": run,
            "failures": failures,
            "first_failure": first_failure,
        }),
    ));
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s2_4() -> Complex {
        Complex::from_facets([[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]]).unwrap()
    }

    fn octahedron() -> Complex {
        // Poles 0 and 5, equator 1-2-3-4.
        let mut f = Vec::new();
        for (a, b) in [(1, 2), (2, 3), (3, 4), (4, 1)] {
            f.push(vec![0, a, b]);
            f.push(vec![5, a, b]);
        }
        Complex::from_facets(f).unwrap()
    }

    #[test]
    fn tetrahedron_boundary_matrices() {
        let x = s2_4();
        let d1 = boundary_matrix(&x, 1).unwrap();
        assert_eq!((d1.rows(), d1.cols(), d1.rank()), (4, 6, 3));
        let d2 = boundary_matrix(&x, 2).unwrap();
        assert_eq!((d2.rows(), d2.cols(), d2.rank()), (6, 4, 3));
        assert!(matches!(
            boundary_matrix(&x, 3),
            Err(Error::DimOutOfRange { got: 3, .. })
        ));
        assert!(boundary_matrix(&x, 0).is_err());
    }

    #[test]
    fn sphere_betti() {
        assert_eq!(betti(&s2_4()), [1, 0, 1]);
        assert_eq!(betti(&octahedron()), [1, 0, 1]);
    }

    #[test]
    fn single_betti_numbers() {
        let x = octahedron();
        assert_eq!(betti_number(&x, 0), 1);
        assert_eq!(betti_number(&x, 1), 0);
        assert_eq!(betti_number(&x, 2), 1);
        assert_eq!(betti_number(&x, 3), 0);
    }

    #[test]
    fn euler_matches_f_vector() {
        let x = octahedron();
        assert_eq!(betti(&x).euler(), x.f_vector().euler);
    }

    #[test]
    fn induced_subcomplexes() {
        let x = s2_4();
        let y = induced(&x, &BTreeSet::from([0, 1, 2])).unwrap();
        assert_eq!(y.facets(), &[Face::from([0, 1, 2])]);
        assert!(induced(&x, &BTreeSet::new()).unwrap().is_empty());
        assert_eq!(
            induced(&x, &BTreeSet::from([0, 9])),
            Err(Error::UnknownVertex(9))
        );
    }

    #[test]
    fn octahedron_equator_is_not_injective() {
        let x = octahedron();
        let checker = InjectivityChecker::new(&x);
        let v = checker.check(&BTreeSet::from([1, 2, 3, 4])).unwrap();
        assert!(!v.injective);
        assert_eq!(v.failing_degree, Some(1));
        assert_eq!(v.betti_subcomplex, vec![1, 1]);
        assert_eq!(v.image_ranks, vec![1, 0]);
        // Two antipodal vertices give a disconnected induced subcomplex.
        let v = checker.check(&BTreeSet::from([0, 5])).unwrap();
        assert_eq!(v.failing_degree, Some(0));
    }

    #[test]
    fn simplex_boundary_is_tight() {
        let cert = tightness_spotcheck(&s2_4(), 20, 7).unwrap();
        assert_eq!(cert.verdict(), Verdict::Pass);
    }

    #[test]
    fn spotcheck_requires_connected() {
        let two = s2_4().disjoint_union(&s2_4(), 10);
        assert_eq!(
            tightness_spotcheck(&two, 5, 0).unwrap_err(),
            Error::NotConnected
        );
    }

    #[test]
    fn size_guard() {
        assert!(betti_checked(&s2_4(), 1).is_err());
        assert_eq!(betti_checked(&s2_4(), 100).unwrap(), [1, 0, 1]);
    }
}
