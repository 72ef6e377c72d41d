//! Slow reference implementations used to cross-check the main algorithms.
//!
//! Nothing here calls into the face lattice, the bit-packed matrices or the
//! dual graph; the only shared pieces are the [`Complex`] container and the
//! result types.

use std::collections::{BTreeSet, HashMap, HashSet};

use crate::complex::Complex;
use crate::error::{Error, Result};
use crate::face::Vertex;
use crate::homology::BettiVector;

/// Largest facet that [`naive_faces`] will expand.
pub const MAX_FACET_SIZE: usize = 20;
/// Face-count bound for [`naive_betti`].
pub const DEFAULT_FACE_CAP: usize = 2_000_000;
/// Facet-count bound for [`naive_stacked_ball`].
pub const MAX_SHELLING_FACETS: usize = 12;

fn expand(facet: &[Vertex], start: usize, current: &mut Vec<Vertex>, out: &mut HashSet<Vec<Vertex>>) {
    for i in start..facet.len() {
        current.push(facet[i]);
        out.insert(current.clone());
        expand(facet, i + 1, current, out);
        current.pop();
    }
}

/// Every non-empty face, by recursive power-set expansion of each facet.
pub fn naive_faces(x: &Complex) -> Result<HashSet<Vec<Vertex>>> {
    let mut out = HashSet::new();
    for f in x.facets() {
        if f.len() > MAX_FACET_SIZE {
            return Err(Error::TooLarge(format!("facet of size {}", f.len())));
        }
        let mut sorted = f.vertices().to_vec();
        sorted.sort_unstable();
        expand(&sorted, 0, &mut Vec::new(), &mut out);
    }
    Ok(out)
}

pub fn naive_f_vector(x: &Complex) -> Result<Vec<u64>> {
    let faces = naive_faces(x)?;
    let top = faces.iter().map(Vec::len).max().unwrap_or(0);
    let mut f = vec![0u64; top];
    for face in &faces {
        f[face.len() - 1] += 1;
    }
    Ok(f)
}

/// Rank of a boundary map given as sparse columns of row indices, by
/// reducing columns against earlier ones with the same lowest row.
fn column_rank(mut columns: Vec<Vec<usize>>) -> usize {
    let mut owner: HashMap<usize, usize> = HashMap::new();
    let mut rank = 0;
    for j in 0..columns.len() {
        while let Some(&low) = columns[j].last() {
            match owner.get(&low) {
                Some(&k) => {
                    let merged = symmetric_difference(&columns[j], &columns[k]);
                    columns[j] = merged;
                }
                None => {
                    owner.insert(low, j);
                    rank += 1;
                    break;
                }
            }
        }
    }
    rank
}

fn symmetric_difference(a: &[usize], b: &[usize]) -> Vec<usize> {
    let (sa, sb): (BTreeSet<usize>, BTreeSet<usize>) =
        (a.iter().copied().collect(), b.iter().copied().collect());
    sa.symmetric_difference(&sb).copied().collect()
}

pub fn naive_betti(x: &Complex) -> Result<BettiVector> {
    naive_betti_capped(x, DEFAULT_FACE_CAP)
}

pub fn naive_betti_capped(x: &Complex, cap: usize) -> Result<BettiVector> {
    let faces = naive_faces(x)?;
    if faces.len() > cap {
        return Err(Error::TooLarge(format!("{} faces exceed cap {cap}", faces.len())));
    }
    let top = faces.iter().map(Vec::len).max().unwrap_or(0);
    let mut by_size: Vec<Vec<Vec<Vertex>>> = vec![Vec::new(); top + 1];
    for f in faces {
        let len = f.len();
        by_size[len].push(f);
    }
    for layer in &mut by_size {
        layer.sort();
    }
    let index: Vec<HashMap<&Vec<Vertex>, usize>> = by_size
        .iter()
        .map(|layer| layer.iter().enumerate().map(|(i, f)| (f, i)).collect())
        .collect();
    // rank[s] is the rank of the map from faces with s vertices.
    let mut rank = vec![0usize; top + 2];
    for s in 2..=top {
        let columns = by_size[s]
            .iter()
            .map(|f| {
                let mut col: Vec<usize> = (0..f.len())
                    .map(|drop| {
                        let mut r = f.clone();
                        r.remove(drop);
                        index[s - 1][&r]
                    })
                    .collect();
                col.sort_unstable();
                col
            })
            .collect();
        rank[s] = column_rank(columns);
    }
    Ok(BettiVector(
        (1..=top)
            .map(|s| (by_size[s].len() - rank[s] - rank[s + 1]) as u64)
            .collect(),
    ))
}

/// Searches for a stacking order: each new facet must bring exactly one new
/// vertex and meet the complex built so far in the ridge spanned by its
/// old vertices, which must still be a boundary ridge (in exactly one placed
/// facet).
pub fn naive_stacked_ball(x: &Complex) -> Result<bool> {
    let facets: Vec<Vec<Vertex>> = x.facets().iter().map(|f| f.vertices().to_vec()).collect();
    if facets.len() > MAX_SHELLING_FACETS {
        return Err(Error::TooLarge(format!(
            "{} facets exceed the shelling search bound {MAX_SHELLING_FACETS}",
            facets.len()
        )));
    }
    if facets.is_empty() || facets.iter().any(|f| f.len() != facets[0].len()) {
        return Ok(false);
    }
    let full = (1u32 << facets.len()) - 1;
    let mut dead = HashSet::new();
    Ok((0..facets.len()).any(|i| extend(&facets, 1 << i, full, &mut dead)))
}

fn extend(facets: &[Vec<Vertex>], used: u32, full: u32, dead: &mut HashSet<u32>) -> bool {
    if used == full {
        return true;
    }
    if dead.contains(&used) {
        return false;
    }
    let placed: Vec<&Vec<Vertex>> = (0..facets.len())
        .filter(|i| used >> i & 1 == 1)
        .map(|i| &facets[i])
        .collect();
    let vertices: HashSet<Vertex> = placed.iter().flat_map(|f| f.iter().copied()).collect();
    for (i, f) in facets.iter().enumerate() {
        if used >> i & 1 == 1 {
            continue;
        }
        let old: Vec<Vertex> = f.iter().copied().filter(|v| vertices.contains(v)).collect();
        if old.len() + 1 != f.len() {
            continue;
        }
        let holders = placed.iter().filter(|g| old.iter().all(|v| g.contains(v))).count();
        if holders == 1 && extend(facets, used | 1 << i, full, dead) {
            return true;
        }
    }
    dead.insert(used);
    false
}
