//! Finite abstract simplicial complexes stored by their maximal faces.
//!
//! A [`Complex`] owns a canonical (lexicographically sorted, duplicate-free,
//! maximal) facet list. Everything else (the face lattice, links, the dual
//! graph, the boundary) is derived on demand. The face lattice is cached on
//! first use, so repeated homology or neighborliness queries on the same
//! complex do not re-enumerate faces.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::face::{Face, Vertex};

#[derive(Debug, Clone)]
pub struct Complex {
    facets: Vec<Face>,
    vertices: Vec<Vertex>,
    dim: isize,
    pure: bool,
    faces: OnceLock<Vec<Vec<Face>>>,
}

impl PartialEq for Complex {
    fn eq(&self, other: &Self) -> bool {
        self.facets == other.facets
    }
}

impl Eq for Complex {}

/// Face numbers `f_0, ..., f_d` and the Euler characteristic.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FVector {
    pub counts: Vec<u64>,
    pub euler: i64,
}

impl FVector {
    pub fn new(counts: Vec<u64>) -> Self {
        let euler = counts
            .iter()
            .enumerate()
            .map(|(j, &c)| if j % 2 == 0 { c as i64 } else { -(c as i64) })
            .sum();
        FVector { counts, euler }
    }

    pub fn get(&self, j: usize) -> u64 {
        self.counts.get(j).copied().unwrap_or(0)
    }
}

/// Facets as nodes, adjacency = sharing a codimension-one face.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualGraph {
    pub nodes: Vec<Face>,
    pub edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
}

impl DualGraph {
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn neighbours(&self, node: usize) -> &[usize] {
        &self.adjacency[node]
    }

    pub fn degree(&self, node: usize) -> usize {
        self.adjacency[node].len()
    }

    pub fn is_connected(&self) -> bool {
        if self.nodes.is_empty() {
            return true;
        }
        let mut seen = vec![false; self.nodes.len()];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = queue.pop_front() {
            for &w in &self.adjacency[u] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    queue.push_back(w);
                }
            }
        }
        count == self.nodes.len()
    }

    pub fn is_tree(&self) -> bool {
        !self.nodes.is_empty() && self.edges.len() + 1 == self.nodes.len() && self.is_connected()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adjacency[a].binary_search(&b).is_ok()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PseudoClass {
    NotWeak,
    WeakPseudomanifold,
    Pseudomanifold,
}

impl Complex {
    /// Builds a complex from raw vertex sets, dropping non-maximal and repeated sets.
    pub fn from_facets<I, F>(raw: I) -> Result<Self>
    where
        I: IntoIterator<Item = F>,
        F: Into<Face>,
    {
        let faces: Vec<Face> = raw.into_iter().map(Into::into).collect();
        if faces.is_empty() {
            return Err(Error::EmptyComplex);
        }
        if faces.iter().any(Face::is_empty) {
            return Err(Error::EmptyComplex);
        }
        Ok(Self::from_faces_lenient(faces))
    }

    /// Like [`Complex::from_facets`] but accepts an empty collection (and
    /// silently ignores empty faces), returning the empty complex.
    pub fn from_faces_lenient<I: IntoIterator<Item = Face>>(raw: I) -> Self {
        let mut faces: Vec<Face> = raw.into_iter().filter(|f| !f.is_empty()).collect();
        faces.sort_unstable_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
        faces.dedup();

        let mut kept: Vec<Face> = Vec::with_capacity(faces.len());
        let mut by_vertex: HashMap<Vertex, Vec<usize>> = HashMap::new();
        for f in faces {
            let dominated = by_vertex.get(&f.vertices()[0]).is_some_and(|idx| {
                idx.iter()
                    .any(|&k| kept[k].len() > f.len() && f.is_subset(&kept[k]))
            });
            if dominated {
                continue;
            }
            for &v in f.vertices() {
                by_vertex.entry(v).or_default().push(kept.len());
            }
            kept.push(f);
        }
        Self::from_maximal(kept)
    }

    /// Assumes the input is already an antichain of non-empty faces.
    pub(crate) fn from_maximal(mut facets: Vec<Face>) -> Self {
        facets.sort_unstable();
        facets.dedup();
        let vertices: BTreeSet<Vertex> = facets
            .iter()
            .flat_map(|f| f.vertices().iter().copied())
            .collect();
        let dim = facets.iter().map(Face::dim).max().unwrap_or(-1);
        let pure = facets.iter().all(|f| f.dim() == dim);
        Complex {
            facets,
            vertices: vertices.into_iter().collect(),
            dim,
            pure,
            faces: OnceLock::new(),
        }
    }

    pub fn empty() -> Self {
        Self::from_maximal(Vec::new())
    }

    pub fn facets(&self) -> &[Face] {
        &self.facets
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_facets(&self) -> usize {
        self.facets.len()
    }

    /// `-1` for the empty complex.
    pub fn dim(&self) -> isize {
        self.dim
    }

    pub fn is_pure(&self) -> bool {
        self.pure
    }

    pub fn is_empty(&self) -> bool {
        self.facets.is_empty()
    }

    pub fn has_vertex(&self, v: Vertex) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    pub fn is_facet(&self, f: &Face) -> bool {
        self.facets.binary_search(f).is_ok()
    }

    pub fn facet_index(&self, f: &Face) -> Option<usize> {
        self.facets.binary_search(f).ok()
    }

    /// Whether `f` lies in the downward closure of the facets.
    pub fn contains_face(&self, f: &Face) -> bool {
        if f.is_empty() {
            return true;
        }
        if f.dim() > self.dim {
            return false;
        }
        match self.faces.get() {
            Some(all) => all[f.len() - 1].binary_search(f).is_ok(),
            None => self.facets.iter().any(|g| f.is_subset(g)),
        }
    }

    /// All faces, grouped by dimension, each group in lexicographic order.
    pub fn face_lattice(&self) -> &[Vec<Face>] {
        self.faces.get_or_init(|| {
            if self.dim < 0 {
                return Vec::new();
            }
            let mut sets: Vec<BTreeSet<Face>> = vec![BTreeSet::new(); self.dim as usize + 1];
            for f in &self.facets {
                for s in f.subfaces() {
                    let k = s.len() - 1;
                    sets[k].insert(s);
                }
            }
            sets.into_iter().map(|s| s.into_iter().collect()).collect()
        })
    }

    /// The `k`-dimensional faces in lexicographic order (empty for out-of-range `k`).
    pub fn faces(&self, k: usize) -> &[Face] {
        self.face_lattice().get(k).map_or(&[], Vec::as_slice)
    }

    pub fn f_vector(&self) -> FVector {
        FVector::new(self.face_lattice().iter().map(|v| v.len() as u64).collect())
    }

    /// Facets containing `alpha`, as a complex.
    pub fn star(&self, alpha: &Face) -> Result<Complex> {
        let through: Vec<Face> = self
            .facets
            .iter()
            .filter(|f| alpha.is_subset(f))
            .cloned()
            .collect();
        if through.is_empty() {
            return Err(Error::FaceNotFound(alpha.clone()));
        }
        Ok(Complex::from_maximal(through))
    }

    pub fn link(&self, alpha: &Face) -> Result<Complex> {
        let through: Vec<Face> = self
            .facets
            .iter()
            .filter(|f| alpha.is_subset(f))
            .map(|f| f.difference(alpha))
            .collect();
        if through.is_empty() {
            return Err(Error::FaceNotFound(alpha.clone()));
        }
        // Link faces of distinct facets are distinct, but a non-pure complex
        // can produce dominated ones.
        if self.pure {
            Ok(Complex::from_maximal(
                through.into_iter().filter(|f| !f.is_empty()).collect(),
            ))
        } else {
            Ok(Complex::from_faces_lenient(through))
        }
    }

    pub fn vertex_link(&self, v: Vertex) -> Result<Complex> {
        self.link(&Face::from_sorted(vec![v]))
    }

    /// Map from each ridge to the indices of the facets containing it.
    pub fn ridge_incidence(&self) -> BTreeMap<Face, Vec<usize>> {
        let mut map: BTreeMap<Face, Vec<usize>> = BTreeMap::new();
        for (i, f) in self.facets.iter().enumerate() {
            for r in f.ridges() {
                map.entry(r).or_default().push(i);
            }
        }
        map
    }

    pub fn dual_graph(&self) -> Result<DualGraph> {
        if !self.pure {
            return Err(Error::NotPure);
        }
        let mut adjacency = vec![Vec::new(); self.facets.len()];
        let mut edges = Vec::new();
        for ids in self.ridge_incidence().values() {
            for (a, &i) in ids.iter().enumerate() {
                for &j in &ids[a + 1..] {
                    edges.push((i.min(j), i.max(j)));
                }
            }
        }
        edges.sort_unstable();
        edges.dedup();
        for &(i, j) in &edges {
            adjacency[i].push(j);
            adjacency[j].push(i);
        }
        for a in &mut adjacency {
            a.sort_unstable();
        }
        Ok(DualGraph {
            nodes: self.facets.clone(),
            edges,
            adjacency,
        })
    }

    pub fn classify_pseudo(&self) -> Result<PseudoClass> {
        if !self.pure {
            return Err(Error::NotPure);
        }
        if self.ridge_incidence().values().any(|ids| ids.len() > 2) {
            return Ok(PseudoClass::NotWeak);
        }
        if self.dual_graph()?.is_connected() {
            Ok(PseudoClass::Pseudomanifold)
        } else {
            Ok(PseudoClass::WeakPseudomanifold)
        }
    }

    /// Ridges lying in exactly one facet. Empty for closed complexes.
    pub fn boundary(&self) -> Result<Complex> {
        if !self.pure {
            return Err(Error::NotPure);
        }
        let incidence = self.ridge_incidence();
        if incidence.values().any(|ids| ids.len() > 2) {
            return Err(Error::NotWeak);
        }
        let facets = incidence
            .into_iter()
            .filter(|(r, ids)| ids.len() == 1 && !r.is_empty())
            .map(|(r, _)| r)
            .collect();
        Ok(Complex::from_maximal(facets))
    }

    pub fn is_closed(&self) -> bool {
        self.boundary().is_ok_and(|b| b.is_empty())
    }

    /// Every `l`-subset of the vertex set is a face.
    pub fn is_l_neighborly(&self, l: usize) -> bool {
        let n = self.vertices.len() as u64;
        if l as u64 > n || l == 0 {
            return true;
        }
        self.faces(l - 1).len() as u64 == binomial(n, l as u64)
    }

    pub fn is_neighborly(&self) -> bool {
        self.is_l_neighborly(2)
    }

    /// Vertices joined to `v` by an edge.
    pub fn neighbours(&self, v: Vertex) -> BTreeSet<Vertex> {
        let mut out = BTreeSet::new();
        for f in self.facets.iter().filter(|f| f.contains(v)) {
            out.extend(f.vertices().iter().copied().filter(|&w| w != v));
        }
        out
    }

    pub fn vertex_degree(&self, v: Vertex) -> usize {
        self.neighbours(v).len()
    }

    /// Connectivity of the underlying 1-skeleton. The empty complex counts as connected.
    pub fn is_connected(&self) -> bool {
        if self.vertices.is_empty() {
            return true;
        }
        let index: HashMap<Vertex, usize> = self
            .vertices
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, i))
            .collect();
        let mut parent: Vec<usize> = (0..self.vertices.len()).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for f in &self.facets {
            let r0 = find(&mut parent, index[&f.vertices()[0]]);
            for v in &f.vertices()[1..] {
                let r = find(&mut parent, index[v]);
                parent[r] = r0;
            }
        }
        let root = find(&mut parent, 0);
        (0..self.vertices.len()).all(|i| find(&mut parent, i) == root)
    }

    /// Whether some vertex lies in every facet.
    pub fn is_cone(&self) -> bool {
        let Some(first) = self.facets.first() else {
            return false;
        };
        first
            .vertices()
            .iter()
            .any(|&v| self.facets.iter().all(|f| f.contains(v)))
    }

    /// Applies a vertex map to every facet. The map must be injective on the
    /// vertex set; otherwise use quotient-style constructions.
    pub fn relabel<F: Fn(Vertex) -> Vertex>(&self, f: F) -> Complex {
        Complex::from_maximal(self.facets.iter().map(|s| s.map(&f)).collect())
    }

    /// Cone with the given apex, which must not already be a vertex.
    pub fn cone(&self, apex: Vertex) -> Complex {
        assert!(!self.has_vertex(apex), "cone apex {apex} already used");
        Complex::from_maximal(self.facets.iter().map(|f| f.with(apex)).collect())
    }

    pub fn skeleton(&self, k: usize) -> Complex {
        if self.dim <= k as isize {
            return self.clone();
        }
        Complex::from_maximal(self.faces(k).to_vec())
    }

    /// Disjoint union; the second complex is shifted by `offset`.
    pub fn disjoint_union(&self, other: &Complex, offset: Vertex) -> Complex {
        let mut facets = self.facets.clone();
        facets.extend(other.facets.iter().map(|f| f.map(|v| v + offset)));
        Complex::from_faces_lenient(facets)
    }

    /// Number of facets containing each edge.
    pub fn edge_facet_counts(&self) -> BTreeMap<Face, usize> {
        let mut map = BTreeMap::new();
        for f in &self.facets {
            let v = f.vertices();
            for a in 0..v.len() {
                for b in a + 1..v.len() {
                    *map.entry(Face::from_sorted(vec![v[a], v[b]])).or_insert(0) += 1;
                }
            }
        }
        map
    }
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}
