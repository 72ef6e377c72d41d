//! Automorphisms and isomorphisms of complexes.
//!
//! Both searches share one engine: vertices of the two complexes are
//! coloured jointly, colours are refined until stable (each vertex learns the
//! colour multisets of the facets around it), and the search individualizes
//! one vertex at a time, backtracking over the candidates of the smallest
//! ambiguous colour class. Group orders come from a stabilizer chain: the
//! orbit of each base point under the pointwise stabilizer of the earlier
//! ones is found by asking, for every candidate image, whether some
//! automorphism realizes it.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::complex::Complex;
use crate::error::{Error, Result};
use crate::face::{Face, Vertex};

/// Default bound on automorphism group orders.
pub const DEFAULT_ORDER_CAP: u64 = 10_000_000;

/// A bijection from `domain` onto some vertex set; `images[i]` is the image
/// of `domain[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VertexPermutation {
    pub domain: Vec<Vertex>,
    pub images: Vec<Vertex>,
}

impl VertexPermutation {
    pub fn identity(domain: &[Vertex]) -> Self {
        VertexPermutation {
            domain: domain.to_vec(),
            images: domain.to_vec(),
        }
    }

    pub fn from_map(map: &BTreeMap<Vertex, Vertex>) -> Self {
        VertexPermutation {
            domain: map.keys().copied().collect(),
            images: map.values().copied().collect(),
        }
    }

    pub fn apply(&self, v: Vertex) -> Option<Vertex> {
        self.domain
            .binary_search(&v)
            .ok()
            .map(|i| self.images[i])
    }

    pub fn is_identity(&self) -> bool {
        self.domain == self.images
    }

    pub fn map_face(&self, f: &Face) -> Option<Face> {
        f.vertices()
            .iter()
            .map(|&v| self.apply(v))
            .collect::<Option<Vec<_>>>()
            .map(Face::new)
    }

    /// True iff every facet of `x` maps to a facet of `y` and the map is a
    /// bijection between the vertex sets.
    pub fn is_isomorphism(&self, x: &Complex, y: &Complex) -> bool {
        let img: BTreeSet<Vertex> = self.images.iter().copied().collect();
        self.domain == x.vertices()
            && img.len() == self.images.len()
            && img.iter().copied().eq(y.vertices().iter().copied())
            && x.num_facets() == y.num_facets()
            && x
                .facets()
                .iter()
                .all(|f| self.map_face(f).is_some_and(|g| y.is_facet(&g)))
    }

    pub fn is_automorphism(&self, x: &Complex) -> bool {
        self.is_isomorphism(x, x)
    }

    /// `self` after `other`.
    pub fn compose(&self, other: &VertexPermutation) -> VertexPermutation {
        VertexPermutation {
            domain: other.domain.clone(),
            images: other
                .images
                .iter()
                .map(|&v| self.apply(v).expect("composable permutations"))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupDescription {
    pub generators: Vec<VertexPermutation>,
    pub order: u64,
    /// Base points of the stabilizer chain with their orbit sizes.
    pub base: Vec<Vertex>,
    pub orbit_sizes: Vec<usize>,
}

impl GroupDescription {
    /// All elements, by closure of the generators. Refuses above `cap`.
    pub fn elements(&self, domain: &[Vertex], cap: u64) -> Result<Vec<VertexPermutation>> {
        if self.order > cap {
            return Err(Error::GroupOrderOverflow(cap));
        }
        let id = VertexPermutation::identity(domain);
        let mut seen: HashSet<VertexPermutation> = HashSet::from([id.clone()]);
        let mut queue = VecDeque::from([id]);
        let mut out = Vec::new();
        while let Some(p) = queue.pop_front() {
            for g in &self.generators {
                let q = g.compose(&p);
                if seen.insert(q.clone()) {
                    if seen.len() as u64 > cap {
                        return Err(Error::GroupOrderOverflow(cap));
                    }
                    queue.push_back(q);
                }
            }
            out.push(p);
        }
        Ok(out)
    }
}

/// True iff the labels are exactly `0..n` and `i -> i + 1 mod n` preserves facets.
pub fn verify_cyclic_action(x: &Complex, n: usize) -> Result<bool> {
    if x.num_vertices() != n || x.vertices().iter().enumerate().any(|(i, &v)| v as usize != i) {
        return Err(Error::LabelMismatch(n.saturating_sub(1) as u32));
    }
    let n = n as Vertex;
    Ok(x
        .facets()
        .iter()
        .all(|f| x.is_facet(&f.map(|v| (v + 1) % n))))
}

/// Vertex-indexed view of a complex used by the search.
struct Indexed<'a> {
    complex: &'a Complex,
    facets: Vec<Vec<usize>>,
    incident: Vec<Vec<usize>>,
}

impl<'a> Indexed<'a> {
    fn new(complex: &'a Complex) -> Self {
        let pos: HashMap<Vertex, usize> = complex
            .vertices()
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, i))
            .collect();
        let facets: Vec<Vec<usize>> = complex
            .facets()
            .iter()
            .map(|f| f.vertices().iter().map(|v| pos[v]).collect())
            .collect();
        let mut incident = vec![Vec::new(); complex.num_vertices()];
        for (fi, f) in facets.iter().enumerate() {
            for &v in f {
                incident[v].push(fi);
            }
        }
        Indexed {
            complex,
            facets,
            incident,
        }
    }

    fn len(&self) -> usize {
        self.incident.len()
    }

    /// Degree, link f-vector and sorted edge multiplicities at each vertex.
    fn initial_invariants(&self) -> Result<Vec<Vec<u64>>> {
        let edge_counts = self.complex.edge_facet_counts();
        self.complex
            .vertices()
            .iter()
            .map(|&v| {
                let mut sig = vec![self.complex.vertex_degree(v) as u64];
                sig.extend(self.complex.vertex_link(v)?.f_vector().counts);
                sig.push(u64::MAX);
                let mut at_v: Vec<u64> = edge_counts
                    .iter()
                    .filter(|(e, _)| e.contains(v))
                    .map(|(_, &c)| c as u64)
                    .collect();
                at_v.sort_unstable();
                sig.extend(at_v);
                Ok(sig)
            })
            .collect()
    }
}

type Colours = Vec<u32>;

fn ids_for<T: Ord + Clone>(a: &[T], b: &[T]) -> Option<(Colours, Colours, usize)> {
    let mut counts: BTreeMap<&T, (usize, usize)> = BTreeMap::new();
    for s in a {
        counts.entry(s).or_default().0 += 1;
    }
    for s in b {
        counts.entry(s).or_default().1 += 1;
    }
    if counts.values().any(|(x, y)| x != y) {
        return None;
    }
    let id: BTreeMap<&T, u32> = counts.keys().enumerate().map(|(i, &s)| (s, i as u32)).collect();
    Some((
        a.iter().map(|s| id[s]).collect(),
        b.iter().map(|s| id[s]).collect(),
        counts.len(),
    ))
}

fn facet_signature(ix: &Indexed, c: &Colours, v: usize) -> (u32, Vec<Vec<u32>>) {
    let mut around: Vec<Vec<u32>> = ix.incident[v]
        .iter()
        .map(|&fi| {
            let mut cs: Vec<u32> = ix.facets[fi]
                .iter()
                .filter(|&&w| w != v)
                .map(|&w| c[w])
                .collect();
            cs.sort_unstable();
            cs
        })
        .collect();
    around.sort_unstable();
    (c[v], around)
}

/// Refines both colourings jointly until the class count is stable. Returns
/// false as soon as the two sides disagree.
fn refine(a: &Indexed, b: &Indexed, ca: &mut Colours, cb: &mut Colours) -> bool {
    let mut classes = ca.iter().collect::<HashSet<_>>().len();
    loop {
        let sa: Vec<_> = (0..a.len()).map(|v| facet_signature(a, ca, v)).collect();
        let sb: Vec<_> = (0..b.len()).map(|v| facet_signature(b, cb, v)).collect();
        let Some((na, nb, k)) = ids_for(&sa, &sb) else {
            return false;
        };
        *ca = na;
        *cb = nb;
        if k == classes {
            return true;
        }
        classes = k;
    }
}

fn target_cell(c: &Colours) -> Option<u32> {
    let mut sizes: BTreeMap<u32, usize> = BTreeMap::new();
    for &x in c {
        *sizes.entry(x).or_default() += 1;
    }
    sizes
        .into_iter()
        .filter(|&(_, s)| s > 1)
        .min_by_key(|&(col, s)| (s, col))
        .map(|(col, _)| col)
}

fn individualize(c: &mut Colours, v: usize) {
    c[v] = c.iter().max().map_or(0, |m| m + 1);
}

struct Search<'s, 'a> {
    a: &'s Indexed<'a>,
    b: &'s Indexed<'a>,
    nodes: u64,
}

impl Search<'_, '_> {
    fn run(&mut self, ca: Colours, cb: Colours) -> Option<Vec<usize>> {
        self.nodes += 1;
        let Some(cell) = target_cell(&ca) else {
            let by_colour: HashMap<u32, usize> =
                cb.iter().enumerate().map(|(w, &c)| (c, w)).collect();
            let map: Vec<usize> = ca.iter().map(|c| by_colour[c]).collect();
            return self.is_iso(&map).then_some(map);
        };
        let v = ca.iter().position(|&c| c == cell).expect("non-empty cell");
        for w in (0..cb.len()).filter(|&w| cb[w] == cell) {
            let (mut ca2, mut cb2) = (ca.clone(), cb.clone());
            individualize(&mut ca2, v);
            individualize(&mut cb2, w);
            if !refine(self.a, self.b, &mut ca2, &mut cb2) {
                continue;
            }
            if let Some(m) = self.run(ca2, cb2) {
                return Some(m);
            }
        }
        None
    }

    fn is_iso(&self, map: &[usize]) -> bool {
        let yv = self.b.complex.vertices();
        self.a.facets.iter().all(|f| {
            self.b
                .complex
                .is_facet(&Face::new(f.iter().map(|&v| yv[map[v]])))
        })
    }
}

fn to_permutation(a: &Indexed, b: &Indexed, map: &[usize]) -> VertexPermutation {
    VertexPermutation {
        domain: a.complex.vertices().to_vec(),
        images: map.iter().map(|&w| b.complex.vertices()[w]).collect(),
    }
}

fn initial_colours(a: &Indexed, b: &Indexed) -> Result<Option<(Colours, Colours)>> {
    let ia = a.initial_invariants()?;
    let ib = b.initial_invariants()?;
    let Some((mut ca, mut cb, _)) = ids_for(&ia, &ib) else {
        return Ok(None);
    };
    Ok(refine(a, b, &mut ca, &mut cb).then_some((ca, cb)))
}

/// A facet-preserving vertex bijection from `x` onto `y`, if one exists.
pub fn isomorphic(x: &Complex, y: &Complex) -> Option<VertexPermutation> {
    if x.f_vector() != y.f_vector() || x.num_facets() != y.num_facets() {
        return None;
    }
    if x.is_empty() {
        return Some(VertexPermutation::identity(&[]));
    }
    let (a, b) = (Indexed::new(x), Indexed::new(y));
    let (ca, cb) = initial_colours(&a, &b).ok()??;
    let mut s = Search { a: &a, b: &b, nodes: 0 };
    s.run(ca, cb).map(|m| to_permutation(&a, &b, &m))
}

pub fn automorphism_group(x: &Complex) -> Result<GroupDescription> {
    automorphism_group_capped(x, DEFAULT_ORDER_CAP)
}

pub fn automorphism_group_capped(x: &Complex, cap: u64) -> Result<GroupDescription> {
    if x.is_empty() {
        return Err(Error::EmptyComplex);
    }
    if !x.is_pure() {
        return Err(Error::NotPure);
    }
    if x.is_cone() {
        return Err(Error::ConeNotSupported);
    }
    let a = Indexed::new(x);
    let (mut c, _) = initial_colours(&a, &a)?.expect("a complex matches itself");
    let mut group = GroupDescription {
        generators: Vec::new(),
        order: 1,
        base: Vec::new(),
        orbit_sizes: Vec::new(),
    };
    while let Some(cell) = target_cell(&c) {
        let v = c.iter().position(|&k| k == cell).expect("non-empty cell");
        let mut orbit = 0usize;
        for w in (0..c.len()).filter(|&w| c[w] == cell) {
            let (mut ca, mut cb) = (c.clone(), c.clone());
            individualize(&mut ca, v);
            individualize(&mut cb, w);
            if !refine(&a, &a, &mut ca, &mut cb) {
                continue;
            }
            let mut s = Search { a: &a, b: &a, nodes: 0 };
            if let Some(m) = s.run(ca, cb) {
                orbit += 1;
                if w != v {
                    group.generators.push(to_permutation(&a, &a, &m));
                }
            }
        }
        group.order = group
            .order
            .checked_mul(orbit as u64)
            .filter(|&o| o <= cap)
            .ok_or(Error::GroupOrderOverflow(cap))?;
        group.base.push(x.vertices()[v]);
        group.orbit_sizes.push(orbit);
        let mut other = c.clone();
        individualize(&mut c, v);
        individualize(&mut other, v);
        refine(&a, &a, &mut c, &mut other);
    }
    Ok(group)
}

/// Facet permutation induced by a vertex automorphism.
pub fn facet_action(x: &Complex, p: &VertexPermutation) -> Option<Vec<usize>> {
    x.facets()
        .iter()
        .map(|f| p.map_face(f).and_then(|g| x.facet_index(&g)))
        .collect()
}

/// Checks that every group element induces an automorphism of the dual
/// graph and that only the identity acts trivially on facets.
pub fn dual_action_is_injective(x: &Complex, group: &GroupDescription, cap: u64) -> Result<bool> {
    let dual = x.dual_graph()?;
    for p in group.elements(x.vertices(), cap)? {
        let Some(act) = facet_action(x, &p) else {
            return Ok(false);
        };
        let preserves = (0..dual.node_count()).all(|u| {
            dual.neighbours(u)
                .iter()
                .all(|&w| dual.has_edge(act[u], act[w]))
        });
        let trivial = act.iter().enumerate().all(|(i, &j)| i == j);
        if !preserves || (trivial && !p.is_identity()) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Histogram: number of facets through an edge -> number of such edges.
pub fn edge_multiplicities(x: &Complex) -> BTreeMap<usize, usize> {
    let mut hist = BTreeMap::new();
    for c in x.edge_facet_counts().into_values() {
        *hist.entry(c).or_default() += 1;
    }
    hist
}

pub fn edges_with_multiplicity(x: &Complex, k: usize) -> Vec<Face> {
    x.edge_facet_counts()
        .into_iter()
        .filter(|&(_, c)| c == k)
        .map(|(e, _)| e)
        .collect()
}

/// The link of `v` in a 2-dimensional complex, read as a cyclic sequence
/// starting at its smallest vertex and continuing towards the smaller of its
/// two neighbours.
pub fn cyclic_link_order(x: &Complex, v: Vertex) -> Result<Vec<Vertex>> {
    let link = x.vertex_link(v)?;
    if link.dim() != 1 || !link.is_pure() {
        return Err(Error::DimOutOfRange {
            got: link.dim() as i64,
            expected: "vertex link of dimension 1",
        });
    }
    let mut adj: BTreeMap<Vertex, Vec<Vertex>> = BTreeMap::new();
    for e in link.facets() {
        let (p, q) = (e.vertices()[0], e.vertices()[1]);
        adj.entry(p).or_default().push(q);
        adj.entry(q).or_default().push(p);
    }
    if adj.values().any(|n| n.len() != 2) {
        return Err(Error::NotClosed);
    }
    let start = *adj.keys().next().expect("non-empty link");
    let mut order = vec![start];
    let mut prev = start;
    let mut cur = *adj[&start].iter().min().expect("two neighbours");
    while cur != start {
        order.push(cur);
        let next = adj[&cur].iter().copied().find(|&w| w != prev).expect("cycle");
        prev = cur;
        cur = next;
    }
    if order.len() != adj.len() {
        return Err(Error::NotConnected);
    }
    Ok(order)
}

/// Equality of cyclic sequences up to rotation and reflection.
pub fn equal_up_to_dihedral(a: &[Vertex], b: &[Vertex]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    if a.is_empty() {
        return true;
    }
    let n = a.len();
    let rev: Vec<Vertex> = b.iter().rev().copied().collect();
    [b, &rev[..]]
        .iter()
        .any(|s| (0..n).any(|r| (0..n).all(|i| a[i] == s[(i + r) % n])))
}
