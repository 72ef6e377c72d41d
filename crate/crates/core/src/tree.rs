//! Host graphs and induced-subtree families.
//!
//! Given a graph `G` and subtrees `T_0, ..., T_{n-1}`, each host vertex `u`
//! gets the set `û = {i : u ∈ T_i}`. When the family satisfies the
//! intersection, multiplicity and adjacency hypotheses checked by
//! [`verify_family`], the sets `û` are the facets of a neighborly complex
//! whose dual graph is `G`.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::certificate::{capped_list, Certificate, Check, Verdict};
use crate::complex::Complex;
use crate::error::{Error, Result};
use crate::face::{Face, Vertex};
use crate::family_size;
use crate::generators::FacetLabel;

pub type HostNode = FacetLabel;

/// Two `n`-cycles joined by `n` disjoint paths.
#[derive(Debug, Clone, Serialize)]
pub struct HostGraph {
    pub d: usize,
    pub n: usize,
    pub nodes: Vec<HostNode>,
    pub edges: Vec<(usize, usize)>,
    #[serde(skip)]
    index: BTreeMap<HostNode, usize>,
    #[serde(skip)]
    adjacency: Vec<BTreeSet<usize>>,
}

impl HostGraph {
    fn from_parts(d: usize, n: usize, nodes: Vec<HostNode>, edge_labels: &[(HostNode, HostNode)]) -> Self {
        let index: BTreeMap<HostNode, usize> =
            nodes.iter().enumerate().map(|(i, &l)| (l, i)).collect();
        let mut adjacency = vec![BTreeSet::new(); nodes.len()];
        let mut edges = BTreeSet::new();
        for (p, q) in edge_labels {
            let (a, b) = (index[p], index[q]);
            adjacency[a].insert(b);
            adjacency[b].insert(a);
            edges.insert((a.min(b), a.max(b)));
        }
        HostGraph {
            d,
            n,
            nodes,
            edges: edges.into_iter().collect(),
            index,
            adjacency,
        }
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn index_of(&self, node: HostNode) -> Option<usize> {
        self.index.get(&node).copied()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adjacency[a].contains(&b)
    }

    pub fn neighbours(&self, a: usize) -> &BTreeSet<usize> {
        &self.adjacency[a]
    }

    /// Nodes of the path from `sigma_i` to `mu_i`.
    pub fn path(&self, i: usize) -> Vec<HostNode> {
        std::iter::once(FacetLabel::Sigma { i })
            .chain((1..=self.d).map(|k| FacetLabel::Alpha { k, i }))
            .chain(std::iter::once(FacetLabel::Mu { i }))
            .collect()
    }
}

pub fn graph_g(d: usize) -> Result<HostGraph> {
    if d < 2 {
        return Err(Error::DimOutOfRange {
            got: d as i64,
            expected: "d >= 2",
        });
    }
    let n = family_size(d);
    let mut nodes = Vec::with_capacity(n * (d + 2));
    let mut edges = Vec::with_capacity(n * (d + 3));
    for i in 0..n {
        nodes.push(FacetLabel::Sigma { i });
        nodes.push(FacetLabel::Mu { i });
        for k in 1..=d {
            nodes.push(FacetLabel::Alpha { k, i });
        }
        edges.push((FacetLabel::Sigma { i }, FacetLabel::Sigma { i: (i + 1) % n }));
        edges.push((FacetLabel::Mu { i }, FacetLabel::Mu { i: (i + d + 3) % n }));
        edges.push((FacetLabel::Sigma { i }, FacetLabel::Alpha { k: 1, i }));
        for k in 1..d {
            edges.push((FacetLabel::Alpha { k, i }, FacetLabel::Alpha { k: k + 1, i }));
        }
        edges.push((FacetLabel::Alpha { k: d, i }, FacetLabel::Mu { i }));
    }
    nodes.sort();
    Ok(HostGraph::from_parts(d, n, nodes, &edges))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Variant {
    T1,
    T2,
}

impl std::str::FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "T1" | "t1" => Ok(Variant::T1),
            "T2" | "t2" => Ok(Variant::T2),
            other => Err(Error::InvalidGluing(format!("unknown tree variant {other}"))),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TreeFamily {
    pub variant: Variant,
    pub host: HostGraph,
    /// Member `i` as sorted host-node indices.
    pub members: Vec<Vec<usize>>,
}

fn member_labels(d: usize, n: usize, i: usize, variant: Variant) -> BTreeSet<HostNode> {
    let m = |x: usize| x % n;
    let mut set = BTreeSet::new();
    for j in 0..=d + 1 {
        set.insert(FacetLabel::Sigma { i: m(i + j) });
        set.insert(FacetLabel::Mu { i: m(i + j * (d + 3)) });
    }
    for j in 1..=d {
        set.insert(FacetLabel::Alpha { k: j, i });
    }
    for k in 2..=d + 1 {
        for j in 1..=d + 2 - k {
            set.insert(FacetLabel::Alpha { k: j, i: m(i + k) });
        }
        let lo = match variant {
            Variant::T1 => d + 2 - k,
            Variant::T2 => k - 1,
        };
        for j in lo..=d {
            set.insert(FacetLabel::Alpha { k: j, i: m(i + k * (d + 3)) });
        }
    }
    set
}

pub fn tree_family(d: usize, variant: Variant) -> Result<TreeFamily> {
    let host = graph_g(d)?;
    let n = host.n;
    let members = (0..n)
        .map(|i| {
            member_labels(d, n, i, variant)
                .into_iter()
                .map(|l| host.index[&l])
                .collect()
        })
        .collect();
    let family = TreeFamily {
        variant,
        host,
        members,
    };
    if let Some(i) = (0..n).find(|&i| !induces_tree(&family.host, &family.members[i])) {
        return Err(Error::ConstructionBug(format!("member {i} does not induce a tree")));
    }
    Ok(family)
}

/// Whether `nodes` induces a connected acyclic subgraph of `host`.
pub fn induces_tree(host: &HostGraph, nodes: &[usize]) -> bool {
    if nodes.is_empty() {
        return false;
    }
    let set: BTreeSet<usize> = nodes.iter().copied().collect();
    let edges: usize = set
        .iter()
        .map(|&a| host.adjacency[a].iter().filter(|b| set.contains(b)).count())
        .sum::<usize>()
        / 2;
    edges + 1 == set.len() && reachable(host, &set) == set.len()
}

fn reachable(host: &HostGraph, set: &BTreeSet<usize>) -> usize {
    let Some(&start) = set.iter().next() else {
        return 0;
    };
    let mut seen = BTreeSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some(a) = queue.pop_front() {
        for &b in &host.adjacency[a] {
            if set.contains(&b) && seen.insert(b) {
                queue.push_back(b);
            }
        }
    }
    seen.len()
}

impl TreeFamily {
    /// `û` for every host node, indexed like `host.nodes`.
    pub fn hats(&self) -> Vec<Face> {
        let mut hats = vec![Vec::new(); self.host.node_count()];
        for (i, member) in self.members.iter().enumerate() {
            for &u in member {
                hats[u].push(i as Vertex);
            }
        }
        hats.into_iter().map(Face::new).collect()
    }

    pub fn hat(&self, node: HostNode) -> Option<Face> {
        let u = self.host.index_of(node)?;
        Some(Face::new(
            self.members
                .iter()
                .enumerate()
                .filter(|(_, m)| m.binary_search(&u).is_ok())
                .map(|(i, _)| i as Vertex),
        ))
    }
}

/// `|û \ v̂|`.
pub fn hat_distance(u: &Face, v: &Face) -> usize {
    u.difference(v).len()
}

/// Closed forms of the hat sets for the first variant.
pub fn closed_form_hat(d: usize, node: HostNode) -> Face {
    let n = family_size(d) as i64;
    let di = d as i64;
    let a = |x: i64| x.rem_euclid(n) as Vertex;
    match node {
        FacetLabel::Sigma { i } => Face::new((0..=di + 1).map(|k| a(i as i64 - k))),
        FacetLabel::Mu { i } => Face::new((0..=di + 1).map(|k| a(i as i64 - k * (di + 3)))),
        FacetLabel::Alpha { k: l, i } => {
            let (l, m) = (l as i64, i as i64);
            Face::new(
                std::iter::once(a(m))
                    .chain((2..=di + 2 - l).map(|k| a(m - k)))
                    .chain((di + 2 - l..=di + 1).map(|j| a(m - (di + 3) * j))),
            )
        }
    }
}

/// Checks the hypotheses that make the hat sets a neighborly complex of
/// dimension `dim` with dual graph `host`:
///
/// * every member induces a tree on `n - dim` nodes,
/// * any two members meet,
/// * every host node lies in exactly `dim + 1` members,
/// * `|û ∩ v̂| = dim` exactly when `uv` is an edge.
pub fn verify_family(host: &HostGraph, family: &TreeFamily, dim: usize) -> Certificate {
    let n = family.members.len();
    let mut cert = Certificate::new(format!("tree family {:?}", family.variant))
        .with_param("d", host.d)
        .with_param("n", n)
        .with_param("dim", dim)
        .with_param("variant", family.variant);

    let bad_trees: Vec<usize> = (0..n)
        .filter(|&i| !induces_tree(host, &family.members[i]))
        .collect();
    cert.push(Check::new(
        "members-induce-trees",
        Verdict::from_bool(bad_trees.is_empty()),
        json!({ "failing": capped_list(&bad_trees) }),
    ));

    let bad_sizes: Vec<(usize, usize)> = family
        .members
        .iter()
        .enumerate()
        .filter(|(_, m)| m.len() + dim != n)
        .map(|(i, m)| (i, m.len()))
        .collect();
    cert.push(Check::new(
        "member-size",
        Verdict::from_bool(bad_sizes.is_empty()),
        json!({ "expected": n.checked_sub(dim), "failing": capped_list(&bad_sizes) }),
    ));

    let sets: Vec<BTreeSet<usize>> = family
        .members
        .iter()
        .map(|m| m.iter().copied().collect())
        .collect();
    let mut disjoint = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if sets[i].is_disjoint(&sets[j]) {
                disjoint.push((i, j));
            }
        }
    }
    cert.push(Check::new(
        "pairwise-intersection",
        Verdict::from_bool(disjoint.is_empty()),
        json!({ "pairs_checked": n * n.saturating_sub(1) / 2, "disjoint": capped_list(&disjoint) }),
    ));

    let hats = family.hats();
    let wrong_mult: Vec<String> = hats
        .iter()
        .enumerate()
        .filter(|(_, h)| h.len() != dim + 1)
        .map(|(u, h)| format!("{} in {}", host.nodes[u], h.len()))
        .collect();
    cert.push(Check::new(
        "node-multiplicity",
        Verdict::from_bool(wrong_mult.is_empty()),
        json!({ "expected": dim + 1, "failing": capped_list(&wrong_mult) }),
    ));

    let mut wrong_adj = Vec::new();
    for u in 0..hats.len() {
        for v in u + 1..hats.len() {
            let meet = hats[u].intersection(&hats[v]).len() == dim;
            if meet != host.has_edge(u, v) {
                wrong_adj.push(format!("{} {}", host.nodes[u], host.nodes[v]));
            }
        }
    }
    cert.push(Check::new(
        "hat-adjacency",
        Verdict::from_bool(wrong_adj.is_empty()),
        json!({ "failing": capped_list(&wrong_adj) }),
    ));
    cert
}

/// The complex whose facets are the hat sets, after checking the hypotheses.
pub fn complex_from_family(host: &HostGraph, family: &TreeFamily) -> Result<Complex> {
    let n = family.members.len();
    let size = family.members.first().map_or(0, Vec::len);
    let dim = n.checked_sub(size).ok_or_else(|| {
        Error::HypothesesNotVerified("members larger than the family".into())
    })?;
    let cert = verify_family(host, family, dim);
    let failing: Vec<&str> = cert
        .checks
        .iter()
        .filter(|c| c.verdict != Verdict::Pass)
        .map(|c| c.name.as_str())
        .collect();
    if !failing.is_empty() {
        return Err(Error::HypothesesNotVerified(failing.join(", ")));
    }
    Complex::from_facets(family.hats())
}

/// Canonical string of an unrooted tree, by rooting at its centre(s).
pub fn tree_canonical_form(host: &HostGraph, nodes: &[usize]) -> String {
    let set: BTreeSet<usize> = nodes.iter().copied().collect();
    let nbrs = |a: usize| -> Vec<usize> {
        host.adjacency[a].iter().copied().filter(|b| set.contains(b)).collect()
    };
    let mut degree: BTreeMap<usize, usize> = set.iter().map(|&a| (a, nbrs(a).len())).collect();
    let mut layer: Vec<usize> = degree.iter().filter(|(_, &d)| d <= 1).map(|(&a, _)| a).collect();
    let mut left = set.len();
    while left > 2 {
        left -= layer.len();
        let mut next = Vec::new();
        for &a in &layer {
            for b in nbrs(a) {
                let e = degree.get_mut(&b).expect("member node");
                if *e > 0 {
                    *e -= 1;
                    if *e == 1 {
                        next.push(b);
                    }
                }
            }
            degree.insert(a, 0);
        }
        layer = next;
    }
    fn encode(a: usize, parent: Option<usize>, nbrs: &dyn Fn(usize) -> Vec<usize>) -> String {
        let mut kids: Vec<String> = nbrs(a)
            .into_iter()
            .filter(|&b| Some(b) != parent)
            .map(|b| encode(b, Some(a), nbrs))
            .collect();
        kids.sort();
        format!("({})", kids.concat())
    }
    let centres: Vec<usize> = degree
        .iter()
        .filter(|(a, _)| layer.contains(a))
        .map(|(&a, _)| a)
        .collect();
    centres
        .iter()
        .map(|&c| encode(c, None, &nbrs))
        .min()
        .unwrap_or_default()
}
