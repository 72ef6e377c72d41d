//! Constructors for the complexes the toolkit certifies.
//!
//! Family vertices `a_0, ..., a_{n-1}` are labelled `0..n`, with subscripts
//! taken mod `n = d^2 + 5d + 5`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::complex::Complex;
use crate::error::{Error, Result};
use crate::face::{Face, Vertex};
use crate::family_size;
use crate::union_find::LabelUnion;

/// The single `d`-simplex on `{0..d}`.
pub fn simplex_ball(d: usize) -> Complex {
    Complex::from_maximal(vec![Face::new(0..=d as Vertex)])
}

/// Boundary of the `(d+1)`-simplex on `{0..d+1}`.
pub fn simplex_sphere(d: usize) -> Complex {
    let top = Face::new(0..=(d + 1) as Vertex);
    Complex::from_maximal(top.ridges().collect())
}

/// Stacked `dim`-ball on `{1..m+dim}` with facets `{k..k+dim}`, `1 <= k <= m`.
pub fn path_ball(dim: usize, m: usize) -> Result<Complex> {
    if dim < 1 || m < 1 {
        return Err(Error::DimOutOfRange {
            got: dim.min(m) as i64,
            expected: "dim >= 1 and m >= 1",
        });
    }
    let dim = dim as Vertex;
    Ok(Complex::from_maximal(
        (1..=m as Vertex).map(|k| Face::new(k..=k + dim)).collect(),
    ))
}

/// Name of a facet of a family filling, equivalently a node of the host graph.
///
/// The derived order is kind first (sigma, alpha, mu), then `k`, then `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FacetLabel {
    Sigma { i: usize },
    Alpha { k: usize, i: usize },
    Mu { i: usize },
}

impl FacetLabel {
    pub fn index(&self) -> usize {
        match *self {
            FacetLabel::Sigma { i } | FacetLabel::Alpha { i, .. } | FacetLabel::Mu { i } => i,
        }
    }

    /// Same kind and `k`, index shifted by `s` mod `n`.
    pub fn shifted(&self, s: usize, n: usize) -> FacetLabel {
        match *self {
            FacetLabel::Sigma { i } => FacetLabel::Sigma { i: (i + s) % n },
            FacetLabel::Alpha { k, i } => FacetLabel::Alpha { k, i: (i + s) % n },
            FacetLabel::Mu { i } => FacetLabel::Mu { i: (i + s) % n },
        }
    }
}

impl fmt::Display for FacetLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FacetLabel::Sigma { i } => write!(f, "sigma_{i}"),
            FacetLabel::Alpha { k, i } => write!(f, "alpha_{k},{i}"),
            FacetLabel::Mu { i } => write!(f, "mu_{i}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FamilyKind {
    M,
    N,
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FamilyKind::M => "M",
            FamilyKind::N => "N",
        })
    }
}

impl std::str::FromStr for FamilyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "M" | "m" => Ok(FamilyKind::M),
            "N" | "n" => Ok(FamilyKind::N),
            other => Err(Error::InvalidGluing(format!("unknown family {other}"))),
        }
    }
}

/// A family member: the `(d+1)`-dimensional filling with named facets and
/// its boundary, the `d`-manifold.
#[derive(Debug, Clone)]
pub struct Family {
    pub kind: FamilyKind,
    pub d: usize,
    pub n: usize,
    pub labeled: BTreeMap<FacetLabel, Face>,
    pub filling: Complex,
    pub manifold: Complex,
}

impl Family {
    pub fn facet(&self, label: FacetLabel) -> &Face {
        &self.labeled[&label]
    }

    fn sub(&self, pick: impl Fn(&FacetLabel) -> bool) -> Complex {
        Complex::from_maximal(
            self.labeled
                .iter()
                .filter(|(l, _)| pick(l))
                .map(|(_, f)| f.clone())
                .collect(),
        )
    }

    /// The sigma facets.
    pub fn e1(&self) -> Complex {
        self.sub(|l| matches!(l, FacetLabel::Sigma { .. }))
    }

    /// The mu facets.
    pub fn e2(&self) -> Complex {
        self.sub(|l| matches!(l, FacetLabel::Mu { .. }))
    }

    /// The stacked ball formed by `alpha_{1,i}, ..., alpha_{d,i}`.
    pub fn f_ball(&self, i: usize) -> Complex {
        self.sub(|l| matches!(l, FacetLabel::Alpha { i: j, .. } if *j == i))
    }
}

pub fn family_m(d: usize) -> Result<Family> {
    family(FamilyKind::M, d)
}

pub fn family_n(d: usize) -> Result<Family> {
    family(FamilyKind::N, d)
}

pub fn family(kind: FamilyKind, d: usize) -> Result<Family> {
    if d < 2 {
        return Err(Error::DimOutOfRange {
            got: d as i64,
            expected: "d >= 2",
        });
    }
    let n = family_size(d);
    let ni = n as i64;
    let di = d as i64;
    let a = |x: i64| x.rem_euclid(ni) as Vertex;
    let mut labeled = BTreeMap::new();
    for i in 0..ni {
        let iu = i as usize;
        labeled.insert(
            FacetLabel::Sigma { i: iu },
            Face::new((0..=di + 1).map(|j| a(i - j))),
        );
        let mu = match kind {
            FamilyKind::M => Face::new(
                std::iter::once(a(i)).chain((1..=di + 1).map(|j| a(i + j * (di + 3) - 1))),
            ),
            FamilyKind::N => Face::new((0..=di + 1).map(|j| a(i - j * (di + 3)))),
        };
        labeled.insert(FacetLabel::Mu { i: iu }, mu);
        for k in 1..=di {
            let tail: Vec<Vertex> = match kind {
                FamilyKind::M => (1..=k).map(|j| a(i + j * (di + 3) - 1)).collect(),
                FamilyKind::N => (2..=k + 1).map(|j| a(i - j * (di + 3))).collect(),
            };
            let f = Face::new(
                std::iter::once(a(i))
                    .chain((2..=di + 2 - k).map(|j| a(i - j)))
                    .chain(tail),
            );
            labeled.insert(
                FacetLabel::Alpha {
                    k: k as usize,
                    i: iu,
                },
                f,
            );
        }
    }
    let facets: BTreeSet<Face> = labeled.values().cloned().collect();
    if facets.len() != (d + 2) * n || facets.iter().any(|f| f.len() != d + 2) {
        return Err(Error::ConstructionBug(format!(
            "{kind}({d}): expected {} distinct facets of size {}, got {}",
            (d + 2) * n,
            d + 2,
            facets.len()
        )));
    }
    let filling = Complex::from_maximal(facets.into_iter().collect());
    let manifold = filling.boundary()?;
    Ok(Family {
        kind,
        d,
        n,
        labeled,
        filling,
        manifold,
    })
}

/// A bijection between two vertex sets used to glue them together.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GluingMap {
    source: Face,
    target: Face,
    pairing: BTreeMap<Vertex, Vertex>,
}

impl GluingMap {
    pub fn new<I: IntoIterator<Item = (Vertex, Vertex)>>(pairs: I) -> Result<Self> {
        let mut pairing = BTreeMap::new();
        for (s, t) in pairs {
            if pairing.insert(s, t).is_some() {
                return Err(Error::InvalidGluing(format!("vertex {s} paired twice")));
            }
        }
        let source = Face::new(pairing.keys().copied());
        let target = Face::new(pairing.values().copied());
        if target.len() != source.len() {
            return Err(Error::InvalidGluing("pairing is not injective".into()));
        }
        if source.is_empty() {
            return Err(Error::InvalidGluing("empty pairing".into()));
        }
        Ok(GluingMap {
            source,
            target,
            pairing,
        })
    }

    pub fn source(&self) -> &Face {
        &self.source
    }

    pub fn target(&self) -> &Face {
        &self.target
    }

    pub fn image(&self, v: Vertex) -> Option<Vertex> {
        self.pairing.get(&v).copied()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.pairing.iter().map(|(&s, &t)| (s, t))
    }
}

/// A vertex and its image sharing a neighbour.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdmissibilityWitness {
    pub vertex: Vertex,
    pub image: Vertex,
    pub common_neighbour: Vertex,
}

impl From<AdmissibilityWitness> for Error {
    fn from(w: AdmissibilityWitness) -> Self {
        Error::InadmissibleGluing {
            vertex: w.vertex,
            image: w.image,
            common_neighbour: w.common_neighbour,
        }
    }
}

#[derive(Debug, Clone)]
pub struct HandleAddition {
    pub complex: Complex,
    /// First violation of admissibility, if any.
    pub witness: Option<AdmissibilityWitness>,
}

impl HandleAddition {
    pub fn admissible(&self) -> bool {
        self.witness.is_none()
    }
}

/// First pair `(u, psi(u))` with a common neighbour in `x`.
pub fn admissibility_witness(x: &Complex, g: &GluingMap) -> Option<AdmissibilityWitness> {
    let mut nbrs: BTreeMap<Vertex, BTreeSet<Vertex>> = BTreeMap::new();
    let wanted: BTreeSet<Vertex> = g
        .source
        .vertices()
        .iter()
        .chain(g.target.vertices())
        .copied()
        .collect();
    for f in x.facets() {
        for &v in f.vertices() {
            if wanted.contains(&v) {
                nbrs.entry(v)
                    .or_default()
                    .extend(f.vertices().iter().filter(|&&w| w != v));
            }
        }
    }
    let empty = BTreeSet::new();
    g.pairs().find_map(|(u, t)| {
        let nu = nbrs.get(&u).unwrap_or(&empty);
        let nt = nbrs.get(&t).unwrap_or(&empty);
        nu.intersection(nt).next().map(|&w| AdmissibilityWitness {
            vertex: u,
            image: t,
            common_neighbour: w,
        })
    })
}

pub fn handle_addition(x: &Complex, g: &GluingMap) -> Result<HandleAddition> {
    let mut uf = LabelUnion::new();
    handle_addition_tracked(x, g, &mut uf)
}

/// Handle addition that records merges in `uf`, so callers can keep
/// resolving original labels across a sequence of additions.
pub(crate) fn handle_addition_tracked(
    x: &Complex,
    g: &GluingMap,
    uf: &mut LabelUnion,
) -> Result<HandleAddition> {
    for f in [&g.source, &g.target] {
        if !x.is_facet(f) {
            return Err(Error::NotFacet(f.clone()));
        }
    }
    if !g.source.is_disjoint(&g.target) {
        return Err(Error::NotDisjoint(g.source.clone(), g.target.clone()));
    }
    let witness = admissibility_witness(x, g);
    for (s, t) in g.pairs() {
        uf.union(s, t);
    }
    let mut out = BTreeSet::new();
    for f in x.facets() {
        if *f == g.source || *f == g.target {
            continue;
        }
        let img = Face::new(f.vertices().iter().map(|&v| uf.find(v)));
        if img.len() != f.len() {
            return Err(Error::DegenerateIdentification(f.clone()));
        }
        if !out.insert(img.clone()) {
            return Err(Error::InvalidGluing(format!(
                "identification produces facet {img} twice"
            )));
        }
    }
    Ok(HandleAddition {
        complex: Complex::from_maximal(out.into_iter().collect()),
        witness,
    })
}

/// Parses a permutation of `{1..k}` written as `id`, a digit word such as
/// `213`, or a list separated by spaces or commas.
pub fn parse_permutation(word: &str, k: usize) -> Result<Vec<Vertex>> {
    let word = word.trim();
    if word == "id" {
        return Ok((1..=k as Vertex).collect());
    }
    let parts: Vec<&str> = if word.contains([',', ' ']) {
        word.split([',', ' ']).filter(|s| !s.is_empty()).collect()
    } else {
        word.split("").filter(|s| !s.is_empty()).collect()
    };
    let images = parts
        .iter()
        .map(|p| {
            p.parse::<Vertex>()
                .map_err(|_| Error::InvalidPermutation(format!("bad entry {p:?} in {word:?}")))
        })
        .collect::<Result<Vec<_>>>()?;
    let sorted: BTreeSet<Vertex> = images.iter().copied().collect();
    if images.len() != k || sorted != (1..=k as Vertex).collect() {
        return Err(Error::InvalidPermutation(format!(
            "{word:?} is not a permutation of 1..{k}"
        )));
    }
    Ok(images)
}

/// One-line word, e.g. `213`, or `id` for the identity.
pub fn format_permutation(sigma: &[Vertex]) -> String {
    if sigma.iter().enumerate().all(|(i, &s)| s as usize == i + 1) {
        return "id".into();
    }
    let sep = if sigma.len() > 9 { " " } else { "" };
    sigma
        .iter()
        .map(|s| s.to_string())
        .collect::<Vec<_>>()
        .join(sep)
}

/// Parity by cycle count; `sigma` is a one-line word over `1..=k`.
pub fn is_even_permutation(sigma: &[Vertex]) -> bool {
    let k = sigma.len();
    let mut seen = vec![false; k];
    let mut cycles = 0;
    for start in 0..k {
        if seen[start] {
            continue;
        }
        cycles += 1;
        let mut j = start;
        while !seen[j] {
            seen[j] = true;
            j = sigma[j] as usize - 1;
        }
    }
    (k - cycles).is_multiple_of(2)
}

/// The `m`-vertex quotient of the boundary of `path_ball(d+1, m)` obtained
/// by gluing `{1..d+1}` to `{m+1..m+d+1}` via `i -> m + sigma(i)`.
pub fn sphere_bundle(d: usize, m: usize, sigma: &[Vertex]) -> Result<Complex> {
    if d < 2 {
        return Err(Error::DimOutOfRange {
            got: d as i64,
            expected: "d >= 2",
        });
    }
    let sorted: BTreeSet<Vertex> = sigma.iter().copied().collect();
    if sigma.len() != d + 1 || sorted != (1..=(d + 1) as Vertex).collect() {
        return Err(Error::InvalidPermutation(format!(
            "{sigma:?} is not a permutation of 1..{}",
            d + 1
        )));
    }
    if m < 2 {
        return Err(Error::DimOutOfRange {
            got: m as i64,
            expected: "m >= 2",
        });
    }
    let sphere = path_ball(d + 1, m)?.boundary()?;
    let g = GluingMap::new(
        sigma
            .iter()
            .enumerate()
            .map(|(i, &s)| ((i + 1) as Vertex, m as Vertex + s)),
    )?;
    if let Some(w) = admissibility_witness(&sphere, &g) {
        return Err(w.into());
    }
    Ok(handle_addition(&sphere, &g)?.complex)
}
