use std::fmt;

use serde::{Deserialize, Serialize};

/// Vertex labels are non-negative integers.
pub type Vertex = u32;

/// A simplex stored as its strictly increasing list of vertex labels.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Face(Vec<Vertex>);

impl Face {
    /// Canonicalizes an arbitrary collection of labels (sorts, removes repeats).
    pub fn new<I: IntoIterator<Item = Vertex>>(vertices: I) -> Self {
        let mut v: Vec<Vertex> = vertices.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        Face(v)
    }

    /// Wraps labels that are already strictly increasing.
    pub(crate) fn from_sorted(v: Vec<Vertex>) -> Self {
        debug_assert!(v.windows(2).all(|w| w[0] < w[1]));
        Face(v)
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Dimension of the simplex, `-1` for the empty face.
    pub fn dim(&self) -> isize {
        self.0.len() as isize - 1
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn is_subset(&self, other: &Face) -> bool {
        if self.len() > other.len() {
            return false;
        }
        let mut it = other.0.iter();
        'outer: for x in &self.0 {
            for y in it.by_ref() {
                if y == x {
                    continue 'outer;
                }
                if y > x {
                    return false;
                }
            }
            return false;
        }
        true
    }

    pub fn is_disjoint(&self, other: &Face) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < self.len() && j < other.len() {
            match self.0[i].cmp(&other.0[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return false,
            }
        }
        true
    }

    pub fn intersection(&self, other: &Face) -> Face {
        Face(self.0.iter().copied().filter(|&v| other.contains(v)).collect())
    }

    pub fn union(&self, other: &Face) -> Face {
        Face::new(self.0.iter().chain(other.0.iter()).copied())
    }

    pub fn difference(&self, other: &Face) -> Face {
        Face(self.0.iter().copied().filter(|&v| !other.contains(v)).collect())
    }

    /// The face with the vertex at `position` omitted.
    pub fn without_position(&self, position: usize) -> Face {
        let mut v = self.0.clone();
        v.remove(position);
        Face(v)
    }

    pub fn without(&self, vertex: Vertex) -> Face {
        Face(self.0.iter().copied().filter(|&v| v != vertex).collect())
    }

    pub fn with(&self, vertex: Vertex) -> Face {
        Face::new(self.0.iter().copied().chain(std::iter::once(vertex)))
    }

    /// Codimension-one faces, in order of the omitted position.
    pub fn ridges(&self) -> impl Iterator<Item = Face> + '_ {
        (0..self.len()).map(move |p| self.without_position(p))
    }

    /// All non-empty subsets, each canonical.
    pub fn subfaces(&self) -> impl Iterator<Item = Face> + '_ {
        let k = self.len();
        (1u64..(1u64 << k)).map(move |mask| {
            Face(
                (0..k)
                    .filter(|b| mask >> b & 1 == 1)
                    .map(|b| self.0[b])
                    .collect(),
            )
        })
    }

    /// Image under a vertex map, canonicalized (may shrink if the map is not injective here).
    pub fn map<F: Fn(Vertex) -> Vertex>(&self, f: F) -> Face {
        Face::new(self.0.iter().map(|&v| f(v)))
    }
}

impl fmt::Debug for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("}")
    }
}

impl From<Vec<Vertex>> for Face {
    fn from(v: Vec<Vertex>) -> Self {
        Face::new(v)
    }
}

impl<const N: usize> From<[Vertex; N]> for Face {
    fn from(v: [Vertex; N]) -> Self {
        Face::new(v)
    }
}

impl FromIterator<Vertex> for Face {
    fn from_iter<I: IntoIterator<Item = Vertex>>(iter: I) -> Self {
        Face::new(iter)
    }
}
