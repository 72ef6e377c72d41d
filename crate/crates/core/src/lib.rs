//! Construction and certification of tight triangulated manifolds.
//!
//! The crate builds two infinite families of neighborly triangulated
//! `d`-manifolds on `d^2 + 5d + 5` vertices whose vertex links are stacked
//! spheres, together with the machinery needed to check their claimed
//! properties from scratch:
//!
//! * [`complex`]: facet-list complexes, links, dual graphs, boundaries.
//! * [`homology`]: GF(2) Betti numbers and induced-subcomplex injectivity.
//! * [`stacked`]: stacked balls and spheres, Walkup classes, tightness criteria.
//! * [`generators`]: the families, stacked path balls, sphere bundles and
//!   combinatorial handle additions.
//! * [`tree`]: the host graph and induced-subtree families the fillings come from.
//! * [`symmetry`]: automorphism groups and isomorphism search.
//! * [`orientation`]: orientability by sign propagation.
//! * [`oracle`]: slow, independent reference implementations for testing.

pub mod certificate;
pub mod complex;
pub mod error;
pub mod face;
pub mod generators;
pub mod gf2;
pub mod homology;
pub mod io;
pub mod oracle;
pub mod orientation;
pub mod replay;
pub mod stacked;
pub mod symmetry;
pub mod tree;
mod union_find;

pub use certificate::{Certificate, Check, Verdict};
pub use complex::{Complex, DualGraph, FVector, PseudoClass};
pub use error::{Error, Result};
pub use face::{Face, Vertex};
pub use homology::BettiVector;

/// `d^2 + 5d + 5`, the vertex count of both families in dimension `d`.
pub fn family_size(d: usize) -> usize {
    d * d + 5 * d + 5
}
