use thiserror::Error;

use crate::face::Face;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("complex has no facets")]
    EmptyComplex,

    #[error("face {0} is not a face of the complex")]
    FaceNotFound(Face),

    #[error("complex is not pure")]
    NotPure,

    #[error("some ridge lies in three or more facets")]
    NotWeak,

    #[error("complex has non-empty boundary")]
    NotClosed,

    #[error("complex is not connected")]
    NotConnected,

    #[error("dimension {got} is outside the supported range ({expected})")]
    DimOutOfRange { got: i64, expected: &'static str },

    #[error("vertex {0} is not a vertex of the complex")]
    UnknownVertex(u32),

    #[error("vertex labels are not exactly {{0, ..., {0}}}")]
    LabelMismatch(u32),

    #[error("{0} is not a facet")]
    NotFacet(Face),

    #[error("gluing faces {0} and {1} are not disjoint")]
    NotDisjoint(Face, Face),

    #[error("invalid gluing map: {0}")]
    InvalidGluing(String),

    #[error("identification collapses facet {0}")]
    DegenerateIdentification(Face),

    #[error(
        "inadmissible gluing: {vertex} and its image {image} share the neighbour {common_neighbour}"
    )]
    InadmissibleGluing {
        vertex: u32,
        image: u32,
        common_neighbour: u32,
    },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("every ridge must lie in exactly two facets")]
    NotClosedManifoldLike,

    #[error("dual graph is not connected")]
    DisconnectedDualGraph,

    #[error("complex is a cone; automorphism search needs a non-cone pseudomanifold")]
    ConeNotSupported,

    #[error("group order exceeds the cap of {0}")]
    GroupOrderOverflow(u64),

    #[error("tree family does not satisfy the construction hypotheses: {0}")]
    HypothesesNotVerified(String),

    #[error("internal construction check failed: {0}")]
    ConstructionBug(String),

    #[error("instance too large: {0}")]
    TooLarge(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
}
