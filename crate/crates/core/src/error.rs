use thiserror::Error;

use crate::structures::Flavor;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("tuple {tuple:?} out of range for universe of size {n}")]
    TupleOutOfRange { tuple: Vec<usize>, n: usize },

    #[error("tuple {tuple:?} is not strictly sorted")]
    TupleNotSorted { tuple: Vec<usize> },

    #[error("tuple {tuple:?} has arity {found}, expected {expected}")]
    TupleArity {
        tuple: Vec<usize>,
        found: usize,
        expected: usize,
    },

    #[error("duplicate tuple {tuple:?}")]
    DuplicateTuple { tuple: Vec<usize> },

    #[error("structure contains a forbidden {r}-clique on {vertices:?}")]
    ForbiddenClique { vertices: Vec<usize>, r: usize },

    #[error("flavor mismatch between {left:?} and {right:?}")]
    FlavorMismatch { left: Flavor, right: Flavor },

    #[error("embedding endpoints do not match: {detail}")]
    EndpointMismatch { detail: String },

    #[error("family level does not match: {detail}")]
    LevelMismatch { detail: String },

    #[error("families are indexed over different embedding bases")]
    BasisMismatch,

    #[error("cost cap exceeded for {what}: required {required}, cap {cap}")]
    CapExceeded {
        what: &'static str,
        required: u128,
        cap: u128,
    },

    #[error("no crossing in range: dense bound never exceeds the minimal bound for N <= {cap}")]
    NoCrossingInRange { cap: usize },

    #[error(
        "block {block:?} meets the marked set in exactly one vertex {vertex}; \
         normalize the input so every met block is met in at least two vertices"
    )]
    SingletonBlockIntersection { block: Vec<usize>, vertex: usize },

    #[error("vertex {vertex} is marked but not covered by any block")]
    UncoveredVertex { vertex: usize },

    #[error("designated vertices {vertices:?} do not induce a single edge of the template")]
    DesignatedNotEdge { vertices: Vec<usize> },

    #[error("invalid parameter: {detail}")]
    InvalidParameter { detail: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(detail: impl Into<String>) -> Self {
        Error::InvalidParameter {
            detail: detail.into(),
        }
    }
}
