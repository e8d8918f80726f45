//! Finite metric spaces: graph word metrics, dense rational metrics, box
//! spaces, balls and greedy nets.

mod io;
mod net;
mod space;

pub use io::{read_edges_csv, write_distance_csv, write_edges_csv, BoxComponent, BoxSpaceDescriptor, ComponentSpec};
pub use net::{max_separated_net, Net, NetViolation};
pub use space::{FiniteMetricSpace, DENSE_CROSSOVER, EXHAUSTIVE_AXIOMS};

use thiserror::Error;

use crate::groups::GroupError;

/// Distances are exact rationals; graph metrics produce integers.
pub type Dist = num_rational::Rational64;

#[derive(Debug, Error)]
pub enum MetricError {
    #[error("graph is disconnected: {reached} of {total} points reachable from point 0")]
    Disconnected { reached: usize, total: usize },
    #[error("point {0} out of range")]
    PointOutOfRange(usize),
    #[error("distance data of length {0} does not match the point count")]
    NotSquare(usize),
    #[error("negative distance between {0} and {1}")]
    Negative(usize, usize),
    #[error("zero distance mismatch between {0} and {1}")]
    ZeroDistance(usize, usize),
    #[error("asymmetric distance between {0} and {1}")]
    Asymmetric(usize, usize),
    #[error("triangle inequality fails for ({0}, {1}, {2})")]
    Triangle(usize, usize, usize),
    #[error("element {g} does not preserve d({x}, {y})")]
    NotIsometric { g: usize, x: usize, y: usize },
    #[error("box-space component indices must be distinct")]
    DuplicateIndex,
    #[error("group enumeration is not closed, so it is not a finite group")]
    NotFinite,
    #[error("net separation must be positive")]
    InvalidDelta,
    #[error("infeasible net: {0}")]
    Infeasible(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Group(#[from] GroupError),
}
