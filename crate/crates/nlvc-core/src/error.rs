//! Error type shared by every module in the crate.

use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Domain endpoints or horizon violate `b > a`, `0 < eps < (b-a)/2`.
    InvalidGeometry {
        a: f64,
        b: f64,
        epsilon: f64,
    },
    /// Horizon is not an integer multiple of the mesh spacing.
    MisalignedHorizon {
        epsilon: f64,
        h: f64,
    },
    /// Domain length is not an integer multiple of the mesh spacing.
    MisalignedDomain {
        length: f64,
        h: f64,
    },
    /// Evaluation point lies outside the closure of the computational domain.
    OutsideDomain {
        x: f64,
    },
    /// Interaction-operator argument is not in the Neumann layer.
    NotInNeumannLayer {
        x: f64,
    },
    /// Point lies where the interaction ball is truncated by the domain.
    OutsideFullBall {
        x: f64,
    },
    /// Kernel moment requested for an order without a closed form.
    UnsupportedOrder {
        order: u32,
    },
    /// Quadrature order outside the supported range.
    InvalidQuadrature {
        points: usize,
    },
    /// Constraint elimination would leave no unknowns.
    EmptyFreeSet,
    /// Constrained nodes must form leading/trailing runs of the node list.
    InvalidConstraints,
    /// A Cholesky pivot was not strictly positive; the reduced operator lost
    /// coercivity, which signals an assembly bug.
    FactorizationFailure {
        pivot_index: usize,
    },
    /// Tridiagonal elimination hit a vanishing pivot.
    SingularSystem,
    /// Local solver resolution too coarse.
    TooFewCells {
        n_cells: usize,
    },
    /// Rate computation needs the horizon to halve between rows.
    NonHalvingEpsilon {
        previous: f64,
        current: f64,
    },
    /// Experiment mode/strategy pairing that has no pre-registered table.
    UnsupportedCombination,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidGeometry { a, b, epsilon } => write!(
                f,
                "invalid geometry: need b > a and 0 < epsilon < (b-a)/2, got a={a}, b={b}, epsilon={epsilon}"
            ),
            Error::MisalignedHorizon { epsilon, h } => write!(
                f,
                "misaligned horizon: epsilon/h = {} is not an integer (epsilon={epsilon}, h={h})",
                epsilon / h
            ),
            Error::MisalignedDomain { length, h } => write!(
                f,
                "misaligned domain: (b-a)/h = {} is not an integer (b-a={length}, h={h})",
                length / h
            ),
            Error::OutsideDomain { x } => write!(f, "point x={x} lies outside the domain closure"),
            Error::NotInNeumannLayer { x } => {
                write!(f, "point x={x} is not in the Neumann layer")
            }
            Error::OutsideFullBall { x } => write!(
                f,
                "point x={x} has a truncated interaction ball; a full ball is required"
            ),
            Error::UnsupportedOrder { order } => {
                write!(f, "kernel moment of order {order} is not available")
            }
            Error::InvalidQuadrature { points } => {
                write!(f, "quadrature order {points} outside supported range 2..=16")
            }
            Error::EmptyFreeSet => write!(f, "constraint elimination left no free unknowns"),
            Error::InvalidConstraints => write!(
                f,
                "constrained nodes must form contiguous leading/trailing blocks"
            ),
            Error::FactorizationFailure { pivot_index } => write!(
                f,
                "factorization failed: nonpositive pivot at reduced index {pivot_index}"
            ),
            Error::SingularSystem => write!(f, "tridiagonal system is singular"),
            Error::TooFewCells { n_cells } => {
                write!(f, "local solver needs at least 4 cells, got {n_cells}")
            }
            Error::NonHalvingEpsilon { previous, current } => write!(
                f,
                "rates need epsilon to halve row to row, got {previous} -> {current}"
            ),
            Error::UnsupportedCombination => write!(
                f,
                "no pre-registered experiment for this mode/strategy combination"
            ),
        }
    }
}

impl core::error::Error for Error {}
