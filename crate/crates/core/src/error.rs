use std::fmt;

/// Errors surfaced by the solver stack.
///
/// Batch execution captures these per problem instead of aborting a run;
/// the optimizer converts them into fitness penalties.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Airfoil or genome fails a geometric validity check.
    InvalidGeometry(String),
    /// A `.dat` file could not be parsed as a closed airfoil contour.
    MalformedFile(String),
    /// Field point coincides with a panel endpoint where the kernel is singular.
    EndpointSingularity,
    /// LU factorization hit a (numerically) zero pivot.
    SingularSystem,
    /// Surface vortex strengths never change sign, so no attachment point exists.
    NoStagnationPoint,
    /// Edge-velocity distribution is identically zero.
    DegenerateDistribution,
    /// Genomes with different coefficient layouts cannot be recombined.
    ShapeMismatch,
    /// A batch run was requested over zero problems.
    EmptyWorkload,
    /// Scheduling parameters are out of range for the given workload.
    InvalidConfig(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidGeometry(why) => write!(f, "invalid geometry: {why}"),
            Error::MalformedFile(why) => write!(f, "malformed airfoil file: {why}"),
            Error::EndpointSingularity => {
                write!(f, "field point coincides with a panel endpoint")
            }
            Error::SingularSystem => write!(f, "linear system is singular"),
            Error::NoStagnationPoint => {
                write!(f, "no stagnation point found on the surface")
            }
            Error::DegenerateDistribution => {
                write!(f, "edge-velocity distribution is identically zero")
            }
            Error::ShapeMismatch => write!(f, "genome coefficient counts differ"),
            Error::EmptyWorkload => write!(f, "workload contains no problems"),
            Error::InvalidConfig(why) => write!(f, "invalid configuration: {why}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
