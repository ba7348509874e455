use alloc::string::String;
use core::fmt;

/// Errors raised by the algebra and dynamics engines.
#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    /// Two objects that must live in the same ℝ^q do not.
    DimensionMismatch { expected: usize, found: usize },
    /// The linear part fails the relative determinant gate.
    NearSingular { det: f64, threshold: f64 },
    /// A word refers to a generator index outside the generator set.
    BadIndex { index: usize, rank: usize },
    /// The fixed-point equation has infinitely many solutions.
    NonUnique,
    /// The fixed-point equation is inconsistent.
    NoFixedPoint,
    /// An iterative eigenvalue routine hit its iteration cap.
    ConvergenceFailure { iterations: usize },
    /// A configured enumeration or point cap would be exceeded.
    BudgetExceeded { what: &'static str, cap: usize },
    /// All input points coincide.
    Degenerate,
    /// A set that must be nonempty is empty.
    EmptySet,
    /// A relator of the presentation does not map to the identity.
    RelatorViolated { relator: String, residual: f64 },
    /// A report was produced from a different generator set.
    MismatchedGroup { expected: u64, found: u64 },
    /// Interpolation points are not affinely independent.
    DegenerateTestSet,
    /// Generator names must be unique.
    DuplicateName(String),
    /// A name is not defined where it is referenced.
    UnknownName(String),
    /// A presentation generator has no image under the representation.
    Unassigned(String),
    /// A precondition on a scalar argument was violated.
    InvalidArgument(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Self::NearSingular { det, threshold } => {
                write!(f, "near-singular linear part: |det| = {det:e} <= {threshold:e}")
            }
            Self::BadIndex { index, rank } => {
                write!(f, "generator index {index} out of range for rank {rank}")
            }
            Self::NonUnique => f.write_str("fixed point is not unique"),
            Self::NoFixedPoint => f.write_str("map has no fixed point"),
            Self::ConvergenceFailure { iterations } => {
                write!(f, "eigenvalue iteration did not converge in {iterations} steps")
            }
            Self::BudgetExceeded { what, cap } => write!(f, "budget exceeded: {what} cap {cap}"),
            Self::Degenerate => f.write_str("degenerate input: all points coincide"),
            Self::EmptySet => f.write_str("empty point set"),
            Self::RelatorViolated { relator, residual } => {
                write!(f, "relator {relator} maps to a non-identity element (residual {residual:e})")
            }
            Self::MismatchedGroup { expected, found } => {
                write!(f, "report was computed for generator set {found:016x}, foliation has {expected:016x}")
            }
            Self::DegenerateTestSet => f.write_str("test points are not affinely independent"),
            Self::DuplicateName(name) => write!(f, "duplicate generator name {name:?}"),
            Self::UnknownName(name) => write!(f, "unknown generator name {name:?}"),
            Self::Unassigned(name) => write!(f, "presentation generator {name:?} has no image"),
            Self::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}
