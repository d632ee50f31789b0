use crate::arith::Rational;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("series does not terminate: no numerator parameter is a nonpositive integer")]
    NonTerminating,

    #[error("denominator parameter {param} vanishes before the series terminates at index {terminate}")]
    DenominatorPole { param: Rational, terminate: usize },

    #[error("division by zero while computing {0}")]
    DivisionByZero(String),

    #[error("expected {expected} parameters, got {found}")]
    FamilyMismatch {
        expected: &'static str,
        found: &'static str,
    },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("degree {deg} is outside 0..={max}")]
    DegreeOutOfRange { deg: usize, max: usize },

    #[error("polynomial of degree {deg} vanishes at the Christoffel parameter")]
    ZeroAtNu { deg: usize },

    #[error("evaluation point {x} lies on the Christoffel parameter (Λ(x) = Λ(ν))")]
    SupportCollision { x: Rational },

    #[error("inadmissible parameters: {0}")]
    InadmissibleParams(String),

    #[error("product b[{index}]·c[{index}] is negative; symmetric form would be complex")]
    NegativeProduct { index: usize },

    #[error("point {0} is not in the support")]
    UnsupportedPoint(String),

    #[error("eigensolver did not converge for eigenvalue {index} after {iterations} iterations")]
    NoConvergence { index: usize, iterations: usize },

    #[error("parse error at {position}: {message}")]
    Parse { position: String, message: String },

    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl Error {
    pub(crate) fn parse(position: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            position: position.into(),
            message: message.into(),
        }
    }
}
