use thiserror::Error;

/// Every failure the library can report. Variants carry enough context to
/// print a useful message; the CLI maps all of them to exit code 3 unless a
/// command treats one as a verdict.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown vertex {0}")]
    UnknownVertex(String),
    #[error("assignment is not surjective: {0} has no preimage")]
    NotSurjective(String),
    #[error("map is not bornologous: ({0}, {1}) is not controlled")]
    NotBornologous(String, String),
    #[error("A and B do not cover the space")]
    NotACover,
    #[error("no bridge between {0} and {1}")]
    NoBridge(String, String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("unsupported cover of the integer line: {0}")]
    UnsupportedCover(String),
    #[error("unsupported region of the integer line: {0}")]
    UnsupportedRegion(String),
    #[error("tail kind {0} is not allowed on this space")]
    IllegalTailKind(String),
    #[error("maps live on different spaces")]
    SpaceMismatch,
    #[error("paths have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),
    #[error("periodicity guard could not be discharged at {0}")]
    GuardUnproved(i64),
    #[error("invalid certificate: {0}")]
    CertificateInvalid(String),
    #[error("junction {0} could not be verified")]
    JunctionUnverified(usize),
    #[error("objects are not composable")]
    ObjectsNotComposable,
    #[error("maps {0} and {1} are not opposite")]
    NotOpposite(usize, usize),
    #[error("merge window is empty (N = {0} > M = {1})")]
    EmptyMergeWindow(i64, i64),
    #[error("junction {0} does not join equal constant tails")]
    NonConstantJunction(usize),
    #[error("tails of maps {0} and {1} are not equal")]
    TailsNotEqual(usize, usize),
    #[error("tails are not controlled by the given family")]
    TailsNotControlled,
    #[error("component containing {0} meets no atlas member")]
    NoAtlasMember(String),
    #[error("words are over different covers")]
    CoverMismatch,
    #[error("move is not applicable: {0}")]
    MoveInapplicable(String),
    #[error("index {0} out of range")]
    IndexOutOfRange(usize),
    #[error("parse error at {0}")]
    Parse(String),
    #[error("validation error: {0}")]
    Validation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
