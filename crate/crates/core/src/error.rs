use thiserror::Error;

/// Errors raised across the library. Variants carry enough context to point at
/// the offending edge, cusp or argument.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("triangulation has no triangles")]
    EmptyInput,
    #[error("edge `{label}` occupies {count} side-slots (expected 2)")]
    EdgeDegree { label: String, count: usize },
    #[error("gluing does not close up into a surface: {0}")]
    NonsurfaceGluing(String),
    #[error("edge `{0}` has both side-slots in one triangle")]
    SelfFolded(String),
    #[error("no weight given for edge `{0}`")]
    MissingWeight(String),
    #[error("lambda-length of edge `{0}` is not positive")]
    NonpositiveLambda(String),
    #[error("weights are not balanced at cusp {cusp}")]
    Unbalanced { cusp: usize },
    #[error("sequence lengths differ ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("boundary points coincide")]
    CoincidentPoints,
    #[error("singular argument {0}")]
    SingularArgument(f64),
    #[error("argument {value} outside {range}")]
    OutOfRange { value: f64, range: &'static str },
    #[error("parameter `{name}` must be positive (got {value})")]
    NonpositiveParam { name: &'static str, value: f64 },
    #[error("point {0}+{1}i is not in the upper half plane")]
    NotInUpperHalfPlane(f64, f64),
    #[error("numerical blow-up while developing: {0}")]
    NumericBlowup(String),
    #[error("development does not cover cusp {0}")]
    IncompleteDevelopment(usize),
    #[error("cusp {0} carries no horocycle")]
    UndecoratedCusp(usize),
    #[error("seed line ({0}, {1}, {2}) is not a primitive tessellation line")]
    SeedNotPrimitive(i64, i64, i64),
    #[error("cutoff {0} admits no terms")]
    CutoffTooSmall(f64),
    #[error("unsupported group `{0}`")]
    UnsupportedGroup(String),
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
