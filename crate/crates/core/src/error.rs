use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("malformed cycle notation: {0}")]
    MalformedCycles(String),
    #[error("point {point} out of range for degree {degree}")]
    PointOutOfRange { point: usize, degree: usize },
    #[error("point {0} repeated in cycle notation")]
    RepeatedPoint(usize),
    #[error("image list is not a permutation: {0}")]
    NotAPermutation(String),
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },
    #[error("group order {order} exceeds the enumeration bound {bound}")]
    OrderTooLarge { order: String, bound: usize },
    #[error("group of order {order} exceeds the size bound {bound} for {what}")]
    SizeBoundExceeded { what: &'static str, order: usize, bound: usize },
    #[error("degree {degree} exceeds the degree cap {cap}")]
    DegreeCapExceeded { degree: usize, cap: usize },
    #[error("generator images do not define a homomorphism")]
    NotAHomomorphism,
    #[error("homomorphism is not injective")]
    NotInjective,
    #[error("homomorphism is not surjective")]
    NotSurjective,
    #[error("map is not an automorphism: {0}")]
    NotAnAutomorphism(String),
    #[error("subgroup is not invariant under the automorphism")]
    SubgroupNotInvariant,
    #[error("element is not in the group: {0}")]
    NotAMember(String),
    #[error("invalid partial isomorphism: {0}")]
    InvalidPartialIso(String),
    #[error("embedding is not equivariant: {0}")]
    NotEquivariant(String),
    #[error("hypothesis failed: {0}")]
    HypothesisFailed(String),
    #[error("codomain mismatch: {0}")]
    CodomainMismatch(String),
    #[error("invalid semidirect action: {0}")]
    InvalidAction(String),
    #[error("tower depth {depth} exceeds the maximum {max}")]
    DepthTooLarge { depth: usize, max: usize },
    #[error("unknown catalog group `{0}`")]
    UnknownCatalogGroup(String),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("mismatched automorphism counts: {left} vs {right}")]
    MismatchedSystems { left: usize, right: usize },
    #[error("construction check failed: {0}")]
    CheckFailed(String),
    #[error("stage `{stage}`: {source}")]
    Stage {
        stage: String,
        #[source]
        source: Box<Error>,
    },
    #[error("certificate error: {0}")]
    Certificate(String),
}

impl Error {
    pub(crate) fn at_stage(self, stage: impl Into<String>) -> Error {
        Error::Stage {
            stage: stage.into(),
            source: Box::new(self),
        }
    }
}

pub(crate) trait StageExt<T> {
    fn stage(self, stage: &str) -> Result<T>;
}

impl<T> StageExt<T> for Result<T> {
    fn stage(self, stage: &str) -> Result<T> {
        self.map_err(|e| e.at_stage(stage))
    }
}
