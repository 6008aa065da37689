use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("relation has a nonzero constant term: {0}")]
    RelationHasUnit(String),
    #[error("truncation order must be at least 1 (got {0})")]
    BadTruncation(u32),
    #[error("variable weights must be positive and at most the truncation order: {0}")]
    BadWeight(String),
    #[error("elements live over different rings")]
    RingMismatch,
    #[error("element is not a unit (zero constant term)")]
    NotAUnit,
    #[error("cone is not strongly convex")]
    NotStronglyConvex,
    #[error("area functional is not positive on generator {0}")]
    NonPositiveArea(String),
    #[error("phase B({generator}) = {value} is not a multiple of 1/4")]
    IrrationalPhase { generator: String, value: String },
    #[error("length mismatch: {0}")]
    LengthMismatch(String),
    #[error("arity mismatch: expected {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("unknown identifier `{0}`")]
    UnknownIdentifier(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("differential does not square to zero: {0}")]
    DifferentialNotSquareZero(String),
    #[error("coefficient has a constant term: {0}")]
    ConstantTermPresent(String),
    #[error("algebra is not minimal (l1 != 0)")]
    NotMinimal,
    #[error("order-one part is not closed: {0}")]
    OrderOnePartNotClosed(String),
    #[error("ring has relations; a formal power series ring is required")]
    RingHasRelations,
    #[error("element is not Maurer-Cartan: {0}")]
    ObstructionMismatch(String),
    #[error("component not invertible: {0}")]
    ComponentNotInvertible(String),
    #[error("invalid bounding cochain: {0}")]
    InvalidCochain(String),
    #[error("pushforward is not a bounding cochain: {0}")]
    PushforwardNotBounding(String),
    #[error("reduction mismatch: {0}")]
    ReductionMismatch(String),
    #[error("not Maurer-Cartan: {0}")]
    NotMaurerCartan(String),
    #[error("Kodaira-Spencer map is not surjective: {0}")]
    KsNotSurjective(String),
    #[error("obstruction at order {order} escapes the image of the Kodaira-Spencer map: {detail}")]
    ObstructionEscapes { order: u32, detail: String },
    #[error("ring map is not well defined: {0}")]
    RingMapIllDefined(String),
    #[error("invalid structure: {0}")]
    InvalidStructure(String),
    #[error("size limit exceeded: {0}")]
    Limit(String),
}

pub type Result<T> = std::result::Result<T, Error>;
