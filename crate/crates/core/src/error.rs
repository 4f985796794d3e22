use thiserror::Error;

/// Errors surfaced by the engine. Contract violations that a caller can
/// trigger with bad input are errors; internal invariant breakage panics.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),
    #[error("field mismatch: {0}")]
    FieldMismatch(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modules are defined over different algebras")]
    AlgebraMismatch,
    #[error("subspace is not invariant under the action")]
    NotInvariant,
    #[error("ideal is not two-sided")]
    NotTwoSided,
    #[error("module is not semisimple")]
    NotSemisimple,
    #[error("map is not injective")]
    NotInjective,
    #[error("map does not intertwine the actions")]
    NotIntertwiner,
    #[error("operation is undefined on the zero module")]
    ZeroModule,
    #[error("Loewy length {0} exceeds 2")]
    LoewyLengthTooLarge(usize),
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("radical candidate failed certification: {0}")]
    RadicalCertification(String),
    #[error("malformed json: {0}")]
    Json(String),
    #[error("schema violation: {0}")]
    Schema(String),
    #[error("axiom violation: {0}")]
    Axiom(String),
}

pub type Result<T> = std::result::Result<T, Error>;
