use thiserror::Error;

/// Every failure the engine can report.
///
/// Verification failures carry a witness (usually a nonzero normal form)
/// so that callers can show exactly which identity broke.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at column {column}: {message}")]
    Syntax { column: usize, message: String },

    #[error("unknown variable `{name}` at column {column}")]
    UnknownVariable { name: String, column: usize },

    #[error("invalid number field: {0}")]
    InvalidField(String),

    #[error("invalid Galois group: {0}")]
    InvalidGroup(String),

    #[error("the given elements are not a basis of the field over the fixed field")]
    SingularBasis,

    #[error("denominator vanishes: {0}")]
    ZeroDenominator(String),

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("the defining equations generate the unit ideal (empty variety)")]
    EmptyVariety,

    #[error("ring mismatch: {0}")]
    RingMismatch(String),

    #[error("cocycle violated for ({sigma1}, {sigma2}) in component {component}: witness {witness}")]
    CocycleViolation {
        sigma1: String,
        sigma2: String,
        component: usize,
        witness: String,
    },

    #[error("f_{sigma} does not map X into its conjugate: generator {generator} leaves witness {witness}")]
    NotIntoConjugate {
        sigma: String,
        generator: usize,
        witness: String,
    },

    #[error("morphism is not compatible with the datum at {sigma}: witness {witness}")]
    MorphismIncompatible { sigma: String, witness: String },

    #[error("morphism does not land in the target variety: generator {generator} leaves witness {witness}")]
    NotIntoTarget { generator: usize, witness: String },

    #[error("an explicit inverse is required but none is available")]
    MissingInverse,

    #[error("automorphism set is not closed under conjugation by {sigma}")]
    ConjugationNotClosed { sigma: String },

    #[error("result is not defined over the fixed field: {0}")]
    NotKRational(String),

    #[error("certificate `{certificate}` failed: {detail}")]
    CertificateFailed { certificate: String, detail: String },

    #[error("invalid input: {0}")]
    Input(String),
}

impl Error {
    /// Resource exhaustion signals intractability rather than bad input.
    pub fn is_resource_limit(&self) -> bool {
        matches!(self, Error::ResourceLimit(_))
    }

    /// True for failures of a mathematical check (as opposed to malformed
    /// input or exhausted budgets).
    pub fn is_verification_failure(&self) -> bool {
        matches!(
            self,
            Error::CocycleViolation { .. }
                | Error::NotIntoConjugate { .. }
                | Error::MorphismIncompatible { .. }
                | Error::NotIntoTarget { .. }
                | Error::ConjugationNotClosed { .. }
                | Error::NotKRational(_)
                | Error::CertificateFailed { .. }
                | Error::ZeroDenominator(_)
                | Error::MissingInverse
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
