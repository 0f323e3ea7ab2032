use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid generator name `{0}`")]
    InvalidGenerator(String),
    #[error("generator `{0}` listed twice")]
    DuplicateGenerator(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("word is not in the form the monomial order expects")]
    VariantMismatch,
    #[error("monomial order `{0}` does not apply to this ring")]
    OrderMismatch(&'static str),
    #[error("operands live in different rings")]
    ContextMismatch,
    #[error("the zero polynomial has no leading term")]
    ZeroPolynomial,
    #[error("the unit word has no leading derivative term")]
    UnitWord,
    #[error("closed-form leading terms are only available for deg-lex orders")]
    LexUnsupported,
    #[error("expected a polynomial in order-0 variables")]
    PositiveOrder,
    #[error("monomial `{0}` is not below the ambiguity word")]
    NotBelow(String),
    #[error("bounds too large: {0} words exceed the limit of {1}")]
    BoundOverflow(usize, usize),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}
