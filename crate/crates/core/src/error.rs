use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("singular matrix")]
    Singular,
    #[error("algebra is not definite: a = {a}, b = {b}")]
    Indefinite { a: String, b: String },
    #[error("basis does not have rank 4")]
    RankDeficient,
    #[error("lattice is not closed under multiplication: {0}")]
    NotClosed(String),
    #[error("1 is not in the lattice")]
    NoUnit,
    #[error("element with non-integral trace or norm: {0}")]
    NotIntegral(String),
    #[error("order is not maximal (reduced discriminant {disc}, algebra discriminant {alg})")]
    NotMaximal { disc: String, alg: String },
    #[error("the different is not principal")]
    NotPrincipal,
    #[error("lattice is not even")]
    NotEven,
    #[error("subgroup is not isotropic")]
    NotIsotropic,
    #[error("matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("isometry testing supports rank <= 4, got {0}")]
    RankUnsupported(usize),
    #[error("invalid pi: {0}")]
    BadPi(String),
    #[error("invalid lambda: {0}")]
    BadLambda(String),
    #[error("no isotropic O-stable glue subgroup found at p = {0}")]
    GlueNotFound(u64),
    #[error("lattice carries no O-basis")]
    NoObasis,
    #[error("no embedding of the ternary lattice found: {0}")]
    EmbeddingNotFound(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("internal check failed: {0}")]
    Check(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Returns `Error::Check` with the formatted message unless `cond` holds.
macro_rules! ensure {
    ($cond:expr, $($arg:tt)+) => {
        if !$cond {
            return Err($crate::error::Error::Check(format!($($arg)+)));
        }
    };
}
pub(crate) use ensure;
