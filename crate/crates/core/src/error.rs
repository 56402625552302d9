use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ring mismatch: {0}")]
    RingMismatch(String),
    #[error("invalid ring: {0}")]
    InvalidRing(String),
    #[error("syntax error at column {col}: {msg}")]
    Syntax { col: usize, msg: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not divisible by {1}")]
    NotDivisible(String, String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("not divisible in jets: {0}")]
    NotDivisibleInJets(String),
    #[error("singular Jacobian: {0}")]
    SingularJacobian(String),
    #[error("Newton iteration did not converge: {0}")]
    NoConvergence(String),
    #[error("no regular pair found: {0}")]
    NoRegularPair(String),
    #[error("the bound is too small")]
    BoundTooSmall,
    #[error("step {step}: {msg}")]
    Step { step: u32, msg: String },
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn step(step: u32, msg: impl Into<String>) -> Error {
        Error::Step { step, msg: msg.into() }
    }
}
