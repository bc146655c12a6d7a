use alloc::string::String;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("malformed token `{0}`")]
    MalformedToken(String),
    #[error("zero exponent in token `{0}`")]
    ZeroExponent(String),
    #[error("generator x{index} outside rank {rank}")]
    GeneratorOutOfRange { index: u32, rank: u32 },
    #[error("rank must be at least 2, got {0}")]
    InvalidRank(u32),
    #[error("the empty word has no primitive root")]
    EmptyRoot,
    #[error("index {0} out of range")]
    IndexOutOfRange(String),
    #[error("expected {expected} arguments, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("invalid oracle configuration: {0}")]
    Config(&'static str),
}
