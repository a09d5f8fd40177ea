use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("empty graph")]
    EmptyGraph,
    #[error("graph is not connected")]
    Disconnected,
    #[error("graph is not a tree")]
    NotATree,
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("duplicate id `{0}`")]
    DuplicateId(String),
    #[error("edge set is not a spanning tree: {0}")]
    NotSpanning(String),
    #[error("invalid chain: {0}")]
    InvalidChain(String),

    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("group larger than cap {0}")]
    CapExceeded(usize),
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("not a permutation: {0}")]
    NotAPermutation(String),
    #[error("not a subgroup: {0}")]
    NotASubgroup(String),
    #[error("subgroup is not normal")]
    NotNormal,

    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("{n} is not a positive power of {p}")]
    NotPowerOfP { p: u32, n: u64 },
    #[error("index {index} outside 0..{n}")]
    IndexOutOfRange { index: i64, n: u64 },
    #[error("parameter mismatch: {0}")]
    ParameterMismatch(String),
    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unknown factor {0}")]
    UnknownFactor(usize),
    #[error("element outside the declared universe of {0}")]
    OutsideUniverse(String),
    #[error("map is not a well-defined injective homomorphism: {0}")]
    BadEmbedding(String),
    #[error("malformed letter: {0}")]
    MalformedLetter(String),

    #[error("presentation requires finitely generated specs: {0}")]
    NotPresentable(String),
    #[error("group is not enumerable: {0}")]
    NotEnumerable(String),

    #[error("sigma undefined: {p} does not divide {n}")]
    SigmaUndefined { p: u32, n: u64 },
    #[error("element is the identity")]
    IdentityElement,
    #[error("homomorphism check failed: {0}")]
    NotAHomomorphism(String),
    #[error("target group is infinite or too large: {0}")]
    InfiniteTarget(String),
}
