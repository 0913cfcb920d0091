use thiserror::Error;

pub type Result<T> = std::result::Result<T, PosetError>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PosetError {
    #[error("relations close into a cycle through element {0}")]
    Cycle(usize),
    #[error("element index {index} out of range for a poset on {n} points")]
    Index { index: usize, n: usize },
    #[error("posets must have at least one element")]
    ZeroSize,
    #[error("{n} elements exceeds the supported cap of {cap}")]
    SizeCap { n: usize, cap: usize },
    #[error("duplicate value {0} in permutation")]
    DuplicateValue(i64),
    #[error("relabeling is not a bijection")]
    NotPermutation,
    #[error("elements {0} and {1} are already comparable")]
    AlreadyComparable(usize, usize),
    #[error("the poset is a chain")]
    Chain,
    #[error("more than {cap} linear extensions; raise the enumeration cap")]
    CapExceeded { cap: u64 },
    #[error("base has {base} points but {components} components were given")]
    ArityMismatch { base: usize, components: usize },
    #[error("elements {0} and {1} do not lie in the same component")]
    Component(usize, usize),
    #[error("locality violated: {0}")]
    RemarkViolation(String),
    #[error("identity violated (this is a bug): {0}")]
    LemmaViolation(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("invalid witness: {0}")]
    InvalidWitness(String),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}
