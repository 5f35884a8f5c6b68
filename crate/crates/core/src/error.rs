use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("variable lists differ: [{left}] vs [{right}]")]
    VariableMismatch { left: String, right: String },

    #[error("index {index} out of range (length {len})")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("unknown identifier `{name}` at position {pos}")]
    UnknownIdentifier { name: String, pos: usize },

    #[error("shape mismatch in {block}: {msg}")]
    Shape { block: String, msg: String },

    #[error("inconsistent degree shift for generator `{generator}`: expected {expected}, found {found}")]
    DegreeShift {
        generator: String,
        expected: i32,
        found: i32,
    },

    #[error("incompatible bundles: {0}")]
    IncompatibleBundles(String),

    #[error("unsupported base: {0}")]
    UnsupportedBase(String),

    #[error("complex is not regular: {0}")]
    NotRegular(String),

    #[error("complex is not exact: {0}")]
    NotExact(String),

    #[error("not a Lie algebra extension: {0}")]
    NotExtension(String),

    #[error("not an action algebroid: {0}")]
    NotActionAlgebroid(String),

    #[error("degree {degree} exceeds the enumeration bound {bound}")]
    DegreeBound { degree: usize, bound: usize },

    #[error("invalid input: {0}")]
    Invalid(String),
}
