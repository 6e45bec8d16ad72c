use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("an algebra needs at least one atom")]
    EmptyAlgebra,
    #[error("duplicate atom name `{0}`")]
    DuplicateAtom(String),
    #[error("unknown atom `{0}`")]
    UnknownAtom(String),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("duplicate element name `{0}`")]
    DuplicateElement(String),
    #[error("operands belong to different algebras")]
    MixedAlgebras,
    #[error("restriction to the zero element is undefined")]
    ZeroRestriction,
    #[error("element {0} is not an atom")]
    NotAnAtom(String),
    #[error("not a partition of unity: {0}")]
    NotAPartition(String),
    #[error("table is not a Boolean algebra: {0}")]
    NotBooleanAlgebra(String),
    #[error("algebra with {atoms} atoms is too large for {what}")]
    TooManyAtoms { atoms: usize, what: &'static str },
    #[error("duplicate key in boolean-valued set literal")]
    DuplicateKey,
    #[error("enumeration budget exceeded: {count} sets required, budget is {budget}")]
    BudgetExceeded { count: String, budget: u64 },
    #[error("unbound identifier `{0}`")]
    Unbound(String),
    #[error("length mismatch: {parts} parts but {pieces} pieces")]
    LengthMismatch { parts: usize, pieces: usize },
    #[error("star profile has no entry for the top element")]
    MissingTop,
    #[error("family `{0}` has no members")]
    EmptyFamily(String),
    #[error("member `{member}`: {source}")]
    Member {
        member: String,
        #[source]
        source: Box<Error>,
    },
    #[error("invalid probability space: {0}")]
    InvalidSpace(String),
    #[error("random reals live on different probability spaces")]
    MixedSpaces,
    #[error("random real has {got} values but the space has {expected} worlds")]
    WrongArity { expected: usize, got: usize },
    #[error("{line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("{line}:{col}: {source}")]
    Located {
        line: usize,
        col: usize,
        #[source]
        source: Box<Error>,
    },
    #[error("duplicate definition of {kind} `{name}`")]
    DuplicateDefinition { kind: &'static str, name: String },
}
