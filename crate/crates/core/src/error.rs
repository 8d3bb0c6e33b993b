use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("alphabet must contain at least one letter")]
    EmptyAlphabet,
    #[error("letter {0:?} appears twice in the alphabet")]
    DuplicateLetter(char),
    #[error("letter {0:?} cannot be used in an alphabet")]
    ReservedLetter(char),
    #[error("unknown letter {letter:?} at row {row}, column {col}")]
    UnknownLetter { letter: char, row: usize, col: usize },
    #[error("ragged rows: row {row} has length {found}, expected {expected}")]
    RaggedRows { row: usize, expected: usize, found: usize },
    #[error("rectangle {0} is not contained in the pattern support")]
    RectOutsideSupport(String),
    #[error("operation requires a binary alphabet, got {0:?}")]
    NonBinary(String),
    #[error("alphabets differ: {0:?} vs {1:?}")]
    AlphabetMismatch(String, String),
    #[error("malformed pattern text: {0}")]
    Parse(String),
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error("infeasible parameters: {0}")]
    Infeasible(String),
    #[error("unsatisfiable: {0}")]
    Unsatisfiable(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Parameter combinations that are well-formed but outside what the
    /// exact searches can handle.
    pub fn is_infeasible(&self) -> bool {
        matches!(self, Error::Infeasible(_))
    }
}
