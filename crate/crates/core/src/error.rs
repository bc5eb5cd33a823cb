use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed letter {0}: generator indices start at 1")]
    BadLetter(i64),

    #[error("generator {index} out of range (presentation has {count} generators)")]
    GeneratorOutOfRange { index: usize, count: usize },

    #[error("relator {index} out of range (presentation has {count} relators)")]
    RelatorOutOfRange { index: usize, count: usize },

    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("duplicate generator name `{0}`")]
    DuplicateGenerator(String),

    #[error("undeclared generator `{0}`")]
    UndeclaredGenerator(String),

    #[error("invalid move: {0}")]
    InvalidMove(String),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not unimodular (determinant {det})")]
    NotUnimodular { det: String },

    #[error("presentation is not balanced ({generators} generators, {relators} relators)")]
    NotBalanced { generators: usize, relators: usize },

    #[error("presentation is not perfect (determinant {det}, invariant factors {factors})")]
    NotPerfect { det: String, factors: String },

    #[error("invalid ordering witness: {0}")]
    BadWitness(String),

    #[error("malformed matrix text: {0}")]
    MatrixFormat(String),

    #[error("malformed certificate at line {line}: {message}")]
    CertificateFormat { line: usize, message: String },
}
