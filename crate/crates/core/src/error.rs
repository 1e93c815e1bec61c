use sympcalc_exact::ParseError;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("chart file: {0}")]
    ChartFormat(String),
    #[error("expression in {field}: {source}")]
    Expression {
        field: String,
        #[source]
        source: ParseError,
    },
    #[error("rep descriptor: {0}")]
    Descriptor(String),
    #[error("not a complex: {0}")]
    NotAComplex(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code: 1 for a failed mathematical invariant, 2 for
    /// anything wrong with the input.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Invariant(_) | Error::NotAComplex(_) => 1,
            _ => 2,
        }
    }
}
