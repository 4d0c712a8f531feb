use thiserror::Error;

/// Errors raised by the algebra kernels.
///
/// Every variant maps onto one of the CLI exit codes through
/// [`Error::exit_code`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Operands live in different value groups, or a vector has the wrong length.
    #[error("structural mismatch: {0}")]
    Structural(String),

    /// The stored precision cannot decide the requested quantity.
    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),

    /// An input lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A dual number with zero real part was inverted.
    #[error("non-unit: {0}")]
    NonUnit(String),

    /// The operation needs a ℤ-less value group.
    #[error("unsupported group: {0}")]
    UnsupportedGroup(String),

    /// The operation would need an algebraic extension of the coefficient field.
    #[error("unsupported extension: {0}")]
    UnsupportedExtension(String),

    /// A coefficient uses a transcendental with no registered derivative.
    #[error("undeclared generator th{0}")]
    UndeclaredGenerator(usize),

    /// A stated hypothesis of an identity checker does not hold.
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// Elements of Q have no neutralizer.
    #[error("no neutralizer: {0}")]
    NoNeutralizer(String),

    /// A search window produced no candidates.
    #[error("empty window: {0}")]
    EmptyWindow(String),

    /// Text input could not be parsed; `offset` is a byte offset into the input.
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    /// A checker found every identity satisfied where one must fail.
    #[error("soundness alarm: {0}")]
    SoundnessAlarm(String),

    /// Configuration or model file problems.
    #[error("model error: {0}")]
    Model(String),
}

impl Error {
    /// Stable machine-readable code used in structured error reports.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Structural(_) => "structural",
            Error::InsufficientPrecision(_) => "precision",
            Error::Domain(_) => "domain",
            Error::NonUnit(_) => "non_unit",
            Error::UnsupportedGroup(_) => "unsupported_group",
            Error::UnsupportedExtension(_) => "unsupported_extension",
            Error::UndeclaredGenerator(_) => "undeclared_generator",
            Error::Precondition(_) => "precondition",
            Error::NoNeutralizer(_) => "no_neutralizer",
            Error::EmptyWindow(_) => "empty_window",
            Error::Parse { .. } => "parse",
            Error::SoundnessAlarm(_) => "soundness_alarm",
            Error::Model(_) => "model",
        }
    }

    /// Process exit code: 2 for domain errors, 3 for precision, 4 for parse.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InsufficientPrecision(_) => 3,
            Error::Parse { .. } => 4,
            _ => 2,
        }
    }

    pub(crate) fn precision(msg: impl Into<String>) -> Self {
        Error::InsufficientPrecision(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
