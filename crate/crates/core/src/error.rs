use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not in SL(n, R): {0}")]
    NotSpecialLinear(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("empty input: {0}")]
    EmptyInput(String),

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("not proximal{}: {reason}", location(*element, *degree))]
    NotProximal {
        element: Option<usize>,
        degree: Option<usize>,
        reason: String,
    },

    #[error(
        "separation violated between {first} and {second} at degree {degree}: gap {gap:.3e} < required {required:.3e}"
    )]
    SeparationViolated {
        first: usize,
        second: usize,
        degree: usize,
        gap: f64,
        required: f64,
    },

    /// Neither the analytic bound nor the available evidence settles the
    /// contraction conditions.
    #[error("contraction unverified{}: {reason}", location(*element, Some(*degree)))]
    ContractionUnverified {
        element: Option<usize>,
        degree: usize,
        reason: String,
    },

    /// A concrete point or pair of points breaks the contraction conditions.
    #[error("contraction violated{}: {reason}", location(*element, Some(*degree)))]
    ContractionViolated {
        element: Option<usize>,
        degree: usize,
        reason: String,
    },

    #[error("a Schottky system needs at least 2 generators, got {0}")]
    TooFewGenerators(usize),

    #[error("word is not very reduced at position {position}")]
    NotReduced { position: usize },

    #[error("epsilon {epsilon} must be below the frame limit {limit}")]
    EpsilonTooLarge { epsilon: f64, limit: f64 },

    #[error("ray {0} does not lie in the interior of the Weyl chamber")]
    RayNotInChamber(usize),

    #[error("generator {generator} not certified at power {max_power}")]
    MaxPowerExceeded { generator: usize, max_power: u64 },

    #[error("no rotations in general position after {attempts} attempts")]
    SeparationUnachievable { attempts: usize },

    #[error("cone is not stable under the opposition involution (ray {ray})")]
    ConeNotInvolutionStable { ray: usize },

    #[error("word budget exceeded: {requested} products > {budget}")]
    BudgetExceeded { requested: u128, budget: u128 },

    #[error("degenerate sample: {0}")]
    DegenerateSample(String),

    #[error("i/o error: {0}")]
    Io(String),
}

fn location(element: Option<usize>, degree: Option<usize>) -> String {
    match (element, degree) {
        (Some(e), Some(d)) => format!(" (element {e}, degree {d})"),
        (Some(e), None) => format!(" (element {e})"),
        (None, Some(d)) => format!(" (degree {d})"),
        (None, None) => String::new(),
    }
}

impl Error {
    /// Process exit code: 1 for refutations, 2 for inconclusive checks,
    /// 3 for usage, input and numerical errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NotProximal { .. }
            | Error::SeparationViolated { .. }
            | Error::ContractionViolated { .. } => 1,
            Error::ContractionUnverified { .. }
            | Error::MaxPowerExceeded { .. }
            | Error::SeparationUnachievable { .. } => 2,
            _ => 3,
        }
    }

    /// Attach an element index to errors raised while processing one member
    /// of a generating set.
    pub(crate) fn at_element(self, index: usize) -> Self {
        match self {
            Error::NotProximal { degree, reason, .. } => Error::NotProximal {
                element: Some(index),
                degree,
                reason,
            },
            Error::ContractionUnverified { degree, reason, .. } => Error::ContractionUnverified {
                element: Some(index),
                degree,
                reason,
            },
            Error::ContractionViolated { degree, reason, .. } => Error::ContractionViolated {
                element: Some(index),
                degree,
                reason,
            },
            other => other,
        }
    }

    pub(crate) fn at_degree(self, k: usize) -> Self {
        match self {
            Error::NotProximal { element, reason, .. } => Error::NotProximal {
                element,
                degree: Some(k),
                reason,
            },
            Error::ContractionUnverified { element, reason, .. } => Error::ContractionUnverified {
                element,
                degree: k,
                reason,
            },
            Error::ContractionViolated { element, reason, .. } => Error::ContractionViolated {
                element,
                degree: k,
                reason,
            },
            Error::SeparationViolated {
                first,
                second,
                gap,
                required,
                ..
            } => Error::SeparationViolated {
                first,
                second,
                degree: k,
                gap,
                required,
            },
            other => other,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::InvalidInput(e.to_string())
    }
}
