use core::fmt;

/// Errors raised by the analytic and simulation routines.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the function.
    Domain {
        /// Name of the offending argument.
        what: &'static str,
        /// The rejected value.
        value: f64,
    },
    /// A collection argument was empty where at least one element is needed.
    Empty(&'static str),
    /// Two exponential rates are too close for a partial-fraction form.
    DegenerateRates {
        /// Index of the first rate of the colliding pair.
        first: usize,
        /// Index of the second rate of the colliding pair.
        second: usize,
    },
    /// The operation does not apply to the given scenario shape.
    Misuse(&'static str),
    /// An adversary index does not exist in the scenario.
    AdversaryIndex {
        /// Requested index.
        index: usize,
        /// Number of adversaries in the scenario.
        count: usize,
    },
    /// Inclusion-exclusion over more adversaries than supported.
    TooManyAdversaries {
        /// Requested adversary count.
        count: usize,
        /// Largest supported count.
        max: usize,
    },
    /// The block-level targets cannot be met by any raw bit error rate.
    NoValidTransformation(&'static str),
    /// The legitimate channel vector is zero or has no null space.
    NoNullSpace,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain { what, value } => write!(f, "{what} out of domain: {value}"),
            Error::Empty(what) => write!(f, "{what} must not be empty"),
            Error::DegenerateRates { first, second } => {
                write!(f, "rates {first} and {second} coincide; closed form is ill-conditioned")
            }
            Error::Misuse(msg) => write!(f, "misuse: {msg}"),
            Error::AdversaryIndex { index, count } => {
                write!(f, "adversary index {index} out of range (scenario has {count})")
            }
            Error::TooManyAdversaries { count, max } => {
                write!(f, "{count} adversaries exceed the supported maximum of {max}")
            }
            Error::NoValidTransformation(msg) => write!(f, "no valid threshold transformation: {msg}"),
            Error::NoNullSpace => write!(f, "legitimate channel has no usable null space"),
        }
    }
}

impl core::error::Error for Error {}

pub(crate) fn domain(what: &'static str, value: f64) -> Error {
    Error::Domain { what, value }
}
