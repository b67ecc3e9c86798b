//! Error reporting and the exit-code contract.

use std::fmt;

use qfd_core::Error;

pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICS: i32 = 3;
pub const EXIT_PHYSICS: i32 = 4;

#[derive(Debug, Clone, PartialEq)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    pub fn config(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_CONFIG,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidParameter(_) | Error::UnknownPreset { .. } => EXIT_CONFIG,
            Error::Domain(_) | Error::NoConvergence { .. } | Error::NoBracket { .. } | Error::HorizonExceeded { .. } => {
                EXIT_NUMERICS
            }
            Error::Physics(_) => EXIT_PHYSICS,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}
