use std::fmt;

use lexmv_core::Error;

/// Exit code for usage and input errors.
pub const EXIT_INPUT: i32 = 2;
/// Exit code for failures while running a valid request.
pub const EXIT_RUNTIME: i32 = 3;

/// A failed command, classified by exit code.
#[derive(Debug)]
pub enum Failure {
    Input(String),
    Runtime(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Input(_) => EXIT_INPUT,
            Failure::Runtime(_) => EXIT_RUNTIME,
        }
    }

    pub fn input(msg: impl Into<String>) -> Self {
        Failure::Input(msg.into())
    }

    pub fn runtime(msg: impl Into<String>) -> Self {
        Failure::Runtime(msg.into())
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Input(m) | Failure::Runtime(m) => f.write_str(m),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::Parse { .. }
            | Error::Config(_)
            | Error::UnknownPredicate(_)
            | Error::UnknownMeasure(_)
            | Error::InvalidTrace(_)
            | Error::TimeOutOfRange { .. }
            | Error::SingleIntervalScheme
            | Error::EnumerationTooLarge { .. }
            | Error::Geometry(_) => Failure::Input(msg),
            Error::EmptyOperands | Error::ContractViolation(_) | Error::Dynamics(_) | Error::NoValidSample | Error::Mpc { .. } => {
                Failure::Runtime(msg)
            }
        }
    }
}

pub type CmdResult<T> = Result<T, Failure>;
