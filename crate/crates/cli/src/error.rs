use std::fmt;

use b3tower::Error;

/// Errors that end an invocation before a report is produced.
#[derive(Debug)]
pub enum CliError {
    /// Malformed or inconsistent input: exit code 2.
    Input(String),
    /// A core failure, classified by [`CliError::exit_code`].
    Core(Error),
    Io(std::io::Error),
}

impl CliError {
    /// 1 for a failed construction or certificate, 2 for bad input, 3 for
    /// an internal invariant violation.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) | CliError::Io(_) => 2,
            CliError::Core(e) => match e {
                Error::ClaimFailed { .. }
                | Error::Inconsistent
                | Error::Underdetermined(_)
                | Error::DerivativeObstruction { .. }
                | Error::Nonlinear(_)
                | Error::NotInvariant
                | Error::NotBasic(_) => 1,
                Error::Invariant(_) | Error::NotInverse(_) | Error::ConstraintResidue(_) => 3,
                _ => 2,
            },
        }
    }

    pub fn kind(&self) -> &'static str {
        match self.exit_code() {
            1 => "failure",
            3 => "invariant",
            _ => "input",
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) => f.write_str(m),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Input("x".into()).exit_code(), 2);
        assert_eq!(CliError::Core(Error::UnknownModel("x".into())).exit_code(), 2);
        assert_eq!(CliError::Core(Error::Inconsistent).exit_code(), 1);
        assert_eq!(CliError::Core(Error::Invariant("x".into())).exit_code(), 3);
    }
}
