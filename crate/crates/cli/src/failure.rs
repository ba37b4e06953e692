//! Error-to-exit-code mapping: 2 usage, 3 data, 4 numerical/convergence.

use std::fmt;

#[derive(Debug)]
pub enum CliFailure {
    Usage(String),
    Data(String),
    Numerical(String),
}

pub type CliResult<T> = Result<T, CliFailure>;

impl CliFailure {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliFailure::Usage(_) => 2,
            CliFailure::Data(_) => 3,
            CliFailure::Numerical(_) => 4,
        }
    }
}

impl fmt::Display for CliFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliFailure::Usage(m) => write!(f, "usage error: {m}"),
            CliFailure::Data(m) => write!(f, "data error: {m}"),
            CliFailure::Numerical(m) => write!(f, "numerical error: {m}"),
        }
    }
}

impl From<garmex_core::Error> for CliFailure {
    fn from(err: garmex_core::Error) -> Self {
        if err.is_data_error() {
            CliFailure::Data(err.to_string())
        } else {
            CliFailure::Numerical(err.to_string())
        }
    }
}

impl From<std::io::Error> for CliFailure {
    fn from(err: std::io::Error) -> Self {
        CliFailure::Data(err.to_string())
    }
}
