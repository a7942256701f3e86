use std::fmt::Display;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad configuration or arguments; exit code 2.
    #[error("config error: {0}")]
    Config(String),
    /// Failure while running; exit code 3.
    #[error("runtime error: {0}")]
    Runtime(String),
}

impl CliError {
    pub fn config(section: &str, err: impl Display) -> Self {
        CliError::Config(format!("{section}: {err}"))
    }

    pub fn runtime(err: impl Display) -> Self {
        CliError::Runtime(err.to_string())
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Runtime(_) => 3,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Runtime(err.to_string())
    }
}

impl From<langmuir_mc::Error> for CliError {
    fn from(err: langmuir_mc::Error) -> Self {
        CliError::Runtime(err.to_string())
    }
}
