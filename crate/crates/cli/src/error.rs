use std::path::PathBuf;

use okounkov_core::error::{Error as CoreError, ErrorClass};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("missing --geometry")]
    MissingGeometry,

    #[error(transparent)]
    Core(#[from] CoreError),
}

impl CliError {
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Io { .. } => "io",
            CliError::MissingGeometry => "missing-geometry",
            CliError::Core(e) => e.code(),
        }
    }

    pub fn class(&self) -> &'static str {
        match self {
            CliError::Io { .. } => "io",
            CliError::MissingGeometry => "parse",
            CliError::Core(e) => match e.class() {
                ErrorClass::Parse => "parse",
                ErrorClass::Domain => "domain",
                ErrorClass::Inconsistent => "inconsistent",
            },
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.class() {
            "io" => 1,
            "parse" => 2,
            "domain" => 3,
            _ => 4,
        }
    }
}
