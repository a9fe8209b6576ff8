//! File formats, reports, SVG figures and the command-line front end for
//! [`frontal_core`].

pub mod cli;
pub mod corpus;
pub mod render;
pub mod report;
pub mod spec;

/// Errors surfaced by the command-line tools, grouped by exit code.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Bad input: malformed spec, invalid parameters, unsupported request.
    #[error("{0}")]
    Validation(String),
    /// A numerical stage could not reach its accuracy target.
    #[error("{0}")]
    Accuracy(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl From<frontal_core::Error> for Error {
    fn from(e: frontal_core::Error) -> Self {
        use frontal_core::Error as E;
        match e {
            E::Accuracy { .. }
            | E::FrameConstruction { .. }
            | E::LiftInconsistency { .. }
            | E::PathologicalCurve(_)
            | E::Domain(_) => Error::Accuracy(e.to_string()),
            _ => Error::Validation(e.to_string()),
        }
    }
}

impl Error {
    /// `2` for validation and IO problems, `3` for accuracy failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Validation(_) | Error::Io(_) => 2,
            Error::Accuracy(_) => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
