use std::io;

use thiserror::Error;

use crate::dynamics::DynamicsError;
use crate::gf::GfError;
use crate::graph::{GraphError, SrgViolation};
use crate::params::SrgError;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Params(#[from] SrgError),
    #[error(transparent)]
    Field(#[from] GfError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    NotStronglyRegular(#[from] SrgViolation),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    /// Short stable tag for machine-readable diagnostics.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Params(_) => "params",
            Error::Field(_) => "field",
            Error::Graph(GraphError::Io(_)) | Error::Io(_) => "io",
            Error::Graph(GraphError::Params(_)) => "params",
            Error::Graph(_) => "graph",
            Error::NotStronglyRegular(_) => "not_srg",
            Error::Dynamics(DynamicsError::NormDrift { .. }) => "integrator",
            Error::Dynamics(DynamicsError::Params(_)) => "params",
            Error::Dynamics(_) => "dynamics",
            Error::Config(_) => "usage",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
