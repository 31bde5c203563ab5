use std::path::PathBuf;

use thiserror::Error;

use crate::graph::FamilySpec;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("invalid family spec: {0}")]
    InvalidSpec(String),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("colour id {0} out of range (max 127)")]
    ColourOutOfRange(u32),
    #[error("domain mismatch: {0}")]
    DomainMismatch(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("list width violation: {0}")]
    WidthViolation(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LoadError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PathError {
    #[error("path has an even number of vertices ({0}); odd-path quantities are undefined")]
    EvenPath(usize),
    #[error("list width violation: {0}")]
    WidthViolation(String),
    #[error("path is not (L,2m)-colourable: S_L = {s_l} < 2nm = {needed}")]
    NotColourable { s_l: usize, needed: usize },
    #[error("colourability criterion holds but the search found no colouring")]
    Infeasible,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("enumeration cap exceeded: {0}")]
    CapExceeded(String),
    #[error(transparent)]
    Path(#[from] PathError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Error)]
pub enum ColourerError {
    #[error("unsupported family {0}: {1}")]
    UnsupportedFamily(FamilySpec, String),
    #[error("list width violation: {0}")]
    WidthViolation(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("no colouring found ({reason}); counterexample written to {}", dump.as_ref().map(|p| p.display().to_string()).unwrap_or_else(|| "<not written>".into()))]
    NotFound { reason: String, dump: Option<PathBuf> },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Path(#[from] PathError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LemmaError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}
