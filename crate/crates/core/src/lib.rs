//! Multi-fold list colouring of small graphs: family construction and
//! classification, a path engine with exact colourability and damage
//! quantities, brute-force oracles, a constructive `(4m,2m)`-colourer for
//! the two-cycle and theta families, and numeric checkers for the counting
//! inequalities behind it.

pub mod colour;
pub mod error;
pub mod graph;
pub mod io;
pub mod lemma;
pub mod lists;
pub mod oracle;
pub mod path;
pub mod theta;
pub mod verify;

pub use colour::{Colour, ColourSet};
pub use error::{ColourerError, GraphError, LemmaError, ModelError, OracleError, PathError};
pub use graph::{classify, classify_graph, core, realize, Classification, FamilySpec, Graph};
pub use lists::{validate, FoldColouring, ListAssignment};
pub use path::{PathInstance, PathProfile};
pub use theta::{colour_family, decompose, merge_reduce};
