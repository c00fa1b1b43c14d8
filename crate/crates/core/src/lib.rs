//! Restricted numerical ranges, algebraic connectivity and Laplacian spread
//! of weighted directed graphs.
//!
//! - [`graph`]: weighted digraphs, combinators and Laplacians
//! - [`dgf`]: the DGF text format
//! - [`numkernel`]: eigen-solvers, hulls and support functions
//! - [`rnr`]: restrictors, `alpha`/`beta`/spread, boundary sweeps, polygonal classes
//! - [`families`]: named digraph families and their closed forms
//! - [`balanced`]: quadratic-form identities and convex decompositions
//! - [`survey`]: exhaustive small-order enumeration and conjecture checks
//! - [`cli`]: the `rnr-spread` command line

pub mod balanced;
pub mod cli;
pub mod dgf;
pub mod error;
pub mod families;
pub mod fmt;
pub mod graph;
pub mod numkernel;
pub mod par;
pub mod rnr;
pub mod survey;

pub use error::{Error, Result};
pub use graph::{convex_combination, Digraph, Laplacian};
pub use par::Execution;
pub use rnr::{alpha_beta, classify, spread, PolygonalClass, Restrictor, RnrSummary};
