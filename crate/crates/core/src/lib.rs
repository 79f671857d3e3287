//! Extra edge-connectivity of hypercubes `Q_n` and `(n,k)`-enhanced hypercubes
//! `Q_{n,k}`.
//!
//! The crate is split by concern:
//!
//! * [`graph`] builds the hypercube family over integer vertex ids and answers
//!   adjacency, induced-edge, boundary and connectivity queries.
//! * [`extremal`] evaluates the closed forms for `ex_m` and `xi_m`.
//! * [`concentration`] derives `lambda_h` profiles, the breakpoint sequence and
//!   the concentration interval `[ceil(11 * 2^(n-1) / 48), 2^(n-1)]` for `Q_{n,2}`.
//! * [`oracle`] recomputes `xi_m` and `lambda_h` from the graph alone, by
//!   exhaustive enumeration or seeded sampling.
//! * [`cli`] implements the `extraconn` command-line tool.

pub mod cli;
pub mod concentration;
pub mod error;
pub mod extremal;
pub mod graph;
pub mod oracle;

pub use error::{Error, Result};
pub use extremal::Family;
pub use graph::{GraphSpec, VertexSet};
