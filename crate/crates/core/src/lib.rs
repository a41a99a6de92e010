//! Saturated subgraphs of binomial random graphs.
//!
//! Graph kernels ([`graph`], [`gnp`], [`embed`]), pattern analysis ([`props`]),
//! saturation semantics ([`saturation`]), the constructions themselves
//! ([`constructions`]), diagnostics of the Hamming-space coupling ([`hamming`])
//! and the sweep harness ([`experiments`]).

pub mod bits;
pub mod embed;
pub mod error;
pub mod gnp;
pub mod graph;
pub mod pattern;
pub mod props;
pub mod saturation;
pub mod constructions;
pub mod experiments;
pub mod hamming;

pub use bits::VertexSet;
pub use error::{Result, SatError};
pub use gnp::{gen_gnp, DeferredGnp};
pub use graph::Graph;
pub use pattern::{parse_pattern, Family, Pattern};
