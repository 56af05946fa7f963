//! Auxiliary hypergraphs behind two independence-number lower bounds:
//! distinct-slope sets in the grid `[n]²`, and `H³ʳ`-free r-graphs.
//!
//! - [`lattice`]: slopes, heights, lines and visible points.
//! - [`grid`]: the rank-4 grid hypergraph, its degree profile and global counts.
//! - [`search`]: constructive distinct-slope searches and the exact oracle.
//! - [`turan`]: the `H³ʳ`-copy 3-graph, free-graph builders and blow-ups.
//! - [`harness`]: experiment orchestration behind the `hypergrid` binary.

pub mod budget;
pub mod error;
pub mod grid;
pub mod harness;
pub mod lattice;
pub mod rng;
pub mod search;
pub mod turan;

pub use budget::Budget;
pub use error::{Error, Result};
pub use lattice::{GridPoint, Slope};
