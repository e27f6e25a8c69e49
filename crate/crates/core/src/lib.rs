//! Maker-Breaker games for occupying a copy of a regular graph `G` on a
//! sparse board `H` with linearly many edges.
//!
//! The pipeline is: level `G` so that same-level vertices are at distance at
//! least 3, build the blocking digraph and descendant sets, size the blocks
//! of the board, then play Maker's subgame strategy against a Breaker policy
//! and audit the result by extracting an embedding of `G` from Maker's edges.

pub mod blocking;
pub mod board;
pub mod breaker;
pub mod candidate;
pub mod config;
pub mod discrepancy;
pub mod error;
pub mod experiment;
pub mod graph;
pub mod instance;
pub mod leveling;
pub mod maker;
pub mod oracle;
pub mod transcript;

pub use error::{Error, Result};
