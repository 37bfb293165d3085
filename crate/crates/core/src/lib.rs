//! Comparison-based step-size adaptive randomized search (CB-SARS) on scaling-invariant
//! functions, and the normalized Markov chain `(X_t - x*) / sigma_t` used to study their
//! linear convergence.
//!
//! One iteration draws a sample block, evaluates the candidates `Sol((x, sigma), u^i)`, sorts
//! the block by objective value and applies the update `G = (G1, G2)` to the sorted block.
//! Only the ordering of objective values is used, which makes every algorithm here invariant
//! to strictly increasing transformations of the objective.

pub mod algorithms;
pub mod chain;
pub mod error;
pub mod framework;
pub mod invariance;
pub mod objectives;
pub mod rng;

pub use algorithms::{AlgorithmKind, AlgorithmSpec};
pub use error::{CbsarsError, Result};
pub use framework::{AlgorithmState, SampleBlock, SearchAlgorithm};
pub use objectives::{Objective, ObjectiveKind, Transform};
pub use rng::RngStream;
