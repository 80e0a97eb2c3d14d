//! Entropy calculus, secret-key capacities, and secure-computability
//! decisions for functions of finite multiterminal sources.
//!
//! A set of terminals observes i.i.d. repetitions of correlated finite-valued
//! random variables and communicates over a public noiseless channel. This
//! crate answers desk-scale questions about that model:
//!
//! * [`dist`] — joint distributions over opaque symbol alphabets, with
//!   marginal/conditional entropies and mutual information (all in bits).
//! * [`mcf`] — the Gács–Körner maximum common function of any collection of
//!   variable groups, computed as connected components of the support graph.
//! * [`capacity`] — communication-for-omniscience linear programs, secret-key
//!   and aided-secret-key capacities, and the secure-computability verdict
//!   for a function of the sources.
//! * [`protocols`] — seeded Monte Carlo simulation of the achievability
//!   schemes: random-binning omniscience with leakage estimation, the
//!   Slepian-Wolf coset-key scheme for a doubly symmetric binary source, and
//!   an exact balanced-coloring statistic.
//!
//! All values are immutable after construction and every operation is a pure
//! function, so instances can be shared freely across threads.

pub mod capacity;
pub mod dist;
pub mod mcf;
pub mod protocols;
mod simplex;

#[cfg(feature = "oracles")]
pub mod oracles;

pub use capacity::{
    decide, decompose, secret_key_capacity, secure_computation_capacity, CapacityResult,
    Constraint, ConstraintSet, ConstraintTag, Decomposition, RateVector, Verdict, VerdictKind,
};
pub use dist::{FunctionSpec, JointDistribution, TerminalSubset};
pub use mcf::McfLabeling;
pub use protocols::{
    run_balance_check, run_binning, run_example1, sample_block, BalanceCheck, LinearCodeScheme,
    SimulationReport, SourceBlock,
};

use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// An operation was called with arguments that violate its contract
    /// (empty or overlapping subsets, out-of-range indices, ...).
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A distribution or function table failed validation on construction.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The instance exceeds a documented size cap for exact computation.
    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),
}

pub type Result<T> = std::result::Result<T, Error>;
