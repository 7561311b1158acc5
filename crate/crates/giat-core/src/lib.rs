//! Decomposition toolkit for large-scale black-box optimization.
//!
//! Given an objective `f` over `n` box-bounded variables, this crate detects
//! pairwise variable interactions by finite differences, picks a separability
//! threshold with one of four strategies (fixed, function-space, per-pair
//! roundoff bounds, or the adaptive largest-gap rule over sorted interaction
//! indicators), and partitions the variables into nonseparable groups plus a
//! separable remainder.
//!
//! The crate also ships a generator for scalable partially separable test
//! problems with known ground-truth grouping, and scoring utilities that
//! compare a decomposition against that truth.
//!
//! The crate is `no_std`-compatible (requires `alloc`); enable the `libm`
//! feature instead of `std` for float math on bare targets. File formats and
//! the experiment runner live in the companion `giat-cli` crate.
#![cfg_attr(not(feature = "std"), no_std)]
#![warn(missing_docs)]

extern crate alloc;

pub mod bench;
pub mod error;
pub mod evaluation;
pub mod grouping;
pub mod interaction;
mod math;
pub mod matrix;
pub mod rng;
pub mod thresholds;

pub use bench::{
    build_problem, example1, BaseFunctionKind, GroupingTruth, ProblemInstance, ProblemSpec,
    SubcomponentSpec, WeightMode,
};
pub use error::Error;
pub use evaluation::{dump_distribution, score, AccuracyReport, DistributionDump};
pub use grouping::{
    classify_pairs, connected_components, decompose, Adjacency, DecompositionResult,
    ThresholdRecord,
};
pub use interaction::{
    build_interaction_data, gamma_constant, pair_quantities, warm_cache, BasePointRule, DeltaRule,
    EvalCache, InteractionData, PairQuantities, PerturbationScheme,
};
pub use matrix::SymMatrix;
pub use thresholds::{
    compute_zeta, cret_thresholds, fst_threshold, ft_threshold, giat_threshold, Basis, GiatOutcome,
    Strategy, ThresholdDecision, ThresholdValue, Verdict, ZetaMatrix,
};

/// Convenience result alias used throughout the crate.
pub type Result<T> = core::result::Result<T, Error>;
