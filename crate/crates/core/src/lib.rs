//! Count-based distributional semantic spaces and unsupervised hypernymy
//! detection.
//!
//! The pipeline streams a dependency-parsed corpus ([`corpus`]), accumulates
//! target/context co-occurrences into a sparse matrix and weights it
//! ([`space`]), scores candidate `(x, y)` pairs with similarity, inclusion,
//! informativeness and reversed-inclusion measures ([`measures`]), and ranks
//! the scored pairs against relation datasets ([`eval`]).
//!
//! Everything numeric past raw counts is generic over [`Scalar`]; the aliases
//! below fix the common `f64` instantiation.

pub mod cli;
pub mod corpus;
pub mod eval;
pub mod measures;
mod scalar;
pub mod space;

pub use scalar::Scalar;

pub use corpus::{ContextKind, ContextSpec, CoocEvent, Pos, Sentence, Token, Vocabulary};
pub use eval::{Cutoff, Dataset, DatasetSplit, EvalError, EvaluationReport, RelationFilter, RelationPair};
pub use measures::{Aggregate, Measure, MeasureConfig, MeasureError, ScoredPair};
pub use space::{CooccurrenceMatrix, SortWeighting, SpaceError, Weighting};

/// Weighted space over `f64` values.
pub type Space = space::WeightedSpace<f64>;
/// Weighted space over `f32` values.
pub type Space32 = space::WeightedSpace<f32>;
/// Pair scorer over an `f64` space.
pub type Scorer<'a> = measures::Scorer<'a, f64>;
/// Pair scorer over an `f32` space.
pub type Scorer32<'a> = measures::Scorer<'a, f32>;
