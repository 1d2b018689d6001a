//! Iterative multidimensional scaling by local point placement.
//!
//! Given an `n x n` dissimilarity matrix, this crate embeds `n` points into a
//! Euclidean space `R^k` or a sphere `S^k` so that pairwise distances in the
//! target space match the input as closely as possible. The solver sweeps over
//! the points one at a time: placing a single point reduces to a min-sum
//! problem over anchor points (sphere/ray intersections around the other
//! points), which is solved by a closed form or a Weiszfeld-style iteration
//! depending on the error function and target space.
//!
//! Supported objectives combine
//! - an error function: squared (`fmds`), absolute (`rmds`), or `|.|^p` with
//!   `1 < p < 2` (`lp:<p>`), optionally applied to squared radii (`r2mds`),
//! - a target space: `R^k`, or `S^k` with chordal or geodesic metric
//!   (`c1s`, `c2s`, `g1s`, `g2s`).
//!
//! The crate also ships a random-projection routine for spherical data
//! ([`jl`]) together with its supporting sine-inequality checks, classical
//! spectral seeding ([`seeding`]), synthetic instance generators
//! ([`datagen`]), and a plain SMACOF baseline for benchmark comparisons.

pub mod cost;
pub mod datagen;
pub mod embedding;
mod error;
pub mod geometry;
pub mod jl;
mod linalg;
pub mod matrix;
pub mod recenter;
mod sampling;
pub mod seeding;
pub mod solver;
pub mod variant;

pub use cost::{point_cost, point_cost_at, total_cost};
pub use embedding::Embedding;
pub use error::Error;
pub use geometry::{AnchorSet, TargetSpace};
pub use matrix::DistanceMatrix;
pub use solver::{
    place, place_center, smacof_baseline, ConvergenceTrace, SolveResult, SolverConfig,
    SolverStats, TraceRecord,
};
pub use variant::{ErrKind, MdsVariant, RadiusRule};

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
