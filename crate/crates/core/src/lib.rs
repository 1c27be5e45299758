//! Exact linear algebra over the max-plus semiring extended with ghost
//! elements, plus the graph machinery that decides nilpotency questions
//! about it.
//!
//! The crate is organised bottom-up:
//!
//! - [`scalar`] — the base semiring (`max`, `+`, with `-inf` as zero) and its
//!   two-component extension whose second slot tracks "ghost" magnitudes.
//! - [`matrix`] — square matrices, the semiring product, powers, the
//!   symmetric bracket `[A,B] = AB ⊕ BA`, and permutation conjugation.
//! - [`digraph`] — support digraphs, deterministic cycle detection and
//!   topological ordering, reachability closures, and cycle means.
//! - [`lie`] — multi-matrix systems: simultaneous strict
//!   upper-triangularization with machine-checkable certificates on failure,
//!   lower central series, and reachability oracles.
//! - [`io`] — the JSON interchange format used by the command-line tool.
//! - [`corpus`] — seeded random generators for matrices, systems and bracket
//!   words, shared by tests, benches and the built-in self test.
//! - [`selftest`] — the randomized verification suites behind the CLI's
//!   `selftest` subcommand.
//!
//! Everything is deterministic: equal inputs produce byte-identical outputs,
//! including with the `parallel` feature enabled (the rayon paths partition
//! work but never reorder reductions in a way the idempotent `max` could
//! observe).

pub mod corpus;
pub mod digraph;
pub mod io;
pub mod lie;
pub mod matrix;
pub mod scalar;
pub mod selftest;

pub use digraph::{max_cycle_mean, CycleWitness, NotADag, Relation, SupportDigraph};
pub use lie::{
    BracketWord, LieSystem, LowerCentralSeries, SeriesTermination, TriangularizationOutcome,
    TwoWayObstruction,
};
pub use matrix::{DimensionMismatch, InvalidPermutation, Permutation, SuperMatrix};
pub use scalar::{ExtReal, SuperScalar};
