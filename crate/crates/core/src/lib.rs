//! Factorizations of bijective functions through two-row arrays.
//!
//! The crate enumerates and verifies three tightly coupled pieces of
//! machinery:
//!
//! - [`maps`]: bijections between equal-size label sets, their functional
//!   graphs of directed paths and cycles, and the component-type `(λ, μ)`
//!   generalizing the cycle-type of a permutation;
//! - [`arrays`]: two-row arrays `(s, f)` with a fixed diagonal, the
//!   `s = D_Ψ ∘ f` identity, and the diagonal block-transposition action
//!   with its merge/split behaviour;
//! - [`phi`]: the constructive ≤2-to-1 map from arrays with the maximum
//!   vertical component count to arrays with one fewer, which yields
//!   `W_{n−ℓ(μ)−1} ≥ ½ W_{n−ℓ(μ)}`;
//! - [`enumeration`]: exhaustive `W_k` tables, the inequality sweep and the
//!   consecutive-ratio scan;
//! - [`tracking`]: `E`-label-free cycle statistics of `D ∘ γ` over all long
//!   cycles γ, and the puncture reduction tying them to the array counts.
//!
//! Everything is exact integer or rational arithmetic; enumeration sweeps
//! are deterministic regardless of worker count.

pub mod arrays;
pub mod enumeration;
pub mod maps;
pub mod phi;
pub mod tracking;

use thiserror::Error as ThisError;

pub use arrays::{classify_transposition, SpreadCase, TranspositionEffect, Triple, TwoRowArray};
pub use enumeration::{
    component_counts, enumerate_arrays, factorial, scan_conjecture, verify_theorem31, w_table,
    ExactRatio, WTable,
};
pub use maps::{
    partitions, types_of, BijectiveMap, Component, ComponentKind, ComponentType, Label, LabelSet,
};
pub use phi::{fibers, phi, preimages_direct, preimages_oracle, PhiCase, PhiCaseTag};
pub use tracking::{
    cycle_type_representatives, long_cycles, track_counts, verify_reduction, TrackInstance,
    TrackReport,
};

#[derive(Debug, ThisError)]
pub enum Error {
    #[error("invalid map: {0}")]
    InvalidMap(String),
    #[error("invalid component-type: {0}")]
    InvalidType(String),
    #[error("invalid two-row array: {0}")]
    InvalidArray(String),
    #[error("invalid transposition triple ({i},{j},{k}): need 1 <= i <= j < k <= n-1")]
    InvalidTriple { i: usize, j: usize, k: usize },
    #[error("label {0} is not in the top row")]
    LabelNotInTop(Label),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("n = {n} exceeds the exhaustive limit {limit}; pass --force to override")]
    LimitExceeded { n: u32, limit: u32 },
}
