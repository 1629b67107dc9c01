//! Exact verification laboratory for the Gossez operator.
//!
//! Sequences live in two computable slices: [`SparseSeq`] for finitely
//! supported elements of ℓ₁ and [`TailSeq`] for eventually periodic elements
//! of ℓ∞. The bidual ℓ∞* is replaced by [`ModelMeasure`], atoms on ℕ plus one
//! mass at infinity. All arithmetic is exact.

pub mod checks;
pub mod error;
pub mod fitz;
pub mod gossez;
pub mod linalg;
pub mod measure;
pub mod point;
pub mod probe;
pub mod props;
pub mod report;
pub mod rational;
pub mod verdict;
pub mod sparse;
pub mod tail;

pub use error::{LabError, Result};
pub use gossez::{apply_g, apply_neg_g, solve_g, RangeCertificate};
pub use measure::{apply_gstar, pair_measure, ModelMeasure};
pub use point::{natural_couple, DualSystem, PairPoint};
pub use rational::Rational;
pub use sparse::SparseSeq;
pub use tail::{couple, Tail, TailSeq};
