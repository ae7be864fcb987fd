//! Pareto frontiers and sub-frontiers for pairs of dual norms on
//! finite-dimensional Euclidean spaces.
//!
//! The crate revolves around the [`pair::NormPair`] trait: two mutually dual
//! norms with a Euclidean ball projection and duality witnesses. On top of
//! it, [`pareto`] provides generic engines (frontier and sub-frontier
//! sampling, slope decompositions, singular-value regions, area identities),
//! while [`l1`], [`matrix`], [`tv1d`], [`quotient`] and [`tensor`] supply
//! exact specialized engines for the concrete pairs they name.

pub mod error;
pub mod gallery;
pub mod l1;
pub mod matrix;
pub mod pair;
pub mod pareto;
pub mod quotient;
pub mod simplex;
pub mod space;
pub mod tensor;
pub mod tv1d;

pub use error::{Error, Result};
pub use matrix::Mat;
pub use pair::{Decomposition, NormPair, SparsenessReport};
pub use pareto::{ParetoCurve, SVRegion, SlopeDecomposition, TightnessReport};
