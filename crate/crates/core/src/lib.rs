//! Generator rank of homogeneous and subhomogeneous C*-algebras, together
//! with the finite-dimensional matrix algebra behind it: generated algebras
//! and commutants in `M_d`, the orbit-type stratification of self-adjoint
//! tuples under simultaneous unitary conjugation, generation tests for
//! direct sums of matrix algebras, and seeded Monte Carlo checks.
//!
//! Numerical code is generic over [`Real`] (`f64` and `f32`); the aliases
//! below fix the scalar for the common cases.

pub mod error;
pub mod gentest;
pub mod io;
pub mod linalg;
pub mod matalg;
pub mod mc;
pub mod rank;
pub mod sampling;
pub mod scalar;
pub mod strata;

pub use error::{Error, Result};
pub use gentest::{FiberedTuple, FiniteFiberAlgebra, GenerationReport};
pub use matalg::{MatrixTuple, OrbitType, StarAlgebra};
pub use mc::{ExperimentConfig, ExperimentReport};
pub use rank::{DimensionProfile, ExtNat, RankResult};
pub use scalar::{CMat, Real};
pub use strata::{StrataRow, StratumInfo};

pub type MatrixTuple64 = MatrixTuple<f64>;
pub type MatrixTuple32 = MatrixTuple<f32>;
pub type StarAlgebra64 = StarAlgebra<f64>;
pub type StarAlgebra32 = StarAlgebra<f32>;
pub type FiberedTuple64 = FiberedTuple<f64>;
pub type FiberedTuple32 = FiberedTuple<f32>;
pub type CMat64 = CMat<f64>;
pub type CMat32 = CMat<f32>;

/// Seed used when none is given: experiments are reproducible by default.
pub const DEFAULT_SEED: u64 = 20_240_917;
