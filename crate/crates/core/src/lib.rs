//! Sequential sharing of non-locality and non-trivial preparation
//! contextuality through the Bell family
//!
//! ```text
//! B_n = sum_{y=1}^{n} sum_{i=1}^{2^{n-1}} (-1)^{x^i_y} A_{n,i} (x) B_{n,y}
//! ```
//!
//! with one sharp Alice and a chain of Bobs performing unsharp two-outcome
//! measurements. The crate provides closed-form bounds and
//! critical-sharpness chains ([`analytic`]), a density-matrix simulation of
//! the chain ([`cascade`]), brute-force classical oracles ([`oracle`]), and
//! the parity-oblivious multiplexing game ([`pomgame`]).
//!
//! The numerical core is generic over [`Scalar`] (`f32` or `f64`); the
//! aliases below fix it to `f64`. Classical bounds use exact integers.

pub mod analytic;
pub mod cascade;
pub mod combinatorics;
pub mod error;
pub mod matrix;
pub mod measurement;
pub mod observables;
pub mod oracle;
pub mod pomgame;
pub mod scalar;

pub use analytic::{BoundKind, Family};
pub use combinatorics::{BitString, OrderedInputSet};
pub use error::{Error, Result};
pub use oracle::DeterministicStrategy;
pub use scalar::Scalar;

pub type ComplexMatrix = matrix::Matrix<f64>;
pub type PovmParams = measurement::Povm<f64>;
pub type EffectPair = measurement::Effects<f64>;
pub type ObservableSet = observables::Observables<f64>;
pub type EntangledState = observables::EntangledState<f64>;
pub type CascadeConfig = cascade::Cascade<f64>;
pub type CascadeResult = cascade::CascadeResult<f64>;
pub type ThresholdChain = analytic::Chain<f64>;
pub type PovmFamily = analytic::Family<f64>;
pub type GameRecord = pomgame::GameRecord<f64>;

pub type ComplexMatrix32 = matrix::Matrix<f32>;
pub type PovmParams32 = measurement::Povm<f32>;
pub type ThresholdChain32 = analytic::Chain<f32>;
