//! Generators, diversity scores and ensemble statistics for quantum test-input states.
//!
//! Everything in this crate is a pure function of its inputs and an explicit
//! [`RngHandle`]; it only needs `alloc`. Qubit `k` of an `n`-qubit register carries
//! binary weight `2^(n-1-k)` in a basis index, so qubit 0 is the most significant bit.
#![no_std]

extern crate alloc;

pub mod circuit;
pub mod error;
pub mod generators;
pub mod linalg;
pub mod sampling;
pub mod scores;
pub mod states;
pub mod stats;

pub use circuit::{circuit_unitary, Circuit, Gate, GateKind};
pub use error::{Error, Result};
pub use generators::{Entangler, GeneratorConfig, GeneratorKind};
pub use linalg::{ComplexMat, DensityMatrix, C64};
pub use sampling::{EulerAngles, RngHandle};
pub use scores::{BlockSpec, ScoreReport};
pub use states::StateVector;
pub use stats::{EmbeddedSample, MmdResult};
