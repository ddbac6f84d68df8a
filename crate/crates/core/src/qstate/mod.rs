//! Density matrices, pure states, channels and the matrix functions built on
//! their eigendecompositions.
//!
//! Registers carry labels (`A`, `B`, `R`, …) through every operation, and
//! bipartite cuts are always expressed by label.

mod channel;
mod density;
mod dims;
mod preset;
mod pure_state;
pub mod random;

pub use channel::{InstrumentOutcome, QuantumChannel, QuantumInstrument, DEFAULT_P_FLOOR};
pub use density::{fidelity, fidelity_with_pure, matrix_power, DensityMatrix, Tolerances};
pub use dims::{BipartiteSplit, SubsystemDims};
pub use preset::{Preset, QuantumState, GHZ_MAX};
pub use pure_state::{purify, PureState, SchmidtForm};
pub use random::{random_channel, random_density, random_pure};
