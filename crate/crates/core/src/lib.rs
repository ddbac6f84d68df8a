//! # renyi-converse-core
//!
//! Rényi information measures for finite-dimensional quantum states, the Rényi
//! relative entropy of entanglement (RREE), and strong-converse fidelity bounds
//! for state merging, entanglement concentration and Schumacher compression.
//!
//! The crate is `no_std` (with `alloc`): every routine is a pure function of its
//! inputs and an explicit seed. File formats, parallel dispatch and the CLI live
//! in the `renyi-converse` companion crate.
//!
//! ## Modules
//!
//! | Module | Contents |
//! |---|---|
//! | [`qstate`] | density matrices, pure states, channels, instruments, presets, random ensembles |
//! | [`entropy`] | Rényi entropies, Petz–Rényi divergences, Rényi coherent information |
//! | [`entanglement`] | RREE bounds and a feasible-point estimator over separable states |
//! | [`converse`] | the four strong-converse log-fidelity bounds and α optimization |
//! | [`protocols`] | exact type-class simulators for Schumacher compression and concentration |
//! | [`propcheck`] | randomized audits of every inequality the bounds rely on |
//!
//! All logarithms are base 2.
//!
//! ```
//! use renyi_converse_core::qstate::Preset;
//! use renyi_converse_core::entropy::renyi_entropy;
//!
//! let psi = "schmidt(0.9,0.1)".parse::<Preset>().unwrap().build().unwrap();
//! let rho_a = psi.density().partial_trace(&["A"]).unwrap();
//! let s2 = renyi_entropy(&rho_a, 2.0).unwrap();
//! assert!((s2 - 0.286304185156641).abs() < 1e-12);
//! ```

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod converse;
pub mod entanglement;
pub mod entropy;
mod error;
pub mod linalg;
pub mod numeric;
pub mod propcheck;
pub mod protocols;
pub mod qstate;

pub use error::{Error, Result};
