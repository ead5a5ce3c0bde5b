//! Exact single-excitation dynamics of qubits sharing Lorentzian reservoirs,
//! with independent numerical oracles and the coherence and entanglement
//! measures built on top of them.
//!
//! All rates are measured in units of the coupling constant γ₀ and all times
//! in units of 1/γ₀.

pub mod entanglement;
pub mod error;
pub mod maps;
pub mod model;
pub mod ode;
pub mod oracle;
pub mod smallmat;

pub use error::{Error, Result};
pub use num_complex::Complex64;
