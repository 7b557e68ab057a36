//! Statevector laboratory for ion-native variational optimization.
//!
//! The crate covers dense statevector simulation, trapped-ion couplings and
//! effective Hamiltonians, Sherrington–Kirkpatrick problem instances, two
//! QAOA-style ansatz families, symmetry analysis of the solution space,
//! multi-controlled-X synthesis from √X powers, shot-based estimation with
//! readout-error correction, and a single-qubit VQE testbed.

pub mod ansatz;
pub mod csv;
pub mod dense;
pub mod error;
pub mod estimation;
pub mod gates;
pub mod ion;
pub mod optimize;
pub mod sk;
pub mod statevector;
pub mod symmetry;
pub mod vqe1q;

pub use error::{Error, Result};
pub use statevector::Statevector;
