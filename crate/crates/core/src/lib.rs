//! Exact simulation of qubits encoded in two-mode bosonic states.
//!
//! A bosonic qubit holds `N` identical bosons shared between two modes `a` and
//! `b`; the fixed-`N` subspace is a spin-`N/2` representation acted on by the
//! Schwinger operators `S^x`, `S^y`, `S^z`. The crate is organised as:
//!
//! * [`spin`]: Fock-basis states, spin operators, Kronecker embedding, observables.
//! * [`dynamics`]: unitary evolution and double-commutator Lindblad evolution.
//! * [`entanglement`]: reduced density matrices and von Neumann entropy.
//! * [`qubus`]: the three-level + photon bus model and its effective exchange.
//! * [`algolab`]: entangler, CNOT analogue, Deutsch and continuous-time Grover.
//! * [`schedc`]: the `.bsched` schedule language and the qubit-to-boson compiler.
//! * [`cli`]: the `boseq` command line front end.

pub mod algolab;
pub mod cli;
pub mod dynamics;
pub mod entanglement;
pub mod error;
pub mod qubus;
pub mod schedc;
pub mod spin;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
