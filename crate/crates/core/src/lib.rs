//! Ramsey interference with internalized quantum reference frames.
//!
//! The crate simulates interferometers in which the "classical" phase
//! reference is itself a quantum system: a phase-averaged BEC mode driving
//! atom–molecule conversion, and a multi-mode fermionic bath driving
//! boson–fermion conversion through randomly chosen modes. Alongside the
//! laboratory description it provides the relational re-factorization in
//! which the interfering coherence is visible, and a sweep driver that
//! writes deterministic CSV tables.

pub mod boson;
pub mod error;
pub mod fermion;
pub mod linalg;
pub mod ramsey;
pub mod relational;
pub mod states;
pub mod sweep;
pub mod tolerance;

pub use error::{Error, Result};
