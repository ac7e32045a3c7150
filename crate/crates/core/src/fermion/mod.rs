//! Boson–fermion interferometer driven by a multi-mode fermionic reference frame.
//!
//! Each of the `K` frame modes is independently occupied with probability
//! `1 − ε`. A pulse couples the atom `|A⟩` with one uniformly random mode
//! `j`, converting `|A⟩|1}_j ↔ |M⟩|0}_j`; the whole pulse–hold–pulse
//! sequence acts on that same mode. Frame states stay diagonal in
//! occupations and symmetric under mode permutations, so the production
//! path tracks only the interacted pair and binomial occupancy weights. A
//! dense `2^{K+2}`-dimensional twin for `K ≤ 6` validates it.

mod binomial;
mod compressed;
mod dense;
mod postselect;
mod relational;
mod shuffle;
mod two_system;

pub use binomial::{binom, binom_row};
pub use compressed::{run_fermion_ramsey, FermionLabState, FermionOutcome};
pub use dense::{dense_stage_states, DenseFermionLab, SignStrings};
pub use postselect::{c_max, fidelity_bound, postselect, postselect_and_fidelity, PostselectionResult};
pub use relational::{fermion_relational_check, ideal_fermion_relational_states, FermionRelationalCheck};
pub use shuffle::{occupancy_distribution, shuffle, symmetric_diagonal};
pub use two_system::{
    fermion_two_system_symmetric, two_system_phase_test, FrameKind, ModeDraw, TwoSystemOptions,
    TwoSystemResult,
};

use crate::error::{Error, Result};

/// `K` frame modes, each empty with probability `ε`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FermionRefParams {
    k: usize,
    epsilon: f64,
}

impl FermionRefParams {
    pub fn new(k: usize, epsilon: f64) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParameter("K must be at least 1".into()));
        }
        if !(0.0..=1.0).contains(&epsilon) {
            return Err(Error::InvalidParameter(format!("epsilon must lie in [0, 1], got {epsilon}")));
        }
        Ok(Self { k, epsilon })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// Occupation probability `1 − ε` of a single mode.
    pub fn filling(&self) -> f64 {
        1.0 - self.epsilon
    }

    /// Total-occupation distribution of `ρ_0^rf = σ^{⊗K}`: `c^K_n(1−ε)`.
    pub fn frame_weights(&self) -> Vec<f64> {
        binom_row(self.k, self.filling()).expect("epsilon validated")
    }

    /// Occupation distribution of the `K − 1` modes the system did not touch.
    pub fn spectator_weights(&self) -> Vec<f64> {
        binom_row(self.k - 1, self.filling()).expect("epsilon validated")
    }
}
