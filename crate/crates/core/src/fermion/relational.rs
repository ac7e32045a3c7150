//! Relational state of the fermion-frame interferometer.
//!
//! The relational qubit labels which member of a pair `|A⟩|c + e_j}`,
//! `|M⟩|c}` the laboratory occupies; `(c, j)` is absorbed into the global
//! factor. Its state is `ε|A⟩⟨A| + (1−ε)|Ψ_i⟩⟨Ψ_i|`: the vacancy branch,
//! where the interacted mode was empty, contributes only atom population.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::error::Result;
use crate::linalg::{self, cis, Mat2, C64, I, ONE, ZERO};

use super::compressed::run_fermion_ramsey;
use super::dense::{dense_stage_states, SignStrings};
use super::shuffle::MAX_DENSE_MODES;
use super::FermionRefParams;

/// `|Ψ_i⟩_rel⟨Ψ_i|` for the four stages.
pub fn ideal_fermion_relational_states(phi: f64) -> [Mat2; 4] {
    let h = C64::new(FRAC_1_SQRT_2, 0.0);
    let (s, c) = (0.5 * phi).sin_cos();
    [
        linalg::projector2(ONE, ZERO),
        linalg::projector2(h, -I * h),
        linalg::projector2(h, -I * h * cis(-phi)),
        linalg::projector2(C64::new(c, 0.0), C64::new(-s, 0.0)),
    ]
}

#[derive(Debug, Clone, PartialEq)]
pub struct FermionRelationalCheck {
    /// Extracted relational state per stage.
    pub rho_rel: [Mat2; 4],
    /// Trace distance of `ρ_rel` from `|Ψ_i⟩⟨Ψ_i|`; at most `ε`.
    pub deviations: [f64; 4],
    /// The same after removing `ε|A⟩⟨A|` and renormalizing; `None` at `ε = 1`.
    pub active_deviations: Option<[f64; 4]>,
    /// Whether the dense validator produced `rho_rel`.
    pub dense: bool,
}

impl FermionRelationalCheck {
    pub fn worst(&self) -> f64 {
        self.deviations.iter().copied().fold(0.0, f64::max)
    }
}

/// Extracts `ρ_rel` at each stage (dense with sign strings for `K ≤ 6`,
/// compressed otherwise) and compares with the ideal relational states.
pub fn fermion_relational_check(params: &FermionRefParams, phi: f64) -> Result<FermionRelationalCheck> {
    let dense = params.k() <= MAX_DENSE_MODES;
    let rho_rel: [Mat2; 4] = if dense {
        let stages = dense_stage_states(params, phi, SignStrings::JordanWigner)?;
        [0, 1, 2, 3].map(|i| stages[i].relational_state(SignStrings::JordanWigner))
    } else {
        let stages = run_fermion_ramsey(params, phi).stages;
        [0, 1, 2, 3].map(|i| {
            let (a, b) = stages[i].active();
            let vacancy = linalg::projector2(ONE, ZERO).scale(params.epsilon());
            vacancy + linalg::projector2(a, b).scale(params.filling())
        })
    };
    let ideal = ideal_fermion_relational_states(phi);
    let deviations = [0, 1, 2, 3].map(|i| linalg::trace_distance2(&rho_rel[i], &ideal[i]));
    let active_deviations = (params.filling() > 0.0).then(|| {
        [0, 1, 2, 3].map(|i| {
            let vacancy = linalg::projector2(ONE, ZERO).scale(params.epsilon());
            let active = (rho_rel[i] - vacancy).unscale(params.filling());
            linalg::trace_distance2(&active, &ideal[i])
        })
    });
    Ok(FermionRelationalCheck { rho_rel, deviations, active_deviations, dense })
}
