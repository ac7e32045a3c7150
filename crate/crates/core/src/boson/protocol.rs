use crate::error::Result;
use crate::linalg::Mat2;
use crate::ramsey::sinusoid_visibility;
use crate::states::diagonal_fidelity;

use super::params::{BosonRefParams, FreeEvolutionParams, PulseParams};
use super::state::{feshbach_pulse, free_evolve, BosonLabState};

/// Names of the two system levels in an outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Labels {
    /// Atom `|A⟩` and molecule `|M⟩` coupled through a BEC.
    AtomMolecule,
    /// Ground `|g⟩` and excited `|e⟩` coupled through a quantized field mode.
    GroundExcited,
}

impl Labels {
    pub fn names(&self) -> (&'static str, &'static str) {
        match self {
            Labels::AtomMolecule => ("A", "M"),
            Labels::GroundExcited => ("g", "e"),
        }
    }
}

/// Result of the four-stage interferometer with an internal bosonic frame.
///
/// `p_a` / `p_m` are the probabilities of the first / second label
/// (`|A⟩`/`|M⟩`, or `|g⟩`/`|e⟩` for the field-mode variant).
#[derive(Debug, Clone, PartialEq)]
pub struct BosonOutcome {
    pub labels: Labels,
    pub p_a: f64,
    pub p_m: f64,
    /// Prepared, after first pulse, after free evolution, after second pulse.
    pub stages: [BosonLabState; 4],
    pub rho_s: [Mat2; 4],
    /// Fock-basis diagonal of the reduced frame state at each stage.
    pub rho_rf: [Vec<f64>; 4],
}

impl BosonOutcome {
    fn from_stages(labels: Labels, stages: [BosonLabState; 4]) -> Self {
        let rho_s = [0, 1, 2, 3].map(|i| stages[i].system_reduced());
        let rho_rf = [0, 1, 2, 3].map(|i| stages[i].frame_reduced());
        Self { labels, p_a: stages[3].p_a(), p_m: stages[3].p_m(), stages, rho_s, rho_rf }
    }
}

/// Pulse, hold, pulse from the phase-averaged `|A⟩ ⊗ |β}` preparation.
pub fn run_boson_ramsey_with(
    reference: &BosonRefParams,
    pulse: &PulseParams,
    free: &FreeEvolutionParams,
) -> BosonOutcome {
    run_engine(Labels::AtomMolecule, reference, pulse, free)
}

/// As [`run_boson_ramsey_with`] with `κ = 1` and `t = π/(2κ√n̄)`.
pub fn run_boson_ramsey(reference: &BosonRefParams, free: &FreeEvolutionParams) -> Result<BosonOutcome> {
    let pulse = PulseParams::half_pi(1.0, reference.nbar())?;
    Ok(run_boson_ramsey_with(reference, &pulse, free))
}

/// Atom in a phase-averaged coherent field mode under the resonant coupling
/// `χ(|e⟩⟨g| ⊗ a + |g⟩⟨e| ⊗ a†)`.
///
/// With `|g⟩ ↔ |A⟩`, `|e⟩ ↔ |M⟩` and `χ = κ/2` this is the Feshbach problem
/// sector by sector, so it runs through the same engine.
pub fn jaynes_cummings_ramsey_with(
    field: &BosonRefParams,
    pulse: &PulseParams,
    free: &FreeEvolutionParams,
) -> BosonOutcome {
    run_engine(Labels::GroundExcited, field, pulse, free)
}

pub fn jaynes_cummings_ramsey(field: &BosonRefParams, free: &FreeEvolutionParams) -> Result<BosonOutcome> {
    let pulse = PulseParams::half_pi(1.0, field.nbar())?;
    Ok(jaynes_cummings_ramsey_with(field, &pulse, free))
}

fn run_engine(
    labels: Labels,
    reference: &BosonRefParams,
    pulse: &PulseParams,
    free: &FreeEvolutionParams,
) -> BosonOutcome {
    let s0 = BosonLabState::prepared(reference);
    let s1 = feshbach_pulse(&s0, pulse);
    let s2 = free_evolve(&s1, free);
    let s3 = feshbach_pulse(&s2, pulse);
    BosonOutcome::from_stages(labels, [s0, s1, s2, s3])
}

/// `F(ρ_0^rf, ρ_rf^{(i)})` at each of the four stages.
pub fn rf_disturbance_with(
    reference: &BosonRefParams,
    pulse: &PulseParams,
    free: &FreeEvolutionParams,
) -> [f64; 4] {
    let out = run_boson_ramsey_with(reference, pulse, free);
    // truncated Poisson weights carry a ~1e-10 deficit; compare normalized states
    let total = |q: &[f64]| q.iter().sum::<f64>();
    let initial = &out.rho_rf[0];
    [0, 1, 2, 3].map(|i| {
        let q = &out.rho_rf[i];
        (diagonal_fidelity(initial, q) / (total(initial) * total(q)).sqrt()).min(1.0)
    })
}

pub fn rf_disturbance(reference: &BosonRefParams, free: &FreeEvolutionParams) -> Result<[f64; 4]> {
    let pulse = PulseParams::half_pi(1.0, reference.nbar())?;
    Ok(rf_disturbance_with(reference, &pulse, free))
}

/// Peak-to-peak contrast of `p_M(φ)`.
pub fn boson_visibility(reference: &BosonRefParams) -> Result<f64> {
    let pulse = PulseParams::half_pi(1.0, reference.nbar())?;
    Ok(sinusoid_visibility(|phi| {
        run_boson_ramsey_with(reference, &pulse, &FreeEvolutionParams::from_phi(phi)).p_m
    }))
}
