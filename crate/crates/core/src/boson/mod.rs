//! Atom–molecule interferometer driven by a phase-averaged BEC reference frame.

mod params;
mod protocol;
mod state;
pub mod two_system;

pub use params::{
    coherent_state, poisson_pmf, poisson_tail, BosonRefParams, FreeEvolutionParams, PulseParams,
};
pub use protocol::{
    boson_visibility, jaynes_cummings_ramsey, jaynes_cummings_ramsey_with, rf_disturbance,
    rf_disturbance_with, run_boson_ramsey, run_boson_ramsey_with, BosonOutcome, Labels,
};
pub use state::{feshbach_pulse, free_evolve, twirl, BosonBranch, BosonLabState, SectorBlock};
