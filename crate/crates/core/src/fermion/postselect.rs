//! Frame states conditioned on the atom/molecule outcome, and their fidelities.
//!
//! All frame states here are permutation symmetric and diagonal, so each is
//! a weight vector over the total occupation `n = 0..=K`, and the fidelity of
//! two of them is `Σ_n √(w_n v_n)`.

use crate::error::{Error, Result};
use crate::states::diagonal_fidelity;

use super::binomial::binom;
use super::compressed::{run_fermion_ramsey, FermionLabState};
use super::FermionRefParams;

#[derive(Debug, Clone, PartialEq)]
pub struct PostselectionResult {
    pub p_a: f64,
    pub p_m: f64,
    /// Occupation weights of `ρ_A^rf` and `ρ_M^rf`.
    pub rho_a_rf: Vec<f64>,
    pub rho_m_rf: Vec<f64>,
    /// Occupation weights of the active-branch part of `ρ_A^rf`, normalized.
    pub rho_a_tilde_rf: Vec<f64>,
    pub f_am: f64,
    pub f_a0: f64,
    pub f_m0: f64,
    /// `F(ρ̃_A^rf, ρ_M^rf)`
    pub f_tilde: f64,
    pub bound: f64,
}

/// Conditional frame states of any stage.
pub fn postselect(state: &FermionLabState) -> Result<PostselectionResult> {
    let params = state.params();
    let k = params.k();
    let (a, b) = state.active();
    let eps = state.vacancy_weight();
    let act = state.active_weight();
    let (p_a, p_m) = (state.p_a(), state.p_m());
    for (outcome, probability) in [("A", p_a), ("M", p_m)] {
        // cos²(π/2) and friends land near 1e-33 rather than 0
        if probability <= f64::EPSILON {
            return Err(Error::EmptyBranch { outcome, probability });
        }
    }
    let spectators = params.spectator_weights();
    let mut rho_a = vec![0.0; k + 1];
    let mut tilde = vec![0.0; k + 1];
    let mut rho_m = vec![0.0; k + 1];
    for (n, &c) in spectators.iter().enumerate() {
        // vacancy: interacted mode empty; active A: interacted mode full
        rho_a[n] += eps * c / p_a;
        rho_a[n + 1] += act * a.norm_sqr() * c / p_a;
        tilde[n + 1] = c;
        rho_m[n] = act * b.norm_sqr() * c / p_m;
    }
    let initial = params.frame_weights();
    Ok(PostselectionResult {
        p_a,
        p_m,
        f_am: diagonal_fidelity(&rho_a, &rho_m).min(1.0),
        f_a0: diagonal_fidelity(&rho_a, &initial).min(1.0),
        f_m0: diagonal_fidelity(&rho_m, &initial).min(1.0),
        f_tilde: diagonal_fidelity(&tilde, &rho_m).min(1.0),
        bound: fidelity_bound(params),
        rho_a_rf: rho_a,
        rho_m_rf: rho_m,
        rho_a_tilde_rf: tilde,
    })
}

/// Postselection after the full sequence at phase `φ`.
pub fn postselect_and_fidelity(params: &FermionRefParams, phi: f64) -> Result<PostselectionResult> {
    postselect(&run_fermion_ramsey(params, phi).stages[3])
}

/// `c^{K−1}_max`: the larger of the binomial weights at the floor and
/// ceiling of the mean `(K−1)(1−ε)`.
pub fn c_max(params: &FermionRefParams) -> f64 {
    let m = params.k() - 1;
    let mean = m as f64 * params.filling();
    let at = |n: f64| binom(m, (n as usize).min(m), params.filling()).expect("n ≤ K−1");
    at(mean.floor()).max(at(mean.ceil()))
}

/// `1 − c^{K−1}_0 − c^{K−1}_{K−1} − c^{K−1}_max`
pub fn fidelity_bound(params: &FermionRefParams) -> f64 {
    let m = params.k() - 1;
    let c = |n| binom(m, n, params.filling()).expect("n ≤ K−1");
    1.0 - c(0) - c(m) - c_max(params)
}
