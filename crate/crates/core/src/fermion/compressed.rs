//! Production representation of the fermion-frame laboratory.
//!
//! Every stage has the form
//! `S[(ε|A⟩⟨A| ⊗ |0}{0|_j + (1−ε)|Ψ⟩⟨Ψ|) ⊗ σ^{⊗K−1}]` with
//! `|Ψ⟩ = a|A⟩|1}_j + b|M⟩|0}_j`, so only `(a, b)` evolves.

use std::f64::consts::FRAC_PI_4;

use crate::error::{Error, Result};
use crate::linalg::{cis, CMatrix, C64, ONE, ZERO};
use crate::ramsey::sinusoid_visibility;

use super::dense::DenseFermionLab;
use super::FermionRefParams;

#[derive(Debug, Clone, PartialEq)]
pub struct FermionLabState {
    params: FermionRefParams,
    /// `(a, b)` of the active branch.
    active: [C64; 2],
    /// Whether the interacted mode has been randomized. Before any pulse the
    /// state is symmetric anyway.
    shuffled: bool,
}

impl FermionLabState {
    pub fn prepared(params: &FermionRefParams) -> Self {
        Self { params: *params, active: [ONE, ZERO], shuffled: false }
    }

    pub fn with_active(params: &FermionRefParams, a: C64, b: C64) -> Result<Self> {
        if (a.norm_sqr() + b.norm_sqr() - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidState("active branch not normalized".into()));
        }
        Ok(Self { params: *params, active: [a, b], shuffled: true })
    }

    pub fn params(&self) -> &FermionRefParams {
        &self.params
    }

    pub fn active(&self) -> (C64, C64) {
        (self.active[0], self.active[1])
    }

    pub fn is_shuffled(&self) -> bool {
        self.shuffled
    }

    /// `ε`: the interacted mode was empty and nothing happened.
    pub fn vacancy_weight(&self) -> f64 {
        self.params.epsilon()
    }

    pub fn active_weight(&self) -> f64 {
        self.params.filling()
    }

    pub fn spectator_distribution(&self) -> Vec<f64> {
        self.params.spectator_weights()
    }

    pub fn p_a(&self) -> f64 {
        self.vacancy_weight() + self.active_weight() * self.active[0].norm_sqr()
    }

    pub fn p_m(&self) -> f64 {
        self.active_weight() * self.active[1].norm_sqr()
    }

    fn rotate(&self, theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        let [a, b] = self.active;
        let x = C64::new(0.0, -s);
        Self { params: self.params, active: [a * c + x * b, x * a + b * c], shuffled: true }
    }

    /// π/2 pulse on a uniformly random mode.
    pub fn random_mode_pi2(&self) -> Self {
        self.rotate(FRAC_PI_4)
    }

    /// Closing pulse on the mode of the opening pulse, `exp(+iπ/4 σ_x)`.
    pub fn closing_pulse(&self) -> Self {
        self.rotate(-FRAC_PI_4)
    }

    pub fn free_phase_m(&self, phi: f64) -> Self {
        let [a, b] = self.active;
        Self { active: [a, b * cis(-phi)], ..self.clone() }
    }

    /// Expansion to the dense validator (`K ≤ 6`).
    pub fn to_dense(&self) -> Result<DenseFermionLab> {
        let k = self.params.k();
        let eps = self.params.epsilon();
        let fill = self.params.filling();
        let dim = 1usize << (k + 2);
        let (molecule, atom) = (1usize << (k + 1), 1usize << k);
        let modes: Vec<usize> = if self.shuffled { (1..=k).collect() } else { vec![1] };
        let share = 1.0 / modes.len() as f64;
        let mut m = CMatrix::zeros(dim, dim);
        for &j in &modes {
            let jb = 1usize << (k - j);
            for c in (0..1usize << k).filter(|c| c & jb == 0) {
                let n = c.count_ones() as i32;
                let p = share * fill.powi(n) * eps.powi(k as i32 - 1 - n);
                m[(atom | c, atom | c)] += C64::new(eps * p, 0.0);
                let amps = [(atom | jb | c, self.active[0]), (molecule | c, self.active[1])];
                for &(r, x) in &amps {
                    for &(col, y) in &amps {
                        m[(r, col)] += x * y.conj() * (fill * p);
                    }
                }
            }
        }
        DenseFermionLab::from_matrix(k, m)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FermionOutcome {
    pub p_a: f64,
    pub p_m: f64,
    /// Peak-to-peak contrast of `p_M(φ)`.
    pub visibility: f64,
    pub stages: [FermionLabState; 4],
}

fn stage_sequence(params: &FermionRefParams, phi: f64) -> [FermionLabState; 4] {
    let s0 = FermionLabState::prepared(params);
    let s1 = s0.random_mode_pi2();
    let s2 = s1.free_phase_m(phi);
    let s3 = s2.closing_pulse();
    [s0, s1, s2, s3]
}

/// Pulse, hold, pulse with the same random mode throughout.
///
/// The closing pulse is the inverse rotation of the opening one: this is the
/// sequence whose final state is `cos(φ/2)|A⟩|1} − sin(φ/2)|M⟩|0}` up to a
/// global phase, giving `p_A = ε + (1−ε)cos²(φ/2)`.
pub fn run_fermion_ramsey(params: &FermionRefParams, phi: f64) -> FermionOutcome {
    let stages = stage_sequence(params, phi);
    let visibility = sinusoid_visibility(|x| stage_sequence(params, x)[3].p_m());
    FermionOutcome { p_a: stages[3].p_a(), p_m: stages[3].p_m(), visibility, stages }
}
