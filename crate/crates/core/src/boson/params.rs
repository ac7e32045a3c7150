use std::f64::consts::{PI, TAU};

use statrs::function::factorial::ln_factorial;

use crate::error::{Error, Result};
use crate::linalg::{cis, C64, CVector};
use crate::states::{HilbertSpec, PureState};
use crate::tolerance::POISSON_TAIL;

/// Poisson probability `e^{-n̄} n̄^n / n!`, evaluated in log space.
pub fn poisson_pmf(nbar: f64, n: usize) -> f64 {
    if nbar == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    (-nbar + n as f64 * nbar.ln() - ln_factorial(n as u64)).exp()
}

/// `Σ_{n > n_max} p_n(n̄)`, summed directly rather than as `1 − Σ_{n ≤ n_max}`.
pub fn poisson_tail(nbar: f64, n_max: usize) -> f64 {
    let mut tail = 0.0;
    let mut n = n_max + 1;
    loop {
        let p = poisson_pmf(nbar, n);
        tail += p;
        // past the mode, terms fall at least geometrically
        if (n as f64 > nbar && p < tail * 1e-17) || p == 0.0 && n as f64 > nbar {
            break;
        }
        n += 1;
    }
    tail
}

/// Coherent-state BEC reference frame, phase-averaged into a Poisson mixture.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BosonRefParams {
    nbar: f64,
    beta_phase: f64,
    n_max: usize,
}

impl BosonRefParams {
    /// Default truncation `⌈n̄ + 10√n̄⌉`, raised until the Poisson tail is below `1e-10`.
    pub fn new(nbar: f64) -> Result<Self> {
        check_nbar(nbar)?;
        Ok(Self { nbar, beta_phase: 0.0, n_max: Self::default_truncation(nbar) })
    }

    /// Explicit Fock cut-off; must satisfy the truncation policy.
    pub fn with_truncation(nbar: f64, n_max: usize) -> Result<Self> {
        check_nbar(nbar)?;
        let floor = nbar + 10.0 * nbar.sqrt();
        let tail = poisson_tail(nbar, n_max);
        if (n_max as f64) < floor || tail >= POISSON_TAIL {
            return Err(Error::TruncationTooSmall { nbar, n_max, tail });
        }
        Ok(Self { nbar, beta_phase: 0.0, n_max })
    }

    pub fn with_beta_phase(self, beta_phase: f64) -> Self {
        Self { beta_phase, ..self }
    }

    pub fn default_truncation(nbar: f64) -> usize {
        let mut n_max = (nbar + 10.0 * nbar.sqrt()).ceil() as usize;
        while poisson_tail(nbar, n_max) >= POISSON_TAIL {
            n_max += 1;
        }
        n_max
    }

    pub fn nbar(&self) -> f64 {
        self.nbar
    }

    pub fn beta_phase(&self) -> f64 {
        self.beta_phase
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// `β = √n̄ e^{i arg β}`
    pub fn beta(&self) -> C64 {
        cis(self.beta_phase) * self.nbar.sqrt()
    }

    /// `p_n(n̄)` for `n = 0..=n_max`.
    pub fn poisson_weights(&self) -> Vec<f64> {
        (0..=self.n_max).map(|n| poisson_pmf(self.nbar, n)).collect()
    }

    pub fn tail_weight(&self) -> f64 {
        poisson_tail(self.nbar, self.n_max)
    }

    /// Coherent amplitudes `c_n = e^{-|β|²/2} β^n / √n!`, `n = 0..=n_max`.
    pub fn coherent_amplitudes(&self) -> Vec<C64> {
        (0..=self.n_max)
            .map(|n| cis(n as f64 * self.beta_phase) * poisson_pmf(self.nbar, n).sqrt())
            .collect()
    }
}

fn check_nbar(nbar: f64) -> Result<()> {
    if !(nbar >= 0.0) || !nbar.is_finite() {
        return Err(Error::InvalidParameter(format!("nbar must be finite and non-negative, got {nbar}")));
    }
    Ok(())
}

/// Truncated coherent state `|β}` on the Fock space `0..=n_max`.
pub fn coherent_state(params: &BosonRefParams) -> Result<PureState> {
    let spec = HilbertSpec::single(params.n_max + 1, "rf_mode")?;
    let amps = CVector::from_vec(params.coherent_amplitudes());
    let state = PureState::branch(spec, amps)?;
    if state.norm_sqr() < 1.0 - POISSON_TAIL {
        return Err(Error::TruncationTooSmall {
            nbar: params.nbar,
            n_max: params.n_max,
            tail: 1.0 - state.norm_sqr(),
        });
    }
    Ok(state)
}

/// Feshbach coupling rate `κ` and pulse duration `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseParams {
    pub kappa: f64,
    pub t: f64,
}

impl PulseParams {
    pub fn new(kappa: f64, t: f64) -> Result<Self> {
        if !(kappa > 0.0) || !(t >= 0.0) || !t.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "pulse needs kappa > 0 and t >= 0, got kappa = {kappa}, t = {t}"
            )));
        }
        Ok(Self { kappa, t })
    }

    /// `t = π / (2κ√n̄)`: a π/2 pulse for the mean atom number.
    pub fn half_pi(kappa: f64, nbar: f64) -> Result<Self> {
        if !(nbar > 0.0) {
            return Err(Error::InvalidParameter("a π/2 pulse needs nbar > 0".into()));
        }
        Self::new(kappa, PI / (2.0 * kappa * nbar.sqrt()))
    }

    /// Mixing angle `κ√N t / 2` in the sector with `N` type-2 atoms.
    pub fn angle(&self, n: usize) -> f64 {
        0.5 * self.kappa * (n as f64).sqrt() * self.t
    }
}

/// Off-resonance detuning `Δ_int` and hold time `τ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FreeEvolutionParams {
    pub delta_int: f64,
    pub tau: f64,
}

impl FreeEvolutionParams {
    pub fn new(delta_int: f64, tau: f64) -> Self {
        Self { delta_int, tau }
    }

    /// Unit detuning held for time `phi`.
    pub fn from_phi(phi: f64) -> Self {
        Self { delta_int: 1.0, tau: phi }
    }

    /// Unreduced phase `Δ_int τ`.
    pub fn raw_phi(&self) -> f64 {
        self.delta_int * self.tau
    }

    /// `Δ_int τ` reduced to `[0, 2π)`.
    pub fn phi(&self) -> f64 {
        self.raw_phi().rem_euclid(TAU)
    }
}
