//! Two-level Ramsey interferometry with the pulses treated as an external
//! classical field. This is the reference against which the internalized
//! frames are compared.

use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::linalg::{cis, C64, I};

/// Pure state `c_g|g⟩ + c_e|e⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoLevelState {
    pub c_g: C64,
    pub c_e: C64,
}

impl TwoLevelState {
    pub const GROUND: TwoLevelState = TwoLevelState { c_g: C64::new(1.0, 0.0), c_e: C64::new(0.0, 0.0) };
    pub const EXCITED: TwoLevelState = TwoLevelState { c_g: C64::new(0.0, 0.0), c_e: C64::new(1.0, 0.0) };

    pub fn new(c_g: C64, c_e: C64) -> Result<Self> {
        let norm = c_g.norm_sqr() + c_e.norm_sqr();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidState(format!("two-level norm {norm} is not 1")));
        }
        Ok(Self { c_g, c_e })
    }

    pub fn p_g(&self) -> f64 {
        self.c_g.norm_sqr()
    }

    pub fn p_e(&self) -> f64 {
        self.c_e.norm_sqr()
    }
}

/// Rabi rate, pulse duration, detuning and free-evolution time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RamseyParams {
    pub omega: f64,
    pub pulse_time: f64,
    pub delta: f64,
    pub tau: f64,
}

impl RamseyParams {
    /// π/2 pulses at Rabi rate `omega`, free evolution giving phase `delta·tau`.
    pub fn new(omega: f64, delta: f64, tau: f64) -> Result<Self> {
        if !(omega > 0.0) || !omega.is_finite() {
            return Err(Error::InvalidParameter(format!("Rabi rate must be positive, got {omega}")));
        }
        Ok(Self { omega, pulse_time: PI / (2.0 * omega), delta, tau })
    }

    /// Accumulated phase `Δτ` reduced to `[0, 2π)`.
    pub fn phi(&self) -> f64 {
        (self.delta * self.tau).rem_euclid(TAU)
    }

    /// Runs the pulse / free phase / pulse sequence from `|g⟩`.
    pub fn run(&self) -> TwoLevelState {
        let s = ramsey_pulse(TwoLevelState::GROUND, self.omega, self.pulse_time);
        let s = free_phase(s, self.delta * self.tau);
        ramsey_pulse(s, self.omega, self.pulse_time)
    }
}

/// Resonant pulse `exp(-i (Ωt/2) σ_x)` in the `{g, e}` basis.
pub fn ramsey_pulse(s: TwoLevelState, omega: f64, t: f64) -> TwoLevelState {
    let (sin, cos) = (0.5 * omega * t).sin_cos();
    TwoLevelState {
        c_g: s.c_g * cos - I * sin * s.c_e,
        c_e: s.c_e * cos - I * sin * s.c_g,
    }
}

/// Free evolution under `Δ|e⟩⟨e|`: multiplies `c_e` by `e^{-iφ}`.
pub fn free_phase(s: TwoLevelState, phi: f64) -> TwoLevelState {
    TwoLevelState { c_g: s.c_g, c_e: s.c_e * cis(-phi) }
}

/// Ground and excited probabilities after π/2 – φ – π/2 starting from `|g⟩`.
pub fn run_ramsey(phi: f64) -> (f64, f64) {
    let half = PI / 2.0;
    let s = ramsey_pulse(TwoLevelState::GROUND, 1.0, half);
    let s = free_phase(s, phi);
    let s = ramsey_pulse(s, 1.0, half);
    (s.p_g(), s.p_e())
}

/// One sample of a Ramsey fringe.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FringePoint {
    pub phi: f64,
    pub p_g: f64,
    pub p_e: f64,
}

pub fn fringe_sweep(phis: &[f64]) -> Vec<FringePoint> {
    phis.iter()
        .map(|&phi| {
            let (p_g, p_e) = run_ramsey(phi);
            FringePoint { phi, p_g, p_e }
        })
        .collect()
}

/// `max − min` of a sampled fringe; zero for an empty sample.
pub fn sampled_visibility(values: impl IntoIterator<Item = f64>) -> f64 {
    let (lo, hi) = values
        .into_iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if hi >= lo {
        hi - lo
    } else {
        0.0
    }
}

/// Exact peak-to-peak contrast of a fringe `p(φ) = a + Re(b e^{-iφ})`.
///
/// Any two-pulse interferometer with a single phase step has this form, so three
/// equally spaced samples determine `b` and the visibility is `2|b|`.
pub fn sinusoid_visibility(mut p: impl FnMut(f64) -> f64) -> f64 {
    let third = TAU / 3.0;
    let b: C64 = (0..3)
        .map(|k| {
            let phi = k as f64 * third;
            cis(phi) * p(phi)
        })
        .sum::<C64>()
        * (2.0 / 3.0);
    2.0 * b.norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn close(a: C64, b: C64) -> bool {
        (a - b).norm() < 1e-14
    }

    #[test]
    fn half_pulse_from_ground() {
        let s = ramsey_pulse(TwoLevelState::GROUND, 1.0, PI / 2.0);
        assert!(close(s.c_g, C64::new(FRAC_1_SQRT_2, 0.0)));
        assert!(close(s.c_e, C64::new(0.0, -FRAC_1_SQRT_2)));
    }

    #[test]
    fn zero_and_full_pulse() {
        let s = ramsey_pulse(TwoLevelState::GROUND, 2.0, 0.0);
        assert_eq!(s, TwoLevelState::GROUND);
        let s = ramsey_pulse(TwoLevelState::GROUND, 1.0, PI);
        assert!(close(s.c_g, C64::new(0.0, 0.0)));
        assert!(close(s.c_e, C64::new(0.0, -1.0)));
    }

    #[test]
    fn free_phase_examples() {
        let s = ramsey_pulse(TwoLevelState::GROUND, 1.0, PI / 2.0);
        let phi = 0.7;
        let t = free_phase(s, phi);
        assert!(close(t.c_g, s.c_g));
        assert!(close(t.c_e, C64::new(0.0, -FRAC_1_SQRT_2) * cis(-phi)));
        assert_eq!(free_phase(s, 0.0), s);
        let e = free_phase(TwoLevelState::EXCITED, PI);
        assert!(close(e.c_e, C64::new(-1.0, 0.0)));
    }

    #[test]
    fn run_ramsey_examples() {
        let (g, e) = run_ramsey(0.0);
        assert!(g.abs() < 1e-15 && (e - 1.0).abs() < 1e-15);
        let (g, e) = run_ramsey(PI);
        assert!((g - 1.0).abs() < 1e-15 && e.abs() < 1e-15);
        let (g, e) = run_ramsey(PI / 2.0);
        assert!((g - 0.5).abs() < 1e-15 && (e - 0.5).abs() < 1e-15);
    }

    #[test]
    fn fringe_sweep_examples() {
        assert!(fringe_sweep(&[]).is_empty());
        let pts = fringe_sweep(&[0.0, PI / 2.0, PI]);
        let expect = [(0.0, 0.0, 1.0), (PI / 2.0, 0.5, 0.5), (PI, 1.0, 0.0)];
        for (p, (phi, g, e)) in pts.iter().zip(expect) {
            assert_eq!(p.phi, phi);
            assert!((p.p_g - g).abs() < 1e-15 && (p.p_e - e).abs() < 1e-15);
        }
        let grid: Vec<f64> = (0..=100).map(|k| TAU * k as f64 / 100.0).collect();
        let v = sampled_visibility(fringe_sweep(&grid).iter().map(|p| p.p_g));
        assert!((v - 1.0).abs() < 1e-12);
    }

    #[test]
    fn params_reduce_phase_and_reject_bad_rate() {
        let p = RamseyParams::new(2.0, 3.0, 2.5).unwrap();
        assert!((p.phi() - (7.5 - TAU)).abs() < 1e-15);
        assert!((p.run().p_g() - (7.5f64 / 2.0).sin().powi(2)).abs() < 1e-12);
        assert!(RamseyParams::new(0.0, 1.0, 1.0).is_err());
        assert!(TwoLevelState::new(C64::new(1.0, 0.0), C64::new(1.0, 0.0)).is_err());
    }

    #[test]
    fn sinusoid_visibility_of_closed_form() {
        let v = sinusoid_visibility(|phi| 0.1 + 0.9 * (phi / 2.0).cos().powi(2));
        assert!((v - 0.9).abs() < 1e-14);
        assert!((sinusoid_visibility(|phi| run_ramsey(phi).0) - 1.0).abs() < 1e-14);
    }
}
