//! Relative phase between two systems pulsed through the same frame.
//!
//! Both systems start in `|A⟩`, each receives a π/2 pulse from the frame,
//! then system 2's molecule component picks up `e^{-iφ}`. The pair is
//! measured with `{P_sym, P_anti}`; `P_anti = |AM − MA⟩⟨AM − MA|/2` commutes
//! with the total atom number, so it is a legitimate measurement.

use nalgebra::SMatrix;

use crate::boson::two_system::{boson_two_system_symmetric, symmetric_probability, Mat4, PulseOrder};
use crate::boson::{BosonRefParams, PulseParams};
use crate::error::{Error, Result};
use crate::linalg::{cis, C64, ONE};

use super::FermionRefParams;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FrameKind {
    Boson { nbar: f64 },
    Fermion(FermionRefParams),
}

/// How the two systems' frame modes are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ModeDraw {
    /// Each system interacts with a different random mode.
    #[default]
    Distinct,
    /// Independent uniform draws; with probability `1/K` both hit the same mode.
    Independent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct TwoSystemOptions {
    pub order: PulseOrder,
    pub draw: ModeDraw,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TwoSystemResult {
    pub phis: Vec<f64>,
    pub p_symmetric: Vec<f64>,
    /// `max_φ p_sym − min_φ p_sym`
    pub flatness: f64,
}

/// Each system on its own mode: after tracing the modes both are diagonal,
/// `ε|A⟩⟨A| + (1−ε)𝟙/2`, and the phase has nothing to act on.
fn distinct_modes(params: &FermionRefParams) -> Mat4 {
    let p_m = 0.5 * params.filling();
    let single = [1.0 - p_m, p_m];
    let mut rho = Mat4::zeros();
    for (s1, &x) in single.iter().enumerate() {
        for (s2, &y) in single.iter().enumerate() {
            rho[(2 * s1 + s2, 2 * s1 + s2)] = C64::new(x * y, 0.0);
        }
    }
    rho
}

type Mat8 = SMatrix<C64, 8, 8>;

/// Index `4 s_1 + 2 s_2 + n` with `s = 0` for `A`, `1` for `M`, `n` the
/// occupation of the single shared mode.
fn shared_mode(params: &FermionRefParams, order: PulseOrder, phi: f64) -> Mat4 {
    let mut rho = Mat8::zeros();
    rho[(0, 0)] = C64::new(params.epsilon(), 0.0);
    rho[(1, 1)] = C64::new(params.filling(), 0.0);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let pulse = |pairs: [(usize, usize); 2]| {
        let mut u = Mat8::identity();
        for (a, b) in pairs {
            u[(a, a)] = C64::new(h, 0.0);
            u[(b, b)] = C64::new(h, 0.0);
            u[(a, b)] = C64::new(0.0, -h);
            u[(b, a)] = C64::new(0.0, -h);
        }
        u
    };
    // |A, x, 1⟩ ↔ |M, x, 0⟩ and |y, A, 1⟩ ↔ |y, M, 0⟩
    let first = pulse([(0b001, 0b100), (0b011, 0b110)]);
    let second = pulse([(0b001, 0b010), (0b101, 0b110)]);
    let sequence = match order {
        PulseOrder::FirstThenSecond => [first, second],
        PulseOrder::SecondThenFirst => [second, first],
    };
    for u in sequence {
        rho = u * rho * u.adjoint();
    }
    let phase = Mat8::from_diagonal(&nalgebra::SVector::<C64, 8>::from_fn(|i, _| {
        if i & 0b010 != 0 {
            cis(-phi)
        } else {
            ONE
        }
    }));
    rho = phase * rho * phase.adjoint();
    Mat4::from_fn(|r, c| rho[(2 * r, 2 * c)] + rho[(2 * r + 1, 2 * c + 1)])
}

/// `P_sym` probability with the fermionic frame.
pub fn fermion_two_system_symmetric(params: &FermionRefParams, options: TwoSystemOptions, phi: f64) -> f64 {
    let rho = match options.draw {
        ModeDraw::Distinct => distinct_modes(params),
        ModeDraw::Independent => {
            let same = 1.0 / params.k() as f64;
            distinct_modes(params).scale(1.0 - same) + shared_mode(params, options.order, phi).scale(same)
        }
    };
    symmetric_probability(&rho)
}

/// `p_sym(φ)` over `phis` and its flatness.
pub fn two_system_phase_test(frame: &FrameKind, phis: &[f64], options: TwoSystemOptions) -> Result<TwoSystemResult> {
    if phis.is_empty() {
        return Err(Error::InvalidParameter("phi grid must be nonempty".into()));
    }
    let p_symmetric: Vec<f64> = match frame {
        FrameKind::Boson { nbar } => {
            let reference = BosonRefParams::new(*nbar)?;
            let pulse = PulseParams::half_pi(1.0, *nbar)?;
            phis.iter().map(|&phi| boson_two_system_symmetric(&reference, &pulse, options.order, phi)).collect()
        }
        FrameKind::Fermion(params) => {
            phis.iter().map(|&phi| fermion_two_system_symmetric(params, options, phi)).collect()
        }
    };
    let max = p_symmetric.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = p_symmetric.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(TwoSystemResult { phis: phis.to_vec(), p_symmetric, flatness: max - min })
}
