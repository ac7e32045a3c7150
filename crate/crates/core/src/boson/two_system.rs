//! Two atom/molecule systems sharing one phase-averaged BEC mode.
//!
//! Sectors are labelled by the conserved `N = n_2 + n_M1 + n_M2` and spanned
//! by `|AA⟩|N}, |AM⟩|N−1}, |MA⟩|N−1}, |MM⟩|N−2}` (first letter: system 1).
//! Basis states with a negative Fock index are absent; the couplings into
//! them carry `√0` and never populate them.

use nalgebra::Matrix4;

use crate::linalg::{cis, C64, ONE};

use super::params::{BosonRefParams, PulseParams};

/// Two-system operator in the basis `AA, AM, MA, MM`.
pub type Mat4 = Matrix4<C64>;

const AA: usize = 0;
const AM: usize = 1;
const MA: usize = 2;
const MM: usize = 3;

/// Which system is pulsed first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PulseOrder {
    #[default]
    FirstThenSecond,
    SecondThenFirst,
}

/// `exp(-iθσ_x)` on each listed pair of basis states.
fn pair_rotations(pairs: [(usize, usize, f64); 2]) -> Mat4 {
    let mut u = Mat4::identity();
    for (a, b, theta) in pairs {
        let (s, c) = theta.sin_cos();
        u[(a, a)] = C64::new(c, 0.0);
        u[(b, b)] = C64::new(c, 0.0);
        u[(a, b)] = C64::new(0.0, -s);
        u[(b, a)] = C64::new(0.0, -s);
    }
    u
}

/// Feshbach pulse on system 1 or 2 within sector `n`.
fn pulse_unitary(system: usize, n: usize, p: &PulseParams) -> Mat4 {
    // b|N} = √N |N−1}: the AA/‥ pair sees N atoms, the pair with the other
    // system already converted sees N−1
    let full = p.angle(n);
    let depleted = p.angle(n.saturating_sub(1));
    match system {
        1 => pair_rotations([(AA, MA, full), (AM, MM, depleted)]),
        _ => pair_rotations([(AA, AM, full), (MA, MM, depleted)]),
    }
}

/// Probability of the symmetric outcome of `{P_sym, P_anti}` on two systems,
/// with `P_anti = |AM − MA⟩⟨AM − MA|/2`.
pub fn symmetric_probability(rho: &Mat4) -> f64 {
    1.0 - 0.5 * (rho[(AM, AM)].re + rho[(MA, MA)].re - 2.0 * rho[(AM, MA)].re)
}

/// Both systems start in `|A⟩`, each receives a π/2 pulse from the shared BEC,
/// then system 2's molecule component picks up `e^{-iφ}`. Returns the
/// symmetric-outcome probability.
pub fn boson_two_system_symmetric(
    reference: &BosonRefParams,
    pulse: &PulseParams,
    order: PulseOrder,
    phi: f64,
) -> f64 {
    let weights = reference.poisson_weights();
    let mut start = Mat4::zeros();
    start[(AA, AA)] = ONE;
    let phase = Mat4::from_diagonal(&nalgebra::Vector4::new(ONE, cis(-phi), ONE, cis(-phi)));
    let sequence = match order {
        PulseOrder::FirstThenSecond => [1, 2],
        PulseOrder::SecondThenFirst => [2, 1],
    };
    // the measurement acts on the systems only, so sectors add with their weights
    let reduced = weights.iter().enumerate().fold(Mat4::zeros(), |acc, (n, &weight)| {
        let mut rho = start;
        for system in sequence {
            let u = pulse_unitary(system, n, pulse);
            rho = u * rho * u.adjoint();
        }
        acc + (phase * rho * phase.adjoint()).scale(weight)
    });
    symmetric_probability(&reduced)
}

/// In the limit of a large, undisturbed frame each system is
/// `(|A⟩ − i|M⟩)/√2` with a common phase, giving `(1 + cos²(φ/2))/2`.
pub fn ideal_symmetric_probability(phi: f64) -> f64 {
    0.5 * (1.0 + (0.5 * phi).cos().powi(2))
}
