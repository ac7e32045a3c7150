//! Relational re-factorization of the atom/molecule + BEC laboratory.
//!
//! On the complement of `|A⟩|0}` the pair of commuting operators
//! `(n̂_M, N̂_2)` defines a new tensor-product structure
//! `H_rel ⊗ H_gl` through
//!
//! ```text
//! |A⟩|N}   ↦ |A⟩_rel |N⟩_gl
//! |M⟩|N−1} ↦ |M⟩_rel |N⟩_gl        (N ≥ 1)
//! ```
//!
//! A phase-averaged laboratory state is block diagonal in `N`, so its image is
//! `Σ_N p_N ρ_N ⊗ |N⟩⟨N|`. The reduced relational state `Σ_N p_N ρ_N` keeps
//! the atom–molecule coherence that the reduced system state loses.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::boson::{
    feshbach_pulse, free_evolve, poisson_pmf, BosonLabState, BosonRefParams, FreeEvolutionParams,
    PulseParams, SectorBlock,
};
use crate::error::{Error, Result};
use crate::linalg::{self, cis, CMatrix, Mat2, C64, I, ONE, ZERO};
use crate::states::{DensityOperator, HilbertSpec};
use crate::tolerance::{Tolerances, VACUUM_SUPPORT};

/// 2×2 state on `H_rel` in the basis `{|A⟩_rel, |M⟩_rel}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelationalState {
    rho: Mat2,
}

impl RelationalState {
    pub fn new(rho: Mat2) -> Result<Self> {
        let tol = Tolerances::DEFAULT.state;
        if (rho - rho.adjoint()).norm() > tol {
            return Err(Error::InvalidState("relational state not Hermitian".into()));
        }
        let tr = (rho[(0, 0)] + rho[(1, 1)]).re;
        if (tr - 1.0).abs() > tol {
            return Err(Error::InvalidState(format!("relational trace {tr} is not 1")));
        }
        let det = (rho[(0, 0)] * rho[(1, 1)] - rho[(0, 1)] * rho[(1, 0)]).re;
        if det < -tol || rho[(0, 0)].re < -tol || rho[(1, 1)].re < -tol {
            return Err(Error::InvalidState("relational state not positive".into()));
        }
        Ok(Self { rho })
    }

    /// `|ψ⟩⟨ψ|` for `ψ = a|A⟩_rel + b|M⟩_rel`.
    pub fn pure(a: C64, b: C64) -> Result<Self> {
        Self::new(linalg::projector2(a, b))
    }

    pub fn atom() -> Self {
        Self { rho: linalg::projector2(ONE, ZERO) }
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.rho
    }

    /// `⟨A|ρ_rel|M⟩`
    pub fn coherence(&self) -> C64 {
        self.rho[(0, 1)]
    }

    pub fn purity(&self) -> f64 {
        (self.rho * self.rho).trace().re
    }

    pub fn trace_distance(&self, other: &RelationalState) -> f64 {
        linalg::trace_distance2(&self.rho, &other.rho)
    }
}

/// Distribution of total type-2 atom number on `H_gl`.
#[derive(Debug, Clone, PartialEq)]
pub struct GlobalState {
    weights: Vec<(usize, f64)>,
}

impl GlobalState {
    pub fn new(weights: Vec<(usize, f64)>) -> Result<Self> {
        if weights.iter().any(|&(n, w)| n == 0 || w < 0.0) {
            return Err(Error::InvalidState("global weights need N ≥ 1 and p_N ≥ 0".into()));
        }
        let total: f64 = weights.iter().map(|w| w.1).sum();
        if (total - 1.0).abs() > Tolerances::DEFAULT.state {
            return Err(Error::InvalidState(format!("global weights sum to {total}")));
        }
        Ok(Self { weights })
    }

    pub fn weights(&self) -> &[(usize, f64)] {
        &self.weights
    }
}

/// Image of a laboratory state in `H_rel ⊗ H_gl`: `Σ_N p_N ρ_N ⊗ |N⟩⟨N|`.
#[derive(Debug, Clone, PartialEq)]
pub struct JointRelGl {
    sectors: Vec<SectorBlock>,
}

impl JointRelGl {
    pub fn sectors(&self) -> &[SectorBlock] {
        &self.sectors
    }

    /// Dense operator on `rel(2) ⊗ gl(N_max)` with `|N⟩_gl` at index `N−1`.
    pub fn to_density(&self) -> Result<DensityOperator> {
        let gl = self.sectors.last().map_or(1, |b| b.n);
        let spec = HilbertSpec::new([(2, "rel"), (gl, "gl")])?;
        let mut m = CMatrix::zeros(2 * gl, 2 * gl);
        for b in &self.sectors {
            let u = b.unnormalized();
            let g = b.n - 1;
            for r in 0..2 {
                for c in 0..2 {
                    m[(r * gl + g, c * gl + g)] = u[(r, c)];
                }
            }
        }
        DensityOperator::from_matrix_unchecked(spec, m)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RelationalDecomposition {
    pub joint: JointRelGl,
    pub rho_rel: RelationalState,
    pub rho_gl: GlobalState,
    /// Trace distance between the joint state and `ρ_rel ⊗ ρ_gl`.
    pub product_defect: f64,
}

/// Maps a laboratory state into `H_rel ⊗ H_gl` and reduces it.
pub fn to_relational(w: &BosonLabState) -> Result<RelationalDecomposition> {
    if w.vacuum_weight() > VACUUM_SUPPORT {
        return Err(Error::VacuumSupport(w.vacuum_weight()));
    }
    let sectors: Vec<SectorBlock> = w.blocks().to_vec();
    let rho_rel = sectors.iter().fold(Mat2::zeros(), |acc, b| acc + b.unnormalized());
    // the Fock cut-off leaves a deficit below the Poisson tail tolerance
    let total = (rho_rel[(0, 0)] + rho_rel[(1, 1)]).re;
    let rho_rel = RelationalState::new(rho_rel.unscale(total))?;
    let rho_gl = GlobalState::new(sectors.iter().map(|b| (b.n, b.weight)).collect())?;
    // block diagonal in N on both sides
    let product_defect = sectors
        .iter()
        .map(|b| b.weight * linalg::trace_distance2(&b.rho, rho_rel.matrix()))
        .sum();
    Ok(RelationalDecomposition { joint: JointRelGl { sectors }, rho_rel, rho_gl, product_defect })
}

/// Effective map on `H_rel` of one Feshbach pulse against the Poisson-distributed
/// frame: `Σ_N p_N U_N ρ U_N†` with `U_N = exp(-i (κt√N/2) σ_x)`.
pub fn effective_rel_channel(rho: &RelationalState, nbar: f64, kappa_t: f64) -> Result<RelationalState> {
    let reference = BosonRefParams::new(nbar)?;
    let mut out = Mat2::zeros();
    let mut total = 0.0;
    for n in 0..=reference.n_max() {
        let p = poisson_pmf(nbar, n);
        let u = linalg::x_rotation(0.5 * kappa_t * (n as f64).sqrt());
        out += linalg::conjugate2(&u, rho.matrix()).scale(p);
        total += p;
    }
    RelationalState::new(out.unscale(total))
}

/// External-field pulse `exp(-i H_Ram t)` with `H_Ram = (κ√n̄/2) σ_x`.
pub fn ramsey_rel_pulse(rho: &RelationalState, nbar: f64, kappa_t: f64) -> RelationalState {
    let u = linalg::x_rotation(0.5 * kappa_t * nbar.sqrt());
    RelationalState { rho: linalg::conjugate2(&u, rho.matrix()) }
}

/// The four ideal relational states of the interferometer.
pub fn ideal_relational_states(phi: f64) -> [RelationalState; 4] {
    let h = C64::new(FRAC_1_SQRT_2, 0.0);
    let (s, c) = (0.5 * phi).sin_cos();
    [
        RelationalState::atom(),
        RelationalState { rho: linalg::projector2(h, -I * h) },
        RelationalState { rho: linalg::projector2(h, -I * h * cis(-phi)) },
        RelationalState { rho: linalg::projector2(C64::new(s, 0.0), C64::new(-c, 0.0)) },
    ]
}

#[derive(Debug, Clone, PartialEq)]
pub struct RelationalCheck {
    /// Trace distance of the extracted `ρ_rel` from the ideal state, per stage.
    pub deviations: [f64; 4],
    pub coherences: [C64; 4],
    pub product_defects: [f64; 4],
}

impl RelationalCheck {
    pub fn worst(&self) -> f64 {
        self.deviations.iter().copied().fold(0.0, f64::max)
    }
}

/// Runs the interferometer and compares the relational state at each stage
/// with its ideal. The `|A⟩|0}` component, on which the map is undefined,
/// is removed and the remainder renormalized first.
pub fn relational_protocol_check(nbar: f64, phi: f64) -> Result<RelationalCheck> {
    let reference = BosonRefParams::new(nbar)?;
    let pulse = PulseParams::half_pi(1.0, nbar)?;
    let free = FreeEvolutionParams::from_phi(phi);
    let s0 = BosonLabState::prepared(&reference).without_vacuum()?;
    let s1 = feshbach_pulse(&s0, &pulse);
    let s2 = free_evolve(&s1, &free);
    let s3 = feshbach_pulse(&s2, &pulse);
    let ideal = ideal_relational_states(phi);
    let mut check = RelationalCheck {
        deviations: [0.0; 4],
        coherences: [ZERO; 4],
        product_defects: [0.0; 4],
    };
    for (i, stage) in [s0, s1, s2, s3].iter().enumerate() {
        let d = to_relational(stage)?;
        check.deviations[i] = d.rho_rel.trace_distance(&ideal[i]);
        check.coherences[i] = d.rho_rel.coherence();
        check.product_defects[i] = d.product_defect;
    }
    Ok(check)
}
