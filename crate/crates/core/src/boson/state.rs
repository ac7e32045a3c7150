//! Block-diagonal laboratory state of the atom/molecule system and the BEC mode.
//!
//! Phase averaging over the conserved total atom number removes every
//! coherence between sectors of different total type-2 atom number `N`.
//! Sector `N ≥ 1` is spanned by `|A⟩|N}` and `|M⟩|N−1}`; sector `0` holds
//! only `|A⟩|0}`, which the Feshbach coupling annihilates. Each sector is
//! stored as its weight and a normalized 2×2 conditional state, so
//! inter-sector coherence is absent by construction.

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, Mat2, C64, ONE, ZERO};
use crate::states::{DensityOperator, HilbertSpec, PureState};

use super::params::{BosonRefParams, FreeEvolutionParams, PulseParams};

/// One `N` sector: weight `p_N` and conditional state on `{|A⟩|N}, |M⟩|N−1}}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectorBlock {
    pub n: usize,
    pub weight: f64,
    pub rho: Mat2,
}

impl SectorBlock {
    fn from_unnormalized(n: usize, m: Mat2) -> Self {
        let weight = (m[(0, 0)] + m[(1, 1)]).re;
        let rho = if weight > 0.0 { m.unscale(weight) } else { linalg::projector2(ONE, ZERO) };
        Self { n, weight, rho }
    }

    /// `p_N ρ_N`
    pub fn unnormalized(&self) -> Mat2 {
        self.rho.scale(self.weight)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BosonLabState {
    blocks: Vec<SectorBlock>,
    vacuum_weight: f64,
}

impl BosonLabState {
    /// Phase-averaged `|A⟩⟨A| ⊗ |β}{β|`: Poisson weights, every sector in `|A⟩|N}`.
    pub fn prepared(params: &BosonRefParams) -> Self {
        let weights = params.poisson_weights();
        let atom = linalg::projector2(ONE, ZERO);
        let blocks = weights
            .iter()
            .enumerate()
            .skip(1)
            .map(|(n, &weight)| SectorBlock { n, weight, rho: atom })
            .collect();
        Self { blocks, vacuum_weight: weights[0] }
    }

    pub fn from_blocks(mut blocks: Vec<SectorBlock>, vacuum_weight: f64) -> Result<Self> {
        blocks.sort_by_key(|b| b.n);
        if blocks.first().is_some_and(|b| b.n == 0) {
            return Err(Error::InvalidState("sector 0 is the vacuum weight, not a block".into()));
        }
        if blocks.windows(2).any(|w| w[0].n == w[1].n) {
            return Err(Error::InvalidState("duplicate sector".into()));
        }
        Ok(Self { blocks, vacuum_weight })
    }

    pub fn blocks(&self) -> &[SectorBlock] {
        &self.blocks
    }

    pub fn vacuum_weight(&self) -> f64 {
        self.vacuum_weight
    }

    /// `p_N` for each stored sector, in ascending `N`.
    pub fn block_weights(&self) -> Vec<(usize, f64)> {
        self.blocks.iter().map(|b| (b.n, b.weight)).collect()
    }

    pub fn total_weight(&self) -> f64 {
        self.vacuum_weight + self.blocks.iter().map(|b| b.weight).sum::<f64>()
    }

    /// Largest sector index carried.
    pub fn max_sector(&self) -> usize {
        self.blocks.last().map_or(0, |b| b.n)
    }

    fn map_blocks(&self, f: impl Fn(&SectorBlock) -> Mat2) -> Self {
        let blocks = self
            .blocks
            .iter()
            .map(|b| SectorBlock { rho: f(b), ..*b })
            .collect();
        Self { blocks, vacuum_weight: self.vacuum_weight }
    }

    pub fn p_a(&self) -> f64 {
        self.vacuum_weight + self.blocks.iter().map(|b| b.weight * b.rho[(0, 0)].re).sum::<f64>()
    }

    pub fn p_m(&self) -> f64 {
        self.blocks.iter().map(|b| b.weight * b.rho[(1, 1)].re).sum()
    }

    /// Reduced state of the atom/molecule system.
    ///
    /// `⟨A|ρ_S|M⟩ = Σ_n ⟨A,n|W|M,n⟩` pairs `|A⟩|n}` (sector `n`) with
    /// `|M⟩|n}` (sector `n+1`), so it vanishes identically.
    pub fn system_reduced(&self) -> Mat2 {
        Mat2::new(C64::new(self.p_a(), 0.0), ZERO, ZERO, C64::new(self.p_m(), 0.0))
    }

    /// Diagonal of the reduced BEC state in the Fock basis, `n = 0..=max_sector`.
    pub fn frame_reduced(&self) -> Vec<f64> {
        let mut q = vec![0.0; self.max_sector() + 1];
        q[0] += self.vacuum_weight;
        for b in &self.blocks {
            q[b.n] += b.weight * b.rho[(0, 0)].re;
            q[b.n - 1] += b.weight * b.rho[(1, 1)].re;
        }
        q
    }

    /// Dense density operator on `system ⊗ rf_mode` with Fock cut-off `n_max`.
    pub fn to_density(&self, n_max: usize) -> Result<DensityOperator> {
        let d = n_max + 1;
        let spec = HilbertSpec::new([(2, "system"), (d, "rf_mode")])?;
        let mut m = CMatrix::zeros(2 * d, 2 * d);
        m[(0, 0)] = C64::new(self.vacuum_weight, 0.0);
        for b in &self.blocks {
            let u = b.unnormalized();
            let a = (b.n < d).then_some(b.n);
            let mm = (b.n - 1 < d).then_some(d + b.n - 1);
            let idx = [a, mm];
            for i in 0..2 {
                for j in 0..2 {
                    let v = u[(i, j)];
                    match (idx[i], idx[j]) {
                        (Some(r), Some(c)) => m[(r, c)] = v,
                        _ if v.norm() > 1e-14 => {
                            return Err(Error::DimensionMismatch { expected: d, found: b.n + 1 })
                        }
                        _ => {}
                    }
                }
            }
        }
        DensityOperator::from_matrix_unchecked(spec, m)
    }

    /// Restriction to the complement of `|A⟩|0}`, renormalized.
    pub fn without_vacuum(&self) -> Result<Self> {
        let rest = self.total_weight() - self.vacuum_weight;
        if !(rest > 0.0) {
            return Err(Error::InvalidState("no weight outside |A>|0}".into()));
        }
        let blocks = self
            .blocks
            .iter()
            .map(|b| SectorBlock { weight: b.weight / rest, ..*b })
            .collect();
        Ok(Self { blocks, vacuum_weight: 0.0 })
    }
}

/// Projects a dense state on `system ⊗ rf_mode` onto the total-number sectors.
///
/// This is the phase average over the conserved number evaluated exactly:
/// every element between different sectors is dropped.
pub fn twirl(rho: &DensityOperator) -> Result<BosonLabState> {
    let dims = rho.spec().dims();
    if dims.len() != 2 || dims[0] != 2 {
        return Err(Error::InvalidSpec(format!("expected system(2) ⊗ mode, got {dims:?}")));
    }
    let d = dims[1];
    let m = rho.matrix();
    let a = |n: usize| n;
    let mol = |n: usize| d + n;
    let blocks = (1..=d)
        .map(|n| {
            let ai = (n < d).then(|| a(n));
            let mi = mol(n - 1);
            let get = |r: Option<usize>, c: Option<usize>| match (r, c) {
                (Some(r), Some(c)) => m[(r, c)],
                _ => ZERO,
            };
            let block = Mat2::new(
                get(ai, ai),
                get(ai, Some(mi)),
                get(Some(mi), ai),
                m[(mi, mi)],
            );
            SectorBlock::from_unnormalized(n, block)
        })
        .collect();
    Ok(BosonLabState { blocks, vacuum_weight: m[(0, 0)].re })
}

/// Feshbach pulse: in sector `N`, rotation `exp(-i θ_N σ_x)` with `θ_N = κ√N t/2`.
pub fn feshbach_pulse(w: &BosonLabState, p: &PulseParams) -> BosonLabState {
    w.map_blocks(|b| linalg::conjugate2(&linalg::x_rotation(p.angle(b.n)), &b.rho))
}

/// Off-resonant hold: the molecule component picks up `e^{-iφ}`.
pub fn free_evolve(w: &BosonLabState, f: &FreeEvolutionParams) -> BosonLabState {
    let phase = linalg::lower_phase(f.raw_phi());
    w.map_blocks(|b| linalg::conjugate2(&phase, &b.rho))
}

/// A pure branch `|A⟩|α} + |M⟩|μ}` of the laboratory (one element of the
/// phase ensemble), tracked with exact amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct BosonBranch {
    /// `⟨A, n|Ψ⟩`
    pub atom: Vec<C64>,
    /// `⟨M, n|Ψ⟩`
    pub molecule: Vec<C64>,
}

impl BosonBranch {
    /// `|A⟩|β}`
    pub fn prepared(params: &BosonRefParams) -> Self {
        let atom = params.coherent_amplitudes();
        let molecule = vec![ZERO; atom.len()];
        Self { atom, molecule }
    }

    pub fn pulse(&self, p: &PulseParams) -> Self {
        let mut out = self.clone();
        // sector n pairs atom[n] with molecule[n - 1]
        for n in 1..self.atom.len() {
            let u = linalg::x_rotation(p.angle(n));
            let (a, m) = (self.atom[n], self.molecule[n - 1]);
            out.atom[n] = u[(0, 0)] * a + u[(0, 1)] * m;
            out.molecule[n - 1] = u[(1, 0)] * a + u[(1, 1)] * m;
        }
        out
    }

    pub fn free(&self, f: &FreeEvolutionParams) -> Self {
        let phase = linalg::cis(-f.raw_phi());
        Self { atom: self.atom.clone(), molecule: self.molecule.iter().map(|m| m * phase).collect() }
    }

    pub fn to_pure(&self) -> Result<PureState> {
        let d = self.atom.len();
        let spec = HilbertSpec::new([(2, "system"), (d, "rf_mode")])?;
        let v = self.atom.iter().chain(&self.molecule).copied().collect::<Vec<_>>();
        PureState::branch(spec, crate::linalg::CVector::from_vec(v))
    }
}
