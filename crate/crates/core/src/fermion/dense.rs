//! Brute-force laboratory state on `molecule ⊗ atom ⊗ mode_1 ⊗ … ⊗ mode_K`
//! (occupation qubits, first factor most significant), for `K ≤ 6`.

use std::f64::consts::FRAC_PI_4;

use crate::error::{Error, Result};
use crate::linalg::{cis, CMatrix, Mat2, C64, ZERO};
use crate::states::{DensityOperator, HilbertSpec};

use super::shuffle::{shuffle_low_modes, MAX_DENSE_MODES};
use super::FermionRefParams;

/// Whether pair couplings carry the Jordan–Wigner string `(−1)^{Σ_{l<j} n_l}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SignStrings {
    #[default]
    Off,
    JordanWigner,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DenseFermionLab {
    k: usize,
    rho: DensityOperator,
}

fn lab_spec(k: usize) -> Result<HilbertSpec> {
    let modes = (1..=k).map(|j| (2, format!("mode{j}")));
    HilbertSpec::new([(2, "molecule".to_string()), (2, "atom".to_string())].into_iter().chain(modes))
}

impl DenseFermionLab {
    fn molecule_bit(&self) -> usize {
        1 << (self.k + 1)
    }

    fn atom_bit(&self) -> usize {
        1 << self.k
    }

    fn mode_bit(&self, j: usize) -> usize {
        1 << (self.k - j)
    }

    fn check_k(k: usize) -> Result<()> {
        if k == 0 || k > MAX_DENSE_MODES {
            return Err(Error::InvalidParameter(format!(
                "dense fermion lab needs 1 ≤ K ≤ {MAX_DENSE_MODES}, got {k}"
            )));
        }
        Ok(())
    }

    /// `|A⟩⟨A| ⊗ σ^{⊗K}`
    pub fn prepared(params: &FermionRefParams) -> Result<Self> {
        let k = params.k();
        Self::check_k(k)?;
        let fill = params.filling();
        let mut diag = vec![0.0; 1 << (k + 2)];
        for c in 0..1usize << k {
            let n = c.count_ones() as i32;
            diag[1 << k | c] = fill.powi(n) * params.epsilon().powi(k as i32 - n);
        }
        let rho = DensityOperator::diagonal(lab_spec(k)?, &diag)?;
        Ok(Self { k, rho })
    }

    /// Wraps a dense operator on the `K + 2` occupation qubits.
    pub fn from_matrix(k: usize, m: CMatrix) -> Result<Self> {
        Self::check_k(k)?;
        let rho = DensityOperator::from_matrix_unchecked(lab_spec(k)?, m)?;
        Ok(Self { k, rho })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn density(&self) -> &DensityOperator {
        &self.rho
    }

    pub fn matrix(&self) -> &CMatrix {
        self.rho.matrix()
    }

    fn with_matrix(&self, m: CMatrix) -> Self {
        Self { k: self.k, rho: DensityOperator::from_matrix_unchecked(self.rho.spec().clone(), m).expect("same shape") }
    }

    fn check_mode(&self, j: usize) -> Result<()> {
        if j == 0 || j > self.k {
            return Err(Error::InvalidMode { j, k: self.k });
        }
        Ok(())
    }

    /// `(−1)^{number of occupied modes before j}`
    fn string_sign(&self, index: usize, j: usize, signs: SignStrings) -> f64 {
        match signs {
            SignStrings::Off => 1.0,
            SignStrings::JordanWigner => {
                let modes = (1 << self.k) - 1;
                let before = modes & !((self.mode_bit(j) << 1) - 1);
                if (index & before).count_ones() % 2 == 0 {
                    1.0
                } else {
                    -1.0
                }
            }
        }
    }

    /// `exp(-iθ σ_x)` on every pair `|A⟩|…1_j…⟩ ↔ |M⟩|…0_j…⟩`, identity elsewhere.
    pub fn rotate_mode(&self, j: usize, theta: f64, signs: SignStrings) -> Result<Self> {
        self.check_mode(j)?;
        let (s, c) = theta.sin_cos();
        let c = C64::new(c, 0.0);
        let mut m = self.rho.matrix().clone();
        let dim = m.nrows();
        for spectators in 0..1usize << self.k {
            if spectators & self.mode_bit(j) != 0 {
                continue;
            }
            let a = self.atom_bit() | self.mode_bit(j) | spectators;
            let b = self.molecule_bit() | spectators;
            let x = C64::new(0.0, -s * self.string_sign(spectators, j, signs));
            // U ρ: rows
            for col in 0..dim {
                let (ra, rb) = (m[(a, col)], m[(b, col)]);
                m[(a, col)] = c * ra + x * rb;
                m[(b, col)] = x * ra + c * rb;
            }
            // ρ U†: columns
            let xc = x.conj();
            for row in 0..dim {
                let (ca, cb) = (m[(row, a)], m[(row, b)]);
                m[(row, a)] = c * ca + xc * cb;
                m[(row, b)] = xc * ca + c * cb;
            }
        }
        Ok(self.with_matrix(m))
    }

    /// π/2 pulse `exp(-i H^{(j)} t)` at `t = π/(2κ)`.
    pub fn pi2_pulse_on_mode(&self, j: usize, signs: SignStrings) -> Result<Self> {
        self.rotate_mode(j, FRAC_PI_4, signs)
    }

    /// `(1/K) Σ_j U^{(j)} W U^{(j)†}`
    pub fn random_mode_pi2(&self, signs: SignStrings) -> Self {
        self.mix_over_modes(|w, j| w.pi2_pulse_on_mode(j, signs).expect("mode in range"))
    }

    fn mix_over_modes(&self, f: impl Fn(&Self, usize) -> Self) -> Self {
        let dim = self.rho.dim();
        let sum = (1..=self.k).fold(CMatrix::zeros(dim, dim), |acc, j| acc + f(self, j).rho.into_matrix());
        self.with_matrix(sum.unscale(self.k as f64))
    }

    /// `e^{-iφ}` on the molecule component.
    pub fn free_phase_m(&self, phi: f64) -> Self {
        let mut m = self.rho.matrix().clone();
        let mb = self.molecule_bit();
        let phase = cis(-phi);
        for r in 0..m.nrows() {
            for c in 0..m.ncols() {
                match (r & mb != 0, c & mb != 0) {
                    (true, false) => m[(r, c)] *= phase,
                    (false, true) => m[(r, c)] *= phase.conj(),
                    _ => {}
                }
            }
        }
        self.with_matrix(m)
    }

    /// The first `stage` steps of opening pulse, hold, closing pulse, all on mode `j`; see
    /// [`super::run_fermion_ramsey`] for the direction of the closing pulse.
    fn sequence_on_mode(&self, j: usize, stage: usize, phi: f64, signs: SignStrings) -> Result<Self> {
        let mut w = self.clone();
        if stage >= 1 {
            w = w.pi2_pulse_on_mode(j, signs)?;
        }
        if stage >= 2 {
            w = w.free_phase_m(phi);
        }
        if stage >= 3 {
            w = w.rotate_mode(j, -FRAC_PI_4, signs)?;
        }
        Ok(w)
    }

    fn population(&self, bit: usize) -> f64 {
        let m = self.rho.matrix();
        (0..m.nrows()).filter(|i| i & bit != 0).map(|i| m[(i, i)].re).sum()
    }

    pub fn p_a(&self) -> f64 {
        self.population(self.atom_bit())
    }

    pub fn p_m(&self) -> f64 {
        self.population(self.molecule_bit())
    }

    /// Weight outside `n_M + n_A = 1`.
    pub fn support_defect(&self) -> f64 {
        let m = self.rho.matrix();
        let (mb, ab) = (self.molecule_bit(), self.atom_bit());
        (0..m.nrows())
            .filter(|&i| (i & mb != 0) == (i & ab != 0))
            .map(|i| m[(i, i)].norm())
            .sum()
    }

    /// Postselected frame state `⟨X|W|X⟩ / p_X` on the `K` mode qubits.
    pub fn rf_postselected(&self, atom: bool) -> Result<(f64, DensityOperator)> {
        let bit = if atom { self.atom_bit() } else { self.molecule_bit() };
        let p = self.population(bit);
        if p <= 0.0 {
            return Err(Error::EmptyBranch { outcome: if atom { "A" } else { "M" }, probability: p });
        }
        let modes = 1usize << self.k;
        let m = self.rho.matrix();
        let sub = CMatrix::from_fn(modes, modes, |r, c| m[(bit | r, bit | c)] / p);
        let spec = HilbertSpec::new((1..=self.k).map(|j| (2, format!("mode{j}"))))?;
        Ok((p, DensityOperator::from_matrix_unchecked(spec, sub)?))
    }

    /// Permutation average over the frame modes, identity on the system.
    pub fn shuffle_modes(&self) -> Result<Self> {
        Ok(self.with_matrix(shuffle_low_modes(self.rho.matrix(), self.k)?))
    }

    /// Pairs each `|A⟩|c + e_j}` with `|M⟩|c}` (`c_j = 0`) and reads off the
    /// 2×2 state of the pairing label: populations are the `A` and `M`
    /// weights, the coherence sums the paired off-diagonal elements.
    pub fn relational_state(&self, signs: SignStrings) -> Mat2 {
        let m = self.rho.matrix();
        let mut coherence = ZERO;
        for j in 1..=self.k {
            for c in 0..1usize << self.k {
                if c & self.mode_bit(j) != 0 {
                    continue;
                }
                let a = self.atom_bit() | self.mode_bit(j) | c;
                let b = self.molecule_bit() | c;
                coherence += m[(a, b)] * self.string_sign(c, j, signs);
            }
        }
        let (pa, pm) = (self.p_a(), self.p_m());
        Mat2::new(C64::new(pa, 0.0), coherence, coherence.conj(), C64::new(pm, 0.0))
    }
}

/// `W_{iL} = (1/K) Σ_j V_i^{(j)} W_{0L} V_i^{(j)†}` for `i = 0..=3`, where
/// `V_i^{(j)}` is the first `i` steps of the sequence, all on mode `j`.
pub fn dense_stage_states(params: &FermionRefParams, phi: f64, signs: SignStrings) -> Result<[DenseFermionLab; 4]> {
    let w0 = DenseFermionLab::prepared(params)?;
    let stage = |i: usize| w0.mix_over_modes(|w, j| w.sequence_on_mode(j, i, phi, signs).expect("mode in range"));
    Ok([w0.clone(), stage(1), stage(2), stage(3)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ONE;
    use crate::states::{trace_distance, PureState};
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn pure_lab(k: usize, index: usize) -> DenseFermionLab {
        let spec = lab_spec(k).unwrap();
        let psi = PureState::basis(spec, index).unwrap();
        DenseFermionLab::from_matrix(k, psi.to_density().into_matrix()).unwrap()
    }

    #[test]
    fn single_mode_pulse_examples() {
        // |A⟩|1}: molecule 0, atom 1, mode 1 → 0b011
        let w = pure_lab(1, 0b011).pi2_pulse_on_mode(1, SignStrings::JordanWigner).unwrap();
        let m = w.matrix();
        let h = 0.5;
        assert!((m[(0b011, 0b011)].re - h).abs() < 1e-15);
        assert!((m[(0b100, 0b100)].re - h).abs() < 1e-15);
        // (|A1⟩ − i|M0⟩)/√2 has ⟨A1|ρ|M0⟩ = (1/√2)(i/√2)
        assert!((m[(0b011, 0b100)] - C64::new(0.0, h)).norm() < 1e-15);

        let empty = pure_lab(1, 0b010);
        let same = empty.pi2_pulse_on_mode(1, SignStrings::Off).unwrap();
        assert_eq!(same.matrix(), empty.matrix());

        let twice = pure_lab(1, 0b011)
            .pi2_pulse_on_mode(1, SignStrings::Off)
            .unwrap()
            .pi2_pulse_on_mode(1, SignStrings::Off)
            .unwrap();
        assert!(twice.p_a().abs() < 1e-15 && (twice.p_m() - 1.0).abs() < 1e-15);
        assert!(pure_lab(2, 0b0110).pi2_pulse_on_mode(3, SignStrings::Off).is_err());
    }

    #[test]
    fn jordan_wigner_sign_appears_behind_occupied_mode() {
        // K = 2, mode 1 occupied, atom with mode 2 occupied: 0b0111
        let w = pure_lab(2, 0b0111);
        let off = w.pi2_pulse_on_mode(2, SignStrings::Off).unwrap();
        let jw = w.pi2_pulse_on_mode(2, SignStrings::JordanWigner).unwrap();
        // |M⟩|1,0} = 0b1010
        assert!((off.matrix()[(0b0111, 0b1010)] + jw.matrix()[(0b0111, 0b1010)]).norm() < 1e-15);
        assert!((off.p_m() - jw.p_m()).abs() < 1e-15);
    }

    #[test]
    fn random_pulse_with_one_mode_is_the_pulse() {
        let p = FermionRefParams::new(1, 0.3).unwrap();
        let w = DenseFermionLab::prepared(&p).unwrap();
        let a = w.random_mode_pi2(SignStrings::Off);
        let b = w.pi2_pulse_on_mode(1, SignStrings::Off).unwrap();
        assert_eq!(a.matrix(), b.matrix());
    }

    #[test]
    fn stage_probabilities_and_support() {
        let p = FermionRefParams::new(3, 0.2).unwrap();
        for phi in [0.0, 1.0, PI] {
            let stages = dense_stage_states(&p, phi, SignStrings::JordanWigner).unwrap();
            for s in &stages {
                assert!(s.support_defect() < 1e-15);
                assert!((s.density().trace() - 1.0).abs() < 1e-12);
            }
            let expect = 0.2 + 0.8 * (phi / 2.0).cos().powi(2);
            assert!((stages[3].p_a() - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn free_phase_is_periodic() {
        let p = FermionRefParams::new(2, 0.4).unwrap();
        let w = DenseFermionLab::prepared(&p).unwrap().random_mode_pi2(SignStrings::Off);
        assert_eq!(w.free_phase_m(0.0).matrix(), w.matrix());
        let d = trace_distance(w.free_phase_m(2.0 * PI).density(), w.density()).unwrap();
        assert!(d < 1e-12);
    }

    #[test]
    fn relational_state_of_first_pulse() {
        let p = FermionRefParams::new(2, 0.0).unwrap();
        let w = DenseFermionLab::prepared(&p).unwrap().random_mode_pi2(SignStrings::JordanWigner);
        let r = w.relational_state(SignStrings::JordanWigner);
        let h = C64::new(FRAC_1_SQRT_2, 0.0);
        let expect = crate::linalg::projector2(h * ONE, C64::new(0.0, -FRAC_1_SQRT_2));
        assert!((r - expect).norm() < 1e-14);
    }
}
