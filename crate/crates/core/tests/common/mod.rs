//! Independent dense oracles shared by the integration tests.

#![allow(dead_code)]

use std::f64::consts::PI;

use qrf::linalg::{evolution_operator, CMatrix, CVector, C64, ZERO};
use qrf::states::{DensityOperator, HilbertSpec};

/// Dense boson laboratory on `system(2) ⊗ mode(d)`, basis index `s·d + n`
/// with `s = 0` for `A` and `s = 1` for `M`.
pub struct DenseBoson {
    pub d: usize,
    pub nbar: f64,
}

impl DenseBoson {
    pub fn new(nbar: f64, n_max: usize) -> Self {
        Self { d: n_max + 1, nbar }
    }

    fn spec(&self) -> HilbertSpec {
        HilbertSpec::new([(2, "system"), (self.d, "rf_mode")]).unwrap()
    }

    /// `|A⟩ ⊗ |β}` with real `β = √n̄`, amplitudes built by recursion.
    pub fn initial(&self) -> CVector {
        let mut v = CVector::zeros(2 * self.d);
        let beta = self.nbar.sqrt();
        let mut amp = (-0.5 * self.nbar).exp();
        for n in 0..self.d {
            if n > 0 {
                amp *= beta / (n as f64).sqrt();
            }
            v[n] = C64::new(amp, 0.0);
        }
        v
    }

    /// `(κ/2) Σ_n √n (|A,n⟩⟨M,n−1| + h.c.)`
    pub fn feshbach_hamiltonian(&self, kappa: f64) -> CMatrix {
        let mut h = CMatrix::zeros(2 * self.d, 2 * self.d);
        for n in 1..self.d {
            let x = C64::new(0.5 * kappa * (n as f64).sqrt(), 0.0);
            h[(n, self.d + n - 1)] = x;
            h[(self.d + n - 1, n)] = x;
        }
        h
    }

    /// `Δ |M⟩⟨M| ⊗ 𝟙`
    pub fn free_hamiltonian(&self, delta: f64) -> CMatrix {
        CMatrix::from_diagonal(&CVector::from_fn(2 * self.d, |i, _| if i >= self.d { C64::new(delta, 0.0) } else { ZERO }))
    }

    /// Stage vectors of pulse, hold `φ`, pulse with `κ = 1`, `t = π/(2√n̄)`.
    pub fn stages(&self, phi: f64) -> [CVector; 4] {
        let t = PI / (2.0 * self.nbar.sqrt());
        let pulse = evolution_operator(&self.feshbach_hamiltonian(1.0), t);
        let hold = evolution_operator(&self.free_hamiltonian(1.0), phi);
        let v0 = self.initial();
        let v1 = &pulse * &v0;
        let v2 = &hold * &v1;
        let v3 = &pulse * &v2;
        [v0, v1, v2, v3]
    }

    /// Total type-2 number of a basis index.
    fn sector(&self, i: usize) -> usize {
        if i < self.d {
            i
        } else {
            i - self.d + 1
        }
    }

    /// Average over the coherent-state phase: keeps only elements inside
    /// one total-number sector.
    pub fn phase_averaged(&self, v: &CVector) -> DensityOperator {
        let m = CMatrix::from_fn(2 * self.d, 2 * self.d, |r, c| {
            if self.sector(r) == self.sector(c) {
                v[r] * v[c].conj()
            } else {
                ZERO
            }
        });
        DensityOperator::from_matrix_unchecked(self.spec(), m).unwrap()
    }

    /// `Σ_n |⟨M,n|v⟩|²`
    pub fn p_m(&self, v: &CVector) -> f64 {
        (self.d..2 * self.d).map(|i| v[i].norm_sqr()).sum()
    }
}
