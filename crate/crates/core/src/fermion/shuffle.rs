//! The incoherent symmetrizer `S[ρ] = (1/K!) Σ_π S_π ρ S_π†` over frame modes.

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::states::DensityOperator;

/// Largest mode count handled by explicit permutation sums.
pub(crate) const MAX_DENSE_MODES: usize = 6;

/// All permutations of `0..k`, by Heap's algorithm.
fn permutations(k: usize) -> Vec<Vec<usize>> {
    let mut a: Vec<usize> = (0..k).collect();
    let mut c = vec![0; k];
    let mut out = vec![a.clone()];
    let mut i = 0;
    while i < k {
        if c[i] < i {
            if i % 2 == 0 {
                a.swap(0, i);
            } else {
                a.swap(c[i], i);
            }
            out.push(a.clone());
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

/// Moves mode `m` (bit `k−1−m` of the low `k` bits) to mode `perm[m]`.
fn permute_modes(index: usize, perm: &[usize]) -> usize {
    let k = perm.len();
    let high = index >> k << k;
    let moved = perm
        .iter()
        .enumerate()
        .filter(|&(m, _)| index >> (k - 1 - m) & 1 == 1)
        .fold(0, |acc, (_, &to)| acc | 1 << (k - 1 - to));
    high | moved
}

/// Permutation average over the lowest `k` qubits of a dense operator.
/// Mode permutations are qubit permutations here: sign strings are not tracked.
pub(crate) fn shuffle_low_modes(m: &CMatrix, k: usize) -> Result<CMatrix> {
    if k > MAX_DENSE_MODES {
        return Err(Error::InvalidParameter(format!(
            "dense shuffle supports at most {MAX_DENSE_MODES} modes, got {k}"
        )));
    }
    let dim = m.nrows();
    let perms = permutations(k);
    let mut out = CMatrix::zeros(dim, dim);
    for perm in &perms {
        let map: Vec<usize> = (0..dim).map(|i| permute_modes(i, perm)).collect();
        for c in 0..dim {
            for r in 0..dim {
                out[(map[r], map[c])] += m[(r, c)];
            }
        }
    }
    Ok(out.unscale(perms.len() as f64))
}

/// `S[ρ^rf]` for a dense state of `K ≤ 6` frame modes.
pub fn shuffle(rho_rf: &DensityOperator) -> Result<DensityOperator> {
    let dims = rho_rf.spec().dims();
    if dims.iter().any(|&d| d != 2) {
        return Err(Error::InvalidSpec(format!("expected K mode qubits, got {dims:?}")));
    }
    let m = shuffle_low_modes(rho_rf.matrix(), dims.len())?;
    DensityOperator::from_matrix_unchecked(rho_rf.spec().clone(), m)
}

/// Total-occupation weights `w_n` of a diagonal frame state over `K` modes.
pub fn occupancy_distribution(diagonal: &[f64]) -> Vec<f64> {
    let k = diagonal.len().trailing_zeros() as usize;
    let mut w = vec![0.0; k + 1];
    for (i, &d) in diagonal.iter().enumerate() {
        w[i.count_ones() as usize] += d;
    }
    w
}

/// The permutation-symmetric diagonal with total-occupation weights `w_n`:
/// each configuration of `n` occupied modes gets `w_n / C(K, n)`.
pub fn symmetric_diagonal(weights: &[f64]) -> Vec<f64> {
    let k = weights.len() - 1;
    let mut count = vec![0usize; k + 1];
    for i in 0..1usize << k {
        count[i.count_ones() as usize] += 1;
    }
    (0..1usize << k)
        .map(|i| {
            let n = i.count_ones() as usize;
            weights[n] / count[n] as f64
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::C64;
    use crate::states::HilbertSpec;

    #[test]
    fn permutation_counts() {
        assert_eq!(permutations(0).len(), 1);
        assert_eq!(permutations(4).len(), 24);
        let mut all = permutations(4);
        all.sort();
        all.dedup();
        assert_eq!(all.len(), 24);
    }

    #[test]
    fn single_occupancy_orbit() {
        let spec = HilbertSpec::qubits(3, "mode").unwrap();
        let rho = DensityOperator::basis_projector(spec, 0b100).unwrap();
        let s = shuffle(&rho).unwrap();
        for i in 0..8usize {
            let expect = if i.count_ones() == 1 { 1.0 / 3.0 } else { 0.0 };
            assert!((s.matrix()[(i, i)].re - expect).abs() < 1e-15);
        }
    }

    #[test]
    fn product_state_is_fixed() {
        let spec = HilbertSpec::qubits(4, "mode").unwrap();
        let diag: Vec<f64> = (0..16usize)
            .map(|i| 0.7f64.powi(i.count_ones() as i32) * 0.3f64.powi(4 - i.count_ones() as i32))
            .collect();
        let rho = DensityOperator::diagonal(spec, &diag).unwrap();
        let s = shuffle(&rho).unwrap();
        assert!((s.matrix() - rho.matrix()).norm() < 1e-15);
    }

    #[test]
    fn idempotent_and_matches_occupancy_form() {
        let spec = HilbertSpec::qubits(4, "mode").unwrap();
        let raw: Vec<f64> = (0..16).map(|i| ((i * 7 + 3) % 11) as f64 + 0.5).collect();
        let total: f64 = raw.iter().sum();
        let diag: Vec<f64> = raw.iter().map(|x| x / total).collect();
        let rho = DensityOperator::diagonal(spec, &diag).unwrap();
        let once = shuffle(&rho).unwrap();
        let twice = shuffle(&once).unwrap();
        assert!((once.matrix() - twice.matrix()).norm() < 1e-15);
        let compressed = symmetric_diagonal(&occupancy_distribution(&diag));
        for (i, w) in compressed.iter().enumerate() {
            assert!((once.matrix()[(i, i)] - C64::new(*w, 0.0)).norm() < 1e-15);
        }
    }
}
