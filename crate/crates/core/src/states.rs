//! Dense finite-dimensional quantum states: composite spaces, partial trace,
//! fidelity and trace distance.
//!
//! Every operator lives on a [`HilbertSpec`], an ordered list of tensor
//! factors. Factor 0 is the most significant index in the Kronecker
//! ordering, so `tensor(a, b)` places `a`'s factors before `b`'s.

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, CVector, C64, ZERO};
use crate::tolerance::Tolerances;

/// Ordered tensor-product structure of a finite-dimensional Hilbert space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HilbertSpec {
    dims: Vec<usize>,
    labels: Vec<String>,
}

impl HilbertSpec {
    pub fn new<S: Into<String>>(factors: impl IntoIterator<Item = (usize, S)>) -> Result<Self> {
        let (dims, labels): (Vec<usize>, Vec<String>) =
            factors.into_iter().map(|(d, l)| (d, l.into())).unzip();
        if dims.is_empty() {
            return Err(Error::InvalidSpec("no factors".into()));
        }
        if let Some(pos) = dims.iter().position(|&d| d == 0) {
            return Err(Error::InvalidSpec(format!("factor '{}' has dimension 0", labels[pos])));
        }
        dims.iter()
            .try_fold(1usize, |acc, &d| acc.checked_mul(d))
            .ok_or_else(|| Error::InvalidSpec("total dimension overflows".into()))?;
        Ok(Self { dims, labels })
    }

    /// Single factor space.
    pub fn single(dim: usize, label: &str) -> Result<Self> {
        Self::new([(dim, label)])
    }

    /// `count` qubit factors labelled `prefix_0`, `prefix_1`, ...
    pub fn qubits(count: usize, prefix: &str) -> Result<Self> {
        Self::new((0..count).map(|i| (2, format!("{prefix}_{i}"))))
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn num_factors(&self) -> usize {
        self.dims.len()
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }

    /// Concatenation of factor lists (the space of `self ⊗ other`).
    pub fn concat(&self, other: &HilbertSpec) -> HilbertSpec {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        let mut labels = self.labels.clone();
        labels.extend_from_slice(&other.labels);
        HilbertSpec { dims, labels }
    }

    /// Sub-space made of the listed factors, in the listed order.
    fn select(&self, factors: &[usize]) -> HilbertSpec {
        HilbertSpec {
            dims: factors.iter().map(|&f| self.dims[f]).collect(),
            labels: factors.iter().map(|&f| self.labels[f].clone()).collect(),
        }
    }

    /// Mixed-radix digits of a flat index, most significant factor first.
    pub fn digits(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.dims.len()];
        for (slot, &d) in out.iter_mut().zip(&self.dims).rev() {
            *slot = index % d;
            index /= d;
        }
        out
    }

    /// Flat index of mixed-radix digits.
    pub fn index(&self, digits: &[usize]) -> usize {
        digits.iter().zip(&self.dims).fold(0, |acc, (&x, &d)| acc * d + x)
    }
}

/// Density operator on a labelled composite space.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    spec: HilbertSpec,
    matrix: CMatrix,
}

impl DensityOperator {
    /// Validated construction: Hermitian, unit trace, positive semidefinite.
    pub fn new(spec: HilbertSpec, matrix: CMatrix) -> Result<Self> {
        Self::with_trace(spec, matrix, 1.0, &Tolerances::DEFAULT)
    }

    /// Validated construction for a subnormalized branch of stated trace.
    pub fn with_trace(
        spec: HilbertSpec,
        matrix: CMatrix,
        trace: f64,
        tol: &Tolerances,
    ) -> Result<Self> {
        let rho = Self::from_matrix_unchecked(spec, matrix)?;
        rho.validate(trace, tol)?;
        Ok(rho)
    }

    /// Shape-checked construction without physical validation.
    pub fn from_matrix_unchecked(spec: HilbertSpec, matrix: CMatrix) -> Result<Self> {
        let n = spec.total_dim();
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(Error::DimensionMismatch { expected: n, found: matrix.nrows() });
        }
        Ok(Self { spec, matrix })
    }

    pub fn from_pure(state: &PureState) -> Self {
        let v = &state.amplitudes;
        Self { spec: state.spec.clone(), matrix: v * v.adjoint() }
    }

    /// Diagonal state with the given populations.
    pub fn diagonal(spec: HilbertSpec, populations: &[f64]) -> Result<Self> {
        let n = spec.total_dim();
        if populations.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: populations.len() });
        }
        let diag = CVector::from_iterator(n, populations.iter().map(|&p| C64::new(p, 0.0)));
        Self::new(spec, CMatrix::from_diagonal(&diag))
    }

    /// `I/d`
    pub fn maximally_mixed(spec: HilbertSpec) -> Self {
        let n = spec.total_dim();
        let matrix = CMatrix::identity(n, n).scale(1.0 / n as f64);
        Self { spec, matrix }
    }

    /// `|k⟩⟨k|`
    pub fn basis_projector(spec: HilbertSpec, k: usize) -> Result<Self> {
        let n = spec.total_dim();
        if k >= n {
            return Err(Error::DimensionMismatch { expected: n, found: k });
        }
        let mut matrix = CMatrix::zeros(n, n);
        matrix[(k, k)] = linalg::ONE;
        Ok(Self { spec, matrix })
    }

    pub fn spec(&self) -> &HilbertSpec {
        &self.spec
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::hermitian_eigenvalues(&self.matrix)
    }

    /// `Tr(ρ O)`
    pub fn expectation(&self, op: &CMatrix) -> C64 {
        (&self.matrix * op).trace()
    }

    pub fn hermiticity_defect(&self) -> f64 {
        linalg::max_abs_diff(&self.matrix, &self.matrix.adjoint())
    }

    /// Checks Hermiticity, trace and positivity against `tol.state`.
    pub fn validate(&self, trace: f64, tol: &Tolerances) -> Result<()> {
        let herm = self.hermiticity_defect();
        if herm > tol.state {
            return Err(Error::InvalidState(format!("not Hermitian (defect {herm:e})")));
        }
        let tr = self.trace();
        if (tr - trace).abs() > tol.state {
            return Err(Error::InvalidState(format!("trace {tr} differs from {trace}")));
        }
        let min = self.eigenvalues().into_iter().fold(f64::INFINITY, f64::min);
        if min < -tol.state {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:e}")));
        }
        Ok(())
    }

    /// Applies `U ρ U†`.
    pub fn evolve(&self, unitary: &CMatrix) -> Result<Self> {
        if unitary.nrows() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: unitary.nrows() });
        }
        Ok(Self { spec: self.spec.clone(), matrix: linalg::conjugate(unitary, &self.matrix) })
    }

    /// Convex (or general linear) combination of states on the same space.
    pub fn mix<'a>(terms: impl IntoIterator<Item = (f64, &'a DensityOperator)>) -> Result<Self> {
        let mut iter = terms.into_iter();
        let (w0, first) = iter
            .next()
            .ok_or_else(|| Error::InvalidParameter("empty mixture".into()))?;
        let mut matrix = first.matrix.scale(w0);
        for (w, rho) in iter {
            if rho.spec != first.spec {
                return Err(Error::InvalidSpec("mixture terms on different spaces".into()));
            }
            matrix += rho.matrix.scale(w);
        }
        Ok(Self { spec: first.spec.clone(), matrix })
    }
}

/// Pure state vector on a labelled composite space.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    spec: HilbertSpec,
    amplitudes: CVector,
    normalized: bool,
}

impl PureState {
    /// Normalized state; the squared norm must be within `1e-10` of one.
    pub fn new(spec: HilbertSpec, amplitudes: CVector) -> Result<Self> {
        let state = Self::branch(spec, amplitudes)?;
        let norm2 = state.norm_sqr();
        if (norm2 - 1.0).abs() > Tolerances::DEFAULT.atol {
            return Err(Error::InvalidState(format!("squared norm {norm2} is not 1")));
        }
        Ok(Self { normalized: true, ..state })
    }

    /// Unnormalized branch vector (e.g. one term of a superposition).
    pub fn branch(spec: HilbertSpec, amplitudes: CVector) -> Result<Self> {
        let n = spec.total_dim();
        if amplitudes.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: amplitudes.len() });
        }
        Ok(Self { spec, amplitudes, normalized: false })
    }

    pub fn basis(spec: HilbertSpec, k: usize) -> Result<Self> {
        let mut v = CVector::zeros(spec.total_dim());
        if k >= v.len() {
            return Err(Error::DimensionMismatch { expected: v.len(), found: k });
        }
        v[k] = linalg::ONE;
        Self::new(spec, v)
    }

    pub fn spec(&self) -> &HilbertSpec {
        &self.spec
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn to_density(&self) -> DensityOperator {
        DensityOperator::from_pure(self)
    }
}

/// Kronecker product of two density operators.
pub fn tensor(a: &DensityOperator, b: &DensityOperator) -> Result<DensityOperator> {
    tensor_with(a, b, &Tolerances::DEFAULT)
}

pub fn tensor_with(
    a: &DensityOperator,
    b: &DensityOperator,
    tol: &Tolerances,
) -> Result<DensityOperator> {
    let n = a.dim().checked_mul(b.dim()).ok_or(Error::StateTooLarge {
        entries: usize::MAX,
        cap: tol.max_entries,
    })?;
    let entries = n.checked_mul(n).unwrap_or(usize::MAX);
    if entries > tol.max_entries {
        return Err(Error::StateTooLarge { entries, cap: tol.max_entries });
    }
    Ok(DensityOperator {
        spec: a.spec.concat(&b.spec),
        matrix: linalg::kron(&a.matrix, &b.matrix),
    })
}

/// Traces out every factor not listed in `keep`. Kept factors retain their
/// original relative order.
pub fn partial_trace(rho: &DensityOperator, keep: &[usize]) -> Result<DensityOperator> {
    if keep.is_empty() {
        return Err(Error::EmptyKeepSet);
    }
    let spec = &rho.spec;
    let nf = spec.num_factors();
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    if let Some(&bad) = kept.iter().find(|&&f| f >= nf) {
        return Err(Error::FactorOutOfRange { index: bad, factors: nf });
    }
    let traced: Vec<usize> = (0..nf).filter(|f| !kept.contains(f)).collect();
    let kept_spec = spec.select(&kept);
    if traced.is_empty() {
        return Ok(DensityOperator { spec: kept_spec, matrix: rho.matrix.clone() });
    }
    let traced_spec = spec.select(&traced);
    let dk = kept_spec.total_dim();
    let dt = traced_spec.total_dim();

    // full index for each (kept, traced) pair
    let mut digits = vec![0usize; nf];
    let full_index = |k: usize, t: usize, digits: &mut Vec<usize>| {
        for (&f, d) in kept.iter().zip(kept_spec.digits(k)) {
            digits[f] = d;
        }
        for (&f, d) in traced.iter().zip(traced_spec.digits(t)) {
            digits[f] = d;
        }
        spec.index(digits)
    };
    let table: Vec<Vec<usize>> = (0..dk)
        .map(|k| (0..dt).map(|t| full_index(k, t, &mut digits)).collect())
        .collect();

    let mut out = CMatrix::zeros(dk, dk);
    for i in 0..dk {
        for j in 0..dk {
            let mut acc = ZERO;
            for t in 0..dt {
                acc += rho.matrix[(table[i][t], table[j][t])];
            }
            out[(i, j)] = acc;
        }
    }
    Ok(DensityOperator { spec: kept_spec, matrix: out })
}

fn check_pair(rho: &DensityOperator, sigma: &DensityOperator) -> Result<()> {
    if rho.spec.dims != sigma.spec.dims {
        return Err(Error::InvalidSpec(format!(
            "state spaces differ: {:?} vs {:?}",
            rho.spec.dims, sigma.spec.dims
        )));
    }
    Ok(())
}

fn check_psd(rho: &DensityOperator, tol: &Tolerances) -> Result<()> {
    if rho.hermiticity_defect() > tol.state {
        return Err(Error::InvalidState("not Hermitian".into()));
    }
    let min = rho.eigenvalues().into_iter().fold(f64::INFINITY, f64::min);
    if min < -tol.state {
        return Err(Error::InvalidState(format!("negative eigenvalue {min:e}")));
    }
    Ok(())
}

/// Uhlmann fidelity `Tr √(√ρ σ √ρ)` (not squared).
pub fn fidelity(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    let tol = Tolerances::DEFAULT;
    check_pair(rho, sigma)?;
    check_psd(rho, &tol)?;
    check_psd(sigma, &tol)?;
    let root = linalg::psd_sqrt(&rho.matrix);
    let inner = &root * &sigma.matrix * &root;
    let f: f64 = linalg::hermitian_eigenvalues(&inner)
        .into_iter()
        .map(|l| l.max(0.0).sqrt())
        .sum();
    Ok(f.clamp(0.0, 1.0))
}

/// `½ Σ |λ_i(ρ − σ)|`
pub fn trace_distance(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    let tol = Tolerances::DEFAULT;
    check_pair(rho, sigma)?;
    check_psd(rho, &tol)?;
    check_psd(sigma, &tol)?;
    let diff = &rho.matrix - &sigma.matrix;
    let d: f64 = linalg::hermitian_eigenvalues(&diff).into_iter().map(f64::abs).sum();
    Ok((0.5 * d).clamp(0.0, 1.0))
}

/// Fidelity of two states diagonal in the same basis: `Σ_i √(r_i s_i)`.
pub fn diagonal_fidelity(r: &[f64], s: &[f64]) -> f64 {
    let n = r.len().max(s.len());
    let at = |v: &[f64], i: usize| v.get(i).copied().unwrap_or(0.0).max(0.0);
    (0..n).map(|i| (at(r, i) * at(s, i)).sqrt()).sum()
}

/// Trace distance of two states diagonal in the same basis: `½ Σ_i |r_i − s_i|`.
pub fn diagonal_trace_distance(r: &[f64], s: &[f64]) -> f64 {
    let n = r.len().max(s.len());
    let at = |v: &[f64], i: usize| v.get(i).copied().unwrap_or(0.0);
    0.5 * (0..n).map(|i| (at(r, i) - at(s, i)).abs()).sum::<f64>()
}
