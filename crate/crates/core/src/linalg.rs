//! Small dense complex linear-algebra helpers built on `nalgebra`.

use nalgebra::{DMatrix, DVector, Matrix2};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;
pub type Mat2 = Matrix2<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// `e^{i x}`
#[inline]
pub fn cis(x: f64) -> C64 {
    C64::from_polar(1.0, x)
}

/// Hermitian part `(A + A†)/2`.
pub fn hermitian_part(a: &CMatrix) -> CMatrix {
    (a + a.adjoint()).scale(0.5)
}

/// Eigen-decomposition of a Hermitian matrix. Returns real eigenvalues and the
/// unitary whose columns are the eigenvectors.
pub fn hermitian_eigen(a: &CMatrix) -> (Vec<f64>, CMatrix) {
    let eig = hermitian_part(a).symmetric_eigen();
    (eig.eigenvalues.iter().copied().collect(), eig.eigenvectors)
}

/// Eigenvalues of a Hermitian matrix.
pub fn hermitian_eigenvalues(a: &CMatrix) -> Vec<f64> {
    hermitian_part(a)
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .collect()
}

/// Applies `f` to the spectrum of a Hermitian matrix: `V f(Λ) V†`.
pub fn hermitian_function(a: &CMatrix, f: impl Fn(f64) -> C64) -> CMatrix {
    let (vals, vecs) = hermitian_eigen(a);
    let n = vals.len();
    let mut scaled = vecs.clone();
    for (j, &lambda) in vals.iter().enumerate() {
        let fj = f(lambda);
        for i in 0..n {
            scaled[(i, j)] *= fj;
        }
    }
    scaled * vecs.adjoint()
}

/// Time-evolution operator `exp(-i H t)` for Hermitian `H`.
pub fn evolution_operator(h: &CMatrix, t: f64) -> CMatrix {
    hermitian_function(h, |lambda| cis(-lambda * t))
}

/// Square root of a positive semidefinite matrix; negative eigenvalues are clamped to zero.
pub fn psd_sqrt(a: &CMatrix) -> CMatrix {
    hermitian_function(a, |lambda| C64::new(lambda.max(0.0).sqrt(), 0.0))
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// `U ρ U†`
pub fn conjugate(u: &CMatrix, rho: &CMatrix) -> CMatrix {
    u * rho * u.adjoint()
}

/// `U ρ U†` for 2×2 operators.
#[inline]
pub fn conjugate2(u: &Mat2, rho: &Mat2) -> Mat2 {
    u * rho * u.adjoint()
}

/// `exp(-i θ σ_x) = cos θ · 1 − i sin θ · σ_x`.
#[inline]
pub fn x_rotation(theta: f64) -> Mat2 {
    let (s, c) = theta.sin_cos();
    Mat2::new(C64::new(c, 0.0), C64::new(0.0, -s), C64::new(0.0, -s), C64::new(c, 0.0))
}

/// `diag(1, e^{-iφ})`
#[inline]
pub fn lower_phase(phi: f64) -> Mat2 {
    Mat2::new(ONE, ZERO, ZERO, cis(-phi))
}

/// Projector `|ψ⟩⟨ψ|` for a 2-vector.
pub fn projector2(a: C64, b: C64) -> Mat2 {
    Mat2::new(a * a.conj(), a * b.conj(), b * a.conj(), b * b.conj())
}

/// Trace norm distance `½‖a − b‖₁` between 2×2 Hermitian matrices.
pub fn trace_distance2(a: &Mat2, b: &Mat2) -> f64 {
    let d = a - b;
    // eigenvalues of a 2x2 Hermitian: (tr ± sqrt(tr^2 - 4 det)) / 2
    let tr = (d[(0, 0)] + d[(1, 1)]).re;
    let det = (d[(0, 0)] * d[(1, 1)] - d[(0, 1)] * d[(1, 0)]).re;
    let disc = (tr * tr - 4.0 * det).max(0.0).sqrt();
    0.5 * (((tr + disc) / 2.0).abs() + ((tr - disc) / 2.0).abs())
}

/// Largest absolute entry of `a − b`.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}
