//! Numerical tolerances shared by every module.

/// Tolerance knobs used when validating states and comparing results.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Absolute tolerance for exact-arithmetic comparisons.
    pub atol: f64,
    /// Slack allowed on Hermiticity, trace and positivity of density operators.
    pub state: f64,
    /// Largest number of matrix entries a dense operator may hold.
    pub max_entries: usize,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        atol: 1e-10,
        state: 1e-9,
        max_entries: 1 << 22,
    };
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}

/// Largest Poisson tail weight tolerated beyond a Fock truncation.
pub const POISSON_TAIL: f64 = 1e-10;

/// Largest vacuum weight for which the relational map is considered defined.
pub const VACUUM_SUPPORT: f64 = 1e-9;
