//! Numerical thresholds shared by every module.
//!
//! Validation entry points without an explicit `Tolerances` argument use
//! [`Tolerances::DEFAULT`]; the `*_with` variants accept a tighter record.

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Max entrywise |M - M^dagger| accepted for a density matrix.
    pub hermitian: f64,
    /// Max |tr(rho) - 1| for a normalized state.
    pub trace: f64,
    /// Smallest eigenvalue accepted for a PSD operator.
    pub min_eigenvalue: f64,
    /// Max |<psi|psi> - 1| for a pure state.
    pub pure_norm: f64,
    /// Hermiticity threshold for the eigensolver's input check.
    pub eig_hermitian: f64,
    /// Eigenvalues of a partial transpose below this magnitude count as zero.
    pub negativity_cutoff: f64,
    /// Max completeness defect for a trace-preserving channel.
    pub completeness: f64,
    /// Max Choi distance for two channels to be considered equal.
    pub channel_equality: f64,
    /// Application weights below this are treated as impossible outcomes.
    pub min_weight: f64,
    /// Fidelity differences below this are ties during reversal search.
    pub fidelity_tie: f64,
    /// Max |sum q - 1| for a noise spectrum.
    pub spectrum_sum: f64,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        hermitian: 1e-10,
        trace: 1e-10,
        min_eigenvalue: -1e-10,
        pure_norm: 1e-12,
        eig_hermitian: 1e-8,
        negativity_cutoff: 1e-12,
        completeness: 1e-10,
        channel_equality: 1e-10,
        min_weight: 1e-14,
        fidelity_tie: 1e-12,
        spectrum_sum: 1e-12,
    };
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}
