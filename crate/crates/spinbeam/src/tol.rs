//! Numerical tolerances used across the crate and its test suites.
//!
//! Two regimes cover everything at desk scale (a few hundred sites):
//! identities that are exact up to rounding of a handful of arithmetic
//! operations, and quantities that pass through a full eigendecomposition.

/// Algebraic identities: orthogonality of constructed bases, off-block
/// entries of transformed Hamiltonians, closed-form coefficient checks.
pub const ALGEBRAIC: f64 = 1e-12;

/// Anything routed through LAPACK: spectral reconstruction residuals,
/// eigenvalue multiset comparisons, norm conservation under evolution.
pub const SPECTRAL: f64 = 1e-10;

/// Agreement between eigendecomposition evolution and an independent
/// fixed-step integrator on small (<= 20 site) networks.
pub const INTEGRATOR_ORACLE: f64 = 1e-6;
