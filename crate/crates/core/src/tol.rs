//! Default numerical tolerances.

/// Norms and normalization checks.
pub const NORM: f64 = 1e-12;

/// Entrywise matrix identities (unitarity, hermiticity, commutators).
pub const MATRIX: f64 = 1e-10;

/// Probability vectors supplied by callers.
pub const PROBABILITY: f64 = 1e-9;
