//! Numerical tolerances shared by every module.

/// Residual every construction aims for.
pub const TARGET: f64 = 1e-12;

/// Residual below which a check is declared passed.
pub const ACCEPT: f64 = 1e-10;

/// Eigenvalues in `(-EIGEN_CLIP, 0)` are treated as exact zeros; anything
/// more negative is a PSD violation.
pub const EIGEN_CLIP: f64 = 1e-12;

/// Sector weights at or below this are dropped from reduced blocks.
pub const ZERO_WEIGHT: f64 = 1e-15;

/// Tolerance on the unit norm of a sector state.
pub const NORM: f64 = 1e-10;

/// Relative (to the spectral width) threshold below which a level spacing
/// counts as degenerate.
pub const DEGENERATE_SPACING: f64 = 1e-12;

/// Two subsystem fractions closer than this are considered equal (used for
/// the `f = 1/2` Kronecker deltas).
pub const FRACTION: f64 = 1e-12;
