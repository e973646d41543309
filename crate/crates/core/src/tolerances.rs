//! Default numerical thresholds.
//!
//! Each pair of neighbouring thresholds is separated by at least two orders of
//! magnitude so that a residual cannot be mistaken for a rank drop or a
//! duplicate solution.

/// Membership: `max |residual| <= MEMBERSHIP_TOL * (1 + |p|^2)`.
pub const MEMBERSHIP_TOL: f64 = 1e-9;

/// Singular values below `RANK_REL_TOL * sigma_max` count as zero.
pub const RANK_REL_TOL: f64 = 1e-7;

/// Jacobian singular values at a point `p` below `JACOBIAN_ABS_TOL * (1 + |p|)`
/// count as zero as well. Newton converges only linearly onto singular
/// points, so those are located to roughly the square root of the residual
/// tolerance.
pub const JACOBIAN_ABS_TOL: f64 = 1e-6;

/// A matrix whose largest singular value is below this is treated as zero.
pub const RANK_ABS_FLOOR: f64 = 1e-14;

/// Newton convergence threshold (relative residual).
pub const NEWTON_TOL: f64 = 1e-12;

pub const NEWTON_MAX_ITERS: usize = 50;

/// Two solutions closer than this are the same solution.
pub const DEDUP_RADIUS: f64 = 1e-6;

/// Analytic Jacobian vs central finite differences.
pub const FD_REL_TOL: f64 = 1e-6;

/// Quaternion products are matched to group elements within this distance.
pub const GROUP_MUL_TOL: f64 = 1e-12;

/// Coefficients below this (relative to the polynomial's scale) are dropped
/// when locating zeros of floating point polynomials.
pub const COEFF_ZERO_TOL: f64 = 1e-10;
