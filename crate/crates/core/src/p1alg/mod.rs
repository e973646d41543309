//! Polynomial algebra on the projective line.
//!
//! Sections of `O(k)` are polynomials of degree at most `k` in the standard
//! affine coordinate `ζ`; the value in the chart at infinity is
//! `s̃(ζ̃) = ζ̃^k s(1/ζ̃)`.

mod point;
mod poly;
mod reality;
mod splitting;

pub use point::{Chart, P1Point};
pub use poly::CoeffPoly;
pub use reality::{
    check_rules, reality_fixed_space, tau_pullback, CoeffSlot, ParamComponent, ParamKind,
    ParamLayout, RealParamBasis, SigmaCoordRule,
};
pub use splitting::{h0_from_splitting, kernel_splitting, nullspace_dimension, SplittingType};
