//! Finite groups of unit quaternions and the component count of closure
//! quotients.

mod census;
mod group;

pub use census::{
    census_involutions, component_count, proper_quotient_predicate, veronese_quotient_check,
    ActionKind, ComponentCount, InvolutionCensus, VeroneseReport, VeroneseSample,
};
pub use nalgebra::Quaternion;

pub use group::{
    binary_dihedral, builtin_group, cyclic, quaternion_group, FiniteQuaternionGroup, GroupSource,
};
