//! Real sections of twistor spaces over the projective line.
//!
//! A twistor model is a family of fiber equations in the total space of
//! `⊕ O(kᵢ) → P¹` together with a real structure covering the antipodal map.
//! Its real sections form a real algebraic set `X` cut out by polynomial
//! equations on the section coefficients. The crate builds those equations,
//! evaluates the incidence maps `X → Z_ζ`, and checks the conditions under
//! which `X` is a (weakly) hypercomplex space: discrete incidence fibres,
//! unbranched incidence away from `Sing(X)`, normal bundles `O(1)^{⊕2n}`, and
//! discreteness of sections through pairs of fiber points.

pub mod analyzer;
pub mod error;
pub mod p1alg;
pub mod quotient;
pub mod scalar;
pub mod symbolic;
pub mod tolerances;
pub mod twistor_model;

pub use error::{Error, Result};
