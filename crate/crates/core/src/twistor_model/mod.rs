//! Twistor models: bundle degrees, fiber equations and a real structure.

mod equation;
mod expr;
mod format;
mod model;
mod squaring;
mod system;
mod validate;

pub use equation::{ChartEquation, FiberEquation, FiberTerm};
pub use expr::parse_polynomial;
pub use format::{complex_from_json, complex_to_json, model_from_json, model_to_json};
pub use model::{
    build_deformed, build_quadric, build_smooth_o11, glue_cone_twistor, quadric_rules,
    quaternionic_pair_rules, CoeffFactor, ComponentEquation, ComponentTerm, ConePolynomial,
    LambdaReality, TwistorModel,
};
pub use squaring::{squaring_section, QuadricSection, SquaringVariant};
pub use system::{real_section_system, RealEquationSystem};
pub use validate::{
    ensure_valid, validate_model, ValidationFailure, ValidationIssue, ValidationReport,
};
