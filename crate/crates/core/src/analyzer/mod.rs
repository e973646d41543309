//! Analysis of the real section space `X` of a twistor model.

mod classify;
mod fiber;
mod matrix;
mod membership;
pub mod newton;
mod normal;
mod scan;

use serde::{Deserialize, Serialize};

use crate::tolerances::{DEDUP_RADIUS, MEMBERSHIP_TOL, NEWTON_MAX_ITERS, NEWTON_TOL, RANK_REL_TOL};

pub use classify::{
    certify_family, classify_hc, sigma_image, singular_fiber_points, FamilyReport,
    HCClassification, SingularFiberPoint, Verdict,
};
pub use fiber::{fiber_solve, rotate_section, FiberMethod, FiberSolution};
pub use matrix::{
    component_label, matrix_model_oracle, rank4, section_matrix_model, shifted,
    shifted_identity_residual, sym_matrix_model, trace, ComponentLabel, Mat4, MatrixOracleReport,
};
pub use membership::{
    incidence_rows, jacobian_rank, membership, phi_eval, FiberPoint, MembershipReport,
};
pub use normal::{normal_splitting, DegenerateLocus, NormalBundleReport};
pub use scan::{
    branch_test, sample_sections, singular_scan, BranchReport, BranchVerdict, ScannedPoint,
    SingularCluster, SingularReport,
};

/// Tolerances and sampling parameters shared by the numerical analyses.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisConfig {
    pub seed: u64,
    pub membership_tol: f64,
    pub rank_rel_tol: f64,
    pub newton_tol: f64,
    pub newton_max_iters: usize,
    pub dedup_radius: f64,
    /// Starting points per multistart solve.
    pub multistart: usize,
    /// Random sections sampled by the classification scan.
    pub scan_samples: usize,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        Self {
            seed: 20_240_601,
            membership_tol: MEMBERSHIP_TOL,
            rank_rel_tol: RANK_REL_TOL,
            newton_tol: NEWTON_TOL,
            newton_max_iters: NEWTON_MAX_ITERS,
            dedup_radius: DEDUP_RADIUS,
            multistart: 24,
            scan_samples: 40,
        }
    }
}

/// Removes points closer than `radius` to an earlier point.
pub fn dedup_points(points: Vec<Vec<f64>>, radius: f64) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = Vec::new();
    for p in points {
        let near = out.iter().any(|q| {
            let d: f64 = q
                .iter()
                .zip(&p)
                .map(|(a, b)| (a - b).powi(2))
                .sum::<f64>()
                .sqrt();
            d <= radius * (1.0 + p.iter().map(|v| v * v).sum::<f64>().sqrt())
        });
        if !near {
            out.push(p);
        }
    }
    out
}
