use nalgebra::DMatrix;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::p1alg::{P1Point, RealParamBasis};
use crate::twistor_model::RealEquationSystem;

use super::fiber::augmented;
use super::newton::{gauss_newton, point_rank};
use super::{incidence_rows, membership, phi_eval, AnalysisConfig};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScannedPoint {
    pub params: Vec<f64>,
    pub member: bool,
    pub rank: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SingularCluster {
    /// Indices into [`SingularReport::points`].
    pub members: Vec<usize>,
    pub diameter: f64,
    /// Local dimension of the sampled cluster (0 for a single point).
    pub dimension_estimate: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SingularReport {
    pub points: Vec<ScannedPoint>,
    pub regular_rank: usize,
    /// Indices of members whose Jacobian rank is below the regular rank.
    pub singular: Vec<usize>,
    pub clusters: Vec<SingularCluster>,
}

impl SingularReport {
    /// True when every cluster of singular points is a single point.
    pub fn singular_points_isolated(&self, radius: f64) -> bool {
        self.clusters
            .iter()
            .all(|c| c.dimension_estimate == 0 && c.diameter <= radius)
    }
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).powi(2))
        .sum::<f64>()
        .sqrt()
}

/// Classifies candidate points by Jacobian rank and clusters the
/// rank-deficient members.
pub fn singular_scan(
    sys: &RealEquationSystem,
    candidates: &[Vec<f64>],
    cfg: &AnalysisConfig,
) -> Result<SingularReport> {
    let mut points = Vec::with_capacity(candidates.len());
    for p in candidates {
        let member = membership(sys, p, cfg.membership_tol)?.passed;
        let rank = if sys.is_empty() {
            0
        } else {
            point_rank(&sys.jacobian_f64(p), p, cfg.rank_rel_tol)
        };
        points.push(ScannedPoint {
            params: p.clone(),
            member,
            rank,
        });
    }
    let regular_rank = sys.expected_regular_rank.unwrap_or_else(|| {
        points
            .iter()
            .filter(|p| p.member)
            .map(|p| p.rank)
            .max()
            .unwrap_or(0)
    });
    let singular: Vec<usize> = (0..points.len())
        .filter(|&i| points[i].member && points[i].rank < regular_rank)
        .collect();
    let clusters = cluster(&points, &singular, cfg.dedup_radius);
    Ok(SingularReport {
        points,
        regular_rank,
        singular,
        clusters,
    })
}

fn cluster(points: &[ScannedPoint], singular: &[usize], radius: f64) -> Vec<SingularCluster> {
    let pts: Vec<&[f64]> = singular
        .iter()
        .map(|&i| points[i].params.as_slice())
        .collect();
    let n = pts.len();
    if n == 0 {
        return Vec::new();
    }
    // link radius from the typical nearest-neighbour spacing
    let mut nn: Vec<f64> = (0..n)
        .filter_map(|i| {
            (0..n)
                .filter(|&j| j != i)
                .map(|j| dist(pts[i], pts[j]))
                .min_by(f64::total_cmp)
        })
        .collect();
    nn.sort_by(f64::total_cmp);
    let link = nn
        .get(nn.len() / 2)
        .map_or(radius, |m| (4.0 * m).max(radius));
    let mut label = vec![usize::MAX; n];
    let mut next = 0;
    for start in 0..n {
        if label[start] != usize::MAX {
            continue;
        }
        label[start] = next;
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            for j in 0..n {
                if label[j] == usize::MAX && dist(pts[i], pts[j]) <= link {
                    label[j] = next;
                    stack.push(j);
                }
            }
        }
        next += 1;
    }
    (0..next)
        .map(|c| {
            let idx: Vec<usize> = (0..n).filter(|&i| label[i] == c).collect();
            let diameter = idx
                .iter()
                .flat_map(|&i| idx.iter().map(move |&j| (i, j)))
                .map(|(i, j)| dist(pts[i], pts[j]))
                .fold(0.0, f64::max);
            let members: Vec<usize> = idx.iter().map(|&i| singular[i]).collect();
            let dimension_estimate = if diameter <= radius {
                0
            } else {
                local_dimension(&idx.iter().map(|&i| pts[i]).collect::<Vec<_>>())
            };
            SingularCluster {
                members,
                diameter,
                dimension_estimate,
            }
        })
        .collect()
}

/// Median over points of the number of significant principal directions of
/// the nearest neighbours.
fn local_dimension(pts: &[&[f64]]) -> usize {
    let n = pts.len();
    if n < 3 {
        return n - 1;
    }
    let k = (n - 1).min(8);
    let dim = pts[0].len();
    let mut estimates: Vec<usize> = pts
        .iter()
        .map(|p| {
            let mut others: Vec<&[f64]> = pts
                .iter()
                .copied()
                .filter(|q| !std::ptr::eq(*q, *p))
                .collect();
            others.sort_by(|a, b| dist(a, p).total_cmp(&dist(b, p)));
            let hood = &others[..k];
            let m = DMatrix::from_fn(k, dim, |r, c| hood[r][c] - p[c]);
            let sv = m.svd(false, false).singular_values;
            let smax = sv.max();
            sv.iter().filter(|&&s| s > 0.3 * smax).count()
        })
        .collect();
    estimates.sort_unstable();
    estimates[estimates.len() / 2]
}

/// Random points of `X`, obtained by projecting random parameter vectors
/// with Gauss-Newton.
pub fn sample_sections<G: Rng>(
    sys: &RealEquationSystem,
    count: usize,
    rng: &mut G,
    cfg: &AnalysisConfig,
) -> Vec<Vec<f64>> {
    let n = sys.nvars();
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0;
    while out.len() < count && attempts < 4 * count {
        attempts += 1;
        let x0: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.5..1.5)).collect();
        if sys.is_empty() {
            out.push(x0);
            continue;
        }
        let res = gauss_newton(
            |x: &[f64]| {
                (
                    nalgebra::DVector::from_vec(sys.residuals_f64(x)),
                    sys.jacobian_f64(x),
                )
            },
            x0,
            cfg.newton_tol,
            cfg.newton_max_iters,
        );
        if res.converged {
            out.push(res.point);
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BranchVerdict {
    Unbranched,
    Branched,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BranchReport {
    pub verdict: BranchVerdict,
    pub zeta: P1Point,
    pub augmented_rank: usize,
    pub nvars: usize,
}

/// `p` is unbranched for the incidence at `ζ` when it is an isolated,
/// multiplicity-one solution of the system plus incidence equations.
pub fn branch_test(
    basis: &RealParamBasis,
    sys: &RealEquationSystem,
    p: &[f64],
    zeta: &P1Point,
    cfg: &AnalysisConfig,
) -> Result<BranchReport> {
    if !membership(sys, p, cfg.membership_tol)?.passed {
        return Err(Error::Fiber(
            "parameter vector does not satisfy the real system".into(),
        ));
    }
    let target = phi_eval(basis, p, zeta)?;
    let (l, b) = incidence_rows(basis, zeta, &target.values)?;
    let (_, j) = augmented(sys, &l, &b, p);
    let augmented_rank = point_rank(&j, p, cfg.rank_rel_tol);
    let verdict = if augmented_rank == sys.nvars() {
        BranchVerdict::Unbranched
    } else {
        BranchVerdict::Branched
    };
    Ok(BranchReport {
        verdict,
        zeta: *zeta,
        augmented_rank,
        nvars: sys.nvars(),
    })
}
