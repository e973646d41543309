//! Newton-type solvers with minimum-norm steps for under- and
//! overdetermined systems.

use nalgebra::{DMatrix, DVector};

use crate::scalar::{numeric_rank_with, C64};
use crate::tolerances::JACOBIAN_ABS_TOL;
use crate::tolerances::{MEMBERSHIP_TOL, RANK_REL_TOL};

#[derive(Debug, Clone)]
pub struct NewtonOutcome<T> {
    pub point: Vec<T>,
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Minimum-norm least-squares solution of `J x = r`.
pub fn min_norm_solve(j: &DMatrix<f64>, r: &DVector<f64>) -> DVector<f64> {
    if j.nrows() == 0 || j.ncols() == 0 {
        return DVector::zeros(j.ncols());
    }
    let svd = j.clone().svd(true, true);
    let smax = svd.singular_values.max();
    svd.solve(r, RANK_REL_TOL * smax.max(f64::MIN_POSITIVE))
        .unwrap_or_else(|_| DVector::zeros(j.ncols()))
}

fn min_norm_solve_complex(j: &DMatrix<C64>, r: &DVector<C64>) -> DVector<C64> {
    if j.nrows() == 0 || j.ncols() == 0 {
        return DVector::zeros(j.ncols());
    }
    let svd = j.clone().svd(true, true);
    let smax = svd.singular_values.max();
    svd.solve(r, RANK_REL_TOL * smax.max(f64::MIN_POSITIVE))
        .unwrap_or_else(|_| DVector::zeros(j.ncols()))
}

/// Residual threshold for accepting a Newton limit.
pub fn accept_threshold(norm_sqr: f64) -> f64 {
    MEMBERSHIP_TOL * (1.0 + norm_sqr)
}

/// Gauss-Newton iteration for a real system given as `x ↦ (F(x), DF(x))`.
pub fn gauss_newton<F>(system: F, x0: Vec<f64>, tol: f64, max_iters: usize) -> NewtonOutcome<f64>
where
    F: Fn(&[f64]) -> (DVector<f64>, DMatrix<f64>),
{
    let mut x = DVector::from_vec(x0);
    let mut iterations = 0;
    let (mut r, mut j) = system(x.as_slice());
    while iterations < max_iters {
        // keep iterating past the acceptance threshold so that slow
        // (singular) convergence still reaches the limit point
        let scale = 1.0 + x.norm_squared();
        if r.is_empty() || r.amax() <= 1e-3 * tol * scale {
            break;
        }
        let step = min_norm_solve(&j, &r);
        x -= &step;
        iterations += 1;
        (r, j) = system(x.as_slice());
        if !x.iter().all(|v| v.is_finite()) {
            break;
        }
        if step.norm() <= tol * (1.0 + x.norm()) {
            break;
        }
    }
    let residual = if r.is_empty() { 0.0 } else { r.amax() };
    let converged =
        x.iter().all(|v| v.is_finite()) && residual <= accept_threshold(x.norm_squared());
    NewtonOutcome {
        point: x.as_slice().to_vec(),
        residual,
        iterations,
        converged,
    }
}

/// Newton iteration for a holomorphic system.
pub fn complex_newton<F>(system: F, x0: Vec<C64>, tol: f64, max_iters: usize) -> NewtonOutcome<C64>
where
    F: Fn(&[C64]) -> (DVector<C64>, DMatrix<C64>),
{
    let mut x = DVector::from_vec(x0);
    let mut iterations = 0;
    let (mut r, mut j) = system(x.as_slice());
    let amax = |v: &DVector<C64>| v.iter().map(|c| c.norm()).fold(0.0, f64::max);
    while iterations < max_iters {
        let scale = 1.0 + x.norm_squared();
        if amax(&r) <= 1e-3 * tol * scale {
            break;
        }
        let step = min_norm_solve_complex(&j, &r);
        x -= &step;
        iterations += 1;
        (r, j) = system(x.as_slice());
        if !x.iter().all(|v| v.re.is_finite() && v.im.is_finite()) {
            break;
        }
        if step.norm() <= tol * (1.0 + x.norm()) {
            break;
        }
    }
    let residual = amax(&r);
    let finite = x.iter().all(|v| v.re.is_finite() && v.im.is_finite());
    let converged = finite && residual <= accept_threshold(x.norm_squared());
    NewtonOutcome {
        point: x.as_slice().to_vec(),
        residual,
        iterations,
        converged,
    }
}

/// Numerical rank of a real matrix.
pub fn matrix_rank(m: &DMatrix<f64>, rel_tol: f64) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    numeric_rank_with(
        m.clone().svd(false, false).singular_values.as_slice(),
        rel_tol,
    )
}

/// Rank of a Jacobian evaluated at `p`: relative cutoff plus an absolute
/// floor scaled by `1 + |p|`.
pub fn point_rank(m: &DMatrix<f64>, p: &[f64], rel_tol: f64) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let sv = m.clone().svd(false, false).singular_values;
    let cut = point_cutoff(sv.as_slice(), p, rel_tol);
    sv.iter().filter(|&&s| s > cut).count()
}

fn point_cutoff(sv: &[f64], p: &[f64], rel_tol: f64) -> f64 {
    let smax = sv.iter().copied().fold(0.0_f64, f64::max);
    let norm = p.iter().map(|v| v * v).sum::<f64>().sqrt();
    (rel_tol * smax).max(JACOBIAN_ABS_TOL * (1.0 + norm))
}

/// Null space of a Jacobian evaluated at `p`, with the cutoff of [`point_rank`].
pub fn point_null_space(m: &DMatrix<f64>, p: &[f64], rel_tol: f64) -> Vec<DVector<f64>> {
    null_space_by(m, |sv| {
        let cut = point_cutoff(sv, p, rel_tol);
        sv.iter().filter(|&&s| s > cut).count()
    })
}

/// Orthonormal basis of the numerical null space, as columns.
pub fn null_space(m: &DMatrix<f64>, rel_tol: f64) -> Vec<DVector<f64>> {
    null_space_by(m, |sv| numeric_rank_with(sv, rel_tol))
}

fn null_space_by(m: &DMatrix<f64>, rank_of: impl Fn(&[f64]) -> usize) -> Vec<DVector<f64>> {
    let n = m.ncols();
    if m.nrows() == 0 {
        return (0..n)
            .map(|i| DVector::from_fn(n, |k, _| if k == i { 1.0 } else { 0.0 }))
            .collect();
    }
    // pad to a square matrix so that V is complete
    let mut padded = DMatrix::zeros(m.nrows().max(n), n);
    padded.view_mut((0, 0), (m.nrows(), n)).copy_from(m);
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("requested V");
    let sv = &svd.singular_values;
    let rank = rank_of(sv.as_slice());
    let mut order: Vec<usize> = (0..sv.len()).collect();
    order.sort_by(|&a, &b| sv[b].total_cmp(&sv[a]));
    order[rank..]
        .iter()
        .map(|&i| v_t.row(i).transpose())
        .collect()
}
