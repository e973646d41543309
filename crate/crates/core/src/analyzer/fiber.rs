use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::p1alg::{CoeffPoly, P1Point, RealParamBasis};
use crate::scalar::{Rational, C64};
use crate::twistor_model::{RealEquationSystem, TwistorModel};

use super::newton::{gauss_newton, min_norm_solve, null_space, point_rank};
use super::{dedup_points, incidence_rows, membership, AnalysisConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FiberMethod {
    /// Closed-form reduction for `xy = z² + μ` on `O(2)³`.
    ClosedForm,
    Multistart,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FiberSolution {
    pub sections: Vec<Vec<f64>>,
    pub method: FiberMethod,
    /// True when the count is exact rather than sampled.
    pub complete: bool,
    /// The incidence fibre contains a positive-dimensional family; the
    /// listed sections are samples of it.
    pub positive_dimensional: bool,
}

fn poly_mul(a: &[C64], b: &[C64]) -> Vec<C64> {
    let mut out = vec![C64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_pow(a: &[C64], e: usize) -> Vec<C64> {
    (0..e).fold(vec![C64::new(1.0, 0.0)], |acc, _| poly_mul(&acc, a))
}

/// Action of `h = [[a, b], [c, d]]` on a section of `O(k)`:
/// `(h·s)(ζ) = Σ s_m (aζ + b)^m (cζ + d)^{k-m}`.
pub fn rotate_section(coeffs: &[C64], h: [[C64; 2]; 2]) -> Vec<C64> {
    let k = coeffs.len() - 1;
    let num = [h[0][1], h[0][0]];
    let den = [h[1][1], h[1][0]];
    let mut out = vec![C64::new(0.0, 0.0); k + 1];
    for (m, c) in coeffs.iter().enumerate() {
        if c.norm() == 0.0 {
            continue;
        }
        let term = poly_mul(&poly_pow(&num, m), &poly_pow(&den, k - m));
        for (o, t) in out.iter_mut().zip(term) {
            *o += c * t;
        }
    }
    out
}

/// The SU(2) rotation moving `0` to `ζ`, and its inverse.
fn rotation_to(zeta: &P1Point) -> ([[C64; 2]; 2], [[C64; 2]; 2], f64) {
    let (p0, p1) = zeta.homogeneous();
    let n = (p0.norm_sqr() + p1.norm_sqr()).sqrt();
    let a = p0.conj() / n;
    let b = p1 / n;
    let c = -b.conj();
    let d = a.conj();
    ([[a, b], [c, d]], [[d, -b], [-c, a]], n)
}

fn check_on_fiber(model: &TwistorModel, zeta: &P1Point, target: &[C64], tol: f64) -> Result<()> {
    if target.len() != model.degrees.len() {
        return Err(Error::Dimension {
            expected: model.degrees.len(),
            actual: target.len(),
        });
    }
    let norm: f64 = target.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    for (q, eq) in model.equations.iter().enumerate() {
        let degree = eq
            .terms()
            .iter()
            .map(|t| t.exponents.iter().sum::<u32>())
            .max()
            .unwrap_or(0);
        let value = eq.chart_form(zeta.chart).eval(zeta.value, target);
        if value.norm() > tol * (1.0 + norm).powi(degree.max(1) as i32) {
            return Err(Error::Fiber(format!(
                "equation {q} has residual {:.3e} at the target",
                value.norm()
            )));
        }
    }
    Ok(())
}

/// All real sections through `target` over `ζ`.
pub fn fiber_solve(
    model: &TwistorModel,
    sys: &RealEquationSystem,
    zeta: &P1Point,
    target: &[C64],
    cfg: &AnalysisConfig,
) -> Result<FiberSolution> {
    check_on_fiber(model, zeta, target, cfg.membership_tol)?;
    let basis = model.real_basis()?;
    match model.quadric_family_constant() {
        Some(mu) => closed_form(&basis, sys, &mu, zeta, target, cfg),
        None => multistart(&basis, sys, zeta, target, cfg),
    }
}

/// Over `ζ = 0` the incidence fixes `x₀, x₂, z₀`; the `ζ¹` coefficient is
/// real-linear in `(x₁, r)` and the `ζ²` coefficient reads
/// `|x₁|² + r² = C`, so the solutions are a sphere in an affine subspace.
/// Other fibres are moved to `ζ = 0` by an SU(2) rotation, which preserves
/// the real structure and carries `μ` to another constant term.
fn closed_form(
    basis: &RealParamBasis,
    sys: &RealEquationSystem,
    mu: &CoeffPoly<Rational>,
    zeta: &P1Point,
    target: &[C64],
    cfg: &AnalysisConfig,
) -> Result<FiberSolution> {
    let (h, h_inv, n) = rotation_to(zeta);
    let t: Vec<C64> = target.iter().map(|v| v / (n * n)).collect();
    let mu = rotate_section(mu.to_c64().coeffs(), h);
    let (x0, x2, z0) = (t[0], t[1].conj(), t[2]);
    let (a, b) = (x2.conj(), x0);
    let i = C64::new(0.0, 1.0);
    let cols = [a - b, i * (a + b), z0 * -2.0];
    let l = DMatrix::from_fn(
        2,
        3,
        |row, col| if row == 0 { cols[col].re } else { cols[col].im },
    );
    let rhs = DVector::from_vec(vec![mu[1].re, mu[1].im]);
    let scale = 1.0 + t.iter().map(|c| c.norm_sqr()).sum::<f64>();

    let v0 = min_norm_solve(&l, &rhs);
    let inconsistent = (&l * &v0 - &rhs).amax() > cfg.membership_tol * scale;
    let null = if l.amax() <= 1e-14 * scale {
        null_space(&DMatrix::zeros(0, 3), cfg.rank_rel_tol)
    } else {
        null_space(&l, cfg.rank_rel_tol)
    };
    let c = x0.norm_sqr() + x2.norm_sqr() + 2.0 * z0.norm_sqr() - mu[2].re;
    let s2 = c - v0.norm_squared();

    let mut candidates: Vec<DVector<f64>> = Vec::new();
    let mut positive_dimensional = false;
    if !inconsistent && s2 >= -cfg.membership_tol * scale {
        if s2 <= cfg.membership_tol * scale || null.is_empty() {
            candidates.push(v0.clone());
        } else {
            let s = s2.sqrt();
            candidates.push(&v0 + &null[0] * s);
            candidates.push(&v0 - &null[0] * s);
            if null.len() >= 2 {
                positive_dimensional = true;
                candidates.push(&v0 + &null[1] * s);
                candidates.push(&v0 - &null[1] * s);
            }
        }
    }

    let mut sections = Vec::new();
    for v in candidates {
        let rotated = [x0.re, x0.im, v[0], v[1], x2.re, x2.im, z0.re, z0.im, v[2]];
        let secs = basis.embed(&rotated)?;
        let back: Vec<CoeffPoly<f64>> = secs
            .iter()
            .map(|s| CoeffPoly::new(s.degree_bound(), rotate_section(s.coeffs(), h_inv)))
            .collect::<Result<_>>()?;
        let p = basis.read_params(&back)?;
        if membership(sys, &p, cfg.membership_tol)?.passed {
            sections.push(p);
        }
    }
    Ok(FiberSolution {
        sections: dedup_points(sections, cfg.dedup_radius),
        method: FiberMethod::ClosedForm,
        complete: !positive_dimensional,
        positive_dimensional,
    })
}

fn multistart(
    basis: &RealParamBasis,
    sys: &RealEquationSystem,
    zeta: &P1Point,
    target: &[C64],
    cfg: &AnalysisConfig,
) -> Result<FiberSolution> {
    let (l, b) = incidence_rows(basis, zeta, target)?;
    let n = basis.real_dim();
    let system = |x: &[f64]| augmented(sys, &l, &b, x);
    let base = min_norm_solve(&l, &b);
    let null = null_space(&l, cfg.rank_rel_tol);
    let scale = 1.0 + base.norm();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut found = Vec::new();
    let starts = if null.is_empty() { 1 } else { cfg.multistart };
    for _ in 0..starts {
        let mut x0 = base.clone();
        for v in &null {
            x0 += v * (scale * rng.gen_range(-1.0..1.0));
        }
        let out = gauss_newton(
            system,
            x0.as_slice().to_vec(),
            cfg.newton_tol,
            cfg.newton_max_iters,
        );
        if out.converged {
            found.push(out.point);
        }
    }
    let sections = dedup_points(found, cfg.dedup_radius);
    let positive_dimensional = sections.iter().any(|p| {
        let (_, j) = system(p);
        point_rank(&j, p, cfg.rank_rel_tol) < n
    });
    Ok(FiberSolution {
        sections,
        method: FiberMethod::Multistart,
        complete: false,
        positive_dimensional,
    })
}

/// `[F(x); L x - b]` with its Jacobian.
pub(crate) fn augmented(
    sys: &RealEquationSystem,
    l: &DMatrix<f64>,
    b: &DVector<f64>,
    x: &[f64],
) -> (DVector<f64>, DMatrix<f64>) {
    let f = sys.residuals_f64(x);
    let xv = DVector::from_column_slice(x);
    let lin = l * &xv - b;
    let r = DVector::from_iterator(
        f.len() + lin.len(),
        f.into_iter().chain(lin.iter().copied()),
    );
    let js = sys.jacobian_f64(x);
    let mut j = DMatrix::zeros(js.nrows() + l.nrows(), x.len());
    j.view_mut((0, 0), (js.nrows(), x.len())).copy_from(&js);
    j.view_mut((js.nrows(), 0), (l.nrows(), x.len()))
        .copy_from(l);
    (r, j)
}
