use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::Result;
use crate::p1alg::{kernel_splitting, CoeffPoly, P1Point, RealParamBasis, SplittingType};
use crate::scalar::{Real, C64};
use crate::twistor_model::TwistorModel;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "at")]
pub enum DegenerateLocus {
    Everywhere,
    Point(P1Point),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormalBundleReport {
    /// `∂F_e/∂u_i` along the section, as coefficient lists.
    pub linearization: Vec<Vec<Vec<C64>>>,
    pub splitting: Option<SplittingType>,
    pub h0: Option<usize>,
    pub h0_minus_2: Option<usize>,
    /// Set when all partials vanish at some point of the section.
    pub degenerate: Option<DegenerateLocus>,
}

const DEGENERACY_TOL: f64 = 1e-8;

/// Splitting type of the kernel of the linearized fiber equations along
/// the embedded section.
pub fn normal_splitting<R: Real>(
    model: &TwistorModel,
    basis: &RealParamBasis,
    p: &[R],
) -> Result<NormalBundleReport> {
    let sections = basis.embed(p)?;
    let matrix: Vec<Vec<CoeffPoly<R>>> = model
        .equations
        .iter()
        .map(|eq| {
            (0..model.degrees.len())
                .map(|i| match eq.partial(i, &model.degrees) {
                    Some(d) => d.eval_along(&sections),
                    None => CoeffPoly::zero(0),
                })
                .collect()
        })
        .collect();
    let floats: Vec<Vec<CoeffPoly<f64>>> = matrix
        .iter()
        .map(|row| row.iter().map(CoeffPoly::to_c64).collect())
        .collect();
    let linearization = floats
        .iter()
        .map(|row| row.iter().map(|e| e.coeffs().to_vec()).collect())
        .collect();
    let source: Vec<i64> = model.degrees.iter().map(|&k| k as i64).collect();
    let target: Vec<i64> = model.equations.iter().map(|e| e.twist as i64).collect();
    if let Some(locus) = common_zero(&floats) {
        return Ok(NormalBundleReport {
            linearization,
            splitting: None,
            h0: None,
            h0_minus_2: None,
            degenerate: Some(locus),
        });
    }
    let splitting = kernel_splitting(&matrix, &source, &target)?;
    Ok(NormalBundleReport {
        linearization,
        h0: Some(splitting.h0(0)),
        h0_minus_2: Some(splitting.h0(-2)),
        splitting: Some(splitting),
        degenerate: None,
    })
}

fn trimmed(c: &[C64], tol: f64) -> &[C64] {
    let mut end = c.len();
    while end > 0 && c[end - 1].norm() <= tol {
        end -= 1;
    }
    &c[..end]
}

fn roots(c: &[C64]) -> Vec<C64> {
    let deg = c.len() - 1;
    if deg == 0 {
        return Vec::new();
    }
    let lead = c[deg];
    let companion = DMatrix::from_fn(deg, deg, |i, j| {
        if j == deg - 1 {
            -c[i] / lead
        } else if i == j + 1 {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    companion
        .schur()
        .eigenvalues()
        .map(|v| v.as_slice().to_vec())
        .unwrap_or_default()
}

/// A point of `P¹` where every entry vanishes, if any.
fn common_zero(matrix: &[Vec<CoeffPoly<f64>>]) -> Option<DegenerateLocus> {
    let entries: Vec<&CoeffPoly<f64>> = matrix.iter().flatten().collect();
    if entries.is_empty() {
        return None;
    }
    let scale = entries.iter().map(|e| e.max_abs()).fold(0.0, f64::max);
    let tol = DEGENERACY_TOL * scale.max(1.0);
    if scale <= DEGENERACY_TOL {
        return Some(DegenerateLocus::Everywhere);
    }
    let nonzero: Vec<&&CoeffPoly<f64>> = entries.iter().filter(|e| e.max_abs() > tol).collect();
    // common zero at ∞: every top coefficient vanishes
    if nonzero
        .iter()
        .all(|e| e.coeff(e.degree_bound()).norm() <= tol)
    {
        return Some(DegenerateLocus::Point(P1Point::infinity()));
    }
    let pivot = nonzero
        .iter()
        .min_by_key(|e| trimmed(e.coeffs(), tol).len())?;
    for r in roots(trimmed(pivot.coeffs(), tol)) {
        let scale_r = (1.0 + r.norm()).powi(pivot.degree_bound() as i32);
        let root_tol = 1e-6 * scale.max(1.0) * scale_r;
        if nonzero.iter().all(|e| e.eval(&r).norm() <= root_tol) {
            return Some(DegenerateLocus::Point(P1Point::standard(r)));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn companion_roots() {
        // (ζ - 1)(ζ + 2i)
        let c = [C64::new(0.0, -2.0), C64::new(-1.0, 2.0), C64::new(1.0, 0.0)];
        let mut r = roots(&c);
        r.sort_by(|a, b| a.im.total_cmp(&b.im));
        assert!((r[0] - C64::new(0.0, -2.0)).norm() < 1e-10);
        assert!((r[1] - C64::new(1.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn detects_common_zero() {
        let p = |c: &[(f64, f64)]| {
            CoeffPoly::new(
                c.len() - 1,
                c.iter().map(|&(a, b)| C64::new(a, b)).collect(),
            )
            .unwrap()
        };
        // ζ - 1 and ζ² - 1 share ζ = 1
        let m = vec![vec![
            p(&[(-1.0, 0.0), (1.0, 0.0)]),
            p(&[(-1.0, 0.0), (0.0, 0.0), (1.0, 0.0)]),
        ]];
        assert!(matches!(common_zero(&m), Some(DegenerateLocus::Point(_))));
        let m = vec![vec![
            p(&[(0.0, 0.0), (0.0, 0.0), (1.0, 0.0)]),
            p(&[(1.0, 0.0), (0.0, 0.0), (0.0, 0.0)]),
        ]];
        assert_eq!(common_zero(&m), None);
        let m = vec![vec![p(&[(0.0, 0.0)]), p(&[(0.0, 0.0), (0.0, 0.0)])]];
        assert_eq!(common_zero(&m), Some(DegenerateLocus::Everywhere));
    }
}
