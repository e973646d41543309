use nalgebra::{DMatrix, DVector};
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::p1alg::{P1Point, RealParamBasis};
use crate::scalar::{Real, C64};
use crate::tolerances::RANK_REL_TOL;
use crate::twistor_model::RealEquationSystem;

use super::newton::point_rank;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MembershipReport {
    pub residuals: Vec<f64>,
    pub max_residual: f64,
    pub threshold: f64,
    pub passed: bool,
}

/// Residuals of the system at `p`; passes if the largest is at most
/// `tol·(1 + |p|²)` (exactly zero in exact arithmetic).
pub fn membership<R: Real>(
    sys: &RealEquationSystem,
    p: &[R],
    tol: f64,
) -> Result<MembershipReport> {
    let res = sys.residuals(p)?;
    let norm_sqr: f64 = p.iter().map(|v| v.to_f64().powi(2)).sum();
    let threshold = if R::EXACT {
        0.0
    } else {
        tol * (1.0 + norm_sqr)
    };
    let passed = if R::EXACT {
        res.iter().all(Zero::is_zero)
    } else {
        res.iter().all(|r| r.to_f64().abs() <= threshold)
    };
    let residuals: Vec<f64> = res.iter().map(Real::to_f64).collect();
    let max_residual = residuals.iter().map(|r| r.abs()).fold(0.0, f64::max);
    Ok(MembershipReport {
        residuals,
        max_residual,
        threshold,
        passed,
    })
}

/// Rank of the Jacobian at `p` (exact rank in exact arithmetic).
pub fn jacobian_rank<R: Real>(sys: &RealEquationSystem, p: &[R]) -> Result<usize> {
    if R::EXACT {
        let j = sys.jacobian_at(p)?;
        return Ok(R::real_rank(&j, sys.nvars()));
    }
    let pf: Vec<f64> = p.iter().map(Real::to_f64).collect();
    Ok(point_rank(&sys.jacobian_f64(&pf), &pf, RANK_REL_TOL))
}

/// A point of the fiber `Z_ζ`, with values in the chart of `ζ`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FiberPoint {
    pub zeta: P1Point,
    pub values: Vec<C64>,
}

impl FiberPoint {
    /// The same point expressed in the standard chart when `ζ ≠ ∞`.
    pub fn to_standard(&self, degrees: &[usize]) -> Option<FiberPoint> {
        let z = self.zeta.standard_value()?;
        match self.zeta.chart {
            crate::p1alg::Chart::Standard => Some(self.clone()),
            crate::p1alg::Chart::Infinity => Some(FiberPoint {
                zeta: P1Point::standard(z),
                // u = ζ^k ũ
                values: self
                    .values
                    .iter()
                    .zip(degrees)
                    .map(|(v, &k)| v * z.powu(k as u32))
                    .collect(),
            }),
        }
    }
}

/// Evaluates the embedded section at `ζ`.
pub fn phi_eval(basis: &RealParamBasis, p: &[f64], zeta: &P1Point) -> Result<FiberPoint> {
    let sections = basis.embed(p)?;
    Ok(FiberPoint {
        zeta: *zeta,
        values: sections.iter().map(|s| s.eval_at(zeta)).collect(),
    })
}

/// The incidence conditions `phi(p, ζ) = target` as real linear equations
/// `L p = b` (real and imaginary parts of each coordinate).
pub fn incidence_rows(
    basis: &RealParamBasis,
    zeta: &P1Point,
    target: &[C64],
) -> Result<(DMatrix<f64>, DVector<f64>)> {
    let m = basis.degrees.len();
    if target.len() != m {
        return Err(Error::Dimension {
            expected: m,
            actual: target.len(),
        });
    }
    let n = basis.real_dim();
    let mut l = DMatrix::zeros(2 * m, n);
    for e in 0..n {
        let mut unit = vec![0.0; n];
        unit[e] = f64::one();
        let sections = basis.embed(&unit)?;
        for (i, s) in sections.iter().enumerate() {
            let v = s.eval_at(zeta);
            l[(2 * i, e)] = v.re;
            l[(2 * i + 1, e)] = v.im;
        }
    }
    let b = DVector::from_iterator(2 * m, target.iter().flat_map(|c| [c.re, c.im]));
    Ok((l, b))
}
