use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::p1alg::ParamLayout;
use crate::scalar::Real;
use crate::symbolic::{CompiledPoly, RealPoly};

use super::model::TwistorModel;
use super::validate::validate_model;

/// Real polynomial equations on the section parameters with an analytic
/// Jacobian.
#[derive(Debug, Clone)]
pub struct RealEquationSystem {
    pub layout: ParamLayout,
    pub labels: Vec<String>,
    pub equations: Vec<RealPoly>,
    pub jacobian: Vec<Vec<RealPoly>>,
    /// Jacobian rank at regular points, when the model predicts one.
    pub expected_regular_rank: Option<usize>,
    compiled: Vec<CompiledPoly>,
    compiled_jacobian: Vec<Vec<CompiledPoly>>,
}

impl RealEquationSystem {
    pub fn new(
        layout: ParamLayout,
        labels: Vec<String>,
        equations: Vec<RealPoly>,
        expected_regular_rank: Option<usize>,
    ) -> Self {
        let n = layout.dim;
        let jacobian: Vec<Vec<RealPoly>> = equations
            .iter()
            .map(|e| (0..n).map(|i| e.derivative(i)).collect())
            .collect();
        let compiled = equations.iter().map(RealPoly::compile).collect();
        let compiled_jacobian = jacobian
            .iter()
            .map(|row| row.iter().map(RealPoly::compile).collect())
            .collect();
        Self {
            layout,
            labels,
            equations,
            jacobian,
            expected_regular_rank,
            compiled,
            compiled_jacobian,
        }
    }

    pub fn nvars(&self) -> usize {
        self.layout.dim
    }

    pub fn len(&self) -> usize {
        self.equations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.equations.is_empty()
    }

    fn check_dim(&self, len: usize) -> Result<()> {
        if len != self.nvars() {
            return Err(Error::Dimension {
                expected: self.nvars(),
                actual: len,
            });
        }
        Ok(())
    }

    pub fn residuals<R: Real>(&self, p: &[R]) -> Result<Vec<R>> {
        self.check_dim(p.len())?;
        Ok(self.equations.iter().map(|e| e.eval(p)).collect())
    }

    pub fn jacobian_at<R: Real>(&self, p: &[R]) -> Result<Vec<Vec<R>>> {
        self.check_dim(p.len())?;
        Ok(self
            .jacobian
            .iter()
            .map(|row| {
                row.iter()
                    .map(|d| if d.is_zero() { R::zero() } else { d.eval(p) })
                    .collect()
            })
            .collect())
    }

    /// Fast residuals; `p` must have length `nvars`.
    pub fn residuals_f64(&self, p: &[f64]) -> Vec<f64> {
        self.compiled.iter().map(|e| e.eval(p)).collect()
    }

    /// Fast Jacobian; `p` must have length `nvars`.
    pub fn jacobian_f64(&self, p: &[f64]) -> DMatrix<f64> {
        DMatrix::from_fn(self.len(), self.nvars(), |i, j| {
            self.compiled_jacobian[i][j].eval(p)
        })
    }
}

/// Coefficient equations of the model along the generic real section.
///
/// For an equation of twist `d` the coefficients `c₀ … c_{⌈d/2⌉-1}` give two
/// real equations each; for even `d` the middle coefficient is real or
/// imaginary along real sections and gives one more. The remaining
/// coefficients are conjugates of these. Component equations follow.
pub fn real_section_system(model: &TwistorModel) -> Result<RealEquationSystem> {
    let report = validate_model(model);
    if let Some(err) = report.first_error() {
        return Err(err);
    }
    let basis = model.real_basis()?;
    let n = basis.real_dim();
    let sections = basis.symbolic();
    let mut labels = Vec::new();
    let mut equations = Vec::new();
    for (q, eq) in model.equations.iter().enumerate() {
        let prefix = if model.equations.len() == 1 {
            String::new()
        } else {
            format!("F{q}.")
        };
        let eps = report.equation_signs[q].unwrap_or(1);
        let coeffs = eq.substitute(&sections, n);
        let d = eq.twist;
        for (j, c) in coeffs.iter().enumerate().take(d.div_ceil(2)) {
            labels.push(format!("{prefix}c{j}.re"));
            equations.push(c.re.clone());
            labels.push(format!("{prefix}c{j}.im"));
            equations.push(c.im.clone());
        }
        if d % 2 == 0 {
            let mid = &coeffs[d / 2];
            let real = eps * if (d / 2) % 2 == 0 { 1 } else { -1 } == 1;
            if real {
                labels.push(format!("{prefix}c{}", d / 2));
                equations.push(mid.re.clone());
            } else {
                labels.push(format!("{prefix}c{}.im", d / 2));
                equations.push(mid.im.clone());
            }
        }
    }
    for comp in &model.component_equations {
        let c = comp.to_symbolic(&sections, n);
        labels.push(format!("{}.re", comp.label));
        equations.push(c.re);
        labels.push(format!("{}.im", comp.label));
        equations.push(c.im);
    }
    let expected = model
        .expected_section_dim()
        .and_then(|dim| n.checked_sub(dim));
    Ok(RealEquationSystem::new(
        basis.layout,
        labels,
        equations,
        expected,
    ))
}
