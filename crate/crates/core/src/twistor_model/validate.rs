use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::analyzer::newton::complex_newton;
use crate::error::{Error, Result};
use crate::p1alg::{check_rules, Chart};
use crate::scalar::C64;
use crate::tolerances::{NEWTON_MAX_ITERS, NEWTON_TOL};

use super::model::TwistorModel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ValidationIssue {
    NonInvolutive,
    Degree,
    SigmaIncompatible,
    FiberCorank,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationFailure {
    pub kind: ValidationIssue,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub model: String,
    pub failures: Vec<ValidationFailure>,
    /// `ε` with `F∘σ = ε·conj(F)` per equation, when compatible.
    pub equation_signs: Vec<Option<i8>>,
    /// Measured corank of `∂F/∂u` at generic fiber points.
    pub generic_fiber_corank: Option<usize>,
    pub notes: Vec<String>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn first_error(&self) -> Option<Error> {
        self.failures.first().map(|f| match f.kind {
            ValidationIssue::NonInvolutive => Error::NonInvolutive(f.detail.clone()),
            ValidationIssue::Degree => Error::Degree(f.detail.clone()),
            _ => Error::Validation(f.detail.clone()),
        })
    }

    fn fail(&mut self, kind: ValidationIssue, detail: impl Into<String>) {
        self.failures.push(ValidationFailure {
            kind,
            detail: detail.into(),
        });
    }
}

// Fixed sample fibres for the generic corank check.
const SAMPLE_ZETAS: [(f64, f64); 2] = [(0.37, 0.21), (-0.61, 0.45)];
const CORANK_SEED: u64 = 0x5eed_f1be;
const CORANK_STARTS: usize = 8;

/// Structural checks: rule involutivity, twist consistency, σ-compatibility
/// of every equation, and the fiber dimension over generic `ζ`.
pub fn validate_model(model: &TwistorModel) -> ValidationReport {
    let mut report = ValidationReport {
        model: model.name.clone(),
        failures: Vec::new(),
        equation_signs: vec![None; model.equations.len()],
        generic_fiber_corank: None,
        notes: Vec::new(),
    };
    let rules_ok = match check_rules(&model.degrees, &model.sigma_rules) {
        Ok(()) => true,
        Err(Error::Degree(d)) => {
            report.fail(ValidationIssue::Degree, d);
            false
        }
        Err(e) => {
            report.fail(ValidationIssue::NonInvolutive, e.to_string());
            false
        }
    };
    let mut twists_ok = true;
    for (q, eq) in model.equations.iter().enumerate() {
        if let Err(e) = eq.check_twists(&model.degrees) {
            report.fail(ValidationIssue::Degree, format!("equation {q}: {e}"));
            twists_ok = false;
        }
    }
    if rules_ok && twists_ok {
        for (q, eq) in model.equations.iter().enumerate() {
            match eq.sigma_sign(&model.sigma_rules) {
                Ok(eps) => report.equation_signs[q] = Some(eps),
                Err(d) => report.fail(
                    ValidationIssue::SigmaIncompatible,
                    format!("equation {q}: {d}"),
                ),
            }
        }
    }
    if twists_ok {
        match generic_fiber_corank(model) {
            Ok(corank) => {
                report.generic_fiber_corank = Some(corank);
                let expected = model.fiber_dim();
                if expected != Some(corank) {
                    report.fail(
                        ValidationIssue::FiberCorank,
                        format!("generic fiber corank {corank}, expected {expected:?}"),
                    );
                }
            }
            Err(d) => report.fail(ValidationIssue::FiberCorank, d),
        }
    }
    if report.passed() && model.nonstandard_quadric_rules() {
        report.notes.push(
            "real structure differs from the reference quadric convention (x<->y, +1; z self, -1)"
                .into(),
        );
    }
    report
}

fn generic_fiber_corank(model: &TwistorModel) -> std::result::Result<usize, String> {
    let m = model.degrees.len();
    if model.equations.is_empty() {
        return Ok(m);
    }
    let eqs: Vec<_> = model
        .equations
        .iter()
        .map(|e| e.chart_form(Chart::Standard))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(CORANK_SEED);
    let mut coranks = Vec::new();
    for &(re, im) in &SAMPLE_ZETAS {
        let z = C64::new(re, im);
        let system = |u: &[C64]| -> (DVector<C64>, DMatrix<C64>) {
            let r = DVector::from_iterator(eqs.len(), eqs.iter().map(|e| e.eval(z, u)));
            let j = DMatrix::from_fn(eqs.len(), m, |i, c| eqs[i].grad_u(z, u)[c]);
            (r, j)
        };
        let found = (0..CORANK_STARTS).find_map(|_| {
            let u0: Vec<C64> = (0..m)
                .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            let out = complex_newton(system, u0, NEWTON_TOL, NEWTON_MAX_ITERS);
            if !out.converged {
                return None;
            }
            let (_, j) = system(&out.point);
            Some(m - complex_rank(&j))
        });
        match found {
            Some(c) => coranks.push(c),
            None => return Err(format!("no fiber point found over ζ = {z}")),
        }
    }
    Ok(*coranks.iter().max().expect("at least one sample"))
}

fn complex_rank(j: &DMatrix<C64>) -> usize {
    let sv = j.clone().svd(false, false).singular_values;
    crate::scalar::numeric_rank(sv.as_slice())
}

/// Validation as a `Result`, for callers that require a valid model.
pub fn ensure_valid(model: &TwistorModel) -> Result<ValidationReport> {
    let report = validate_model(model);
    match report.first_error() {
        Some(e) => Err(e),
        None => Ok(report),
    }
}
