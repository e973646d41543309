use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::p1alg::{
    check_rules, reality_fixed_space, tau_pullback, CoeffPoly, RealParamBasis, SigmaCoordRule,
};
use crate::scalar::{gauss, GaussRat, Rational};
use crate::symbolic::CPoly;

use super::equation::{FiberEquation, FiberTerm};

/// Declared behaviour of `λ` under the pullback of the `z` rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LambdaReality {
    TauReal,
    TauAntireal,
}

impl std::str::FromStr for LambdaReality {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tau-real" => Ok(Self::TauReal),
            "tau-antireal" => Ok(Self::TauAntireal),
            other => Err(Error::Parse(format!("unknown reality type `{other}`"))),
        }
    }
}

/// `coeff · Π (u_coord)_power ^ exponent` in the section coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoeffFactor {
    pub coord: usize,
    pub power: usize,
    pub exponent: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComponentTerm {
    pub coeff: GaussRat,
    pub factors: Vec<CoeffFactor>,
}

/// An extra complex equation on section coefficients, selecting a union of
/// components of the section space.
#[derive(Debug, Clone, PartialEq)]
pub struct ComponentEquation {
    pub label: String,
    pub terms: Vec<ComponentTerm>,
}

impl ComponentEquation {
    pub fn to_symbolic(&self, sections: &[Vec<CPoly>], nvars: usize) -> CPoly {
        self.terms.iter().fold(CPoly::zero(nvars), |acc, t| {
            let prod = t
                .factors
                .iter()
                .fold(CPoly::constant(nvars, &t.coeff), |p, f| {
                    p.mul(&sections[f.coord][f.power].pow(f.exponent))
                });
            acc.add(&prod)
        })
    }
}

/// A hypersurface-type model in the total space of `⊕ O(kᵢ)` with a real
/// structure given coordinate by coordinate.
#[derive(Debug, Clone, PartialEq)]
pub struct TwistorModel {
    pub name: String,
    pub coord_names: Vec<String>,
    pub degrees: Vec<usize>,
    pub equations: Vec<FiberEquation>,
    pub sigma_rules: Vec<SigmaCoordRule>,
    pub component_equations: Vec<ComponentEquation>,
    /// Renamings applied to generated parameter names (`z1 -> r`).
    pub param_renames: Vec<(String, String)>,
}

impl TwistorModel {
    pub fn real_basis(&self) -> Result<RealParamBasis> {
        let mut basis = reality_fixed_space(&self.degrees, &self.sigma_rules, &self.coord_names)?;
        for (from, to) in &self.param_renames {
            basis.layout.rename(from, to);
        }
        Ok(basis)
    }

    /// Expected complex fiber dimension.
    pub fn fiber_dim(&self) -> Option<usize> {
        self.degrees.len().checked_sub(self.equations.len())
    }

    /// Expected real dimension of the section space at a regular point.
    pub fn expected_section_dim(&self) -> Option<usize> {
        self.fiber_dim().map(|d| 2 * d)
    }

    /// Equality of degrees, equations and real structure.
    pub fn same_structure(&self, other: &Self) -> bool {
        self.degrees == other.degrees
            && self.equations == other.equations
            && self.sigma_rules == other.sigma_rules
    }

    /// Constant-term polynomial `μ` if the model is `xy - z² - μ` on
    /// `O(2)³` with the quadric real structure.
    pub fn quadric_family_constant(&self) -> Option<CoeffPoly<Rational>> {
        let reference = build_quadric();
        if self.degrees != reference.degrees
            || self.sigma_rules != reference.sigma_rules
            || self.equations.len() != 1
        {
            return None;
        }
        let mut mu = CoeffPoly::zero(4);
        let mut seen = 0;
        for t in self.equations[0].terms() {
            match t.exponents.as_slice() {
                [0, 0, 0] => mu = t.coeff.neg(),
                [1, 1, 0] | [0, 0, 2] => {
                    let expected = if t.exponents[2] == 2 {
                        gauss(-1, 0)
                    } else {
                        gauss(1, 0)
                    };
                    if t.coeff.coeff(0) != expected {
                        return None;
                    }
                    seen += 1;
                }
                _ => return None,
            }
        }
        (seen == 2).then_some(mu)
    }

    /// True when the rules differ from the reference quadric convention
    /// while the bundle and equations are those of the quadric family.
    pub fn nonstandard_quadric_rules(&self) -> bool {
        let reference = build_quadric();
        self.degrees == reference.degrees
            && self.sigma_rules != reference.sigma_rules
            && self.equations.len() == 1
            && self.equations[0]
                .terms()
                .iter()
                .any(|t| t.exponents == [1, 1, 0])
    }
}

fn names(list: &[&str]) -> Vec<String> {
    list.iter().map(|s| s.to_string()).collect()
}

pub fn quadric_rules() -> Vec<SigmaCoordRule> {
    vec![
        SigmaCoordRule::new(1, 1, 2).expect("valid sign"),
        SigmaCoordRule::new(0, 1, 2).expect("valid sign"),
        SigmaCoordRule::new(2, -1, 2).expect("valid sign"),
    ]
}

pub fn quaternionic_pair_rules() -> Vec<SigmaCoordRule> {
    vec![
        SigmaCoordRule::new(1, -1, 1).expect("valid sign"),
        SigmaCoordRule::new(0, 1, 1).expect("valid sign"),
    ]
}

fn quadric_terms() -> Vec<FiberTerm> {
    let one = CoeffPoly::constant(0, gauss(1, 0));
    vec![
        FiberTerm {
            exponents: vec![1, 1, 0],
            coeff: one.clone(),
        },
        FiberTerm {
            exponents: vec![0, 0, 2],
            coeff: one.neg(),
        },
    ]
}

/// `xy = z²` in `O(2)³` with `σ(x, y, z) = (ȳ, x̄, -z̄)/ζ̄²`.
pub fn build_quadric() -> TwistorModel {
    let degrees = vec![2, 2, 2];
    let eq = FiberEquation::new(&degrees, 4, quadric_terms()).expect("consistent twists");
    let f = |power, exponent| CoeffFactor {
        coord: 0,
        power,
        exponent,
    };
    let component = ComponentEquation {
        label: "x1^2-4x0x2".into(),
        terms: vec![
            ComponentTerm {
                coeff: gauss(1, 0),
                factors: vec![f(1, 2)],
            },
            ComponentTerm {
                coeff: gauss(-4, 0),
                factors: vec![f(0, 1), f(2, 1)],
            },
        ],
    };
    TwistorModel {
        name: "quadric".into(),
        coord_names: names(&["x", "y", "z"]),
        degrees,
        equations: vec![eq],
        sigma_rules: quadric_rules(),
        component_equations: vec![component],
        param_renames: vec![("z1".into(), "r".into())],
    }
}

/// `xy = z² + λ²` with the quadric real structure.
pub fn build_deformed(
    lambda: &CoeffPoly<Rational>,
    reality: LambdaReality,
) -> Result<TwistorModel> {
    let lambda = lambda.with_bound(2)?;
    if lambda.is_zero() {
        return Err(Error::Reality("λ must be nonzero".into()));
    }
    let pulled = tau_pullback(&lambda, &quadric_rules()[2])?;
    let ok = match reality {
        LambdaReality::TauReal => pulled == lambda,
        LambdaReality::TauAntireal => pulled == lambda.neg(),
    };
    if !ok {
        let kind = match reality {
            LambdaReality::TauReal => "τλ = λ",
            LambdaReality::TauAntireal => "τλ = -λ",
        };
        return Err(Error::Reality(format!("λ does not satisfy {kind}")));
    }
    let degrees = vec![2, 2, 2];
    let mut terms = quadric_terms();
    terms.push(FiberTerm {
        exponents: vec![0, 0, 0],
        coeff: lambda.mul(&lambda).neg(),
    });
    let eq = FiberEquation::new(&degrees, 4, terms)?;
    Ok(TwistorModel {
        name: "deformed".into(),
        coord_names: names(&["x", "y", "z"]),
        degrees,
        equations: vec![eq],
        sigma_rules: quadric_rules(),
        component_equations: Vec::new(),
        param_renames: vec![("z1".into(), "r".into())],
    })
}

/// The flat model `O(1) ⊕ O(1)` with `σ(a, b) = (-b̄, ā)/ζ̄`.
pub fn build_smooth_o11() -> TwistorModel {
    TwistorModel {
        name: "smooth-o11".into(),
        coord_names: names(&["a", "b"]),
        degrees: vec![1, 1],
        equations: Vec::new(),
        sigma_rules: quaternionic_pair_rules(),
        component_equations: Vec::new(),
        param_renames: Vec::new(),
    }
}

/// A polynomial in the cone coordinates with Gaussian-rational coefficients.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ConePolynomial {
    pub terms: Vec<(Vec<u32>, GaussRat)>,
}

impl ConePolynomial {
    /// Weighted degree, or a `Weight` error if the terms disagree.
    pub fn weighted_degree(&self, weights: &[usize]) -> Result<usize> {
        let mut degree = None;
        for (e, c) in &self.terms {
            if c.is_zero() {
                continue;
            }
            if e.len() != weights.len() {
                return Err(Error::Weight(format!(
                    "monomial {e:?} has the wrong number of exponents"
                )));
            }
            let w: usize = e.iter().zip(weights).map(|(&a, &w)| a as usize * w).sum();
            match degree {
                None => degree = Some(w),
                Some(d) if d != w => {
                    return Err(Error::Weight(format!(
                        "monomials of weighted degree {d} and {w}"
                    )));
                }
                _ => {}
            }
        }
        degree.ok_or_else(|| Error::Weight("zero polynomial".into()))
    }
}

/// Twistor model of a weighted cone glued by `(ζ̃, m̃) = (ζ⁻¹, ζ^{-l}·m)`.
///
/// Rule twists are replaced by the glued degrees before validation.
pub fn glue_cone_twistor(
    equations: &[ConePolynomial],
    weights: &[usize],
    l: usize,
    rules: &[SigmaCoordRule],
    coord_names: &[String],
) -> Result<TwistorModel> {
    if !(l == 1 || l == 2) {
        return Err(Error::Weight(format!(
            "gluing exponent l = {l} is not 1 or 2"
        )));
    }
    let degrees: Vec<usize> = weights.iter().map(|w| l * w).collect();
    if rules.len() != degrees.len() {
        return Err(Error::Dimension {
            expected: degrees.len(),
            actual: rules.len(),
        });
    }
    let sigma_rules = rules
        .iter()
        .map(|r| {
            let twist = *degrees.get(r.target).ok_or_else(|| {
                Error::NonInvolutive(format!("rule target {} out of range", r.target))
            })?;
            SigmaCoordRule::new(r.target, r.sign, twist)
        })
        .collect::<Result<Vec<_>>>()?;
    check_rules(&degrees, &sigma_rules)?;
    let fiber_equations = equations
        .iter()
        .map(|p| {
            let twist = l * p.weighted_degree(weights)?;
            let terms = p
                .terms
                .iter()
                .map(|(e, c)| FiberTerm {
                    exponents: e.clone(),
                    coeff: CoeffPoly::constant(0, c.clone()),
                })
                .collect();
            FiberEquation::new(&degrees, twist, terms)
        })
        .collect::<Result<Vec<_>>>()?;
    let coord_names = if coord_names.len() == degrees.len() {
        coord_names.to_vec()
    } else {
        (0..degrees.len()).map(|i| format!("u{i}")).collect()
    };
    Ok(TwistorModel {
        name: format!("cone-l{l}"),
        coord_names,
        degrees,
        equations: fiber_equations,
        sigma_rules,
        component_equations: Vec::new(),
        param_renames: Vec::new(),
    })
}
