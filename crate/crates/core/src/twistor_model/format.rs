//! JSON form of models. Complex numbers are `[re, im]` pairs whose parts are
//! integers, decimals or `"p/q"` strings; a bare number or a string such as
//! `"1/2-3i"` is also accepted on input.

use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::p1alg::{CoeffPoly, SigmaCoordRule};
use crate::scalar::{format_rational, parse_complex, parse_rational, GaussRat, Rational};

use super::equation::{FiberEquation, FiberTerm};
use super::model::{CoeffFactor, ComponentEquation, ComponentTerm, TwistorModel};

fn rational_to_json(q: &Rational) -> Value {
    if q.is_integer() {
        if let Some(v) = q.to_integer().to_i64() {
            return json!(v);
        }
    }
    json!(format_rational(q))
}

pub fn complex_to_json(z: &GaussRat) -> Value {
    json!([rational_to_json(&z.re), rational_to_json(&z.im)])
}

fn rational_from_json(v: &Value) -> Result<Rational> {
    match v {
        Value::Number(n) => parse_rational(&n.to_string()),
        Value::String(s) => parse_rational(s),
        other => Err(Error::Parse(format!("expected a real number, got {other}"))),
    }
}

pub fn complex_from_json(v: &Value) -> Result<GaussRat> {
    match v {
        Value::Array(parts) if parts.len() == 2 => Ok(GaussRat::new(
            rational_from_json(&parts[0])?,
            rational_from_json(&parts[1])?,
        )),
        Value::Number(_) => Ok(GaussRat::new(rational_from_json(v)?, Rational::zero())),
        Value::String(s) => parse_complex(s),
        other => Err(Error::Parse(format!(
            "expected a complex number, got {other}"
        ))),
    }
}

#[derive(Serialize, Deserialize)]
struct TermDoc {
    exponents: Vec<u32>,
    coeffs: Vec<Value>,
}

#[derive(Serialize, Deserialize)]
struct EquationDoc {
    twist: usize,
    terms: Vec<TermDoc>,
}

#[derive(Serialize, Deserialize)]
struct RuleDoc {
    target: usize,
    sign: i8,
}

#[derive(Serialize, Deserialize)]
struct ComponentTermDoc {
    coeff: Value,
    factors: Vec<CoeffFactor>,
}

#[derive(Serialize, Deserialize)]
struct ComponentDoc {
    label: String,
    terms: Vec<ComponentTermDoc>,
}

#[derive(Serialize, Deserialize)]
struct ModelDoc {
    name: String,
    #[serde(default)]
    coordinates: Vec<String>,
    degrees: Vec<usize>,
    #[serde(default)]
    equations: Vec<EquationDoc>,
    rules: Vec<RuleDoc>,
    #[serde(default)]
    component_equations: Vec<ComponentDoc>,
    #[serde(default)]
    param_names: Vec<(String, String)>,
}

pub fn model_to_json(model: &TwistorModel) -> Value {
    let doc = ModelDoc {
        name: model.name.clone(),
        coordinates: model.coord_names.clone(),
        degrees: model.degrees.clone(),
        equations: model
            .equations
            .iter()
            .map(|e| EquationDoc {
                twist: e.twist,
                terms: e
                    .terms()
                    .iter()
                    .map(|t| TermDoc {
                        exponents: t.exponents.clone(),
                        coeffs: t.coeff.coeffs().iter().map(complex_to_json).collect(),
                    })
                    .collect(),
            })
            .collect(),
        rules: model
            .sigma_rules
            .iter()
            .map(|r| RuleDoc {
                target: r.target,
                sign: r.sign,
            })
            .collect(),
        component_equations: model
            .component_equations
            .iter()
            .map(|c| ComponentDoc {
                label: c.label.clone(),
                terms: c
                    .terms
                    .iter()
                    .map(|t| ComponentTermDoc {
                        coeff: complex_to_json(&t.coeff),
                        factors: t.factors.clone(),
                    })
                    .collect(),
            })
            .collect(),
        param_names: model.param_renames.clone(),
    };
    serde_json::to_value(doc).expect("model documents serialize")
}

pub fn model_from_json(v: &Value) -> Result<TwistorModel> {
    let doc: ModelDoc =
        serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
    let degrees = doc.degrees;
    let equations = doc
        .equations
        .into_iter()
        .map(|e| {
            let terms = e
                .terms
                .into_iter()
                .map(|t| {
                    let coeffs = t
                        .coeffs
                        .iter()
                        .map(complex_from_json)
                        .collect::<Result<Vec<_>>>()?;
                    let bound = coeffs.len().saturating_sub(1);
                    Ok(FiberTerm {
                        exponents: t.exponents,
                        coeff: CoeffPoly::new(bound, coeffs)?,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            FiberEquation::new(&degrees, e.twist, terms)
        })
        .collect::<Result<Vec<_>>>()?;
    let sigma_rules = doc
        .rules
        .iter()
        .map(|r| {
            let twist = *degrees
                .get(r.target)
                .ok_or_else(|| Error::Parse(format!("rule target {} out of range", r.target)))?;
            SigmaCoordRule::new(r.target, r.sign, twist)
        })
        .collect::<Result<Vec<_>>>()?;
    let component_equations = doc
        .component_equations
        .into_iter()
        .map(|c| {
            let terms = c
                .terms
                .into_iter()
                .map(|t| {
                    for f in &t.factors {
                        if f.coord >= degrees.len() || f.power > degrees[f.coord] {
                            return Err(Error::Parse(format!(
                                "factor {f:?} does not name a section coefficient"
                            )));
                        }
                    }
                    Ok(ComponentTerm {
                        coeff: complex_from_json(&t.coeff)?,
                        factors: t.factors,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(ComponentEquation {
                label: c.label,
                terms,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let coord_names = if doc.coordinates.len() == degrees.len() {
        doc.coordinates
    } else {
        (0..degrees.len()).map(|i| format!("u{i}")).collect()
    };
    Ok(TwistorModel {
        name: doc.name,
        coord_names,
        degrees,
        equations,
        sigma_rules,
        component_equations,
        param_renames: doc.param_names,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::gauss;
    use crate::twistor_model::{build_deformed, build_quadric, LambdaReality};

    #[test]
    fn round_trip() {
        let lambda = CoeffPoly::new(2, vec![gauss(0, 1), gauss(0, 0), gauss(0, -1)]).unwrap();
        for m in [
            build_quadric(),
            build_deformed(&lambda, LambdaReality::TauAntireal).unwrap(),
        ] {
            let v = model_to_json(&m);
            assert_eq!(model_from_json(&v).unwrap(), m);
        }
    }

    #[test]
    fn number_forms() {
        let half = GaussRat::new(Rational::new(1.into(), 2.into()), Rational::zero());
        assert_eq!(complex_from_json(&json!(["1/2", 0])).unwrap(), half);
        assert_eq!(complex_from_json(&json!([0.5, 0])).unwrap(), half);
        assert_eq!(complex_from_json(&json!("1/2")).unwrap(), half);
        assert_eq!(complex_to_json(&half), json!(["1/2", 0]));
    }
}
