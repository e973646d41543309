use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::p1alg::{Chart, CoeffPoly, SigmaCoordRule};
use crate::scalar::{GaussRat, Rational, Real, C64};
use crate::symbolic::CPoly;

/// One monomial `c(ζ) · Π uᵢ^{eᵢ}` of a fiber equation.
#[derive(Debug, Clone, PartialEq)]
pub struct FiberTerm {
    pub exponents: Vec<u32>,
    /// Section of `O(d - Σ eᵢ kᵢ)`.
    pub coeff: CoeffPoly<Rational>,
}

/// A polynomial in the fiber coordinates whose coefficients are polynomials
/// in `ζ`, transforming as a section of `O(twist)` along sections.
#[derive(Debug, Clone, PartialEq)]
pub struct FiberEquation {
    pub twist: usize,
    terms: Vec<FiberTerm>,
}

fn weight(exponents: &[u32], degrees: &[usize]) -> usize {
    exponents
        .iter()
        .zip(degrees)
        .map(|(&e, &k)| e as usize * k)
        .sum()
}

impl FiberEquation {
    /// Builds and normalizes an equation: equal monomials are merged, zero
    /// terms dropped, and each coefficient re-bounded to `twist - weight`.
    pub fn new(degrees: &[usize], twist: usize, terms: Vec<FiberTerm>) -> Result<Self> {
        let mut merged: BTreeMap<Vec<u32>, Vec<GaussRat>> = BTreeMap::new();
        for term in terms {
            if term.exponents.len() != degrees.len() {
                return Err(Error::Degree(format!(
                    "monomial has {} exponents for {} coordinates",
                    term.exponents.len(),
                    degrees.len()
                )));
            }
            let w = weight(&term.exponents, degrees);
            if w > twist {
                return Err(Error::Degree(format!(
                    "monomial {:?} has weight {w} above the twist {twist}",
                    term.exponents
                )));
            }
            let coeff = term.coeff.with_bound(twist - w)?;
            let slot = merged
                .entry(term.exponents)
                .or_insert_with(|| vec![GaussRat::zero(); twist - w + 1]);
            for (acc, c) in slot.iter_mut().zip(coeff.coeffs()) {
                *acc = acc.clone() + c.clone();
            }
        }
        let terms = merged
            .into_iter()
            .filter(|(_, c)| c.iter().any(|v| !v.is_zero()))
            .map(|(exponents, c)| {
                let g = twist - weight(&exponents, degrees);
                Ok(FiberTerm {
                    exponents,
                    coeff: CoeffPoly::new(g, c)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { twist, terms })
    }

    pub fn terms(&self) -> &[FiberTerm] {
        &self.terms
    }

    pub fn num_coords(&self) -> Option<usize> {
        self.terms.first().map(|t| t.exponents.len())
    }

    /// Checks `Σ eᵢ kᵢ + deg c ≤ twist` for every monomial.
    pub fn check_twists(&self, degrees: &[usize]) -> Result<()> {
        for t in &self.terms {
            if t.exponents.len() != degrees.len() {
                return Err(Error::Degree(
                    "exponent vector length differs from coordinate count".into(),
                ));
            }
            let w = weight(&t.exponents, degrees);
            if w > self.twist || t.coeff.degree_bound() + w != self.twist {
                return Err(Error::Degree(format!(
                    "monomial {:?}: weight {w} + coefficient bound {} != twist {}",
                    t.exponents,
                    t.coeff.degree_bound(),
                    self.twist
                )));
            }
        }
        Ok(())
    }

    /// The equation evaluated along a section, as a section of `O(twist)`.
    pub fn eval_along<R: Real>(&self, sections: &[CoeffPoly<R>]) -> CoeffPoly<R> {
        let mut acc = CoeffPoly::zero(self.twist);
        for t in &self.terms {
            let mut term = t.coeff.convert::<R>();
            for (s, &e) in sections.iter().zip(&t.exponents) {
                term = term.mul(&s.pow(e));
            }
            acc = acc
                .add(&term)
                .expect("every monomial is a section of O(twist)");
        }
        acc
    }

    /// `∂F/∂uᵢ`, an equation of twist `twist - kᵢ` (`None` if `kᵢ > twist`,
    /// in which case the derivative vanishes).
    pub fn partial(&self, i: usize, degrees: &[usize]) -> Option<FiberEquation> {
        let twist = self.twist.checked_sub(degrees[i])?;
        let terms = self
            .terms
            .iter()
            .filter(|t| t.exponents[i] > 0)
            .map(|t| {
                let mut exponents = t.exponents.clone();
                exponents[i] -= 1;
                let factor = GaussRat::new(
                    Rational::from_integer(t.exponents[i].into()),
                    Rational::zero(),
                );
                FiberTerm {
                    exponents,
                    coeff: t.coeff.scale(&factor),
                }
            })
            .collect();
        Some(FiberEquation::new(degrees, twist, terms).expect("derivative keeps twists consistent"))
    }

    /// Substitutes symbolic section coefficients (`[coord][power]`) and
    /// returns the coefficients of `ζ⁰ … ζ^twist`.
    pub fn substitute(&self, sections: &[Vec<CPoly>], nvars: usize) -> Vec<CPoly> {
        let mut acc = vec![CPoly::zero(nvars); self.twist + 1];
        for t in &self.terms {
            let mut term: Vec<CPoly> = t
                .coeff
                .coeffs()
                .iter()
                .map(|c| CPoly::constant(nvars, c))
                .collect();
            for (s, &e) in sections.iter().zip(&t.exponents) {
                for _ in 0..e {
                    term = zeta_mul(&term, s, nvars);
                }
            }
            for (a, b) in acc.iter_mut().zip(&term) {
                *a = a.add(b);
            }
        }
        acc
    }

    /// Floating point form in one chart: coefficients of the chart variable.
    pub fn chart_form(&self, chart: Chart) -> ChartEquation {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let mut c: Vec<C64> = t.coeff.to_c64().coeffs().to_vec();
                if chart == Chart::Infinity {
                    c.reverse();
                }
                (t.exponents.clone(), c)
            })
            .collect();
        ChartEquation { terms }
    }

    /// Sign `ε` with `F ∘ σ = ε · ζ'^d · conj(F)` (exact symbolic check), or
    /// a description of the first incompatible monomial.
    pub fn sigma_sign(&self, rules: &[SigmaCoordRule]) -> std::result::Result<i8, String> {
        let lookup: BTreeMap<&Vec<u32>, &CoeffPoly<Rational>> = self
            .terms
            .iter()
            .map(|t| (&t.exponents, &t.coeff))
            .collect();
        let mut candidates = vec![1i8, -1];
        for t in &self.terms {
            let mut image = vec![0u32; t.exponents.len()];
            let mut sign_exp = 0u32;
            for (i, &e) in t.exponents.iter().enumerate() {
                image[rules[i].target] += e;
                if rules[i].sign < 0 {
                    sign_exp += e;
                }
            }
            let g = t.coeff.degree_bound();
            let partner = lookup.get(&image);
            // s^α · τ⁰_g(c_β)
            let pulled: Vec<GaussRat> = (0..=g)
                .map(|m| {
                    let c = partner
                        .map(|p| p.coeff(g - m))
                        .unwrap_or_else(GaussRat::zero)
                        .conj();
                    let flip = (g - m) % 2 == 1;
                    let negative = flip ^ (sign_exp % 2 == 1);
                    if negative {
                        -c
                    } else {
                        c
                    }
                })
                .collect();
            candidates.retain(|&eps| {
                t.coeff.coeffs().iter().zip(&pulled).all(|(a, b)| {
                    if eps > 0 {
                        a == b
                    } else {
                        *a == -b.clone()
                    }
                })
            });
            if candidates.is_empty() {
                return Err(format!(
                    "monomial {:?} is not mapped to a conjugate monomial",
                    t.exponents
                ));
            }
        }
        Ok(candidates[0])
    }
}

/// Product of two polynomials in `ζ` with symbolic coefficients.
pub(crate) fn zeta_mul(a: &[CPoly], b: &[CPoly], nvars: usize) -> Vec<CPoly> {
    let mut out = vec![CPoly::zero(nvars); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if y.is_zero() {
                continue;
            }
            out[i + j] = out[i + j].add(&x.mul(y));
        }
    }
    out
}

/// A fiber equation with `f64` coefficients in a fixed chart, evaluated as a
/// holomorphic function of `(ζ, u)`.
#[derive(Debug, Clone)]
pub struct ChartEquation {
    terms: Vec<(Vec<u32>, Vec<C64>)>,
}

fn horner(c: &[C64], z: C64) -> C64 {
    c.iter().rev().fold(C64::zero(), |acc, &v| acc * z + v)
}

fn horner_derivative(c: &[C64], z: C64) -> C64 {
    c.iter()
        .enumerate()
        .skip(1)
        .rev()
        .fold(C64::zero(), |acc, (j, &v)| acc * z + v * j as f64)
}

fn monomial(u: &[C64], e: &[u32]) -> C64 {
    u.iter()
        .zip(e)
        .fold(C64::one(), |acc, (&x, &k)| acc * x.powu(k))
}

impl ChartEquation {
    pub fn eval(&self, z: C64, u: &[C64]) -> C64 {
        self.terms
            .iter()
            .map(|(e, c)| horner(c, z) * monomial(u, e))
            .sum()
    }

    pub fn d_zeta(&self, z: C64, u: &[C64]) -> C64 {
        self.terms
            .iter()
            .map(|(e, c)| horner_derivative(c, z) * monomial(u, e))
            .sum()
    }

    pub fn grad_u(&self, z: C64, u: &[C64]) -> Vec<C64> {
        let mut g = vec![C64::zero(); u.len()];
        for (e, c) in &self.terms {
            let cz = horner(c, z);
            for i in 0..u.len() {
                if e[i] == 0 {
                    continue;
                }
                let mut d = e.clone();
                d[i] -= 1;
                g[i] += cz * monomial(u, &d) * e[i] as f64;
            }
        }
        g
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::gauss;

    fn quadric_eq() -> FiberEquation {
        let one = CoeffPoly::constant(0, gauss(1, 0));
        FiberEquation::new(
            &[2, 2, 2],
            4,
            vec![
                FiberTerm {
                    exponents: vec![1, 1, 0],
                    coeff: one.clone(),
                },
                FiberTerm {
                    exponents: vec![0, 0, 2],
                    coeff: one.neg(),
                },
            ],
        )
        .unwrap()
    }

    #[test]
    fn normalization_merges_terms() {
        let one = CoeffPoly::constant(0, gauss(1, 0));
        let e = FiberEquation::new(
            &[2, 2, 2],
            4,
            vec![
                FiberTerm {
                    exponents: vec![0, 0, 2],
                    coeff: one.clone(),
                },
                FiberTerm {
                    exponents: vec![0, 0, 2],
                    coeff: one.neg(),
                },
                FiberTerm {
                    exponents: vec![1, 1, 0],
                    coeff: one.clone(),
                },
            ],
        )
        .unwrap();
        assert_eq!(e.terms().len(), 1);
        assert!(FiberEquation::new(
            &[2],
            1,
            vec![FiberTerm {
                exponents: vec![1],
                coeff: one
            }]
        )
        .is_err());
    }

    #[test]
    fn partial_derivatives_of_quadric() {
        let e = quadric_eq();
        let dz = e.partial(2, &[2, 2, 2]).unwrap();
        assert_eq!(dz.twist, 2);
        assert_eq!(dz.terms()[0].exponents, vec![0, 0, 1]);
        assert_eq!(dz.terms()[0].coeff.coeff(0), gauss(-2, 0));
    }

    #[test]
    fn chart_forms_agree_after_rescaling() {
        // F̃(ζ̃, ũ) = ζ̃^d F(1/ζ̃, u) with ũᵢ = ζ̃^{kᵢ} uᵢ
        let one = CoeffPoly::constant(0, gauss(1, 0));
        let lam = CoeffPoly::new(
            4,
            vec![
                gauss(1, 0),
                gauss(0, 2),
                gauss(3, 0),
                gauss(0, 0),
                gauss(5, -1),
            ],
        )
        .unwrap();
        let e = FiberEquation::new(
            &[2, 2, 2],
            4,
            vec![
                FiberTerm {
                    exponents: vec![1, 1, 0],
                    coeff: one.clone(),
                },
                FiberTerm {
                    exponents: vec![0, 0, 0],
                    coeff: lam,
                },
            ],
        )
        .unwrap();
        let z = C64::new(0.3, -0.7);
        let u = [C64::new(1.0, 2.0), C64::new(-0.5, 0.1), C64::new(0.2, 0.2)];
        let w = z.inv();
        let ut: Vec<C64> = u.iter().map(|&x| x * w * w).collect();
        let lhs = e.chart_form(Chart::Infinity).eval(w, &ut);
        let rhs = w.powu(4) * e.chart_form(Chart::Standard).eval(z, &u);
        assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn quadric_is_sigma_compatible() {
        let rules = vec![
            SigmaCoordRule::new(1, 1, 2).unwrap(),
            SigmaCoordRule::new(0, 1, 2).unwrap(),
            SigmaCoordRule::new(2, -1, 2).unwrap(),
        ];
        assert_eq!(quadric_eq().sigma_sign(&rules), Ok(1));
        // x -> y with sign -1 on both coordinates flips the xy monomial only
        let odd = vec![
            SigmaCoordRule::new(1, -1, 2).unwrap(),
            SigmaCoordRule::new(0, 1, 2).unwrap(),
            SigmaCoordRule::new(2, -1, 2).unwrap(),
        ];
        assert!(quadric_eq().sigma_sign(&odd).is_err());
    }
}
