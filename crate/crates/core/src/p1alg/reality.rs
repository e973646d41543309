use num_complex::Complex;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{parity_sign, GaussRat, Rational, Real};
use crate::symbolic::{CPoly, RealPoly};

use super::poly::CoeffPoly;

/// Real-structure action on one fiber coordinate.
///
/// The involution sends coordinate `i` to `sign · ζ'^k · conj(u_target)` over
/// the antipodal point `ζ' = -1/ζ̄`. On sections this is the pullback
/// `(τs)(ζ) = sign · ζ^k · conj(s(-1/ζ̄))`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SigmaCoordRule {
    pub target: usize,
    pub sign: i8,
    /// Bundle degree of the target coordinate.
    pub twist: usize,
}

impl SigmaCoordRule {
    pub fn new(target: usize, sign: i8, twist: usize) -> Result<Self> {
        if sign != 1 && sign != -1 {
            return Err(Error::NonInvolutive(format!(
                "rule sign must be +1 or -1, got {sign}"
            )));
        }
        Ok(Self {
            target,
            sign,
            twist,
        })
    }

    fn sign_value<R: Real>(&self) -> R {
        if self.sign > 0 {
            R::one()
        } else {
            -R::one()
        }
    }

    /// `(-1)^k · sign_i · sign_j` must equal 1 for the pair to be involutive.
    fn parity_ok(&self, partner_sign: i8) -> bool {
        let parity = if self.twist.is_multiple_of(2) { 1 } else { -1 };
        parity * self.sign * partner_sign == 1
    }
}

/// Coefficient-level pullback `(τs)_j = sign · (-1)^{k-j} · conj(s_{k-j})`.
pub fn tau_pullback<R: Real>(s: &CoeffPoly<R>, rule: &SigmaCoordRule) -> Result<CoeffPoly<R>> {
    let k = rule.twist;
    if s.degree_bound() != k {
        return Err(Error::Degree(format!(
            "section of O({}) cannot be pulled back by a rule of twist {k}",
            s.degree_bound()
        )));
    }
    let sign: R = rule.sign_value();
    let coeffs = (0..=k)
        .map(|j| {
            s.coeff(k - j)
                .conj()
                .scale(sign.clone() * parity_sign::<R>(k - j))
        })
        .collect();
    CoeffPoly::new(k, coeffs)
}

/// Checks that the rules define an involution compatible with the degrees.
pub fn check_rules(degrees: &[usize], rules: &[SigmaCoordRule]) -> Result<()> {
    if rules.len() != degrees.len() {
        return Err(Error::NonInvolutive(format!(
            "{} rules for {} coordinates",
            rules.len(),
            degrees.len()
        )));
    }
    for (i, rule) in rules.iter().enumerate() {
        let j = rule.target;
        if j >= degrees.len() {
            return Err(Error::NonInvolutive(format!(
                "coordinate {i} targets missing coordinate {j}"
            )));
        }
        if rule.twist != degrees[j] || degrees[i] != degrees[j] {
            return Err(Error::Degree(format!(
                "rule for coordinate {i} has twist {} but degrees are O({}) -> O({})",
                rule.twist, degrees[i], degrees[j]
            )));
        }
        if j == i {
            if !rule.parity_ok(rule.sign) {
                return Err(Error::NonInvolutive(format!(
                    "coordinate {i} is self-paired on O({}) with odd twist",
                    rule.twist
                )));
            }
        } else {
            let partner = &rules[j];
            if partner.target != i {
                return Err(Error::NonInvolutive(format!(
                    "coordinate {i} maps to {j} but {j} maps to {}",
                    partner.target
                )));
            }
            if !rule.parity_ok(partner.sign) {
                return Err(Error::NonInvolutive(format!(
                    "pair ({i},{j}) on O({}) has signs {} and {}",
                    rule.twist, rule.sign, partner.sign
                )));
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ParamKind {
    Complex,
    Real,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamComponent {
    pub name: String,
    pub kind: ParamKind,
    /// Index of the first real parameter of this component.
    pub offset: usize,
}

/// Named components of the real parameter vector.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamLayout {
    pub components: Vec<ParamComponent>,
    pub dim: usize,
}

impl ParamLayout {
    fn push(&mut self, name: String, kind: ParamKind) -> usize {
        let offset = self.dim;
        self.dim += match kind {
            ParamKind::Complex => 2,
            ParamKind::Real => 1,
        };
        self.components.push(ParamComponent { name, kind, offset });
        offset
    }

    pub fn rename(&mut self, from: &str, to: &str) {
        for c in &mut self.components {
            if c.name == from {
                c.name = to.to_string();
            }
        }
    }

    /// Names of the individual real parameters (`x0.re`, `x0.im`, `r`, ...).
    pub fn real_names(&self) -> Vec<String> {
        let mut names = Vec::with_capacity(self.dim);
        for c in &self.components {
            match c.kind {
                ParamKind::Complex => {
                    names.push(format!("{}.re", c.name));
                    names.push(format!("{}.im", c.name));
                }
                ParamKind::Real => names.push(c.name.clone()),
            }
        }
        names
    }

    /// Packs one value per component into the real parameter vector. Real
    /// components must be given with zero imaginary part.
    pub fn pack<R: Real>(&self, values: &[Complex<R>]) -> Result<Vec<R>> {
        if values.len() != self.components.len() {
            return Err(Error::Dimension {
                expected: self.components.len(),
                actual: values.len(),
            });
        }
        let mut out = Vec::with_capacity(self.dim);
        for (c, v) in self.components.iter().zip(values) {
            match c.kind {
                ParamKind::Complex => {
                    out.push(v.re.clone());
                    out.push(v.im.clone());
                }
                ParamKind::Real => {
                    if !v.im.is_zero() {
                        return Err(Error::Parse(format!("component `{}` must be real", c.name)));
                    }
                    out.push(v.re.clone());
                }
            }
        }
        Ok(out)
    }

    /// Inverse of [`ParamLayout::pack`].
    pub fn unpack<R: Real>(&self, p: &[R]) -> Result<Vec<Complex<R>>> {
        if p.len() != self.dim {
            return Err(Error::Dimension {
                expected: self.dim,
                actual: p.len(),
            });
        }
        Ok(self
            .components
            .iter()
            .map(|c| match c.kind {
                ParamKind::Complex => Complex::new(p[c.offset].clone(), p[c.offset + 1].clone()),
                ParamKind::Real => Complex::new(p[c.offset].clone(), R::zero()),
            })
            .collect())
    }
}

/// How one section coefficient is expressed in the real parameters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum CoeffSlot {
    /// `c = p[re] + i p[im]`.
    Free { re: usize, im: usize },
    /// `c = factor · conj(p[re] + i p[im])`.
    Mirror { re: usize, im: usize, factor: i8 },
    /// `c = p[index]`.
    RealMiddle { index: usize },
    /// `c = i p[index]`.
    ImagMiddle { index: usize },
}

/// Real parametrization of the τ-fixed coefficient space.
///
/// For a swapped pair `(i, j)` every coefficient of the lower coordinate is
/// free and the partner is its mirror; for a self-paired coordinate the
/// coefficients below the middle are free, the middle one is real or
/// imaginary, and the upper half mirrors the lower half.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealParamBasis {
    pub layout: ParamLayout,
    pub degrees: Vec<usize>,
    pub slots: Vec<Vec<CoeffSlot>>,
}

/// Real basis of the fixed space of the τ maps on `⊕ O(degrees[i])`.
///
/// `names` labels the coordinates; parameters are named `<coord><index>`.
pub fn reality_fixed_space(
    degrees: &[usize],
    rules: &[SigmaCoordRule],
    names: &[String],
) -> Result<RealParamBasis> {
    check_rules(degrees, rules)?;
    let mut layout = ParamLayout {
        components: Vec::new(),
        dim: 0,
    };
    let mut slots: Vec<Vec<Option<CoeffSlot>>> =
        degrees.iter().map(|&k| vec![None; k + 1]).collect();
    let name_of = |i: usize| names.get(i).cloned().unwrap_or_else(|| format!("u{i}"));

    for (i, rule) in rules.iter().enumerate() {
        let k = degrees[i];
        let j = rule.target;
        if j == i {
            for m in 0..=k {
                if 2 * m < k {
                    let off = layout.push(format!("{}{m}", name_of(i)), ParamKind::Complex);
                    slots[i][m] = Some(CoeffSlot::Free {
                        re: off,
                        im: off + 1,
                    });
                    let factor = rule.sign * if m % 2 == 0 { 1 } else { -1 };
                    slots[i][k - m] = Some(CoeffSlot::Mirror {
                        re: off,
                        im: off + 1,
                        factor,
                    });
                } else if 2 * m == k {
                    let off = layout.push(format!("{}{m}", name_of(i)), ParamKind::Real);
                    let real =
                        rule.sign as i32 * if (k / 2).is_multiple_of(2) { 1 } else { -1 } == 1;
                    slots[i][m] = Some(if real {
                        CoeffSlot::RealMiddle { index: off }
                    } else {
                        CoeffSlot::ImagMiddle { index: off }
                    });
                }
            }
        } else if i < j {
            let partner_sign = rules[j].sign;
            for m in 0..=k {
                let off = layout.push(format!("{}{m}", name_of(i)), ParamKind::Complex);
                slots[i][m] = Some(CoeffSlot::Free {
                    re: off,
                    im: off + 1,
                });
                // c_{j,k-m} = s_j (-1)^m conj(c_{i,m})
                let factor = partner_sign * if m % 2 == 0 { 1 } else { -1 };
                slots[j][k - m] = Some(CoeffSlot::Mirror {
                    re: off,
                    im: off + 1,
                    factor,
                });
            }
        }
    }
    let slots = slots
        .into_iter()
        .map(|row| {
            row.into_iter()
                .map(|s| s.expect("every coefficient is assigned"))
                .collect()
        })
        .collect();
    Ok(RealParamBasis {
        layout,
        degrees: degrees.to_vec(),
        slots,
    })
}

impl RealParamBasis {
    pub fn real_dim(&self) -> usize {
        self.layout.dim
    }

    /// Complex dimension of the ambient coefficient space.
    pub fn coefficient_dim(&self) -> usize {
        self.degrees.iter().map(|k| k + 1).sum()
    }

    fn slot_value<R: Real>(slot: &CoeffSlot, p: &[R]) -> Complex<R> {
        match *slot {
            CoeffSlot::Free { re, im } => Complex::new(p[re].clone(), p[im].clone()),
            CoeffSlot::Mirror { re, im, factor } => {
                let f = if factor > 0 { R::one() } else { -R::one() };
                Complex::new(p[re].clone(), p[im].clone()).conj().scale(f)
            }
            CoeffSlot::RealMiddle { index } => Complex::new(p[index].clone(), R::zero()),
            CoeffSlot::ImagMiddle { index } => Complex::new(R::zero(), p[index].clone()),
        }
    }

    /// Section coefficients for a real parameter vector.
    pub fn embed<R: Real>(&self, p: &[R]) -> Result<Vec<CoeffPoly<R>>> {
        if p.len() != self.real_dim() {
            return Err(Error::Dimension {
                expected: self.real_dim(),
                actual: p.len(),
            });
        }
        self.slots
            .iter()
            .zip(&self.degrees)
            .map(|(row, &k)| {
                CoeffPoly::new(k, row.iter().map(|s| Self::slot_value(s, p)).collect())
            })
            .collect()
    }

    /// Reads the real parameters back from τ-fixed section coefficients.
    pub fn read_params<R: Real>(&self, sections: &[CoeffPoly<R>]) -> Result<Vec<R>> {
        if sections.len() != self.degrees.len() {
            return Err(Error::Dimension {
                expected: self.degrees.len(),
                actual: sections.len(),
            });
        }
        let mut p = vec![R::zero(); self.real_dim()];
        for (row, s) in self.slots.iter().zip(sections) {
            for (m, slot) in row.iter().enumerate() {
                let c = s.coeff(m);
                match *slot {
                    CoeffSlot::Free { re, im } => {
                        p[re] = c.re;
                        p[im] = c.im;
                    }
                    CoeffSlot::RealMiddle { index } => p[index] = c.re,
                    CoeffSlot::ImagMiddle { index } => p[index] = c.im,
                    CoeffSlot::Mirror { .. } => {}
                }
            }
        }
        Ok(p)
    }

    /// Coefficients as complex-valued linear polynomials in the real
    /// parameters, indexed `[coordinate][power]`.
    pub fn symbolic(&self) -> Vec<Vec<CPoly>> {
        let n = self.real_dim();
        let var = |i: usize| RealPoly::var(n, i);
        self.slots
            .iter()
            .map(|row| {
                row.iter()
                    .map(|slot| match *slot {
                        CoeffSlot::Free { re, im } => CPoly::new(var(re), var(im)),
                        CoeffSlot::Mirror { re, im, factor } => {
                            let c = CPoly::new(var(re), var(im)).conj();
                            if factor > 0 {
                                c
                            } else {
                                c.neg()
                            }
                        }
                        CoeffSlot::RealMiddle { index } => {
                            CPoly::new(var(index), RealPoly::zero(n))
                        }
                        CoeffSlot::ImagMiddle { index } => {
                            CPoly::new(RealPoly::zero(n), var(index))
                        }
                    })
                    .collect()
            })
            .collect()
    }

    /// The embedding of each unit parameter vector: a real basis of the
    /// fixed space, flattened coordinate by coordinate.
    pub fn basis_vectors(&self) -> Vec<Vec<GaussRat>> {
        (0..self.real_dim())
            .map(|e| {
                let mut p = vec![Rational::zero(); self.real_dim()];
                p[e] = Rational::one();
                self.embed(&p)
                    .expect("dimension matches")
                    .into_iter()
                    .flat_map(|s| s.coeffs().to_vec())
                    .collect()
            })
            .collect()
    }

    /// True if the sections are fixed by the pullbacks of `rules`.
    pub fn is_tau_fixed<R: Real>(
        sections: &[CoeffPoly<R>],
        rules: &[SigmaCoordRule],
        tol: f64,
    ) -> Result<bool> {
        for (i, rule) in rules.iter().enumerate() {
            let pulled = tau_pullback(&sections[rule.target], rule)?;
            let scale = sections[i]
                .coeffs()
                .iter()
                .map(|c| c.norm_sqr().to_f64())
                .sum::<f64>()
                .sqrt();
            for (a, b) in pulled.coeffs().iter().zip(sections[i].coeffs()) {
                let d = a.clone() - b.clone();
                if !(d.re.is_negligible(scale, tol) && d.im.is_negligible(scale, tol)) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}
