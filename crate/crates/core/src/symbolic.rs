//! Sparse multivariate polynomials with exact rational coefficients in real
//! variables, and complex-valued combinations of them.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_traits::{One, Signed, Zero};

use crate::scalar::{format_rational, GaussRat, Rational, Real};

/// Polynomial in `nvars` real variables with rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RealPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl RealPoly {
    pub fn zero(nvars: usize) -> Self {
        Self {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(e, Rational::one());
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rational)> {
        self.terms.iter()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    fn add_term(&mut self, exps: Vec<u32>, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Self {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    /// Partial derivative with respect to variable `i`.
    pub fn derivative(&self, i: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut d = e.clone();
            d[i] -= 1;
            out.add_term(d, c * Rational::from_integer(e[i].into()));
        }
        out
    }

    pub fn eval<R: Real>(&self, p: &[R]) -> R {
        let mut acc = R::zero();
        for (e, c) in &self.terms {
            let mut term = R::from_rational(c);
            for (x, &k) in p.iter().zip(e) {
                for _ in 0..k {
                    term = term * x.clone();
                }
            }
            acc = acc + term;
        }
        acc
    }

    /// Floating point form for fast repeated evaluation.
    pub fn compile(&self) -> CompiledPoly {
        CompiledPoly {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let factors = e
                        .iter()
                        .enumerate()
                        .filter(|(_, &k)| k > 0)
                        .map(|(i, &k)| (i, k))
                        .collect();
                    (factors, c.to_f64())
                })
                .collect(),
        }
    }

    /// Human-readable form using the given variable names.
    pub fn format(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (n, (e, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            let magnitude = c.abs();
            if n == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let monomial: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| {
                    let name = names.get(i).cloned().unwrap_or_else(|| format!("t{i}"));
                    if k == 1 {
                        name
                    } else {
                        format!("{name}^{k}")
                    }
                })
                .collect();
            if monomial.is_empty() {
                out.push_str(&format_rational(&magnitude));
            } else {
                if !magnitude.is_one() {
                    let _ = write!(out, "{}*", format_rational(&magnitude));
                }
                out.push_str(&monomial.join("*"));
            }
        }
        out
    }
}

/// A [`RealPoly`] with `f64` coefficients and sparse monomials.
#[derive(Debug, Clone)]
pub struct CompiledPoly {
    terms: Vec<(Vec<(usize, u32)>, f64)>,
}

impl CompiledPoly {
    pub fn eval(&self, p: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(factors, c)| {
                factors
                    .iter()
                    .fold(*c, |acc, &(i, k)| acc * p[i].powi(k as i32))
            })
            .sum()
    }
}

/// Complex-valued polynomial `re + i·im` in real variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CPoly {
    pub re: RealPoly,
    pub im: RealPoly,
}

impl CPoly {
    pub fn new(re: RealPoly, im: RealPoly) -> Self {
        Self { re, im }
    }

    pub fn zero(nvars: usize) -> Self {
        Self::new(RealPoly::zero(nvars), RealPoly::zero(nvars))
    }

    pub fn constant(nvars: usize, c: &GaussRat) -> Self {
        Self::new(
            RealPoly::constant(nvars, c.re.clone()),
            RealPoly::constant(nvars, c.im.clone()),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(self.re.add(&o.re), self.im.add(&o.im))
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::new(self.re.sub(&o.re), self.im.sub(&o.im))
    }

    pub fn neg(&self) -> Self {
        Self::new(self.re.neg(), self.im.neg())
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), self.im.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::new(
            self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        )
    }

    pub fn scale(&self, c: &GaussRat) -> Self {
        Self::new(
            self.re.scale(&c.re).sub(&self.im.scale(&c.im)),
            self.re.scale(&c.im).add(&self.im.scale(&c.re)),
        )
    }

    pub fn pow(&self, e: u32) -> Self {
        let n = self.re.nvars();
        let mut acc = Self::constant(n, &GaussRat::one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::gauss;

    #[test]
    fn arithmetic_and_derivative() {
        let x = RealPoly::var(2, 0);
        let y = RealPoly::var(2, 1);
        let p = x.mul(&x).sub(&y.scale(&Rational::from_i64(3))); // x² - 3y
        assert_eq!(
            p.eval(&[Rational::from_i64(2), Rational::from_i64(1)]),
            Rational::from_i64(1)
        );
        assert_eq!(p.derivative(0), x.scale(&Rational::from_i64(2)));
        assert_eq!(
            p.derivative(1),
            RealPoly::constant(2, Rational::from_i64(-3))
        );
        assert!(p.sub(&p).is_zero());
        assert!((p.compile().eval(&[0.5, 2.0]) - (0.25 - 6.0)).abs() < 1e-15);
        assert_eq!(p.format(&["x".into(), "y".into()]), "x^2 - 3*y");
    }

    #[test]
    fn complex_products() {
        // (a + ib)(a - ib) = a² + b²
        let z = CPoly::new(RealPoly::var(2, 0), RealPoly::var(2, 1));
        let n = z.mul(&z.conj());
        assert!(n.im.is_zero());
        assert_eq!(
            n.re,
            RealPoly::var(2, 0)
                .mul(&RealPoly::var(2, 0))
                .add(&RealPoly::var(2, 1).mul(&RealPoly::var(2, 1)))
        );
        // i·z = -b + ia
        let iz = z.scale(&gauss(0, 1));
        assert_eq!(iz.re, RealPoly::var(2, 1).neg());
        assert_eq!(z.pow(2), z.mul(&z));
    }
}
