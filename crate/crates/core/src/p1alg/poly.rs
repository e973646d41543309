use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{complex_from_rational, complex_to_c64, GaussRat, Rational, Real, C64};

use super::point::{Chart, P1Point};

/// A section of `O(k)`: a polynomial in `ζ` of degree at most `k`.
///
/// `coeffs[j]` is the coefficient of `ζ^j`; the vector always has length
/// `degree_bound + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffPoly<R: Real> {
    degree_bound: usize,
    coeffs: Vec<Complex<R>>,
}

impl<R: Real> CoeffPoly<R> {
    /// Builds a section of `O(k)`. Shorter coefficient vectors are padded
    /// with zeros; nonzero coefficients beyond `k` are a degree error.
    pub fn new(degree_bound: usize, mut coeffs: Vec<Complex<R>>) -> Result<Self> {
        if coeffs.len() > degree_bound + 1
            && coeffs[degree_bound + 1..].iter().any(|c| !c.is_zero())
        {
            return Err(Error::Degree(format!(
                "polynomial of degree {} does not fit in O({degree_bound})",
                coeffs.len() - 1
            )));
        }
        coeffs.resize(degree_bound + 1, Complex::zero());
        Ok(Self {
            degree_bound,
            coeffs,
        })
    }

    pub fn zero(degree_bound: usize) -> Self {
        Self {
            degree_bound,
            coeffs: vec![Complex::zero(); degree_bound + 1],
        }
    }

    pub fn constant(degree_bound: usize, c: Complex<R>) -> Self {
        let mut p = Self::zero(degree_bound);
        p.coeffs[0] = c;
        p
    }

    /// `c ζ^j` as a section of `O(k)`.
    pub fn monomial(degree_bound: usize, j: usize, c: Complex<R>) -> Result<Self> {
        let mut coeffs = vec![Complex::zero(); j + 1];
        coeffs[j] = c;
        Self::new(degree_bound, coeffs)
    }

    pub fn degree_bound(&self) -> usize {
        self.degree_bound
    }

    pub fn coeffs(&self) -> &[Complex<R>] {
        &self.coeffs
    }

    pub fn coeff(&self, j: usize) -> Complex<R> {
        self.coeffs.get(j).cloned().unwrap_or_else(Complex::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Actual degree (`None` for the zero polynomial).
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    /// Same polynomial viewed as a section of `O(k')`, `k' >= degree`.
    pub fn with_bound(&self, degree_bound: usize) -> Result<Self> {
        Self::new(degree_bound, self.coeffs.clone())
    }

    /// Value in the standard chart.
    pub fn eval(&self, zeta: &Complex<R>) -> Complex<R> {
        let mut acc = Complex::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * zeta.clone() + c.clone();
        }
        acc
    }

    /// Value in the chart at infinity: `ζ̃^k s(1/ζ̃)`.
    pub fn eval_infinity(&self, zeta_tilde: &Complex<R>) -> Complex<R> {
        let mut acc = Complex::zero();
        for c in self.coeffs.iter() {
            acc = acc * zeta_tilde.clone() + c.clone();
        }
        acc
    }

    /// Product; the degree bounds add.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = vec![Complex::zero(); self.degree_bound + other.degree_bound + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self {
            degree_bound: self.degree_bound + other.degree_bound,
            coeffs: out,
        }
    }

    /// Sum of two sections of the same bundle.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.degree_bound != other.degree_bound {
            return Err(Error::Degree(format!(
                "cannot add sections of O({}) and O({})",
                self.degree_bound, other.degree_bound
            )));
        }
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.clone() + b.clone())
            .collect();
        Ok(Self {
            degree_bound: self.degree_bound,
            coeffs,
        })
    }

    pub fn scale(&self, c: &Complex<R>) -> Self {
        Self {
            degree_bound: self.degree_bound,
            coeffs: self.coeffs.iter().map(|a| a.clone() * c.clone()).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Complex::<R>::one())
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::constant(0, Complex::one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn to_c64(&self) -> CoeffPoly<f64> {
        CoeffPoly {
            degree_bound: self.degree_bound,
            coeffs: self.coeffs.iter().map(complex_to_c64).collect(),
        }
    }
}

impl CoeffPoly<Rational> {
    /// Converts exact coefficients into another backend.
    pub fn convert<R: Real>(&self) -> CoeffPoly<R> {
        CoeffPoly {
            degree_bound: self.degree_bound,
            coeffs: self.coeffs.iter().map(complex_from_rational).collect(),
        }
    }

    pub fn from_gauss(degree_bound: usize, coeffs: Vec<GaussRat>) -> Result<Self> {
        Self::new(degree_bound, coeffs)
    }
}

impl CoeffPoly<f64> {
    /// Value at a point of `P¹` in that point's chart.
    pub fn eval_at(&self, p: &P1Point) -> C64 {
        match p.chart {
            Chart::Standard => self.eval(&p.value),
            Chart::Infinity => self.eval_infinity(&p.value),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}
