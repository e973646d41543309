use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Which real section of `O(1) ⊕ O(1)` is squared.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SquaringVariant {
    /// `(a - b̄ζ, b + āζ)`
    Minus,
    /// `(a + b̄ζ, b - āζ)`
    Plus,
}

impl std::str::FromStr for SquaringVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "minus" => Ok(Self::Minus),
            "plus" => Ok(Self::Plus),
            other => Err(Error::Parse(format!("unknown variant `{other}`"))),
        }
    }
}

/// Real section `(x₀, x₁, x₂, z₀, r)` of the quadric model.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadricSection<R: Real> {
    pub x0: Complex<R>,
    pub x1: Complex<R>,
    pub x2: Complex<R>,
    pub z0: Complex<R>,
    pub r: R,
}

impl<R: Real> QuadricSection<R> {
    pub fn to_params(&self) -> Vec<R> {
        vec![
            self.x0.re.clone(),
            self.x0.im.clone(),
            self.x1.re.clone(),
            self.x1.im.clone(),
            self.x2.re.clone(),
            self.x2.im.clone(),
            self.z0.re.clone(),
            self.z0.im.clone(),
            self.r.clone(),
        ]
    }

    pub fn from_params(p: &[R]) -> Result<Self> {
        if p.len() != 9 {
            return Err(Error::Dimension {
                expected: 9,
                actual: p.len(),
            });
        }
        let c = |i: usize| Complex::new(p[i].clone(), p[i + 1].clone());
        Ok(Self {
            x0: c(0),
            x1: c(2),
            x2: c(4),
            z0: c(6),
            r: p[8].clone(),
        })
    }

    pub fn is_origin(&self) -> bool {
        self.to_params().iter().all(|v| v.is_zero())
    }
}

/// Squares a real section of `O(1) ⊕ O(1)`: `(x, y, z) = (a(ζ)², b(ζ)², a(ζ)b(ζ))`.
pub fn squaring_section<R: Real>(
    a: &Complex<R>,
    b: &Complex<R>,
    variant: SquaringVariant,
) -> QuadricSection<R> {
    let (a1, b1) = match variant {
        SquaringVariant::Minus => (-b.conj(), a.conj()),
        SquaringVariant::Plus => (b.conj(), -a.conj()),
    };
    let two = R::one() + R::one();
    let z1 = a.clone() * b1.clone() + a1.clone() * b.clone();
    QuadricSection {
        x0: a.clone() * a.clone(),
        x1: (a.clone() * a1.clone()).scale(two),
        x2: a1.clone() * a1,
        z0: a.clone() * b.clone(),
        r: z1.re,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{gauss, GaussRat, Rational};
    use num_traits::Zero;

    fn params(a: (i64, i64), b: (i64, i64), v: SquaringVariant) -> Vec<Rational> {
        squaring_section::<Rational>(&gauss(a.0, a.1), &gauss(b.0, b.1), v).to_params()
    }

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter()
            .map(|&x| Rational::from_integer(x.into()))
            .collect()
    }

    #[test]
    fn examples() {
        assert_eq!(
            params((1, 0), (0, 0), SquaringVariant::Minus),
            ints(&[1, 0, 0, 0, 0, 0, 0, 0, 1])
        );
        assert_eq!(
            params((1, 0), (1, 0), SquaringVariant::Minus),
            ints(&[1, 0, -2, 0, 1, 0, 1, 0, 0])
        );
        assert_eq!(
            params((1, 0), (0, 0), SquaringVariant::Plus),
            ints(&[1, 0, 0, 0, 0, 0, 0, 0, -1])
        );
        for v in [SquaringVariant::Minus, SquaringVariant::Plus] {
            assert!(params((0, 0), (0, 0), v).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn sign_flip_gives_same_section() {
        let a: GaussRat = gauss(3, -2);
        let b: GaussRat = gauss(-1, 5);
        let s = squaring_section::<Rational>(&a, &b, SquaringVariant::Minus);
        let t = squaring_section::<Rational>(&-a, &-b, SquaringVariant::Minus);
        assert_eq!(s, t);
    }
}
