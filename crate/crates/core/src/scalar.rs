//! Scalar backends.
//!
//! Every algebraic routine in the crate is generic over [`Real`], which is
//! implemented for `f64` (floating point, tolerance-based rank decisions) and
//! for [`Rational`] (exact arithmetic, exact rank). Complex numbers are
//! `num_complex::Complex<R>`, so the exact backend works with Gaussian
//! rationals.

use std::fmt::Debug;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::tolerances::{RANK_ABS_FLOOR, RANK_REL_TOL};

pub type Rational = BigRational;
pub type GaussRat = Complex<BigRational>;
pub type C64 = Complex<f64>;

pub trait Real: Clone + Debug + PartialOrd + Num + Signed + Send + Sync + 'static {
    /// True for exact backends: zero tests and ranks are exact.
    const EXACT: bool;

    fn from_rational(q: &Rational) -> Self;

    fn from_i64(v: i64) -> Self;

    /// Value of a finite `f64` (exact for the rational backend).
    fn from_f64(x: f64) -> Self;

    fn to_f64(&self) -> f64;

    /// Square root, when it exists in the backend. The exact backend only
    /// returns roots of perfect squares.
    fn sqrt_exact(&self) -> Option<Self>;

    /// Zero test; the floating backend compares against `tol * max(1, scale)`.
    fn is_negligible(&self, scale: f64, tol: f64) -> bool;

    /// Rank of a complex matrix given by rows.
    fn complex_rank(rows: &[Vec<Complex<Self>>], ncols: usize) -> usize;

    /// Rank of a real matrix given by rows.
    fn real_rank(rows: &[Vec<Self>], ncols: usize) -> usize;
}

impl Real for f64 {
    const EXACT: bool = false;

    fn from_rational(q: &Rational) -> Self {
        rational_to_f64(q)
    }

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn from_f64(x: f64) -> Self {
        x
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn sqrt_exact(&self) -> Option<Self> {
        (*self >= 0.0).then(|| self.sqrt())
    }

    fn is_negligible(&self, scale: f64, tol: f64) -> bool {
        self.abs() <= tol * scale.max(1.0)
    }

    fn complex_rank(rows: &[Vec<C64>], ncols: usize) -> usize {
        if rows.is_empty() || ncols == 0 {
            return 0;
        }
        let m = DMatrix::from_fn(rows.len(), ncols, |i, j| rows[i][j]);
        numeric_rank(&m.singular_values().iter().copied().collect::<Vec<_>>())
    }

    fn real_rank(rows: &[Vec<f64>], ncols: usize) -> usize {
        if rows.is_empty() || ncols == 0 {
            return 0;
        }
        let m = DMatrix::from_fn(rows.len(), ncols, |i, j| rows[i][j]);
        numeric_rank(&m.singular_values().iter().copied().collect::<Vec<_>>())
    }
}

impl Real for Rational {
    const EXACT: bool = true;

    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }

    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }

    fn from_f64(x: f64) -> Self {
        f64_to_rational(x).expect("finite value")
    }

    fn to_f64(&self) -> f64 {
        rational_to_f64(self)
    }

    fn sqrt_exact(&self) -> Option<Self> {
        if self.is_negative() {
            return None;
        }
        let n = self.numer().sqrt();
        let d = self.denom().sqrt();
        (&n * &n == *self.numer() && &d * &d == *self.denom()).then(|| Rational::new(n, d))
    }

    fn is_negligible(&self, _scale: f64, _tol: f64) -> bool {
        self.is_zero()
    }

    fn complex_rank(rows: &[Vec<GaussRat>], ncols: usize) -> usize {
        exact_rank(rows.to_vec(), ncols)
    }

    fn real_rank(rows: &[Vec<Rational>], ncols: usize) -> usize {
        exact_rank(rows.to_vec(), ncols)
    }
}

/// Rank from singular values using the default relative cutoff.
pub fn numeric_rank(singular_values: &[f64]) -> usize {
    numeric_rank_with(singular_values, RANK_REL_TOL)
}

/// Number of singular values above `rel_tol · σ_max` (zero if `σ_max` is
/// below the absolute floor).
pub fn numeric_rank_with(singular_values: &[f64], rel_tol: f64) -> usize {
    let smax = singular_values.iter().copied().fold(0.0_f64, f64::max);
    if smax <= RANK_ABS_FLOOR {
        return 0;
    }
    singular_values
        .iter()
        .filter(|&&s| s > rel_tol * smax)
        .count()
}

/// Gaussian elimination over an exact field.
pub fn exact_rank<F: Clone + Num>(mut rows: Vec<Vec<F>>, ncols: usize) -> usize {
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let pivot_row = rows[rank].clone();
        for r in (rank + 1)..rows.len() {
            if rows[r][col].is_zero() {
                continue;
            }
            let factor = rows[r][col].clone() / pivot_row[col].clone();
            for c in col..ncols {
                let delta = factor.clone() * pivot_row[c].clone();
                rows[r][c] = rows[r][c].clone() - delta;
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

pub fn rational_to_f64(q: &Rational) -> f64 {
    ToPrimitive::to_f64(q).unwrap_or_else(|| {
        let n = q.numer().to_f64().unwrap_or(f64::NAN);
        let d = q.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Exact rational value of a finite `f64` (via its shortest decimal form).
pub fn f64_to_rational(x: f64) -> Result<Rational> {
    if !x.is_finite() {
        return Err(Error::Parse(format!("non-finite number {x}")));
    }
    parse_rational(&format!("{x}"))
}

/// Parses `"p/q"`, integers, and decimals with optional exponent.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid rational `{s}`"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = s.split_once('/') {
        let n = parse_rational(n)?;
        let d = parse_rational(d)?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in `{s}`")));
        }
        return Ok(n / d);
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], s[pos + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part
        .chars()
        .chain(frac_part.chars())
        .all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let all_digits = format!("{int_part}{frac_part}");
    let numer: BigInt = if all_digits.is_empty() {
        BigInt::zero()
    } else {
        all_digits.parse().map_err(|_| bad())?
    };
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut value = Rational::from_integer(numer);
    if scale >= 0 {
        value *= Rational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        value /= Rational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Ok(if negative { -value } else { value })
}

pub fn format_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses a complex literal: `3`, `-1/2`, `2i`, `-i`, `1+2i`, `0.5-3/4i`.
pub fn parse_complex(s: &str) -> Result<GaussRat> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err(Error::Parse("empty complex literal".into()));
    }
    let Some(body) = t.strip_suffix('i') else {
        return Ok(GaussRat::new(parse_rational(&t)?, Rational::zero()));
    };
    // split at the last sign that is not leading and not part of an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("", body),
    };
    let im = match im {
        "" | "+" => Rational::one(),
        "-" => -Rational::one(),
        other => parse_rational(other)?,
    };
    let re = if re.is_empty() {
        Rational::zero()
    } else {
        parse_rational(re)?
    };
    Ok(GaussRat::new(re, im))
}

pub fn format_complex(z: &GaussRat) -> String {
    if z.im.is_zero() {
        return format_rational(&z.re);
    }
    let im = if z.im.is_one() {
        "i".to_string()
    } else if z.im == -Rational::one() {
        "-i".to_string()
    } else {
        format!("{}i", format_rational(&z.im))
    };
    if z.re.is_zero() {
        im
    } else if im.starts_with('-') {
        format!("{}{}", format_rational(&z.re), im)
    } else {
        format!("{}+{}", format_rational(&z.re), im)
    }
}

pub fn gauss(re: i64, im: i64) -> GaussRat {
    GaussRat::new(Rational::from_i64(re), Rational::from_i64(im))
}

pub fn complex_from_rational<R: Real>(z: &GaussRat) -> Complex<R> {
    Complex::new(R::from_rational(&z.re), R::from_rational(&z.im))
}

pub fn complex_to_c64<R: Real>(z: &Complex<R>) -> C64 {
    C64::new(z.re.to_f64(), z.im.to_f64())
}

pub fn c64_to_rational(z: C64) -> Result<GaussRat> {
    Ok(GaussRat::new(
        f64_to_rational(z.re)?,
        f64_to_rational(z.im)?,
    ))
}

/// `|z|^2` in the backend.
pub fn norm_sqr<R: Real>(z: &Complex<R>) -> R {
    z.re.clone() * z.re.clone() + z.im.clone() * z.im.clone()
}

/// `(-1)^k` as a backend scalar.
pub fn parity_sign<R: Real>(k: usize) -> R {
    if k.is_multiple_of(2) {
        R::one()
    } else {
        -R::one()
    }
}
