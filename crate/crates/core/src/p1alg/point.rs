use serde::{Deserialize, Serialize};

use crate::scalar::C64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Chart {
    /// Affine coordinate `ζ`.
    Standard,
    /// Affine coordinate `ζ̃ = 1/ζ`.
    Infinity,
}

/// A point of `P¹` given by an affine coordinate in one of the two charts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct P1Point {
    pub chart: Chart,
    pub value: C64,
}

impl P1Point {
    pub fn standard(value: C64) -> Self {
        Self {
            chart: Chart::Standard,
            value,
        }
    }

    pub fn at_infinity(value: C64) -> Self {
        Self {
            chart: Chart::Infinity,
            value,
        }
    }

    pub fn zero() -> Self {
        Self::standard(C64::new(0.0, 0.0))
    }

    pub fn infinity() -> Self {
        Self::at_infinity(C64::new(0.0, 0.0))
    }

    pub fn real(x: f64) -> Self {
        Self::standard(C64::new(x, 0.0))
    }

    /// Homogeneous coordinates `[z0 : z1]` with `ζ = z1 / z0`.
    pub fn homogeneous(&self) -> (C64, C64) {
        match self.chart {
            Chart::Standard => (C64::new(1.0, 0.0), self.value),
            Chart::Infinity => (self.value, C64::new(1.0, 0.0)),
        }
    }

    /// The affine coordinate in the standard chart, if the point is finite.
    pub fn standard_value(&self) -> Option<C64> {
        match self.chart {
            Chart::Standard => Some(self.value),
            Chart::Infinity if self.value.norm() == 0.0 => None,
            Chart::Infinity => Some(self.value.inv()),
        }
    }

    /// The same point in the chart where `|value| <= 1`.
    pub fn canonical(&self) -> Self {
        if self.value.norm() <= 1.0 {
            return *self;
        }
        let flipped = self.value.inv();
        match self.chart {
            Chart::Standard => Self::at_infinity(flipped),
            Chart::Infinity => Self::standard(flipped),
        }
    }

    /// The antipodal point `-1/ζ̄`. In chart terms this is a chart swap with
    /// value `-conj(value)`, so no division is needed.
    pub fn antipodal(&self) -> Self {
        let v = -self.value.conj();
        match self.chart {
            Chart::Standard => Self::at_infinity(v),
            Chart::Infinity => Self::standard(v),
        }
    }

    /// Chordal distance on the Riemann sphere (0 for equal points, at most 1).
    pub fn chordal_distance(&self, other: &Self) -> f64 {
        let (a0, a1) = self.homogeneous();
        let (b0, b1) = other.homogeneous();
        let cross = (a0 * b1 - a1 * b0).norm();
        let na = (a0.norm_sqr() + a1.norm_sqr()).sqrt();
        let nb = (b0.norm_sqr() + b1.norm_sqr()).sqrt();
        cross / (na * nb)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.chordal_distance(other) <= tol
    }
}

impl std::fmt::Display for P1Point {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let v = self.value;
        match self.chart {
            Chart::Standard => write!(f, "ζ={}{:+}i", v.re, v.im),
            Chart::Infinity if v.norm() == 0.0 => write!(f, "ζ=∞"),
            Chart::Infinity => write!(f, "ζ̃={}{:+}i", v.re, v.im),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn antipodal_examples() {
        assert!(P1Point::zero()
            .antipodal()
            .approx_eq(&P1Point::infinity(), 0.0));
        assert!(P1Point::real(1.0)
            .antipodal()
            .approx_eq(&P1Point::real(-1.0), 1e-15));
        let i = P1Point::standard(C64::new(0.0, 1.0));
        let minus_i = P1Point::standard(C64::new(0.0, -1.0));
        assert!(i.antipodal().approx_eq(&minus_i, 1e-15));
        // direct evaluation of -1/conj(i)
        let direct = -C64::new(0.0, 1.0).conj().inv();
        assert!((i.antipodal().standard_value().unwrap() - direct).norm() < 1e-15);
    }

    #[test]
    fn antipodal_is_free_involution_on_random_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 0..10_000 {
            let v = C64::new(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0));
            let p = if n % 2 == 0 {
                P1Point::standard(v)
            } else {
                P1Point::at_infinity(v)
            };
            let q = p.antipodal();
            assert!(q.antipodal().approx_eq(&p, 1e-12));
            // antipodal points are at chordal distance exactly 1
            assert!((p.chordal_distance(&q) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn chart_conversion_inverts_value() {
        let p = P1Point::standard(C64::new(3.0, 4.0));
        let c = p.canonical();
        assert_eq!(c.chart, Chart::Infinity);
        assert!((c.value * p.value - C64::new(1.0, 0.0)).norm() < 1e-15);
        assert!(c.approx_eq(&p, 1e-15));
    }
}
