use num_complex::Complex;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

use super::poly::CoeffPoly;

/// Splitting degrees `c₁ ≥ c₂ ≥ …` of a vector bundle `⊕ O(cⱼ)` on `P¹`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplittingType {
    degrees: Vec<i64>,
}

impl SplittingType {
    pub fn new(mut degrees: Vec<i64>) -> Self {
        degrees.sort_unstable_by(|a, b| b.cmp(a));
        Self { degrees }
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    pub fn rank(&self) -> usize {
        self.degrees.len()
    }

    pub fn total_degree(&self) -> i64 {
        self.degrees.iter().sum()
    }

    pub fn h0(&self, twist: i64) -> usize {
        h0_from_splitting(self, twist)
    }
}

impl std::fmt::Display for SplittingType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.degrees.iter().map(|d| d.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// `h⁰(⊕ O(cⱼ + m)) = Σ max(0, cⱼ + m + 1)`.
pub fn h0_from_splitting(t: &SplittingType, m: i64) -> usize {
    t.degrees.iter().map(|&c| (c + m + 1).max(0) as usize).sum()
}

fn check_shapes<R: Real>(
    matrix: &[Vec<CoeffPoly<R>>],
    source: &[i64],
    target: &[i64],
) -> Result<()> {
    if matrix.len() != target.len() {
        return Err(Error::Degree(format!(
            "{} rows for {} target degrees",
            matrix.len(),
            target.len()
        )));
    }
    for (j, row) in matrix.iter().enumerate() {
        if row.len() != source.len() {
            return Err(Error::Degree(format!(
                "row {j} has {} entries for {} sources",
                row.len(),
                source.len()
            )));
        }
        for (i, entry) in row.iter().enumerate() {
            if entry.is_zero() {
                continue;
            }
            let bound = target[j] - source[i];
            if bound < 0 || entry.degree().unwrap_or(0) as i64 > bound {
                return Err(Error::Degree(format!(
                    "entry ({j},{i}) has degree {:?} but maps O({}) to O({})",
                    entry.degree(),
                    source[i],
                    target[j]
                )));
            }
        }
    }
    Ok(())
}

/// Dimension of the space of `(sᵢ)`, `deg sᵢ ≤ sourceᵢ + m`, with `M·s = 0`.
///
/// This is `h⁰` of the `m`-th twist of the kernel sheaf; it is computed by
/// matching coefficients of every row of `M·s`.
pub fn nullspace_dimension<R: Real>(
    matrix: &[Vec<CoeffPoly<R>>],
    source: &[i64],
    target: &[i64],
    m: i64,
) -> Result<usize> {
    check_shapes(matrix, source, target)?;
    let widths: Vec<usize> = source
        .iter()
        .map(|&k| (k + m + 1).max(0) as usize)
        .collect();
    let offsets: Vec<usize> = widths
        .iter()
        .scan(0, |acc, &w| {
            let o = *acc;
            *acc += w;
            Some(o)
        })
        .collect();
    let unknowns: usize = widths.iter().sum();
    if unknowns == 0 {
        return Ok(0);
    }
    let mut rows: Vec<Vec<Complex<R>>> = Vec::new();
    for (j, row) in matrix.iter().enumerate() {
        let top = target[j] + m;
        if top < 0 {
            continue;
        }
        for t in 0..=(top as usize) {
            let mut eq = vec![Complex::<R>::zero(); unknowns];
            let mut any = false;
            for (i, entry) in row.iter().enumerate() {
                for a in 0..widths[i] {
                    if a > t {
                        break;
                    }
                    let c = entry.coeff(t - a);
                    if !c.is_zero() {
                        eq[offsets[i] + a] = c;
                        any = true;
                    }
                }
            }
            if any {
                rows.push(eq);
            }
        }
    }
    Ok(unknowns - R::complex_rank(&rows, unknowns))
}

/// Rank of the kernel of `M(ζ)` at a generic point.
fn generic_kernel_rank<R: Real>(matrix: &[Vec<CoeffPoly<R>>], n_sources: usize) -> usize {
    if matrix.is_empty() {
        return n_sources;
    }
    // A nonzero minor has degree at most the sum of the row degrees, so
    // that many + 1 distinct sample points certify the generic rank exactly.
    let row_degree: usize = matrix
        .iter()
        .map(|row| row.iter().filter_map(|e| e.degree()).max().unwrap_or(0))
        .sum();
    let samples: Vec<Complex<R>> = if R::EXACT {
        (0..=row_degree as i64)
            .map(|v| Complex::new(R::from_i64(v), R::zero()))
            .collect()
    } else {
        // fixed irrational-looking points; the floating rank cutoff decides
        [
            (0.371_104, 0.812_337),
            (-0.613_901, 0.270_443),
            (1.207_719, -0.455_012),
        ]
        .iter()
        .map(|&(re, im)| Complex::new(R::from_f64(re), R::from_f64(im)))
        .collect()
    };
    let rank = samples
        .iter()
        .map(|z| {
            let rows: Vec<Vec<Complex<R>>> = matrix
                .iter()
                .map(|row| row.iter().map(|e| e.eval(z)).collect())
                .collect();
            R::complex_rank(&rows, n_sources)
        })
        .max()
        .unwrap_or(0);
    n_sources - rank
}

/// Splitting type of the kernel of `M : ⊕ O(source[i]) → ⊕ O(target[j])`.
///
/// `d(m)` is computed for increasing twists starting where every section
/// space is empty; `d(m) - d(m-1)` counts the splitting degrees `≥ -m`. The
/// scan stops once the count reaches the generic kernel rank and one further
/// twist confirms the growth is affine.
pub fn kernel_splitting<R: Real>(
    matrix: &[Vec<CoeffPoly<R>>],
    source: &[i64],
    target: &[i64],
) -> Result<SplittingType> {
    check_shapes(matrix, source, target)?;
    let n = source.len();
    if n == 0 {
        return Ok(SplittingType::new(Vec::new()));
    }
    let rank = generic_kernel_rank(matrix, n);
    if rank == 0 {
        return Ok(SplittingType::new(Vec::new()));
    }
    let max_source = *source.iter().max().expect("nonempty");
    let image_rank = n - rank;
    let mut sorted_targets: Vec<i64> = target.to_vec();
    sorted_targets.sort_unstable_by(|a, b| b.cmp(a));
    let image_bound: i64 = sorted_targets.iter().take(image_rank).sum();
    let lowest = source.iter().sum::<i64>() - image_bound.max(0) - (rank as i64 - 1) * max_source;
    let m_start = -max_source - 1;
    let m_stop = (-lowest + 2).max(m_start + 2);

    let mut degrees = Vec::with_capacity(rank);
    let mut prev_d = nullspace_dimension(matrix, source, target, m_start)?;
    if prev_d != 0 {
        return Err(Error::Degree(
            "kernel has sections below every source degree".into(),
        ));
    }
    let mut prev_step = 0usize;
    let mut confirmed = false;
    for m in (m_start + 1)..=m_stop {
        let d = nullspace_dimension(matrix, source, target, m)?;
        let step = d
            .checked_sub(prev_d)
            .ok_or_else(|| Error::Degree("nullspace dimension decreased".into()))?;
        if step < prev_step || step > rank {
            return Err(Error::Degree(format!(
                "twist {m}: step {step} is inconsistent with kernel rank {rank} (previous step {prev_step})"
            )));
        }
        if prev_step == rank {
            confirmed = step == rank;
            if !confirmed {
                return Err(Error::Degree(format!(
                    "twist {m}: growth is not affine after saturation"
                )));
            }
            break;
        }
        degrees.extend(std::iter::repeat_n(-m, step - prev_step));
        prev_step = step;
        prev_d = d;
    }
    if !confirmed {
        return Err(Error::Degree(
            "splitting scan did not terminate within the degree bound".into(),
        ));
    }
    Ok(SplittingType::new(degrees))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{gauss, Rational};

    fn poly(k: usize, c: &[i64]) -> CoeffPoly<Rational> {
        CoeffPoly::new(k, c.iter().map(|&v| gauss(v, 0)).collect()).unwrap()
    }

    #[test]
    fn quadric_linearization_splits_as_one_one() {
        // [ζ², 1, -2ζ] : O(2)³ → O(4)
        let m = vec![vec![poly(2, &[0, 0, 1]), poly(2, &[1]), poly(2, &[0, -2])]];
        let t = kernel_splitting(&m, &[2, 2, 2], &[4]).unwrap();
        assert_eq!(t.degrees(), &[1, 1]);
        assert_eq!(t.total_degree(), 2 + 2 + 2 - 4);
        let f: Vec<Vec<CoeffPoly<f64>>> = vec![m[0].iter().map(|e| e.to_c64()).collect()];
        assert_eq!(
            kernel_splitting(&f, &[2, 2, 2], &[4]).unwrap().degrees(),
            &[1, 1]
        );
    }

    #[test]
    fn identity_has_trivial_kernel() {
        let m = vec![vec![poly(0, &[1])]];
        assert_eq!(kernel_splitting(&m, &[3], &[3]).unwrap().rank(), 0);
    }

    #[test]
    fn graph_of_multiplication_is_isomorphic_to_source() {
        let m = vec![vec![poly(2, &[0, 0, 1]), poly(0, &[1])]];
        assert_eq!(kernel_splitting(&m, &[2, 4], &[4]).unwrap().degrees(), &[2]);
    }

    #[test]
    fn zero_matrix_returns_source_splitting() {
        let m = vec![vec![CoeffPoly::<Rational>::zero(1), CoeffPoly::zero(3)]];
        assert_eq!(
            kernel_splitting(&m, &[2, 0], &[3]).unwrap().degrees(),
            &[2, 0]
        );
    }

    #[test]
    fn inconsistent_degrees_are_rejected() {
        let m = vec![vec![poly(3, &[0, 0, 0, 1])]];
        assert!(matches!(
            kernel_splitting(&m, &[2], &[4]),
            Err(Error::Degree(_))
        ));
        assert!(matches!(
            kernel_splitting(&m, &[2, 2], &[4]),
            Err(Error::Degree(_))
        ));
    }

    #[test]
    fn h0_examples() {
        let t = SplittingType::new(vec![1, 1]);
        assert_eq!(h0_from_splitting(&t, 0), 4);
        assert_eq!(h0_from_splitting(&t, -2), 0);
        assert_eq!(h0_from_splitting(&SplittingType::new(vec![0]), -1), 0);
    }
}
