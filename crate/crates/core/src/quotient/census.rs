use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::scalar::{Real, C64};
use crate::twistor_model::{squaring_section, RealEquationSystem, SquaringVariant};

use super::group::{FiniteQuaternionGroup, GroupSource};

/// Elements with `g² = e` (including `e`) split into conjugacy classes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvolutionCensus {
    pub involutions: Vec<usize>,
    pub classes: Vec<Vec<usize>>,
}

impl InvolutionCensus {
    pub fn class_sizes(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self.classes.iter().map(Vec::len).collect();
        s.sort_unstable();
        s
    }
}

pub fn census_involutions(g: &FiniteQuaternionGroup) -> InvolutionCensus {
    let e = g.identity();
    let involutions: Vec<usize> = (0..g.order()).filter(|&x| g.mul(x, x) == e).collect();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for &x in &involutions {
        if classes.iter().any(|c| c.contains(&x)) {
            continue;
        }
        let mut class: Vec<usize> = (0..g.order())
            .map(|h| g.mul(g.mul(h, x), g.inv(h)))
            .collect();
        class.sort_unstable();
        class.dedup();
        classes.push(class);
    }
    InvolutionCensus {
        involutions,
        classes,
    }
}

/// The action whose quotient is counted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ActionKind {
    /// Left multiplication by unit quaternions on `ℍⁿ`.
    LeftMultiplication,
    Other,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentCount {
    pub count: usize,
    /// The count is only a lower bound.
    pub lower_bound: bool,
    pub assumptions: Vec<String>,
}

/// Number of connected components of the regular part of the closure
/// quotient: one per conjugacy class of elements with `g² = e`, provided
/// each fixed set `Y_g` is connected.
pub fn component_count(g: &FiniteQuaternionGroup, action: ActionKind) -> ComponentCount {
    let census = census_involutions(g);
    let mut assumptions = Vec::new();
    let mut lower_bound = false;
    match action {
        ActionKind::LeftMultiplication => {
            assumptions.push("Y_g connected: fixed sets of antiholomorphic involutions of the flat complexification".into());
            if g.source() == GroupSource::Table {
                assumptions.push(
                    "group given by a table: freeness of the action away from 0 not checked".into(),
                );
            }
        }
        ActionKind::Other => {
            assumptions.push("action is not left multiplication: Y_g may be disconnected".into());
            lower_bound = true;
        }
    }
    ComponentCount {
        count: census.classes.len(),
        lower_bound,
        assumptions,
    }
}

/// True iff `G` has no element of order two, so the closure quotient is
/// the plain quotient.
pub fn proper_quotient_predicate(g: &FiniteQuaternionGroup) -> bool {
    census_involutions(g).involutions == [g.identity()]
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VeroneseSample {
    pub section: Vec<f64>,
    pub on_quadric: bool,
    pub sign_invariant: bool,
    /// Number of `(a, b)` mapping to the same section.
    pub preimages: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VeroneseReport {
    pub samples: Vec<VeroneseSample>,
    pub all_on_quadric: bool,
    pub all_sign_invariant: bool,
    /// Preimage count shared by all nonzero samples, if they agree.
    pub degree: Option<usize>,
}

fn preimage_count(x0: C64, y0: C64, target: &[f64], variant: SquaringVariant) -> usize {
    let roots = |w: C64| {
        let s = w.sqrt();
        [s, -s]
    };
    let mut found: Vec<(C64, C64)> = Vec::new();
    for a in roots(x0) {
        for b in roots(y0) {
            let s = squaring_section::<f64>(&a, &b, variant).to_params();
            let d: f64 = s
                .iter()
                .zip(target)
                .map(|(u, v)| (u - v).powi(2))
                .sum::<f64>()
                .sqrt();
            let scale = 1.0 + target.iter().map(|v| v * v).sum::<f64>().sqrt();
            if d <= 1e-8 * scale
                && !found
                    .iter()
                    .any(|(p, q)| (p - a).norm() + (q - b).norm() <= 1e-8 * scale)
            {
                found.push((a, b));
            }
        }
    }
    found.len()
}

/// Checks that squared sections lie on the quadric, that `±(a, b)` give the
/// same section, and counts preimages.
pub fn veronese_quotient_check<R: Real>(
    sys: &RealEquationSystem,
    samples: &[(Complex<R>, Complex<R>)],
    variant: SquaringVariant,
    tol: f64,
) -> Result<VeroneseReport> {
    let mut out = Vec::with_capacity(samples.len());
    let mut degrees = Vec::new();
    for (a, b) in samples {
        let s = squaring_section(a, b, variant);
        let neg = squaring_section(&-a.clone(), &-b.clone(), variant);
        let params = s.to_params();
        let on_quadric = crate::analyzer::membership(sys, &params, tol)?.passed;
        let section: Vec<f64> = params.iter().map(Real::to_f64).collect();
        let preimages = if s.is_origin() {
            1
        } else {
            let x0 = crate::scalar::complex_to_c64(&s.x0);
            // y₀ = b² for either variant
            let y0 = crate::scalar::complex_to_c64(&(b.clone() * b.clone()));
            let n = preimage_count(x0, y0, &section, variant);
            degrees.push(n);
            n
        };
        out.push(VeroneseSample {
            section,
            on_quadric,
            sign_invariant: s == neg,
            preimages,
        });
    }
    degrees.sort_unstable();
    degrees.dedup();
    Ok(VeroneseReport {
        all_on_quadric: out.iter().all(|s| s.on_quadric),
        all_sign_invariant: out.iter().all(|s| s.sign_invariant),
        degree: if degrees.len() == 1 {
            Some(degrees[0])
        } else {
            None
        },
        samples: out,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quotient::{binary_dihedral, cyclic, quaternion_group};

    #[test]
    fn census_examples() {
        let z2 = census_involutions(&cyclic(2).unwrap());
        assert_eq!(z2.classes.len(), 2);
        assert_eq!(census_involutions(&cyclic(3).unwrap()).classes.len(), 1);
        let q8 = census_involutions(&quaternion_group().unwrap());
        assert_eq!(q8.involutions.len(), 2);
        assert_eq!(q8.class_sizes(), vec![1, 1]);
    }

    #[test]
    fn counts_and_predicate() {
        for k in 1..=12 {
            let g = cyclic(k).unwrap();
            let expected = if k % 2 == 0 { 2 } else { 1 };
            assert_eq!(
                component_count(&g, ActionKind::LeftMultiplication).count,
                expected,
                "Z{k}"
            );
            assert_eq!(proper_quotient_predicate(&g), expected == 1);
        }
        for n in 2..=4 {
            let g = binary_dihedral(n).unwrap();
            assert_eq!(component_count(&g, ActionKind::LeftMultiplication).count, 2);
            assert!(!proper_quotient_predicate(&g));
        }
        let other = component_count(&cyclic(3).unwrap(), ActionKind::Other);
        assert!(other.lower_bound);
    }
}
