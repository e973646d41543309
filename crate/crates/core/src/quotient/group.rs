use nalgebra::{Quaternion, UnitQuaternion, Vector3};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::tolerances::GROUP_MUL_TOL;

/// How the group was given.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GroupSource {
    UnitQuaternions,
    Table,
}

/// A finite group as a multiplication table, optionally realized by unit
/// quaternions.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteQuaternionGroup {
    pub name: String,
    elements: Vec<Quaternion<f64>>,
    table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
    source: GroupSource,
}

const ASSOCIATIVITY_LIMIT: usize = 48;

fn find(elements: &[Quaternion<f64>], q: &Quaternion<f64>, tol: f64) -> Option<usize> {
    elements.iter().position(|e| (e - q).norm() <= tol)
}

impl FiniteQuaternionGroup {
    /// Builds the table from quaternions, matching products within `tol`.
    pub fn from_quaternions(name: &str, elements: Vec<Quaternion<f64>>, tol: f64) -> Result<Self> {
        for (i, q) in elements.iter().enumerate() {
            if (q.norm() - 1.0).abs() > tol.max(1e-12) * 10.0 {
                return Err(Error::GroupAxiom {
                    axiom: "unit norm".into(),
                    witness: vec![i],
                });
            }
            if let Some(j) = elements[..i].iter().position(|p| (p - q).norm() <= tol) {
                return Err(Error::GroupAxiom {
                    axiom: "distinct elements".into(),
                    witness: vec![j, i],
                });
            }
        }
        let n = elements.len();
        let mut table = vec![vec![0; n]; n];
        for i in 0..n {
            for j in 0..n {
                let prod = elements[i] * elements[j];
                table[i][j] = find(&elements, &prod, tol).ok_or_else(|| Error::GroupAxiom {
                    axiom: "closure".into(),
                    witness: vec![i, j],
                })?;
            }
        }
        let mut g = Self::from_table(name, table)?;
        g.elements = elements;
        g.source = GroupSource::UnitQuaternions;
        Ok(g)
    }

    /// Validates an abstract multiplication table.
    pub fn from_table(name: &str, table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::GroupAxiom {
                axiom: "nonempty".into(),
                witness: vec![],
            });
        }
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::GroupAxiom {
                    axiom: "square table".into(),
                    witness: vec![i],
                });
            }
            if let Some(j) = row.iter().position(|&v| v >= n) {
                return Err(Error::GroupAxiom {
                    axiom: "closure".into(),
                    witness: vec![i, j],
                });
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|g| table[e][g] == g && table[g][e] == g))
            .ok_or_else(|| Error::GroupAxiom {
                axiom: "identity".into(),
                witness: vec![],
            })?;
        let inverse = (0..n)
            .map(|g| {
                (0..n)
                    .find(|&h| table[g][h] == identity && table[h][g] == identity)
                    .ok_or_else(|| Error::GroupAxiom {
                        axiom: "inverse".into(),
                        witness: vec![g],
                    })
            })
            .collect::<Result<Vec<_>>>()?;
        if n <= ASSOCIATIVITY_LIMIT {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        if table[table[a][b]][c] != table[a][table[b][c]] {
                            return Err(Error::GroupAxiom {
                                axiom: "associativity".into(),
                                witness: vec![a, b, c],
                            });
                        }
                    }
                }
            }
        }
        Ok(Self {
            name: name.to_string(),
            elements: Vec::new(),
            table,
            identity,
            inverse,
            source: GroupSource::Table,
        })
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn source(&self) -> GroupSource {
        self.source
    }

    pub fn elements(&self) -> &[Quaternion<f64>] {
        &self.elements
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    /// The group `u G u⁻¹` for a unit quaternion `u`.
    pub fn conjugated(&self, u: &UnitQuaternion<f64>) -> Result<Self> {
        let u = u.into_inner();
        let u_inv = u.conjugate();
        let elements = self.elements.iter().map(|q| u * q * u_inv).collect();
        Self::from_quaternions(&self.name, elements, GROUP_MUL_TOL * 1e2)
    }
}

fn rotation(angle: f64) -> Quaternion<f64> {
    let axis = Vector3::x_axis();
    UnitQuaternion::from_axis_angle(&axis, 2.0 * angle).into_inner()
}

/// Cyclic group `Z_k` generated by `cos(2π/k) + i sin(2π/k)`.
pub fn cyclic(k: usize) -> Result<FiniteQuaternionGroup> {
    let elements = (0..k)
        .map(|j| rotation(std::f64::consts::TAU * j as f64 / k as f64))
        .collect();
    FiniteQuaternionGroup::from_quaternions(&format!("Z{k}"), elements, GROUP_MUL_TOL * 1e2)
}

/// Quaternion group `{±1, ±i, ±j, ±k}`.
pub fn quaternion_group() -> Result<FiniteQuaternionGroup> {
    let units = [
        Quaternion::new(1.0, 0.0, 0.0, 0.0),
        Quaternion::new(0.0, 1.0, 0.0, 0.0),
        Quaternion::new(0.0, 0.0, 1.0, 0.0),
        Quaternion::new(0.0, 0.0, 0.0, 1.0),
    ];
    let elements = units.iter().flat_map(|q| [*q, -q]).collect();
    FiniteQuaternionGroup::from_quaternions("Q8", elements, GROUP_MUL_TOL)
}

/// Binary dihedral group of order `4n`, generated by `e^{iπ/n}` and `j`.
pub fn binary_dihedral(n: usize) -> Result<FiniteQuaternionGroup> {
    if n < 2 {
        return Err(Error::GroupAxiom {
            axiom: "binary dihedral groups need n >= 2".into(),
            witness: vec![],
        });
    }
    let j = Quaternion::new(0.0, 0.0, 1.0, 0.0);
    let elements = (0..2 * n)
        .map(|k| rotation(std::f64::consts::PI * k as f64 / n as f64))
        .flat_map(|a| [a, a * j])
        .collect();
    FiniteQuaternionGroup::from_quaternions(&format!("BD{}", 4 * n), elements, GROUP_MUL_TOL * 1e2)
}

/// Parses `Z<k>`, `Q8` or `BD<4n>`.
pub fn builtin_group(name: &str) -> Result<FiniteQuaternionGroup> {
    let upper = name.to_ascii_uppercase();
    if upper == "Q8" {
        return quaternion_group();
    }
    let parse = |digits: &str| {
        digits
            .parse::<usize>()
            .map_err(|_| Error::Parse(format!("unknown group `{name}`")))
    };
    if let Some(k) = upper.strip_prefix("BD") {
        let order = parse(k)?;
        if order % 4 != 0 {
            return Err(Error::Parse(format!(
                "binary dihedral order {order} is not a multiple of 4"
            )));
        }
        return binary_dihedral(order / 4);
    }
    if let Some(k) = upper.strip_prefix('Z') {
        let k = parse(k)?;
        if k == 0 {
            return Err(Error::Parse("Z0 is not a finite group".into()));
        }
        return cyclic(k);
    }
    Err(Error::Parse(format!("unknown group `{name}`")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_have_expected_orders() {
        assert_eq!(cyclic(1).unwrap().order(), 1);
        assert_eq!(cyclic(7).unwrap().order(), 7);
        assert_eq!(quaternion_group().unwrap().order(), 8);
        assert_eq!(binary_dihedral(3).unwrap().order(), 12);
        assert_eq!(builtin_group("bd16").unwrap().order(), 16);
        assert!(builtin_group("S3").is_err());
    }

    #[test]
    fn rejects_non_groups() {
        let q = vec![
            Quaternion::new(1.0, 0.0, 0.0, 0.0),
            Quaternion::new(0.0, 1.0, 0.0, 0.0),
        ];
        let err = FiniteQuaternionGroup::from_quaternions("bad", q, 1e-12).unwrap_err();
        assert!(matches!(err, Error::GroupAxiom { ref axiom, .. } if axiom == "closure"));
        // a table that is not associative: Latin square with identity 0
        let t = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        let err = FiniteQuaternionGroup::from_table("bad", t).unwrap_err();
        assert!(
            matches!(err, Error::GroupAxiom { ref axiom, ref witness } if axiom == "associativity" && witness.len() == 3)
        );
    }
}
