use num_complex::Complex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{norm_sqr, Real};
use crate::twistor_model::QuadricSection;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ComponentLabel {
    #[serde(rename = "+1")]
    Plus,
    #[serde(rename = "-1")]
    Minus,
    #[serde(rename = "boundary")]
    Boundary,
}

impl ComponentLabel {
    /// The sign `s` with `|x₀| - |x₂| = s·r`; `+1` on the boundary.
    pub fn sign(self) -> i8 {
        match self {
            Self::Minus => -1,
            _ => 1,
        }
    }
}

/// Sign `s` with `|x₀| - |x₂| = s·r` for a quadric section.
pub fn component_label<R: Real>(p: &[R], tol: f64) -> Result<ComponentLabel> {
    let q = QuadricSection::from_params(p)?;
    let f: Vec<f64> = p.iter().map(Real::to_f64).collect();
    let scale = 1.0 + f.iter().map(|v| v * v).sum::<f64>().sqrt();
    if f.iter().all(|v| v.abs() <= tol) {
        return Err(Error::Origin);
    }
    let exact = match (norm_sqr(&q.x0).sqrt_exact(), norm_sqr(&q.x2).sqrt_exact()) {
        (Some(m0), Some(m2)) if R::EXACT => {
            let d = m0 - m2;
            Some((d == q.r, d == -q.r.clone()))
        }
        _ => None,
    };
    let abs = |z: &Complex<R>| norm_sqr(z).to_f64().sqrt();
    let d = abs(&q.x0) - abs(&q.x2);
    let r = q.r.to_f64();
    let (plus, minus) =
        exact.unwrap_or(((d - r).abs() <= tol * scale, (d + r).abs() <= tol * scale));
    match (plus, minus) {
        (true, true) => Ok(ComponentLabel::Boundary),
        (true, false) => Ok(ComponentLabel::Plus),
        (false, true) => Ok(ComponentLabel::Minus),
        (false, false) => Err(Error::Model(format!("|x0| - |x2| = {d} is not ±r = ±{r}"))),
    }
}

pub type Mat4<R> = [[R; 4]; 4];

fn zero4<R: Real>() -> Mat4<R> {
    std::array::from_fn(|_| std::array::from_fn(|_| R::zero()))
}

fn matmul<R: Real>(a: &Mat4<R>, b: &Mat4<R>) -> Mat4<R> {
    let mut c = zero4::<R>();
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                c[i][j] = c[i][j].clone() + a[i][k].clone() * b[k][j].clone();
            }
        }
    }
    c
}

fn shift<R: Real>(a: &Mat4<R>, c: &R) -> Mat4<R> {
    let mut out = a.clone();
    for (i, row) in out.iter_mut().enumerate() {
        row[i] = row[i].clone() + c.clone();
    }
    out
}

fn max_abs<R: Real>(a: &Mat4<R>) -> R {
    a.iter()
        .flatten()
        .map(|v| v.abs())
        .fold(R::zero(), |m, v| if v > m { v } else { m })
}

pub fn trace<R: Real>(a: &Mat4<R>) -> R {
    (0..4).fold(R::zero(), |acc, i| acc + a[i][i].clone())
}

pub fn rank4<R: Real>(a: &Mat4<R>) -> usize {
    let rows: Vec<Vec<R>> = a.iter().map(|r| r.to_vec()).collect();
    R::real_rank(&rows, 4)
}

fn close<R: Real>(a: &R, b: &R, scale: f64) -> bool {
    (a.clone() - b.clone()).is_negligible(scale, 1e-9)
}

/// Recovers `(B, t)` with `B + (t/4)·Id = s·qqᵀ` traceless-shifted, from a
/// section on the component with label sign `s`.
pub fn sym_matrix_model<R: Real>(p: &[R], s: i8) -> Result<(Mat4<R>, R)> {
    let q = QuadricSection::from_params(p)?;
    let sign = if s < 0 { -R::one() } else { R::one() };
    let two = R::from_i64(2);
    let four = R::from_i64(4);
    let modulus = |z: &Complex<R>| {
        norm_sqr(z)
            .sqrt_exact()
            .ok_or_else(|| Error::Model("modulus is not representable exactly".into()))
    };
    let (m0, m2) = (modulus(&q.x0)?, modulus(&q.x2)?);
    let scale = 1.0 + p.iter().map(|v| v.to_f64().powi(2)).sum::<f64>();
    if !close(
        &(sign.clone() * q.r.clone()),
        &(m0.clone() - m2.clone()),
        scale,
    ) {
        return Err(Error::Model(
            "section is not on the component with the given label".into(),
        ));
    }
    let x1 = q.x1.scale(sign.clone());
    let half = |v: R| v / two.clone();
    // products q_i q_j
    let mut pr = zero4::<R>();
    pr[0][0] = half(m0.clone() + q.x0.re.clone());
    pr[1][1] = half(m0.clone() - q.x0.re.clone());
    pr[2][2] = half(m2.clone() + q.x2.re.clone());
    pr[3][3] = half(m2.clone() - q.x2.re.clone());
    pr[0][1] = half(q.x0.im.clone());
    pr[2][3] = half(-q.x2.im.clone());
    let w_re = half(-x1.re.clone());
    let w_im = half(-x1.im.clone());
    pr[0][2] = half(q.z0.re.clone() + w_re.clone());
    pr[1][3] = half(w_re - q.z0.re.clone());
    pr[1][2] = half(q.z0.im.clone() + w_im.clone());
    pr[0][3] = half(q.z0.im.clone() - w_im);
    for i in 0..4 {
        for j in (i + 1)..4 {
            pr[j][i] = pr[i][j].clone();
        }
    }
    for i in 0..4 {
        for j in (i + 1)..4 {
            let lhs = pr[i][j].clone() * pr[i][j].clone();
            let rhs = pr[i][i].clone() * pr[j][j].clone();
            if !close(&lhs, &rhs, scale * scale) {
                return Err(Error::Model(format!(
                    "products q{i}q{j} are not those of a rank-one matrix"
                )));
            }
        }
    }
    let t = sign.clone() * (m0 + m2);
    let mut b = zero4::<R>();
    for i in 0..4 {
        for j in 0..4 {
            b[i][j] = sign.clone() * pr[i][j].clone();
        }
        b[i][i] = b[i][i].clone() - t.clone() / four.clone();
    }
    Ok((b, t))
}

/// Labels the section and recovers `(B, t)`. On the boundary `r = 0` the
/// label does not fix the sign; both are tried. Returns the sign used.
pub fn section_matrix_model<R: Real>(
    p: &[R],
    tol: f64,
) -> Result<(Mat4<R>, R, ComponentLabel, i8)> {
    let label = component_label(p, tol)?;
    match label {
        ComponentLabel::Boundary => match sym_matrix_model(p, 1) {
            Ok((b, t)) => Ok((b, t, label, 1)),
            Err(_) => sym_matrix_model(p, -1).map(|(b, t)| (b, t, label, -1)),
        },
        _ => sym_matrix_model(p, label.sign()).map(|(b, t)| (b, t, label, label.sign())),
    }
}

/// Residuals of quadratic identities for `A = qqᵀ`, `t = tr A`,
/// `B = A - (t/4)·Id`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatrixOracleReport {
    pub rank_a: usize,
    pub trace_b: f64,
    /// `max |(B + t/4)(B - 3t/4)|`
    pub shifted_identity_residual: f64,
    /// `max |B(B + t/4)|`
    pub displayed_identity_residual: f64,
    /// `(3t/4)·max |A|`, the predicted value of the previous entry.
    pub displayed_identity_prediction: f64,
    pub exact: bool,
}

pub fn matrix_model_oracle<R: Real>(q: &[R; 4]) -> MatrixOracleReport {
    let mut a = zero4::<R>();
    for i in 0..4 {
        for j in 0..4 {
            a[i][j] = q[i].clone() * q[j].clone();
        }
    }
    let t = trace(&a);
    let four = R::from_i64(4);
    let quarter = t.clone() / four.clone();
    let b = shift(&a, &-quarter.clone());
    let three_quarters = quarter.clone() * R::from_i64(3);
    let shifted = matmul(&shift(&b, &quarter), &shift(&b, &-three_quarters.clone()));
    let displayed = matmul(&b, &shift(&b, &quarter));
    MatrixOracleReport {
        rank_a: rank4(&a),
        trace_b: trace(&b).to_f64(),
        shifted_identity_residual: max_abs(&shifted).to_f64(),
        displayed_identity_residual: max_abs(&displayed).to_f64(),
        displayed_identity_prediction: (three_quarters * max_abs(&a)).to_f64(),
        exact: R::EXACT,
    }
}

/// Residual `max |(B + t/4)(B - 3t/4)|` in the backend.
pub fn shifted_identity_residual<R: Real>(b: &Mat4<R>, t: &R) -> R {
    let quarter = t.clone() / R::from_i64(4);
    let three_quarters = quarter.clone() * R::from_i64(3);
    max_abs(&matmul(&shift(b, &quarter), &shift(b, &-three_quarters)))
}

/// `B + (t/4)·Id`.
pub fn shifted<R: Real>(b: &Mat4<R>, t: &R) -> Mat4<R> {
    shift(b, &(t.clone() / R::from_i64(4)))
}
