use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::p1alg::{Chart, P1Point, RealParamBasis};
use crate::scalar::C64;
use crate::twistor_model::{
    ensure_valid, real_section_system, ChartEquation, RealEquationSystem, TwistorModel,
};

use super::fiber::augmented;
use super::newton::{complex_newton, gauss_newton, min_norm_solve, null_space, point_null_space};
use super::{
    branch_test, dedup_points, incidence_rows, sample_sections, singular_scan, AnalysisConfig,
    BranchVerdict,
};

/// A point of `Z` where the fiber is singular.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SingularFiberPoint {
    pub zeta: P1Point,
    pub values: Vec<C64>,
    /// The total space is singular there as well.
    pub total_space_singular: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Hypercomplex,
    WeaklyHypercomplex,
    Undetermined,
}

/// A solution of the double incidence problem with its local certificate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FamilyReport {
    pub through: [SingularFiberPoint; 2],
    pub base: Vec<f64>,
    pub corank: usize,
    /// Null directions along which continuation reached a distinct solution.
    pub certified_dimension: usize,
    /// The base point followed by the continued points.
    pub samples: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HCClassification {
    pub verdict: Verdict,
    pub singular_fiber_points: Vec<SingularFiberPoint>,
    pub families: Vec<FamilyReport>,
    pub sampled_sections: usize,
    pub singular_sections: usize,
    pub singular_sections_isolated: bool,
    pub branch_checks: usize,
    pub branched_regular: usize,
    pub notes: Vec<String>,
}

const MAX_PAIRS: usize = 6;
const SCAN_ZETAS: usize = 3;

struct ChartSystem {
    eqs: Vec<ChartEquation>,
    /// `partials[e][i]`, absent when identically zero.
    partials: Vec<Vec<Option<ChartEquation>>>,
}

impl ChartSystem {
    fn new(model: &TwistorModel, chart: Chart) -> Self {
        let eqs = model
            .equations
            .iter()
            .map(|e| e.chart_form(chart))
            .collect();
        let partials = model
            .equations
            .iter()
            .map(|e| {
                (0..model.degrees.len())
                    .map(|i| e.partial(i, &model.degrees).map(|d| d.chart_form(chart)))
                    .collect()
            })
            .collect();
        Self { eqs, partials }
    }

    /// Lagrange system in `(ζ, u, v)`: `F = 0`, `Σ vₑ ∂Fₑ/∂u = 0`,
    /// `w·v = 1`, optionally with `Σ vₑ ∂Fₑ/∂ζ = 0` appended.
    fn lagrange(&self, w: &[C64], with_zeta: bool, x: &[C64]) -> (DVector<C64>, DMatrix<C64>) {
        let ne = self.eqs.len();
        let m = self.partials.first().map_or(0, Vec::len);
        let z = x[0];
        let u = &x[1..1 + m];
        let v = &x[1 + m..];
        let rows = ne + m + 1 + usize::from(with_zeta);
        let zero = C64::new(0.0, 0.0);
        let mut r = DVector::from_element(rows, zero);
        let mut j = DMatrix::from_element(rows, 1 + m + ne, zero);
        for (e, eq) in self.eqs.iter().enumerate() {
            r[e] = eq.eval(z, u);
            j[(e, 0)] = eq.d_zeta(z, u);
            for (i, g) in eq.grad_u(z, u).into_iter().enumerate() {
                j[(e, 1 + i)] = g;
            }
        }
        for i in 0..m {
            let row = ne + i;
            for (e, pe) in self.partials.iter().enumerate() {
                let Some(d) = &pe[i] else { continue };
                r[row] += v[e] * d.eval(z, u);
                j[(row, 0)] += v[e] * d.d_zeta(z, u);
                for (k, g) in d.grad_u(z, u).into_iter().enumerate() {
                    j[(row, 1 + k)] += v[e] * g;
                }
                j[(row, 1 + m + e)] = d.eval(z, u);
            }
        }
        let row = ne + m;
        r[row] = w.iter().zip(v).map(|(a, b)| a * b).sum::<C64>() - C64::new(1.0, 0.0);
        for e in 0..ne {
            j[(row, 1 + m + e)] = w[e];
        }
        if with_zeta {
            let row = rows - 1;
            for (e, eq) in self.eqs.iter().enumerate() {
                r[row] += v[e] * eq.d_zeta(z, u);
                j[(row, 1 + m + e)] = eq.d_zeta(z, u);
            }
            // second derivatives in ζ by central differences of the analytic first derivative
            let h = 1e-6 * (1.0 + z.norm());
            let dz = |zz: C64, uu: &[C64]| {
                self.eqs
                    .iter()
                    .zip(v)
                    .map(|(eq, ve)| ve * eq.d_zeta(zz, uu))
                    .sum::<C64>()
            };
            j[(row, 0)] = (dz(z + h, u) - dz(z - h, u)) / (2.0 * h);
            for k in 0..m {
                let mut up = u.to_vec();
                let mut dn = u.to_vec();
                up[k] += h;
                dn[k] -= h;
                j[(row, 1 + k)] = (dz(z, &up) - dz(z, &dn)) / (2.0 * h);
            }
        }
        (r, j)
    }
}

const UNIT_CIRCLE_SLACK: f64 = 1e-9;

/// Moves a point into the standard chart when `|ζ| ≤ 1` and into the chart
/// at infinity otherwise.
fn preferred_chart(zeta: P1Point, values: &[C64], degrees: &[usize]) -> (P1Point, Vec<C64>) {
    let v = zeta.value;
    match zeta.chart {
        Chart::Standard if v.norm() > 1.0 + UNIT_CIRCLE_SLACK => {
            let w = v.inv();
            (
                P1Point::at_infinity(w),
                values
                    .iter()
                    .zip(degrees)
                    .map(|(u, &k)| u * w.powu(k as u32))
                    .collect(),
            )
        }
        Chart::Infinity if v.norm() >= 1.0 - UNIT_CIRCLE_SLACK => {
            let z = v.inv();
            (
                P1Point::standard(z),
                values
                    .iter()
                    .zip(degrees)
                    .map(|(u, &k)| u * z.powu(k as u32))
                    .collect(),
            )
        }
        _ => (zeta, values.to_vec()),
    }
}

/// The image of a fiber point under the real structure, over the antipode.
pub fn sigma_image(model: &TwistorModel, p: &SingularFiberPoint) -> SingularFiberPoint {
    let values: Vec<C64> = model
        .sigma_rules
        .iter()
        .enumerate()
        .map(|(i, rule)| {
            let v = p.values[rule.target].conj() * f64::from(rule.sign);
            match p.zeta.chart {
                Chart::Standard => v,
                Chart::Infinity if model.degrees[i] % 2 == 1 => -v,
                Chart::Infinity => v,
            }
        })
        .collect();
    let (zeta, values) = preferred_chart(p.zeta.antipodal(), &values, &model.degrees);
    SingularFiberPoint {
        zeta,
        values,
        total_space_singular: p.total_space_singular,
    }
}

fn fiber_distance(a: &SingularFiberPoint, b: &SingularFiberPoint) -> f64 {
    if a.zeta.chart != b.zeta.chart {
        return f64::INFINITY;
    }
    let dv: f64 = a
        .values
        .iter()
        .zip(&b.values)
        .map(|(x, y)| (x - y).norm_sqr())
        .sum();
    ((a.zeta.value - b.zeta.value).norm_sqr() + dv).sqrt()
}

/// Points `(ζ, u)` where `∂F/∂u` drops rank, found by complex Newton on the
/// Lagrange system in both charts.
pub fn singular_fiber_points(
    model: &TwistorModel,
    cfg: &AnalysisConfig,
) -> Vec<SingularFiberPoint> {
    let ne = model.equations.len();
    let m = model.degrees.len();
    if ne == 0 {
        return Vec::new();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x51a9);
    let mut rand_c = |r: f64| C64::new(rng.gen_range(-r..r), rng.gen_range(-r..r));
    let w: Vec<C64> = (0..ne).map(|_| rand_c(1.0)).collect();
    let mut found: Vec<SingularFiberPoint> = Vec::new();
    for chart in [Chart::Standard, Chart::Infinity] {
        let cs = ChartSystem::new(model, chart);
        for _ in 0..cfg.multistart {
            let x0: Vec<C64> = std::iter::once(rand_c(1.2))
                .chain((0..m + ne).map(|_| rand_c(1.0)))
                .collect();
            let out = complex_newton(
                |x: &[C64]| cs.lagrange(&w, false, x),
                x0,
                cfg.newton_tol,
                cfg.newton_max_iters,
            );
            if !out.converged {
                continue;
            }
            let mut x = out.point;
            let (rz, _) = cs.lagrange(&w, true, &x);
            let scale = 1.0 + x.iter().map(|c| c.norm_sqr()).sum::<f64>();
            let mut total = rz[rz.len() - 1].norm() <= 1e-5 * scale;
            if total {
                // polish on the overdetermined system, which is regular at
                // isolated total-space singularities
                let polished = complex_newton(
                    |y: &[C64]| cs.lagrange(&w, true, y),
                    x.clone(),
                    cfg.newton_tol,
                    cfg.newton_max_iters,
                );
                if polished.converged {
                    x = polished.point;
                } else {
                    total = false;
                }
            }
            let zeta = match chart {
                Chart::Standard => P1Point::standard(x[0]),
                Chart::Infinity => P1Point::at_infinity(x[0]),
            };
            let (zeta, values) = preferred_chart(zeta, &x[1..1 + m], &model.degrees);
            let point = SingularFiberPoint {
                zeta,
                values,
                total_space_singular: total,
            };
            if !found
                .iter()
                .any(|q| fiber_distance(q, &point) <= cfg.dedup_radius * 10.0)
            {
                found.push(point);
            }
        }
    }
    found
}

/// Corank of `[system; incidence]` at `p` and continuation along each null
/// direction. A direction is certified when the corrected point is a
/// solution at distance at least half the step.
pub fn certify_family(
    sys: &RealEquationSystem,
    l: &DMatrix<f64>,
    b: &DVector<f64>,
    p: &[f64],
    cfg: &AnalysisConfig,
) -> (usize, usize, Vec<Vec<f64>>) {
    let system = |x: &[f64]| augmented(sys, l, b, x);
    let (_, j) = system(p);
    let null = point_null_space(&j, p, cfg.rank_rel_tol);
    let corank = null.len();
    let norm = p.iter().map(|v| v * v).sum::<f64>().sqrt();
    let h = 1e-2 * (1.0 + norm);
    let mut samples = vec![p.to_vec()];
    let mut certified = 0;
    for v in &null {
        let start: Vec<f64> = p.iter().zip(v.iter()).map(|(a, d)| a + h * d).collect();
        let out = gauss_newton(system, start, cfg.newton_tol, cfg.newton_max_iters);
        let moved: f64 = out
            .point
            .iter()
            .zip(p)
            .map(|(a, c)| (a - c).powi(2))
            .sum::<f64>()
            .sqrt();
        if out.converged && moved >= h / 2.0 {
            certified += 1;
            samples.push(out.point);
        }
    }
    (corank, certified, samples)
}

fn sections_through(
    basis: &RealParamBasis,
    sys: &RealEquationSystem,
    pair: &[SingularFiberPoint; 2],
    rng: &mut ChaCha8Rng,
    cfg: &AnalysisConfig,
) -> Result<(DMatrix<f64>, DVector<f64>, Vec<Vec<f64>>)> {
    let (l1, b1) = incidence_rows(basis, &pair[0].zeta, &pair[0].values)?;
    let (l2, b2) = incidence_rows(basis, &pair[1].zeta, &pair[1].values)?;
    let n = basis.real_dim();
    let mut l = DMatrix::zeros(l1.nrows() + l2.nrows(), n);
    l.view_mut((0, 0), (l1.nrows(), n)).copy_from(&l1);
    l.view_mut((l1.nrows(), 0), (l2.nrows(), n)).copy_from(&l2);
    let b = DVector::from_iterator(b1.len() + b2.len(), b1.iter().chain(b2.iter()).copied());
    let base = min_norm_solve(&l, &b);
    let null = null_space(&l, cfg.rank_rel_tol);
    let mut found = Vec::new();
    for _ in 0..cfg.multistart {
        let mut x0 = base.clone();
        for v in &null {
            x0 += v * rng.gen_range(-1.5..1.5);
        }
        let out = gauss_newton(
            |x: &[f64]| augmented(sys, &l, &b, x),
            x0.as_slice().to_vec(),
            cfg.newton_tol,
            cfg.newton_max_iters,
        );
        if out.converged {
            found.push(out.point);
        }
    }
    Ok((l, b, dedup_points(found, cfg.dedup_radius)))
}

/// Hypercomplex / weakly hypercomplex dichotomy for the real sections.
pub fn classify_hc(model: &TwistorModel, cfg: &AnalysisConfig) -> Result<HCClassification> {
    ensure_valid(model)?;
    let sys = real_section_system(model)?;
    let basis = model.real_basis()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut notes = Vec::new();

    // (a) singular fiber points, (b) sections through σ-pairs of them
    let singular_points = singular_fiber_points(model, cfg);
    if singular_points.len() > 2 * MAX_PAIRS {
        notes.push(format!(
            "{} distinct singular fiber points from {} starts; the singular points of the fibers are not isolated",
            singular_points.len(),
            2 * cfg.multistart
        ));
    }
    let mut pairs: Vec<[SingularFiberPoint; 2]> = Vec::new();
    for p in &singular_points {
        if pairs.len() >= MAX_PAIRS {
            notes.push(format!(
                "examined the first {MAX_PAIRS} pairs of singular fiber points"
            ));
            break;
        }
        let q = sigma_image(model, p);
        let covered = pairs
            .iter()
            .any(|[a, b]| fiber_distance(a, &q) <= 1e-6 || fiber_distance(b, &q) <= 1e-6);
        if !covered {
            pairs.push([p.clone(), q]);
        }
    }
    let mut families = Vec::new();
    let mut through_sections = Vec::new();
    for pair in &pairs {
        let (l, b, sols) = sections_through(&basis, &sys, pair, &mut rng, cfg)?;
        for s in sols {
            // (c) local certificate
            let (corank, certified, samples) = certify_family(&sys, &l, &b, &s, cfg);
            through_sections.push(s.clone());
            families.push(FamilyReport {
                through: pair.clone(),
                base: s,
                corank,
                certified_dimension: certified,
                samples,
            });
        }
    }
    let weakly = families.iter().any(|f| f.certified_dimension > 0);

    let mut report = HCClassification {
        verdict: Verdict::Undetermined,
        singular_fiber_points: singular_points,
        families,
        sampled_sections: 0,
        singular_sections: 0,
        singular_sections_isolated: true,
        branch_checks: 0,
        branched_regular: 0,
        notes,
    };
    if weakly {
        report.verdict = Verdict::WeaklyHypercomplex;
        return Ok(report);
    }

    // (d) singular sections and branching on the regular locus
    let mut candidates = sample_sections(&sys, cfg.scan_samples, &mut rng, cfg);
    report.sampled_sections = candidates.len();
    candidates.extend(through_sections);
    let scan = singular_scan(&sys, &candidates, cfg)?;
    report.singular_sections = scan.singular.len();
    report.singular_sections_isolated = scan.singular_points_isolated(1e-4);
    let zetas: Vec<P1Point> = (0..SCAN_ZETAS)
        .map(|_| P1Point::standard(C64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0))))
        .collect();
    for pt in scan
        .points
        .iter()
        .filter(|p| p.member && p.rank >= scan.regular_rank)
    {
        for z in &zetas {
            report.branch_checks += 1;
            if branch_test(&basis, &sys, &pt.params, z, cfg)?.verdict == BranchVerdict::Branched {
                report.branched_regular += 1;
            }
        }
    }
    if report.sampled_sections == 0 {
        report.notes.push("no sections could be sampled".into());
    } else if report.singular_sections_isolated
        && report.branched_regular == 0
        && report.branch_checks > 0
    {
        report.verdict = Verdict::Hypercomplex;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::p1alg::CoeffPoly;
    use crate::scalar::gauss;
    use crate::twistor_model::{build_deformed, build_quadric, build_smooth_o11, LambdaReality};

    fn deformed() -> TwistorModel {
        let lambda =
            CoeffPoly::from_gauss(2, vec![gauss(0, 1), gauss(0, 0), gauss(0, -1)]).unwrap();
        build_deformed(&lambda, LambdaReality::TauAntireal).unwrap()
    }

    #[test]
    fn charts_follow_the_unit_circle() {
        let degrees = [2];
        let u = [C64::new(1.0, 0.0)];
        let (z, _) = preferred_chart(P1Point::standard(C64::new(1.0, 0.0)), &u, &degrees);
        assert_eq!(z.chart, Chart::Standard);
        let (z, _) = preferred_chart(P1Point::at_infinity(C64::new(0.0, 1.0)), &u, &degrees);
        assert_eq!(z.chart, Chart::Standard);
        assert!((z.value - C64::new(0.0, -1.0)).norm() < 1e-15);
        let (z, v) = preferred_chart(P1Point::standard(C64::new(2.0, 0.0)), &u, &degrees);
        assert_eq!(z.chart, Chart::Infinity);
        assert!((v[0] - C64::new(0.25, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn sigma_image_is_an_involution() {
        let model = build_quadric();
        for (z, chart) in [
            (C64::new(0.3, 0.2), Chart::Standard),
            (C64::new(-0.1, 0.5), Chart::Infinity),
        ] {
            let zeta = match chart {
                Chart::Standard => P1Point::standard(z),
                Chart::Infinity => P1Point::at_infinity(z),
            };
            let p = SingularFiberPoint {
                zeta,
                values: vec![C64::new(1.0, 2.0), C64::new(-0.5, 0.1), C64::new(0.0, 3.0)],
                total_space_singular: false,
            };
            let q = sigma_image(&model, &p);
            assert!(q.zeta.approx_eq(&zeta.antipodal(), 1e-12));
            assert!(fiber_distance(&sigma_image(&model, &q), &p) < 1e-12);
        }
    }

    #[test]
    fn deformed_fibers_are_singular_over_plus_minus_one() {
        let model = deformed();
        let pts = singular_fiber_points(&model, &AnalysisConfig::default());
        assert_eq!(pts.len(), 2);
        let mut zs: Vec<f64> = pts.iter().map(|p| p.zeta.value.re).collect();
        zs.sort_by(f64::total_cmp);
        assert!((zs[0] + 1.0).abs() < 1e-8 && (zs[1] - 1.0).abs() < 1e-8);
        assert!(pts
            .iter()
            .all(|p| p.zeta.value.im.abs() < 1e-8 && p.zeta.chart == Chart::Standard));
        assert!(fiber_distance(&sigma_image(&model, &pts[0]), &pts[1]) < 1e-6);
    }

    #[test]
    fn smooth_fibers_have_no_singular_points() {
        assert!(singular_fiber_points(&build_smooth_o11(), &AnalysisConfig::default()).is_empty());
    }

    #[test]
    fn certified_family_through_the_singular_pair() {
        let model = deformed();
        let cfg = AnalysisConfig::default();
        let sys = real_section_system(&model).unwrap();
        let basis = model.real_basis().unwrap();
        // x0 = 1, x2 = -1, x1 = z0 = r = 0 passes through both singular points
        let mut p = vec![0.0; sys.nvars()];
        p[0] = 1.0;
        p[4] = -1.0;
        assert!(sys.residuals_f64(&p).iter().all(|r| r.abs() < 1e-12));
        // the section meets the singular fiber points over ζ = ±1
        let singular = singular_fiber_points(&model, &cfg);
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for z in [1.0, -1.0] {
            let zeta = P1Point::real(z);
            let u = super::super::phi_eval(&basis, &p, &zeta).unwrap().values;
            assert!(singular.iter().any(|q| q.zeta.approx_eq(&zeta, 1e-8)
                && q.values.iter().zip(&u).all(|(a, b)| (a - b).norm() < 1e-6)));
            let (l, b) = incidence_rows(&basis, &zeta, &u).unwrap();
            rows.extend(l.row_iter().map(|r| r.into_owned()));
            rhs.extend(b.iter().copied());
        }
        let l = DMatrix::from_rows(&rows);
        let b = DVector::from_vec(rhs);
        let (corank, certified, samples) = certify_family(&sys, &l, &b, &p, &cfg);
        assert_eq!(corank, 2);
        assert_eq!(certified, 2);
        for s in &samples[1..] {
            let n = s[0] * s[0] + s[1] * s[1] + s[6] * s[6];
            assert!((n - 1.0).abs() < 1e-8, "|x0|² + z0² = {n}");
        }
    }
}
