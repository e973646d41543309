//! Task execution. Each task yields a record with a status, a flat map of
//! headline numbers and free-form evidence.

use std::collections::BTreeMap;
use std::io::Write;

use anyhow::{anyhow, Result};
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use twistor_core::analyzer::{
    branch_test, classify_hc, fiber_solve, jacobian_rank, matrix_model_oracle, membership,
    normal_splitting, rank4, sample_sections, section_matrix_model, shifted,
    shifted_identity_residual, singular_scan, trace, AnalysisConfig, BranchVerdict, ComponentLabel,
    NormalBundleReport, Verdict,
};
use twistor_core::p1alg::{P1Point, RealParamBasis};
use twistor_core::quotient::{census_involutions, component_count, proper_quotient_predicate};
use twistor_core::scalar::{format_rational, rational_to_f64, Rational, Real, C64};
use twistor_core::twistor_model::{
    glue_cone_twistor, model_to_json, real_section_system, squaring_section, validate_model,
    RealEquationSystem, SquaringVariant, TwistorModel,
};

use crate::scenario::{SectionInput, Task, TaskKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Info,
}

#[derive(Debug, Clone, Serialize)]
pub struct TaskRecord {
    pub op: &'static str,
    pub inputs: Value,
    pub status: Status,
    pub numbers: BTreeMap<String, Value>,
    pub evidence: Value,
    #[serde(skip)]
    pub headline: String,
}

/// Shared state for the tasks of one scenario.
pub struct Context {
    pub model: Option<TwistorModel>,
    system: Option<(RealEquationSystem, RealParamBasis)>,
    pub config: AnalysisConfig,
    pub exact: bool,
}

impl Context {
    pub fn new(model: Option<TwistorModel>, config: AnalysisConfig, exact: bool) -> Self {
        Self {
            model,
            system: None,
            config,
            exact,
        }
    }

    fn model(&self) -> Result<&TwistorModel> {
        self.model.as_ref().ok_or_else(|| anyhow!("no model"))
    }

    fn system(&mut self) -> Result<(&TwistorModel, &RealEquationSystem, &RealParamBasis)> {
        if self.system.is_none() {
            let model = self.model()?;
            self.system = Some((real_section_system(model)?, model.real_basis()?));
        }
        let (sys, basis) = self.system.as_ref().expect("set above");
        Ok((self.model.as_ref().expect("checked"), sys, basis))
    }
}

struct Outcome {
    status: Status,
    headline: String,
    numbers: BTreeMap<String, Value>,
    evidence: Value,
}

impl Outcome {
    fn new(status: Status, headline: impl Into<String>) -> Self {
        Self {
            status,
            headline: headline.into(),
            numbers: BTreeMap::new(),
            evidence: Value::Null,
        }
    }

    fn num(mut self, key: &str, v: impl Serialize) -> Self {
        self.numbers.insert(
            key.to_string(),
            serde_json::to_value(v).unwrap_or(Value::Null),
        );
        self
    }

    fn evidence(mut self, v: Value) -> Self {
        self.evidence = v;
        self
    }
}

fn pass_if(ok: bool) -> Status {
    if ok {
        Status::Pass
    } else {
        Status::Fail
    }
}

pub fn run_task(ctx: &mut Context, task: &Task, index: usize) -> TaskRecord {
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.config.seed.wrapping_add(index as u64));
    let outcome = match execute(ctx, &task.kind, &mut rng) {
        Ok(o) => o,
        Err(e) => Outcome::new(Status::Fail, format!("error: {e}"))
            .evidence(json!({ "error": e.to_string() })),
    };
    TaskRecord {
        op: task.op.name(),
        inputs: task.inputs.clone(),
        status: outcome.status,
        numbers: outcome.numbers,
        evidence: outcome.evidence,
        headline: outcome.headline,
    }
}

fn execute(ctx: &mut Context, kind: &TaskKind, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    match kind {
        TaskKind::Validate => validate(ctx),
        TaskKind::Sections { count, csv } => sections(ctx, *count, csv.as_deref(), rng),
        TaskKind::SolveFiber {
            zeta,
            point,
            expect,
        } => solve_fiber(ctx, zeta, point, *expect),
        TaskKind::SingularScan {
            samples,
            include_origin,
            expect_singular,
        } => singular(ctx, *samples, *include_origin, *expect_singular, rng),
        TaskKind::Branch {
            section,
            samples,
            zetas,
            include_origin,
        } => branch(
            ctx,
            section.as_ref(),
            *samples,
            *zetas,
            *include_origin,
            rng,
        ),
        TaskKind::NormalBundle { section, samples } => normal(ctx, section.as_ref(), *samples, rng),
        TaskKind::Classify { expect } => classify(ctx, *expect),
        TaskKind::MatrixModel { q, samples } => matrix(ctx, q.as_ref(), *samples, rng),
        TaskKind::QuotientCensus {
            group,
            action,
            expect_count,
        } => {
            let census = census_involutions(group);
            let count = component_count(group, *action);
            let proper = proper_quotient_predicate(group);
            let status = match expect_count {
                Some(n) => pass_if(*n == count.count),
                None => Status::Info,
            };
            let bound = if count.lower_bound {
                " (lower bound)"
            } else {
                ""
            };
            Ok(Outcome::new(
                status,
                format!(
                    "{}: {} involution class{}, {} component{}{bound}, proper quotient {}",
                    group.name,
                    census.classes.len(),
                    if census.classes.len() == 1 { "" } else { "es" },
                    count.count,
                    if count.count == 1 { "" } else { "s" },
                    proper
                ),
            )
            .num("order", group.order())
            .num("involutions", census.involutions.len())
            .num("classes", census.classes.len())
            .num("class_sizes", census.class_sizes())
            .num("component_count", count.count)
            .num("lower_bound", count.lower_bound)
            .num("proper_quotient", proper)
            .evidence(json!({ "census": census, "assumptions": count.assumptions })))
        }
        TaskKind::ConeGlue {
            equations,
            coordinates,
            weights,
            l,
            rules,
            compare,
        } => {
            let model = glue_cone_twistor(equations, weights, *l, rules, coordinates)?;
            let report = validate_model(&model);
            let matches = compare.as_ref().map(|c| model.same_structure(c));
            let ok = report.passed() && matches != Some(false);
            let headline = match matches {
                Some(true) => format!(
                    "{} glued, valid, equal to {}",
                    model.name,
                    compare.as_ref().map_or("", |c| c.name.as_str())
                ),
                Some(false) => format!(
                    "{} differs from {}",
                    model.name,
                    compare.as_ref().map_or("", |c| c.name.as_str())
                ),
                None => format!(
                    "{} glued, validation {}",
                    model.name,
                    if report.passed() { "passed" } else { "failed" }
                ),
            };
            Ok(Outcome::new(pass_if(ok), headline)
                .num("degrees", &model.degrees)
                .num("valid", report.passed())
                .num("matches", matches)
                .evidence(json!({ "model": model_to_json(&model), "validation": report })))
        }
    }
}

fn validate(ctx: &mut Context) -> Result<Outcome> {
    let report = validate_model(ctx.model()?);
    let headline = match report.failures.first() {
        None => format!("{} is a valid twistor model", report.model),
        Some(f) => format!("{}: {}", report.model, f.detail),
    };
    Ok(Outcome::new(pass_if(report.passed()), headline)
        .num("failures", report.failures.len())
        .num("equation_signs", &report.equation_signs)
        .num("generic_fiber_corank", report.generic_fiber_corank)
        .evidence(serde_json::to_value(&report)?))
}

fn sections(
    ctx: &mut Context,
    count: usize,
    csv: Option<&std::path::Path>,
    rng: &mut ChaCha8Rng,
) -> Result<Outcome> {
    let cfg = ctx.config.clone();
    let (_, sys, _) = ctx.system()?;
    let pts = sample_sections(sys, count, rng, &cfg);
    let expected = sys.expected_regular_rank;
    let mut members = 0;
    let mut regular = 0;
    for p in &pts {
        if membership(sys, p, cfg.membership_tol)?.passed {
            members += 1;
        }
        if Some(jacobian_rank(sys, p)?) == expected {
            regular += 1;
        }
    }
    let names = sys.layout.real_names();
    if let Some(path) = csv {
        let mut f =
            std::fs::File::create(path).map_err(|e| anyhow!("writing {}: {e}", path.display()))?;
        writeln!(f, "{}", names.join(","))?;
        for p in &pts {
            let row: Vec<String> = p.iter().map(|v| format!("{v:e}")).collect();
            writeln!(f, "{}", row.join(","))?;
        }
    }
    let ok = pts.len() == count && members == pts.len();
    Ok(Outcome::new(
        pass_if(ok),
        format!("{} of {count} samples on X, {regular} regular", pts.len()),
    )
    .num("requested", count)
    .num("sampled", pts.len())
    .num("members", members)
    .num("regular", regular)
    .evidence(json!({ "parameters": names, "sections": pts })))
}

fn solve_fiber(
    ctx: &mut Context,
    zeta: &P1Point,
    point: &[C64],
    expect: Option<usize>,
) -> Result<Outcome> {
    let cfg = ctx.config.clone();
    let (model, sys, _) = ctx.system()?;
    let sol = fiber_solve(model, sys, zeta, point, &cfg)?;
    let n = sol.sections.len();
    let status = match expect {
        Some(e) => pass_if(e == n && !sol.positive_dimensional),
        None => Status::Info,
    };
    let mut headline = format!(
        "{n} section{} through the point",
        if n == 1 { "" } else { "s" }
    );
    if sol.positive_dimensional {
        headline.push_str(", positive-dimensional family");
    }
    Ok(Outcome::new(status, headline)
        .num("sections", n)
        .num("complete", sol.complete)
        .num("positive_dimensional", sol.positive_dimensional)
        .num("method", sol.method)
        .evidence(json!({ "parameters": sys.layout.real_names(), "sections": sol.sections })))
}

fn singular(
    ctx: &mut Context,
    samples: usize,
    origin: bool,
    expect: Option<usize>,
    rng: &mut ChaCha8Rng,
) -> Result<Outcome> {
    let cfg = ctx.config.clone();
    let (_, sys, _) = ctx.system()?;
    let mut candidates = sample_sections(sys, samples, rng, &cfg);
    if origin {
        candidates.push(vec![0.0; sys.nvars()]);
    }
    let report = singular_scan(sys, &candidates, &cfg)?;
    let isolated = report.singular_points_isolated(1e-4);
    let points: Vec<Value> = report
        .singular
        .iter()
        .map(|&i| json!({ "params": report.points[i].params, "rank": report.points[i].rank }))
        .collect();
    let singular_count = report.clusters.len();
    let ok = isolated && expect.is_none_or(|e| e == singular_count);
    let min_rank = report.singular.iter().map(|&i| report.points[i].rank).min();
    let headline = format!(
        "{} candidates, {} singular point{} (regular rank {}){}",
        candidates.len(),
        singular_count,
        if singular_count == 1 { "" } else { "s" },
        report.regular_rank,
        if isolated { "" } else { ", not isolated" }
    );
    Ok(Outcome::new(pass_if(ok), headline)
        .num("candidates", candidates.len())
        .num("members", report.points.iter().filter(|p| p.member).count())
        .num("regular_rank", report.regular_rank)
        .num("singular_points", singular_count)
        .num("singular_samples", report.singular.len())
        .num("min_singular_rank", min_rank)
        .num("isolated", isolated)
        .evidence(json!({ "singular": points, "clusters": report.clusters })))
}

fn random_zetas(n: usize, rng: &mut ChaCha8Rng) -> Vec<P1Point> {
    (0..n)
        .map(|_| P1Point::standard(C64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0))))
        .collect()
}

fn branch(
    ctx: &mut Context,
    section: Option<&SectionInput>,
    samples: usize,
    zetas: usize,
    origin: bool,
    rng: &mut ChaCha8Rng,
) -> Result<Outcome> {
    let cfg = ctx.config.clone();
    let (_, sys, basis) = ctx.system()?;
    let mut points = match section {
        Some(s) => vec![s.to_f64()],
        None => sample_sections(sys, samples, rng, &cfg),
    };
    if origin && section.is_none() {
        let zero = vec![0.0; sys.nvars()];
        if membership(sys, &zero, cfg.membership_tol)?.passed {
            points.push(zero);
        }
    }
    let zs = random_zetas(zetas, rng);
    let regular_rank = sys.expected_regular_rank.unwrap_or(0);
    let (mut reg_checks, mut reg_branched, mut sing_checks, mut sing_branched) = (0, 0, 0, 0);
    let mut evidence = Vec::new();
    for p in &points {
        let rank = jacobian_rank(sys, p)?;
        let singular = rank < regular_rank;
        let mut branched_at = Vec::new();
        for z in &zs {
            let r = branch_test(basis, sys, p, z, &cfg)?;
            let b = r.verdict == BranchVerdict::Branched;
            if b {
                branched_at.push(r.zeta);
            }
            if singular {
                sing_checks += 1;
                sing_branched += usize::from(b);
            } else {
                reg_checks += 1;
                reg_branched += usize::from(b);
            }
        }
        evidence.push(json!({ "params": p, "rank": rank, "branched_at": branched_at }));
    }
    let headline = format!(
        "regular: {reg_branched} of {reg_checks} checks branched; singular: {sing_branched} of {sing_checks} branched"
    );
    Ok(Outcome::new(pass_if(reg_branched == 0), headline)
        .num("zetas", zs.len())
        .num("regular_checks", reg_checks)
        .num("regular_branched", reg_branched)
        .num("singular_checks", sing_checks)
        .num("singular_branched", sing_branched)
        .evidence(json!({ "zetas": zs, "sections": evidence })))
}

fn normal_ok(report: &NormalBundleReport, rank: usize) -> bool {
    match &report.splitting {
        Some(s) => {
            s.rank() == rank && s.degrees().iter().all(|&d| d == 1) && report.h0_minus_2 == Some(0)
        }
        None => false,
    }
}

fn normal_record(p: Value, report: &NormalBundleReport) -> Value {
    json!({
        "section": p,
        "splitting": report.splitting.as_ref().map(|s| s.degrees().to_vec()),
        "h0": report.h0,
        "h0_minus_2": report.h0_minus_2,
        "degenerate": report.degenerate,
    })
}

fn normal(
    ctx: &mut Context,
    section: Option<&SectionInput>,
    samples: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Outcome> {
    let cfg = ctx.config.clone();
    let exact = ctx.exact;
    let (model, sys, basis) = ctx.system()?;
    let rank = model.fiber_dim().unwrap_or(0);
    let mut records = Vec::new();
    let mut satisfied = 0;
    let mut last: Option<NormalBundleReport> = None;
    let mut check = |p: Value, report: NormalBundleReport| {
        if normal_ok(&report, rank) {
            satisfied += 1;
        }
        records.push(normal_record(p, &report));
        last = Some(report);
    };
    match section {
        Some(s) if exact => {
            let report = normal_splitting::<Rational>(model, basis, &s.params)?;
            check(
                json!(s.params.iter().map(format_rational).collect::<Vec<_>>()),
                report,
            );
        }
        Some(s) => {
            let p = s.to_f64();
            check(json!(p), normal_splitting::<f64>(model, basis, &p)?);
        }
        None => {
            for p in sample_sections(sys, samples, rng, &cfg) {
                let report = normal_splitting::<f64>(model, basis, &p)?;
                check(json!(p), report);
            }
        }
    }
    let total = records.len();
    let headline = match (&last, total) {
        (Some(r), 1) => match &r.splitting {
            Some(s) => format!(
                "splitting {s}, h0 = {}, h0(-2) = {}",
                r.h0.map_or("?".into(), |v| v.to_string()),
                r.h0_minus_2.map_or("?".into(), |v| v.to_string())
            ),
            None => "the linearization degenerates along the section".to_string(),
        },
        _ => format!("{satisfied} of {total} sections have normal bundle O(1)^{rank}"),
    };
    Ok(
        Outcome::new(pass_if(total > 0 && satisfied == total), headline)
            .num("sections", total)
            .num("satisfied", satisfied)
            .num("expected_rank", rank)
            .evidence(json!({ "sections": records })),
    )
}

fn classify(ctx: &mut Context, expect: Option<Verdict>) -> Result<Outcome> {
    let cfg = ctx.config.clone();
    let report = classify_hc(ctx.model()?, &cfg)?;
    let status = match expect {
        Some(v) => pass_if(v == report.verdict),
        None => pass_if(report.verdict != Verdict::Undetermined),
    };
    let verdict = serde_json::to_value(report.verdict)?;
    let certified = report
        .families
        .iter()
        .map(|f| f.certified_dimension)
        .max()
        .unwrap_or(0);
    let mut headline = format!("verdict {}", verdict.as_str().unwrap_or("?"));
    if certified > 0 {
        headline.push_str(&format!(
            ", certified {certified}-dimensional family through a singular pair"
        ));
    }
    Ok(Outcome::new(status, headline)
        .num("verdict", &verdict)
        .num("singular_fiber_points", report.singular_fiber_points.len())
        .num("families", report.families.len())
        .num("max_certified_dimension", certified)
        .num("sampled_sections", report.sampled_sections)
        .num("singular_sections", report.singular_sections)
        .num("branch_checks", report.branch_checks)
        .num("branched_regular", report.branched_regular)
        .evidence(serde_json::to_value(&report)?))
}

struct MatrixCheck {
    record: Value,
    ok: bool,
    ratio_error: f64,
}

fn matrix_check<R: Real>(q: &[R; 4], variant: SquaringVariant) -> Result<MatrixCheck> {
    let a = complex(&q[0], &q[1]);
    let b = complex(&q[2], &q[3]);
    let p = squaring_section::<R>(&a, &b, variant).to_params();
    let tol = if R::EXACT { 0.0 } else { 1e-9 };
    let check_tol = 1e-9;
    let (bm, t, label, sign) = section_matrix_model(&p, tol)?;
    let scale = 1.0 + t.to_f64().abs();
    let trace_b = trace(&bm);
    let rank = rank4(&shifted(&bm, &t));
    let residual = shifted_identity_residual(&bm, &t);
    let oracle = matrix_model_oracle(q);
    let ok = trace_b.is_negligible(scale, check_tol)
        && rank == 1
        && residual.is_negligible(scale * scale, check_tol);
    let ratio_error = (oracle.displayed_identity_residual - oracle.displayed_identity_prediction)
        .abs()
        / oracle.displayed_identity_prediction.max(f64::MIN_POSITIVE);
    let label_name = match label {
        ComponentLabel::Plus => "+1",
        ComponentLabel::Minus => "-1",
        ComponentLabel::Boundary => "boundary",
    };
    let record = json!({
        "variant": variant,
        "label": label_name,
        "sign": sign,
        "t": t.to_f64(),
        "trace_b": trace_b.to_f64(),
        "rank_shifted": rank,
        "identity_residual": residual.to_f64(),
        "displayed_residual": oracle.displayed_identity_residual,
        "displayed_prediction": oracle.displayed_identity_prediction,
    });
    Ok(MatrixCheck {
        record,
        ok,
        ratio_error,
    })
}

fn complex<R: Real>(re: &R, im: &R) -> Complex<R> {
    Complex::new(re.clone(), im.clone())
}

fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    Rational::new(
        rng.gen_range(-9i64..=9).into(),
        rng.gen_range(1i64..=5).into(),
    )
}

fn matrix(
    ctx: &mut Context,
    q: Option<&[Rational; 4]>,
    samples: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Outcome> {
    let qs: Vec<[Rational; 4]> = match q {
        Some(q) => vec![q.clone()],
        None => {
            let mut out = Vec::with_capacity(samples);
            while out.len() < samples {
                let q: [Rational; 4] = std::array::from_fn(|_| random_rational(rng));
                if q.iter().any(|v| *v != Rational::from_integer(0.into())) {
                    out.push(q);
                }
            }
            out
        }
    };
    let mut records = Vec::new();
    let (mut passed, mut worst): (usize, f64) = (0, 0.0);
    for (i, q) in qs.iter().enumerate() {
        let variant = if i % 2 == 0 {
            SquaringVariant::Minus
        } else {
            SquaringVariant::Plus
        };
        let check = if ctx.exact {
            matrix_check::<Rational>(q, variant)?
        } else {
            let qf: [f64; 4] = std::array::from_fn(|k| rational_to_f64(&q[k]));
            matrix_check::<f64>(&qf, variant)?
        };
        passed += usize::from(check.ok);
        worst = worst.max(check.ratio_error);
        let mut record = check.record;
        record["q"] = json!(q.iter().map(format_rational).collect::<Vec<_>>());
        records.push(record);
    }
    let headline = format!(
        "{passed} of {} samples give tr B = 0, rank(B + t/4) = 1, (B + t/4)(B - 3t/4) = 0; B(B + t/4) = (3t/4)A up to {worst:.1e}",
        qs.len()
    );
    Ok(Outcome::new(pass_if(passed == qs.len()), headline)
        .num("samples", qs.len())
        .num("passed", passed)
        .num("displayed_form_relative_error", worst)
        .evidence(json!({ "samples": records })))
}
