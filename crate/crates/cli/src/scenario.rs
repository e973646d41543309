//! Scenario files: a model, an ordered task list, tolerances and a seed.
//!
//! Everything that can be rejected is rejected here, before any task runs:
//! unknown ops, unknown argument keys, unparsable numbers, sections of the
//! wrong length, invalid groups, and sampling tasks without a seed.

use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use twistor_core::analyzer::{AnalysisConfig, Verdict};
use twistor_core::p1alg::{CoeffPoly, P1Point, SigmaCoordRule};
use twistor_core::quotient::{builtin_group, ActionKind, FiniteQuaternionGroup, Quaternion};
use twistor_core::scalar::{
    complex_to_c64, parse_rational, rational_to_f64, GaussRat, Rational, C64,
};
use twistor_core::tolerances::GROUP_MUL_TOL;
use twistor_core::twistor_model::{
    build_deformed, build_quadric, build_smooth_o11, complex_from_json, model_from_json,
    parse_polynomial, quadric_rules, quaternionic_pair_rules, ConePolynomial, LambdaReality,
    TwistorModel,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Op {
    Validate,
    Sections,
    SolveFiber,
    SingularScan,
    Branch,
    NormalBundle,
    Classify,
    MatrixModel,
    QuotientCensus,
    ConeGlue,
}

impl Op {
    pub fn name(self) -> &'static str {
        match self {
            Op::Validate => "validate",
            Op::Sections => "sections",
            Op::SolveFiber => "solve-fiber",
            Op::SingularScan => "singular-scan",
            Op::Branch => "branch",
            Op::NormalBundle => "normal-bundle",
            Op::Classify => "classify",
            Op::MatrixModel => "matrix-model",
            Op::QuotientCensus => "quotient-census",
            Op::ConeGlue => "cone-glue",
        }
    }

    fn needs_model(self) -> bool {
        !matches!(self, Op::MatrixModel | Op::QuotientCensus | Op::ConeGlue)
    }
}

/// Model descriptor: a builtin name, a path to a model file, or an object.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ModelSpec {
    Name(String),
    Spec(ModelFields),
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFields {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub builtin: Option<String>,
    /// Coefficients of `λ(ζ)` for the deformed quadric, lowest degree first.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<Vec<Value>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reality: Option<LambdaReality>,
    /// Inline model document.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub custom: Option<Value>,
    /// Model document on disk, relative to the scenario file.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub file: Option<PathBuf>,
}

/// Overrides of the analysis defaults.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub membership: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank_rel: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub newton: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub newton_max_iters: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dedup: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub multistart: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scan_samples: Option<usize>,
}

impl Tolerances {
    pub fn apply(&self, cfg: &mut AnalysisConfig) {
        let set = |dst: &mut f64, src: Option<f64>| {
            if let Some(v) = src {
                *dst = v;
            }
        };
        set(&mut cfg.membership_tol, self.membership);
        set(&mut cfg.rank_rel_tol, self.rank_rel);
        set(&mut cfg.newton_tol, self.newton);
        set(&mut cfg.dedup_radius, self.dedup);
        if let Some(v) = self.newton_max_iters {
            cfg.newton_max_iters = v;
        }
        if let Some(v) = self.multistart {
            cfg.multistart = v;
        }
        if let Some(v) = self.scan_samples {
            cfg.scan_samples = v;
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaskDoc {
    pub op: Op,
    #[serde(default = "empty_object")]
    pub args: Value,
}

fn empty_object() -> Value {
    Value::Object(Default::default())
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<ModelSpec>,
    pub tasks: Vec<TaskDoc>,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub exact: bool,
}

impl ScenarioDoc {
    pub fn load(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }
}

// argument schemas ------------------------------------------------------

fn twenty() -> usize {
    20
}

fn five() -> usize {
    5
}

fn hundred() -> usize {
    100
}

fn two_hundred() -> usize {
    200
}

fn yes() -> bool {
    true
}

fn left_multiplication() -> ActionKind {
    ActionKind::LeftMultiplication
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValidateArgs {}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SectionsArgs {
    #[serde(default = "twenty")]
    pub count: usize,
    /// Optional CSV dump of the sampled parameter vectors.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolveFiberArgs {
    pub zeta: Value,
    pub point: Vec<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect: Option<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SingularScanArgs {
    #[serde(default = "two_hundred")]
    pub samples: usize,
    #[serde(default = "yes")]
    pub include_origin: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect_singular: Option<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BranchArgs {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub section: Option<Vec<Value>>,
    #[serde(default = "twenty")]
    pub samples: usize,
    #[serde(default = "five")]
    pub zetas: usize,
    #[serde(default = "yes")]
    pub include_origin: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NormalBundleArgs {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub section: Option<Vec<Value>>,
    #[serde(default = "twenty")]
    pub samples: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassifyArgs {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect: Option<Verdict>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixModelArgs {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<Vec<Value>>,
    #[serde(default = "hundred")]
    pub samples: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuotientCensusArgs {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<String>,
    /// Unit quaternions `[w, x, y, z]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elements: Option<Vec<[Value; 4]>>,
    /// Multiplication table on element indices.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<Vec<usize>>>,
    #[serde(default = "left_multiplication")]
    pub action: ActionKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect_count: Option<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RulesArg {
    Preset(String),
    List(Vec<RuleArg>),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RuleArg {
    pub target: usize,
    pub sign: i8,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConeGlueArgs {
    #[serde(default)]
    pub equations: Vec<String>,
    pub coordinates: Vec<String>,
    pub weights: Vec<usize>,
    pub l: usize,
    pub rules: RulesArg,
    /// Builtin model the glued model must coincide with.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub compare: Option<String>,
}

// prepared tasks --------------------------------------------------------

/// A section given on the command line, exact when all entries are.
#[derive(Debug, Clone)]
pub struct SectionInput {
    pub params: Vec<Rational>,
}

impl SectionInput {
    pub fn to_f64(&self) -> Vec<f64> {
        self.params.iter().map(rational_to_f64).collect()
    }
}

#[derive(Debug, Clone)]
pub enum TaskKind {
    Validate,
    Sections {
        count: usize,
        csv: Option<PathBuf>,
    },
    SolveFiber {
        zeta: P1Point,
        point: Vec<C64>,
        expect: Option<usize>,
    },
    SingularScan {
        samples: usize,
        include_origin: bool,
        expect_singular: Option<usize>,
    },
    Branch {
        section: Option<SectionInput>,
        samples: usize,
        zetas: usize,
        include_origin: bool,
    },
    NormalBundle {
        section: Option<SectionInput>,
        samples: usize,
    },
    Classify {
        expect: Option<Verdict>,
    },
    MatrixModel {
        q: Option<[Rational; 4]>,
        samples: usize,
    },
    QuotientCensus {
        group: FiniteQuaternionGroup,
        action: ActionKind,
        expect_count: Option<usize>,
    },
    ConeGlue {
        equations: Vec<ConePolynomial>,
        coordinates: Vec<String>,
        weights: Vec<usize>,
        l: usize,
        rules: Vec<SigmaCoordRule>,
        compare: Option<TwistorModel>,
    },
}

impl TaskKind {
    pub fn samples(&self) -> bool {
        match self {
            TaskKind::Sections { .. }
            | TaskKind::SingularScan { .. }
            | TaskKind::Classify { .. } => true,
            TaskKind::Branch {
                section, samples, ..
            } => section.is_none() && *samples > 0,
            TaskKind::NormalBundle { section, .. } => section.is_none(),
            TaskKind::MatrixModel { q, .. } => q.is_none(),
            _ => false,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Task {
    pub op: Op,
    /// Arguments with defaults filled in, echoed in the report.
    pub inputs: Value,
    pub kind: TaskKind,
}

#[derive(Debug, Clone)]
pub struct Scenario {
    pub model_spec: Option<ModelSpec>,
    pub model: Option<TwistorModel>,
    pub tasks: Vec<Task>,
    pub config: AnalysisConfig,
    pub seed: Option<u64>,
    pub output: Option<PathBuf>,
    pub exact: bool,
}

impl Scenario {
    /// Validates a scenario document; `base` resolves relative model paths.
    pub fn prepare(doc: ScenarioDoc, base: &Path) -> Result<Self> {
        let model = doc
            .model
            .as_ref()
            .map(|m| build_model(m, base))
            .transpose()?;
        let mut config = AnalysisConfig::default();
        doc.tolerances.apply(&mut config);
        if let Some(seed) = doc.seed {
            config.seed = seed;
        }
        let mut tasks = Vec::with_capacity(doc.tasks.len());
        for (i, t) in doc.tasks.iter().enumerate() {
            let task = prepare_task(t, model.as_ref())
                .with_context(|| format!("task {} ({})", i + 1, t.op.name()))?;
            if task.kind.samples() && doc.seed.is_none() {
                bail!(
                    "task {} ({}) samples at random and the scenario has no seed",
                    i + 1,
                    t.op.name()
                );
            }
            tasks.push(task);
        }
        if tasks.is_empty() {
            bail!("scenario has no tasks");
        }
        Ok(Self {
            model_spec: doc.model,
            model,
            tasks,
            config,
            seed: doc.seed,
            output: doc.output,
            exact: doc.exact,
        })
    }
}

pub fn build_model(spec: &ModelSpec, base: &Path) -> Result<TwistorModel> {
    let fields = match spec {
        ModelSpec::Name(name) => {
            let path = base.join(name);
            if name.ends_with(".json") || path.is_file() {
                ModelFields {
                    file: Some(name.into()),
                    ..Default::default()
                }
            } else {
                ModelFields {
                    builtin: Some(name.clone()),
                    ..Default::default()
                }
            }
        }
        ModelSpec::Spec(f) => f.clone(),
    };
    let sources = [
        fields.builtin.is_some(),
        fields.custom.is_some(),
        fields.file.is_some(),
    ];
    if sources.iter().filter(|&&s| s).count() != 1 {
        bail!("a model needs exactly one of `builtin`, `custom`, `file`");
    }
    if let Some(doc) = &fields.custom {
        return Ok(model_from_json(doc)?);
    }
    if let Some(file) = &fields.file {
        let path = base.join(file);
        let text = std::fs::read_to_string(&path)
            .with_context(|| format!("reading model {}", path.display()))?;
        let doc: Value = serde_json::from_str(&text)
            .with_context(|| format!("parsing model {}", path.display()))?;
        return Ok(model_from_json(&doc)?);
    }
    let name = fields
        .builtin
        .as_deref()
        .unwrap_or_default()
        .to_ascii_lowercase();
    let deformation = fields.lambda.is_some() || fields.reality.is_some();
    match name.as_str() {
        "quadric" | "sl2-cone" if !deformation => Ok(build_quadric()),
        "smooth-o11" | "o11" | "o(1)+o(1)" if !deformation => Ok(build_smooth_o11()),
        "deformed" => {
            let lambda = fields
                .lambda
                .as_ref()
                .ok_or_else(|| anyhow!("the deformed model needs `lambda`"))?;
            let reality = fields.reality.ok_or_else(|| {
                anyhow!("the deformed model needs `reality` (tau-real or tau-antireal)")
            })?;
            if lambda.is_empty() {
                bail!("`lambda` has no coefficients");
            }
            let coeffs = lambda
                .iter()
                .map(complex_from_json)
                .collect::<twistor_core::Result<Vec<GaussRat>>>()?;
            let poly = CoeffPoly::from_gauss(coeffs.len() - 1, coeffs)?;
            Ok(build_deformed(&poly, reality)?)
        }
        "quadric" | "smooth-o11" | "o11" | "o(1)+o(1)" => {
            bail!("`lambda` and `reality` only apply to the deformed model")
        }
        other => bail!("unknown builtin model `{other}` (expected quadric, deformed, smooth-o11)"),
    }
}

fn args<T: serde::de::DeserializeOwned + Serialize>(v: &Value) -> Result<(T, Value)> {
    let parsed: T =
        serde_json::from_value(v.clone()).map_err(|e| anyhow!("invalid arguments: {e}"))?;
    let echo = serde_json::to_value(&parsed)?;
    Ok((parsed, echo))
}

fn parse_zeta(v: &Value) -> Result<P1Point> {
    if let Value::String(s) = v {
        if matches!(
            s.trim().to_ascii_lowercase().as_str(),
            "inf" | "infinity" | "∞"
        ) {
            return Ok(P1Point::infinity());
        }
    }
    Ok(P1Point::standard(complex_to_c64(&complex_from_json(v)?)))
}

/// Accepts one value per layout component or one real per parameter.
fn parse_section(values: &[Value], model: &TwistorModel) -> Result<SectionInput> {
    let layout = &model.real_basis()?.layout;
    if values.len() == layout.components.len() {
        let coeffs = values
            .iter()
            .map(complex_from_json)
            .collect::<twistor_core::Result<Vec<GaussRat>>>()?;
        return Ok(SectionInput {
            params: layout.pack(&coeffs)?,
        });
    }
    if values.len() == layout.dim {
        let params = values
            .iter()
            .map(|v| {
                let z = complex_from_json(v)?;
                if z.im != Rational::from_integer(0.into()) {
                    return Err(anyhow!("parameter {v} must be real"));
                }
                Ok(z.re)
            })
            .collect::<Result<Vec<Rational>>>()?;
        return Ok(SectionInput { params });
    }
    let names: Vec<&str> = layout.components.iter().map(|c| c.name.as_str()).collect();
    bail!(
        "a section has {} components ({}) or {} real parameters, got {} values",
        layout.components.len(),
        names.join(", "),
        layout.dim,
        values.len()
    )
}

fn parse_group(a: &QuotientCensusArgs) -> Result<FiniteQuaternionGroup> {
    let given = [a.group.is_some(), a.elements.is_some(), a.table.is_some()];
    if given.iter().filter(|&&g| g).count() != 1 {
        bail!("give exactly one of `group`, `elements`, `table`");
    }
    if let Some(name) = &a.group {
        return Ok(builtin_group(name)?);
    }
    if let Some(table) = &a.table {
        return Ok(FiniteQuaternionGroup::from_table("table", table.clone())?);
    }
    let elements = a.elements.as_ref().expect("checked above");
    let quats = elements
        .iter()
        .map(|e| {
            let c: Vec<f64> = e.iter().map(real_number).collect::<Result<_>>()?;
            Ok(Quaternion::new(c[0], c[1], c[2], c[3]))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FiniteQuaternionGroup::from_quaternions(
        "elements",
        quats,
        GROUP_MUL_TOL,
    )?)
}

fn real_number(v: &Value) -> Result<f64> {
    match v {
        Value::Number(n) => n.as_f64().ok_or_else(|| anyhow!("invalid number {n}")),
        Value::String(s) => Ok(rational_to_f64(&parse_rational(s)?)),
        other => bail!("expected a real number, got {other}"),
    }
}

fn parse_rules(r: &RulesArg, n: usize) -> Result<Vec<SigmaCoordRule>> {
    let rules = match r {
        RulesArg::Preset(name) => match name.as_str() {
            "quadric" => quadric_rules(),
            "quaternionic-pair" | "pair" => quaternionic_pair_rules(),
            other => bail!("unknown rule preset `{other}` (expected quadric, quaternionic-pair)"),
        },
        RulesArg::List(list) => list
            .iter()
            .map(|r| SigmaCoordRule::new(r.target, r.sign, 0))
            .collect::<twistor_core::Result<_>>()?,
    };
    if rules.len() != n {
        bail!("{} rules for {n} coordinates", rules.len());
    }
    Ok(rules)
}

fn require_model(op: Op, model: Option<&TwistorModel>) -> Result<&TwistorModel> {
    model.ok_or_else(|| anyhow!("`{}` needs a model", op.name()))
}

pub fn prepare_task(t: &TaskDoc, model: Option<&TwistorModel>) -> Result<Task> {
    if t.op.needs_model() {
        require_model(t.op, model)?;
    }
    let (kind, inputs) = match t.op {
        Op::Validate => {
            let (_, echo) = args::<ValidateArgs>(&t.args)?;
            (TaskKind::Validate, echo)
        }
        Op::Sections => {
            let (a, echo) = args::<SectionsArgs>(&t.args)?;
            (
                TaskKind::Sections {
                    count: a.count,
                    csv: a.csv,
                },
                echo,
            )
        }
        Op::SolveFiber => {
            let (a, echo) = args::<SolveFiberArgs>(&t.args)?;
            let zeta = parse_zeta(&a.zeta)?;
            let point = a
                .point
                .iter()
                .map(|v| Ok(complex_to_c64(&complex_from_json(v)?)))
                .collect::<Result<Vec<C64>>>()?;
            let m = require_model(t.op, model)?.degrees.len();
            if point.len() != m {
                bail!("the fiber has {m} coordinates, got {}", point.len());
            }
            (
                TaskKind::SolveFiber {
                    zeta,
                    point,
                    expect: a.expect,
                },
                echo,
            )
        }
        Op::SingularScan => {
            let (a, echo) = args::<SingularScanArgs>(&t.args)?;
            (
                TaskKind::SingularScan {
                    samples: a.samples,
                    include_origin: a.include_origin,
                    expect_singular: a.expect_singular,
                },
                echo,
            )
        }
        Op::Branch => {
            let (a, echo) = args::<BranchArgs>(&t.args)?;
            let section = a
                .section
                .as_ref()
                .map(|s| parse_section(s, require_model(t.op, model)?))
                .transpose()?;
            if a.zetas == 0 {
                bail!("`zetas` must be positive");
            }
            (
                TaskKind::Branch {
                    section,
                    samples: a.samples,
                    zetas: a.zetas,
                    include_origin: a.include_origin,
                },
                echo,
            )
        }
        Op::NormalBundle => {
            let (a, echo) = args::<NormalBundleArgs>(&t.args)?;
            let section = a
                .section
                .as_ref()
                .map(|s| parse_section(s, require_model(t.op, model)?))
                .transpose()?;
            (
                TaskKind::NormalBundle {
                    section,
                    samples: a.samples,
                },
                echo,
            )
        }
        Op::Classify => {
            let (a, echo) = args::<ClassifyArgs>(&t.args)?;
            (TaskKind::Classify { expect: a.expect }, echo)
        }
        Op::MatrixModel => {
            let (a, echo) = args::<MatrixModelArgs>(&t.args)?;
            if let Some(m) = model {
                if !m.same_structure(&build_quadric()) {
                    bail!("the matrix model applies to the quadric model only");
                }
            }
            let q = match &a.q {
                Some(values) => {
                    let parsed = values
                        .iter()
                        .map(|v| {
                            let z = complex_from_json(v)?;
                            if z.im != Rational::from_integer(0.into()) {
                                bail!("q entries are real, got {v}");
                            }
                            Ok(z.re)
                        })
                        .collect::<Result<Vec<Rational>>>()?;
                    let q: [Rational; 4] = parsed
                        .try_into()
                        .map_err(|v: Vec<Rational>| anyhow!("q has 4 entries, got {}", v.len()))?;
                    Some(q)
                }
                None => None,
            };
            (
                TaskKind::MatrixModel {
                    q,
                    samples: a.samples,
                },
                echo,
            )
        }
        Op::QuotientCensus => {
            let (a, echo) = args::<QuotientCensusArgs>(&t.args)?;
            let group = parse_group(&a)?;
            (
                TaskKind::QuotientCensus {
                    group,
                    action: a.action,
                    expect_count: a.expect_count,
                },
                echo,
            )
        }
        Op::ConeGlue => {
            let (a, echo) = args::<ConeGlueArgs>(&t.args)?;
            let n = a.coordinates.len();
            if a.weights.len() != n {
                bail!("{} weights for {n} coordinates", a.weights.len());
            }
            let equations = a
                .equations
                .iter()
                .map(|e| parse_polynomial(e, &a.coordinates))
                .collect::<twistor_core::Result<Vec<_>>>()?;
            for (e, text) in equations.iter().zip(&a.equations) {
                e.weighted_degree(&a.weights)
                    .with_context(|| format!("`{text}`"))?;
            }
            let rules = parse_rules(&a.rules, n)?;
            let compare = a
                .compare
                .as_ref()
                .map(|c| build_model(&ModelSpec::Name(c.clone()), Path::new(".")))
                .transpose()?;
            (
                TaskKind::ConeGlue {
                    equations,
                    coordinates: a.coordinates,
                    weights: a.weights,
                    l: a.l,
                    rules,
                    compare,
                },
                echo,
            )
        }
    };
    Ok(Task {
        op: t.op,
        inputs,
        kind,
    })
}
