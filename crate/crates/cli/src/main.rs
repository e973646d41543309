//! `twistor`: command-line front end for twistor-core.
//!
//! Every subcommand is turned into a one-task scenario and runs through the
//! same path as `twistor run <scenario.json>`.
//! Exit codes: 0 all checks pass, 1 a check failed, 2 input or parse error.

mod report;
mod scenario;
mod tasks;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

use twistor_core::twistor_model::LambdaReality;

use scenario::{ModelFields, ModelSpec, Op, Scenario, ScenarioDoc, TaskDoc};

const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Parser, Debug)]
#[command(
    name = "twistor",
    version,
    about = "Real sections of twistor spaces: scenario runner and checks"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Global {
    /// Builtin model (quadric, deformed, smooth-o11) or a model JSON file.
    #[arg(long, global = true)]
    model: Option<String>,
    /// Coefficients of λ(ζ) for the deformed model, lowest degree first,
    /// e.g. `--lambda=0+1i,0,0-1i`.
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    lambda: Option<Vec<String>>,
    /// Declared reality type of λ.
    #[arg(long, global = true, value_parser = ["tau-real", "tau-antireal"])]
    reality: Option<String>,
    /// Membership tolerance.
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write the JSON report here.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Exact rational arithmetic where the operation supports it.
    #[arg(long, global = true)]
    exact: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a scenario file.
    Run { scenario: PathBuf },
    /// Check involutivity, degrees, σ-compatibility and generic fiber corank.
    Validate,
    /// Sample real sections.
    Sections {
        #[arg(long, default_value_t = 20)]
        count: usize,
        /// Dump the samples as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// All real sections through a point of the fiber over ζ.
    SolveFiber {
        /// Point of P¹; a complex number or `inf`.
        #[arg(long, allow_hyphen_values = true)]
        zeta: String,
        /// Fiber coordinates, comma separated.
        #[arg(
            long,
            value_delimiter = ',',
            allow_hyphen_values = true,
            required = true
        )]
        point: Vec<String>,
        /// Expected number of sections.
        #[arg(long)]
        expect: Option<usize>,
    },
    /// Jacobian rank over random sections and the origin.
    SingularScan {
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long)]
        no_origin: bool,
        #[arg(long)]
        expect_singular: Option<usize>,
    },
    /// Unbranchedness of the incidence map at random ζ.
    Branch {
        /// One section, as components or real parameters, comma separated.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        section: Option<Vec<String>>,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long, default_value_t = 5)]
        zetas: usize,
        #[arg(long)]
        no_origin: bool,
    },
    /// Splitting type of the normal bundle along sections.
    NormalBundle {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        section: Option<Vec<String>>,
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
    /// Hypercomplex, weakly hypercomplex or undetermined.
    Classify {
        /// hypercomplex, weakly-hypercomplex or undetermined.
        #[arg(long)]
        expect: Option<String>,
    },
    /// Symmetric matrix model of quadric sections.
    MatrixModel {
        /// One vector q, four rationals.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        q: Option<Vec<String>>,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// Involution census and component count of a finite quaternion group.
    QuotientCensus {
        /// Z<k>, Q8, BD<4n>.
        #[arg(long)]
        group: String,
        #[arg(long, default_value = "left-multiplication")]
        action: String,
        #[arg(long)]
        expect_count: Option<usize>,
    },
    /// Twistor model of a weighted cone.
    ConeGlue {
        /// Polynomial equation in the coordinates; repeatable.
        #[arg(long = "equation")]
        equations: Vec<String>,
        #[arg(long, value_delimiter = ',', required = true)]
        coordinates: Vec<String>,
        #[arg(long, value_delimiter = ',', required = true)]
        weights: Vec<usize>,
        #[arg(long)]
        l: usize,
        /// Rule preset: quadric or quaternionic-pair.
        #[arg(long)]
        rules: String,
        /// Builtin model to compare with.
        #[arg(long)]
        compare: Option<String>,
    },
}

fn strings(v: &[String]) -> Value {
    Value::Array(
        v.iter()
            .map(|s| Value::String(s.trim().to_string()))
            .collect(),
    )
}

fn insert_opt<T: Into<Value>>(m: &mut Map<String, Value>, key: &str, v: Option<T>) {
    if let Some(v) = v {
        m.insert(key.to_string(), v.into());
    }
}

fn task_of(cmd: Command) -> Result<TaskDoc> {
    let mut a = Map::new();
    let op = match cmd {
        Command::Run { .. } => unreachable!("handled by the caller"),
        Command::Validate => Op::Validate,
        Command::Sections { count, csv } => {
            a.insert("count".into(), count.into());
            insert_opt(&mut a, "csv", csv.map(|p| p.display().to_string()));
            Op::Sections
        }
        Command::SolveFiber {
            zeta,
            point,
            expect,
        } => {
            a.insert("zeta".into(), zeta.into());
            a.insert("point".into(), strings(&point));
            insert_opt(&mut a, "expect", expect);
            Op::SolveFiber
        }
        Command::SingularScan {
            samples,
            no_origin,
            expect_singular,
        } => {
            a.insert("samples".into(), samples.into());
            a.insert("include_origin".into(), (!no_origin).into());
            insert_opt(&mut a, "expect_singular", expect_singular);
            Op::SingularScan
        }
        Command::Branch {
            section,
            samples,
            zetas,
            no_origin,
        } => {
            insert_opt(&mut a, "section", section.as_deref().map(strings));
            a.insert("samples".into(), samples.into());
            a.insert("zetas".into(), zetas.into());
            a.insert("include_origin".into(), (!no_origin).into());
            Op::Branch
        }
        Command::NormalBundle { section, samples } => {
            insert_opt(&mut a, "section", section.as_deref().map(strings));
            a.insert("samples".into(), samples.into());
            Op::NormalBundle
        }
        Command::Classify { expect } => {
            insert_opt(&mut a, "expect", expect);
            Op::Classify
        }
        Command::MatrixModel { q, samples } => {
            insert_opt(&mut a, "q", q.as_deref().map(strings));
            a.insert("samples".into(), samples.into());
            Op::MatrixModel
        }
        Command::QuotientCensus {
            group,
            action,
            expect_count,
        } => {
            a.insert("group".into(), group.into());
            a.insert("action".into(), action.into());
            insert_opt(&mut a, "expect_count", expect_count);
            Op::QuotientCensus
        }
        Command::ConeGlue {
            equations,
            coordinates,
            weights,
            l,
            rules,
            compare,
        } => {
            a.insert("equations".into(), strings(&equations));
            a.insert("coordinates".into(), strings(&coordinates));
            a.insert("weights".into(), json!(weights));
            a.insert("l".into(), l.into());
            a.insert("rules".into(), rules.into());
            insert_opt(&mut a, "compare", compare);
            Op::ConeGlue
        }
    };
    Ok(TaskDoc {
        op,
        args: Value::Object(a),
    })
}

fn model_override(g: &Global) -> Result<Option<ModelSpec>> {
    let deformation = g.lambda.is_some() || g.reality.is_some();
    match (&g.model, deformation) {
        (None, false) => Ok(None),
        (None, true) => bail!("--lambda and --reality need --model deformed"),
        (Some(m), false) => Ok(Some(ModelSpec::Name(m.clone()))),
        (Some(m), true) => {
            let reality = match g.reality.as_deref() {
                Some("tau-real") => Some(LambdaReality::TauReal),
                Some("tau-antireal") => Some(LambdaReality::TauAntireal),
                _ => None,
            };
            Ok(Some(ModelSpec::Spec(ModelFields {
                builtin: Some(m.clone()),
                lambda: g.lambda.as_deref().map(|l| {
                    l.iter()
                        .map(|s| Value::String(s.trim().to_string()))
                        .collect()
                }),
                reality,
                ..Default::default()
            })))
        }
    }
}

fn apply_globals(doc: &mut ScenarioDoc, g: &Global) -> Result<()> {
    if let Some(m) = model_override(g)? {
        doc.model = Some(m);
    }
    if let Some(t) = g.tol {
        doc.tolerances.membership = Some(t);
    }
    if let Some(s) = g.seed {
        doc.seed = Some(s);
    }
    if g.out.is_some() {
        doc.output = g.out.clone();
    }
    doc.exact |= g.exact;
    Ok(())
}

fn load(cli: Cli) -> Result<Scenario> {
    let g = cli.global;
    let (mut doc, base) = match cli.command {
        Command::Run { scenario } => {
            let doc = ScenarioDoc::load(&scenario)?;
            let base = scenario.parent().map(Path::to_path_buf).unwrap_or_default();
            (doc, base)
        }
        cmd => {
            let task = task_of(cmd)?;
            let doc = ScenarioDoc {
                model: None,
                tasks: vec![task],
                tolerances: Default::default(),
                seed: Some(DEFAULT_SEED),
                output: None,
                exact: false,
            };
            (doc, PathBuf::from("."))
        }
    };
    apply_globals(&mut doc, &g)?;
    // Scenario outputs are relative to the scenario file; --out to the cwd.
    if g.out.is_none() {
        doc.output = doc.output.map(|o| base.join(o));
    }
    Scenario::prepare(doc, &base)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let scenario = match load(cli) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let output = scenario.output.clone();
    let report = report::run(scenario);
    report.print_summary();
    if let Some(path) = output {
        if let Err(e) = report.write(&path) {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    }
    if report.failed() {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}
