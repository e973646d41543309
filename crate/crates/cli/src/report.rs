use std::path::Path;

use anyhow::{Context as _, Result};
use serde::Serialize;

use twistor_core::analyzer::AnalysisConfig;

use crate::scenario::{ModelSpec, Scenario};
use crate::tasks::{run_task, Context, Status, TaskRecord};

#[derive(Debug, Serialize)]
pub struct Toolkit {
    pub name: &'static str,
    pub version: &'static str,
}

#[derive(Debug, Serialize)]
pub struct ModelInfo {
    pub spec: Option<ModelSpec>,
    pub name: Option<String>,
}

#[derive(Debug, Default, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub info: usize,
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub toolkit: Toolkit,
    pub seed: Option<u64>,
    pub arithmetic: &'static str,
    pub model: ModelInfo,
    pub config: AnalysisConfig,
    pub tasks: Vec<TaskRecord>,
    pub summary: Summary,
}

impl Report {
    pub fn failed(&self) -> bool {
        self.summary.fail > 0
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self)?;
        std::fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))
    }

    pub fn print_summary(&self) {
        if let Some(name) = &self.model.name {
            println!("model {name}");
        }
        for (i, t) in self.tasks.iter().enumerate() {
            let tag = match t.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Info => "INFO",
            };
            println!("{tag}  {:>2} {:<16} {}", i + 1, t.op, t.headline);
        }
        println!(
            "{} passed, {} failed, {} informational",
            self.summary.pass, self.summary.fail, self.summary.info
        );
    }
}

pub fn run(scenario: Scenario) -> Report {
    let name = scenario.model.as_ref().map(|m| m.name.clone());
    let mut ctx = Context::new(scenario.model, scenario.config.clone(), scenario.exact);
    let mut summary = Summary::default();
    let mut tasks = Vec::with_capacity(scenario.tasks.len());
    for (i, task) in scenario.tasks.iter().enumerate() {
        let record = run_task(&mut ctx, task, i);
        match record.status {
            Status::Pass => summary.pass += 1,
            Status::Fail => summary.fail += 1,
            Status::Info => summary.info += 1,
        }
        tasks.push(record);
    }
    Report {
        toolkit: Toolkit {
            name: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
        },
        seed: scenario.seed,
        arithmetic: if scenario.exact { "exact" } else { "f64" },
        model: ModelInfo {
            spec: scenario.model_spec,
            name,
        },
        config: scenario.config,
        tasks,
        summary,
    }
}
