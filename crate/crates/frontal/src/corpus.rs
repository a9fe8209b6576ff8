//! Corpus runs: summary JSON and persisted failure specs.

use std::collections::BTreeMap;
use std::path::Path;

use frontal_core::verify::{run_corpus, CorpusKind, CorpusSummary};
use frontal_core::AnalysisOptions;
use serde::Serialize;

use crate::spec::{CurveSpec, GeneratorSpecJson};
use crate::{Error, Result};

#[derive(Clone, Debug, Serialize)]
pub struct MarginJson {
    pub evaluated: usize,
    pub passed: usize,
    pub min: Option<f64>,
    pub median: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FailureJson {
    pub position: usize,
    pub reason: String,
    pub generator: GeneratorSpecJson,
    /// File the failing curve spec was written to.
    pub spec_file: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CorpusReport {
    pub kind: &'static str,
    pub seed: u64,
    pub count: usize,
    pub requested: usize,
    pub tolerance: f64,
    pub min_k: Option<f64>,
    pub failures: Vec<FailureJson>,
    pub margins: BTreeMap<&'static str, MarginJson>,
}

impl CorpusReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("corpus report serializes");
        s.push('\n');
        s
    }
}

pub fn parse_kind(name: &str) -> Result<CorpusKind> {
    CorpusKind::from_name(name).ok_or_else(|| {
        Error::Validation(format!(
            "unknown corpus '{name}' (expected n2, n2-monotone or n3)"
        ))
    })
}

/// Runs the corpus, writing each failing curve to `failures_dir` when given.
pub fn run(
    kind: CorpusKind,
    count: usize,
    seed: u64,
    options: &AnalysisOptions,
    failures_dir: Option<&Path>,
) -> Result<(CorpusSummary, CorpusReport)> {
    let summary = run_corpus(kind, count, seed, options)?;
    let mut failures = Vec::new();
    for f in &summary.failures {
        let mut spec_file = None;
        if let (Some(dir), Some(curve)) = (failures_dir, f.curve.as_ref()) {
            std::fs::create_dir_all(dir)?;
            let path = dir.join(format!("{}-{}-{:04}.json", kind.as_str(), seed, f.position));
            std::fs::write(
                &path,
                CurveSpec::describe_generated(curve, &f.spec).to_json(),
            )?;
            spec_file = Some(path.display().to_string());
        }
        failures.push(FailureJson {
            position: f.position,
            reason: f.reason.clone(),
            generator: GeneratorSpecJson::from(&f.spec),
            spec_file,
        });
    }
    let margins = summary
        .margins
        .iter()
        .map(|m| {
            (
                m.id.as_str(),
                MarginJson {
                    evaluated: m.evaluated,
                    passed: m.passed,
                    min: m.min,
                    median: m.median,
                },
            )
        })
        .collect();
    let min_k = summary.records.iter().map(|r| r.k).reduce(f64::min);
    let report = CorpusReport {
        kind: kind.as_str(),
        seed,
        count: summary.count,
        requested: count,
        tolerance: options.tol,
        min_k,
        failures,
        margins,
    };
    Ok((summary, report))
}
