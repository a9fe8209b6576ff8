//! Reports, curve specs and corpus summaries validate against the schemas
//! shipped in `docs/`.

use frontal::corpus;
use frontal::report::AnalysisReport;
use frontal::spec::CurveSpec;
use frontal_core::analysis::{analyze, AnalysisOptions};
use frontal_core::generator::generate;
use frontal_core::verify::{corpus_spec, CorpusKind};
use jsonschema::{Registry, Validator};
use serde_json::Value;

const BASE: &str = "https://example.invalid/frontal/";
const DOCS: [&str; 3] = [
    "curve-spec.schema.json",
    "report.schema.json",
    "corpus-summary.schema.json",
];

fn load(name: &str) -> Value {
    let path = format!("{}/../../docs/{name}", env!("CARGO_MANIFEST_DIR"));
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn validator(name: &str) -> Validator {
    let mut registry = Registry::new();
    for doc in DOCS {
        registry = registry.add(format!("{BASE}{doc}"), load(doc)).unwrap();
    }
    let registry = registry.prepare().unwrap();
    jsonschema::options()
        .with_registry(&registry)
        .build(&load(name))
        .unwrap()
}

fn assert_valid(v: &Validator, text: &str) {
    let instance: Value = serde_json::from_str(text).unwrap();
    let errors: Vec<String> = v
        .iter_errors(&instance)
        .map(|e| format!("{e} at {}", e.instance_path()))
        .collect();
    assert!(errors.is_empty(), "{errors:#?}");
}

fn family(name: &str, params: &[(&str, f64)]) -> CurveSpec {
    let p: Vec<(String, f64)> = params.iter().map(|(k, v)| (k.to_string(), *v)).collect();
    CurveSpec::family(name, &p)
}

#[test]
fn schemas_are_valid_documents() {
    for doc in DOCS {
        assert!(jsonschema::meta::is_valid(&load(doc)), "{doc}");
    }
}

#[test]
fn family_reports_validate() {
    let v = validator("report.schema.json");
    let cases = [
        family("circle", &[]),
        family("ellipse", &[("a", 2.0), ("b", 1.0)]),
        family("hypocycloid", &[("m", 1.0)]),
        family("hypocycloid", &[("m", 2.0)]),
        family("eye", &[("a", 1.0)]),
    ];
    for spec in cases {
        let curve = spec.build().unwrap();
        let a = analyze(&curve, &AnalysisOptions::default()).unwrap();
        assert_valid(&v, &AnalysisReport::new(spec, &a).to_json());
    }
}

#[test]
fn generated_specs_and_reports_validate() {
    let specs = validator("curve-spec.schema.json");
    let reports = validator("report.schema.json");
    for (kind, i) in [
        (CorpusKind::N2, 0),
        (CorpusKind::N2, 3),
        (CorpusKind::N3, 1),
    ] {
        let input = corpus_spec(kind, 11, i);
        let curve = generate(&input).unwrap();
        let spec = CurveSpec::describe_generated(&curve, &input);
        let text = spec.to_json();
        assert_valid(&specs, &text);
        let back = CurveSpec::from_json(&text).unwrap();
        assert_eq!(back, spec);
        let a = analyze(&back.build().unwrap(), &AnalysisOptions::default()).unwrap();
        assert_valid(&reports, &AnalysisReport::new(back, &a).to_json());
    }
}

#[test]
fn corpus_summary_validates() {
    let v = validator("corpus-summary.schema.json");
    let (_, report) = corpus::run(CorpusKind::N2, 4, 5, &AnalysisOptions::default(), None).unwrap();
    assert_valid(&v, &report.to_json());
}

#[test]
fn schema_rejects_malformed_specs() {
    let v = validator("curve-spec.schema.json");
    for bad in [
        r#"{"dimension": 2}"#,
        r#"{"dimension": 2, "backend": "family"}"#,
        r#"{"dimension": 2, "backend": "family", "family": {"name": "circle"}, "fourier": {"coords": []}}"#,
        r#"{"dimension": 2, "backend": "family", "family": {"name": "square"}}"#,
        r#"{"dimension": 2, "backend": "family", "family": {"name": "circle"}, "colour": "red"}"#,
    ] {
        let instance: Value = serde_json::from_str(bad).unwrap();
        assert!(!v.is_valid(&instance), "{bad}");
    }
}
