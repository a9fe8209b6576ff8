//! Command-line front end.
//!
//! Exit codes: `0` success, `1` a verification failed, `2` invalid input,
//! `3` a numerical stage missed its accuracy target.

use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use frontal_core::analysis::{analyze, AnalysisOptions};
use frontal_core::generator::generate;
use frontal_core::{GeneratorSpec, HalfInt, ThetaMode, Topology, VerdictStatus};

use crate::corpus;
use crate::render::{render_svg, RenderOptions};
use crate::report::AnalysisReport;
use crate::spec::CurveSpec;
use crate::{Error, Result};

#[derive(Debug, Parser)]
#[command(
    name = "frontal",
    version,
    about = "Analyze closed frontal curves and check Fenchel-type bounds"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the full pipeline and print a JSON report.
    Analyze(AnalyzeArgs),
    /// Draw the curve (and optionally its indicatrix) as SVG.
    Render(RenderArgs),
    /// Check theorem verdicts on one curve or a generated corpus.
    Verify(VerifyArgs),
    /// Write a curve spec for a generated frontal.
    Generate(GenerateArgs),
}

#[derive(Debug, Args)]
pub struct CurveArgs {
    /// Curve-spec JSON file.
    #[arg(conflicts_with = "family")]
    pub spec: Option<PathBuf>,
    /// Built-in family: circle, ellipse, hypocycloid, eye, model-cusp.
    #[arg(long)]
    pub family: Option<String>,
    /// Family parameter as `name=value`; repeatable.
    #[arg(long = "param", value_name = "NAME=VALUE", requires = "family")]
    pub params: Vec<String>,
}

#[derive(Debug, Args)]
pub struct TolArg {
    /// Absolute quadrature tolerance.
    #[arg(
        long,
        env = "FRONTAL_TOL",
        default_value_t = 1e-9,
        allow_hyphen_values = true
    )]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub curve: CurveArgs,
    #[command(flatten)]
    pub tol: TolArg,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    #[command(flatten)]
    pub curve: CurveArgs,
    /// Output SVG file.
    #[arg(long)]
    pub svg: PathBuf,
    #[arg(long, default_value_t = 2000)]
    pub samples: usize,
    /// Mark singular points (the default).
    #[arg(long, overrides_with = "no_mark_cusps")]
    pub mark_cusps: bool,
    #[arg(long)]
    pub no_mark_cusps: bool,
    /// Add the tangent indicatrix on the unit circle; required for ℝ³.
    #[arg(long)]
    pub show_indicatrix: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub curve: CurveArgs,
    /// Corpus to generate instead of a single curve: n2, n2-monotone or n3.
    #[arg(long, conflicts_with_all = ["spec", "family"])]
    pub corpus: Option<String>,
    #[arg(long, default_value_t = 200, requires = "corpus")]
    pub count: usize,
    #[arg(long, default_value_t = 0, requires = "corpus")]
    pub seed: u64,
    /// Directory for the curve specs of failing corpus members.
    #[arg(long, requires = "corpus")]
    pub failures_dir: Option<PathBuf>,
    #[command(flatten)]
    pub tol: TolArg,
    /// Write the JSON summary here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long, default_value_t = 2)]
    pub dimension: usize,
    /// Rotation index for planar curves, e.g. `1/2`, `-3/2`, `1`.
    #[arg(long, allow_hyphen_values = true)]
    pub index: Option<String>,
    /// Spherical tangent fields (dimension ≥ 3): return to `e` rather than `−e`.
    #[arg(long)]
    pub co_orientable: bool,
    #[arg(long, default_value_t = 3)]
    pub degree: usize,
    /// Defaults to `0.4·|index|` for monotone planar curves, `0.5` otherwise.
    #[arg(long)]
    pub amplitude: Option<f64>,
    /// `monotone` or `free`.
    #[arg(long, default_value = "monotone")]
    pub theta_mode: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Parses `1/2`, `-3/2` or an integer into a half-integer.
pub fn parse_index(text: &str) -> Result<HalfInt> {
    let bad = || {
        Error::Validation(format!(
            "invalid index '{text}' (expected e.g. 1/2, -3/2, 1)"
        ))
    };
    let twice = match text.trim().split_once('/') {
        Some((num, "2")) => {
            let k: i64 = num.trim().parse().map_err(|_| bad())?;
            if k % 2 == 0 {
                return Err(bad());
            }
            k
        }
        Some(_) => return Err(bad()),
        None => 2 * text.trim().parse::<i64>().map_err(|_| bad())?,
    };
    Ok(HalfInt::from_twice(twice))
}

fn parse_params(raw: &[String]) -> Result<Vec<(String, f64)>> {
    raw.iter()
        .map(|p| {
            let (k, v) = p
                .split_once('=')
                .ok_or_else(|| Error::Validation(format!("parameter '{p}' is not name=value")))?;
            let v: f64 = v.trim().parse().map_err(|_| {
                Error::Validation(format!("parameter '{p}' has a non-numeric value"))
            })?;
            Ok((k.trim().to_string(), v))
        })
        .collect()
}

fn load_curve(args: &CurveArgs) -> Result<CurveSpec> {
    match (&args.spec, &args.family) {
        (Some(path), None) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Validation(format!("{}: {e}", path.display())))?;
            CurveSpec::from_json(&text)
        }
        (None, Some(name)) => Ok(CurveSpec::family(name, &parse_params(&args.params)?)),
        (None, None) => Err(Error::Validation(
            "give a curve-spec file or --family".into(),
        )),
        (Some(_), Some(_)) => Err(Error::Validation(
            "give either a curve-spec file or --family, not both".into(),
        )),
    }
}

fn options(tol: &TolArg) -> Result<AnalysisOptions> {
    if !(tol.tol.is_finite() && tol.tol > 0.0 && tol.tol < 1e-2) {
        return Err(Error::Validation(format!(
            "tolerance {} must lie in (0, 1e-2)",
            tol.tol
        )));
    }
    Ok(AnalysisOptions {
        tol: tol.tol,
        ..AnalysisOptions::default()
    })
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn cmd_analyze(args: &AnalyzeArgs) -> Result<i32> {
    let spec = load_curve(&args.curve)?;
    let curve = spec.build()?;
    let analysis = analyze(&curve, &options(&args.tol)?)?;
    let report = AnalysisReport::new(spec, &analysis);
    emit(args.out.as_deref(), &report.to_json())?;
    Ok(0)
}

fn cmd_render(args: &RenderArgs) -> Result<i32> {
    let curve = load_curve(&args.curve)?.build()?;
    let opts = RenderOptions {
        samples: args.samples,
        mark_cusps: !args.no_mark_cusps,
        show_indicatrix: args.show_indicatrix,
    };
    std::fs::write(&args.svg, render_svg(&curve, &opts)?)?;
    Ok(0)
}

fn cmd_verify(args: &VerifyArgs) -> Result<i32> {
    let opts = options(&args.tol)?;
    if let Some(kind) = &args.corpus {
        let kind = corpus::parse_kind(kind)?;
        let (_, report) = corpus::run(
            kind,
            args.count,
            args.seed,
            &opts,
            args.failures_dir.as_deref(),
        )?;
        emit(args.out.as_deref(), &report.to_json())?;
        for f in &report.failures {
            eprintln!("corpus member {} {}", f.position, f.reason);
        }
        return Ok(if report.passed() { 0 } else { 1 });
    }
    let spec = load_curve(&args.curve)?;
    let curve = spec.build()?;
    let analysis = analyze(&curve, &opts)?;
    let report = AnalysisReport::new(spec, &analysis);
    emit(args.out.as_deref(), &report.to_json())?;
    for v in &report.verdicts {
        if v.status == VerdictStatus::Fail.as_str() {
            eprintln!("{}: fail ({})", v.id, v.details);
        }
    }
    Ok(if report.all_pass() { 0 } else { 1 })
}

fn cmd_generate(args: &GenerateArgs) -> Result<i32> {
    let topology = match (args.dimension, &args.index) {
        (2, Some(index)) => {
            if args.co_orientable {
                return Err(Error::Validation(
                    "--co-orientable applies to dimension ≥ 3; planar curves take --index".into(),
                ));
            }
            Topology::Index(parse_index(index)?)
        }
        (2, None) => return Err(Error::Validation("planar generation needs --index".into())),
        (_, Some(_)) => {
            return Err(Error::Validation(
                "--index applies to dimension 2 only".into(),
            ))
        }
        (_, None) => Topology::Spherical {
            co_orientable: args.co_orientable,
        },
    };
    let theta_mode = match args.theta_mode.as_str() {
        "monotone" => ThetaMode::Monotone,
        "free" => ThetaMode::Free,
        other => {
            return Err(Error::Validation(format!(
                "unknown --theta-mode '{other}' (expected monotone or free)"
            )))
        }
    };
    let amplitude = match (args.amplitude, topology, theta_mode) {
        (Some(a), _, _) => a,
        (None, Topology::Index(h), ThetaMode::Monotone) => 0.4 * h.value().abs(),
        (None, _, _) => 0.5,
    };
    let spec = GeneratorSpec {
        dimension: args.dimension,
        topology,
        degree: args.degree,
        amplitude,
        theta_mode,
        seed: args.seed,
    };
    let curve = generate(&spec)?;
    let mut text = CurveSpec::describe_generated(&curve, &spec).to_json();
    text.push('\n');
    emit(args.out.as_deref(), &text)?;
    Ok(0)
}

/// Runs a parsed command line and returns the process exit code.
pub fn run(cli: &Cli) -> Result<i32> {
    match &cli.command {
        Command::Analyze(a) => cmd_analyze(a),
        Command::Render(a) => cmd_render(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Generate(a) => cmd_generate(a),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_parsing() {
        assert_eq!(parse_index("1/2").unwrap().twice(), 1);
        assert_eq!(parse_index("-3/2").unwrap().twice(), -3);
        assert_eq!(parse_index("2").unwrap().twice(), 4);
        assert!(parse_index("2/2").is_err());
        assert!(parse_index("1/3").is_err());
        assert!(parse_index("x").is_err());
    }

    #[test]
    fn params() {
        let p = parse_params(&["m=2".into(), " a = 0.5".into()]).unwrap();
        assert_eq!(p, vec![("m".to_string(), 2.0), ("a".to_string(), 0.5)]);
        assert!(parse_params(&["m".into()]).is_err());
    }

    #[test]
    fn clap_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
