//! Command implementations behind the `attractorlab` binary.

use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use attractorlab_core::dynamics::{
    contraction_certificate, detect_attractor, orbit_with, AttractorReport, OrbitOptions,
};
use attractorlab_core::suspension::{
    build_representation, classify_leaf, lift_attractor, suspend, BaseDescriptor, Presentation, SuspendedFoliation,
};
use attractorlab_core::{GeneratorSet, Point};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

use crate::formats::{orbit_rows, read_csv_points, render_svg, write_csv};
use crate::report::{self, to_canonical_string};
use crate::scenario::{shipped, ExpectedTag, Scenario, CORPUS};

/// Default word budget of `classify`.
pub const CLASSIFY_MAX_LEN: usize = 12;

pub mod exit {
    pub const OK: i32 = 0;
    /// No certificate or attractor, or an example did not match.
    pub const NOT_FOUND: i32 = 1;
    pub const INVALID: i32 = 2;
    pub const BUDGET: i32 = 3;
}

#[derive(Debug, Parser)]
#[command(
    name = "attractorlab",
    version,
    about = "Attractors and minimal sets of finitely generated affine group actions"
)]
pub struct Cli {
    /// Worker threads; never changes output bytes.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Add wall-clock timing to reports.
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Dump an orbit sample as CSV.
    Orbit {
        #[command(flatten)]
        common: Common,
        /// Base point, comma-separated; the origin by default.
        #[arg(long, allow_hyphen_values = true)]
        base: Option<String>,
    },
    /// Search for a contracting word.
    Certify {
        #[command(flatten)]
        common: Common,
    },
    /// Run the full detection pipeline.
    Detect {
        #[command(flatten)]
        common: Common,
    },
    /// Classify the leaves through the given transversal points.
    Classify {
        #[command(flatten)]
        common: Common,
        /// Points file: one comma-separated point per line, or an orbit CSV.
        #[arg(long, alias = "input")]
        points: Option<PathBuf>,
    },
    /// Run a shipped scenario and check its expected outcome.
    Example {
        /// 1 to 4, or the id of a shipped scenario.
        name: String,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Scatter plot of a planar orbit CSV.
    Plot {
        #[arg(long, alias = "points")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct Common {
    #[arg(long)]
    pub scenario: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub max_len: Option<usize>,
}

/// What a command produced.
pub struct Outcome {
    pub code: i32,
    pub output: String,
    pub out: Option<PathBuf>,
}

/// Runs a parsed command line and returns the exit code, writing output and
/// diagnostics.
pub fn run(cli: Cli) -> i32 {
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global() {
            eprintln!("error: --threads: {e}");
            return exit::INVALID;
        }
    }
    match execute(cli.command, cli.timing) {
        Ok(outcome) => match emit(&outcome) {
            Ok(()) => outcome.code,
            Err(e) => {
                eprintln!("error: {e:#}");
                exit::INVALID
            }
        },
        Err(e) => {
            eprintln!("error: {e:#}");
            exit_code(&e)
        }
    }
}

fn emit(outcome: &Outcome) -> Result<()> {
    match &outcome.out {
        Some(path) => std::fs::write(path, &outcome.output).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{}", outcome.output);
            Ok(())
        }
    }
}

/// 3 when an engine budget ran out, 2 for everything else.
pub fn exit_code(e: &anyhow::Error) -> i32 {
    let budget = e.chain().any(|c| {
        matches!(c.downcast_ref::<attractorlab_core::Error>(), Some(attractorlab_core::Error::BudgetExceeded { .. }))
    });
    if budget {
        exit::BUDGET
    } else {
        exit::INVALID
    }
}

pub fn execute(command: Command, timing: bool) -> Result<Outcome> {
    let start = Instant::now();
    let mut outcome = match command {
        Command::Orbit { common, base } => cmd_orbit(&common, base.as_deref())?,
        Command::Certify { common } => cmd_certify(&common)?,
        Command::Detect { common } => cmd_detect(&common)?,
        Command::Classify { common, points } => cmd_classify(&common, points.as_deref())?,
        Command::Example { name, seed, out } => cmd_example(&name, seed, out)?,
        Command::Plot { input, out } => cmd_plot(&input, out)?,
    };
    if timing && outcome.output.starts_with('{') {
        let mut value: Value = serde_json::from_str(&outcome.output)?;
        value["timing_ms"] = report::float(start.elapsed().as_secs_f64() * 1e3);
        outcome.output = to_canonical_string(&value);
    }
    Ok(outcome)
}

fn load(common: &Common) -> Result<Scenario> {
    Scenario::load(&common.scenario)
}

fn seed(scenario: &Scenario, seed: Option<u64>) -> u64 {
    seed.unwrap_or(scenario.params.seed)
}

fn parse_point(text: &str, dim: usize) -> Result<Point> {
    let p = text
        .split(',')
        .map(|f| f.trim().parse::<f64>().map_err(|_| anyhow!("bad coordinate {f:?}")))
        .collect::<Result<Point>>()?;
    if p.len() != dim {
        bail!("expected {dim} coordinates, found {}", p.len());
    }
    Ok(p)
}

fn json_outcome(value: Map<String, Value>, code: i32, out: Option<PathBuf>) -> Outcome {
    Outcome { code, output: to_canonical_string(&Value::Object(value)), out }
}

pub fn cmd_orbit(common: &Common, base: Option<&str>) -> Result<Outcome> {
    let scenario = load(common)?;
    let gens = scenario.group()?;
    let base = match base {
        Some(text) => parse_point(text, scenario.dim).context("--base")?,
        None => vec![0.0; scenario.dim],
    };
    let p = &scenario.params;
    let options = OrbitOptions::default()
        .with_max_len(common.max_len.unwrap_or(p.orbit_max_len))
        .with_dedup_eps(p.dedup_eps)
        .with_point_cap(p.point_cap);
    let sample = orbit_with(&base, &gens, &options)?;
    let output = write_csv(scenario.dim, &orbit_rows(&sample, &gens));
    Ok(Outcome { code: exit::OK, output, out: common.out.clone() })
}

pub fn cmd_certify(common: &Common) -> Result<Outcome> {
    let scenario = load(common)?;
    let gens = scenario.group()?;
    let max_len = common.max_len.unwrap_or(scenario.params.cert_max_len);
    let cert = contraction_certificate(&gens, max_len, scenario.params.tol_cert)?;
    let mut m = report::header(&scenario.id, "certify", seed(&scenario, common.seed));
    m.insert("max_len".into(), json!(max_len));
    m.insert("certificate".into(), cert.as_ref().map_or(Value::Null, |c| report::certificate(c, &gens)));
    let code = if cert.is_some() { exit::OK } else { exit::NOT_FOUND };
    Ok(json_outcome(m, code, common.out.clone()))
}

struct Detection {
    gens: GeneratorSet,
    foliation: Option<SuspendedFoliation>,
    report: Option<AttractorReport>,
}

fn detect(scenario: &Scenario, seed: u64) -> Result<Detection> {
    let gens = scenario.group()?;
    let mut params = scenario.detect_params();
    params.seed = seed;
    let report = detect_attractor(&gens, &params)?;
    Ok(Detection { gens, foliation: scenario.foliation()?, report })
}

fn detection_fields(m: &mut Map<String, Value>, scenario: &Scenario, d: &Detection) -> Result<()> {
    let attractor = d.report.as_ref().map(|r| report::attractor(r, &d.gens, scenario.params.epsilon));
    m.insert("attractor".into(), attractor.unwrap_or(Value::Null));
    if let Some(fol) = &d.foliation {
        let lift = d.report.as_ref().map(|r| lift_attractor(fol, r)).transpose()?;
        m.insert("foliation".into(), report::foliation(fol, lift.as_ref()));
    }
    Ok(())
}

pub fn cmd_detect(common: &Common) -> Result<Outcome> {
    let scenario = load(common)?;
    let seed = seed(&scenario, common.seed);
    let d = detect(&scenario, seed)?;
    let mut m = report::header(&scenario.id, "detect", seed);
    detection_fields(&mut m, &scenario, &d)?;
    let code = if d.report.is_some() { exit::OK } else { exit::NOT_FOUND };
    Ok(json_outcome(m, code, common.out.clone()))
}

/// The scenario's suspension, or a free suspension on its generators.
fn foliation_or_free(scenario: &Scenario) -> Result<SuspendedFoliation> {
    if let Some(f) = scenario.foliation()? {
        return Ok(f);
    }
    let gens = scenario.generator_set()?;
    let presentation = Presentation::free(gens.rank(), 1)?;
    let assignment = presentation.names().iter().cloned().zip(gens.maps().iter().cloned()).collect();
    let rep = build_representation(&presentation, assignment)?.with_labels(gens.names().to_vec())?;
    Ok(suspend(rep, BaseDescriptor::Free { rank: gens.rank() })?)
}

fn read_points(path: &Path, dim: usize) -> Result<Vec<Point>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    if text.lines().find(|l| !l.trim().is_empty()).is_some_and(|l| l.trim_start().starts_with('x')) {
        let (q, points) = read_csv_points(&text)?.unwrap_or((dim, Vec::new()));
        if q != dim {
            bail!("{}: expected {dim} coordinates per point, found {q}", path.display());
        }
        return Ok(points);
    }
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|(i, l)| parse_point(l, dim).with_context(|| format!("{} line {}", path.display(), i + 1)))
        .collect()
}

pub fn cmd_classify(common: &Common, points: Option<&Path>) -> Result<Outcome> {
    let scenario = load(common)?;
    let seed = seed(&scenario, common.seed);
    let foliation = foliation_or_free(&scenario)?;
    let points = match points {
        Some(path) => read_points(path, scenario.dim)?,
        None => vec![vec![0.0; scenario.dim], vec![1.0; scenario.dim]],
    };
    let budget = common.max_len.unwrap_or(CLASSIFY_MAX_LEN);
    let mut leaves = Vec::with_capacity(points.len());
    for t in points {
        let class = classify_leaf(&foliation, &t, budget, scenario.params.dedup_eps)?;
        leaves.push((t, class));
    }
    let gens = foliation.holonomy_group().clone();
    let mut params = scenario.detect_params();
    params.seed = seed;
    let detection = Detection { report: detect_attractor(&gens, &params)?, gens, foliation: Some(foliation) };
    let mut m = report::header(&scenario.id, "classify", seed);
    m.insert("max_len".into(), json!(budget));
    m.insert("leaves".into(), report::leaves(&leaves));
    detection_fields(&mut m, &scenario, &detection)?;
    Ok(json_outcome(m, exit::OK, common.out.clone()))
}

fn example_id(name: &str) -> Result<&'static str> {
    let id = match name {
        "1" | "2" | "3" | "4" => format!("example{name}"),
        other => other.to_string(),
    };
    CORPUS
        .iter()
        .map(|(id, _)| *id)
        .find(|known| *known == id)
        .ok_or_else(|| anyhow!("unknown example {name:?}; expected 1-4 or one of {:?}", CORPUS.map(|(id, _)| id)))
}

/// Whether a detection outcome matches an expected tag.
pub fn matches_expected(tag: ExpectedTag, subspace_dim: Option<usize>, report: Option<&AttractorReport>) -> bool {
    match (tag, report) {
        (ExpectedTag::NoAttractor, r) => r.is_none(),
        (ExpectedTag::GlobalMinimalAttractor, Some(r)) => {
            let dim = r.subspace.as_ref().map_or(0, |s| s.dim);
            r.minimal() && r.global() && subspace_dim.is_none_or(|d| d == dim)
        }
        (ExpectedTag::GlobalMinimalAttractor, None) => false,
    }
}

pub fn cmd_example(name: &str, seed: Option<u64>, out: Option<PathBuf>) -> Result<Outcome> {
    let scenario = shipped(example_id(name)?).expect("corpus entry");
    let seed = seed.unwrap_or(scenario.params.seed);
    let d = detect(&scenario, seed)?;
    let mut m = report::header(&scenario.id, "example", seed);
    detection_fields(&mut m, &scenario, &d)?;
    let code = match &scenario.expected {
        Some(e) => {
            let ok = matches_expected(e.tag, e.subspace_dim, d.report.as_ref());
            m.insert("expected".into(), json!({ "tag": e.tag.as_str(), "subspace_dim": e.subspace_dim }));
            m.insert("matches".into(), json!(ok));
            if ok {
                exit::OK
            } else {
                exit::NOT_FOUND
            }
        }
        None => exit::OK,
    };
    Ok(json_outcome(m, code, out))
}

pub fn cmd_plot(input: &Path, out: Option<PathBuf>) -> Result<Outcome> {
    let text = std::fs::read_to_string(input).with_context(|| format!("reading {}", input.display()))?;
    let points = match read_csv_points(&text)? {
        None => Vec::new(),
        Some((2, points)) => points,
        Some((q, _)) => bail!("plot needs planar points, the CSV has q = {q}"),
    };
    Ok(Outcome { code: exit::OK, output: render_svg(&points), out })
}
