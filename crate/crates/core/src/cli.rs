//! Command-line front end: axiom suites, word evaluation, covers and
//! suitable-set constructions, each writing JSON (and CSV) artifacts plus a
//! `manifest.json` into `--out`.
//!
//! Exit codes: 0 pass, 1 verdict failure, 2 usage, 3 input format.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::axioms::{check_all, check_strong_ball_invariance, AxiomReport};
use crate::carrier::Gyrogroup;
use crate::error::GyroError;
use crate::instances::{
    validate_table, EinsteinBall, Integers, MobiusDisk, MobiusPoint, TableFile, TableGyro,
};
use crate::io::{parse_complex, parse_vector, write_points};
use crate::metric::{precompact_witness, Ball, Candidates, SampleCloud};
use crate::suitable::{
    extend_via_enumeration, extend_via_open_subgyro, suitable_compact_metrizable,
    suitable_countable_trace, suitable_finite, suitable_nonprecompact, suitable_precompact_disk,
    ConstructionConfig, SuitableSetResult,
};
use crate::words::{enumerate_trees, eval_word, r_set, tree_count, WordSpec};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_VERDICT: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_FORMAT: i32 = 3;

/// Ball radii probed by the invariance check.
const INVARIANCE_RADII: [f64; 4] = [0.25, 0.5, 0.75, 0.9];

/// Radius substituted for a zero radius on discrete carriers.
const DISCRETE_RADIUS: f64 = 0.5;

#[derive(Debug, Parser)]
#[command(
    name = "gyrolab",
    version,
    about = "Gyrogroup experiments with reproducible artifacts"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the axiom suite on a carrier.
    Axioms(AxiomsArgs),
    /// List bracketings and evaluate words.
    Words(WordsArgs),
    /// Build and verify a suitable set.
    Suitable(SuitableArgs),
    /// Cover a sample cloud by translates of a ball at the identity.
    Cover(CoverArgs),
}

#[derive(Debug, Args)]
pub struct AxiomsArgs {
    /// mobius, einstein:c=<real>, table:<path>, group:<path> or integers
    #[arg(long)]
    pub instance: String,
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct WordsArgs {
    /// Number of leaves.
    #[arg(long)]
    pub n: Option<usize>,
    /// Print every bracketing of `n` leaves.
    #[arg(long)]
    pub list: bool,
    #[arg(long)]
    pub instance: Option<String>,
    /// A word such as "((+0 ⊕ +1) ⊕ −2)"; leaf indices refer to `--leaves`.
    #[arg(long)]
    pub eval: Option<String>,
    /// Comma-separated elements; Einstein vectors are separated by ';'.
    #[arg(long, allow_hyphen_values = true)]
    pub leaves: Option<String>,
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SuitableArgs {
    #[arg(long)]
    pub instance: String,
    /// finite, countable-trace, precompact, extend, compact or nonprecompact
    #[arg(long)]
    pub method: String,
    /// Density radius.
    #[arg(long)]
    pub eps: Option<f64>,
    /// Longest word used for closures (default: one more than the number of radii).
    #[arg(long)]
    pub word_cap: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub cloud: Option<usize>,
    /// Comma-separated decreasing radii; overrides --r0/--steps.
    #[arg(long)]
    pub radii: Option<String>,
    #[arg(long, default_value_t = 0.4)]
    pub r0: f64,
    /// Radii in the halving schedule (precompact).
    #[arg(long, default_value_t = 7)]
    pub steps: usize,
    /// The compact schedule halves until it drops below this radius.
    #[arg(long, default_value_t = 1e-3)]
    pub min_radius: f64,
    #[arg(long)]
    pub threshold: Option<f64>,
    /// Generators of the dense subgyrogroup (default 0.5,0.5i on the disk).
    #[arg(long, allow_hyphen_values = true)]
    pub generators: Option<String>,
    /// Enumeration of a table carrier as a comma-separated permutation.
    #[arg(long)]
    pub enumeration: Option<String>,
    /// Elements of a subgyrogroup H (extend).
    #[arg(long)]
    pub subgroup: Option<String>,
    /// Generators of H (extend).
    #[arg(long)]
    pub subgroup_generators: Option<String>,
    /// Size of the separated family (nonprecompact).
    #[arg(long, default_value_t = 100)]
    pub budget: usize,
    /// Radius of U (nonprecompact).
    #[arg(long, default_value_t = 0.5)]
    pub u_radius: f64,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct CoverArgs {
    #[arg(long)]
    pub instance: String,
    #[arg(long)]
    pub radius: f64,
    #[arg(long, default_value_t = 1000)]
    pub cloud: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub instance_spec: String,
    pub config: Value,
    pub seed: Option<u64>,
    pub artifact_paths: Vec<String>,
    pub exit_code: i32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Gyro(GyroError),
}

impl From<GyroError> for CliError {
    fn from(e: GyroError) -> Self {
        CliError::Gyro(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Gyro(
                GyroError::Format(_) | GyroError::Json(_) | GyroError::Csv(_) | GyroError::Io(_),
            ) => EXIT_FORMAT,
            CliError::Gyro(_) => EXIT_VERDICT,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage: {m}"),
            CliError::Gyro(e) => write!(f, "{e}"),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn usage<T>(m: impl Into<String>) -> CliResult<T> {
    Err(CliError::Usage(m.into()))
}

/// Artifacts of a finished command, written only after it succeeds.
struct Outcome {
    files: Vec<(String, String)>,
    passed: bool,
    config: Value,
    lines: Vec<String>,
}

/// Carriers reachable from an instance string, with element parsing.
pub trait CliCarrier: Gyrogroup {
    fn parse_list(&self, s: &str) -> crate::Result<Vec<Self::Element>>;
}

fn split(s: &str, sep: char) -> impl Iterator<Item = &str> {
    s.split(sep).map(str::trim).filter(|t| !t.is_empty())
}

impl CliCarrier for MobiusDisk {
    fn parse_list(&self, s: &str) -> crate::Result<Vec<MobiusPoint>> {
        split(s, ',')
            .map(|t| MobiusPoint::new(parse_complex(t)?))
            .collect()
    }
}

impl CliCarrier for EinsteinBall {
    fn parse_list(&self, s: &str) -> crate::Result<Vec<crate::instances::EinsteinVec>> {
        split(s, ';')
            .map(|t| self.vector(parse_vector(t)?))
            .collect()
    }
}

impl CliCarrier for TableGyro {
    fn parse_list(&self, s: &str) -> crate::Result<Vec<usize>> {
        split(s, ',')
            .map(|t| {
                let i: usize = t
                    .parse()
                    .map_err(|_| GyroError::Format(format!("'{t}' is not an element index")))?;
                if i >= self.order() {
                    return Err(GyroError::domain(format!(
                        "index {i} ≥ order {}",
                        self.order()
                    )));
                }
                Ok(i)
            })
            .collect()
    }
}

impl CliCarrier for Integers {
    fn parse_list(&self, s: &str) -> crate::Result<Vec<i64>> {
        split(s, ',')
            .map(|t| {
                t.parse()
                    .map_err(|_| GyroError::Format(format!("'{t}' is not an integer")))
            })
            .collect()
    }
}

pub enum Carrier {
    Mobius(MobiusDisk),
    Einstein(EinsteinBall),
    Table(TableGyro),
    Integers(Integers),
}

macro_rules! with_carrier {
    ($carrier:expr, $g:ident => $body:expr) => {
        match $carrier {
            Carrier::Mobius($g) => $body,
            Carrier::Einstein($g) => $body,
            Carrier::Table($g) => $body,
            Carrier::Integers($g) => $body,
        }
    };
}

/// Parses `mobius`, `einstein:c=<real>`, `table:<path>`, `group:<path>` or
/// `integers`.
pub fn parse_instance(spec: &str) -> CliResult<Carrier> {
    let (kind, arg) = spec.split_once(':').unwrap_or((spec, ""));
    match (kind, arg) {
        ("mobius", "") => Ok(Carrier::Mobius(MobiusDisk::new())),
        ("integers", "") => Ok(Carrier::Integers(Integers::new())),
        ("einstein", rest) => {
            let c = match rest {
                "" => 1.0,
                r => r
                    .strip_prefix("c=")
                    .and_then(|v| v.parse::<f64>().ok())
                    .ok_or_else(|| CliError::Usage(format!("bad einstein parameter '{r}'")))?,
            };
            EinsteinBall::new(c)
                .map(Carrier::Einstein)
                .map_err(|e| CliError::Usage(e.to_string()))
        }
        ("table", path) if !path.is_empty() => Ok(Carrier::Table(TableGyro::load(path)?)),
        ("group", path) if !path.is_empty() => {
            let text = fs::read_to_string(path).map_err(GyroError::from)?;
            let file: TableFile = serde_json::from_str(&text)
                .map_err(|e| GyroError::Format(format!("table JSON: {e}")))?;
            if file.gyr.is_some() {
                return Err(
                    GyroError::Format("a group table must not declare gyrations".into()).into(),
                );
            }
            Ok(Carrier::Table(TableGyro::from_file(file)?))
        }
        _ => usage(format!(
            "unknown instance '{spec}'; expected mobius, einstein:c=<real>, table:<path>, \
             group:<path> or integers"
        )),
    }
}

fn to_json<T: Serialize>(v: &T) -> CliResult<String> {
    let mut s = serde_json::to_string_pretty(v).map_err(GyroError::from)?;
    s.push('\n');
    Ok(s)
}

fn points_csv<T: crate::io::PointRecord>(points: &[T]) -> CliResult<String> {
    let mut buf = Vec::new();
    write_points(&mut buf, points)?;
    String::from_utf8(buf).map_err(|e| GyroError::Format(e.to_string()).into())
}

fn axioms_on<G: CliCarrier>(g: &G, a: &AxiomsArgs) -> CliResult<Outcome> {
    if a.samples == 0 {
        return usage("--samples must be at least 1");
    }
    let mut reports: Vec<AxiomReport> = check_all(g, a.samples, a.tol, a.seed)?;
    if g.declared_norm(&g.identity()).is_some() && !g.is_exact() {
        reports.push(check_strong_ball_invariance(
            g,
            &INVARIANCE_RADII,
            a.samples,
            a.tol,
            a.seed,
        )?);
    }
    Ok(axiom_outcome(
        g.name(),
        reports,
        json!({ "samples": a.samples, "tol": a.tol }),
    ))
}

fn axiom_outcome(name: String, reports: Vec<AxiomReport>, config: Value) -> Outcome {
    let passed = reports.iter().all(|r| r.passed());
    let lines = reports
        .iter()
        .map(|r| {
            format!(
                "{:<28} residual {:.3e}  {}",
                r.axiom,
                r.residual,
                if r.passed() { "pass" } else { "FAIL" }
            )
        })
        .collect();
    let body = json!({ "instance": name, "passed": passed, "reports": reports });
    Outcome {
        files: vec![("axioms.json".into(), to_json(&body).unwrap_or_default())],
        passed,
        config,
        lines,
    }
}

fn cmd_axioms(a: &AxiomsArgs) -> CliResult<Outcome> {
    match parse_instance(&a.instance)? {
        Carrier::Table(t) => {
            let v = validate_table(&t);
            Ok(axiom_outcome(
                t.name(),
                v.checks,
                json!({ "exhaustive": true }),
            ))
        }
        c => with_carrier!(c, g => axioms_on(&g, a)),
    }
}

fn words_eval<G: CliCarrier>(g: &G, w: &WordSpec, leaves: &str, tol: f64) -> CliResult<Value> {
    let values = g.parse_list(leaves)?;
    let value = eval_word(g, w, &values)?;
    let n = w.len();
    let assignment: Vec<G::Element> = w.leaves.iter().map(|&i| values[i].clone()).collect();
    let mut bracketings = Vec::new();
    let mut computed: Vec<G::Element> = Vec::new();
    for tree in enumerate_trees(n)? {
        let rendered = tree.render();
        let spec = WordSpec::new(w.signs.clone(), w.leaves.clone(), tree)?;
        match eval_word(g, &spec, &values) {
            Ok(v) => {
                bracketings.push(json!({ "word": spec.to_string(), "tree": rendered, "value": v }));
                computed.push(v);
            }
            Err(e) => bracketings.push(json!({ "word": spec.to_string(), "error": e.to_string() })),
        }
    }
    let mut gap = 0.0f64;
    for (i, x) in computed.iter().enumerate() {
        for y in &computed[i + 1..] {
            gap = gap.max(g.distance(x, y));
        }
    }
    let r = r_set(g, &w.signs, &assignment, tol)?;
    Ok(json!({
        "word": w.to_string(),
        "value": value,
        "bracketings": bracketings,
        "r_set_size": r.len(),
        "gap": gap,
    }))
}

fn cmd_words(a: &WordsArgs) -> CliResult<Outcome> {
    let mut body = serde_json::Map::new();
    let mut lines = Vec::new();
    if a.n.is_none() && a.eval.is_none() {
        return usage("give --n (with optional --list) or --eval");
    }
    if let Some(n) = a.n {
        if n == 0 {
            return usage("--n must be at least 1");
        }
        let count = tree_count(n);
        body.insert("n".into(), json!(n));
        body.insert("tree_count".into(), json!(count));
        lines.push(format!("{count} bracketings of {n} leaves"));
        if a.list {
            let trees: Vec<String> = enumerate_trees(n)?.iter().map(|t| t.render()).collect();
            lines.extend(trees.iter().cloned());
            body.insert("trees".into(), json!(trees));
        }
    } else if a.list {
        return usage("--list needs --n");
    }
    if let Some(text) = &a.eval {
        let w: WordSpec = text
            .parse()
            .map_err(|e: GyroError| CliError::Usage(format!("malformed word: {e}")))?;
        let (Some(inst), Some(leaves)) = (&a.instance, &a.leaves) else {
            return usage("--eval needs --instance and --leaves");
        };
        let carrier = parse_instance(inst)?;
        let eval = with_carrier!(carrier, g => words_eval(&g, &w, leaves, a.tol))?;
        lines.push(format!("value {}", eval["value"]));
        lines.push(format!(
            "R-set size {} over {} bracketings, gap {:.6e}",
            eval["r_set_size"],
            eval["bracketings"].as_array().map_or(0, |b| b.len()),
            eval["gap"].as_f64().unwrap_or(0.0)
        ));
        body.insert("evaluation".into(), eval);
    }
    Ok(Outcome {
        files: vec![("words.json".into(), to_json(&Value::Object(body))?)],
        passed: true,
        config: json!({ "n": a.n, "list": a.list, "eval": a.eval, "leaves": a.leaves }),
        lines,
    })
}

fn cover_on<G: CliCarrier>(g: &G, a: &CoverArgs) -> CliResult<Outcome> {
    let radius = if a.radius == 0.0 && g.is_exact() {
        DISCRETE_RADIUS
    } else {
        a.radius
    };
    if !(radius > 0.0) {
        return usage(format!("--radius {} must be positive", a.radius));
    }
    if a.cloud == 0 {
        return usage("--cloud must be at least 1");
    }
    let ball = Ball::at_identity(g, radius)?;
    let cloud = SampleCloud::for_carrier(g, a.cloud, a.seed)?;
    let w = precompact_witness(g, &ball, &cloud, &Candidates::FromCloud)?;
    let lines = vec![format!(
        "|F| = {} covers {:.4} of {} points at radius {radius}",
        w.f.len(),
        w.covered_fraction,
        w.cloud_size
    )];
    Ok(Outcome {
        files: vec![("cover.json".into(), to_json(&w)?)],
        passed: w.complete(),
        config: json!({ "radius": radius, "cloud": a.cloud }),
        lines,
    })
}

fn cmd_cover(a: &CoverArgs) -> CliResult<Outcome> {
    let carrier = parse_instance(&a.instance)?;
    with_carrier!(carrier, g => cover_on(&g, a))
}

fn schedule(a: &SuitableArgs, compact: bool) -> CliResult<Vec<f64>> {
    if let Some(r) = &a.radii {
        return split(r, ',')
            .map(|t| {
                t.parse::<f64>()
                    .map_err(|_| CliError::Usage(format!("bad radius '{t}'")))
            })
            .collect();
    }
    if compact {
        Ok(ConstructionConfig::halving_schedule(a.r0, a.min_radius))
    } else {
        Ok((0..a.steps).map(|k| a.r0 * 0.5f64.powi(k as i32)).collect())
    }
}

fn config(a: &SuitableArgs, compact: bool) -> CliResult<ConstructionConfig> {
    let d = ConstructionConfig::default();
    let radius_schedule = schedule(a, compact)?;
    let cfg = ConstructionConfig {
        word_cap: a.word_cap.unwrap_or(radius_schedule.len() + 1),
        radius_schedule,
        cloud_size: a.cloud.unwrap_or(d.cloud_size),
        seed: a.seed,
        density_delta: a.eps.unwrap_or(d.density_delta),
        density_threshold: a.threshold.unwrap_or(d.density_threshold),
        ..d
    };
    cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(cfg)
}

fn suitable_outcome<E>(r: &SuitableSetResult<E>) -> CliResult<Outcome>
where
    E: Serialize + crate::io::PointRecord,
{
    let lines = vec![
        format!(
            "method {} on {}: |S| = {}",
            r.method,
            r.carrier,
            r.points.len()
        ),
        format!(
            "density {:.4} at {}, min separation {:.3e}, steps {}",
            r.density_report.fraction,
            r.density_report.delta,
            r.separation_report.min_separation,
            r.trace.len()
        ),
        format!("verified: {}", r.verified),
    ];
    Ok(Outcome {
        files: vec![
            ("suitable.json".into(), to_json(r)?),
            ("points.csv".into(), points_csv(&r.points)?),
        ],
        passed: r.verified,
        config: serde_json::to_value(&r.config).map_err(GyroError::from)?,
        lines,
    })
}

fn table_list(t: &TableGyro, s: &Option<String>, flag: &str) -> CliResult<Vec<usize>> {
    match s {
        Some(s) => Ok(t.parse_list(s)?),
        None => usage(format!("--{flag} is required")),
    }
}

fn continuous_suitable<G: CliCarrier>(
    g: &G,
    a: &SuitableArgs,
    default_gens: &str,
) -> CliResult<Outcome>
where
    G::Element: Serialize,
{
    let gens = g.parse_list(a.generators.as_deref().unwrap_or(default_gens))?;
    let r = match a.method.as_str() {
        "precompact" => suitable_precompact_disk(g, &gens, &config(a, false)?)?,
        "compact" => suitable_compact_metrizable(g, Some(&gens), &config(a, true)?)?,
        "nonprecompact" => suitable_nonprecompact(g, a.u_radius, a.budget, &config(a, false)?)?,
        m => {
            return usage(format!(
                "method {m} needs a table carrier; on {} use precompact or compact",
                g.name()
            ))
        }
    };
    suitable_outcome(&r)
}

fn cmd_suitable(a: &SuitableArgs) -> CliResult<Outcome> {
    const METHODS: [&str; 6] = [
        "finite",
        "countable-trace",
        "precompact",
        "extend",
        "compact",
        "nonprecompact",
    ];
    if !METHODS.contains(&a.method.as_str()) {
        return usage(format!(
            "unknown method '{}'; expected one of {METHODS:?}",
            a.method
        ));
    }
    match parse_instance(&a.instance)? {
        Carrier::Table(t) => {
            let r = match a.method.as_str() {
                "finite" => suitable_finite(&t)?,
                "countable-trace" => {
                    let e = match &a.enumeration {
                        Some(s) => t.parse_list(s)?,
                        None => (0..t.order()).collect(),
                    };
                    suitable_countable_trace(&t, &e)?
                }
                "extend" => {
                    let h = table_list(&t, &a.subgroup, "subgroup")?;
                    let s_h = match &a.subgroup_generators {
                        Some(s) => t.parse_list(s)?,
                        None => Vec::new(),
                    };
                    match &a.enumeration {
                        Some(s) => extend_via_enumeration(&t, &h, &s_h, &t.parse_list(s)?)?,
                        None => extend_via_open_subgyro(&t, &h, &s_h)?,
                    }
                }
                "compact" => suitable_compact_metrizable(&t, None, &config(a, true)?)?,
                m => {
                    return usage(format!(
                        "method {m} does not apply to the finite carrier {}; use finite, \
                         countable-trace, extend or compact",
                        t.name()
                    ))
                }
            };
            suitable_outcome(&r)
        }
        Carrier::Integers(z) => match a.method.as_str() {
            "nonprecompact" => {
                let r = suitable_nonprecompact(&z, a.u_radius, a.budget, &config(a, false)?)?;
                suitable_outcome(&r)
            }
            m => usage(format!(
                "method {m} does not apply to integers; use nonprecompact"
            )),
        },
        Carrier::Mobius(d) => continuous_suitable(&d, a, "0.5,0.5i"),
        Carrier::Einstein(b) => {
            let h = 0.5 * b.c();
            let default = format!("{h},0,0;0,{h},0;0,0,{h}");
            continuous_suitable(&b, a, &default)
        }
    }
}

fn write_all(out: &Path, manifest: &mut RunManifest, files: &[(String, String)]) -> CliResult<()> {
    fs::create_dir_all(out).map_err(GyroError::from)?;
    for (name, contents) in files {
        let path = out.join(name);
        fs::write(&path, contents).map_err(GyroError::from)?;
        manifest.artifact_paths.push(path.display().to_string());
    }
    let text = to_json(manifest)?;
    fs::write(out.join("manifest.json"), text).map_err(GyroError::from)?;
    Ok(())
}

/// Parses `args` (including the program name), runs one command and
/// returns its exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_PASS
            };
            let _ = e.print();
            return code;
        }
    };
    let (name, instance, seed, out, result) = match &cli.command {
        Command::Axioms(a) => (
            "axioms",
            a.instance.clone(),
            Some(a.seed),
            &a.out,
            cmd_axioms(a),
        ),
        Command::Words(a) => (
            "words",
            a.instance.clone().unwrap_or_default(),
            None,
            &a.out,
            cmd_words(a),
        ),
        Command::Suitable(a) => (
            "suitable",
            a.instance.clone(),
            Some(a.seed),
            &a.out,
            cmd_suitable(a),
        ),
        Command::Cover(a) => (
            "cover",
            a.instance.clone(),
            Some(a.seed),
            &a.out,
            cmd_cover(a),
        ),
    };
    let mut manifest = RunManifest {
        command: name.to_string(),
        instance_spec: instance,
        config: Value::Null,
        seed,
        artifact_paths: Vec::new(),
        exit_code: EXIT_PASS,
        error: None,
    };
    match result {
        Ok(outcome) => {
            manifest.config = outcome.config;
            manifest.exit_code = if outcome.passed {
                EXIT_PASS
            } else {
                EXIT_VERDICT
            };
            for line in &outcome.lines {
                println!("{line}");
            }
            if let Err(e) = write_all(out, &mut manifest, &outcome.files) {
                eprintln!("gyrolab: {e}");
                return e.exit_code();
            }
            manifest.exit_code
        }
        Err(e) => {
            eprintln!("gyrolab: {e}");
            manifest.exit_code = e.exit_code();
            manifest.error = Some(e.to_string());
            let _ = write_all(out, &mut manifest, &[]);
            manifest.exit_code
        }
    }
}
