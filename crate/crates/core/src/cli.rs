//! Command-line front end: `generate`, `cluster`, `eval` and `diagnose`.
//!
//! Every command that writes files also writes a `manifest.json` next to
//! them recording the resolved parameters, inputs, outputs and stage
//! timings. `cluster --from-manifest` replays a recorded run.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::datasets::{generate, ShapeKind, ShapeSpec};
use crate::eval::{accuracy, GapReport};
use crate::io::{json_f64, load_csv, load_csv_with_labels, load_labels, save_csv, save_labels};
use crate::params::{ClusterCount, Eta, Params, WeightMode};
use crate::pipeline::{run_detailed, Run};

pub const MANIFEST: &str = "manifest.json";
pub const RESULT: &str = "result.json";

#[derive(Debug, Parser)]
#[command(
    name = "lapd",
    version,
    about = "Multi-manifold clustering with largest angle path distances"
)]
pub struct Cli {
    /// Worker threads for the parallel stages (0 = one per core).
    #[arg(long, default_value_t = 0, global = true)]
    pub threads: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample a synthetic dataset with ground truth labels.
    Generate(GenerateArgs),
    /// Cluster a point CSV.
    Cluster(ClusterArgs),
    /// Score predicted labels against truth.
    Eval(EvalArgs),
    /// Within/between path-distance gaps before and after denoising.
    Diagnose(DiagnoseArgs),
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long)]
    pub kind: ShapeKind,
    #[arg(long)]
    pub d: usize,
    /// Ambient dimension.
    #[arg(long = "D")]
    pub ambient: usize,
    #[arg(long)]
    pub n: usize,
    /// Intersection angle in radians.
    #[arg(long, default_value_t = std::f64::consts::FRAC_PI_2)]
    pub theta: f64,
    #[arg(long, default_value_t = 0.0)]
    pub sigma: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

/// Flags mirroring [`Params`]. Values given here override `--params`.
#[derive(Debug, Args, Default, Clone)]
pub struct ParamArgs {
    /// Config file of `key = value` lines (as written to `params.cfg`).
    #[arg(long)]
    pub params: Option<PathBuf>,
    /// Intrinsic dimension.
    #[arg(long)]
    pub d: Option<usize>,
    /// Noise level; 0 for noiseless data.
    #[arg(long)]
    pub tau: Option<f64>,
    /// Minimal simplex edge (default sqrt(2) tau).
    #[arg(long)]
    pub e: Option<f64>,
    /// Edge ratio; valid edges lie in [e, e/q].
    #[arg(long)]
    pub q: Option<f64>,
    /// Volume distortion floor; 0 disables the volume filter.
    #[arg(long)]
    pub r0: Option<f64>,
    /// Annular neighbors per point.
    #[arg(long = "B", alias = "b")]
    pub b: Option<usize>,
    /// Rank of the kNN path distance used for denoising.
    #[arg(long)]
    pub kappa: Option<usize>,
    /// Denoising threshold, or `auto` for the elbow rule.
    #[arg(long)]
    pub eta: Option<Eta>,
    /// Scales in the merge profile.
    #[arg(long)]
    pub k: Option<usize>,
    /// Cluster count, or `auto` for the persistence estimate.
    #[arg(long)]
    pub m: Option<ClusterCount>,
    /// `one-sided` or `two-sided`.
    #[arg(long)]
    pub weight_mode: Option<WeightMode>,
    /// Weight floor.
    #[arg(long)]
    pub delta: Option<f64>,
    /// Components up to max(1, ceil(nu |S|)) simplices are trivial.
    #[arg(long)]
    pub nu: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct ClusterArgs {
    /// Point CSV; taken from the manifest with `--from-manifest`.
    #[arg(long)]
    pub points: Option<PathBuf>,
    /// Optional truth labels; adds gap reports to the result.
    #[arg(long)]
    pub labels: Option<PathBuf>,
    #[command(flatten)]
    pub params: ParamArgs,
    /// Replay the inputs and parameters recorded in a cluster manifest.
    #[arg(long)]
    pub from_manifest: Option<PathBuf>,
    /// Merge events of the pre-denoising dendrogram, one per line.
    #[arg(long)]
    pub dump_dendrogram: Option<PathBuf>,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long)]
    pub pred: PathBuf,
    #[arg(long)]
    pub truth: PathBuf,
    /// Manifest to record the accuracy in; created if missing.
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DiagnoseArgs {
    #[arg(long)]
    pub points: PathBuf,
    #[arg(long)]
    pub labels: PathBuf,
    #[command(flatten)]
    pub params: ParamArgs,
    /// Directory for `diagnose.json` and a manifest.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub stage: String,
    pub ms: f64,
}

/// Provenance record written next to every output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub version: String,
    /// Resolved parameters as config key/value pairs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<BTreeMap<String, String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spec: Option<ShapeSpec>,
    #[serde(default)]
    pub inputs: BTreeMap<String, PathBuf>,
    #[serde(default)]
    pub outputs: BTreeMap<String, PathBuf>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub threads: usize,
    #[serde(default)]
    pub timings: Vec<Timing>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub accuracy: Option<f64>,
}

impl RunManifest {
    pub fn new(command: &str, threads: usize) -> Self {
        RunManifest {
            command: command.into(),
            version: env!("CARGO_PKG_VERSION").into(),
            params: None,
            spec: None,
            inputs: BTreeMap::new(),
            outputs: BTreeMap::new(),
            seed: 0,
            threads,
            timings: Vec::new(),
            accuracy: None,
        }
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| crate::Error::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| CliError::Json(path.to_path_buf(), e))
    }

    /// Parameters recorded in the manifest.
    pub fn params(&self) -> Result<Option<Params>, CliError> {
        let Some(map) = &self.params else {
            return Ok(None);
        };
        let text: String = map.iter().map(|(k, v)| format!("{k} = {v}\n")).collect();
        Params::from_config(&text)
            .map(Some)
            .map_err(CliError::Usage)
    }
}

fn params_map(p: &Params) -> BTreeMap<String, String> {
    p.to_config()
        .lines()
        .filter_map(|l| l.split_once(" = "))
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect()
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Lib(#[from] crate::Error),
    #[error("{0}: {1}")]
    Json(PathBuf, serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

impl ParamArgs {
    /// Merges `base` (a config file or manifest), then the flags.
    pub fn to_params(&self, base: Option<Params>) -> Result<Params, CliError> {
        let mut p = match (&self.params, base) {
            (Some(path), _) => Some(Params::load(path)?),
            (None, base) => base,
        }
        .unwrap_or_default();
        let set = |slot: &mut Option<_>, v: Option<_>| {
            if v.is_some() {
                *slot = v;
            }
        };
        if let Some(d) = self.d {
            p.d = d;
        }
        set(&mut p.tau, self.tau);
        set(&mut p.e, self.e);
        set(&mut p.q, self.q);
        set(&mut p.r0, self.r0);
        if self.b.is_some() {
            p.b = self.b;
        }
        if self.kappa.is_some() {
            p.kappa = self.kappa;
        }
        if self.eta.is_some() {
            p.eta = self.eta;
        }
        if self.k.is_some() {
            p.k = self.k;
        }
        if self.m.is_some() {
            p.m = self.m;
        }
        if self.weight_mode.is_some() {
            p.weight_mode = self.weight_mode;
        }
        set(&mut p.delta, self.delta);
        set(&mut p.nu, self.nu);
        if self.seed.is_some() {
            p.seed = self.seed;
        }
        if p.d == 0 {
            return Err(CliError::Usage(
                "--d is required: intrinsic dimension estimation is not supported".into(),
            ));
        }
        if p.tau.is_none() && p.e.is_none() {
            return Err(CliError::Usage(
                "pass --tau (0 for noiseless data) or --e: noise level estimation is not supported"
                    .into(),
            ));
        }
        Ok(p)
    }
}

/// Parses `args` and runs the command, printing errors to stderr.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

pub fn execute(cli: &Cli) -> Result<(), CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build()
        .map_err(|e| CliError::Usage(format!("--threads: {e}")))?;
    pool.install(|| match &cli.command {
        Command::Generate(a) => cmd_generate(a, cli.threads),
        Command::Cluster(a) => cmd_cluster(a, cli.threads),
        Command::Eval(a) => cmd_eval(a, cli.threads),
        Command::Diagnose(a) => cmd_diagnose(a, cli.threads),
    })
}

/// Writes `text` through a temporary file so readers never see a partial
/// document.
fn write_atomic(path: &Path, text: &str) -> Result<(), CliError> {
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, text).map_err(|e| crate::Error::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| crate::Error::io(path, e))?;
    Ok(())
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut text =
        serde_json::to_string_pretty(value).map_err(|e| CliError::Json(path.to_path_buf(), e))?;
    text.push('\n');
    write_atomic(path, &text)
}

fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| crate::Error::io(dir, e).into())
}

pub fn cmd_generate(a: &GenerateArgs, threads: usize) -> Result<(), CliError> {
    let spec = ShapeSpec {
        kind: a.kind,
        d: a.d,
        ambient: a.ambient,
        n: a.n,
        theta: a.theta,
        sigma: a.sigma,
        seed: a.seed,
    };
    let cloud = generate(&spec)?;
    ensure_dir(&a.out)?;
    let (points, labels) = (a.out.join("points.csv"), a.out.join("labels.txt"));
    save_csv(&cloud, &points)?;
    save_labels(cloud.truth().expect("generated truth"), &labels)?;
    let mut m = RunManifest::new("generate", threads);
    m.spec = Some(spec);
    m.seed = a.seed;
    m.outputs.insert("points".into(), points);
    m.outputs.insert("labels".into(), labels);
    write_json(&a.out.join(MANIFEST), &m)?;
    println!(
        "wrote {} points in R^{} to {}",
        cloud.len(),
        cloud.dim(),
        a.out.display()
    );
    Ok(())
}

fn load_points(points: &Path, labels: Option<&Path>) -> Result<crate::PointCloud, CliError> {
    Ok(match labels {
        Some(l) => load_csv_with_labels(points, l)?,
        None => load_csv(points)?,
    })
}

fn timings(run: &Run) -> Vec<Timing> {
    run.timings
        .iter()
        .map(|t| Timing {
            stage: t.stage.to_string(),
            ms: t.ms,
        })
        .collect()
}

fn print_timings(run: &Run) {
    let total: f64 = run.timings.iter().map(|t| t.ms).sum();
    for t in &run.timings {
        println!("  {:<13}{:>10.1} ms", t.stage, t.ms);
    }
    println!("  {:<13}{:>10.1} ms", "total", total);
}

pub fn cmd_cluster(a: &ClusterArgs, threads: usize) -> Result<(), CliError> {
    let replay = a
        .from_manifest
        .as_deref()
        .map(RunManifest::load)
        .transpose()?;
    let (mut points, mut labels, mut base) = (a.points.clone(), a.labels.clone(), None);
    if let Some(m) = &replay {
        points = points.or_else(|| m.inputs.get("points").cloned());
        labels = labels.or_else(|| m.inputs.get("labels").cloned());
        base = m.params()?;
    }
    let points = points
        .ok_or_else(|| CliError::Usage("--points is required without --from-manifest".into()))?;
    let params = a.params.to_params(base)?;
    let cloud = load_points(&points, labels.as_deref())?;
    let run = run_detailed(&cloud, &params)?;

    ensure_dir(&a.out)?;
    let mut m = RunManifest::new("cluster", threads);
    m.params = Some(params_map(&run.params));
    m.seed = run.settings.seed;
    m.inputs.insert("points".into(), points);
    if let Some(l) = labels {
        m.inputs.insert("labels".into(), l);
    }
    m.timings = timings(&run);
    if let Some(path) = &a.dump_dendrogram {
        run.dendrogram.write_dump(path)?;
        m.outputs.insert("dendrogram".into(), path.clone());
    }
    let cfg = a.out.join("params.cfg");
    write_atomic(&cfg, &run.params.to_config())?;
    let pred = a.out.join("labels.txt");
    save_labels(&run.result.point_labels, &pred)?;
    let result = a.out.join(RESULT);
    write_json(&result, &run.result)?;
    m.outputs.insert("params".into(), cfg);
    m.outputs.insert("labels".into(), pred);
    m.outputs.insert("result".into(), result);
    write_json(&a.out.join(MANIFEST), &m)?;

    let r = &run.result;
    println!("m_hat {}", r.m_hat);
    println!("survivors {} of {} simplices", r.survivors, r.simplex_count);
    println!("e {:.6}  eta {:.6}", r.e, r.eta);
    print_timings(&run);
    Ok(())
}

pub fn cmd_eval(a: &EvalArgs, threads: usize) -> Result<(), CliError> {
    let pred = load_labels(&a.pred)?;
    let truth = load_labels(&a.truth)?;
    let acc = accuracy(&pred, &truth)?;
    println!("{acc:.4}");
    if let Some(path) = &a.manifest {
        let mut m = if path.exists() {
            RunManifest::load(path)?
        } else {
            RunManifest::new("eval", threads)
        };
        m.inputs.insert("pred".into(), a.pred.clone());
        m.inputs.insert("truth".into(), a.truth.clone());
        m.accuracy = Some(acc);
        write_json(path, &m)?;
    }
    Ok(())
}

/// Output of `diagnose`.
#[derive(Clone, Debug, Serialize)]
pub struct Diagnosis {
    pub before: GapReport,
    pub after: GapReport,
    #[serde(with = "json_f64")]
    pub eta: f64,
    /// Min, quartiles and max of the kNN distances.
    #[serde(serialize_with = "json_f64::seq::serialize")]
    pub knn_quantiles: Vec<f64>,
    pub simplex_count: usize,
    pub survivors: usize,
    pub m_hat: usize,
}

impl Diagnosis {
    pub fn from_run(run: &Run) -> Option<Self> {
        let r = &run.result;
        Some(Diagnosis {
            before: r.gap_before.clone()?,
            after: r.gap_after.clone()?,
            eta: r.eta,
            knn_quantiles: r.knn_quantiles.clone(),
            simplex_count: r.simplex_count,
            survivors: r.survivors,
            m_hat: r.m_hat,
        })
    }
}

pub fn cmd_diagnose(a: &DiagnoseArgs, threads: usize) -> Result<(), CliError> {
    let params = a.params.to_params(None)?;
    let cloud = load_points(&a.points, Some(&a.labels))?;
    let run = run_detailed(&cloud, &params)?;
    let diag = Diagnosis::from_run(&run).expect("truth labels were loaded");
    let g = |v: f64| crate::io::fmt_g17(v);
    println!(
        "wlapd before {}  after {}",
        g(diag.before.wlapd),
        g(diag.after.wlapd)
    );
    println!(
        "blapd before {}  after {}",
        g(diag.before.blapd),
        g(diag.after.blapd)
    );
    println!("eta {}", g(diag.eta));
    let q: Vec<String> = diag.knn_quantiles.iter().map(|&v| g(v)).collect();
    println!("knn quantiles {}", q.join(" "));
    if let Some(dir) = &a.out {
        ensure_dir(dir)?;
        let doc = dir.join("diagnose.json");
        write_json(&doc, &diag)?;
        let mut m = RunManifest::new("diagnose", threads);
        m.params = Some(params_map(&run.params));
        m.seed = run.settings.seed;
        m.inputs.insert("points".into(), a.points.clone());
        m.inputs.insert("labels".into(), a.labels.clone());
        m.outputs.insert("diagnosis".into(), doc);
        m.timings = timings(&run);
        write_json(&dir.join(MANIFEST), &m)?;
    }
    Ok(())
}
