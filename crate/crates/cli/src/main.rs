//! `ccd`: generate scenes, run the CCD outlier detectors, benchmark them,
//! normalize real data and run the CSR tests from the command line.
//!
//! Exit codes: 0 success, 1 bad input (flags, files, rows), 2 runtime failure.

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use ccd_core::bench::{self, BenchConfig, Preset, Setting};
use ccd_core::csr::{self, CsrContext, CsrVerdict, KEnvelope, NndReference, RipleyParams};
use ccd_core::detect::{self, DetectConfig, Detector};
use ccd_core::metrics::{confusion, scores};
use ccd_core::rng::{stream_rng, uniform_in_unit_ball};
use ccd_core::{ccd::ScanDirection, io as dio, normalize, Dataset};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

/// Environment variable naming the directory for cached CSR reference tables.
const CACHE_ENV: &str = "CCD_CACHE_DIR";

#[derive(Parser, Debug)]
#[command(name = "ccd", version, about = "Outlier detection with cluster catch digraphs")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a synthetic labeled scene as CSV.
    Generate(GenerateArgs),
    /// Flag outliers in a CSV dataset.
    Detect(DetectArgs),
    /// Monte Carlo benchmark over a grid of presets and detectors.
    Bench(BenchArgs),
    /// Robust per-feature scaling: (x − median) / MADN.
    Normalize(NormalizeArgs),
    /// Test a point set for complete spatial randomness.
    CsrTest(CsrTestArgs),
}

#[derive(Args, Debug, Clone)]
struct SceneArgs {
    /// Extra clusters for the focus presets (default depends on the preset).
    #[arg(long)]
    clusters: Option<usize>,
    /// Outlier fraction for the cluster presets.
    #[arg(long)]
    contamination: Option<f64>,
    /// Gaussian tail fraction beyond the nominal cluster radius.
    #[arg(long)]
    noise: Option<f64>,
    /// Offset of the collective outlier group.
    #[arg(long)]
    shift: Option<f64>,
}

impl SceneArgs {
    fn setting(&self, preset: Preset, d: usize, n: usize) -> anyhow::Result<Setting> {
        if d == 0 || (preset.process().is_none() && n == 0) {
            return Err(usage("--d and --n must be positive"));
        }
        let mut s = Setting::new(preset, d, n);
        if let Some(k) = self.clusters {
            s = s.with_clusters(k);
        }
        if let Some(c) = self.contamination {
            if !(0.0..1.0).contains(&c) {
                return Err(usage(format!("--contamination must lie in [0, 1), got {c}")));
            }
            s = s.with_contamination(c);
        }
        if let Some(x) = self.noise {
            s = s.with_noise(x);
        }
        if let Some(x) = self.shift {
            s = s.with_shift(x);
        }
        Ok(s)
    }
}

#[derive(Args, Debug)]
struct GenerateArgs {
    #[arg(long)]
    preset: Preset,
    #[arg(long)]
    d: usize,
    /// Scene size (ignored by matern/thomas/mixed).
    #[arg(long, default_value_t = 200)]
    n: usize,
    #[arg(long)]
    seed: u64,
    #[command(flatten)]
    scene: SceneArgs,
    /// Output file (default: stdout).
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
struct DetectParams {
    /// CSR test level (default depends on the detector and d).
    #[arg(long)]
    alpha: Option<f64>,
    /// Starting density δ0 for the per-cluster calibration.
    #[arg(long)]
    delta0: Option<f64>,
    /// Ladder step Δ.
    #[arg(long)]
    delta_step: Option<f64>,
    /// Minimum cluster size for SU/SUN.
    #[arg(long)]
    s_min: Option<usize>,
    /// Expected outlier fraction, sets S_min = ⌈contamination·n/2⌉.
    #[arg(long = "expected-contamination")]
    expected_contamination: Option<f64>,
    /// NND reference simulations (M).
    #[arg(long, default_value_t = csr::DEFAULT_NND_SIMS)]
    nnd_sims: usize,
    /// Ripley K envelope simulations (N).
    #[arg(long, default_value_t = csr::DEFAULT_K_SIMS)]
    k_sims: usize,
    /// Scan UN radii from the largest candidate down.
    #[arg(long)]
    descending: bool,
    /// Seed of the simulated CSR reference tables.
    #[arg(long, default_value_t = csr::DEFAULT_REFERENCE_SEED)]
    reference_seed: u64,
    /// β of the F-score.
    #[arg(long, default_value_t = 2.0)]
    beta: f64,
}

impl DetectParams {
    fn config(&self) -> anyhow::Result<DetectConfig> {
        check_open_unit("--alpha", self.alpha)?;
        for (flag, v) in [("--delta0", self.delta0), ("--delta-step", self.delta_step)] {
            if let Some(v) = v {
                if !(v.is_finite() && v > 0.0) {
                    return Err(usage(format!("{flag} must be positive, got {v}")));
                }
            }
        }
        if self.s_min == Some(0) {
            return Err(usage("--s-min must be at least 1"));
        }
        if let Some(c) = self.expected_contamination {
            if !(0.0..1.0).contains(&c) {
                return Err(usage(format!("--expected-contamination must lie in [0, 1), got {c}")));
            }
        }
        if self.nnd_sims < 1 {
            return Err(usage("--nnd-sims must be at least 1"));
        }
        if self.k_sims < 20 {
            return Err(usage("--k-sims must be at least 20"));
        }
        if !(self.beta.is_finite() && self.beta > 0.0) {
            return Err(usage(format!("--beta must be positive, got {}", self.beta)));
        }
        Ok(DetectConfig {
            alpha: self.alpha,
            delta0: self.delta0,
            delta_step: self.delta_step,
            s_min: self.s_min,
            contamination: self.expected_contamination,
            ripley: RipleyParams { n_sim: self.k_sims, ..RipleyParams::default() },
            nnd_sims: self.nnd_sims,
            direction: if self.descending { ScanDirection::Descending } else { ScanDirection::Ascending },
        })
    }
}

#[derive(Args, Debug)]
struct DetectArgs {
    /// Input CSV with header x1..xd[,label].
    #[arg(short, long)]
    input: PathBuf,
    #[arg(long, default_value = "sun")]
    detector: Detector,
    #[command(flatten)]
    params: DetectParams,
    /// Labels CSV (index,outlier,cluster); default: stdout.
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Diagnostics JSON; default: stderr.
    #[arg(long)]
    diagnostics: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct BenchArgs {
    /// Comma-separated presets.
    #[arg(long, value_delimiter = ',', required = true)]
    preset: Vec<Preset>,
    /// Comma-separated dimensions.
    #[arg(long, value_delimiter = ',', required = true)]
    d: Vec<usize>,
    /// Comma-separated scene sizes (ignored by the point-process presets).
    #[arg(long, value_delimiter = ',', default_value = "200")]
    n: Vec<usize>,
    /// Comma-separated detectors.
    #[arg(long, value_delimiter = ',', default_value = "ru,su,un,sun")]
    detectors: Vec<Detector>,
    #[arg(long, default_value_t = 100)]
    reps: usize,
    #[arg(long)]
    seed: u64,
    #[command(flatten)]
    scene: SceneArgs,
    #[command(flatten)]
    params: DetectParams,
    /// Metrics CSV; default: stdout.
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Also write a BA/F2 bar chart.
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct NormalizeArgs {
    #[arg(short, long)]
    input: PathBuf,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Statistic {
    Ripley,
    Nnd,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Draw {
    /// Uniform in the unit ball.
    Csr,
    /// Uniform in a ball of radius 0.1 at the center of the unit ball.
    Clustered,
}

#[derive(Args, Debug)]
struct CsrTestArgs {
    /// Points to test; the ball is centered at their centroid.
    #[arg(short, long, conflicts_with = "generate")]
    input: Option<PathBuf>,
    /// Test a simulated draw instead of a file.
    #[arg(long, requires = "n")]
    generate: Option<Draw>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 2)]
    d: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "nnd")]
    statistic: Statistic,
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    /// Ball radius (default: just beyond the farthest point).
    #[arg(long)]
    radius: Option<f64>,
    #[arg(long, default_value_t = csr::DEFAULT_NND_SIMS)]
    nnd_sims: usize,
    #[arg(long, default_value_t = csr::DEFAULT_K_SIMS)]
    k_sims: usize,
    #[arg(long, default_value_t = csr::DEFAULT_REFERENCE_SEED)]
    reference_seed: u64,
}

/// An error caused by the caller (exit code 1).
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    Usage(msg.into()).into()
}

fn check_open_unit(flag: &str, v: Option<f64>) -> anyhow::Result<()> {
    match v {
        Some(a) if !(a > 0.0 && a < 1.0) => Err(usage(format!("{flag} must lie in (0, 1), got {a}"))),
        _ => Ok(()),
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if cause.is::<Usage>() {
            return 1;
        }
        if let Some(e) = cause.downcast_ref::<ccd_core::Error>() {
            return if e.is_input() { 1 } else { 2 };
        }
    }
    2
}

fn context_with_seed(seed: u64) -> CsrContext {
    let dir = std::env::var_os(CACHE_ENV).map(PathBuf::from).unwrap_or_else(|| std::env::temp_dir().join("ccd-cache"));
    CsrContext::new(seed).with_cache_dir(dir)
}

fn open_input(path: &Path) -> anyhow::Result<Dataset<f64>> {
    let file = File::open(path).map_err(|e| usage(format!("cannot open {}: {e}", path.display())))?;
    dio::read_dataset(BufReader::new(file)).with_context(|| format!("reading {}", path.display()))
}

fn sink(path: Option<&Path>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| usage(format!("cannot create {}: {e}", p.display())))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn cmd_generate(a: GenerateArgs) -> anyhow::Result<()> {
    let setting = a.scene.setting(a.preset, a.d, a.n)?;
    let data = setting.generate(a.seed)?;
    dio::write_dataset(&data, sink(a.output.as_deref())?)?;
    Ok(())
}

fn cmd_detect(a: DetectArgs) -> anyhow::Result<()> {
    let cfg = a.params.config()?;
    let data = open_input(&a.input)?;
    let ctx = context_with_seed(a.params.reference_seed);
    let report = detect::detect(a.detector, &data, &cfg, &ctx)?;

    let mut out = sink(a.output.as_deref())?;
    writeln!(out, "index,outlier,cluster")?;
    for (i, (&o, &c)) in report.outlier.iter().zip(&report.cluster).enumerate() {
        writeln!(out, "{i},{},{c}", u8::from(o))?;
    }
    out.flush()?;

    let model = &report.model;
    let clusters: Vec<Value> = report
        .diagnostics
        .clusters
        .iter()
        .map(|c| {
            json!({
                "size": c.size,
                "core_size": c.core_size,
                "delta0": c.delta0,
                "delta": c.delta,
                "floored": c.floored,
                "iterations": c.iterations,
            })
        })
        .collect();
    let mut diag = json!({
        "detector": a.detector.name(),
        "n": data.len(),
        "d": data.dim(),
        "alpha": model.alpha,
        "s_min": model.s_min,
        "outliers": report.outlier_count(),
        "clusters": clusters,
        "small_cluster_points": model.rejected.len(),
        "shared_coverage": model.shared_coverage,
        "fallback_assignments": model.fallback_assignments,
        "degenerate_balls": report.diagnostics.degenerate_balls,
        "straggler_policy": ccd_core::ClusterModel::<f64>::STRAGGLER_POLICY,
    });
    if let Some(truth) = data.labels() {
        let s = scores(&confusion(truth, &report.outlier)?, a.params.beta);
        diag["scores"] = json!({
            "beta": a.params.beta,
            "tpr": s.tpr,
            "tnr": s.tnr,
            "ba": s.ba,
            "precision": s.precision,
            "f_beta": s.f_beta,
            "undefined": s.undefined.any(),
        });
    }
    let text = serde_json::to_string_pretty(&diag)?;
    match &a.diagnostics {
        Some(p) => std::fs::write(p, text + "\n").map_err(|e| usage(format!("cannot write {}: {e}", p.display())))?,
        None => eprintln!("{text}"),
    }
    Ok(())
}

fn cmd_bench(a: BenchArgs) -> anyhow::Result<()> {
    if a.reps == 0 {
        return Err(usage("--reps must be at least 1"));
    }
    let detect = a.params.config()?;
    let mut settings = Vec::new();
    for &preset in &a.preset {
        for &d in &a.d {
            if preset.process().is_some() {
                settings.push(a.scene.setting(preset, d, 0)?);
            } else {
                for &n in &a.n {
                    settings.push(a.scene.setting(preset, d, n)?);
                }
            }
        }
    }
    let cfg = BenchConfig { settings, detectors: a.detectors.clone(), reps: a.reps, seed: a.seed, detect, beta: a.params.beta };
    let rows = bench::run_bench(&cfg, &context_with_seed(a.params.reference_seed))?;
    bench::write_metrics_csv(&rows, sink(a.output.as_deref())?)?;
    if let Some(p) = &a.svg {
        let f = File::create(p).map_err(|e| usage(format!("cannot create {}: {e}", p.display())))?;
        bench::write_svg(&rows, BufWriter::new(f))?;
    }
    Ok(())
}

fn cmd_normalize(a: NormalizeArgs) -> anyhow::Result<()> {
    let data = open_input(&a.input)?;
    if data.len() < 2 {
        return Err(usage("normalization needs at least two rows"));
    }
    let (scaled, scales) = normalize::normalize_med_madn(&data)?;
    for (j, s) in scales.iter().enumerate() {
        if s.constant {
            eprintln!("warning: feature x{} has zero MADN; its values are set to 0", j + 1);
        }
    }
    dio::write_dataset(&scaled, sink(a.output.as_deref())?)?;
    Ok(())
}

fn cmd_csr_test(a: CsrTestArgs) -> anyhow::Result<()> {
    if !(a.alpha > 0.0 && a.alpha <= 1.0) {
        return Err(usage(format!("--alpha must lie in (0, 1], got {}", a.alpha)));
    }
    let points: Vec<Vec<f64>> = match (&a.input, a.generate) {
        (Some(path), _) => open_input(path)?.points().map(|p| p.to_vec()).collect(),
        (None, Some(draw)) => {
            let n = a.n.unwrap_or(0);
            if n < 2 || a.d == 0 {
                return Err(usage("--n must be at least 2 and --d positive"));
            }
            let scale = if draw == Draw::Csr { 1.0 } else { 0.1 };
            let mut rng = stream_rng(a.seed, &[0x00c5_7e57]);
            let mut p = vec![0.0; a.d];
            (0..n)
                .map(|_| {
                    uniform_in_unit_ball(&mut rng, &mut p);
                    p.iter().map(|x| x * scale).collect()
                })
                .collect()
        }
        (None, None) => bail!(Usage("give --input or --generate".into())),
    };
    let n = points.len();
    let d = points[0].len();
    let center: Vec<f64> = (0..d).map(|j| points.iter().map(|p| p[j]).sum::<f64>() / n as f64).collect();
    let centered: Vec<Vec<f64>> = points.iter().map(|p| p.iter().zip(&center).map(|(x, c)| x - c).collect()).collect();
    let far = centered.iter().map(|p| p.iter().map(|x| x * x).sum::<f64>().sqrt()).fold(0.0, f64::max);
    let radius = match a.radius {
        Some(r) if r > 0.0 => r,
        Some(r) => return Err(usage(format!("--radius must be positive, got {r}"))),
        None => far * (1.0 + 1e-9),
    };
    if far > radius {
        return Err(usage(format!("points reach {far}, beyond --radius {radius}")));
    }
    if radius == 0.0 {
        return Err(usage("all points coincide"));
    }
    let verdict = match a.statistic {
        Statistic::Ripley => {
            if a.k_sims < 20 {
                return Err(usage("--k-sims must be at least 20"));
            }
            let scaled: Vec<Vec<f64>> = centered.iter().map(|p| p.iter().map(|x| x / radius).collect()).collect();
            let mut rng = stream_rng(a.reference_seed, &[d as u64, n as u64]);
            let env: KEnvelope = csr::build_k_envelope(n, d, &csr::DEFAULT_T_GRID, a.k_sims, a.alpha, &mut rng)?;
            csr::srmct_ripley(&scaled, &env)?
        }
        Statistic::Nnd => {
            let reference = NndReference::build(d, n, a.nnd_sims, a.reference_seed)?;
            csr::srmct_nnd(&centered, radius, &reference, a.alpha)?
        }
    };
    let (mean, median) = csr::nnd_stats(&centered, radius).unwrap_or((f64::NAN, f64::NAN));
    let verdict = match verdict {
        CsrVerdict::Retain => "retain",
        CsrVerdict::Reject => "reject",
        CsrVerdict::Degenerate => "degenerate",
    };
    let out = json!({
        "statistic": format!("{:?}", a.statistic).to_lowercase(),
        "n": n,
        "d": d,
        "alpha": a.alpha,
        "radius": radius,
        "mean_nnd_scaled": mean,
        "median_nnd_scaled": median,
        "verdict": verdict,
    });
    println!("{}", serde_json::to_string_pretty(&out)?);
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<()> {
    if let Some(j) = cli.jobs {
        if j == 0 {
            return Err(usage("--jobs must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new().num_threads(j).build_global().context("starting worker pool")?;
    }
    match cli.command {
        Command::Generate(a) => cmd_generate(a),
        Command::Detect(a) => cmd_detect(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Normalize(a) => cmd_normalize(a),
        Command::CsrTest(a) => cmd_csr_test(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
