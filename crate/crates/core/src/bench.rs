//! Monte Carlo benchmark: named scene presets × detectors × replications.
//!
//! Replication r of a setting draws its scene from a seed derived from
//! (base seed, setting label, r), so results depend neither on scheduling
//! nor on which other settings share the grid.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;

use crate::csr::CsrContext;
use crate::dataset::Dataset;
use crate::detect::{cluster_model, clustering_ccd, default_s_min, label_outliers, DetectConfig, Detector};
use crate::error::{Error, Result};
use crate::geometry::distance_matrix;
use crate::metrics::{confusion, scores, Scores};
use crate::rng::derive_seed;
use crate::synth::{focus_centers, gen_neyman_scott, gen_scene, ClusterKind, OutlierRule, ProcessKind, ProcessSpec, SceneSpec};

/// Small-cluster threshold for the Neyman–Scott presets, as a fraction of n.
pub const PROCESS_S_MIN_FRACTION: f64 = 0.04;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Preset {
    UniGeneral,
    GauGeneral,
    UniClusters,
    GauClusters,
    UniContamination,
    GauContamination,
    GauNoise,
    Collective,
    Matern,
    Thomas,
    Mixed,
}

impl Preset {
    pub const ALL: [Preset; 11] = [
        Preset::UniGeneral,
        Preset::GauGeneral,
        Preset::UniClusters,
        Preset::GauClusters,
        Preset::UniContamination,
        Preset::GauContamination,
        Preset::GauNoise,
        Preset::Collective,
        Preset::Matern,
        Preset::Thomas,
        Preset::Mixed,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::UniGeneral => "uni-general",
            Preset::GauGeneral => "gau-general",
            Preset::UniClusters => "uni-clusters",
            Preset::GauClusters => "gau-clusters",
            Preset::UniContamination => "uni-contamination",
            Preset::GauContamination => "gau-contamination",
            Preset::GauNoise => "gau-noise",
            Preset::Collective => "collective",
            Preset::Matern => "matern",
            Preset::Thomas => "thomas",
            Preset::Mixed => "mixed",
        }
    }

    pub fn process(self) -> Option<ProcessKind> {
        match self {
            Preset::Matern => Some(ProcessKind::Matern),
            Preset::Thomas => Some(ProcessKind::Thomas),
            Preset::Mixed => Some(ProcessKind::Mixed),
            _ => None,
        }
    }

    fn kind(self) -> ClusterKind {
        match self {
            Preset::GauGeneral | Preset::GauClusters | Preset::GauContamination | Preset::GauNoise => ClusterKind::Gaussian,
            _ => ClusterKind::Uniform,
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL.into_iter().find(|p| p.name() == s).ok_or_else(|| {
            let names: Vec<_> = Preset::ALL.iter().map(|p| p.name()).collect();
            Error::input(format!("unknown preset `{s}` (expected one of {})", names.join(", ")))
        })
    }
}

/// One cell of a benchmark grid.
#[derive(Clone, Debug, PartialEq)]
pub struct Setting {
    pub preset: Preset,
    pub d: usize,
    /// Scene size; ignored by the Neyman–Scott presets.
    pub n: usize,
    pub clusters: usize,
    pub contamination: f64,
    pub noise: f64,
    /// Offset s of the collective group center (3 + s, 3, …, 3).
    pub shift: f64,
}

impl Setting {
    pub fn new(preset: Preset, d: usize, n: usize) -> Self {
        let clusters = match preset {
            Preset::UniContamination | Preset::GauContamination => 3,
            _ => 2,
        };
        Setting { preset, d, n, clusters, contamination: 0.05, noise: 0.01, shift: 3.0 }
    }

    pub fn with_clusters(mut self, k: usize) -> Self {
        self.clusters = k;
        self
    }

    pub fn with_contamination(mut self, c: f64) -> Self {
        self.contamination = c;
        self
    }

    pub fn with_noise(mut self, noise: f64) -> Self {
        self.noise = noise;
        self
    }

    pub fn with_shift(mut self, s: f64) -> Self {
        self.shift = s;
        self
    }

    /// Stable identifier used in output and for seed derivation.
    pub fn label(&self) -> String {
        if self.preset.process().is_some() {
            return format!("{}/d{}", self.preset, self.d);
        }
        let mut s = format!("{}/d{}/n{}", self.preset, self.d, self.n);
        let base = Setting::new(self.preset, self.d, self.n);
        if self.clusters != base.clusters {
            s.push_str(&format!("/k{}", self.clusters));
        }
        if self.contamination != base.contamination {
            s.push_str(&format!("/c{}", self.contamination));
        }
        if self.noise != base.noise {
            s.push_str(&format!("/noise{}", self.noise));
        }
        if self.preset == Preset::Collective {
            s.push_str(&format!("/s{}", self.shift));
        }
        s
    }

    pub fn scene_spec(&self, seed: u64) -> Result<SceneSpec> {
        if self.preset.process().is_some() {
            return Err(Error::input(format!("{} is a point-process preset", self.preset)));
        }
        let mut spec = SceneSpec::general(self.preset.kind(), self.d, self.n, seed)?;
        spec.contamination = self.contamination;
        spec.noise_level = self.noise;
        spec.centers = focus_centers(self.d, self.clusters)?;
        if self.preset == Preset::Collective {
            let mut far = vec![3.0; self.d];
            far[0] = 9.0;
            spec.centers = vec![vec![3.0; self.d], far];
            spec.outlier_rule = OutlierRule::collective(self.d, self.shift);
        }
        Ok(spec)
    }

    pub fn generate(&self, seed: u64) -> Result<Dataset<f64>> {
        match self.preset.process() {
            Some(kind) => gen_neyman_scott(&ProcessSpec::setting(kind, self.d, seed)?),
            None => gen_scene(&self.scene_spec(seed)?),
        }
    }

    /// S_min for the flexible detectors: half the contamination for the
    /// cluster scenes, 4% of n for the point-process presets.
    pub fn s_min(&self, n: usize) -> usize {
        if self.preset.process().is_some() {
            ((PROCESS_S_MIN_FRACTION * n as f64).ceil() as usize).max(1)
        } else {
            default_s_min(self.contamination, n)
        }
    }
}

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub settings: Vec<Setting>,
    pub detectors: Vec<Detector>,
    pub reps: usize,
    pub seed: u64,
    pub detect: DetectConfig,
    pub beta: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub setting: String,
    pub detector: Detector,
    pub d: usize,
    /// Mean scene size, rounded.
    pub n: usize,
    pub reps: usize,
    pub tpr: f64,
    pub tpr_se: Option<f64>,
    pub tnr: f64,
    pub tnr_se: Option<f64>,
    pub ba: f64,
    pub f2: f64,
    pub failures: usize,
}

fn fnv1a(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

pub fn replication_seed(base: u64, setting: &Setting, rep: usize) -> u64 {
    derive_seed(base, &[fnv1a(&setting.label()), rep as u64])
}

struct RepResult {
    n: usize,
    per_detector: Vec<Result<Scores>>,
}

fn run_replication(setting: &Setting, rep: usize, cfg: &BenchConfig, ctx: &CsrContext) -> Result<RepResult> {
    let data = setting.generate(replication_seed(cfg.seed, setting, rep))?;
    let truth = data.labels().expect("generated scenes are labeled").to_vec();
    let dist = distance_matrix(&data);
    let mut detect_cfg = cfg.detect.clone();
    if detect_cfg.s_min.is_none() && detect_cfg.contamination.is_none() {
        detect_cfg.s_min = Some(setting.s_min(data.len()));
    }
    // RU/SU and UN/SUN share their clustering CCD.
    let mut ccds = Vec::new();
    let per_detector = cfg
        .detectors
        .iter()
        .map(|&det| {
            let variant = det.variant();
            let ccd = match ccds.iter().position(|(v, _)| *v == variant) {
                Some(k) => &ccds[k].1,
                None => {
                    let c = clustering_ccd(det, &data, &dist, &detect_cfg, ctx)?;
                    ccds.push((variant, c));
                    &ccds.last().unwrap().1
                }
            };
            let (model, degenerate) = cluster_model(det, &data, &dist, ccd, &detect_cfg)?;
            let report = label_outliers(&data, &dist, model, &detect_cfg, degenerate)?;
            Ok(scores(&confusion(&truth, &report.outlier)?, cfg.beta))
        })
        .collect();
    Ok(RepResult { n: data.len(), per_detector })
}

fn mean_se(v: &[f64]) -> (f64, Option<f64>) {
    let k = v.len();
    if k == 0 {
        return (f64::NAN, None);
    }
    let mean = v.iter().sum::<f64>() / k as f64;
    if k < 2 {
        return (mean, None);
    }
    let var = v.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (k - 1) as f64;
    (mean, Some((var / k as f64).sqrt()))
}

/// Runs the grid; rows follow settings, then detectors, in the given order.
pub fn run_bench(cfg: &BenchConfig, ctx: &CsrContext) -> Result<Vec<BenchRow>> {
    if cfg.reps == 0 || cfg.detectors.is_empty() || cfg.settings.is_empty() {
        return Err(Error::input("benchmark needs at least one setting, detector and replication"));
    }
    let mut rows = Vec::new();
    for setting in &cfg.settings {
        let reps: Vec<Result<RepResult>> =
            (0..cfg.reps).into_par_iter().map(|r| run_replication(setting, r, cfg, ctx)).collect();
        let sizes: Vec<usize> = reps.iter().filter_map(|r| r.as_ref().ok().map(|r| r.n)).collect();
        let n = if sizes.is_empty() {
            setting.n
        } else {
            (sizes.iter().sum::<usize>() as f64 / sizes.len() as f64).round() as usize
        };
        for (k, &det) in cfg.detectors.iter().enumerate() {
            let ok: Vec<&Scores> =
                reps.iter().filter_map(|r| r.as_ref().ok()).filter_map(|r| r.per_detector[k].as_ref().ok()).collect();
            let pick = |f: fn(&Scores) -> f64| ok.iter().map(|s| f(s)).collect::<Vec<_>>();
            let (tpr, tpr_se) = mean_se(&pick(|s| s.tpr));
            let (tnr, tnr_se) = mean_se(&pick(|s| s.tnr));
            rows.push(BenchRow {
                setting: setting.label(),
                detector: det,
                d: setting.d,
                n,
                reps: cfg.reps,
                tpr,
                tpr_se,
                tnr,
                tnr_se,
                ba: mean_se(&pick(|s| s.ba)).0,
                f2: mean_se(&pick(|s| s.f_beta)).0,
                failures: cfg.reps - ok.len(),
            });
        }
    }
    Ok(rows)
}

pub const METRICS_HEADER: &str = "setting,detector,d,n,reps,tpr,tpr_se,tnr,tnr_se,ba,f2,failures";

pub fn write_metrics_csv<W: Write>(rows: &[BenchRow], mut w: W) -> Result<()> {
    let opt = |v: Option<f64>| v.map_or(String::new(), |x| format!("{x:.6}"));
    writeln!(w, "{METRICS_HEADER}")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{:.6},{},{:.6},{},{:.6},{:.6},{}",
            r.setting,
            r.detector,
            r.d,
            r.n,
            r.reps,
            r.tpr,
            opt(r.tpr_se),
            r.tnr,
            opt(r.tnr_se),
            r.ba,
            r.f2,
            r.failures
        )?;
    }
    w.flush()?;
    Ok(())
}

/// Grouped bar chart of BA and F2 per row. Presentation only.
pub fn write_svg<W: Write>(rows: &[BenchRow], mut w: W) -> Result<()> {
    let (bar, gap, left, top, height) = (14.0, 18.0, 60.0, 20.0, 240.0);
    let width = left + rows.len() as f64 * (2.0 * bar + gap) + 20.0;
    let total = top + height + 160.0;
    writeln!(w, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{total}" font-family="sans-serif" font-size="10">"#)?;
    for k in 0..=4 {
        let v = k as f64 / 4.0;
        let y = top + height * (1.0 - v);
        writeln!(w, r##"<line x1="{left}" x2="{width}" y1="{y}" y2="{y}" stroke="#ddd"/><text x="{}" y="{}" text-anchor="end">{v:.2}</text>"##, left - 4.0, y + 3.0)?;
    }
    for (i, r) in rows.iter().enumerate() {
        let x = left + i as f64 * (2.0 * bar + gap);
        for (j, (v, color)) in [(r.ba, "#4477aa"), (r.f2, "#ee6677")].into_iter().enumerate() {
            let v = if v.is_finite() { v.clamp(0.0, 1.0) } else { 0.0 };
            let h = height * v;
            writeln!(w, r#"<rect x="{}" y="{}" width="{bar}" height="{h}" fill="{color}"/>"#, x + j as f64 * bar, top + height - h)?;
        }
        let (lx, ly) = (x + bar, top + height + 8.0);
        writeln!(w, r#"<text transform="translate({lx},{ly}) rotate(60)">{} {}</text>"#, r.detector, r.setting)?;
    }
    writeln!(w, r##"<text x="{left}" y="12"><tspan fill="#4477aa">■ BA</tspan> <tspan fill="#ee6677">■ F2</tspan></text>"##)?;
    writeln!(w, "</svg>")?;
    w.flush()?;
    Ok(())
}
