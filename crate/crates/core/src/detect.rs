//! The four CCD-based outlier detectors.
//!
//! All of them share a second phase: each cluster gets its own density δ_j,
//! calibrated on its core so that the core's mutual catch graph (MCG) is
//! connected. A KS-CCD is then built at δ_j on the cluster's full
//! membership, and any non-core point whose MCG component holds no core
//! point is an outlier. RU/UN take one dominating ball per cluster as the
//! core; SU/SUN extend it through the MCG of the clustering digraph and
//! drop clusters smaller than S_min.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::ccd::{
    assign_stragglers, build_ccd, dominating_balls, extend_coverage, ks_radii, select_clusters, Candidate, Ccd, CcdVariant,
    ClusterModel, Pruning, ScanDirection, Variant,
};
use crate::csr::{CsrContext, RipleyParams, DEFAULT_NND_SIMS};
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::geometry::{distance_matrix, DistanceMatrix, NeighborOrder};
use crate::mcg::{bracket_delta0, build_mcg, default_delta0, dmcg_calibrate, MutualCatchGraph, DEFAULT_LADDER_STEPS};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Detector {
    Ru,
    Su,
    Un,
    Sun,
}

impl Detector {
    pub const ALL: [Detector; 4] = [Detector::Ru, Detector::Su, Detector::Un, Detector::Sun];

    pub fn name(self) -> &'static str {
        match self {
            Detector::Ru => "RU-MCCD",
            Detector::Su => "SU-MCCD",
            Detector::Un => "UN-MCCD",
            Detector::Sun => "SUN-MCCD",
        }
    }

    /// Which CCD drives the clustering phase.
    pub fn variant(self) -> Variant {
        match self {
            Detector::Ru | Detector::Su => Variant::Rk,
            Detector::Un | Detector::Sun => Variant::Un,
        }
    }

    /// Whether clusters are extended through the MCG and filtered by S_min.
    pub fn is_flexible(self) -> bool {
        matches!(self, Detector::Su | Detector::Sun)
    }
}

impl fmt::Display for Detector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Detector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.to_ascii_lowercase();
        let t = t.strip_suffix("-mccd").unwrap_or(&t);
        match t {
            "ru" => Ok(Detector::Ru),
            "su" => Ok(Detector::Su),
            "un" => Ok(Detector::Un),
            "sun" => Ok(Detector::Sun),
            _ => Err(Error::input(format!("unknown detector `{s}` (expected ru, su, un or sun)"))),
        }
    }
}

/// Default test level by dimension: RK 1% below d = 10 and 0.1% from there;
/// UN from the table {2: 15%, 3: 10%, 5: 5%, 10: 1%, 20+: 0.1%}, using the
/// nearest listed dimension.
pub fn default_alpha(variant: Variant, d: usize) -> f64 {
    match variant {
        Variant::Rk | Variant::Ks => {
            if d < 10 {
                0.01
            } else {
                0.001
            }
        }
        Variant::Un => {
            const TABLE: [(usize, f64); 7] =
                [(2, 0.15), (3, 0.10), (5, 0.05), (10, 0.01), (20, 0.001), (50, 0.001), (100, 0.001)];
            // Ties between two listed dimensions go to the smaller one.
            TABLE.iter().min_by_key(|(k, _)| k.abs_diff(d)).map(|&(_, a)| a).unwrap()
        }
    }
}

/// ⌈0.5 · contamination · n⌉, at least 1.
pub fn default_s_min(contamination: f64, n: usize) -> usize {
    ((0.5 * contamination * n as f64).ceil() as usize).max(1)
}

#[derive(Clone, Debug, PartialEq)]
pub struct DetectConfig {
    /// CSR test level; `None` picks [`default_alpha`].
    pub alpha: Option<f64>,
    /// Top of every cluster's δ ladder; `None` uses twice the core ball's
    /// empirical intensity.
    pub delta0: Option<f64>,
    /// Ladder step; `None` uses δ0 / 50.
    pub delta_step: Option<f64>,
    /// Minimum cluster size for SU/SUN.
    pub s_min: Option<usize>,
    /// Expected outlier fraction, used for S_min when `s_min` is unset.
    pub contamination: Option<f64>,
    pub ripley: RipleyParams,
    pub nnd_sims: usize,
    pub direction: ScanDirection,
}

impl Default for DetectConfig {
    fn default() -> Self {
        DetectConfig {
            alpha: None,
            delta0: None,
            delta_step: None,
            s_min: None,
            contamination: None,
            ripley: RipleyParams::default(),
            nnd_sims: DEFAULT_NND_SIMS,
            direction: ScanDirection::Ascending,
        }
    }
}

impl DetectConfig {
    pub fn resolved_alpha(&self, variant: Variant, d: usize) -> f64 {
        self.alpha.unwrap_or_else(|| default_alpha(variant, d))
    }

    pub fn resolved_s_min(&self, n: usize) -> Result<usize> {
        match (self.s_min, self.contamination) {
            (Some(s), _) if s >= 1 => Ok(s),
            (Some(_), _) => Err(Error::input("S_min must be at least 1")),
            (None, Some(c)) if (0.0..1.0).contains(&c) => Ok(default_s_min(c, n)),
            (None, Some(c)) => Err(Error::input(format!("contamination must lie in [0, 1), got {c}"))),
            (None, None) => Err(Error::input("SU/SUN need S_min or an expected contamination level")),
        }
    }

    fn ccd_variant(&self, variant: Variant, d: usize) -> CcdVariant {
        let alpha = self.resolved_alpha(variant, d);
        match variant {
            Variant::Rk | Variant::Ks => CcdVariant::Rk { alpha, ripley: self.ripley.clone() },
            Variant::Un => CcdVariant::Un { alpha, n_sim: self.nnd_sims, direction: self.direction },
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClusterDiagnostics {
    pub size: usize,
    pub core_size: usize,
    pub delta0: f64,
    pub delta: f64,
    pub floored: bool,
    pub iterations: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Diagnostics {
    pub clusters: Vec<ClusterDiagnostics>,
    /// Points whose clustering radius was accepted without a test.
    pub degenerate_balls: usize,
    /// Per point, the id of its component in its cluster's MCG (local to the
    /// cluster); `None` for points flagged without a test.
    pub component: Vec<Option<usize>>,
}

#[derive(Clone, Debug)]
pub struct DetectionReport<T> {
    pub outlier: Vec<bool>,
    pub cluster: Vec<usize>,
    pub model: ClusterModel<T>,
    pub diagnostics: Diagnostics,
}

impl<T> DetectionReport<T> {
    pub fn outlier_count(&self) -> usize {
        self.outlier.iter().filter(|&&o| o).count()
    }
}

/// The clustering CCD `detector` would build (shared by RU/SU and UN/SUN).
pub fn clustering_ccd<T: Scalar>(
    detector: Detector,
    data: &Dataset<T>,
    dist: &DistanceMatrix<T>,
    cfg: &DetectConfig,
    ctx: &CsrContext,
) -> Result<Ccd<T>> {
    if data.len() < 2 {
        return Err(Error::input("detection needs at least two points"));
    }
    build_ccd(data, dist, &cfg.ccd_variant(detector.variant(), data.dim()), ctx)
}

/// Clustering phase: partition, cores and straggler assignment. Returns the
/// model and the number of untested (degenerate) balls in the CCD.
pub fn cluster_model<T: Scalar>(
    detector: Detector,
    data: &Dataset<T>,
    dist: &DistanceMatrix<T>,
    ccd: &Ccd<T>,
    cfg: &DetectConfig,
) -> Result<(ClusterModel<T>, usize)> {
    let n = data.len();
    let variant = detector.variant();
    let degenerate = ccd.degenerate.iter().filter(|&&x| x).count();
    let g = &ccd.digraph;
    let balls = dominating_balls(g, dist, Pruning::for_variant(variant));
    let alpha = cfg.resolved_alpha(variant, data.dim());
    let model = if detector.is_flexible() {
        let s_min = cfg.resolved_s_min(n)?;
        let mcg = build_mcg(g, dist);
        select_clusters(extend_coverage(g, &mcg, &balls, dist), dist, Some(s_min), variant, alpha)?
    } else {
        let candidates = balls.into_iter().map(|b| Candidate::from_ball(b, dist)).collect();
        select_clusters(candidates, dist, None, variant, alpha)?
    };
    Ok((assign_stragglers(model, dist), degenerate))
}

/// Outlier phase for an already built model.
pub fn label_outliers<T: Scalar>(
    data: &Dataset<T>,
    dist: &DistanceMatrix<T>,
    mut model: ClusterModel<T>,
    cfg: &DetectConfig,
    degenerate_balls: usize,
) -> Result<DetectionReport<T>> {
    let n = data.len();
    let d = data.dim();
    let mut outlier = vec![false; n];
    let mut component = vec![None; n];
    let mut rejected = vec![false; n];
    for &x in &model.rejected {
        rejected[x] = true;
        outlier[x] = true;
    }

    struct Outcome {
        diag: ClusterDiagnostics,
        flagged: Vec<usize>,
        component: Vec<(usize, usize)>,
    }

    let outcomes: Vec<Outcome> = model
        .clusters
        .par_iter()
        .map(|cl| -> Result<Outcome> {
            let members: Vec<usize> = cl.members.iter().copied().filter(|&x| !rejected[x]).collect();
            let mut is_core = vec![false; n];
            cl.core.iter().for_each(|&x| is_core[x] = true);
            let core: Vec<usize> = members.iter().copied().filter(|&x| is_core[x]).collect();
            let first = cl.core_balls[0];
            let ball_count = (0..n).filter(|&x| first.contains(dist, x)).count();
            // An explicit δ0 is used as given; the default is pushed above the
            // core's connectivity threshold so the ladder has something to find.
            let delta0 = match cfg.delta0 {
                Some(v) => v,
                None => bracket_delta0(&core, dist, d, default_delta0(ball_count, d, first.radius.as_f64()))?,
            };
            let step = cfg.delta_step.unwrap_or(delta0 / DEFAULT_LADDER_STEPS);
            let cal = if core.is_empty() {
                crate::mcg::Calibration { delta: delta0, floored: false, iterations: 0 }
            } else {
                dmcg_calibrate(&core, dist, d, delta0, step)?
            };
            let sub = dist.restrict(&members);
            let radii = ks_radii(&NeighborOrder::new(&sub), members.len(), cal.delta, d);
            let comps = MutualCatchGraph::from_radii(&sub, &radii).components();
            let mut anchored = vec![false; comps.block_count()];
            for (local, &x) in members.iter().enumerate() {
                if is_core[x] {
                    anchored[comps.block_of(local)] = true;
                }
            }
            let flagged = members
                .iter()
                .enumerate()
                .filter(|&(local, &x)| !is_core[x] && !anchored[comps.block_of(local)])
                .map(|(_, &x)| x)
                .collect();
            Ok(Outcome {
                diag: ClusterDiagnostics {
                    size: cl.members.len(),
                    core_size: core.len(),
                    delta0,
                    delta: cal.delta,
                    floored: cal.floored,
                    iterations: cal.iterations,
                },
                flagged,
                component: members.iter().enumerate().map(|(local, &x)| (x, comps.block_of(local))).collect(),
            })
        })
        .collect::<Result<_>>()?;

    let mut clusters = Vec::with_capacity(outcomes.len());
    for (cl, o) in model.clusters.iter_mut().zip(outcomes) {
        cl.delta = Some(o.diag.delta);
        o.flagged.iter().for_each(|&x| outlier[x] = true);
        o.component.iter().for_each(|&(x, c)| component[x] = Some(c));
        clusters.push(o.diag);
    }
    let cluster = model.labels(n);
    Ok(DetectionReport {
        outlier,
        cluster,
        model,
        diagnostics: Diagnostics { clusters, degenerate_balls, component },
    })
}

/// Runs `detector` end to end.
pub fn detect<T: Scalar>(detector: Detector, data: &Dataset<T>, cfg: &DetectConfig, ctx: &CsrContext) -> Result<DetectionReport<T>> {
    let dist = distance_matrix(data);
    detect_with_distances(detector, data, &dist, cfg, ctx)
}

pub fn detect_with_distances<T: Scalar>(
    detector: Detector,
    data: &Dataset<T>,
    dist: &DistanceMatrix<T>,
    cfg: &DetectConfig,
    ctx: &CsrContext,
) -> Result<DetectionReport<T>> {
    let ccd = clustering_ccd(detector, data, dist, cfg, ctx)?;
    let (model, degenerate) = cluster_model(detector, data, dist, &ccd, cfg)?;
    label_outliers(data, dist, model, cfg, degenerate)
}

/// RK-CCD clustering, one dominating ball per cluster.
pub fn ru_mccd<T: Scalar>(data: &Dataset<T>, cfg: &DetectConfig, ctx: &CsrContext) -> Result<DetectionReport<T>> {
    detect(Detector::Ru, data, cfg, ctx)
}

/// RK-CCD clustering with MCG-extended coverage and S_min filtering.
pub fn su_mccd<T: Scalar>(data: &Dataset<T>, cfg: &DetectConfig, ctx: &CsrContext) -> Result<DetectionReport<T>> {
    detect(Detector::Su, data, cfg, ctx)
}

/// UN-CCD clustering, one dominating ball per cluster.
pub fn un_mccd<T: Scalar>(data: &Dataset<T>, cfg: &DetectConfig, ctx: &CsrContext) -> Result<DetectionReport<T>> {
    detect(Detector::Un, data, cfg, ctx)
}

/// UN-CCD clustering with MCG-extended coverage and S_min filtering.
pub fn sun_mccd<T: Scalar>(data: &Dataset<T>, cfg: &DetectConfig, ctx: &CsrContext) -> Result<DetectionReport<T>> {
    detect(Detector::Sun, data, cfg, ctx)
}
