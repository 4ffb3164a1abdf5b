//! Synthetic scenes: uniform or Gaussian hypersphere clusters with planted
//! outliers, and Neyman–Scott (Matérn, Thomas, mixed) cluster processes in
//! the unit hypercube.

use rand::Rng;
use rand_distr::{Distribution, Poisson, StandardNormal};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::rng::{stream_rng, uniform_in_ball, uniform_in_unit_ball, SimRng};

/// Rejection-sampling budget per accepted outlier.
pub const OUTLIER_ATTEMPTS: usize = 1_000_000;
/// Whole-scene attempts for Neyman–Scott processes.
pub const SCENE_ATTEMPTS: usize = 100;

fn dist(a: &[f64], b: &[f64]) -> f64 {
    crate::geometry::euclidean(a, b)
}

pub fn gen_uniform_cluster<R: Rng + ?Sized>(rng: &mut R, center: &[f64], radius: f64, count: usize) -> Vec<Vec<f64>> {
    (0..count).map(|_| uniform_in_ball(rng, center, radius)).collect()
}

/// σ such that a fraction `noise_level` of N(0, σ²I_d) falls outside radius
/// R: σ = R / √q with q the (1 − noise_level) quantile of χ²_d.
pub fn gaussian_sigma(d: usize, radius: f64, noise_level: f64) -> Result<f64> {
    if !(noise_level > 0.0 && noise_level < 0.5) {
        return Err(Error::input(format!("noise level must lie in (0, 0.5), got {noise_level}")));
    }
    let chi = ChiSquared::new(d as f64).map_err(|e| Error::input(e.to_string()))?;
    Ok(radius / chi.inverse_cdf(1.0 - noise_level).sqrt())
}

pub fn gen_gaussian_cluster<R: Rng + ?Sized>(
    rng: &mut R,
    center: &[f64],
    radius: f64,
    count: usize,
    noise_level: f64,
) -> Result<Vec<Vec<f64>>> {
    let sigma = gaussian_sigma(center.len(), radius, noise_level)?;
    Ok((0..count)
        .map(|_| center.iter().map(|&c| c + sigma * rng.sample::<f64, _>(StandardNormal)).collect())
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClusterKind {
    Uniform,
    Gaussian,
}

#[derive(Clone, Debug, PartialEq)]
pub enum OutlierRule {
    /// Uniform in B(mean of centers, radius), at least `min_center_dist`
    /// from every cluster center.
    BigSphere { radius: f64, min_center_dist: f64 },
    /// Uniform in the shell inner ≤ ‖x − center‖ ≤ outer.
    Annulus { center: Vec<f64>, inner: f64, outer: f64 },
    /// A collective outlier group, uniform in B(center, radius).
    Collective { center: Vec<f64>, radius: f64 },
}

impl OutlierRule {
    pub fn big_sphere() -> Self {
        OutlierRule::BigSphere { radius: 5.0, min_center_dist: 2.0 }
    }

    pub fn annulus(d: usize) -> Self {
        OutlierRule::Annulus { center: vec![0.0; d], inner: 1.5, outer: 3.0 }
    }

    /// Group centered at (3 + shift, 3, …, 3) with unit radius.
    pub fn collective(d: usize, shift: f64) -> Self {
        let mut center = vec![3.0; d];
        center[0] += shift;
        OutlierRule::Collective { center, radius: 1.0 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SceneSpec {
    pub d: usize,
    pub n: usize,
    pub centers: Vec<Vec<f64>>,
    pub radius_range: (f64, f64),
    pub kind: ClusterKind,
    pub contamination: f64,
    pub outlier_rule: OutlierRule,
    pub noise_level: f64,
    pub seed: u64,
}

impl SceneSpec {
    /// Two clusters at the standard centers, 5% outliers in the big sphere.
    pub fn general(kind: ClusterKind, d: usize, n: usize, seed: u64) -> Result<Self> {
        Ok(SceneSpec {
            d,
            n,
            centers: focus_centers(d, 2)?,
            radius_range: (0.7, 1.3),
            kind,
            contamination: 0.05,
            outlier_rule: OutlierRule::big_sphere(),
            noise_level: 0.01,
            seed,
        })
    }

    pub fn outlier_count(&self) -> usize {
        (self.contamination * self.n as f64).round() as usize
    }

    pub fn validate(&self) -> Result<()> {
        if self.d == 0 || self.n == 0 {
            return Err(Error::input("scene needs d ≥ 1 and n ≥ 1"));
        }
        if self.centers.is_empty() || self.centers.iter().any(|c| c.len() != self.d) {
            return Err(Error::input(format!("scene needs at least one center of dimension {}", self.d)));
        }
        let (lo, hi) = self.radius_range;
        if !(lo > 0.0 && lo <= hi) {
            return Err(Error::input(format!("radius range ({lo}, {hi}) must be positive and ascending")));
        }
        if !(0.0..1.0).contains(&self.contamination) {
            return Err(Error::input(format!("contamination must lie in [0, 1), got {}", self.contamination)));
        }
        if self.kind == ClusterKind::Gaussian {
            gaussian_sigma(self.d, 1.0, self.noise_level)?;
        }
        Ok(())
    }
}

/// Cluster centers of the simulation layouts: μ1 = (3, …, 3) and μ_{k+1}
/// adds 3 to coordinate k. In three dimensions the fifth center is
/// (6, 6, 3), as the coordinates run out.
pub fn focus_centers(d: usize, k: usize) -> Result<Vec<Vec<f64>>> {
    let mut out = Vec::with_capacity(k);
    for j in 0..k {
        let mut c = vec![3.0; d];
        if j > 0 {
            if d == 3 && j == 4 {
                c[0] = 6.0;
                c[1] = 6.0;
            } else if j - 1 < d {
                c[j - 1] = 6.0;
            } else {
                return Err(Error::input(format!("no layout for {k} clusters in {d} dimensions")));
            }
        }
        out.push(c);
    }
    Ok(out)
}

pub fn gen_outliers<R: Rng + ?Sized>(
    rng: &mut R,
    rule: &OutlierRule,
    centers: &[Vec<f64>],
    count: usize,
) -> Result<Vec<Vec<f64>>> {
    match rule {
        OutlierRule::BigSphere { radius, min_center_dist } => {
            let d = centers[0].len();
            let mut mean = vec![0.0; d];
            for c in centers {
                mean.iter_mut().zip(c).for_each(|(m, x)| *m += x / centers.len() as f64);
            }
            let mut out = Vec::with_capacity(count);
            for _ in 0..count {
                let p = (0..OUTLIER_ATTEMPTS)
                    .map(|_| uniform_in_ball(rng, &mean, *radius))
                    .find(|p| centers.iter().all(|c| dist(p, c) >= *min_center_dist))
                    .ok_or_else(|| Error::Infeasible("no outlier position satisfies the center distance".into()))?;
                out.push(p);
            }
            Ok(out)
        }
        OutlierRule::Annulus { center, inner, outer } => {
            if !(*inner >= 0.0 && inner < outer) {
                return Err(Error::Infeasible(format!("annulus [{inner}, {outer}] is empty")));
            }
            let d = center.len() as i32;
            let (a, b) = (inner.powi(d), outer.powi(d));
            let mut dir = vec![0.0; center.len()];
            Ok((0..count)
                .map(|_| {
                    // Uniform direction, radius with density ∝ r^{d−1} on [inner, outer].
                    uniform_in_unit_ball(rng, &mut dir);
                    let norm = dir.iter().map(|x| x * x).sum::<f64>().sqrt();
                    let r = (a + rng.random::<f64>() * (b - a)).powf(1.0 / d as f64);
                    center.iter().zip(&dir).map(|(c, x)| c + r * x / norm).collect()
                })
                .collect())
        }
        OutlierRule::Collective { center, radius } => Ok(gen_uniform_cluster(rng, center, *radius, count)),
    }
}

/// Equal cluster sizes (the remainder goes to the earliest clusters), then
/// round(contamination · n) outliers; labels mark outliers.
pub fn gen_scene(spec: &SceneSpec) -> Result<Dataset<f64>> {
    let mut rng = stream_rng(spec.seed, &[]);
    gen_scene_with(spec, &mut rng)
}

pub fn gen_scene_with(spec: &SceneSpec, rng: &mut SimRng) -> Result<Dataset<f64>> {
    spec.validate()?;
    let n_out = spec.outlier_count();
    let regular = spec.n - n_out;
    let k = spec.centers.len();
    let mut points = Vec::with_capacity(spec.n);
    for (j, c) in spec.centers.iter().enumerate() {
        let count = regular / k + usize::from(j < regular % k);
        let (lo, hi) = spec.radius_range;
        let radius = if hi > lo { rng.random_range(lo..hi) } else { lo };
        match spec.kind {
            ClusterKind::Uniform => points.extend(gen_uniform_cluster(rng, c, radius, count)),
            ClusterKind::Gaussian => points.extend(gen_gaussian_cluster(rng, c, radius, count, spec.noise_level)?),
        }
    }
    points.extend(gen_outliers(rng, &spec.outlier_rule, &spec.centers, n_out)?);
    let labels = (0..spec.n).map(|i| i >= regular).collect();
    Dataset::new(points)?.with_labels(labels)
}

// ---------------------------------------------------------------- Neyman–Scott

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProcessKind {
    Matern,
    Thomas,
    /// Independent Matérn and Thomas parent processes of equal intensity.
    Mixed,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProcessSpec {
    pub kind: ProcessKind,
    pub d: usize,
    /// Parent intensity per unit volume (per kind for `Mixed`).
    pub kappa: f64,
    /// Mean offspring count per parent.
    pub mu: f64,
    pub sigma_matern: f64,
    pub sigma_thomas: f64,
    pub outlier_intensity: f64,
    /// Outliers must be this many σ_M from every Matérn parent …
    pub matern_exclusion: f64,
    /// … and this many σ_T from every Thomas parent.
    pub thomas_exclusion: f64,
    pub min_regular: usize,
    pub seed: u64,
}

const SETTING_DIMS: [usize; 5] = [2, 3, 5, 10, 20];
const MU_MATERN: [f64; 5] = [33.00, 35.26, 37.45, 40.37, 44.48];
const MU_THOMAS: [f64; 5] = [33.70, 36.13, 42.38, 55.16, 90.54];
const MU_MIXED: [f64; 5] = [33.30, 36.15, 39.72182, 46.78, 60.31];

impl ProcessSpec {
    /// The benchmark settings: Matérn (κ = 6, σ = 0.1), Thomas (κ = 6,
    /// σ = 0.07) and mixed (κ = 3 each), with offspring means per dimension
    /// chosen so scenes hold about 200 points.
    pub fn setting(kind: ProcessKind, d: usize, seed: u64) -> Result<Self> {
        let k = SETTING_DIMS
            .iter()
            .position(|&x| x == d)
            .ok_or_else(|| Error::input(format!("no Neyman–Scott setting for d = {d} (have 2, 3, 5, 10, 20)")))?;
        let (kappa, mu) = match kind {
            ProcessKind::Matern => (6.0, MU_MATERN[k]),
            ProcessKind::Thomas => (6.0, MU_THOMAS[k]),
            ProcessKind::Mixed => (3.0, MU_MIXED[k]),
        };
        Ok(ProcessSpec {
            kind,
            d,
            kappa,
            mu,
            sigma_matern: 0.1,
            sigma_thomas: 0.07,
            outlier_intensity: 20.0,
            matern_exclusion: 2.0,
            thomas_exclusion: 3.33,
            min_regular: 80,
            seed,
        })
    }

    fn validate(&self) -> Result<()> {
        let ok = self.d >= 1
            && self.kappa > 0.0
            && self.mu > 0.0
            && self.sigma_matern >= 0.0
            && self.sigma_thomas >= 0.0
            && self.outlier_intensity >= 0.0;
        if ok {
            Ok(())
        } else {
            Err(Error::input("process parameters must be positive"))
        }
    }
}

fn poisson<R: Rng + ?Sized>(rng: &mut R, mean: f64) -> usize {
    if mean <= 0.0 {
        return 0;
    }
    Poisson::new(mean).expect("positive mean").sample(rng) as usize
}

fn in_unit_cube(p: &[f64]) -> bool {
    p.iter().all(|&x| (0.0..=1.0).contains(&x))
}

fn uniform_cube<R: Rng + ?Sized>(rng: &mut R, d: usize) -> Vec<f64> {
    (0..d).map(|_| rng.random::<f64>()).collect()
}

/// One scene: parents uniform in [0, 1]^d, Poisson offspring around them
/// (clipped to the cube), then HPP outliers kept only away from every parent.
/// Resampled while fewer than `min_regular` offspring survive.
pub fn gen_neyman_scott(spec: &ProcessSpec) -> Result<Dataset<f64>> {
    let mut rng = stream_rng(spec.seed, &[]);
    gen_neyman_scott_with(spec, &mut rng)
}

pub fn gen_neyman_scott_with(spec: &ProcessSpec, rng: &mut SimRng) -> Result<Dataset<f64>> {
    spec.validate()?;
    let d = spec.d;
    let vol = 1.0; // unit hypercube
    for _ in 0..SCENE_ATTEMPTS {
        let (n_m, n_t) = match spec.kind {
            ProcessKind::Matern => (poisson(rng, spec.kappa * vol), 0),
            ProcessKind::Thomas => (0, poisson(rng, spec.kappa * vol)),
            ProcessKind::Mixed => (poisson(rng, spec.kappa * vol), poisson(rng, spec.kappa * vol)),
        };
        let matern: Vec<Vec<f64>> = (0..n_m).map(|_| uniform_cube(rng, d)).collect();
        let thomas: Vec<Vec<f64>> = (0..n_t).map(|_| uniform_cube(rng, d)).collect();
        let mut points = Vec::new();
        for p in &matern {
            for _ in 0..poisson(rng, spec.mu) {
                let x = uniform_in_ball(rng, p, spec.sigma_matern);
                if in_unit_cube(&x) {
                    points.push(x);
                }
            }
        }
        for p in &thomas {
            for _ in 0..poisson(rng, spec.mu) {
                let x: Vec<f64> = p.iter().map(|&c| c + spec.sigma_thomas * rng.sample::<f64, _>(StandardNormal)).collect();
                if in_unit_cube(&x) {
                    points.push(x);
                }
            }
        }
        let regular = points.len();
        for _ in 0..poisson(rng, spec.outlier_intensity * vol) {
            let x = uniform_cube(rng, d);
            let far = matern.iter().all(|p| dist(&x, p) >= spec.matern_exclusion * spec.sigma_matern)
                && thomas.iter().all(|p| dist(&x, p) >= spec.thomas_exclusion * spec.sigma_thomas);
            if far {
                points.push(x);
            }
        }
        if regular >= spec.min_regular.max(1) {
            let labels = (0..points.len()).map(|i| i >= regular).collect();
            return Dataset::new(points)?.with_labels(labels);
        }
    }
    Err(Error::Infeasible(format!(
        "fewer than {} regular points in {SCENE_ATTEMPTS} attempts",
        spec.min_regular
    )))
}
