//! Monte Carlo tests of complete spatial randomness (CSR) inside a ball.
//!
//! Ball contents are rescaled into the unit ball and compared against
//! simulated uniform draws of the same size. Two statistics are offered:
//! Ripley's K on a fixed grid of scaled radii (pointwise envelope), and the
//! mean/median nearest-neighbor distance (lower-tailed, two p-values).

use std::collections::HashMap;
use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, RwLock};

use rand::Rng;
use rayon::prelude::*;
use statrs::function::gamma::gamma;

use crate::error::{Error, Result};
use crate::geometry::unit_ball_volume;
use crate::rng::{stream_rng, uniform_in_unit_ball};

pub const DEFAULT_T_GRID: [f64; 5] = [0.1, 0.2, 0.3, 0.4, 0.5];
pub const DEFAULT_K_SIMS: usize = 100;
pub const DEFAULT_NND_SIMS: usize = 1000;
pub const DEFAULT_REFERENCE_SEED: u64 = 20_240_601;

const K_STREAM: u64 = 0x4b;
const NND_STREAM: u64 = 0x4e;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CsrVerdict {
    Retain,
    Reject,
    /// Too few points to test; retained by convention.
    Degenerate,
}

impl CsrVerdict {
    pub fn is_reject(self) -> bool {
        self == CsrVerdict::Reject
    }
}

/// Empirical quantile of an ascending sample, linear interpolation between
/// order statistics (the usual "type 7" rule).
pub fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    assert!(!sorted.is_empty(), "quantile of an empty sample");
    let h = (sorted.len() - 1) as f64 * p.clamp(0.0, 1.0);
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Order-statistic bounds of an ascending sample of size N for tail level a:
/// x_(⌈N·a⌉) and x_(⌊N·(1 − a)⌋ + 1), rounded outward so that a tail finer
/// than 1/N falls back to the sample extremes instead of cutting into them.
pub fn envelope_bounds(sorted: &[f64], a: f64) -> (f64, f64) {
    assert!(!sorted.is_empty(), "envelope of an empty sample");
    let n = sorted.len();
    let a = a.clamp(0.0, 0.5);
    let lo = ((n as f64 * a).ceil() as usize).clamp(1, n);
    let hi = ((n as f64 * (1.0 - a)).floor() as usize + 1).clamp(1, n);
    (sorted[lo - 1], sorted[hi - 1])
}

fn sort_f64(v: &mut [f64]) {
    v.sort_unstable_by(|a, b| a.partial_cmp(b).expect("NaN in simulated sample"));
}

// ---------------------------------------------------------------- Ripley's K

fn validate_grid(t_grid: &[f64]) -> Result<()> {
    if t_grid.is_empty() {
        return Err(Error::input("t grid is empty"));
    }
    if t_grid.iter().any(|&t| !(t > 0.0 && t <= 0.5)) {
        return Err(Error::input("t grid values must lie in (0, 0.5]"));
    }
    if t_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::input("t grid must be strictly increasing"));
    }
    Ok(())
}

/// Adds one pair at scaled distance `v` to a per-bucket histogram, where
/// bucket k holds pairs with t_{k-1} < v ≤ t_k.
#[inline]
pub(crate) fn bin_pair(t_grid: &[f64], v: f64, hist: &mut [usize]) {
    let k = t_grid.partition_point(|&t| t < v);
    if k < hist.len() {
        hist[k] += 1;
    }
}

/// K̂ on the grid from a bucket histogram of unordered pairs among `n` points.
pub(crate) fn k_from_hist(hist: &[usize], n: usize, d: usize) -> Vec<f64> {
    // Each unordered pair contributes twice to Σ_{i≠j}.
    let scale = 2.0 * unit_ball_volume(d) / (n * (n - 1)) as f64;
    let mut acc = 0;
    hist.iter()
        .map(|&h| {
            acc += h;
            acc as f64 * scale
        })
        .collect()
}

/// K̂(t) = V_d(1) / (n(n−1)) · Σ_{i≠j} 1{‖x_i − x_j‖ ≤ t}, for points already
/// scaled into the unit ball. No edge correction: the reference draws share
/// the same window, so the bias cancels.
pub fn ripley_k_hat(points: &[Vec<f64>], t_grid: &[f64]) -> Result<Vec<f64>> {
    validate_grid(t_grid)?;
    let n = points.len();
    if n < 2 {
        return Err(Error::Degenerate(format!("Ripley's K needs at least 2 points, got {n}")));
    }
    let d = points[0].len();
    let mut hist = vec![0; t_grid.len()];
    for i in 0..n {
        for j in (i + 1)..n {
            bin_pair(t_grid, crate::geometry::euclidean(&points[i], &points[j]), &mut hist);
        }
    }
    Ok(k_from_hist(&hist, n, d))
}

/// Pointwise K̂ bounds from CSR draws in the unit ball.
#[derive(Clone, Debug, PartialEq)]
pub struct KEnvelope {
    pub t_grid: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub n_sub: usize,
    pub n_sim: usize,
    pub alpha: f64,
    pub d: usize,
}

impl KEnvelope {
    /// Tail probabilities of the bounds. The level α is split evenly over the
    /// grid and then over the two tails, so each bound sits at α/(2m).
    pub fn tail_levels(alpha: f64, m: usize) -> (f64, f64) {
        let a = alpha / (2.0 * m as f64);
        (a, 1.0 - a)
    }

    fn from_samples(mut per_t: Vec<Vec<f64>>, t_grid: &[f64], n_sub: usize, alpha: f64, d: usize) -> Self {
        let (a, _) = Self::tail_levels(alpha, t_grid.len());
        let n_sim = per_t[0].len();
        let mut lower = Vec::with_capacity(per_t.len());
        let mut upper = Vec::with_capacity(per_t.len());
        for s in &mut per_t {
            sort_f64(s);
            let (lo, hi) = envelope_bounds(s, a);
            lower.push(lo);
            upper.push(hi);
        }
        KEnvelope { t_grid: t_grid.to_vec(), lower, upper, n_sub, n_sim, alpha, d }
    }

    pub fn verdict(&self, k_hat: &[f64]) -> CsrVerdict {
        let out = k_hat.iter().zip(self.lower.iter().zip(&self.upper)).any(|(&k, (&lo, &hi))| k < lo || k > hi);
        if out {
            CsrVerdict::Reject
        } else {
            CsrVerdict::Retain
        }
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha <= 1.0 {
        Ok(())
    } else {
        Err(Error::input(format!("alpha must lie in (0, 1], got {alpha}")))
    }
}

pub fn build_k_envelope<R: Rng + ?Sized>(
    n_sub: usize,
    d: usize,
    t_grid: &[f64],
    n_sim: usize,
    alpha: f64,
    rng: &mut R,
) -> Result<KEnvelope> {
    validate_grid(t_grid)?;
    check_alpha(alpha)?;
    if n_sub < 2 || n_sim < 20 || d == 0 {
        return Err(Error::input(format!("envelope needs n_sub ≥ 2, n_sim ≥ 20, d ≥ 1 (got {n_sub}, {n_sim}, {d})")));
    }
    let mut per_t = vec![Vec::with_capacity(n_sim); t_grid.len()];
    let mut pts = vec![vec![0.0; d]; n_sub];
    for _ in 0..n_sim {
        for p in &mut pts {
            uniform_in_unit_ball(rng, p);
        }
        let k = ripley_k_hat(&pts, t_grid)?;
        for (s, v) in per_t.iter_mut().zip(k) {
            s.push(v);
        }
    }
    Ok(KEnvelope::from_samples(per_t, t_grid, n_sub, alpha, d))
}

pub fn srmct_ripley(points_scaled: &[Vec<f64>], env: &KEnvelope) -> Result<CsrVerdict> {
    if points_scaled.len() != env.n_sub {
        return Err(Error::input(format!("{} points for an envelope built for {}", points_scaled.len(), env.n_sub)));
    }
    if points_scaled.iter().any(|p| p.len() != env.d) {
        return Err(Error::input(format!("points do not match envelope dimension {}", env.d)));
    }
    Ok(env.verdict(&ripley_k_hat(points_scaled, &env.t_grid)?))
}

/// Envelopes for every subset size up to some maximum, for one dimension.
///
/// Simulation j is a single stream of uniform points and the envelope for
/// size k uses its first k points, so each size still sees `n_sim`
/// independent CSR draws while the whole table costs O(n_sim · n_max²).
/// Prefixes do not depend on how far the table has grown, which keeps every
/// envelope a function of (seed, d, size) alone.
#[derive(Debug)]
pub struct KEnvelopeTable {
    d: usize,
    t_grid: Vec<f64>,
    n_sim: usize,
    alpha: f64,
    seed: u64,
    envelopes: RwLock<Vec<Arc<KEnvelope>>>, // index k − 2
}

impl KEnvelopeTable {
    pub fn new(d: usize, t_grid: &[f64], n_sim: usize, alpha: f64, seed: u64) -> Result<Self> {
        validate_grid(t_grid)?;
        check_alpha(alpha)?;
        if n_sim < 20 || d == 0 {
            return Err(Error::input(format!("envelope table needs n_sim ≥ 20 and d ≥ 1 (got {n_sim}, {d})")));
        }
        Ok(KEnvelopeTable { d, t_grid: t_grid.to_vec(), n_sim, alpha, seed, envelopes: RwLock::new(Vec::new()) })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn t_grid(&self) -> &[f64] {
        &self.t_grid
    }

    /// Envelope for `n_sub` points (n_sub ≥ 2).
    pub fn get(&self, n_sub: usize) -> Arc<KEnvelope> {
        assert!(n_sub >= 2, "envelopes start at two points");
        if let Some(e) = self.envelopes.read().unwrap().get(n_sub - 2) {
            return Arc::clone(e);
        }
        self.ensure(n_sub);
        Arc::clone(&self.envelopes.read().unwrap()[n_sub - 2])
    }

    /// Makes sure sizes 2..=n_max are available.
    pub fn ensure(&self, n_max: usize) {
        let have = self.envelopes.read().unwrap().len() + 1;
        if n_max <= have {
            return;
        }
        let target = n_max.max(2).next_multiple_of(64);
        let built = self.build(target);
        let mut slot = self.envelopes.write().unwrap();
        if slot.len() < built.len() {
            *slot = built;
        }
    }

    fn build(&self, n_max: usize) -> Vec<Arc<KEnvelope>> {
        let (d, m) = (self.d, self.t_grid.len());
        let grid = &self.t_grid;
        // sims[j][(k − 2)·m + t] = K̂_t of the first k points of stream j.
        let sims: Vec<Vec<f64>> = (0..self.n_sim)
            .into_par_iter()
            .map(|j| {
                let mut rng = stream_rng(self.seed, &[K_STREAM, d as u64, j as u64]);
                let mut pts = vec![0.0; n_max * d];
                let mut hist = vec![0usize; m];
                let mut out = Vec::with_capacity((n_max - 1) * m);
                for k in 0..n_max {
                    let (prev, cur) = pts.split_at_mut(k * d);
                    let p = &mut cur[..d];
                    uniform_in_unit_ball(&mut rng, p);
                    for q in prev.chunks_exact(d) {
                        bin_pair(grid, crate::geometry::euclidean(p, q), &mut hist);
                    }
                    if k >= 1 {
                        out.extend(k_from_hist(&hist, k + 1, d));
                    }
                }
                out
            })
            .collect();
        (2..=n_max)
            .map(|k| {
                let per_t = (0..m).map(|t| sims.iter().map(|s| s[(k - 2) * m + t]).collect()).collect();
                Arc::new(KEnvelope::from_samples(per_t, grid, k, self.alpha, d))
            })
            .collect()
    }
}

// ---------------------------------------------------- nearest-neighbor tests

/// Mean and median of a sample; the median averages the two central order
/// statistics for even counts. Reorders `v`.
pub(crate) fn mean_median(v: &mut [f64]) -> (f64, f64) {
    let n = v.len();
    let mean = v.iter().sum::<f64>() / n as f64;
    let cmp = |a: &f64, b: &f64| a.partial_cmp(b).unwrap();
    let (_, &mut hi, _) = v.select_nth_unstable_by(n / 2, cmp);
    let median = if n % 2 == 1 {
        hi
    } else {
        let lo = v[..n / 2].iter().copied().fold(f64::NEG_INFINITY, f64::max);
        0.5 * (lo + hi)
    };
    (mean, median)
}

/// (mean, median) nearest-neighbor distance of `points`, divided by `r`.
pub fn nnd_stats(points: &[Vec<f64>], r: f64) -> Result<(f64, f64)> {
    let n = points.len();
    if n < 2 {
        return Err(Error::Degenerate(format!("nearest-neighbor distances need at least 2 points, got {n}")));
    }
    let mut nnd = vec![f64::INFINITY; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let v = crate::geometry::euclidean(&points[i], &points[j]);
            nnd[i] = nnd[i].min(v);
            nnd[j] = nnd[j].min(v);
        }
    }
    let (mean, median) = mean_median(&mut nnd);
    Ok((mean / r, median / r))
}

/// Simulated mean- and median-NND values for one sample size, ascending.
#[derive(Clone, Debug, PartialEq)]
pub struct NndSample {
    pub mean: Vec<f64>,
    pub median: Vec<f64>,
}

fn lower_tail_p(sorted: &[f64], observed: f64) -> f64 {
    (sorted.partition_point(|&x| x <= observed) + 1) as f64 / (sorted.len() + 1) as f64
}

impl NndSample {
    /// Lower-tail Monte Carlo p-values (rank + 1)/(M + 1) for the mean and
    /// the median.
    pub fn p_values(&self, mean: f64, median: f64) -> (f64, f64) {
        (lower_tail_p(&self.mean, mean), lower_tail_p(&self.median, median))
    }
}

/// Decision rule on the two p-values: with p(1) ≤ p(2), reject when
/// p(1) ≤ α/2 or p(2) ≤ α.
pub fn holm_pair_rejects(p_mean: f64, p_median: f64, alpha: f64) -> bool {
    let (p1, p2) = if p_mean <= p_median { (p_mean, p_median) } else { (p_median, p_mean) };
    p1 <= alpha / 2.0 || p2 <= alpha
}

/// Reference mean/median NND samples in the unit ball for sizes 2..=n_max.
/// Built from prefixes of simulated point streams (see [`KEnvelopeTable`]).
#[derive(Clone, Debug, PartialEq)]
pub struct NndReference {
    d: usize,
    n_sim: usize,
    seed: u64,
    samples: Vec<NndSample>, // index size − 2
}

const NND_CACHE_MAGIC: &str = "# ccd nnd-reference v1";

impl NndReference {
    pub fn build(d: usize, n_max: usize, n_sim: usize, seed: u64) -> Result<Self> {
        if d == 0 || n_max < 2 || n_sim == 0 {
            return Err(Error::input(format!("NND reference needs d ≥ 1, n_max ≥ 2, M ≥ 1 (got {d}, {n_max}, {n_sim})")));
        }
        let sims: Vec<Vec<(f64, f64)>> = (0..n_sim)
            .into_par_iter()
            .map(|j| {
                let mut rng = stream_rng(seed, &[NND_STREAM, d as u64, j as u64]);
                let mut pts = vec![0.0; n_max * d];
                let mut nnd = vec![f64::INFINITY; n_max];
                let mut scratch = Vec::with_capacity(n_max);
                let mut out = Vec::with_capacity(n_max - 1);
                for k in 0..n_max {
                    let (prev, cur) = pts.split_at_mut(k * d);
                    let p = &mut cur[..d];
                    uniform_in_unit_ball(&mut rng, p);
                    for (i, q) in prev.chunks_exact(d).enumerate() {
                        let v = crate::geometry::euclidean(p, q);
                        nnd[i] = nnd[i].min(v);
                        nnd[k] = nnd[k].min(v);
                    }
                    if k >= 1 {
                        scratch.clear();
                        scratch.extend_from_slice(&nnd[..=k]);
                        out.push(mean_median(&mut scratch));
                    }
                }
                out
            })
            .collect();
        let samples = (0..n_max - 1)
            .map(|s| {
                let mut mean: Vec<f64> = sims.iter().map(|v| v[s].0).collect();
                let mut median: Vec<f64> = sims.iter().map(|v| v[s].1).collect();
                sort_f64(&mut mean);
                sort_f64(&mut median);
                NndSample { mean, median }
            })
            .collect();
        Ok(NndReference { d, n_sim, seed, samples })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn n_sim(&self) -> usize {
        self.n_sim
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn n_max(&self) -> usize {
        self.samples.len() + 1
    }

    pub fn sample(&self, size: usize) -> Option<&NndSample> {
        size.checked_sub(2).and_then(|k| self.samples.get(k))
    }

    /// Cache file layout: a header line
    /// `# ccd nnd-reference v1 d=<d> m=<M> seed=<seed> n_max=<n>`, then one CSV
    /// row per (size, statistic): `size,mean|median,v_1,…,v_M` with values
    /// ascending.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = BufWriter::new(fs::File::create(path)?);
        writeln!(w, "{NND_CACHE_MAGIC} d={} m={} seed={} n_max={}", self.d, self.n_sim, self.seed, self.n_max())?;
        for (k, s) in self.samples.iter().enumerate() {
            for (name, vals) in [("mean", &s.mean), ("median", &s.median)] {
                write!(w, "{},{name}", k + 2)?;
                for v in vals {
                    write!(w, ",{v:?}")?;
                }
                writeln!(w)?;
            }
        }
        w.flush()?;
        Ok(())
    }

    /// Reads a cache file, checking that it was built for (d, M, seed).
    pub fn read_csv(path: &Path, d: usize, n_sim: usize, seed: u64) -> Result<Self> {
        let bad = |row: usize, msg: &str| Error::Parse { row, msg: format!("{}: {msg}", path.display()) };
        let mut lines = BufReader::new(fs::File::open(path)?).lines();
        let header = lines.next().ok_or_else(|| bad(1, "empty cache file"))??;
        let expect = format!("{NND_CACHE_MAGIC} d={d} m={n_sim} seed={seed} ");
        if !header.starts_with(&expect) {
            return Err(bad(1, "cache built for different parameters"));
        }
        let mut samples: Vec<NndSample> = Vec::new();
        for (row, line) in lines.enumerate() {
            let row = row + 2;
            let line = line?;
            let mut fields = line.split(',');
            let size: usize = fields.next().and_then(|s| s.parse().ok()).ok_or_else(|| bad(row, "bad size"))?;
            let stat = fields.next().ok_or_else(|| bad(row, "missing statistic"))?;
            let vals = fields.map(str::parse::<f64>).collect::<Result<Vec<_>, _>>().map_err(|_| bad(row, "bad value"))?;
            if vals.len() != n_sim || size != samples.len() + 1 + usize::from(stat == "mean") {
                return Err(bad(row, "unexpected row"));
            }
            match stat {
                "mean" => samples.push(NndSample { mean: vals, median: Vec::new() }),
                "median" => samples.last_mut().ok_or_else(|| bad(row, "median before mean"))?.median = vals,
                _ => return Err(bad(row, "unknown statistic")),
            }
        }
        if samples.is_empty() || samples.iter().any(|s| s.median.len() != n_sim) {
            return Err(bad(0, "incomplete cache file"));
        }
        Ok(NndReference { d, n_sim, seed, samples })
    }
}

/// NND test of ball contents (center already removed) at radius `r`.
pub fn srmct_nnd(contents: &[Vec<f64>], r: f64, reference: &NndReference, alpha: f64) -> Result<CsrVerdict> {
    if contents.len() < 2 {
        return Ok(CsrVerdict::Degenerate);
    }
    let sample = reference
        .sample(contents.len())
        .ok_or_else(|| Error::input(format!("reference covers sizes up to {}, got {}", reference.n_max(), contents.len())))?;
    let (mean, median) = nnd_stats(contents, r)?;
    let (p1, p2) = sample.p_values(mean, median);
    Ok(if holm_pair_rejects(p1, p2, alpha) { CsrVerdict::Reject } else { CsrVerdict::Retain })
}

/// A lazily grown [`NndReference`] with an optional on-disk cache.
#[derive(Debug)]
pub struct NndReferenceTable {
    d: usize,
    n_sim: usize,
    seed: u64,
    cache_dir: Option<PathBuf>,
    current: RwLock<Option<Arc<NndReference>>>,
}

impl NndReferenceTable {
    pub fn new(d: usize, n_sim: usize, seed: u64, cache_dir: Option<PathBuf>) -> Self {
        NndReferenceTable { d, n_sim, seed, cache_dir, current: RwLock::new(None) }
    }

    fn cache_path(&self) -> Option<PathBuf> {
        let name = format!("nnd-v1-d{}-m{}-s{}.csv", self.d, self.n_sim, self.seed);
        self.cache_dir.as_ref().map(|d| d.join(name))
    }

    /// A reference covering at least sizes 2..=n_max.
    pub fn get(&self, n_max: usize) -> Result<Arc<NndReference>> {
        if let Some(r) = self.current.read().unwrap().as_ref().filter(|r| r.n_max() >= n_max) {
            return Ok(Arc::clone(r));
        }
        let mut slot = self.current.write().unwrap();
        if let Some(r) = slot.as_ref().filter(|r| r.n_max() >= n_max) {
            return Ok(Arc::clone(r));
        }
        let path = self.cache_path();
        let cached = path
            .as_ref()
            .and_then(|p| NndReference::read_csv(p, self.d, self.n_sim, self.seed).ok())
            .filter(|r| r.n_max() >= n_max);
        let reference = match cached {
            Some(r) => r,
            None => {
                let r = NndReference::build(self.d, n_max.max(2).next_multiple_of(64), self.n_sim, self.seed)?;
                if let Some(p) = &path {
                    // The cache only saves time; a read-only location is not an error.
                    let _ = fs::create_dir_all(p.parent().unwrap()).and_then(|_| {
                        let tmp = p.with_extension(format!("tmp{}", std::process::id()));
                        r.write_csv(&tmp).map_err(std::io::Error::other)?;
                        fs::rename(&tmp, p)
                    });
                }
                r
            }
        };
        let r = Arc::new(reference);
        *slot = Some(Arc::clone(&r));
        Ok(r)
    }
}

/// Parameters of the envelope test as used for RK-CCD radii.
#[derive(Clone, Debug, PartialEq)]
pub struct RipleyParams {
    pub t_grid: Vec<f64>,
    pub n_sim: usize,
}

impl Default for RipleyParams {
    fn default() -> Self {
        RipleyParams { t_grid: DEFAULT_T_GRID.to_vec(), n_sim: DEFAULT_K_SIMS }
    }
}

type KKey = (usize, usize, u64, Vec<u64>);

/// Shared, thread-safe home for every reference table a run needs.
#[derive(Debug)]
pub struct CsrContext {
    seed: u64,
    cache_dir: Option<PathBuf>,
    k: Mutex<HashMap<KKey, Arc<KEnvelopeTable>>>,
    nnd: Mutex<HashMap<(usize, usize), Arc<NndReferenceTable>>>,
}

impl Default for CsrContext {
    fn default() -> Self {
        Self::new(DEFAULT_REFERENCE_SEED)
    }
}

impl CsrContext {
    pub fn new(seed: u64) -> Self {
        CsrContext { seed, cache_dir: None, k: Mutex::default(), nnd: Mutex::default() }
    }

    pub fn with_cache_dir(mut self, dir: impl Into<PathBuf>) -> Self {
        self.cache_dir = Some(dir.into());
        self
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn k_table(&self, d: usize, params: &RipleyParams, alpha: f64) -> Result<Arc<KEnvelopeTable>> {
        let key = (d, params.n_sim, alpha.to_bits(), params.t_grid.iter().map(|t| t.to_bits()).collect());
        let mut map = self.k.lock().unwrap();
        if let Some(t) = map.get(&key) {
            return Ok(Arc::clone(t));
        }
        let t = Arc::new(KEnvelopeTable::new(d, &params.t_grid, params.n_sim, alpha, self.seed)?);
        map.insert(key, Arc::clone(&t));
        Ok(t)
    }

    pub fn nnd_table(&self, d: usize, n_sim: usize) -> Arc<NndReferenceTable> {
        let mut map = self.nnd.lock().unwrap();
        Arc::clone(
            map.entry((d, n_sim))
                .or_insert_with(|| Arc::new(NndReferenceTable::new(d, n_sim, self.seed, self.cache_dir.clone()))),
        )
    }
}

// --------------------------------------------------------------- Clark–Evans

/// Moments of the nearest-neighbor distance under a Poisson process.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClarkEvansStats {
    /// Expected nearest-neighbor distance.
    pub mu: f64,
    /// Standard deviation of a single nearest-neighbor distance; divide by
    /// √n for the standard error of a mean over n points.
    pub sigma: f64,
    pub rho: f64,
    pub d: usize,
}

impl ClarkEvansStats {
    /// Z = (d̄ − μ) / (σ / √n).
    pub fn z_score(&self, mean_nnd: f64, n: usize) -> f64 {
        (mean_nnd - self.mu) / (self.sigma / (n as f64).sqrt())
    }
}

/// For intensity ρ in R^d, ρ·V_d·D^d is unit exponential, which gives
/// μ = Γ(1+1/d)·Γ(d/2+1)^{1/d} / (ρ^{1/d}√π) and
/// σ = Γ(d/2+1)^{1/d}·(Γ(1+2/d) − Γ(1+1/d)²)^{1/2} / (ρ^{1/d}√π).
/// At d = 2 these are 0.5/√ρ and 0.26136/√ρ.
pub fn clark_evans(rho: f64, d: usize) -> Result<ClarkEvansStats> {
    if !(rho > 0.0 && rho.is_finite()) || d == 0 {
        return Err(Error::input(format!("Clark–Evans needs ρ > 0 and d ≥ 1 (got {rho}, {d})")));
    }
    let df = d as f64;
    let base = gamma(df / 2.0 + 1.0).powf(1.0 / df) / (rho.powf(1.0 / df) * std::f64::consts::PI.sqrt());
    let g1 = gamma(1.0 + 1.0 / df);
    let g2 = gamma(1.0 + 2.0 / df);
    Ok(ClarkEvansStats { mu: g1 * base, sigma: (g2 - g1 * g1).sqrt() * base, rho, d })
}
