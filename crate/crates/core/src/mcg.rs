//! Mutual catch graphs and the D-MCG calibration of the density parameter.

use rayon::prelude::*;

use crate::ccd::ks_radii;
use crate::components::{connected_components, Partition};
use crate::csr::quantile_sorted;
use crate::dataset::Dataset;
use crate::digraph::CatchDigraph;
use crate::error::{Error, Result};
use crate::geometry::{ball_volume, distance_matrix, DistanceMatrix, NeighborOrder};
use crate::rng::{stream_rng, uniform_in_unit_ball, SimRng};
use crate::scalar::Scalar;

/// Steps in the default calibration ladder: Δ = δ0 / 50.
pub const DEFAULT_LADDER_STEPS: f64 = 50.0;

/// Undirected graph with {i, j} iff d(i, j) < min(r_i, r_j).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MutualCatchGraph {
    adj: Vec<Vec<usize>>,
}

impl MutualCatchGraph {
    pub fn from_radii<T: Scalar>(dist: &DistanceMatrix<T>, radii: &[T]) -> Self {
        let n = dist.len();
        let mut adj = vec![Vec::new(); n];
        for i in 0..n {
            let row = dist.row(i);
            for j in (i + 1)..n {
                if row[j] < radii[i] && row[j] < radii[j] {
                    adj[i].push(j);
                    adj[j].push(i);
                }
            }
        }
        MutualCatchGraph { adj }
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn adjacency(&self) -> &[Vec<usize>] {
        &self.adj
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adj[i].binary_search(&j).is_ok()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj.iter().enumerate().flat_map(|(i, l)| l.iter().filter(move |&&j| j > i).map(move |&j| (i, j)))
    }

    pub fn components(&self) -> Partition {
        connected_components(&self.adj)
    }

    pub fn is_connected(&self) -> bool {
        self.components().block_count() <= 1
    }
}

pub fn build_mcg<T: Scalar>(g: &CatchDigraph<T>, dist: &DistanceMatrix<T>) -> MutualCatchGraph {
    MutualCatchGraph::from_radii(dist, g.radii())
}

/// δ0 = 2·n_core / V_d(r_ball): twice the empirical intensity of a core ball.
/// A zero radius falls back to unit volume.
pub fn default_delta0(n_core: usize, d: usize, r_ball: f64) -> f64 {
    let v = ball_volume(d, r_ball);
    2.0 * n_core.max(1) as f64 / if v > 0.0 { v } else { 1.0 }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Calibration {
    pub delta: f64,
    /// The ladder ran out before the MCG connected; `delta` is its last rung.
    pub floored: bool,
    /// Number of δ values tried.
    pub iterations: usize,
}

fn ladder_top_down<T: Scalar>(dist: &DistanceMatrix<T>, d: usize, delta0: f64, step: f64) -> Result<Calibration> {
    if !(delta0 > 0.0 && step > 0.0) {
        return Err(Error::input(format!("calibration needs δ0 > 0 and Δ > 0 (got {delta0}, {step})")));
    }
    let n = dist.len();
    let order = NeighborOrder::new(dist);
    let mut last = delta0;
    let mut k = 0usize;
    loop {
        let delta = delta0 - k as f64 * step;
        if delta <= 0.0 {
            return Ok(Calibration { delta: last, floored: true, iterations: k });
        }
        let radii = ks_radii(&order, n, delta, d);
        if MutualCatchGraph::from_radii(dist, &radii).is_connected() {
            return Ok(Calibration { delta, floored: false, iterations: k + 1 });
        }
        last = delta;
        k += 1;
    }
}

/// The largest δ on the ladder δ0, δ0 − Δ, … (> 0) at which the MCG of the
/// KS-CCD on `core` is connected.
pub fn dmcg_calibrate<T: Scalar>(
    core: &[usize],
    dist: &DistanceMatrix<T>,
    d: usize,
    delta0: f64,
    delta_step: f64,
) -> Result<Calibration> {
    if core.is_empty() {
        return Err(Error::input("calibration core is empty"));
    }
    ladder_top_down(&dist.restrict(core), d, delta0, delta_step)
}

/// Doublings tried by [`bracket_delta0`] before giving up.
pub const MAX_BRACKET_DOUBLINGS: usize = 64;

/// Raises a starting δ by doubling until the core's MCG is disconnected, so
/// that the descending ladder starts above the connectivity threshold.
/// Returns `delta0` unchanged when it already disconnects, or when the core
/// stays connected at every δ (fewer than two points, or duplicates).
pub fn bracket_delta0<T: Scalar>(core: &[usize], dist: &DistanceMatrix<T>, d: usize, delta0: f64) -> Result<f64> {
    if !delta0.is_finite() || delta0 <= 0.0 {
        return Err(Error::input(format!("calibration needs δ0 > 0 (got {delta0})")));
    }
    if core.len() < 2 {
        return Ok(delta0);
    }
    let sub = dist.restrict(core);
    let order = NeighborOrder::new(&sub);
    let mut delta = delta0;
    for _ in 0..=MAX_BRACKET_DOUBLINGS {
        let radii = ks_radii(&order, core.len(), delta, d);
        if !MutualCatchGraph::from_radii(&sub, &radii).is_connected() {
            return Ok(delta);
        }
        delta *= 2.0;
    }
    Ok(delta0)
}

/// Which tail of the simulated δ sample sets the threshold.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum QuantileSide {
    #[default]
    Lower,
    Upper,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DmcgOutcome {
    pub delta_alpha: f64,
    /// Per-simulation connectivity thresholds, in simulation order.
    pub simulated: Vec<f64>,
    pub components: Partition,
}

impl DmcgOutcome {
    /// True when the data formed a single component (the null is retained).
    pub fn single_component(&self) -> bool {
        self.components.block_count() == 1
    }
}

/// n uniform points in the unit ball of R^d.
pub fn unit_ball_null<T: Scalar>(rng: &mut SimRng, n: usize, d: usize) -> Dataset<T> {
    let mut p = vec![0.0; d];
    let mut coords = Vec::with_capacity(n * d);
    for _ in 0..n {
        uniform_in_unit_ball(rng, &mut p);
        coords.extend(p.iter().map(|&x| T::of_f64(x)));
    }
    Dataset::from_flat(d, coords).expect("simulated points are finite")
}

/// Monte Carlo δ threshold: calibrate δ on `m` null datasets of the same size, take the
/// α_q quantile of their connectivity thresholds, and report the MCG
/// components of the real data at that δ.
#[allow(clippy::too_many_arguments)]
pub fn dmcg_full<T, F>(
    data: &Dataset<T>,
    dist: &DistanceMatrix<T>,
    sampler: F,
    delta0: f64,
    delta_step: f64,
    m: usize,
    alpha_q: f64,
    side: QuantileSide,
    seed: u64,
) -> Result<DmcgOutcome>
where
    T: Scalar,
    F: Fn(&mut SimRng, usize, usize) -> Dataset<T> + Sync,
{
    let (n, d) = (data.len(), data.dim());
    if m == 0 || !(0.0..=1.0).contains(&alpha_q) {
        return Err(Error::input(format!("D-MCG needs m ≥ 1 and α in [0, 1] (got {m}, {alpha_q})")));
    }
    let simulated: Vec<f64> = (0..m)
        .into_par_iter()
        .map(|j| {
            let sim = sampler(&mut stream_rng(seed, &[j as u64]), n, d);
            if sim.len() != n || sim.dim() != d {
                return Err(Error::input(format!("sampler produced {}×{}, expected {n}×{d}", sim.len(), sim.dim())));
            }
            Ok(ladder_top_down(&distance_matrix(&sim), d, delta0, delta_step)?.delta)
        })
        .collect::<Result<_>>()?;
    let mut sorted = simulated.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let p = match side {
        QuantileSide::Lower => alpha_q,
        QuantileSide::Upper => 1.0 - alpha_q,
    };
    let delta_alpha = quantile_sorted(&sorted, p);
    let radii = ks_radii(&NeighborOrder::new(dist), n, delta_alpha, d);
    let components = MutualCatchGraph::from_radii(dist, &radii).components();
    Ok(DmcgOutcome { delta_alpha, simulated, components })
}
