//! Cluster catch digraphs: covering-ball radii, dominating balls, and the
//! silhouette-driven choice of clusters.

use std::cell::RefCell;

use rayon::prelude::*;

use crate::components::connected_components;
use crate::csr::{holm_pair_rejects, k_from_hist, mean_median, bin_pair, CsrContext, KEnvelopeTable, NndReference, RipleyParams, DEFAULT_NND_SIMS};
use crate::dataset::Dataset;
use crate::digraph::{build_digraph, CatchDigraph, CoveringBall, Digraph};
use crate::error::{Error, Result};
use crate::geometry::{DistanceMatrix, NeighborOrder};
use crate::mcg::MutualCatchGraph;
use crate::mds::{greedy_mds_scored, greedy_mds_v1, greedy_mds_v2};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    Ks,
    Rk,
    Un,
}

/// δ for the KS objective plus the calibration ladder δ0, δ0 − Δ, …
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DensityParams {
    pub delta: f64,
    pub delta0: f64,
    pub delta_step: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ScanDirection {
    #[default]
    Ascending,
    Descending,
}

/// A radius together with whether its ball was accepted untested (fewer
/// than two non-center points).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Radius<T> {
    pub radius: T,
    pub degenerate: bool,
}

// ------------------------------------------------------------------ KS radius

#[inline]
fn ks_objective(caught: usize, r: f64, delta: f64, d: usize) -> f64 {
    caught as f64 - delta * r.powi(d as i32)
}

fn ks_from_breakpoints<T: Scalar>(bps: &[(T, usize)], others: usize, delta: f64, d: usize) -> T {
    // r → 0⁺ catches only the center.
    let (mut best, mut best_r) = (ks_objective(1, 0.0, delta, d), T::zero());
    for (k, &(r, _)) in bps.iter().enumerate() {
        let within = bps.get(k + 1).map_or(others, |&(_, c)| c);
        let t = ks_objective(1 + within, r.as_f64(), delta, d);
        if t > best {
            best = t;
            best_r = r;
        }
    }
    just_above(best_r)
}

/// The smallest representable value above `r` (for r ≥ 0).
pub fn just_above<T: Scalar>(r: T) -> T {
    if r == T::zero() {
        return r;
    }
    let up = r + r * T::epsilon();
    if up > r { up } else { r + T::min_positive_value() }
}

/// sup over r ≥ 0 of T_KS(r) = F(r) − δ·r^d, where F(r) counts the points
/// strictly inside B(x_i, r), x_i included. F is left-continuous and steps
/// up just past each distance while the penalty grows, so the supremum is
/// approached as r ↓ d(i, j) for some j (or r ↓ 0); we return the radius one
/// ulp above the winning distance so that its ball really catches every
/// point at that distance. Ties go to the smaller radius.
pub fn ks_radius<T: Scalar>(i: usize, dist: &DistanceMatrix<T>, delta: f64, d: usize) -> T {
    let mut row: Vec<T> = dist.row(i).iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &v)| v).collect();
    row.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut bps = Vec::with_capacity(row.len());
    for (k, &r) in row.iter().enumerate() {
        if bps.last().is_none_or(|&(last, _)| r > last) {
            bps.push((r, k));
        }
    }
    ks_from_breakpoints(&bps, row.len(), delta, d)
}

pub fn ks_radii<T: Scalar>(order: &NeighborOrder<T>, n: usize, delta: f64, d: usize) -> Vec<T> {
    (0..n).map(|i| ks_from_breakpoints(&order.breakpoints(i), n - 1, delta, d)).collect()
}

// ------------------------------------------------------------------ RK radius

/// Grow the ball through the sorted distances from x_i while its contents
/// (center included) stay inside the K̂ envelope; return the last radius
/// that passed.
///
/// Candidate r_k is tested on every point with d ≤ r_k, scaled by r_k, and a
/// passing candidate yields a radius one ulp above r_k so the ball really
/// holds what was tested (the KS convention).
pub fn rk_radius<T: Scalar>(
    i: usize,
    dist: &DistanceMatrix<T>,
    order: &NeighborOrder<T>,
    table: &KEnvelopeTable,
) -> Radius<T> {
    let grid = table.t_grid();
    let d = table.dim();
    let nbrs = order.of(i);
    let bps = order.breakpoints(i);
    let mut members = vec![i];
    let mut pairs: Vec<f64> = Vec::new();
    let mut hist = vec![0usize; grid.len()];
    let mut prev = Radius { radius: T::zero(), degenerate: true };
    for (k, &(r, _)) in bps.iter().enumerate() {
        let within = bps.get(k + 1).map_or(nbrs.len(), |&(_, c)| c);
        for &(_, q) in &nbrs[members.len() - 1..within] {
            let row = dist.row(q);
            pairs.extend(members.iter().map(|&m| row[m].as_f64()));
            members.push(q);
        }
        if within >= 2 {
            let rf = r.as_f64();
            hist.iter_mut().for_each(|h| *h = 0);
            for &p in &pairs {
                bin_pair(grid, p / rf, &mut hist);
            }
            let env = table.get(within + 1);
            if env.verdict(&k_from_hist(&hist, within + 1, d)).is_reject() {
                return prev;
            }
        }
        prev = Radius { radius: just_above(r), degenerate: within < 2 };
    }
    prev
}

// ------------------------------------------------------------------ UN radius

fn nnd_test(nnd: &[f64], scratch: &mut Vec<f64>, r: f64, reference: &NndReference, alpha: f64) -> Result<bool> {
    let sample = reference
        .sample(nnd.len())
        .ok_or_else(|| Error::input(format!("NND reference covers sizes up to {}, need {}", reference.n_max(), nnd.len())))?;
    scratch.clear();
    scratch.extend(nnd.iter().map(|v| v / r));
    let (mean, median) = mean_median(scratch);
    let (p1, p2) = sample.p_values(mean, median);
    Ok(holm_pair_rejects(p1, p2, alpha))
}

/// Radius from the NND test on the ball contents with the center removed,
/// using the same inclusive candidates as [`rk_radius`].
///
/// Ascending: stop at the first rejected candidate and return the one
/// before it (0 if none). Descending: the largest candidate that is retained.
pub fn un_radius<T: Scalar>(
    i: usize,
    dist: &DistanceMatrix<T>,
    order: &NeighborOrder<T>,
    reference: &NndReference,
    alpha: f64,
    direction: ScanDirection,
) -> Result<Radius<T>> {
    let nbrs = order.of(i);
    let bps = order.breakpoints(i);
    let within = |k: usize| bps.get(k + 1).map_or(nbrs.len(), |&(_, c)| c);
    let mut scratch = Vec::new();
    match direction {
        ScanDirection::Ascending => {
            let mut nnd: Vec<f64> = Vec::new();
            let mut prev = Radius { radius: T::zero(), degenerate: true };
            for (k, &(r, _)) in bps.iter().enumerate() {
                let w = within(k);
                for a in nnd.len()..w {
                    let row = dist.row(nbrs[a].1);
                    let mut own = f64::INFINITY;
                    for (m, v) in nnd.iter_mut().enumerate() {
                        let e = row[nbrs[m].1].as_f64();
                        *v = v.min(e);
                        own = own.min(e);
                    }
                    nnd.push(own);
                }
                if w >= 2 && nnd_test(&nnd, &mut scratch, r.as_f64(), reference, alpha)? {
                    return Ok(prev);
                }
                prev = Radius { radius: just_above(r), degenerate: w < 2 };
            }
            Ok(prev)
        }
        ScanDirection::Descending => {
            for (k, &(r, _)) in bps.iter().enumerate().rev() {
                let w = within(k);
                if w < 2 {
                    return Ok(Radius { radius: just_above(r), degenerate: true });
                }
                let mut nnd = vec![f64::INFINITY; w];
                for a in 0..w {
                    let row = dist.row(nbrs[a].1);
                    for b in (a + 1)..w {
                        let e = row[nbrs[b].1].as_f64();
                        nnd[a] = nnd[a].min(e);
                        nnd[b] = nnd[b].min(e);
                    }
                }
                if !nnd_test(&nnd, &mut scratch, r.as_f64(), reference, alpha)? {
                    return Ok(Radius { radius: just_above(r), degenerate: false });
                }
            }
            Ok(Radius { radius: T::zero(), degenerate: true })
        }
    }
}

// ------------------------------------------------------------------ CCDs

/// How covering-ball radii are chosen.
#[derive(Clone, Debug, PartialEq)]
pub enum CcdVariant {
    Ks { delta: f64 },
    Rk { alpha: f64, ripley: RipleyParams },
    Un { alpha: f64, n_sim: usize, direction: ScanDirection },
}

impl CcdVariant {
    pub fn rk(alpha: f64) -> Self {
        CcdVariant::Rk { alpha, ripley: RipleyParams::default() }
    }

    pub fn un(alpha: f64) -> Self {
        CcdVariant::Un { alpha, n_sim: DEFAULT_NND_SIMS, direction: ScanDirection::Ascending }
    }

    pub fn kind(&self) -> Variant {
        match self {
            CcdVariant::Ks { .. } => Variant::Ks,
            CcdVariant::Rk { .. } => Variant::Rk,
            CcdVariant::Un { .. } => Variant::Un,
        }
    }
}

/// A catch digraph plus, per point, whether its radius was accepted without
/// a test.
#[derive(Clone, Debug)]
pub struct Ccd<T> {
    pub digraph: CatchDigraph<T>,
    pub degenerate: Vec<bool>,
}

pub fn build_ccd<T: Scalar>(
    data: &Dataset<T>,
    dist: &DistanceMatrix<T>,
    variant: &CcdVariant,
    ctx: &CsrContext,
) -> Result<Ccd<T>> {
    let n = data.len();
    if dist.len() != n {
        return Err(Error::input(format!("distance matrix is {}×{0}, dataset has {n} points", dist.len())));
    }
    let d = data.dim();
    let order = NeighborOrder::new(dist);
    let radii: Vec<Radius<T>> = match variant {
        CcdVariant::Ks { delta } => {
            if !delta.is_finite() || *delta <= 0.0 {
                return Err(Error::input("KS-CCD needs δ > 0"));
            }
            ks_radii(&order, n, *delta, d).into_iter().map(|radius| Radius { radius, degenerate: false }).collect()
        }
        CcdVariant::Rk { alpha, ripley } => {
            let table = ctx.k_table(d, ripley, *alpha)?;
            table.ensure(n);
            (0..n).into_par_iter().map(|i| rk_radius(i, dist, &order, &table)).collect()
        }
        CcdVariant::Un { alpha, n_sim, direction } => {
            let reference = ctx.nnd_table(d, *n_sim).get(n.saturating_sub(1).max(2))?;
            (0..n)
                .into_par_iter()
                .map(|i| un_radius(i, dist, &order, &reference, *alpha, *direction))
                .collect::<Result<_>>()?
        }
    };
    let degenerate = radii.iter().map(|r| r.degenerate).collect();
    let digraph = build_digraph(dist, radii.into_iter().map(|r| r.radius).collect())?;
    Ok(Ccd { digraph, degenerate })
}

// ------------------------------------------------------------ dominating balls

/// How the intersection graph of the first-phase balls is reduced.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pruning {
    /// Induced-out-degree greedy on the intersection graph.
    Greedy1,
    /// Score-driven greedy, scored by the number of data points a ball newly covers.
    CoveredCount,
}

impl Pruning {
    pub fn for_variant(v: Variant) -> Self {
        match v {
            Variant::Un => Pruning::CoveredCount,
            Variant::Ks | Variant::Rk => Pruning::Greedy1,
        }
    }
}

/// Intersection graph on `balls`: u ~ v when some data point lies strictly
/// inside both.
pub fn intersection_graph<T: Scalar>(balls: &[CoveringBall<T>], dist: &DistanceMatrix<T>) -> Digraph {
    let n = dist.len();
    let mut adj = vec![Vec::new(); balls.len()];
    let mut inside = Vec::new();
    for p in 0..n {
        inside.clear();
        inside.extend((0..balls.len()).filter(|&b| balls[b].contains(dist, p)));
        for (a, &u) in inside.iter().enumerate() {
            for &v in &inside[a + 1..] {
                adj[u].push(v);
                adj[v].push(u);
            }
        }
    }
    Digraph::from_out_lists(adj).expect("intersection graph is well formed")
}

/// Two-phase reduction: out-degree greedy on the CCD, then a greedy
/// dominating set of the resulting balls' intersection graph.
pub fn dominating_balls<T: Scalar>(g: &CatchDigraph<T>, dist: &DistanceMatrix<T>, pruning: Pruning) -> Vec<CoveringBall<T>> {
    let first: Vec<CoveringBall<T>> = greedy_mds_v2(g).members.into_iter().map(|c| g.ball(c)).collect();
    let gmd = intersection_graph(&first, dist);
    let kept = match pruning {
        Pruning::Greedy1 => greedy_mds_v1(&gmd),
        Pruning::CoveredCount => {
            let contents: Vec<Vec<usize>> = first.iter().map(|b| b.members(dist)).collect();
            // Data points covered by the balls chosen so far, refreshed when
            // the greedy loop has taken another ball.
            let covered = RefCell::new((0usize, vec![false; dist.len()]));
            greedy_mds_scored(
                &gmd,
                |v, state| {
                    let mut c = covered.borrow_mut();
                    let (seen, mask) = &mut *c;
                    for &m in &state.members()[*seen..] {
                        contents[m].iter().for_each(|&p| mask[p] = true);
                    }
                    *seen = state.members().len();
                    contents[v].iter().filter(|&&p| !mask[p]).count() as f64
                },
                |_, _| false,
            )
        }
    };
    kept.members.into_iter().map(|k| first[k]).collect()
}

// ------------------------------------------------------------------ silhouette

/// Mean silhouette of the partition given by `labels` (arbitrary block ids).
/// Singleton blocks score 0.
pub fn silhouette<T: Scalar>(dist: &DistanceMatrix<T>, labels: &[usize]) -> Result<f64> {
    let n = dist.len();
    if labels.len() != n {
        return Err(Error::input(format!("{} labels for {n} points", labels.len())));
    }
    let part = crate::components::Partition::from_labels(labels);
    let k = part.block_count();
    if k < 2 {
        return Err(Error::input("silhouette needs at least two blocks"));
    }
    let lab = part.labels();
    let sizes: Vec<usize> = part.blocks().iter().map(Vec::len).collect();
    let mut sums = vec![0.0; k];
    let mut total = 0.0;
    for i in 0..n {
        let own = lab[i];
        if sizes[own] == 1 {
            continue;
        }
        sums.iter_mut().for_each(|s| *s = 0.0);
        for (j, &v) in dist.row(i).iter().enumerate() {
            sums[lab[j]] += v.as_f64();
        }
        let a = sums[own] / (sizes[own] - 1) as f64;
        let b = (0..k).filter(|&c| c != own).map(|c| sums[c] / sizes[c] as f64).fold(f64::INFINITY, f64::min);
        let m = a.max(b);
        if m > 0.0 {
            total += (b - a) / m;
        }
    }
    Ok(total / n as f64)
}

// ------------------------------------------------------------------ clusters

/// Relative distance ρ(x, B(c, r)) = d(x, c)/r. A zero-radius ball is at
/// infinity unless x coincides with its center.
#[inline]
pub fn relative_distance<T: Scalar>(dist: &DistanceMatrix<T>, x: usize, ball: &CoveringBall<T>) -> f64 {
    let d = dist.get(x, ball.center).as_f64();
    let r = ball.radius.as_f64();
    if r > 0.0 {
        d / r
    } else if d == 0.0 {
        0.0
    } else {
        f64::INFINITY
    }
}

/// Nearest cluster of every point by relative distance to the clusters' core
/// balls. The second vector marks points for which every ρ was infinite and
/// the nearest center by raw distance was used instead.
pub fn assign_by_rho<T: Scalar>(dist: &DistanceMatrix<T>, balls: &[&[CoveringBall<T>]]) -> (Vec<usize>, Vec<bool>) {
    let n = dist.len();
    let mut label = vec![0; n];
    let mut fallback = vec![false; n];
    for x in 0..n {
        let mut best = (f64::INFINITY, 0);
        for (c, bs) in balls.iter().enumerate() {
            for b in bs.iter() {
                let r = relative_distance(dist, x, b);
                if r < best.0 {
                    best = (r, c);
                }
            }
        }
        if best.0.is_infinite() {
            fallback[x] = true;
            let mut near = (f64::INFINITY, 0);
            for (c, bs) in balls.iter().enumerate() {
                for b in bs.iter() {
                    let v = dist.get(x, b.center).as_f64();
                    if v < near.0 {
                        near = (v, c);
                    }
                }
            }
            best = near;
        }
        label[x] = best.1;
    }
    (label, fallback)
}

/// A prospective cluster: its core balls and the points they cover.
#[derive(Clone, Debug, PartialEq)]
pub struct Candidate<T> {
    pub balls: Vec<CoveringBall<T>>,
    /// Sorted point ids inside the union of `balls`.
    pub members: Vec<usize>,
}

impl<T: Scalar> Candidate<T> {
    pub fn from_ball(ball: CoveringBall<T>, dist: &DistanceMatrix<T>) -> Self {
        Candidate { members: ball.members(dist), balls: vec![ball] }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Cluster<T> {
    pub core_balls: Vec<CoveringBall<T>>,
    /// Points inside the core balls (the set outliers are tested against).
    pub core: Vec<usize>,
    /// All points assigned to the cluster; empty until stragglers are assigned.
    pub members: Vec<usize>,
    pub delta: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClusterModel<T> {
    pub clusters: Vec<Cluster<T>>,
    pub variant: Variant,
    pub alpha: f64,
    pub s_min: Option<usize>,
    /// Points of candidates discarded for being smaller than S_min that are
    /// not in any selected core; reported as outliers outright.
    pub rejected: Vec<usize>,
    /// Some candidates shared their whole coverage with a larger one.
    pub shared_coverage: bool,
    /// Points assigned by raw center distance because every ρ was infinite.
    pub fallback_assignments: usize,
}

impl<T: Scalar> ClusterModel<T> {
    pub const STRAGGLER_POLICY: &'static str =
        "points outside every core join the cluster minimizing d(x, c)/r over its core balls";

    /// Cluster id per point (requires assigned members).
    pub fn labels(&self, n: usize) -> Vec<usize> {
        let mut l = vec![usize::MAX; n];
        for (c, cl) in self.clusters.iter().enumerate() {
            for &m in &cl.members {
                l[m] = c;
            }
        }
        l
    }
}

fn rho_labels<T: Scalar>(dist: &DistanceMatrix<T>, chosen: &[&Candidate<T>]) -> Vec<usize> {
    let balls: Vec<&[CoveringBall<T>]> = chosen.iter().map(|c| c.balls.as_slice()).collect();
    assign_by_rho(dist, &balls).0
}

fn partition_silhouette<T: Scalar>(dist: &DistanceMatrix<T>, chosen: &[&Candidate<T>]) -> f64 {
    silhouette(dist, &rho_labels(dist, chosen)).unwrap_or(f64::NEG_INFINITY)
}

/// Turns the candidates into disjoint blocks ranked by size (greedily, by
/// members not already claimed by a higher-ranked block), then keeps the
/// prefix of at least two blocks whose induced partition (every point to its
/// nearest chosen cluster by ρ) has the largest mean silhouette. Blocks
/// smaller than `s_min` end the prefix. A multi-cluster model needs a
/// positive silhouette; otherwise the largest block alone is the model. Candidates left with no unclaimed members are dropped and noted in
/// `shared_coverage`.
pub fn select_clusters<T: Scalar>(
    mut candidates: Vec<Candidate<T>>,
    dist: &DistanceMatrix<T>,
    s_min: Option<usize>,
    variant: Variant,
    alpha: f64,
) -> Result<ClusterModel<T>> {
    if candidates.is_empty() {
        return Err(Error::input("cluster selection needs at least one candidate"));
    }
    // Coverages may overlap; each point goes to the first candidate, in
    // greedy order of unclaimed members, that covers it.
    let n = dist.len();
    let mut claimed = vec![false; n];
    let mut ranked: Vec<Candidate<T>> = Vec::with_capacity(candidates.len());
    let mut shared = false;
    while !candidates.is_empty() {
        let residual = |c: &Candidate<T>| c.members.iter().filter(|&&m| !claimed[m]).count();
        let (best, size) = candidates
            .iter()
            .enumerate()
            .map(|(i, c)| (i, residual(c)))
            .fold((0, 0), |acc, (i, r)| if r > acc.1 { (i, r) } else { acc });
        if size == 0 {
            shared = candidates.iter().any(|c| !c.members.is_empty());
            break;
        }
        let mut c = candidates.swap_remove(best);
        c.members.retain(|&m| !claimed[m]);
        c.members.iter().for_each(|&m| claimed[m] = true);
        ranked.push(c);
    }
    if ranked.is_empty() {
        return Err(Error::input("cluster selection needs a candidate covering at least one point"));
    }
    let min = s_min.unwrap_or(0);
    // The top candidate is kept even below S_min so the model is never empty.
    let eligible = 1 + ranked[1..].iter().take_while(|c| c.members.len() >= min).count();

    let mut k = 1;
    if eligible >= 2 {
        let mut best = 0.0;
        for m in 2..=eligible {
            let chosen: Vec<&Candidate<T>> = ranked[..m].iter().collect();
            let s = partition_silhouette(dist, &chosen);
            if s > best {
                best = s;
                k = m;
            }
        }
    }

    let mut in_core = vec![false; n];
    for c in &ranked[..k] {
        c.members.iter().for_each(|&m| in_core[m] = true);
    }
    let mut rejected: Vec<usize> = ranked[eligible..]
        .iter()
        .flat_map(|c| c.members.iter().copied())
        .filter(|&m| !in_core[m])
        .collect();
    rejected.sort_unstable();
    rejected.dedup();

    let clusters = ranked
        .into_iter()
        .take(k)
        .map(|c| Cluster { core_balls: c.balls, core: c.members, members: Vec::new(), delta: None })
        .collect();
    Ok(ClusterModel { clusters, variant, alpha, s_min, rejected, shared_coverage: shared, fallback_assignments: 0 })
}

/// Completes the partition. Core points join their own cluster (the one with
/// the smallest ρ if cores overlap); every other point joins the cluster
/// with the smallest ρ over its core balls.
pub fn assign_stragglers<T: Scalar>(mut model: ClusterModel<T>, dist: &DistanceMatrix<T>) -> ClusterModel<T> {
    let n = dist.len();
    let balls: Vec<&[CoveringBall<T>]> = model.clusters.iter().map(|c| c.core_balls.as_slice()).collect();
    let (mut label, fallback) = assign_by_rho(dist, &balls);
    let mut owners: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (c, cl) in model.clusters.iter().enumerate() {
        cl.core.iter().for_each(|&m| owners[m].push(c));
    }
    for x in 0..n {
        if !owners[x].is_empty() && !owners[x].contains(&label[x]) {
            label[x] = owners[x][0];
        }
    }
    model.fallback_assignments = fallback.iter().zip(&owners).filter(|(f, o)| **f && o.is_empty()).count();
    for cl in &mut model.clusters {
        cl.members.clear();
    }
    for (x, &c) in label.iter().enumerate() {
        model.clusters[c].members.push(x);
    }
    model
}

/// For each dominating ball, the union of the covering balls of every point
/// in its center's MCG component, with the points inside that union.
pub fn extend_coverage<T: Scalar>(
    g: &CatchDigraph<T>,
    mcg: &MutualCatchGraph,
    balls: &[CoveringBall<T>],
    dist: &DistanceMatrix<T>,
) -> Vec<Candidate<T>> {
    let comps = connected_components(mcg.adjacency());
    let n = dist.len();
    balls
        .iter()
        .map(|b| {
            let comp = &comps.blocks()[comps.block_of(b.center)];
            let mut union = vec![*b];
            union.extend(comp.iter().filter(|&&p| p != b.center).map(|&p| g.ball(p)));
            let mut inside = vec![false; n];
            for ball in &union {
                let row = dist.row(ball.center);
                for (j, f) in inside.iter_mut().enumerate() {
                    *f |= row[j] < ball.radius;
                }
            }
            Candidate { balls: union, members: (0..n).filter(|&j| inside[j]).collect() }
        })
        .collect()
}
