use ccd_core::ccd::{
    assign_by_rho, assign_stragglers, build_ccd, dominating_balls, extend_coverage, intersection_graph, just_above,
    ks_radii, ks_radius, select_clusters, silhouette, un_radius, Candidate, CcdVariant, Cluster, ClusterModel, Pruning,
    ScanDirection,
};
use ccd_core::csr::{srmct_nnd, srmct_ripley, CsrVerdict, NndReference, RipleyParams};
use ccd_core::digraph::build_digraph;
use ccd_core::geometry::NeighborOrder;
use ccd_core::mcg::{build_mcg, MutualCatchGraph};
use ccd_core::rng::{stream_rng, uniform_in_ball};
use ccd_core::synth::{gen_scene, ClusterKind, SceneSpec};
use ccd_core::{distance_matrix, CoveringBall, CsrContext, Dataset, DistanceMatrix, Variant};
use proptest::prelude::*;
use rand::Rng;

fn blob(seed: u64, center: &[f64], radius: f64, count: usize) -> Vec<Vec<f64>> {
    let mut rng = stream_rng(seed, &[]);
    (0..count).map(|_| uniform_in_ball(&mut rng, center, radius)).collect()
}

/// RK with a simulation count large enough to resolve the split tail levels.
fn rk_resolved(alpha: f64) -> CcdVariant {
    CcdVariant::Rk { alpha, ripley: RipleyParams { n_sim: 1000, ..RipleyParams::default() } }
}

fn dataset(points: Vec<Vec<f64>>) -> (Dataset<f64>, DistanceMatrix<f64>) {
    let data = Dataset::new(points).unwrap();
    let dist = distance_matrix(&data);
    (data, dist)
}

// ------------------------------------------------------------------ KS radius

/// F(r) − δr^d with F(r) = #{j : d(i, j) < r}, the center included for r > 0.
fn t_ks(dist: &DistanceMatrix<f64>, i: usize, r: f64, delta: f64, d: usize) -> f64 {
    let caught = (0..dist.len()).filter(|&j| dist.get(i, j) < r).count();
    caught as f64 - delta * r.powi(d as i32)
}

/// The supremum by brute force: the value approached as r ↓ 0 and as r ↓ each
/// distance, with the smallest such radius on ties.
fn ks_sup(dist: &DistanceMatrix<f64>, i: usize, delta: f64, d: usize) -> (f64, f64) {
    let mut cands: Vec<f64> = (0..dist.len()).filter(|&j| j != i).map(|j| dist.get(i, j)).collect();
    cands.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut best = (1.0, 0.0);
    for &c in &cands {
        let caught = (0..dist.len()).filter(|&j| dist.get(i, j) <= c).count();
        let v = caught as f64 - delta * c.powi(d as i32);
        if v > best.0 {
            best = (v, c);
        }
    }
    best
}

#[test]
fn isolated_point_keeps_a_zero_ball() {
    let mut pts = vec![vec![0.0, 0.0]];
    pts.extend(blob(1, &[8.0, 0.0], 1.0, 10));
    let (_, dist) = dataset(pts);
    assert_eq!(ks_radius(0, &dist, 10.0, 2), 0.0);
}

#[test]
fn vanishing_penalty_reaches_the_farthest_point() {
    let (_, dist) = dataset(blob(2, &[0.0, 0.0], 3.0, 15));
    for i in 0..15 {
        let far = (0..15).map(|j| dist.get(i, j)).fold(0.0, f64::max);
        assert_eq!(ks_radius(i, &dist, 1e-12, 2), just_above(far));
    }
}

#[test]
fn ks_radius_matches_brute_force_on_random_instances() {
    for seed in 0..200u64 {
        let mut rng = stream_rng(seed, &[7]);
        let d = 1 + seed as usize % 3;
        let delta = if seed < 50 { 1.0 } else { 10f64.powf(rng.random_range(-2.0..2.0)) };
        let pts: Vec<Vec<f64>> = (0..12).map(|_| (0..d).map(|_| rng.random_range(0.0..3.0)).collect()).collect();
        let (_, dist) = dataset(pts);
        let far = dist.max();
        for i in 0..12 {
            let r = ks_radius(i, &dist, delta, d);
            let (best, at) = ks_sup(&dist, i, delta, d);
            assert_eq!(r, just_above(at), "seed {seed}, point {i}");
            // The returned ball attains the supremum (up to the ulp) …
            if r > 0.0 {
                assert!((t_ks(&dist, i, r, delta, d) - best).abs() < 1e-9);
            }
            // … and nothing on a fine grid beats it.
            for k in 1..=3000 {
                let g = far * 1.2 * k as f64 / 3000.0;
                assert!(t_ks(&dist, i, g, delta, d) <= best + 1e-9, "seed {seed}, point {i}, r {g}");
            }
        }
    }
}

#[test]
fn ks_radii_agree_with_the_single_point_form() {
    let (_, dist) = dataset(blob(4, &[0.0, 0.0, 0.0], 2.0, 40));
    let order = NeighborOrder::new(&dist);
    let all = ks_radii(&order, 40, 3.0, 3);
    for (i, r) in all.iter().enumerate() {
        assert_eq!(*r, ks_radius(i, &dist, 3.0, 3));
    }
}

proptest! {
    #[test]
    fn ks_radius_never_grows_with_delta(seed in any::<u64>(), a in 0.01f64..50.0, b in 0.01f64..50.0) {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let (_, dist) = dataset(blob(seed, &[0.0, 0.0], 2.0, 25));
        for i in 0..25 {
            prop_assert!(ks_radius(i, &dist, hi, 2) <= ks_radius(i, &dist, lo, 2));
        }
    }
}

#[test]
fn ks_ccd_rejects_bad_delta() {
    let (data, dist) = dataset(blob(1, &[0.0], 1.0, 5));
    let ctx = CsrContext::default();
    for delta in [0.0, -1.0, f64::NAN] {
        assert!(build_ccd(&data, &dist, &CcdVariant::Ks { delta }, &ctx).unwrap_err().is_input());
    }
}

// ------------------------------------------------------------------ RK radius

#[test]
fn rk_radius_stops_at_the_planted_cluster_edge() {
    let ctx = CsrContext::default();
    let runs = 50;
    let mut exact = 0;
    for seed in 0..runs {
        let mut pts = vec![vec![0.0, 0.0]];
        pts.extend(blob(seed, &[0.0, 0.0], 1.0, 29));
        pts.extend(blob(seed + 1000, &[8.0, 0.0], 1.0, 30));
        let (data, dist) = dataset(pts);
        let ccd = build_ccd(&data, &dist, &rk_resolved(0.01), &ctx).unwrap();
        if ccd.digraph.graph().out_degree(0) + 1 == 30 {
            exact += 1;
        }
    }
    assert!(exact as f64 >= 0.9 * runs as f64, "{exact}/{runs}");
}

#[test]
fn rk_pair_covers_its_neighbor_untested() {
    let (data, dist) = dataset(vec![vec![0.0, 0.0], vec![1.0, 1.0]]);
    let ccd = build_ccd(&data, &dist, &CcdVariant::rk(0.01), &CsrContext::default()).unwrap();
    assert!(ccd.digraph.graph().has_arc(0, 1) && ccd.digraph.graph().has_arc(1, 0));
    assert_eq!(ccd.degenerate, vec![true, true]);
}

#[test]
fn rk_radii_are_deterministic() {
    let (data, dist) = dataset(blob(3, &[0.0, 0.0], 1.0, 60));
    let a = build_ccd(&data, &dist, &CcdVariant::rk(0.01), &CsrContext::new(5)).unwrap();
    let b = build_ccd(&data, &dist, &CcdVariant::rk(0.01), &CsrContext::new(5)).unwrap();
    assert_eq!(a.digraph.radii(), b.digraph.radii());
}

/// Contents of B(x_i, r) as the tests see them: centered and scaled by the
/// candidate distance `scale`.
fn scaled_contents(data: &Dataset<f64>, dist: &DistanceMatrix<f64>, i: usize, upto: f64, scale: f64, center: bool) -> Vec<Vec<f64>> {
    (0..data.len())
        .filter(|&j| (center || j != i) && dist.get(i, j) <= upto)
        .map(|j| data.point(j).iter().zip(data.point(i)).map(|(x, c)| (x - c) / scale).collect())
        .collect()
}

#[test]
fn rk_radius_is_the_last_passing_candidate() {
    let ctx = CsrContext::default();
    let params = RipleyParams::default();
    let table = ctx.k_table(2, &params, 0.01).unwrap();
    for seed in 0..10 {
        let mut pts = blob(seed, &[0.0, 0.0], 1.0, 40);
        pts.extend(blob(seed + 50, &[3.0, 0.0], 0.5, 20));
        let (data, dist) = dataset(pts);
        let ccd = build_ccd(&data, &dist, &CcdVariant::rk(0.01), &ctx).unwrap();
        let order = NeighborOrder::new(&dist);
        for i in (0..60).step_by(7) {
            let r = ccd.digraph.radius(i);
            let bps: Vec<f64> = order.breakpoints(i).iter().map(|b| b.0).collect();
            let k = bps.iter().position(|&b| just_above(b) == r);
            let passes = |b: f64| {
                let c = scaled_contents(&data, &dist, i, b, b, true);
                c.len() < 3 || !srmct_ripley(&c, &table.get(c.len())).unwrap().is_reject()
            };
            match k {
                Some(k) => {
                    assert!(bps[..=k].iter().all(|&b| passes(b)));
                    if let Some(&next) = bps.get(k + 1) {
                        assert!(!passes(next));
                    }
                }
                None => assert!(r == 0.0 && !passes(bps[0])),
            }
        }
    }
}

// ------------------------------------------------------------------ UN radius

#[test]
fn un_radius_excludes_a_far_point() {
    let mut pts = vec![vec![0.0, 0.0]];
    pts.extend(blob(5, &[0.0, 0.0], 0.01, 20));
    pts.push(vec![10.0, 0.0]);
    let (_, dist) = dataset(pts);
    let order = NeighborOrder::new(&dist);
    let reference = NndReference::build(2, 30, 1000, 1).unwrap();
    let r = un_radius(0, &dist, &order, &reference, 0.05, ScanDirection::Ascending).unwrap();
    assert!(r.radius > 0.0 && r.radius < 10.0);
    assert!(!r.degenerate);
}

#[test]
fn un_radius_of_a_lone_point_is_zero() {
    let (_, dist) = dataset(vec![vec![1.0, 2.0]]);
    let reference = NndReference::build(2, 4, 100, 1).unwrap();
    for dir in [ScanDirection::Ascending, ScanDirection::Descending] {
        let r = un_radius(0, &dist, &NeighborOrder::new(&dist), &reference, 0.05, dir).unwrap();
        assert_eq!(r.radius, 0.0);
    }
}

#[test]
fn un_scan_directions_mostly_agree_under_csr() {
    let reference = NndReference::build(2, 40, 1000, 3).unwrap();
    let trials = 100;
    let agree = (0..trials)
        .filter(|&s| {
            let mut pts = vec![vec![0.0, 0.0]];
            pts.extend(blob(s, &[0.0, 0.0], 1.0, 39));
            let (_, dist) = dataset(pts);
            let order = NeighborOrder::new(&dist);
            let up = un_radius(0, &dist, &order, &reference, 0.01, ScanDirection::Ascending).unwrap();
            let down = un_radius(0, &dist, &order, &reference, 0.01, ScanDirection::Descending).unwrap();
            up.radius == down.radius
        })
        .count();
    assert!(agree as f64 >= 0.8 * trials as f64, "{agree}/{trials}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn un_ascending_contract(seed in any::<u64>()) {
        let mut pts = blob(seed, &[0.0, 0.0], 1.0, 25);
        pts.extend(blob(seed ^ 1, &[2.5, 0.0], 0.3, 15));
        let (data, dist) = dataset(pts);
        let reference = NndReference::build(2, 40, 500, 9).unwrap();
        let order = NeighborOrder::new(&dist);
        for i in [0, 13, 30] {
            let r = un_radius(i, &dist, &order, &reference, 0.05, ScanDirection::Ascending).unwrap().radius;
            let bps: Vec<f64> = order.breakpoints(i).iter().map(|b| b.0).collect();
            let verdict = |b: f64| srmct_nnd(&scaled_contents(&data, &dist, i, b, 1.0, false), b, &reference, 0.05).unwrap();
            match bps.iter().position(|&b| just_above(b) == r) {
                Some(k) => {
                    prop_assert!(!verdict(bps[k]).is_reject());
                    if let Some(&next) = bps.get(k + 1) {
                        prop_assert_eq!(verdict(next), CsrVerdict::Reject);
                    }
                }
                None => {
                    prop_assert_eq!(r, 0.0);
                    prop_assert_eq!(verdict(bps[0]), CsrVerdict::Reject);
                }
            }
        }
    }
}

// ------------------------------------------------------------ dominating balls

#[test]
fn separated_clusters_give_one_ball_each() {
    let ctx = CsrContext::default();
    let runs = 40;
    let mut hits = [0; 2];
    for seed in 0..runs {
        let mut pts = blob(seed, &[0.0, 0.0], 1.0, 50);
        pts.extend(blob(seed + 500, &[10.0, 0.0], 1.0, 50));
        let (data, dist) = dataset(pts);
        for (k, variant) in [rk_resolved(0.01), CcdVariant::un(0.01)].iter().enumerate() {
            let ccd = build_ccd(&data, &dist, variant, &ctx).unwrap();
            let balls = dominating_balls(&ccd.digraph, &dist, Pruning::for_variant(variant.kind()));
            let left = balls.iter().filter(|b| b.center < 50).count();
            if balls.len() == 2 && left == 1 {
                hits[k] += 1;
            }
        }
    }
    for h in hits {
        assert!(h as f64 >= 0.95 * runs as f64, "{hits:?}");
    }
}

#[test]
fn one_cluster_gives_one_ball() {
    let (data, dist) = dataset(blob(8, &[0.0, 0.0], 1.0, 80));
    let ccd = build_ccd(&data, &dist, &CcdVariant::rk(0.01), &CsrContext::default()).unwrap();
    assert_eq!(dominating_balls(&ccd.digraph, &dist, Pruning::Greedy1).len(), 1);
}

#[test]
fn disjoint_first_phase_balls_all_survive() {
    let (_, dist) = dataset(vec![vec![0.0], vec![1.0], vec![10.0], vec![11.0]]);
    let g = build_digraph(&dist, vec![1.5, 0.0, 1.5, 0.0]).unwrap();
    for pruning in [Pruning::Greedy1, Pruning::CoveredCount] {
        let balls = dominating_balls(&g, &dist, pruning);
        assert_eq!(balls, vec![g.ball(0), g.ball(2)]);
    }
}

proptest! {
    #[test]
    fn intersection_edges_mean_a_shared_point(seed in any::<u64>()) {
        let (_, dist) = dataset(blob(seed, &[0.0, 0.0], 3.0, 20));
        let mut rng = stream_rng(seed, &[2]);
        let balls: Vec<CoveringBall<f64>> =
            (0..8).map(|_| CoveringBall { center: rng.random_range(0..20), radius: rng.random_range(0.0..2.0) }).collect();
        let g = intersection_graph(&balls, &dist);
        for u in 0..8 {
            for v in 0..8 {
                if u == v {
                    continue;
                }
                let shared = (0..20).any(|p| dist.get(p, balls[u].center) < balls[u].radius && dist.get(p, balls[v].center) < balls[v].radius);
                prop_assert_eq!(g.has_arc(u, v), shared);
            }
        }
    }
}

// ------------------------------------------------------------------ silhouette

fn silhouette_oracle(dist: &DistanceMatrix<f64>, labels: &[usize]) -> f64 {
    let n = labels.len();
    let mut total = 0.0;
    for i in 0..n {
        let mean_to = |c: usize| {
            let js: Vec<usize> = (0..n).filter(|&j| j != i && labels[j] == c).collect();
            (js.iter().map(|&j| dist.get(i, j)).sum::<f64>() / js.len() as f64, js.len())
        };
        let (a, mates) = mean_to(labels[i]);
        if mates == 0 {
            continue;
        }
        let mut others: Vec<usize> = labels.iter().copied().filter(|&c| c != labels[i]).collect();
        others.dedup();
        let b = others.iter().map(|&c| mean_to(c).0).fold(f64::INFINITY, f64::min);
        if a.max(b) > 0.0 {
            total += (b - a) / a.max(b);
        }
    }
    total / n as f64
}

#[test]
fn separated_pairs_approach_one() {
    let (_, dist) = dataset(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![11.0, 0.0], vec![12.0, 0.0]]);
    assert!(silhouette(&dist, &[0, 0, 1, 1]).unwrap() >= 0.9);
}

#[test]
fn random_partition_of_one_cloud_is_near_zero() {
    for seed in 0..20 {
        let (_, dist) = dataset(blob(seed, &[0.0, 0.0], 1.0, 100));
        let mut rng = stream_rng(seed, &[3]);
        let labels: Vec<usize> = (0..100).map(|_| rng.random_range(0..3)).collect();
        assert!(silhouette(&dist, &labels).unwrap().abs() <= 0.2);
    }
}

#[test]
fn singleton_blocks_score_zero() {
    let (_, dist) = dataset(blob(2, &[0.0], 1.0, 5));
    assert_eq!(silhouette(&dist, &[0, 1, 2, 3, 4]).unwrap(), 0.0);
    assert!(silhouette(&dist, &[7; 5]).unwrap_err().is_input());
}

proptest! {
    #[test]
    fn silhouette_matches_the_definition(seed in any::<u64>(), k in 2usize..5) {
        let (_, dist) = dataset(blob(seed, &[0.0, 0.0], 2.0, 30));
        let mut rng = stream_rng(seed, &[4]);
        let mut labels: Vec<usize> = (0..30).map(|_| rng.random_range(0..k)).collect();
        labels[0] = 0;
        labels[1] = 1;
        let s = silhouette(&dist, &labels).unwrap();
        prop_assert!((s - silhouette_oracle(&dist, &labels)).abs() < 1e-12);
        prop_assert!((-1.0..=1.0).contains(&s));
    }
}

// ------------------------------------------------------------------ clusters

/// A ball around point `center` reaching just past its `count − 1`
/// nearest neighbours.
fn ball_over(dist: &DistanceMatrix<f64>, center: usize, count: usize) -> CoveringBall<f64> {
    let mut row: Vec<f64> = dist.row(center).to_vec();
    row.sort_by(|a, b| a.partial_cmp(b).unwrap());
    CoveringBall { center, radius: just_above(row[count - 1]) }
}

#[test]
fn three_clusters_and_a_small_clump() {
    let mut pts = Vec::new();
    for (k, c) in [[0.0, 0.0], [6.0, 0.0], [0.0, 6.0]].iter().enumerate() {
        pts.push(c.to_vec());
        pts.extend(blob(k as u64, c, 1.0, 59));
    }
    pts.push(vec![6.0, 6.0]);
    pts.extend(blob(9, &[6.0, 6.0], 0.2, 3));
    let (_, dist) = dataset(pts);
    let candidates: Vec<Candidate<f64>> =
        [(0, 60), (60, 60), (120, 60), (180, 4)].iter().map(|&(c, m)| Candidate::from_ball(ball_over(&dist, c, m), &dist)).collect();
    let model = select_clusters(candidates.clone(), &dist, Some(10), Variant::Rk, 0.01).unwrap();
    assert_eq!(model.clusters.len(), 3);
    assert_eq!(model.rejected, vec![180, 181, 182, 183]);
    // No RNG: a rerun is identical.
    assert_eq!(select_clusters(candidates, &dist, Some(10), Variant::Rk, 0.01).unwrap(), model);
}

#[test]
fn single_candidate_is_the_model() {
    let (_, dist) = dataset(blob(1, &[0.0, 0.0], 1.0, 20));
    let model = select_clusters(vec![Candidate::from_ball(ball_over(&dist, 0, 20), &dist)], &dist, None, Variant::Un, 0.1).unwrap();
    assert_eq!(model.clusters.len(), 1);
    assert!(select_clusters(Vec::<Candidate<f64>>::new(), &dist, None, Variant::Un, 0.1).is_err());
}

#[test]
fn balanced_pair_of_clusters() {
    let mut pts = vec![vec![0.0, 0.0]];
    pts.extend(blob(1, &[0.0, 0.0], 1.0, 49));
    pts.push(vec![5.0, 0.0]);
    pts.extend(blob(2, &[5.0, 0.0], 1.0, 49));
    let (_, dist) = dataset(pts);
    let cands = vec![Candidate::from_ball(ball_over(&dist, 0, 50), &dist), Candidate::from_ball(ball_over(&dist, 50, 50), &dist)];
    let model = select_clusters(cands, &dist, None, Variant::Rk, 0.01).unwrap();
    assert_eq!(model.clusters.len(), 2);
    assert!(!model.shared_coverage);
}

#[test]
fn overlapping_candidates_are_made_disjoint() {
    let (_, dist) = dataset((0..13).map(|k| vec![k as f64]).collect());
    let a = Candidate { balls: vec![CoveringBall { center: 5, radius: 5.5 }], members: (0..11).collect() };
    let b = Candidate { balls: vec![CoveringBall { center: 9, radius: 4.5 }], members: (5..13).collect() };
    let dup = a.clone();
    let model = select_clusters(vec![b, a, dup], &dist, None, Variant::Rk, 0.01).unwrap();
    assert!(model.shared_coverage);
    let cores: Vec<&Vec<usize>> = model.clusters.iter().map(|c| &c.core).collect();
    if cores.len() == 2 {
        assert_eq!(cores[0], &(0..11).collect::<Vec<_>>());
        assert_eq!(cores[1], &vec![11, 12]);
    }
}

fn model_from_balls(balls: Vec<Vec<CoveringBall<f64>>>, dist: &DistanceMatrix<f64>) -> ClusterModel<f64> {
    let clusters = balls
        .into_iter()
        .map(|bs| {
            let mut core: Vec<usize> = (0..dist.len()).filter(|&p| bs.iter().any(|b| b.contains(dist, p))).collect();
            core.dedup();
            Cluster { core_balls: bs, core, members: Vec::new(), delta: None }
        })
        .collect();
    ClusterModel {
        clusters,
        variant: Variant::Rk,
        alpha: 0.01,
        s_min: None,
        rejected: Vec::new(),
        shared_coverage: false,
        fallback_assignments: 0,
    }
}

#[test]
fn straggler_joins_the_relatively_nearest_ball() {
    // x = 2 is 2 from A (r = 1, ρ = 2) and 3 from B (r = 2, ρ = 1.5).
    let (_, dist) = dataset(vec![vec![0.0], vec![5.0], vec![2.0], vec![0.5]]);
    let model = model_from_balls(
        vec![vec![CoveringBall { center: 0, radius: 1.0 }], vec![CoveringBall { center: 1, radius: 2.0 }]],
        &dist,
    );
    let out = assign_stragglers(model, &dist);
    assert_eq!(out.labels(4), vec![0, 1, 1, 0]);
    assert_eq!(out.fallback_assignments, 0);
}

#[test]
fn zero_radius_balls_fall_back_to_raw_distance() {
    let (_, dist) = dataset(vec![vec![0.0], vec![5.0], vec![2.0]]);
    let model = model_from_balls(
        vec![vec![CoveringBall { center: 0, radius: 0.0 }], vec![CoveringBall { center: 1, radius: 0.0 }]],
        &dist,
    );
    let out = assign_stragglers(model, &dist);
    assert_eq!(out.labels(3), vec![0, 1, 0]);
    assert_eq!(out.fallback_assignments, 1);
}

proptest! {
    #[test]
    fn straggler_assignment_matches_brute_force(seed in any::<u64>(), k in 1usize..4) {
        let (_, dist) = dataset(blob(seed, &[0.0, 0.0], 4.0, 30));
        let mut rng = stream_rng(seed, &[5]);
        let balls: Vec<Vec<CoveringBall<f64>>> = (0..k)
            .map(|_| (0..rng.random_range(1..3)).map(|_| CoveringBall { center: rng.random_range(0..30), radius: rng.random_range(0.1..2.0) }).collect())
            .collect();
        let model = model_from_balls(balls.clone(), &dist);
        let cores: Vec<Vec<usize>> = model.clusters.iter().map(|c| c.core.clone()).collect();
        let out = assign_stragglers(model, &dist);
        let labels = out.labels(30);
        // Total partition.
        prop_assert_eq!(out.clusters.iter().map(|c| c.members.len()).sum::<usize>(), 30);
        for x in 0..30 {
            let rho: Vec<f64> = balls
                .iter()
                .map(|bs| bs.iter().map(|b| dist.get(x, b.center) / b.radius).fold(f64::INFINITY, f64::min))
                .collect();
            let best = (0..k).fold(0, |m, c| if rho[c] < rho[m] { c } else { m });
            let owners: Vec<usize> = (0..k).filter(|&c| cores[c].contains(&x)).collect();
            if owners.is_empty() || owners.contains(&best) {
                prop_assert_eq!(labels[x], best);
            } else {
                prop_assert_eq!(labels[x], owners[0]);
            }
        }
        let (raw, _) = assign_by_rho(&dist, &balls.iter().map(|b| b.as_slice()).collect::<Vec<_>>());
        prop_assert_eq!(raw.len(), 30);
    }
}

// ------------------------------------------------------------ extended coverage

#[test]
fn edgeless_mcg_leaves_the_ball_alone() {
    let (_, dist) = dataset(blob(3, &[0.0, 0.0], 1.0, 20));
    let g = build_digraph(&dist, vec![0.5; 20]).unwrap();
    let mcg = MutualCatchGraph::from_radii(&dist, &[0.0; 20]);
    let ball = g.ball(4);
    let ext = extend_coverage(&g, &mcg, &[ball], &dist);
    assert_eq!(ext[0].members, ball.members(&dist));
    assert_eq!(ext[0].balls, vec![ball]);
}

#[test]
fn gaussian_clusters_get_extended() {
    let ctx = CsrContext::default();
    let runs = 20;
    let mut grown = 0;
    for seed in 0..runs {
        let data = gen_scene(&SceneSpec::general(ClusterKind::Gaussian, 2, 200, seed).unwrap()).unwrap();
        let dist = distance_matrix(&data);
        let ccd = build_ccd(&data, &dist, &CcdVariant::rk(0.01), &ctx).unwrap();
        let balls = dominating_balls(&ccd.digraph, &dist, Pruning::Greedy1);
        let ext = extend_coverage(&ccd.digraph, &build_mcg(&ccd.digraph, &dist), &balls, &dist);
        let largest = (0..balls.len()).max_by_key(|&k| balls[k].members(&dist).len()).unwrap();
        let own = balls[largest].members(&dist);
        assert!(own.iter().all(|p| ext[largest].members.contains(p)));
        if ext[largest].members.len() > own.len() {
            grown += 1;
        }
    }
    assert!(grown as f64 >= 0.9 * runs as f64, "{grown}/{runs}");
}

#[test]
fn balls_in_one_component_share_their_extension() {
    let (_, dist) = dataset((0..4).map(|k| vec![k as f64]).collect());
    let g = build_digraph(&dist, vec![1.5; 4]).unwrap();
    let mcg = build_mcg(&g, &dist);
    let ext = extend_coverage(&g, &mcg, &[g.ball(0), g.ball(3)], &dist);
    assert_eq!(ext[0].members, vec![0, 1, 2, 3]);
    assert_eq!(ext[0].members, ext[1].members);
    let model = select_clusters(ext, &dist, None, Variant::Rk, 0.01).unwrap();
    assert_eq!(model.clusters.len(), 1);
    assert!(model.shared_coverage);
}
