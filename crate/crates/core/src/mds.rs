//! Greedy approximations of a minimum dominating set.
//!
//! Domination is by closed out-neighborhoods: choosing v covers v and every
//! vertex it has an arc to. Candidates are always the still-uncovered
//! vertices, and the lowest index wins ties.

use crate::digraph::Digraph;

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct DominatingSet {
    /// In the order the greedy loop picked them.
    pub members: Vec<usize>,
}

/// Progress of a greedy cover, handed to score and stop callbacks.
pub struct CoverState<'a> {
    graph: &'a Digraph,
    covered: Vec<bool>,
    members: Vec<usize>,
    uncovered: usize,
}

impl<'a> CoverState<'a> {
    fn new(graph: &'a Digraph) -> Self {
        CoverState { graph, covered: vec![false; graph.len()], members: Vec::new(), uncovered: graph.len() }
    }

    pub fn graph(&self) -> &Digraph {
        self.graph
    }

    pub fn is_covered(&self, v: usize) -> bool {
        self.covered[v]
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn uncovered_count(&self) -> usize {
        self.uncovered
    }

    /// How many vertices choosing `v` would newly cover, `v` included.
    pub fn newly_covered(&self, v: usize) -> usize {
        usize::from(!self.covered[v]) + self.graph.out_neighbors(v).iter().filter(|&&j| !self.covered[j]).count()
    }

    fn choose(&mut self, v: usize) {
        self.members.push(v);
        for &j in std::iter::once(&v).chain(self.graph.out_neighbors(v)) {
            if !self.covered[j] {
                self.covered[j] = true;
                self.uncovered -= 1;
            }
        }
    }
}

/// Score-driven greedy: repeatedly take the best-scoring uncovered vertex.
///
/// `stop` sees the cover so far and the vertex about to be taken; returning
/// true ends the loop without taking it. NaN scores lose to everything.
pub fn greedy_mds_scored<G, S, P>(g: &G, mut score: S, mut stop: P) -> DominatingSet
where
    G: AsRef<Digraph> + ?Sized,
    S: FnMut(usize, &CoverState) -> f64,
    P: FnMut(&CoverState, usize) -> bool,
{
    let graph = g.as_ref();
    let mut state = CoverState::new(graph);
    while state.uncovered > 0 {
        let mut best: Option<(usize, f64)> = None;
        for v in (0..graph.len()).filter(|&v| !state.covered[v]) {
            let s = score(v, &state);
            let s = if s.is_nan() { f64::NEG_INFINITY } else { s };
            if best.is_none_or(|(_, b)| s > b) {
                best = Some((v, s));
            }
        }
        let (v, _) = best.expect("an uncovered vertex exists");
        if stop(&state, v) {
            break;
        }
        state.choose(v);
    }
    DominatingSet { members: state.members }
}

/// Induced greedy: out-degree in the sub-digraph induced by the
/// uncovered vertices, recomputed every step.
pub fn greedy_mds_v1<G: AsRef<Digraph> + ?Sized>(g: &G) -> DominatingSet {
    // For an uncovered v, induced out-degree = newly_covered(v) − 1.
    greedy_mds_scored(g, |v, s| s.newly_covered(v) as f64, |_, _| false)
}

/// Plain greedy: out-degree in the original digraph.
pub fn greedy_mds_v2<G: AsRef<Digraph> + ?Sized>(g: &G) -> DominatingSet {
    greedy_mds_scored(g, |v, s| s.graph().out_degree(v) as f64, |_, _| false)
}

/// Does `members` dominate every vertex of `g`?
pub fn is_dominating<G: AsRef<Digraph> + ?Sized>(g: &G, members: &[usize]) -> bool {
    let graph = g.as_ref();
    let mut covered = vec![false; graph.len()];
    for &m in members {
        covered[m] = true;
        for &j in graph.out_neighbors(m) {
            covered[j] = true;
        }
    }
    covered.into_iter().all(|c| c)
}
