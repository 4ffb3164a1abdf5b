use crate::error::{Error, Result};
use crate::geometry::DistanceMatrix;
use crate::scalar::Scalar;

/// A digraph stored as sorted out-neighbor lists; no self-loops.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Digraph {
    out: Vec<Vec<usize>>,
}

impl Digraph {
    pub fn empty(n: usize) -> Self {
        Digraph { out: vec![Vec::new(); n] }
    }

    pub fn from_out_lists(mut out: Vec<Vec<usize>>) -> Result<Self> {
        let n = out.len();
        for (i, list) in out.iter_mut().enumerate() {
            list.sort_unstable();
            list.dedup();
            if let Some(&j) = list.iter().find(|&&j| j >= n || j == i) {
                return Err(Error::input(format!("invalid arc ({i}, {j}) on {n} vertices")));
            }
        }
        Ok(Digraph { out })
    }

    pub fn from_arcs(n: usize, arcs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut out = vec![Vec::new(); n];
        for (i, j) in arcs {
            if i >= n {
                return Err(Error::input(format!("arc tail {i} out of range for {n} vertices")));
            }
            out[i].push(j);
        }
        Self::from_out_lists(out)
    }

    pub fn len(&self) -> usize {
        self.out.len()
    }

    pub fn is_empty(&self) -> bool {
        self.out.is_empty()
    }

    pub fn out_neighbors(&self, i: usize) -> &[usize] {
        &self.out[i]
    }

    pub fn out_degree(&self, i: usize) -> usize {
        self.out[i].len()
    }

    pub fn has_arc(&self, i: usize, j: usize) -> bool {
        self.out[i].binary_search(&j).is_ok()
    }

    pub fn arc_count(&self) -> usize {
        self.out.iter().map(Vec::len).sum()
    }

    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.out.iter().enumerate().flat_map(|(i, l)| l.iter().map(move |&j| (i, j)))
    }

    /// Undirected adjacency of the underlying graph (for weak connectivity).
    pub fn symmetrized(&self) -> Vec<Vec<usize>> {
        let mut adj = self.out.clone();
        for (i, j) in self.arcs() {
            adj[j].push(i);
        }
        for l in &mut adj {
            l.sort_unstable();
            l.dedup();
        }
        adj
    }
}

impl AsRef<Digraph> for Digraph {
    fn as_ref(&self) -> &Digraph {
        self
    }
}

/// Open ball B(x_center, radius).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoveringBall<T> {
    pub center: usize,
    pub radius: T,
}

impl<T: Scalar> CoveringBall<T> {
    #[inline]
    pub fn contains(&self, dist: &DistanceMatrix<T>, j: usize) -> bool {
        dist.get(self.center, j) < self.radius
    }

    /// Points strictly inside the ball, the center included when r > 0.
    pub fn members(&self, dist: &DistanceMatrix<T>) -> Vec<usize> {
        let row = dist.row(self.center);
        (0..row.len()).filter(|&j| row[j] < self.radius).collect()
    }
}

/// Per-point covering balls plus the catch relation: i → j iff d(i, j) < r_i.
#[derive(Clone, Debug, PartialEq)]
pub struct CatchDigraph<T> {
    radii: Vec<T>,
    graph: Digraph,
}

impl<T: Scalar> CatchDigraph<T> {
    pub fn radii(&self) -> &[T] {
        &self.radii
    }

    pub fn radius(&self, i: usize) -> T {
        self.radii[i]
    }

    pub fn ball(&self, i: usize) -> CoveringBall<T> {
        CoveringBall { center: i, radius: self.radii[i] }
    }

    pub fn graph(&self) -> &Digraph {
        &self.graph
    }

    pub fn len(&self) -> usize {
        self.radii.len()
    }

    pub fn is_empty(&self) -> bool {
        self.radii.is_empty()
    }
}

impl<T> AsRef<Digraph> for CatchDigraph<T> {
    fn as_ref(&self) -> &Digraph {
        &self.graph
    }
}

pub fn build_digraph<T: Scalar>(dist: &DistanceMatrix<T>, radii: Vec<T>) -> Result<CatchDigraph<T>> {
    let n = dist.len();
    if radii.len() != n {
        return Err(Error::input(format!("{} radii for {n} points", radii.len())));
    }
    if let Some(i) = radii.iter().position(|r| r.is_nan() || *r < T::zero()) {
        return Err(Error::input(format!("radius of point {i} is negative or NaN")));
    }
    let out = (0..n)
        .map(|i| {
            let row = dist.row(i);
            (0..n).filter(|&j| j != i && row[j] < radii[i]).collect()
        })
        .collect();
    Ok(CatchDigraph { radii, graph: Digraph { out } })
}
