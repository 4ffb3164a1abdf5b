use std::f64::consts::PI;

use statrs::function::gamma::ln_gamma;

use crate::dataset::Dataset;
use crate::scalar::Scalar;

#[inline]
pub fn euclidean<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).map(|(&x, &y)| (x - y) * (x - y)).sum::<T>().sqrt()
}

/// Volume of the unit ball in R^d, π^{d/2} / Γ(d/2 + 1).
pub fn unit_ball_volume(d: usize) -> f64 {
    let h = d as f64 / 2.0;
    (h * PI.ln() - ln_gamma(h + 1.0)).exp()
}

pub fn ball_volume(d: usize, r: f64) -> f64 {
    unit_ball_volume(d) * r.powi(d as i32)
}

/// Dense symmetric matrix of pairwise Euclidean distances.
#[derive(Clone, Debug, PartialEq)]
pub struct DistanceMatrix<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Scalar> DistanceMatrix<T> {
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    /// The principal submatrix on `idx`; entry (a, b) is d(idx[a], idx[b]).
    pub fn restrict(&self, idx: &[usize]) -> Self {
        let m = idx.len();
        let mut data = Vec::with_capacity(m * m);
        for &i in idx {
            let row = self.row(i);
            data.extend(idx.iter().map(|&j| row[j]));
        }
        DistanceMatrix { n: m, data }
    }

    /// Largest entry, used as a scale for tolerances.
    pub fn max(&self) -> T {
        self.data.iter().copied().fold(T::zero(), T::max)
    }
}

pub fn distance_matrix<T: Scalar>(data: &Dataset<T>) -> DistanceMatrix<T> {
    let n = data.len();
    let mut m = vec![T::zero(); n * n];
    for i in 0..n {
        let p = data.point(i);
        for j in (i + 1)..n {
            let v = euclidean(p, data.point(j));
            m[i * n + j] = v;
            m[j * n + i] = v;
        }
    }
    DistanceMatrix { n, data: m }
}

/// For every point, the other points sorted by distance (index breaks ties).
#[derive(Clone, Debug)]
pub struct NeighborOrder<T> {
    rows: Vec<Vec<(T, usize)>>,
}

impl<T: Scalar> NeighborOrder<T> {
    pub fn new(dist: &DistanceMatrix<T>) -> Self {
        let n = dist.len();
        let rows = (0..n)
            .map(|i| {
                let row = dist.row(i);
                let mut r: Vec<(T, usize)> = (0..n).filter(|&j| j != i).map(|j| (row[j], j)).collect();
                r.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));
                r
            })
            .collect();
        NeighborOrder { rows }
    }

    /// Neighbors of `i`, nearest first.
    pub fn of(&self, i: usize) -> &[(T, usize)] {
        &self.rows[i]
    }

    /// Distinct distances from `i`, ascending, each paired with the number of
    /// neighbors strictly closer than it.
    pub fn breakpoints(&self, i: usize) -> Vec<(T, usize)> {
        let row = &self.rows[i];
        let mut out = Vec::with_capacity(row.len());
        for (k, &(r, _)) in row.iter().enumerate() {
            if out.last().is_none_or(|&(last, _)| r > last) {
                out.push((r, k));
            }
        }
        out
    }
}
