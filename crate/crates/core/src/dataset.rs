use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// An n×d point matrix (row-major) with optional ground truth.
///
/// Labels use `true` for outliers. The constructor enforces n ≥ 1, d ≥ 1 and
/// finite coordinates, so everything downstream can assume them.
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset<T> {
    dim: usize,
    coords: Vec<T>,
    labels: Option<Vec<bool>>,
    note: Option<String>,
}

impl<T: Scalar> Dataset<T> {
    pub fn new(points: Vec<Vec<T>>) -> Result<Self> {
        let dim = points.first().map(Vec::len).ok_or_else(|| Error::input("dataset has no points"))?;
        let mut coords = Vec::with_capacity(points.len() * dim);
        for (i, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(Error::input(format!("point {i} has dimension {}, expected {dim}", p.len())));
            }
            coords.extend_from_slice(p);
        }
        Self::from_flat(dim, coords)
    }

    pub fn from_flat(dim: usize, coords: Vec<T>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::input("dimension must be at least 1"));
        }
        if coords.is_empty() {
            return Err(Error::input("dataset has no points"));
        }
        if !coords.len().is_multiple_of(dim) {
            return Err(Error::input(format!("{} coordinates do not split into rows of {dim}", coords.len())));
        }
        if let Some(k) = coords.iter().position(|x| !x.is_finite()) {
            return Err(Error::input(format!("point {} has a non-finite coordinate", k / dim)));
        }
        Ok(Dataset { dim, coords, labels: None, note: None })
    }

    pub fn with_labels(mut self, labels: Vec<bool>) -> Result<Self> {
        if labels.len() != self.len() {
            return Err(Error::input(format!("{} labels for {} points", labels.len(), self.len())));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    /// Always false; kept for API symmetry with `len`.
    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn point(&self, i: usize) -> &[T] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points(&self) -> impl Iterator<Item = &[T]> + '_ {
        self.coords.chunks_exact(self.dim)
    }

    pub fn coords(&self) -> &[T] {
        &self.coords
    }

    pub fn labels(&self) -> Option<&[bool]> {
        self.labels.as_deref()
    }

    pub fn note(&self) -> Option<&str> {
        self.note.as_deref()
    }

    /// Rows `idx` in the given order, labels carried along.
    pub fn subset(&self, idx: &[usize]) -> Self {
        let mut coords = Vec::with_capacity(idx.len() * self.dim);
        for &i in idx {
            coords.extend_from_slice(self.point(i));
        }
        Dataset {
            dim: self.dim,
            coords,
            labels: self.labels.as_ref().map(|l| idx.iter().map(|&i| l[i]).collect()),
            note: self.note.clone(),
        }
    }

    pub fn cast<U: Scalar>(&self) -> Dataset<U> {
        Dataset {
            dim: self.dim,
            coords: self.coords.iter().map(|&x| U::of_f64(x.as_f64())).collect(),
            labels: self.labels.clone(),
            note: self.note.clone(),
        }
    }
}
