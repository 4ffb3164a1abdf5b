//! Robust feature scaling: x' = (x − median) / MADN with
//! MADN = median(|x − median|) / 0.6745.

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Normal-consistency constant: MAD / 0.6745 estimates σ for Gaussian data.
pub const MADN_CONSTANT: f64 = 0.6745;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ColumnScale {
    pub median: f64,
    pub madn: f64,
    /// MADN was zero; the column was mapped to 0.
    pub constant: bool,
}

fn median(v: &mut [f64]) -> f64 {
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Per-column median and MADN.
pub fn column_scales<T: Scalar>(data: &Dataset<T>) -> Vec<ColumnScale> {
    (0..data.dim())
        .map(|k| {
            let mut col: Vec<f64> = data.points().map(|p| p[k].as_f64()).collect();
            let med = median(&mut col);
            let mut dev: Vec<f64> = col.iter().map(|x| (x - med).abs()).collect();
            let madn = median(&mut dev) / MADN_CONSTANT;
            ColumnScale { median: med, madn, constant: madn == 0.0 }
        })
        .collect()
}

/// Applies [`column_scales`]; constant columns become 0.
pub fn normalize_med_madn<T: Scalar>(data: &Dataset<T>) -> Result<(Dataset<T>, Vec<ColumnScale>)> {
    if data.len() < 2 {
        return Err(Error::input("normalization needs at least two rows"));
    }
    let scales = column_scales(data);
    let d = data.dim();
    let coords = data
        .coords()
        .iter()
        .enumerate()
        .map(|(k, &x)| {
            let s = scales[k % d];
            T::of_f64(if s.constant { 0.0 } else { (x.as_f64() - s.median) / s.madn })
        })
        .collect();
    let mut out = Dataset::from_flat(d, coords)?;
    if let Some(l) = data.labels() {
        out = out.with_labels(l.to_vec())?;
    }
    Ok((out, scales))
}
