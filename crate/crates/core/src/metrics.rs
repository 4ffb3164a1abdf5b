//! Confusion counts and the rates reported by the benchmarks. Positive means
//! outlier.

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Confusion {
    pub tp: usize,
    pub fp: usize,
    pub tn: usize,
    pub fn_: usize,
}

impl Confusion {
    pub fn total(&self) -> usize {
        self.tp + self.fp + self.tn + self.fn_
    }
}

pub fn confusion(truth: &[bool], flags: &[bool]) -> Result<Confusion> {
    if truth.len() != flags.len() {
        return Err(Error::input(format!("{} labels but {} flags", truth.len(), flags.len())));
    }
    let mut c = Confusion::default();
    for (&t, &f) in truth.iter().zip(flags) {
        match (t, f) {
            (true, true) => c.tp += 1,
            (true, false) => c.fn_ += 1,
            (false, true) => c.fp += 1,
            (false, false) => c.tn += 1,
        }
    }
    Ok(c)
}

/// Which ratios were 0/0 and therefore reported as 0.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Undefined {
    pub tpr: bool,
    pub tnr: bool,
    pub precision: bool,
    pub f_beta: bool,
}

impl Undefined {
    pub fn any(&self) -> bool {
        self.tpr || self.tnr || self.precision || self.f_beta
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Scores {
    pub tpr: f64,
    pub tnr: f64,
    pub ba: f64,
    pub precision: f64,
    pub f_beta: f64,
    pub undefined: Undefined,
}

fn ratio(num: f64, den: f64, undefined: &mut bool) -> f64 {
    if den == 0.0 {
        *undefined = true;
        0.0
    } else {
        num / den
    }
}

/// TPR, TNR, their mean (BA), and F_β = (1+β²)PR / (β²P + R).
pub fn scores(c: &Confusion, beta: f64) -> Scores {
    let mut u = Undefined::default();
    let (tp, fp, tn, fn_) = (c.tp as f64, c.fp as f64, c.tn as f64, c.fn_ as f64);
    let tpr = ratio(tp, tp + fn_, &mut u.tpr);
    let tnr = ratio(tn, tn + fp, &mut u.tnr);
    let precision = ratio(tp, tp + fp, &mut u.precision);
    let b2 = beta * beta;
    let f_beta = ratio((1.0 + b2) * precision * tpr, b2 * precision + tpr, &mut u.f_beta);
    Scores { tpr, tnr, ba: 0.5 * (tpr + tnr), precision, f_beta, undefined: u }
}
