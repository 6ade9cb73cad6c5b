use alloc::vec::Vec;

use super::{require_both_classes, sigmoid, Dataset, Scorer};
use crate::Result;

const VAR_FLOOR: f64 = 1e-9;

/// Gaussian naive Bayes with maximum-likelihood per-class moments.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussianNbModel {
    /// `[class 0, class 1]` log priors.
    log_prior: [f64; 2],
    mean: [Vec<f64>; 2],
    var: [Vec<f64>; 2],
}

impl GaussianNbModel {
    pub fn n_features(&self) -> usize {
        self.mean[0].len()
    }

    pub fn means(&self, class: crate::Class) -> &[f64] {
        &self.mean[usize::from(class.bit())]
    }

    pub fn variances(&self, class: crate::Class) -> &[f64] {
        &self.var[usize::from(class.bit())]
    }

    fn log_joint(&self, c: usize, row: &[f64]) -> f64 {
        let mut acc = self.log_prior[c];
        for ((&x, &m), &v) in row.iter().zip(&self.mean[c]).zip(&self.var[c]) {
            let d = x - m;
            acc -= 0.5 * (libm::log(2.0 * core::f64::consts::PI * v) + d * d / v);
        }
        acc
    }

    /// Posterior log-odds of class 1.
    pub fn log_odds(&self, row: &[f64]) -> f64 {
        self.log_joint(1, row) - self.log_joint(0, row)
    }

    /// Posterior probability of class 1.
    pub fn score_row(&self, row: &[f64]) -> f64 {
        sigmoid(self.log_odds(row))
    }
}

pub fn train_gaussian_nb(ds: &Dataset) -> Result<Scorer> {
    let (n0, n1) = require_both_classes(ds)?;
    let d = ds.n_cols();
    let counts = [n0 as f64, n1 as f64];
    let mut mean = [alloc::vec![0.0; d], alloc::vec![0.0; d]];
    for (row, label) in ds.rows().zip(ds.labels()) {
        for (m, &x) in mean[usize::from(label.bit())].iter_mut().zip(row) {
            *m += x;
        }
    }
    for c in 0..2 {
        mean[c].iter_mut().for_each(|m| *m /= counts[c]);
    }
    let mut var = [alloc::vec![0.0; d], alloc::vec![0.0; d]];
    for (row, label) in ds.rows().zip(ds.labels()) {
        let c = usize::from(label.bit());
        for j in 0..d {
            let dev = row[j] - mean[c][j];
            var[c][j] += dev * dev;
        }
    }
    for c in 0..2 {
        var[c]
            .iter_mut()
            .for_each(|v| *v = (*v / counts[c]).max(VAR_FLOOR));
    }
    let n = counts[0] + counts[1];
    let log_prior = [libm::log(counts[0] / n), libm::log(counts[1] / n)];
    Ok(Scorer::NaiveBayes(GaussianNbModel {
        log_prior,
        mean,
        var,
    }))
}
