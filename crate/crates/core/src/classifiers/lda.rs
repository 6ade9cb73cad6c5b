use alloc::vec::Vec;

use super::linalg::{cholesky_solve, dot};
use super::{require_both_classes, Dataset, Scorer, Standardizer};
use crate::{Error, Result};

/// Two-class linear discriminant `w . x + b` on raw features, where
/// `w = S^-1 (mu1 - mu0)` for the ridged pooled covariance `S`, and
/// `b` places the boundary at the prior-adjusted midpoint.
#[derive(Clone, Debug, PartialEq)]
pub struct LdaModel {
    weights: Vec<f64>,
    intercept: f64,
}

impl LdaModel {
    pub fn n_features(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn intercept(&self) -> f64 {
        self.intercept
    }

    pub fn score_row(&self, row: &[f64]) -> f64 {
        dot(&self.weights, row) + self.intercept
    }

    /// The same direction with the intercept shifted by `delta`.
    pub fn with_offset(mut self, delta: f64) -> Self {
        self.intercept += delta;
        self
    }
}

pub fn train_lda(ds: &Dataset) -> Result<Scorer> {
    let (n0, n1) = require_both_classes(ds)?;
    let d = ds.n_cols();
    let st = Standardizer::fit(ds.features(), d);
    let z = st.apply(ds.features());

    let counts = [n0 as f64, n1 as f64];
    let mut mean = [alloc::vec![0.0; d], alloc::vec![0.0; d]];
    for (row, label) in z.chunks_exact(d).zip(ds.labels()) {
        for (m, &x) in mean[usize::from(label.bit())].iter_mut().zip(row) {
            *m += x;
        }
    }
    for c in 0..2 {
        mean[c].iter_mut().for_each(|m| *m /= counts[c]);
    }
    let mut cov = alloc::vec![0.0; d * d];
    let mut dev = alloc::vec![0.0; d];
    for (row, label) in z.chunks_exact(d).zip(ds.labels()) {
        let m = &mean[usize::from(label.bit())];
        for j in 0..d {
            dev[j] = row[j] - m[j];
        }
        for i in 0..d {
            for j in 0..=i {
                cov[i * d + j] += dev[i] * dev[j];
            }
        }
    }
    let dof = (counts[0] + counts[1] - 2.0).max(1.0);
    for i in 0..d {
        for j in 0..=i {
            cov[i * d + j] /= dof;
            cov[j * d + i] = cov[i * d + j];
        }
    }
    let trace: f64 = (0..d).map(|i| cov[i * d + i]).sum();
    let ridge = if trace > 0.0 {
        1e-6 * trace / d as f64
    } else {
        1e-6
    };
    for i in 0..d {
        cov[i * d + i] += ridge;
    }
    let diff: Vec<f64> = mean[1].iter().zip(&mean[0]).map(|(a, b)| a - b).collect();
    let w = cholesky_solve(&cov, &diff)
        .ok_or(Error::Domain("pooled covariance is not positive definite"))?;
    let mid: Vec<f64> = mean[1]
        .iter()
        .zip(&mean[0])
        .map(|(a, b)| 0.5 * (a + b))
        .collect();
    let b = -dot(&w, &mid) + libm::log(counts[1] / counts[0]);

    // Fold the standardization into raw-space coefficients.
    let weights: Vec<f64> = w.iter().zip(st.scale()).map(|(wj, s)| wj / s).collect();
    let intercept = b - dot(&weights, st.mean());
    Ok(Scorer::Lda(LdaModel { weights, intercept }))
}
