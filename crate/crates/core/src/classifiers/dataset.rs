use alloc::string::String;
use alloc::vec::Vec;

use crate::{Class, Error, Result};

/// Row-major feature matrix with binary labels. Missing cells are NaN
/// until imputed.
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    features: Vec<f64>,
    n_cols: usize,
    labels: Vec<Class>,
    feature_names: Vec<String>,
}

impl Dataset {
    pub fn new(
        features: Vec<f64>,
        n_cols: usize,
        labels: Vec<Class>,
        feature_names: Vec<String>,
    ) -> Result<Self> {
        if feature_names.len() != n_cols {
            return Err(Error::DimensionMismatch {
                expected: n_cols,
                found: feature_names.len(),
            });
        }
        if features.len() != labels.len() * n_cols {
            return Err(Error::DimensionMismatch {
                expected: labels.len() * n_cols,
                found: features.len(),
            });
        }
        Ok(Dataset {
            features,
            n_cols,
            labels,
            feature_names,
        })
    }

    /// Same as [`Dataset::new`] with generated names `x0, x1, ...`.
    pub fn unnamed(features: Vec<f64>, n_cols: usize, labels: Vec<Class>) -> Result<Self> {
        let names = (0..n_cols).map(|j| alloc::format!("x{j}")).collect();
        Self::new(features, n_cols, labels, names)
    }

    pub fn n_rows(&self) -> usize {
        self.labels.len()
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn features(&self) -> &[f64] {
        &self.features
    }

    pub fn labels(&self) -> &[Class] {
        &self.labels
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.features[i * self.n_cols..(i + 1) * self.n_cols]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        // chunks_exact(0) panics; a zero-column dataset has no row data anyway
        self.features.chunks_exact(self.n_cols.max(1))
    }

    pub fn value(&self, row: usize, col: usize) -> f64 {
        self.features[row * self.n_cols + col]
    }

    pub fn is_missing(&self, row: usize, col: usize) -> bool {
        self.value(row, col).is_nan()
    }

    pub fn has_missing(&self) -> bool {
        self.features.iter().any(|v| v.is_nan())
    }

    /// `(n0, n1)`.
    pub fn class_counts(&self) -> (usize, usize) {
        let n1 = self.labels.iter().filter(|c| c.is_positive()).count();
        (self.labels.len() - n1, n1)
    }

    /// Rows at `indices`, in that order (repeats allowed).
    pub fn subset(&self, indices: &[usize]) -> Dataset {
        let mut features = Vec::with_capacity(indices.len() * self.n_cols);
        for &i in indices {
            features.extend_from_slice(self.row(i));
        }
        Dataset {
            features,
            n_cols: self.n_cols,
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
            feature_names: self.feature_names.clone(),
        }
    }

    /// Columns at `cols`, in that order.
    pub fn select_columns(&self, cols: &[usize]) -> Result<Dataset> {
        if let Some(&bad) = cols.iter().find(|&&c| c >= self.n_cols) {
            return Err(Error::DimensionMismatch {
                expected: self.n_cols,
                found: bad + 1,
            });
        }
        let mut features = Vec::with_capacity(self.n_rows() * cols.len());
        for row in self.rows() {
            features.extend(cols.iter().map(|&c| row[c]));
        }
        Ok(Dataset {
            features,
            n_cols: cols.len(),
            labels: self.labels.clone(),
            feature_names: cols
                .iter()
                .map(|&c| self.feature_names[c].clone())
                .collect(),
        })
    }

    pub fn with_labels(&self, labels: Vec<Class>) -> Result<Dataset> {
        if labels.len() != self.n_rows() {
            return Err(Error::DimensionMismatch {
                expected: self.n_rows(),
                found: labels.len(),
            });
        }
        Ok(Dataset {
            labels,
            ..self.clone()
        })
    }

    pub(crate) fn features_mut(&mut self) -> &mut [f64] {
        &mut self.features
    }
}
