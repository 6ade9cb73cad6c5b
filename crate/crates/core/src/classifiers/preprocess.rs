use alloc::vec::Vec;

use super::Dataset;

/// Per-column means over non-missing cells, for imputation.
#[derive(Clone, Debug, PartialEq)]
pub struct ColumnMeans {
    means: Vec<f64>,
}

impl ColumnMeans {
    /// Columns with no observed value get mean 0.
    pub fn fit(ds: &Dataset) -> Self {
        let d = ds.n_cols();
        let mut sum = alloc::vec![0.0; d];
        let mut count = alloc::vec![0usize; d];
        for row in ds.rows() {
            for (j, &v) in row.iter().enumerate() {
                if !v.is_nan() {
                    sum[j] += v;
                    count[j] += 1;
                }
            }
        }
        let means = sum
            .iter()
            .zip(&count)
            .map(|(&s, &c)| if c == 0 { 0.0 } else { s / c as f64 })
            .collect();
        ColumnMeans { means }
    }

    pub fn means(&self) -> &[f64] {
        &self.means
    }

    /// Replaces NaN cells with the fitted column means.
    pub fn impute(&self, ds: &Dataset) -> Dataset {
        let mut out = ds.clone();
        let d = self.means.len();
        for (i, v) in out.features_mut().iter_mut().enumerate() {
            if v.is_nan() {
                *v = self.means[i % d];
            }
        }
        out
    }
}

/// Column centering and scaling. Constant columns keep scale 1.
#[derive(Clone, Debug, PartialEq)]
pub struct Standardizer {
    mean: Vec<f64>,
    scale: Vec<f64>,
}

impl Standardizer {
    pub fn fit(data: &[f64], n_cols: usize) -> Self {
        let n = data.len().checked_div(n_cols).unwrap_or(0);
        let mut mean = alloc::vec![0.0; n_cols];
        for row in data.chunks_exact(n_cols.max(1)) {
            for (m, &v) in mean.iter_mut().zip(row) {
                *m += v;
            }
        }
        mean.iter_mut().for_each(|m| *m /= n.max(1) as f64);
        let mut var = alloc::vec![0.0; n_cols];
        for row in data.chunks_exact(n_cols.max(1)) {
            for ((s, &v), &m) in var.iter_mut().zip(row).zip(&mean) {
                *s += (v - m) * (v - m);
            }
        }
        let scale = var
            .iter()
            .map(|&s| {
                let sd = libm::sqrt(s / n.max(1) as f64);
                if sd > 1e-12 {
                    sd
                } else {
                    1.0
                }
            })
            .collect();
        Standardizer { mean, scale }
    }

    pub fn n_cols(&self) -> usize {
        self.mean.len()
    }

    pub fn mean(&self) -> &[f64] {
        &self.mean
    }

    pub fn scale(&self) -> &[f64] {
        &self.scale
    }

    pub fn apply_row(&self, row: &[f64], out: &mut [f64]) {
        for (j, o) in out.iter_mut().enumerate() {
            *o = (row[j] - self.mean[j]) / self.scale[j];
        }
    }

    pub fn apply(&self, data: &[f64]) -> Vec<f64> {
        let d = self.n_cols();
        let mut out = alloc::vec![0.0; data.len()];
        for (row, o) in data
            .chunks_exact(d.max(1))
            .zip(out.chunks_exact_mut(d.max(1)))
        {
            self.apply_row(row, o);
        }
        out
    }
}
