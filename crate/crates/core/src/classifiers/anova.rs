use alloc::vec::Vec;

use super::{require_both_classes, Dataset};
use crate::{Error, Result};

/// Two-group one-way ANOVA F statistic per feature:
/// between-class mean square over within-class mean square.
///
/// A feature with zero within-class variance separates the classes exactly
/// and gets `+inf`; a constant feature gets 0.
pub fn anova_f(ds: &Dataset) -> Result<Vec<f64>> {
    let (n0, n1) = require_both_classes(ds)?;
    let d = ds.n_cols();
    let n = (n0 + n1) as f64;
    let mut sums = [alloc::vec![0.0; d], alloc::vec![0.0; d]];
    for (row, label) in ds.rows().zip(ds.labels()) {
        let s = &mut sums[usize::from(label.bit())];
        for (acc, &v) in s.iter_mut().zip(row) {
            *acc += v;
        }
    }
    let counts = [n0 as f64, n1 as f64];
    let means: [Vec<f64>; 2] = [0, 1].map(|c| sums[c].iter().map(|s| s / counts[c]).collect());
    let mut within = alloc::vec![0.0; d];
    for (row, label) in ds.rows().zip(ds.labels()) {
        let m = &means[usize::from(label.bit())];
        for j in 0..d {
            let dev = row[j] - m[j];
            within[j] += dev * dev;
        }
    }
    let dof_within = n - 2.0;
    Ok((0..d)
        .map(|j| {
            let grand = (sums[0][j] + sums[1][j]) / n;
            let between = counts[0] * (means[0][j] - grand) * (means[0][j] - grand)
                + counts[1] * (means[1][j] - grand) * (means[1][j] - grand);
            let ms_within = if dof_within > 0.0 {
                within[j] / dof_within
            } else {
                0.0
            };
            if ms_within > 0.0 {
                between / ms_within
            } else if between > 0.0 {
                f64::INFINITY
            } else {
                0.0
            }
        })
        .collect())
}

/// Indices of the `k` features with the largest F, in descending F order;
/// equal F values keep the lower index first.
pub fn anova_f_select(ds: &Dataset, k: usize) -> Result<Vec<usize>> {
    if k == 0 || k > ds.n_cols() {
        return Err(Error::InvalidArgument("k must lie in 1..=n_cols"));
    }
    if ds.has_missing() {
        return Err(Error::InvalidArgument(
            "impute missing values before feature selection",
        ));
    }
    let f = anova_f(ds)?;
    let mut order: Vec<usize> = (0..f.len()).collect();
    order.sort_by(|&a, &b| f[b].total_cmp(&f[a]).then(a.cmp(&b)));
    order.truncate(k);
    Ok(order)
}
