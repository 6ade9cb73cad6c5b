//! Feature preprocessing fitted on the training split only.

use thors_core::classifiers::{anova_f_select, ColumnMeans, Dataset};

use crate::error::Result;

/// Mean imputation followed by ANOVA-F column selection.
#[derive(Clone, Debug, PartialEq)]
pub struct Pipeline {
    means: ColumnMeans,
    columns: Vec<usize>,
}

impl Pipeline {
    /// `k = 0` or `k >= n_cols` keeps every column.
    pub fn fit(train: &Dataset, k: usize) -> Result<Self> {
        let means = ColumnMeans::fit(train);
        let columns = if k == 0 || k >= train.n_cols() {
            (0..train.n_cols()).collect()
        } else {
            anova_f_select(&means.impute(train), k)?
        };
        Ok(Pipeline { means, columns })
    }

    pub fn columns(&self) -> &[usize] {
        &self.columns
    }

    pub fn means(&self) -> &ColumnMeans {
        &self.means
    }

    pub fn apply(&self, ds: &Dataset) -> Result<Dataset> {
        Ok(self.means.impute(ds).select_columns(&self.columns)?)
    }
}
