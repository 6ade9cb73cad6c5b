//! Scoring-type base classifiers and feature selection.
//!
//! All trainers are deterministic: no randomness, zero initialization, and
//! fixed regularization. Higher scores always mean "more class 1".

mod anova;
mod dataset;
mod lda;
mod linalg;
mod logistic;
mod naive_bayes;
mod preprocess;

use alloc::vec::Vec;

pub use anova::{anova_f, anova_f_select};
pub use dataset::Dataset;
pub use lda::{train_lda, LdaModel};
pub use logistic::{
    logistic_objective, train_logistic, train_logistic_weighted, LogisticConfig, LogisticFit,
    LogisticModel,
};
pub use naive_bayes::{train_gaussian_nb, GaussianNbModel};
pub use preprocess::{ColumnMeans, Standardizer};

use crate::{Error, Result};

/// Which base learner produced a scorer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum ScorerKind {
    Logistic,
    NaiveBayes,
    Lda,
}

impl ScorerKind {
    pub fn name(self) -> &'static str {
        match self {
            ScorerKind::Logistic => "logistic",
            ScorerKind::NaiveBayes => "nb",
            ScorerKind::Lda => "lda",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "logistic" | "logit" => Some(ScorerKind::Logistic),
            "nb" | "naive_bayes" => Some(ScorerKind::NaiveBayes),
            "lda" => Some(ScorerKind::Lda),
            _ => None,
        }
    }
}

/// Scale of a scorer's output.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum ScoreType {
    /// Posterior probability of class 1, in [0, 1].
    Probability,
    /// Unbounded discriminant; 0 is the natural boundary.
    Discriminant,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Scorer {
    Logistic(LogisticModel),
    NaiveBayes(GaussianNbModel),
    Lda(LdaModel),
}

impl Scorer {
    pub fn kind(&self) -> ScorerKind {
        match self {
            Scorer::Logistic(_) => ScorerKind::Logistic,
            Scorer::NaiveBayes(_) => ScorerKind::NaiveBayes,
            Scorer::Lda(_) => ScorerKind::Lda,
        }
    }

    pub fn score_type(&self) -> ScoreType {
        match self {
            Scorer::Logistic(_) | Scorer::NaiveBayes(_) => ScoreType::Probability,
            Scorer::Lda(_) => ScoreType::Discriminant,
        }
    }

    pub fn n_features(&self) -> usize {
        match self {
            Scorer::Logistic(m) => m.n_features(),
            Scorer::NaiveBayes(m) => m.n_features(),
            Scorer::Lda(m) => m.n_features(),
        }
    }

    /// Score of one feature row; the row length must equal [`Scorer::n_features`].
    pub fn score_row(&self, row: &[f64]) -> f64 {
        match self {
            Scorer::Logistic(m) => m.score_row(row),
            Scorer::NaiveBayes(m) => m.score_row(row),
            Scorer::Lda(m) => m.score_row(row),
        }
    }

    /// Scores a row-major matrix with `n_cols` columns.
    pub fn score(&self, data: &[f64], n_cols: usize) -> Result<Vec<f64>> {
        if n_cols != self.n_features() {
            return Err(Error::DimensionMismatch {
                expected: self.n_features(),
                found: n_cols,
            });
        }
        if data.is_empty() {
            return Ok(Vec::new());
        }
        if data.len() % n_cols != 0 {
            return Err(Error::InvalidArgument(
                "matrix length is not a multiple of n_cols",
            ));
        }
        Ok(data
            .chunks_exact(n_cols)
            .map(|row| self.score_row(row))
            .collect())
    }

    pub fn score_dataset(&self, ds: &Dataset) -> Result<Vec<f64>> {
        self.score(ds.features(), ds.n_cols())
    }
}

/// Stable logistic function.
pub(crate) fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + libm::exp(-z))
    } else {
        let e = libm::exp(z);
        e / (1.0 + e)
    }
}

/// Fails unless both classes occur.
pub(crate) fn require_both_classes(ds: &Dataset) -> Result<(usize, usize)> {
    let (n0, n1) = ds.class_counts();
    if n0 == 0 {
        return Err(Error::MissingClass(crate::Class::Negative));
    }
    if n1 == 0 {
        return Err(Error::MissingClass(crate::Class::Positive));
    }
    Ok((n0, n1))
}
