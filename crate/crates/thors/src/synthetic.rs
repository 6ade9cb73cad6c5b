//! Two-Gaussian synthetic data with a closed-form Bayes rule.
//!
//! Class 0 is `N(0, I)`, class 1 is `N(mu, I)` where `mu` spreads a
//! Mahalanobis separation evenly over the first `n_informative` features.
//! The remaining features are pure noise.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use thors_core::classifiers::Dataset;
use thors_core::{Class, CostMatrix};

use crate::error::{HarnessError, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    pub n0: usize,
    pub n1: usize,
    pub n_features: usize,
    pub n_informative: usize,
    /// Distance between the class means.
    pub separation: f64,
}

/// Named profiles with the class counts and costs of three public benchmark
/// data sets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Preset {
    /// 59:1 imbalance, fn = 500, fp = 1.
    Trucks,
    /// 3.15:1 imbalance, fn = 100, fp = 10.
    Income,
    /// 1.84:1 imbalance, fn = 100, fp = 20.
    Telescope,
}

impl Preset {
    pub const ALL: [Preset; 3] = [Preset::Trucks, Preset::Income, Preset::Telescope];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Trucks => "trucks",
            Preset::Income => "income",
            Preset::Telescope => "telescope",
        }
    }

    pub fn from_name(name: &str) -> Option<Preset> {
        Preset::ALL.into_iter().find(|p| p.name() == name)
    }

    pub fn spec(self) -> SyntheticSpec {
        let (n0, n1, separation) = match self {
            Preset::Trucks => (59_000, 1_000, 3.0),
            Preset::Income => (24_720, 7_841, 1.5),
            Preset::Telescope => (12_332, 6_688, 1.5),
        };
        SyntheticSpec {
            n0,
            n1,
            n_features: 20,
            n_informative: 6,
            separation,
        }
    }

    pub fn costs(self) -> CostMatrix {
        let (fnc, fpc) = match self {
            Preset::Trucks => (500.0, 1.0),
            Preset::Income => (100.0, 10.0),
            Preset::Telescope => (100.0, 20.0),
        };
        CostMatrix::new(fnc, fpc).expect("preset costs are positive")
    }
}

impl SyntheticSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n0 == 0 || self.n1 == 0 {
            return Err(HarnessError::Config(
                "synthetic data needs both classes".into(),
            ));
        }
        if self.n_informative == 0 || self.n_informative > self.n_features {
            return Err(HarnessError::Config(
                "n_informative must lie in 1..=n_features".into(),
            ));
        }
        if !(self.separation.is_finite() && self.separation >= 0.0) {
            return Err(HarnessError::Config(
                "separation must be finite and non-negative".into(),
            ));
        }
        Ok(())
    }

    fn mean_shift(&self) -> f64 {
        self.separation / (self.n_informative as f64).sqrt()
    }

    /// Rows in shuffled order; deterministic in `seed`.
    pub fn generate(&self, seed: u64) -> Result<Dataset> {
        self.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut labels: Vec<Class> = std::iter::repeat_n(Class::Negative, self.n0)
            .chain(std::iter::repeat_n(Class::Positive, self.n1))
            .collect();
        labels.shuffle(&mut rng);
        let shift = self.mean_shift();
        let d = self.n_features;
        let mut features = Vec::with_capacity(labels.len() * d);
        for label in &labels {
            for j in 0..d {
                let z: f64 = StandardNormal.sample(&mut rng);
                let m = if label.is_positive() && j < self.n_informative {
                    shift
                } else {
                    0.0
                };
                features.push(z + m);
            }
        }
        let names = (0..d).map(|j| format!("x{j}")).collect();
        Ok(Dataset::new(features, d, labels, names)?)
    }

    pub fn bayes_rule(&self, cm: &CostMatrix) -> BayesRule {
        let n = (self.n0 + self.n1) as f64;
        let (pi0, pi1) = (self.n0 as f64 / n, self.n1 as f64 / n);
        let shift = self.mean_shift();
        BayesRule {
            shift,
            n_informative: self.n_informative,
            half_norm2: 0.5 * self.separation * self.separation,
            cut: (cm.fp_cost() * pi0 / (cm.fn_cost() * pi1)).ln(),
        }
    }
}

/// Minimum expected-cost rule for the generating distribution: predict
/// class 1 iff the log-likelihood ratio exceeds `ln(fp pi0 / (fn pi1))`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BayesRule {
    shift: f64,
    n_informative: usize,
    half_norm2: f64,
    cut: f64,
}

impl BayesRule {
    pub fn log_likelihood_ratio(&self, row: &[f64]) -> f64 {
        self.shift * row[..self.n_informative].iter().sum::<f64>() - self.half_norm2
    }

    pub fn predict(&self, row: &[f64]) -> Class {
        thors_core::classify(self.log_likelihood_ratio(row), self.cut)
    }

    /// Realized cost on `ds`, which must hold the generator's raw columns.
    pub fn cost(&self, ds: &Dataset, cm: &CostMatrix) -> f64 {
        ds.rows()
            .zip(ds.labels())
            .map(|(row, &y)| cm.cost(y, self.predict(row)))
            .sum()
    }
}
