//! Comparison methods: default and theoretical thresholds, grid-searched
//! thresholds, cost-proportionate rejection sampling and MetaCost.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::classifiers::{Dataset, ScoreType, Scorer};
use crate::{seed, Class, CostMatrix, Error, Result, ValidationScores};

/// Which comparison method produced a [`BaselineResult`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum BaselineMethod {
    Null,
    Theoretical,
    Empirical,
    Metacost,
    Crs,
}

impl BaselineMethod {
    pub const ALL: [BaselineMethod; 5] = [
        BaselineMethod::Null,
        BaselineMethod::Theoretical,
        BaselineMethod::Empirical,
        BaselineMethod::Metacost,
        BaselineMethod::Crs,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BaselineMethod::Null => "null",
            BaselineMethod::Theoretical => "theoretical",
            BaselineMethod::Empirical => "empirical",
            BaselineMethod::Metacost => "metacost",
            BaselineMethod::Crs => "crs",
        }
    }

    /// Threshold-type methods keep the base scorer and move the cut.
    pub fn is_threshold(self) -> bool {
        matches!(
            self,
            BaselineMethod::Null | BaselineMethod::Theoretical | BaselineMethod::Empirical
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum BaselineOutput {
    Threshold(f64),
    /// A retrained scorer, applied at its own default threshold.
    Scorer(Scorer),
}

#[derive(Clone, Debug, PartialEq)]
pub struct BaselineResult {
    pub method: BaselineMethod,
    pub output: BaselineOutput,
    pub wall_time_secs: f64,
}

impl BaselineResult {
    pub fn threshold(&self) -> Option<f64> {
        match self.output {
            BaselineOutput::Threshold(t) => Some(t),
            BaselineOutput::Scorer(_) => None,
        }
    }

    pub fn scorer(&self) -> Option<&Scorer> {
        match &self.output {
            BaselineOutput::Scorer(s) => Some(s),
            BaselineOutput::Threshold(_) => None,
        }
    }
}

/// The scorer's natural cut: 0.5 for probabilities, 0 for discriminants.
pub fn null_threshold(score_type: ScoreType) -> f64 {
    match score_type {
        ScoreType::Probability => 0.5,
        ScoreType::Discriminant => 0.0,
    }
}

/// Bayes-optimal cut on calibrated probabilities, `fp / (fp + fn)`.
pub fn theoretical_threshold(cm: &CostMatrix, score_type: ScoreType) -> Result<f64> {
    match score_type {
        ScoreType::Probability => Ok(cm.fp_cost() / (cm.fp_cost() + cm.fn_cost())),
        ScoreType::Discriminant => Err(Error::NotProbabilityScorer),
    }
}

/// Number of grid steps used by [`empirical_threshold_default`].
pub const DEFAULT_GRID_STEPS: usize = 1000;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSearch {
    pub threshold: f64,
    pub validation_cost: f64,
    pub points_evaluated: usize,
}

/// Scans `lo, lo + step, ...` up to `hi` and keeps the first grid point of
/// minimal validation cost.
pub fn empirical_threshold(
    vs: &ValidationScores,
    cm: &CostMatrix,
    lo: f64,
    hi: f64,
    step: f64,
) -> Result<GridSearch> {
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::InvalidArgument("grid range must satisfy lo < hi"));
    }
    if !(step.is_finite() && step > 0.0) {
        return Err(Error::InvalidArgument("grid step must be positive"));
    }
    // The slack keeps `hi` on the grid when (hi - lo) / step is integral up to rounding.
    let n_steps = libm::floor((hi - lo) / step * (1.0 + 1e-12));
    if n_steps > 1e9 {
        return Err(Error::InvalidArgument("grid has more than 1e9 points"));
    }
    let n_steps = n_steps as usize;
    let mut best = GridSearch {
        threshold: lo,
        validation_cost: f64::INFINITY,
        points_evaluated: n_steps + 1,
    };
    for i in 0..=n_steps {
        let t = if i == n_steps && libm::fabs(lo + i as f64 * step - hi) <= 1e-9 * step {
            hi
        } else {
            lo + i as f64 * step
        };
        let (k0, k1) = vs.counts_at(t);
        let cost = (vs.n0() - k0) as f64 * cm.fp_cost() + k1 as f64 * cm.fn_cost();
        if cost < best.validation_cost {
            best.threshold = t;
            best.validation_cost = cost;
        }
    }
    Ok(best)
}

/// Grid over `[min score, max score]` in [`DEFAULT_GRID_STEPS`] steps.
pub fn empirical_threshold_default(vs: &ValidationScores, cm: &CostMatrix) -> Result<GridSearch> {
    let (lo, hi) = (vs.min_score(), vs.max_score());
    if lo == hi {
        let (k0, k1) = vs.counts_at(lo);
        let cost = (vs.n0() - k0) as f64 * cm.fp_cost() + k1 as f64 * cm.fn_cost();
        return Ok(GridSearch {
            threshold: lo,
            validation_cost: cost,
            points_evaluated: 1,
        });
    }
    empirical_threshold(vs, cm, lo, hi, (hi - lo) / DEFAULT_GRID_STEPS as f64)
}

/// Per-class acceptance probabilities `[class 0, class 1]` for rejection
/// sampling: each class's misclassification cost over the larger cost.
pub fn crs_acceptance(cm: &CostMatrix) -> [f64; 2] {
    let z = cm.fn_cost().max(cm.fp_cost());
    [cm.fp_cost() / z, cm.fn_cost() / z]
}

/// Attempts made by [`crs_resample`] before giving up.
pub const CRS_MAX_ATTEMPTS: u64 = 16;

/// Cost-proportionate rejection sampling. Rows are kept independently with
/// [`crs_acceptance`] probability. A draw that loses a class is repeated
/// with a derived seed.
pub fn crs_resample(train: &Dataset, cm: &CostMatrix, rng_seed: u64) -> Result<Dataset> {
    let accept = crs_acceptance(cm);
    for attempt in 0..CRS_MAX_ATTEMPTS {
        let mut rng = ChaCha8Rng::seed_from_u64(seed::derive(rng_seed, attempt));
        let keep: Vec<usize> = train
            .labels()
            .iter()
            .enumerate()
            .filter(|(_, c)| {
                let p = accept[usize::from(c.bit())];
                p >= 1.0 || rng.random::<f64>() < p
            })
            .map(|(i, _)| i)
            .collect();
        let sub = train.subset(&keep);
        let (n0, n1) = sub.class_counts();
        if n0 > 0 && n1 > 0 {
            return Ok(sub);
        }
    }
    Err(Error::EmptyResample)
}

/// Default number of bootstrap replicates for [`metacost`].
pub const METACOST_DEFAULT_REPLICATES: usize = 50;

/// Row indices of bootstrap replicate `r`: `n` draws with replacement.
pub fn bootstrap_indices(n: usize, rng_seed: u64, r: usize) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed::derive(rng_seed, r as u64));
    (0..n).map(|_| rng.random_range(0..n)).collect()
}

/// Minimum expected-cost label given `P(class 1 | x)`. Ties go to class 0.
pub fn min_cost_label(p1: f64, cm: &CostMatrix) -> Class {
    let cost_predict_1 = (1.0 - p1) * cm.fp_cost();
    let cost_predict_0 = p1 * cm.fn_cost();
    if cost_predict_1 < cost_predict_0 {
        Class::Positive
    } else {
        Class::Negative
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MetacostFit {
    pub scorer: Scorer,
    /// Relabeled training labels (the original labels if `degenerate`).
    pub labels: Vec<Class>,
    /// Fraction of replicate models voting class 1, per training row.
    pub vote_fraction: Vec<f64>,
    /// Relabeling produced a single class; the final model uses the
    /// original labels instead.
    pub degenerate: bool,
}

/// Relabels rows by minimum expected cost under the vote fractions of the
/// replicate models, then retrains on the relabeled data.
///
/// `replicate_scorers` are models already trained on the bootstrap samples
/// from [`bootstrap_indices`]; this split lets callers train replicates in
/// parallel.
pub fn metacost_from_replicates<F>(
    train: &Dataset,
    cm: &CostMatrix,
    replicate_scorers: &[Scorer],
    trainer: F,
) -> Result<MetacostFit>
where
    F: Fn(&Dataset) -> Result<Scorer>,
{
    if replicate_scorers.is_empty() {
        return Err(Error::InvalidArgument(
            "metacost needs at least one replicate",
        ));
    }
    let mut votes = alloc::vec![0usize; train.n_rows()];
    for sc in replicate_scorers {
        let cut = null_threshold(sc.score_type());
        for (v, row) in votes.iter_mut().zip(train.rows()) {
            if sc.score_row(row) > cut {
                *v += 1;
            }
        }
    }
    let m = replicate_scorers.len() as f64;
    let vote_fraction: Vec<f64> = votes.iter().map(|&v| v as f64 / m).collect();
    let relabeled: Vec<Class> = vote_fraction
        .iter()
        .map(|&p| min_cost_label(p, cm))
        .collect();
    let n1 = relabeled.iter().filter(|c| c.is_positive()).count();
    let degenerate = n1 == 0 || n1 == relabeled.len();
    let (final_ds, labels) = if degenerate {
        (train.clone(), train.labels().to_vec())
    } else {
        (train.with_labels(relabeled.clone())?, relabeled)
    };
    let scorer = trainer(&final_ds)?;
    Ok(MetacostFit {
        scorer,
        labels,
        vote_fraction,
        degenerate,
    })
}

/// Serial MetaCost with `m` bootstrap replicates. A replicate that lacks a
/// class is redrawn under the next unused replicate index.
pub fn metacost<F>(
    train: &Dataset,
    cm: &CostMatrix,
    m: usize,
    trainer: F,
    rng_seed: u64,
) -> Result<MetacostFit>
where
    F: Fn(&Dataset) -> Result<Scorer>,
{
    let mut scorers = Vec::with_capacity(m);
    let mut r = 0;
    while scorers.len() < m {
        if r >= m * 16 + 16 {
            return Err(Error::EmptyResample);
        }
        let boot = train.subset(&bootstrap_indices(train.n_rows(), rng_seed, r));
        r += 1;
        match trainer(&boot) {
            Ok(sc) => scorers.push(sc),
            Err(Error::MissingClass(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    metacost_from_replicates(train, cm, &scorers, trainer)
}
