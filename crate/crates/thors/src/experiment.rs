//! Repeated split/train/threshold/evaluate rounds and their aggregation.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thors_core::baselines::{
    crs_resample, empirical_threshold_default, metacost, null_threshold, theoretical_threshold,
};
use thors_core::classifiers::{
    train_gaussian_nb, train_lda, train_logistic, train_logistic_weighted, Dataset, LogisticConfig,
    Scorer, ScorerKind,
};
use thors_core::{
    build_validation, classify, seed, select_threshold, CostMatrix, LabeledScore,
    ThresholdSelection,
};

use crate::config::{DataSource, ExperimentConfig, Method};
use crate::error::Result;
use crate::io::load_csv;
use crate::pipeline::Pipeline;
use crate::split::{split, Split};
use crate::synthetic::{BayesRule, SyntheticSpec};

/// Data shared by every round.
#[derive(Clone, Debug)]
pub struct Prepared {
    pub data: Dataset,
    pub cm: CostMatrix,
    /// Present for synthetic data only.
    pub bayes: Option<BayesRule>,
    pub synthetic: Option<SyntheticSpec>,
}

impl Prepared {
    pub fn load(cfg: &ExperimentConfig) -> Result<Self> {
        cfg.validate()?;
        let cm = cfg.cost_matrix()?;
        Ok(match cfg.source()? {
            DataSource::Csv(path) => Prepared {
                data: load_csv(&path, &cfg.label_column, &cfg.positive_value, cfg.na_policy)?,
                cm,
                bayes: None,
                synthetic: None,
            },
            DataSource::Synthetic { spec, seed } => Prepared {
                data: spec.generate(seed)?,
                cm,
                bayes: Some(spec.bayes_rule(&cm)),
                synthetic: Some(spec),
            },
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MethodOutcome {
    pub scorer: String,
    pub method: Method,
    /// Cut applied to the method's scorer, if it is a threshold method.
    pub threshold: Option<f64>,
    pub test_cost: Option<f64>,
    /// Why the method produced no cost.
    pub error: Option<String>,
    /// Excluded from CSV output; timing is not reproducible.
    pub wall_time_secs: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RoundResult {
    pub round: usize,
    pub seed: u64,
    pub sizes: [usize; 3],
    pub outcomes: Vec<MethodOutcome>,
    /// Cost of the generating distribution's Bayes rule on the test split.
    pub bayes_cost: Option<f64>,
    /// THORS selection per scorer, in config order.
    pub selections: Vec<(String, ThresholdSelection)>,
}

impl RoundResult {
    pub fn cost(&self, scorer: ScorerKind, method: Method) -> Option<f64> {
        self.outcomes
            .iter()
            .find(|o| o.scorer == scorer.name() && o.method == method)
            .and_then(|o| o.test_cost)
    }
}

pub fn round_seed(master: u64, round: usize) -> u64 {
    seed::derive(master, round as u64)
}

/// Trains the scorer used by THORS and the empirical grid. Logistic
/// regression is cost weighted; the other learners ignore costs.
pub fn train_base(
    kind: ScorerKind,
    ds: &Dataset,
    cm: &CostMatrix,
    lc: &LogisticConfig,
) -> thors_core::Result<Scorer> {
    match kind {
        ScorerKind::Logistic => train_logistic(ds, cm, lc).map(|f| f.scorer),
        _ => train_plain(kind, ds, lc),
    }
}

/// Cost-blind training, used for the null and theoretical cuts and inside
/// the meta-learners.
pub fn train_plain(
    kind: ScorerKind,
    ds: &Dataset,
    lc: &LogisticConfig,
) -> thors_core::Result<Scorer> {
    match kind {
        ScorerKind::Logistic => train_logistic_weighted(ds, [1.0, 1.0], lc).map(|f| f.scorer),
        ScorerKind::NaiveBayes => train_gaussian_nb(ds),
        ScorerKind::Lda => train_lda(ds),
    }
}

fn labeled(scores: &[f64], ds: &Dataset) -> Vec<LabeledScore> {
    scores
        .iter()
        .zip(ds.labels())
        .map(|(&s, &l)| LabeledScore::new(s, l))
        .collect()
}

fn cost_at(scores: &[f64], ds: &Dataset, threshold: f64, cm: &CostMatrix) -> f64 {
    scores
        .iter()
        .zip(ds.labels())
        .map(|(&s, &y)| cm.cost(y, classify(s, threshold)))
        .sum()
}

struct Ctx<'a> {
    cfg: &'a ExperimentConfig,
    cm: CostMatrix,
    lc: LogisticConfig,
    train: Dataset,
    valid: Dataset,
    test: Dataset,
    round_seed: u64,
}

impl Ctx<'_> {
    fn run_scorer(
        &self,
        idx: usize,
        kind: ScorerKind,
    ) -> (Vec<MethodOutcome>, Option<ThresholdSelection>) {
        let cm = &self.cm;
        let base = train_base(kind, &self.train, cm, &self.lc);
        let plain = match kind {
            ScorerKind::Logistic => train_plain(kind, &self.train, &self.lc),
            _ => base.clone(),
        };
        let score_pair =
            |sc: &thors_core::Result<Scorer>| -> thors_core::Result<(Vec<f64>, Vec<f64>)> {
                let sc = sc.as_ref().map_err(Clone::clone)?;
                Ok((
                    sc.score_dataset(&self.valid)?,
                    sc.score_dataset(&self.test)?,
                ))
            };
        let base_scores = score_pair(&base);
        let plain_scores = score_pair(&plain);

        let mut selection = None;
        let mut outcomes = Vec::new();
        for &method in &self.cfg.methods {
            let start = Instant::now();
            let res: thors_core::Result<(Option<f64>, f64)> = (|| match method {
                Method::Thors => {
                    let (v, t) = base_scores.as_ref().map_err(Clone::clone)?;
                    let vs = build_validation(&labeled(v, &self.valid))?;
                    let sel = select_threshold(&vs, cm);
                    selection = Some(sel);
                    Ok((Some(sel.c_star), cost_at(t, &self.test, sel.c_star, cm)))
                }
                Method::Null | Method::Theoretical => {
                    let sc = plain.as_ref().map_err(Clone::clone)?;
                    let (_, t) = plain_scores.as_ref().map_err(Clone::clone)?;
                    let cut = if method == Method::Null {
                        null_threshold(sc.score_type())
                    } else {
                        theoretical_threshold(cm, sc.score_type())?
                    };
                    Ok((Some(cut), cost_at(t, &self.test, cut, cm)))
                }
                Method::Empirical => {
                    let (v, t) = base_scores.as_ref().map_err(Clone::clone)?;
                    let vs = build_validation(&labeled(v, &self.valid))?;
                    let g = empirical_threshold_default(&vs, cm)?;
                    Ok((Some(g.threshold), cost_at(t, &self.test, g.threshold, cm)))
                }
                Method::Metacost => {
                    let s = seed::derive(self.round_seed, 1_000 + idx as u64);
                    let fit = metacost(
                        &self.train,
                        cm,
                        self.cfg.metacost_replicates,
                        |d| train_plain(kind, d, &self.lc),
                        s,
                    )?;
                    let cut = null_threshold(fit.scorer.score_type());
                    let t = fit.scorer.score_dataset(&self.test)?;
                    Ok((None, cost_at(&t, &self.test, cut, cm)))
                }
                Method::Crs => {
                    let s = seed::derive(self.round_seed, 2_000 + idx as u64);
                    let sample = crs_resample(&self.train, cm, s)?;
                    let sc = train_plain(kind, &sample, &self.lc)?;
                    let cut = null_threshold(sc.score_type());
                    let t = sc.score_dataset(&self.test)?;
                    Ok((None, cost_at(&t, &self.test, cut, cm)))
                }
            })();
            let wall_time_secs = start.elapsed().as_secs_f64();
            let (threshold, test_cost, error) = match res {
                Ok((th, c)) => (th, Some(c), None),
                Err(e) => (None, None, Some(e.to_string())),
            };
            outcomes.push(MethodOutcome {
                scorer: kind.name().to_owned(),
                method,
                threshold,
                test_cost,
                error,
                wall_time_secs,
            });
        }
        (outcomes, selection)
    }
}

/// One round: split, preprocess on the training part, train every scorer,
/// apply every method and cost it on the test part.
pub fn run_round(cfg: &ExperimentConfig, prepared: &Prepared, round: usize) -> Result<RoundResult> {
    let rs = round_seed(cfg.seed, round);
    let Split {
        train, valid, test, ..
    } = split(&prepared.data, cfg.split_fractions()?, rs)?;
    let bayes_cost = prepared.bayes.map(|b| b.cost(&test, &prepared.cm));
    let pipeline = Pipeline::fit(&train, cfg.select_k)?;
    let sizes = [train.n_rows(), valid.n_rows(), test.n_rows()];
    let ctx = Ctx {
        cfg,
        cm: prepared.cm,
        lc: cfg.logistic(),
        train: pipeline.apply(&train)?,
        valid: pipeline.apply(&valid)?,
        test: pipeline.apply(&test)?,
        round_seed: rs,
    };
    let mut outcomes = Vec::new();
    let mut selections = Vec::new();
    for (idx, &kind) in cfg.scorers.iter().enumerate() {
        let (o, sel) = ctx.run_scorer(idx, kind);
        outcomes.extend(o);
        if let Some(sel) = sel {
            selections.push((kind.name().to_owned(), sel));
        }
    }
    Ok(RoundResult {
        round,
        seed: rs,
        sizes,
        outcomes,
        bayes_cost,
        selections,
    })
}

/// Runs all rounds, in parallel when configured. Results are ordered by
/// round index either way.
pub fn run_rounds(cfg: &ExperimentConfig, prepared: &Prepared) -> Result<Vec<RoundResult>> {
    let mut rounds: Vec<RoundResult> = if cfg.parallel {
        (0..cfg.rounds)
            .into_par_iter()
            .map(|r| run_round(cfg, prepared, r))
            .collect::<Result<_>>()?
    } else {
        (0..cfg.rounds)
            .map(|r| run_round(cfg, prepared, r))
            .collect::<Result<_>>()?
    };
    rounds.sort_by_key(|r| r.round);
    Ok(rounds)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub scorer: String,
    pub method: Method,
    /// Rounds with a cost.
    pub n_ok: usize,
    pub mean_cost: Option<f64>,
    /// Sample standard deviation; 0 for a single round.
    pub std_cost: Option<f64>,
    /// THORS strictly cheaper / strictly dearer / equal, over rounds where
    /// both produced a cost. Empty for THORS itself.
    pub wins: usize,
    pub losses: usize,
    pub ties: usize,
    /// Rounds where either side failed.
    pub unavailable: usize,
    pub mean_wall_time_secs: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryTable {
    pub rounds: usize,
    pub rows: Vec<SummaryRow>,
    /// Mean and standard deviation of the Bayes-rule cost.
    pub bayes: Option<(f64, f64)>,
}

impl SummaryTable {
    pub fn row(&self, scorer: ScorerKind, method: Method) -> Option<&SummaryRow> {
        self.rows
            .iter()
            .find(|r| r.scorer == scorer.name() && r.method == method)
    }
}

pub fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

pub fn summarize(cfg: &ExperimentConfig, rounds: &[RoundResult]) -> SummaryTable {
    let mut rows = Vec::new();
    for &kind in &cfg.scorers {
        for &method in &cfg.methods {
            let outcome = |r: &RoundResult, m: Method| {
                r.outcomes
                    .iter()
                    .find(|o| o.scorer == kind.name() && o.method == m)
                    .cloned()
            };
            let found: Vec<MethodOutcome> =
                rounds.iter().filter_map(|r| outcome(r, method)).collect();
            let costs: Vec<f64> = found.iter().filter_map(|o| o.test_cost).collect();
            let (mean_cost, std_cost) = if costs.is_empty() {
                (None, None)
            } else {
                let (m, s) = mean_std(&costs);
                (Some(m), Some(s))
            };
            let (mut wins, mut losses, mut ties, mut unavailable) = (0, 0, 0, 0);
            if method != Method::Thors {
                for r in rounds {
                    let thors = outcome(r, Method::Thors).and_then(|o| o.test_cost);
                    let other = outcome(r, method).and_then(|o| o.test_cost);
                    match (thors, other) {
                        (Some(a), Some(b)) if a < b => wins += 1,
                        (Some(a), Some(b)) if a > b => losses += 1,
                        (Some(_), Some(_)) => ties += 1,
                        _ => unavailable += 1,
                    }
                }
            }
            let mean_wall_time_secs = if found.is_empty() {
                0.0
            } else {
                found.iter().map(|o| o.wall_time_secs).sum::<f64>() / found.len() as f64
            };
            rows.push(SummaryRow {
                scorer: kind.name().to_owned(),
                method,
                n_ok: costs.len(),
                mean_cost,
                std_cost,
                wins,
                losses,
                ties,
                unavailable,
                mean_wall_time_secs,
            });
        }
    }
    let bayes: Vec<f64> = rounds.iter().filter_map(|r| r.bayes_cost).collect();
    SummaryTable {
        rounds: rounds.len(),
        rows,
        bayes: (!bayes.is_empty()).then(|| mean_std(&bayes)),
    }
}

#[derive(Clone, Debug)]
pub struct ExperimentOutput {
    pub rounds: Vec<RoundResult>,
    pub summary: SummaryTable,
    pub wall_time_secs: f64,
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    let start = Instant::now();
    let prepared = Prepared::load(cfg)?;
    let rounds = run_rounds(cfg, &prepared)?;
    let summary = summarize(cfg, &rounds);
    Ok(ExperimentOutput {
        rounds,
        summary,
        wall_time_secs: start.elapsed().as_secs_f64(),
    })
}
