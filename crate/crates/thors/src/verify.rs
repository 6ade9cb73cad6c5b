//! Monte-Carlo coverage checks for the guarantees, using two unit-variance
//! Gaussian score distributions so every error rate is known exactly.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thors_core::bounds::{BoundContext, CostInterval};
use thors_core::{
    bernstein_params, bernstein_tail, cost_interval, fnr_cdf_bounds, fpr_cdf_bounds, seed,
    select_threshold, CostMatrix, Error, ThresholdSelection, ValidationScores,
};

use crate::error::Result;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub n0: usize,
    pub n1: usize,
    pub simulations: usize,
    pub seed: u64,
    /// Class-1 scores are `N(separation, 1)`, class-0 scores `N(0, 1)`.
    pub separation: f64,
    pub cm: CostMatrix,
    /// Slack of the two-sided interval check.
    pub epsilon: f64,
    pub ts: Vec<f64>,
    pub grid_points: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            n0: 200,
            n1: 200,
            simulations: 2_000,
            seed: 0,
            separation: 1.5,
            cm: CostMatrix::new(5.0, 1.0).expect("positive costs"),
            epsilon: 0.1,
            ts: vec![1.0, 2.0, 3.0],
            grid_points: 20,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CdfPoint {
    pub x: f64,
    pub empirical: f64,
    pub lower: f64,
    pub upper: f64,
    /// `empirical` lies in `[lower - 3 se(lower), upper + 3 se(upper)]`.
    pub inside: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CdfCheck {
    pub n: u64,
    pub k: u64,
    pub points: Vec<CdfPoint>,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailCheck {
    pub t: f64,
    /// Share of simulations with `C <= C* + t sigma`.
    pub empirical: f64,
    /// Mean floor over simulations with nonzero sigma.
    pub floor: f64,
    pub se: f64,
    pub zero_sigma: usize,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntervalCheck {
    pub epsilon: f64,
    pub empirical: f64,
    /// Mean clamped two-sided floor.
    pub floor: f64,
    pub se: f64,
    /// Share of simulations whose raw floor was below zero.
    pub vacuous_share: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StabilityCheck {
    pub n_v: usize,
    pub n_v_doubled: usize,
    /// Standard deviation of `k1 / (n1 + 1)` across simulations.
    pub spread_q1: f64,
    pub spread_q1_doubled: f64,
    /// Standard deviation of `(n0 - k0) / (n0 + 1)`.
    pub spread_q0: f64,
    pub spread_q0_doubled: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoverageReport {
    pub config: VerifyConfig,
    pub fpr: CdfCheck,
    pub fnr: CdfCheck,
    pub bernstein: Vec<TailCheck>,
    pub interval: IntervalCheck,
    pub stability: StabilityCheck,
}

impl CoverageReport {
    pub fn passed(&self) -> bool {
        self.fpr.passed
            && self.fnr.passed
            && self.bernstein.iter().all(|b| b.passed)
            && self.interval.passed
            && self.stability.passed
    }
}

pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
}

fn binomial_se(p: f64, n: usize) -> f64 {
    (p.clamp(0.0, 1.0) * (1.0 - p.clamp(0.0, 1.0)) / n as f64).sqrt()
}

fn draw(rng: &mut ChaCha8Rng, n: usize, shift: f64) -> Vec<f64> {
    (0..n)
        .map(|_| {
            let z: f64 = StandardNormal.sample(rng);
            z + shift
        })
        .collect()
}

fn select(s0: &[f64], s1: &[f64], cm: &CostMatrix) -> ThresholdSelection {
    let scores: Vec<f64> = s0.iter().chain(s1).copied().collect();
    let labels: Vec<thors_core::Class> = std::iter::repeat_n(thors_core::Class::Negative, s0.len())
        .chain(std::iter::repeat_n(thors_core::Class::Positive, s1.len()))
        .collect();
    let vs = ValidationScores::from_parts(&scores, &labels).expect("finite scores, both classes");
    select_threshold(&vs, cm)
}

/// A cut with exactly `k` of the sorted sample at or below it.
fn cut_between(sorted: &[f64], k: usize) -> f64 {
    match k {
        0 => sorted[0] - 1.0,
        k if k == sorted.len() => sorted[k - 1] + 1.0,
        k => 0.5 * (sorted[k - 1] + sorted[k]),
    }
}

/// Expected cost per test point of the rule `score > c`.
fn true_cost(c: f64, cfg: &VerifyConfig, pi0: f64) -> f64 {
    let fpr = 1.0 - normal_cdf(c);
    let fnr = normal_cdf(c - cfg.separation);
    cfg.cm.fn_cost() * ((1.0 - pi0) * fnr + cfg.cm.beta() * pi0 * fpr)
}

struct SimOutcome {
    fpr_frozen: f64,
    fnr_frozen: f64,
    tail_floor: Vec<Option<f64>>,
    tail_hit: Vec<bool>,
    interval: CostInterval,
    interval_hit: bool,
    q0: f64,
    q1: f64,
}

fn simulate(cfg: &VerifyConfig, i: usize, k_ref: (usize, usize)) -> Result<SimOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed::derive(cfg.seed, i as u64));
    let mut s0 = draw(&mut rng, cfg.n0, 0.0);
    let mut s1 = draw(&mut rng, cfg.n1, cfg.separation);
    let sel = select(&s0, &s1, &cfg.cm);
    let pi0 = cfg.n0 as f64 / (cfg.n0 + cfg.n1) as f64;
    let ctx = BoundContext::from_selection(&sel, cfg.cm, 1)?;
    let c = true_cost(sel.c_star, cfg, pi0);

    let bb = bernstein_params(&ctx);
    let mut tail_floor = Vec::with_capacity(cfg.ts.len());
    let mut tail_hit = Vec::with_capacity(cfg.ts.len());
    for &t in &cfg.ts {
        match bernstein_tail(&bb, t) {
            Ok(p) => tail_floor.push(Some(p)),
            Err(Error::ZeroSigma) => tail_floor.push(None),
            Err(e) => return Err(e.into()),
        }
        tail_hit.push(c <= bb.c_star_expected + t * bb.sigma);
    }
    let interval = cost_interval(&ctx, cfg.epsilon)?;
    let interval_hit = interval.lower() <= c && c <= interval.upper();

    s0.sort_by(f64::total_cmp);
    s1.sort_by(f64::total_cmp);
    let fpr_frozen = 1.0 - normal_cdf(cut_between(&s0, k_ref.0));
    let fnr_frozen = normal_cdf(cut_between(&s1, k_ref.1) - cfg.separation);

    Ok(SimOutcome {
        fpr_frozen,
        fnr_frozen,
        tail_floor,
        tail_hit,
        interval,
        interval_hit,
        q0: (sel.n0 - sel.k0) as f64 / (sel.n0 + 1) as f64,
        q1: sel.k1 as f64 / (sel.n1 + 1) as f64,
    })
}

fn cdf_check(
    samples: &[f64],
    n: u64,
    k: u64,
    mean: f64,
    sd: f64,
    grid: usize,
    bounds: impl Fn(f64) -> thors_core::Result<(f64, f64)>,
) -> Result<CdfCheck> {
    let lo = (mean - 3.0 * sd).max(1e-6);
    let hi = (mean + 3.0 * sd).min(1.0 - 1e-6);
    let s = samples.len();
    let mut points = Vec::with_capacity(grid);
    for g in 0..grid {
        let x = if grid == 1 {
            mean
        } else {
            lo + (hi - lo) * g as f64 / (grid - 1) as f64
        };
        let empirical = samples.iter().filter(|&&v| v <= x).count() as f64 / s as f64;
        let (lower, upper) = bounds(x)?;
        let inside = empirical >= lower - 3.0 * binomial_se(lower, s)
            && empirical <= upper + 3.0 * binomial_se(upper, s);
        points.push(CdfPoint {
            x,
            empirical,
            lower,
            upper,
            inside,
        });
    }
    let passed = points.iter().all(|p| p.inside);
    Ok(CdfCheck {
        n,
        k,
        points,
        passed,
    })
}

fn spread(xs: &[f64]) -> f64 {
    crate::experiment::mean_std(xs).1
}

/// Runs `cfg.simulations` fresh validation draws (and as many at twice the
/// size for the stability check).
///
/// The CDF brackets are checked at ranks frozen from a reference draw: each
/// simulation cuts its class samples so that exactly `k0` (`k1`) scores fall
/// at or below the cut. The cost checks use each simulation's own THORS
/// selection with a single test point.
pub fn verify_bounds(cfg: &VerifyConfig) -> Result<CoverageReport> {
    if cfg.n0 == 0 || cfg.n1 == 0 || cfg.simulations == 0 || cfg.grid_points == 0 {
        return Err(crate::error::HarnessError::Config(
            "verify needs n0, n1, simulations and grid_points >= 1".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed::derive(cfg.seed, u64::MAX));
    let r0 = draw(&mut rng, cfg.n0, 0.0);
    let r1 = draw(&mut rng, cfg.n1, cfg.separation);
    let reference = select(&r0, &r1, &cfg.cm);
    let k_ref = (reference.k0, reference.k1);

    let sims: Vec<SimOutcome> = (0..cfg.simulations)
        .into_par_iter()
        .map(|i| simulate(cfg, i, k_ref))
        .collect::<Result<_>>()?;
    let s = sims.len();

    let ref_ctx = BoundContext::from_selection(&reference, cfg.cm, 1)?;
    let fpr_samples: Vec<f64> = sims.iter().map(|o| o.fpr_frozen).collect();
    let fnr_samples: Vec<f64> = sims.iter().map(|o| o.fnr_frozen).collect();
    let (n0, n1, k0, k1) = (cfg.n0 as u64, cfg.n1 as u64, k_ref.0 as u64, k_ref.1 as u64);
    let fpr = cdf_check(
        &fpr_samples,
        n0,
        k0,
        ref_ctx.mean_y0(),
        ref_ctx.var_y0().sqrt(),
        cfg.grid_points,
        |x| fpr_cdf_bounds(x, n0, k0),
    )?;
    let fnr = cdf_check(
        &fnr_samples,
        n1,
        k1,
        ref_ctx.mean_y1(),
        ref_ctx.var_y1().sqrt(),
        cfg.grid_points,
        |x| fnr_cdf_bounds(x, n1, k1),
    )?;

    let bernstein = cfg
        .ts
        .iter()
        .enumerate()
        .map(|(j, &t)| {
            let valid: Vec<&SimOutcome> =
                sims.iter().filter(|o| o.tail_floor[j].is_some()).collect();
            let n = valid.len().max(1);
            let empirical = valid.iter().filter(|o| o.tail_hit[j]).count() as f64 / n as f64;
            let floor = valid
                .iter()
                .map(|o| o.tail_floor[j].unwrap_or(0.0))
                .sum::<f64>()
                / n as f64;
            let se = binomial_se(floor, n);
            TailCheck {
                t,
                empirical,
                floor,
                se,
                zero_sigma: s - valid.len(),
                passed: empirical >= floor - 3.0 * se,
            }
        })
        .collect();

    let empirical = sims.iter().filter(|o| o.interval_hit).count() as f64 / s as f64;
    let floor = sims.iter().map(|o| o.interval.prob_two_sided).sum::<f64>() / s as f64;
    let se = binomial_se(floor, s);
    let interval = IntervalCheck {
        epsilon: cfg.epsilon,
        empirical,
        floor,
        se,
        vacuous_share: sims.iter().filter(|o| o.interval.vacuous_two_sided).count() as f64
            / s as f64,
        passed: empirical >= floor - 3.0 * se,
    };

    let doubled = VerifyConfig {
        n0: 2 * cfg.n0,
        n1: 2 * cfg.n1,
        seed: seed::derive(cfg.seed, u64::MAX - 1),
        ..cfg.clone()
    };
    let big: Vec<(f64, f64)> = (0..cfg.simulations)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed::derive(doubled.seed, i as u64));
            let s0 = draw(&mut rng, doubled.n0, 0.0);
            let s1 = draw(&mut rng, doubled.n1, doubled.separation);
            let sel = select(&s0, &s1, &doubled.cm);
            (
                (sel.n0 - sel.k0) as f64 / (sel.n0 + 1) as f64,
                sel.k1 as f64 / (sel.n1 + 1) as f64,
            )
        })
        .collect();
    let q0: Vec<f64> = sims.iter().map(|o| o.q0).collect();
    let q1: Vec<f64> = sims.iter().map(|o| o.q1).collect();
    let q0_big: Vec<f64> = big.iter().map(|p| p.0).collect();
    let q1_big: Vec<f64> = big.iter().map(|p| p.1).collect();
    let stability = StabilityCheck {
        n_v: cfg.n0 + cfg.n1,
        n_v_doubled: doubled.n0 + doubled.n1,
        spread_q1: spread(&q1),
        spread_q1_doubled: spread(&q1_big),
        spread_q0: spread(&q0),
        spread_q0_doubled: spread(&q0_big),
        passed: spread(&q1_big) < spread(&q1) && spread(&q0_big) < spread(&q0),
    };

    Ok(CoverageReport {
        config: cfg.clone(),
        fpr,
        fnr,
        bernstein,
        interval,
        stability,
    })
}
