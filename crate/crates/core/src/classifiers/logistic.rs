//! Logistic regression with per-class instance weights.
//!
//! Minimizes the weight-normalized negative log-likelihood plus a ridge
//! penalty on the coefficients (not the intercept) with damped Newton steps
//! on standardized features.

use alloc::vec::Vec;

use super::linalg::{cholesky_solve, dot};
use super::{require_both_classes, sigmoid, Dataset, Scorer, Standardizer};
use crate::{Class, CostMatrix, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LogisticConfig {
    pub max_iter: usize,
    /// Convergence threshold on the gradient norm.
    pub tol: f64,
    pub l2: f64,
}

impl Default for LogisticConfig {
    fn default() -> Self {
        LogisticConfig {
            max_iter: 100,
            tol: 1e-8,
            l2: 1e-4,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LogisticModel {
    standardizer: Standardizer,
    intercept: f64,
    coef: Vec<f64>,
}

impl LogisticModel {
    pub fn n_features(&self) -> usize {
        self.coef.len()
    }

    pub fn intercept(&self) -> f64 {
        self.intercept
    }

    /// Coefficients on the standardized features.
    pub fn coefficients(&self) -> &[f64] {
        &self.coef
    }

    pub fn standardizer(&self) -> &Standardizer {
        &self.standardizer
    }

    pub fn log_odds(&self, row: &[f64]) -> f64 {
        let mut z = self.intercept;
        for (j, &v) in row.iter().enumerate() {
            z += self.coef[j] * (v - self.standardizer.mean()[j]) / self.standardizer.scale()[j];
        }
        z
    }

    pub fn score_row(&self, row: &[f64]) -> f64 {
        sigmoid(self.log_odds(row))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LogisticFit {
    pub scorer: Scorer,
    pub converged: bool,
    pub iterations: usize,
    pub grad_norm: f64,
}

/// Cost-weighted fit: class-1 rows weigh `fn_cost`, class-0 rows `fp_cost`.
/// Only the cost ratio matters.
pub fn train_logistic(
    ds: &Dataset,
    cm: &CostMatrix,
    config: &LogisticConfig,
) -> Result<LogisticFit> {
    train_logistic_weighted(ds, [cm.fp_cost(), cm.fn_cost()], config)
}

/// Fit with explicit `[class-0, class-1]` weights; `[1, 1]` is the plain
/// maximum-likelihood fit.
pub fn train_logistic_weighted(
    ds: &Dataset,
    class_weights: [f64; 2],
    config: &LogisticConfig,
) -> Result<LogisticFit> {
    require_both_classes(ds)?;
    let d = ds.n_cols();
    let standardizer = Standardizer::fit(ds.features(), d);
    let x = standardizer.apply(ds.features());
    let weights: Vec<f64> = ds
        .labels()
        .iter()
        .map(|c| class_weights[usize::from(c.bit())])
        .collect();

    let mut theta = alloc::vec![0.0; d + 1];
    let (mut loss, mut grad, mut hess) =
        newton_terms(&x, d, ds.labels(), &weights, config.l2, &theta);
    let mut grad_norm = norm(&grad);
    let mut iterations = 0;
    while grad_norm >= config.tol && iterations < config.max_iter {
        iterations += 1;
        let step = match cholesky_solve(&hess, &grad) {
            Some(s) => s,
            None => grad.clone(),
        };
        // Backtracking on the Armijo condition.
        let slope = dot(&grad, &step);
        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..50 {
            let cand: Vec<f64> = theta.iter().zip(&step).map(|(a, s)| a - t * s).collect();
            let cand_loss = logistic_objective(&x, d, ds.labels(), &weights, config.l2, &cand).0;
            if cand_loss <= loss - 1e-4 * t * slope {
                theta = cand;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if !accepted {
            break;
        }
        (loss, grad, hess) = newton_terms(&x, d, ds.labels(), &weights, config.l2, &theta);
        grad_norm = norm(&grad);
    }

    let model = LogisticModel {
        standardizer,
        intercept: theta[0],
        coef: theta[1..].to_vec(),
    };
    Ok(LogisticFit {
        scorer: Scorer::Logistic(model),
        converged: grad_norm < config.tol,
        iterations,
        grad_norm,
    })
}

fn norm(v: &[f64]) -> f64 {
    libm::sqrt(dot(v, v))
}

fn softplus(z: f64) -> f64 {
    z.max(0.0) + libm::log1p(libm::exp(-libm::fabs(z)))
}

/// Loss and gradient at `theta = [intercept, coef...]` for the design `x`
/// (row-major, `d` columns, used as given).
///
/// `loss = sum_i w_i (softplus(z_i) - y_i z_i) / sum_i w_i + l2/2 |coef|^2`.
pub fn logistic_objective(
    x: &[f64],
    d: usize,
    labels: &[Class],
    weights: &[f64],
    l2: f64,
    theta: &[f64],
) -> (f64, Vec<f64>) {
    let total_w: f64 = weights.iter().sum();
    let mut loss = 0.0;
    let mut grad = alloc::vec![0.0; d + 1];
    for ((row, label), &w) in x.chunks_exact(d.max(1)).zip(labels).zip(weights) {
        let z = theta[0] + dot(&theta[1..], row);
        let y = if label.is_positive() { 1.0 } else { 0.0 };
        loss += w * (softplus(z) - y * z);
        let r = w * (sigmoid(z) - y);
        grad[0] += r;
        for (g, &v) in grad[1..].iter_mut().zip(row) {
            *g += r * v;
        }
    }
    loss /= total_w;
    grad.iter_mut().for_each(|g| *g /= total_w);
    for (g, &c) in grad[1..].iter_mut().zip(&theta[1..]) {
        *g += l2 * c;
    }
    loss += 0.5 * l2 * dot(&theta[1..], &theta[1..]);
    (loss, grad)
}

fn newton_terms(
    x: &[f64],
    d: usize,
    labels: &[Class],
    weights: &[f64],
    l2: f64,
    theta: &[f64],
) -> (f64, Vec<f64>, Vec<f64>) {
    let (loss, grad) = logistic_objective(x, d, labels, weights, l2, theta);
    let p = d + 1;
    let total_w: f64 = weights.iter().sum();
    let mut hess = alloc::vec![0.0; p * p];
    let mut aug = alloc::vec![1.0; p];
    for (row, &w) in x.chunks_exact(d.max(1)).zip(weights) {
        aug[1..].copy_from_slice(row);
        let z = dot(theta, &aug);
        let s = sigmoid(z);
        let c = w * s * (1.0 - s) / total_w;
        for i in 0..p {
            let ci = c * aug[i];
            for j in 0..=i {
                hess[i * p + j] += ci * aug[j];
            }
        }
    }
    for i in 0..p {
        for j in 0..i {
            hess[j * p + i] = hess[i * p + j];
        }
        hess[i * p + i] += if i == 0 { 1e-10 } else { l2 };
    }
    (loss, grad, hess)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    fn separable() -> Dataset {
        let pts = [
            (0.0, 0.0),
            (1.0, 0.5),
            (0.5, 1.0),
            (3.0, 3.0),
            (4.0, 3.5),
            (3.5, 4.5),
        ];
        let feats = pts.iter().flat_map(|&(a, b)| [a, b]).collect();
        let labels = (0..6)
            .map(|i| {
                if i < 3 {
                    Class::Negative
                } else {
                    Class::Positive
                }
            })
            .collect();
        Dataset::unnamed(feats, 2, labels).unwrap()
    }

    #[test]
    fn separable_data_fits_perfectly() {
        let ds = separable();
        let cm = CostMatrix::new(1.0, 1.0).unwrap();
        let fit = train_logistic(&ds, &cm, &LogisticConfig::default()).unwrap();
        let scores = fit.scorer.score_dataset(&ds).unwrap();
        for (s, c) in scores.iter().zip(ds.labels()) {
            assert_eq!(*s > 0.5, c.is_positive());
        }
    }

    #[test]
    fn irrelevant_feature_gets_small_weight() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let n = 20_000;
        let mut feats = Vec::with_capacity(2 * n);
        let mut labels = Vec::with_capacity(n);
        for _ in 0..n {
            let pos = rng.random_bool(0.4);
            let a: f64 = StandardNormal.sample(&mut rng);
            let b: f64 = StandardNormal.sample(&mut rng);
            feats.push(a + if pos { 1.0 } else { 0.0 });
            feats.push(b);
            labels.push(if pos {
                Class::Positive
            } else {
                Class::Negative
            });
        }
        let ds = Dataset::unnamed(feats, 2, labels).unwrap();
        let fit = train_logistic(
            &ds,
            &CostMatrix::new(3.0, 1.0).unwrap(),
            &LogisticConfig::default(),
        )
        .unwrap();
        assert!(fit.converged);
        let Scorer::Logistic(m) = &fit.scorer else {
            unreachable!()
        };
        assert!(m.coefficients()[1].abs() < 0.1, "{:?}", m.coefficients());
        assert!(m.coefficients()[0] > 0.3);
    }

    #[test]
    fn doubling_costs_is_a_no_op() {
        let ds = separable();
        let a = train_logistic(
            &ds,
            &CostMatrix::new(5.0, 1.0).unwrap(),
            &LogisticConfig::default(),
        )
        .unwrap();
        let b = train_logistic(
            &ds,
            &CostMatrix::new(10.0, 2.0).unwrap(),
            &LogisticConfig::default(),
        )
        .unwrap();
        assert_eq!(a.scorer, b.scorer);
    }

    #[test]
    fn deterministic() {
        let ds = separable();
        let cm = CostMatrix::new(5.0, 1.0).unwrap();
        let a = train_logistic(&ds, &cm, &LogisticConfig::default()).unwrap();
        let b = train_logistic(&ds, &cm, &LogisticConfig::default()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn reports_non_convergence() {
        let ds = separable();
        let cfg = LogisticConfig {
            max_iter: 1,
            tol: 1e-14,
            l2: 1e-4,
        };
        let fit = train_logistic(&ds, &CostMatrix::new(1.0, 1.0).unwrap(), &cfg).unwrap();
        assert!(!fit.converged);
        assert!(fit.grad_norm > 0.0);
        assert_eq!(fit.iterations, 1);
    }

    #[test]
    fn single_class_rejected() {
        let ds = Dataset::unnamed(vec![1.0, 2.0], 1, vec![Class::Negative; 2]).unwrap();
        assert!(train_logistic(
            &ds,
            &CostMatrix::new(1.0, 1.0).unwrap(),
            &LogisticConfig::default()
        )
        .is_err());
    }
}
