//! Required validation size as a function of the target cost ceiling.

use serde::{Deserialize, Serialize};
use thors_core::classifiers::ScorerKind;
use thors_core::{estimate_validation_size, Error, SizeRequest, ThresholdSelection};

use crate::config::{ExperimentConfig, Method};
use crate::error::{HarnessError, Result};
use crate::experiment::{run_round, Prepared};

pub const DEFAULT_RATIOS: [f64; 5] = [1.1, 1.3, 1.5, 2.0, 3.0];

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub target_ratio: f64,
    /// `None` when no validation size reaches the target.
    pub n_v: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogLinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundCurve {
    /// Frozen inputs; `target_ratio` is overwritten per point.
    pub reference: SizeRequest,
    pub points: Vec<CurvePoint>,
    /// Least-squares fit of `ln n_v` on the ratio over achievable points.
    pub fit: Option<LogLinearFit>,
}

impl BoundCurve {
    pub fn is_monotone_decreasing(&self) -> bool {
        let ns: Vec<u64> = self.points.iter().filter_map(|p| p.n_v).collect();
        ns.len() == self.points.len() && ns.windows(2).all(|w| w[1] < w[0])
    }
}

/// Size-estimation inputs frozen from one THORS selection.
pub fn request_from_selection(
    sel: &ThresholdSelection,
    cm: thors_core::CostMatrix,
    n_te: u64,
    confidence: f64,
) -> SizeRequest {
    let n = (sel.n0 + sel.n1) as f64;
    SizeRequest {
        q0: (sel.n0 - sel.k0) as f64 / (sel.n0 + 1) as f64,
        q1: sel.k1 as f64 / (sel.n1 + 1) as f64,
        pi0: sel.n0 as f64 / n,
        pi1: sel.n1 as f64 / n,
        cm,
        n_te,
        target_ratio: 2.0,
        target_confidence: confidence,
    }
}

/// Runs round 0 of the experiment with THORS on `scorer` and freezes its
/// selection; `n_te` is the test split size.
pub fn reference_request(
    cfg: &ExperimentConfig,
    scorer: ScorerKind,
    confidence: f64,
) -> Result<SizeRequest> {
    let cfg = ExperimentConfig {
        scorers: vec![scorer],
        methods: vec![Method::Thors],
        rounds: 1,
        ..cfg.clone()
    };
    let prepared = Prepared::load(&cfg)?;
    let round = run_round(&cfg, &prepared, 0)?;
    let (_, sel) = round.selections.first().ok_or_else(|| {
        HarnessError::Config(format!("THORS failed for scorer `{}`", scorer.name()))
    })?;
    Ok(request_from_selection(
        sel,
        prepared.cm,
        round.sizes[2] as u64,
        confidence,
    ))
}

pub fn bound_curve_from(reference: SizeRequest, ratios: &[f64]) -> Result<BoundCurve> {
    let mut points = Vec::with_capacity(ratios.len());
    for &target_ratio in ratios {
        let req = SizeRequest {
            target_ratio,
            ..reference
        };
        let n_v = match estimate_validation_size(&req) {
            Ok(n) => Some(n),
            Err(Error::Unachievable(_)) => None,
            Err(e) => return Err(e.into()),
        };
        points.push(CurvePoint { target_ratio, n_v });
    }
    let fit = log_linear_fit(&points);
    Ok(BoundCurve {
        reference,
        points,
        fit,
    })
}

pub fn bound_curve(
    cfg: &ExperimentConfig,
    scorer: ScorerKind,
    confidence: f64,
    ratios: &[f64],
) -> Result<BoundCurve> {
    bound_curve_from(reference_request(cfg, scorer, confidence)?, ratios)
}

/// Ordinary least squares of `ln n_v` on the ratio; needs two achievable
/// points with distinct ratios.
pub fn log_linear_fit(points: &[CurvePoint]) -> Option<LogLinearFit> {
    let xy: Vec<(f64, f64)> = points
        .iter()
        .filter_map(|p| p.n_v.map(|n| (p.target_ratio, (n as f64).ln())))
        .collect();
    if xy.len() < 2 {
        return None;
    }
    let n = xy.len() as f64;
    let mx = xy.iter().map(|p| p.0).sum::<f64>() / n;
    let my = xy.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = xy.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = xy.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = xy.iter().map(|p| (p.1 - my).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let r_squared = if syy == 0.0 {
        1.0
    } else {
        sxy * sxy / (sxx * syy)
    };
    Some(LogLinearFit {
        slope,
        intercept: my - slope * mx,
        r_squared,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use thors_core::CostMatrix;

    fn req() -> SizeRequest {
        SizeRequest {
            q0: 0.9,
            q1: 0.1,
            pi0: 0.8,
            pi1: 0.2,
            cm: CostMatrix::new(10.0, 1.0).unwrap(),
            n_te: 1,
            target_ratio: 2.0,
            target_confidence: 0.95,
        }
    }

    #[test]
    fn decreasing_and_unachievable_at_one() {
        let c = bound_curve_from(req(), &DEFAULT_RATIOS).unwrap();
        assert!(c.is_monotone_decreasing(), "{:?}", c.points);
        assert!(c.fit.unwrap().slope < 0.0);
        let one = bound_curve_from(req(), &[1.0]).unwrap();
        assert_eq!(one.points[0].n_v, None);
        assert!(!one.is_monotone_decreasing());
    }

    #[test]
    fn exact_line_has_unit_r2() {
        let pts: Vec<CurvePoint> = (1..5)
            .map(|i| CurvePoint {
                target_ratio: i as f64,
                n_v: Some((10.0 * (3.0 - 0.5 * i as f64).exp()).round() as u64),
            })
            .collect();
        let f = log_linear_fit(&pts).unwrap();
        assert!(f.r_squared > 0.999);
        assert!((f.slope + 0.5).abs() < 0.01);
    }
}
