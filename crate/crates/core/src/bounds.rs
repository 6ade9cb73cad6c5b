//! Probabilistic guarantees for a selected threshold.
//!
//! Given validation counts `(n0, k0)` and `(n1, k1)`, the realized FPR and FNR
//! of the selected threshold are sandwiched between functions of uniform
//! order statistics:
//!
//! * `y0 = 1 - U(k0)` out of `n0`, i.e. `Beta(n0 - k0 + 1, k0)`, bounds FPR above;
//! * `y1 = U(k1 + 1)` out of `n1`, i.e. `Beta(k1 + 1, n1 - k1)`, bounds FNR above;
//! * `z0`, `z1` are the neighbouring order statistics and bound them below.
//!
//! Their laws give the CDF brackets, the Bernstein bound for the expected
//! cost on `n_te` future instances, and the Hoeffding interval.

use alloc::vec::Vec;

use crate::binomial::upper_tail;
use crate::{CostMatrix, Error, Result, ThresholdSelection};

/// `P(FPR <= x)` bracket: `(sum_{j=n0-k0+1}^{n0}, sum_{j=n0-k0}^{n0})` of
/// binomial terms.
pub fn fpr_cdf_bounds(x: f64, n0: u64, k0: u64) -> Result<(f64, f64)> {
    check_unit_open(x)?;
    if n0 == 0 || k0 > n0 {
        return Err(Error::InvalidArgument("need n0 >= 1 and k0 <= n0"));
    }
    let start = n0 - k0;
    Ok((upper_tail(n0, start + 1, x), upper_tail(n0, start, x)))
}

/// `P(FNR <= x)` bracket: `(sum_{j=k1+1}^{n1}, sum_{j=k1}^{n1})`.
pub fn fnr_cdf_bounds(x: f64, n1: u64, k1: u64) -> Result<(f64, f64)> {
    check_unit_open(x)?;
    if n1 == 0 || k1 > n1 {
        return Err(Error::InvalidArgument("need n1 >= 1 and k1 <= n1"));
    }
    Ok((upper_tail(n1, k1 + 1, x), upper_tail(n1, k1, x)))
}

fn check_unit_open(x: f64) -> Result<()> {
    if x > 0.0 && x < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain("x must lie in (0, 1)"))
    }
}

/// Inputs shared by the cost bounds.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BoundContext {
    pub n0: u64,
    pub n1: u64,
    pub k0: u64,
    pub k1: u64,
    /// Population class priors; default to the validation proportions.
    pub pi0: f64,
    pub pi1: f64,
    pub n_te: u64,
    pub cm: CostMatrix,
}

impl BoundContext {
    pub fn new(
        n0: u64,
        n1: u64,
        k0: u64,
        k1: u64,
        pi0: f64,
        n_te: u64,
        cm: CostMatrix,
    ) -> Result<Self> {
        let ctx = BoundContext {
            n0,
            n1,
            k0,
            k1,
            pi0,
            pi1: 1.0 - pi0,
            n_te,
            cm,
        };
        ctx.validate()?;
        Ok(ctx)
    }

    /// Context for a selection, with priors estimated from the validation set.
    pub fn from_selection(sel: &ThresholdSelection, cm: CostMatrix, n_te: u64) -> Result<Self> {
        let pi0 = sel.n0 as f64 / (sel.n0 + sel.n1) as f64;
        Self::new(
            sel.n0 as u64,
            sel.n1 as u64,
            sel.k0 as u64,
            sel.k1 as u64,
            pi0,
            n_te,
            cm,
        )
    }

    /// Overrides the class priors.
    pub fn with_priors(mut self, pi0: f64) -> Result<Self> {
        self.pi0 = pi0;
        self.pi1 = 1.0 - pi0;
        self.validate()?;
        Ok(self)
    }

    fn validate(&self) -> Result<()> {
        if self.n0 == 0 || self.n1 == 0 {
            return Err(Error::InvalidContext("n0 and n1 must be >= 1"));
        }
        if self.k0 > self.n0 || self.k1 > self.n1 {
            return Err(Error::InvalidContext("k0 <= n0 and k1 <= n1 required"));
        }
        if !(self.pi0 >= 0.0 && self.pi0 <= 1.0) {
            return Err(Error::InvalidContext("pi0 must lie in [0, 1]"));
        }
        if self.n_te == 0 {
            return Err(Error::InvalidContext("n_te must be >= 1"));
        }
        Ok(())
    }

    fn scale(&self) -> f64 {
        self.n_te as f64 * self.cm.fn_cost()
    }

    /// `E(y1) = (k1 + 1) / (n1 + 1)`.
    pub fn mean_y1(&self) -> f64 {
        (self.k1 + 1) as f64 / (self.n1 + 1) as f64
    }

    /// `E(y0) = (n0 - k0 + 1) / (n0 + 1)`.
    pub fn mean_y0(&self) -> f64 {
        (self.n0 - self.k0 + 1) as f64 / (self.n0 + 1) as f64
    }

    /// `Var(y1) = (k1 + 1)(n1 - k1) / ((n1 + 1)^2 (n1 + 2))`.
    pub fn var_y1(&self) -> f64 {
        let (n, k) = (self.n1 as f64, self.k1 as f64);
        (k + 1.0) * (n - k) / ((n + 1.0) * (n + 1.0) * (n + 2.0))
    }

    /// `Var(y0) = k0 (n0 - k0 + 1) / ((n0 + 1)^2 (n0 + 2))`.
    pub fn var_y0(&self) -> f64 {
        let (n, k) = (self.n0 as f64, self.k0 as f64);
        k * (n - k + 1.0) / ((n + 1.0) * (n + 1.0) * (n + 2.0))
    }
}

/// Bernstein parameters for the expected cost on `n_te` future instances.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BernsteinBound {
    /// Center `C*`.
    pub c_star_expected: f64,
    /// Deviation bound `M`.
    pub m_const: f64,
    pub sigma: f64,
}

pub fn bernstein_params(ctx: &BoundContext) -> BernsteinBound {
    let a = ctx.cm.fn_cost();
    let beta = ctx.cm.beta();
    let (p1, p0) = (ctx.mean_y1(), ctx.mean_y0());
    let c_star = ctx.scale() * (beta * ctx.pi0 * p0 + ctx.pi1 * p1);
    let m = a * f64::max(
        ctx.pi1 * f64::max(p1, 1.0 - p1),
        beta * ctx.pi0 * f64::max(p0, 1.0 - p0),
    );
    let var = ctx.n_te as f64
        * a
        * a
        * (ctx.pi1 * ctx.pi1 * ctx.var_y1() + (beta * ctx.pi0) * (beta * ctx.pi0) * ctx.var_y0());
    BernsteinBound {
        c_star_expected: c_star,
        m_const: m,
        sigma: libm::sqrt(var),
    }
}

/// Lower bound on `P(C <= C* + t sigma)`:
/// `1 - exp(-t^2 / (2 + 2 M t / (3 sigma)))`.
///
/// With `sigma == 0` the cost never exceeds `C*` and the formula is
/// undefined; this returns [`Error::ZeroSigma`] and callers report
/// probability 1 for `t > 0`.
pub fn bernstein_tail(bb: &BernsteinBound, t: f64) -> Result<f64> {
    if t.is_nan() || t < 0.0 {
        return Err(Error::Domain("t must be >= 0"));
    }
    if bb.sigma == 0.0 {
        return Err(Error::ZeroSigma);
    }
    if t.is_infinite() {
        return Ok(1.0);
    }
    let denom = 2.0 + 2.0 * bb.m_const / (3.0 * bb.sigma) * t;
    Ok(-libm::expm1(-t * t / denom))
}

/// Hoeffding interval for the expected cost.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CostInterval {
    pub c1: f64,
    pub c2: f64,
    pub c_eps: f64,
    pub epsilon: f64,
    /// Floor on `P(C1 - C_eps <= C <= C2 + C_eps)`, clamped to [0, 1].
    pub prob_two_sided: f64,
    /// Floor on `P(C <= C2 + C_eps)`, clamped to [0, 1].
    pub prob_upper: f64,
    pub prob_two_sided_raw: f64,
    pub prob_upper_raw: f64,
    /// The unclamped two-sided floor was <= 0: the statement carries no information.
    pub vacuous_two_sided: bool,
    pub vacuous_upper: bool,
}

impl CostInterval {
    pub fn lower(&self) -> f64 {
        self.c1 - self.c_eps
    }

    pub fn upper(&self) -> f64 {
        self.c2 + self.c_eps
    }
}

/// `exp(-2 (eps + a / (n (n + 1)))^2 n)`, with real-valued `n`.
fn hoeffding_term(epsilon: f64, a: f64, n: f64) -> f64 {
    let dev = epsilon + a / (n * (n + 1.0));
    libm::exp(-2.0 * dev * dev * n)
}

fn upper_raw(ctx: &BoundContext, epsilon: f64) -> f64 {
    let (n0, n1) = (ctx.n0 as f64, ctx.n1 as f64);
    let (k0, k1) = (ctx.k0 as f64, ctx.k1 as f64);
    1.0 - ctx.n_te as f64 * (hoeffding_term(epsilon, k1, n1) + hoeffding_term(epsilon, n0 - k0, n0))
}

pub fn cost_interval(ctx: &BoundContext, epsilon: f64) -> Result<CostInterval> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::Domain("epsilon must be finite and > 0"));
    }
    let beta = ctx.cm.beta();
    let (n0, n1) = (ctx.n0 as f64, ctx.n1 as f64);
    let (k0, k1) = (ctx.k0 as f64, ctx.k1 as f64);
    let scale = ctx.scale();
    let c1 = scale * (ctx.pi1 * k1 / (n1 + 1.0) + beta * ctx.pi0 * (n0 - k0) / (n0 + 1.0));
    let c2 = scale * (ctx.pi1 * ctx.mean_y1() + beta * ctx.pi0 * ctx.mean_y0());
    let c_eps = scale * (ctx.pi1 + beta * ctx.pi0) * epsilon;

    let two_sided_raw = 1.0
        - ctx.n_te as f64
            * (hoeffding_term(epsilon, n1 - k1, n1)
                + hoeffding_term(epsilon, k1, n1)
                + hoeffding_term(epsilon, k0, n0)
                + hoeffding_term(epsilon, n0 - k0, n0));
    let upper = upper_raw(ctx, epsilon);
    Ok(CostInterval {
        c1,
        c2,
        c_eps,
        epsilon,
        prob_two_sided: two_sided_raw.clamp(0.0, 1.0),
        prob_upper: upper.clamp(0.0, 1.0),
        prob_two_sided_raw: two_sided_raw,
        prob_upper_raw: upper,
        vacuous_two_sided: two_sided_raw <= 0.0,
        vacuous_upper: upper <= 0.0,
    })
}

/// Bisection stops once the bracket is this narrow; the result is the
/// upper end, so it always satisfies the target.
const EPSILON_WIDTH: f64 = 1e-12;

/// Smallest `epsilon` (to within 1e-12) whose unclamped upper floor
/// `prob_upper_raw` reaches `target_confidence`.
pub fn solve_epsilon(ctx: &BoundContext, target_confidence: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&target_confidence) {
        return Err(Error::Domain("target confidence must lie in [0, 1)"));
    }
    let meets = |eps: f64| upper_raw(ctx, eps) >= target_confidence;
    let (mut lo, mut hi) = (0.0, 1.0);
    if !meets(hi) {
        return Err(Error::Unachievable(
            "epsilon = 1 does not reach the target confidence",
        ));
    }
    while hi - lo > EPSILON_WIDTH {
        let mid = 0.5 * (lo + hi);
        if meets(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Smallest validation size considered by [`estimate_validation_size`].
pub const MIN_VALIDATION_SIZE: u64 = 10;
/// Largest validation size considered by [`estimate_validation_size`].
pub const MAX_VALIDATION_SIZE: u64 = 1_000_000_000;

/// Inputs for [`estimate_validation_size`].
///
/// `q0` and `q1` freeze the limits of `(n0 - k0) / (n0 + 1)` and
/// `k1 / (n1 + 1)`, usually taken from a reference validation run.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SizeRequest {
    pub q0: f64,
    pub q1: f64,
    pub pi0: f64,
    pub pi1: f64,
    pub cm: CostMatrix,
    pub n_te: u64,
    /// Required ceiling as a multiple of `C2`, so `C_eps = (ratio - 1) C2`.
    pub target_ratio: f64,
    pub target_confidence: f64,
}

impl SizeRequest {
    fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.q0) || !(0.0..=1.0).contains(&self.q1) {
            return Err(Error::InvalidArgument("q0 and q1 must lie in [0, 1]"));
        }
        if !(self.pi0 >= 0.0 && self.pi1 >= 0.0 && libm::fabs(self.pi0 + self.pi1 - 1.0) < 1e-9) {
            return Err(Error::InvalidArgument(
                "priors must be nonnegative and sum to 1",
            ));
        }
        if self.n_te == 0 {
            return Err(Error::InvalidArgument("n_te must be >= 1"));
        }
        if !(0.0..1.0).contains(&self.target_confidence) {
            return Err(Error::Domain("target confidence must lie in [0, 1)"));
        }
        if self.target_ratio.is_nan() || self.target_ratio <= 1.0 {
            return Err(Error::Unachievable("target ratio must exceed 1"));
        }
        Ok(())
    }

    /// Upper-bound confidence reached at validation size `n_v`, with
    /// `n0 = pi0 n_v`, `n1 = pi1 n_v` (real-valued), `k`'s from the frozen ratios.
    pub fn confidence_at(&self, n_v: u64) -> f64 {
        let beta = self.cm.beta();
        let nv = n_v as f64;
        let (n0, n1) = (self.pi0 * nv, self.pi1 * nv);
        // C2 / (n_te A), with k1 + 1 = q1 (n1 + 1) + 1 and n0 - k0 + 1 = q0 (n0 + 1) + 1
        let c2_unit = self.pi1 * (self.q1 + 1.0 / (n1 + 1.0))
            + beta * self.pi0 * (self.q0 + 1.0 / (n0 + 1.0));
        let epsilon = (self.target_ratio - 1.0) * c2_unit / (self.pi1 + beta * self.pi0);
        let k1 = self.q1 * (n1 + 1.0);
        let n0_minus_k0 = self.q0 * (n0 + 1.0);
        let mut miss = 0.0;
        if n1 > 0.0 {
            miss += hoeffding_term(epsilon, k1, n1);
        }
        if n0 > 0.0 {
            miss += hoeffding_term(epsilon, n0_minus_k0, n0);
        }
        1.0 - self.n_te as f64 * miss
    }
}

/// Smallest validation size whose upper-bound confidence reaches the target,
/// by binary search over `[MIN_VALIDATION_SIZE, MAX_VALIDATION_SIZE]`.
pub fn estimate_validation_size(req: &SizeRequest) -> Result<u64> {
    req.validate()?;
    let meets = |n: u64| req.confidence_at(n) >= req.target_confidence;
    let (mut lo, mut hi) = (MIN_VALIDATION_SIZE, MAX_VALIDATION_SIZE);
    if meets(lo) {
        return Ok(lo);
    }
    if !meets(hi) {
        return Err(Error::Unachievable(
            "no validation size up to 1e9 reaches the target",
        ));
    }
    // invariant: !meets(lo) && meets(hi)
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if meets(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Everything reported alongside a selected threshold.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GuaranteeReport {
    pub context: BoundContext,
    pub bernstein: BernsteinBound,
    /// `(t, P(C <= C* + t sigma) floor)`; `None` when sigma is zero.
    pub bernstein_tails: Vec<(f64, Option<f64>)>,
    pub interval: CostInterval,
    pub target_confidence: f64,
    /// Smallest epsilon reaching `target_confidence`, if any.
    pub epsilon_for_confidence: Option<f64>,
}

impl GuaranteeReport {
    pub fn compute(
        ctx: &BoundContext,
        epsilon: f64,
        target_confidence: f64,
        ts: &[f64],
    ) -> Result<Self> {
        let bernstein = bernstein_params(ctx);
        let bernstein_tails = ts
            .iter()
            .map(|&t| match bernstein_tail(&bernstein, t) {
                Ok(p) => Ok((t, Some(p))),
                Err(Error::ZeroSigma) => Ok((t, None)),
                Err(e) => Err(e),
            })
            .collect::<Result<Vec<_>>>()?;
        let interval = cost_interval(ctx, epsilon)?;
        let epsilon_for_confidence = match solve_epsilon(ctx, target_confidence) {
            Ok(e) => Some(e),
            Err(Error::Unachievable(_)) => None,
            Err(e) => return Err(e),
        };
        Ok(GuaranteeReport {
            context: *ctx,
            bernstein,
            bernstein_tails,
            interval,
            target_confidence,
            epsilon_for_confidence,
        })
    }
}
