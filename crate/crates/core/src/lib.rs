//! Cost-sensitive thresholding on order statistics.
//!
//! Any scoring classifier (higher score means "more positive") becomes
//! cost-sensitive by picking the validation score that minimizes the
//! estimated misclassification cost. The crate also evaluates the
//! probabilistic guarantees attached to that choice: binomial CDF brackets
//! for the realized error rates, a Bernstein upper bound and a Hoeffding
//! interval for the expected cost, and validation-size estimates.
//!
//! Everything here is `no_std` + `alloc`. IO, experiment orchestration and
//! the command line live in the `thors` crate.
//!
//! ```
//! use thors_core::{build_validation, select_threshold, Class, CostMatrix, LabeledScore};
//!
//! let scores = [
//!     LabeledScore::new(0.1, Class::Negative),
//!     LabeledScore::new(0.2, Class::Negative),
//!     LabeledScore::new(0.8, Class::Positive),
//!     LabeledScore::new(0.9, Class::Positive),
//! ];
//! let vs = build_validation(&scores).unwrap();
//! let cm = CostMatrix::new(2.0, 1.0).unwrap();
//! let sel = select_threshold(&vs, &cm);
//! assert_eq!(sel.c_star, 0.2);
//! assert_eq!(sel.validation_cost, 0.0);
//! ```

#![no_std]
#![warn(missing_debug_implementations, rust_2018_idioms)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod baselines;
pub mod binomial;
pub mod bounds;
pub mod classifiers;
mod cost;
mod error;
pub mod seed;
pub mod thresholding;

pub use bounds::{
    bernstein_params, bernstein_tail, cost_interval, estimate_validation_size, fnr_cdf_bounds,
    fpr_cdf_bounds, solve_epsilon, BernsteinBound, BoundContext, CostInterval, GuaranteeReport,
    SizeRequest,
};
pub use cost::{Class, CostMatrix};
pub use error::{Error, Result};
pub use thresholding::{
    build_validation, classify, empirical_cost, objective, select_threshold, select_threshold_with,
    test_cost, LabeledScore, SelectOptions, ThresholdSelection, ValidationScores,
};
