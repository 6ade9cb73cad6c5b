use crate::{Error, Result};

/// Binary class label. `Positive` is the minority class whose misses are expensive.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Class {
    Negative,
    Positive,
}

impl Class {
    pub fn from_bit(bit: u8) -> Option<Self> {
        match bit {
            0 => Some(Class::Negative),
            1 => Some(Class::Positive),
            _ => None,
        }
    }

    pub fn bit(self) -> u8 {
        match self {
            Class::Negative => 0,
            Class::Positive => 1,
        }
    }

    pub fn is_positive(self) -> bool {
        self == Class::Positive
    }
}

/// Two-class cost matrix with a zero diagonal.
///
/// `fn_cost` is C(1,0), the price of predicting 0 for an actual 1;
/// `fp_cost` is C(0,1). Both must be finite and strictly positive.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CostMatrix {
    fn_cost: f64,
    fp_cost: f64,
}

impl CostMatrix {
    pub fn new(fn_cost: f64, fp_cost: f64) -> Result<Self> {
        if !(fn_cost.is_finite() && fn_cost > 0.0) {
            return Err(Error::InvalidCost("fn_cost must be finite and > 0"));
        }
        if !(fp_cost.is_finite() && fp_cost > 0.0) {
            return Err(Error::InvalidCost("fp_cost must be finite and > 0"));
        }
        Ok(CostMatrix { fn_cost, fp_cost })
    }

    pub fn fn_cost(&self) -> f64 {
        self.fn_cost
    }

    pub fn fp_cost(&self) -> f64 {
        self.fp_cost
    }

    /// Cost ratio C(0,1) / C(1,0).
    pub fn beta(&self) -> f64 {
        self.fp_cost / self.fn_cost
    }

    /// Set when false positives are at least as expensive as false negatives.
    /// All formulas stay valid; only the usual imbalance motivation is lost.
    pub fn beta_warning(&self) -> bool {
        self.beta() >= 1.0
    }

    /// C(actual, predicted).
    pub fn cost(&self, actual: Class, predicted: Class) -> f64 {
        match (actual, predicted) {
            (Class::Negative, Class::Positive) => self.fp_cost,
            (Class::Positive, Class::Negative) => self.fn_cost,
            _ => 0.0,
        }
    }

    /// Same matrix with both costs divided by `fn_cost`.
    pub fn normalized(&self) -> CostMatrix {
        CostMatrix {
            fn_cost: 1.0,
            fp_cost: self.beta(),
        }
    }
}
