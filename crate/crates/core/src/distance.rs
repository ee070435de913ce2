//! Tagged distance values.

use std::fmt;
use std::str::FromStr;

/// Which metric produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    W1,
    NormalizedW1,
    CentralizedW1,
    Flat,
    FlatUpperBound,
    Radon,
}

/// Which envelope implementation computed a flat distance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Backend {
    /// Flat sorted buffer of breakpoints; O(n²) in the worst case.
    Array,
    /// Balanced ordered tree with lazy slope offset; O(n log n).
    Tree,
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Backend::Array => "array",
            Backend::Tree => "tree",
        })
    }
}

impl FromStr for Backend {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "array" => Ok(Backend::Array),
            "tree" => Ok(Backend::Tree),
            other => Err(format!("unknown backend {other:?} (expected `array` or `tree`)")),
        }
    }
}

/// A computed distance: a non-negative value, possibly +∞ (only for the plain
/// 1-Wasserstein metric on unequal total masses), tagged with the metric and,
/// for the flat metric, the backend that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistanceValue {
    value: f64,
    metric: Metric,
    backend: Option<Backend>,
}

impl DistanceValue {
    pub(crate) fn new(value: f64, metric: Metric, backend: Option<Backend>) -> Self {
        debug_assert!(value >= 0.0, "distances are non-negative, got {value}");
        debug_assert!(
            value.is_finite() || metric == Metric::W1,
            "only W1 may be infinite, got {value} for {metric:?}"
        );
        Self { value, metric, backend }
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn metric(&self) -> Metric {
        self.metric
    }

    pub fn backend(&self) -> Option<Backend> {
        self.backend
    }

    pub fn is_finite(&self) -> bool {
        self.value.is_finite()
    }
}

impl fmt::Display for DistanceValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.value.is_finite() {
            write!(f, "{:.16e}", self.value)
        } else {
            f.write_str("inf")
        }
    }
}
