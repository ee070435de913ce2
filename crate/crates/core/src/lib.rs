//! Distances between finite discrete measures on the real line.
//!
//! Implemented metrics, all driven by the signed difference μ − ν of two
//! canonical atom lists:
//!
//! - plain 1-Wasserstein (infinite for unequal total masses), its
//!   normalized and centralized variants, and the Radon (total variation)
//!   distance — each a single Θ(n) pass ([`wasserstein`], [`measure`]);
//! - the flat / bounded Lipschitz distance via a sweep over concave
//!   piecewise-linear value functions, with interchangeable O(n²) array and
//!   O(n log n) balanced-tree envelope stores ([`flat`]);
//! - a linear-time upper bound for the flat distance
//!   ([`wasserstein::flat_upper_bound`]).
//!
//! The [`oracle`] module verifies all of them on small instances by solving
//! the underlying dual linear programs on a value grid, plus an exact
//! monotone-transport check for equal-mass W₁. [`discretize`] approximates
//! CDF-described measures by Dirac combs with a certified error bound, and
//! [`generate`] produces the reproducible random instances used by the
//! benchmark harness.
//!
//! All values are immutable after construction and all operations are pure,
//! so everything here is safe to use from any number of threads.
//!
//! ```
//! use radon_metrics::{flat_distance, w1_distance, Backend, DiscreteMeasure};
//!
//! let mu = DiscreteMeasure::dirac(0.0, 2.0);
//! let nu = DiscreteMeasure::dirac(1.0, 3.0);
//! assert!(!w1_distance(&mu, &nu).is_finite()); // masses differ
//! let flat = flat_distance(&mu, &nu, Backend::Tree);
//! assert!((flat.value() - 3.0).abs() < 1e-12);
//! ```

pub mod discretize;
mod distance;
pub mod flat;
pub mod generate;
pub mod measure;
pub mod oracle;
pub mod wasserstein;

pub use distance::{Backend, DistanceValue, Metric};
pub use flat::{
    flat_distance, flat_distance_traced, ArrayEnvelope, EnvelopeBackend, EnvelopeSnapshot, TreeEnvelope,
};
pub use measure::{
    canonicalize, difference, measure_to_string, parse_measure, radon_distance, write_measure, Atom,
    DiscreteMeasure, MeasureError, SignedAtomList,
};
pub use wasserstein::{centralized_w1, flat_upper_bound, mass_tolerance, normalized_w1, w1_distance};
