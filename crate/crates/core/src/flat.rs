//! The flat (bounded Lipschitz) distance.
//!
//! The distance is the optimum of a linear program over test-function values
//! `f_k ∈ [-1, 1]` with `|f_k − f_{k−1}| <= x_k − x_{k−1}`. Sweeping the
//! atoms of μ − ν left to right, the value function of the partial problem
//! (optimal objective so far as a function of the current `f_k`) is concave
//! and piecewise linear, so one pass suffices:
//!
//! 1. widen by the gap to the next atom (`max_filter`, a sup-convolution:
//!    rising part slides left, falling part slides right, a plateau opens at
//!    the peak),
//! 2. clip back to `[-1, 1]` (`clip_to_unit`),
//! 3. add the next atom's linear term (`add_linear`),
//!
//! and the answer is the final supremum. The envelope is stored as the value
//! at −1 plus `(position, slope)` breakpoints with strictly decreasing
//! slopes. Two interchangeable stores implement the same contract: a flat
//! buffer rewritten wholesale each step ([`ArrayEnvelope`], O(n²) total) and
//! a balanced ordered tree whose bulk updates touch O(log n) nodes
//! ([`TreeEnvelope`], O(n log n) total).
//!
//! Dropping the absolute value from the objective is sound: the constraint
//! set is symmetric under f ↦ −f, so the signed supremum already equals the
//! supremum of |Σ a_k f_k|.

mod array;
mod tree;

use std::fmt;

pub use array::ArrayEnvelope;
pub use tree::TreeEnvelope;

use crate::distance::{Backend, DistanceValue, Metric};
use crate::measure::{difference, DiscreteMeasure, SignedAtomList};

/// Operation contract shared by the envelope implementations.
///
/// `Default` is the zero function on `[-1, 1]`. Between calls the envelope
/// is clipped to `[-1, 1]` with its first breakpoint at −1; directly after
/// [`max_filter`](EnvelopeBackend::max_filter) breakpoints may lie outside
/// until [`clip_to_unit`](EnvelopeBackend::clip_to_unit) runs.
///
/// A single envelope is single-threaded; concurrent `flat_distance` calls
/// each own a private one.
pub trait EnvelopeBackend: Default {
    /// Restore an envelope from a snapshot, which must satisfy
    /// [`EnvelopeSnapshot::check_invariants`].
    fn from_snapshot(snapshot: &EnvelopeSnapshot) -> Self;

    /// Replace f by `x ↦ sup { f(y) : |y − x| <= d }`. Rising breakpoints
    /// move left by `d`, falling ones right by `d`, and a width-2d plateau
    /// opens at the peak (an existing plateau widens instead). The maximum
    /// value is unchanged.
    fn max_filter(&mut self, d: f64);

    /// Restrict the domain back to `[-1, 1]`: segments left of −1 fold into
    /// the left value, breakpoints at or beyond 1 are dropped.
    fn clip_to_unit(&mut self);

    /// Add the linear function `a·x`.
    fn add_linear(&mut self, a: f64);

    /// Maximum over `[-1, 1]`: the left value plus the rise of all
    /// positive-slope segments.
    fn supremum(&self) -> f64;

    /// Number of stored breakpoints; at most one more than the number of
    /// atoms processed.
    fn segments(&self) -> usize;

    /// Plain copy of the current state for tracing and tests.
    fn snapshot(&self) -> EnvelopeSnapshot;
}

/// Backend-independent view of an envelope: the value at the first
/// breakpoint plus the real `(position, slope)` breakpoints (no sentinel).
#[derive(Debug, Clone, PartialEq)]
pub struct EnvelopeSnapshot {
    pub left_value: f64,
    pub breakpoints: Vec<(f64, f64)>,
}

impl EnvelopeSnapshot {
    /// Evaluate at `x`, which must not precede the first breakpoint.
    pub fn eval(&self, x: f64) -> f64 {
        let mut value = self.left_value;
        let mut prev: Option<(f64, f64)> = None;
        for &(v, p) in &self.breakpoints {
            if let Some((prev_v, prev_p)) = prev {
                if x <= v {
                    return value + (x - prev_v) * prev_p;
                }
                value += (v - prev_v) * prev_p;
            }
            prev = Some((v, p));
        }
        let (last_v, last_p) = prev.expect("an envelope always has a breakpoint");
        value + (x - last_v) * last_p
    }

    /// Structural invariants: finite values, strictly increasing positions,
    /// strictly decreasing slopes.
    pub fn check_invariants(&self) -> Result<(), String> {
        if !self.left_value.is_finite() {
            return Err(format!("left value {} is not finite", self.left_value));
        }
        if self.breakpoints.is_empty() {
            return Err("no breakpoints".to_string());
        }
        for pair in self.breakpoints.windows(2) {
            let ((v0, p0), (v1, p1)) = (pair[0], pair[1]);
            if v0.partial_cmp(&v1) != Some(std::cmp::Ordering::Less) {
                return Err(format!("positions not strictly increasing: {v0} then {v1}"));
            }
            if p0.partial_cmp(&p1) != Some(std::cmp::Ordering::Greater) {
                return Err(format!("slopes not strictly decreasing: {p0} then {p1}"));
            }
        }
        if self.breakpoints.iter().any(|&(v, p)| !v.is_finite() || !p.is_finite()) {
            return Err("non-finite breakpoint".to_string());
        }
        Ok(())
    }
}

impl fmt::Display for EnvelopeSnapshot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.16e};", self.left_value)?;
        for &(v, p) in &self.breakpoints {
            write!(f, " ({:.16e},{:.16e})", v, p)?;
        }
        Ok(())
    }
}

/// Flat (bounded Lipschitz) distance between two measures.
pub fn flat_distance(mu: &DiscreteMeasure, nu: &DiscreteMeasure, backend: Backend) -> DistanceValue {
    let delta = difference(mu, nu);
    flat_distance_of_difference(&delta, backend)
}

/// Flat distance of an already-computed signed difference.
pub fn flat_distance_of_difference(delta: &SignedAtomList, backend: Backend) -> DistanceValue {
    let value = match backend {
        Backend::Array => sweep::<ArrayEnvelope>(delta, None),
        Backend::Tree => sweep::<TreeEnvelope>(delta, None),
    };
    DistanceValue::new(value, Metric::Flat, Some(backend))
}

/// [`flat_distance`] with a per-iteration hook receiving the envelope after
/// each atom; used by the grid-equivalence harness and the CLI trace flag.
/// Snapshotting costs O(envelope) per atom, so tracing forfeits the tree
/// backend's complexity advantage.
pub fn flat_distance_traced(
    mu: &DiscreteMeasure,
    nu: &DiscreteMeasure,
    backend: Backend,
    mut trace: impl FnMut(usize, &EnvelopeSnapshot),
) -> DistanceValue {
    let delta = difference(mu, nu);
    let value = match backend {
        Backend::Array => sweep::<ArrayEnvelope>(&delta, Some(&mut trace)),
        Backend::Tree => sweep::<TreeEnvelope>(&delta, Some(&mut trace)),
    };
    DistanceValue::new(value, Metric::Flat, Some(backend))
}

type TraceHook<'a> = Option<&'a mut dyn FnMut(usize, &EnvelopeSnapshot)>;

fn sweep<E: EnvelopeBackend>(delta: &SignedAtomList, mut trace: TraceHook<'_>) -> f64 {
    if delta.is_empty() {
        return 0.0;
    }
    let mut env = E::default();
    let mut prev_position = None;
    for (k, atom) in delta.atoms().iter().enumerate() {
        if let Some(prev) = prev_position {
            env.max_filter(atom.position - prev);
            env.clip_to_unit();
        }
        env.add_linear(atom.mass);
        if let Some(hook) = trace.as_deref_mut() {
            hook(k, &env.snapshot());
        }
        prev_position = Some(atom.position);
    }
    // The zero test function is feasible, so the true value is >= 0; clamp
    // away rounding dust from near-cancelling sums.
    env.supremum().max(0.0)
}
