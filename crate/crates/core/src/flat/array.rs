//! Flat-buffer envelope: every operation rewrites O(len) entries.

use std::collections::VecDeque;

use super::{EnvelopeBackend, EnvelopeSnapshot};

/// Envelope stored as a position-sorted buffer of `(position, slope)` pairs,
/// terminated by a slope −∞ sentinel that tracks the right domain edge.
///
/// `left_value` is the function value at the first breakpoint. The ring
/// buffer makes the amortized front pops of `clip_to_unit` O(1); everything
/// else walks the whole buffer, which is the point of this backend.
#[derive(Debug, Clone)]
pub struct ArrayEnvelope {
    left_value: f64,
    points: VecDeque<(f64, f64)>,
}

impl Default for ArrayEnvelope {
    fn default() -> Self {
        let mut points = VecDeque::with_capacity(16);
        points.push_back((-1.0, 0.0));
        points.push_back((1.0, f64::NEG_INFINITY));
        Self { left_value: 0.0, points }
    }
}

impl EnvelopeBackend for ArrayEnvelope {
    fn from_snapshot(snapshot: &EnvelopeSnapshot) -> Self {
        debug_assert!(snapshot.check_invariants().is_ok());
        let mut points: VecDeque<(f64, f64)> = snapshot.breakpoints.iter().copied().collect();
        points.push_back((1.0, f64::NEG_INFINITY));
        Self { left_value: snapshot.left_value, points }
    }

    fn max_filter(&mut self, d: f64) {
        debug_assert!(d >= 0.0, "window half-width must be non-negative");
        if d == 0.0 {
            return;
        }
        let mut first_falling = None;
        let mut have_plateau = false;
        for (idx, point) in self.points.iter_mut().enumerate() {
            if point.1 > 0.0 {
                point.0 -= d;
            } else if point.1 == 0.0 {
                // an existing plateau opens with the rising side
                point.0 -= d;
                have_plateau = true;
            } else {
                if first_falling.is_none() {
                    first_falling = Some(idx);
                }
                point.0 += d;
            }
        }
        if !have_plateau {
            let idx = first_falling.expect("the sentinel always falls");
            let peak = self.points[idx].0 - 2.0 * d; // old peak position − d
            self.points.insert(idx, (peak, 0.0));
        }
    }

    fn clip_to_unit(&mut self) {
        while let Some(&(v, p)) = self.points.front() {
            if v >= -1.0 {
                break;
            }
            // the sentinel sits at >= 1, so a successor always exists here
            let next_v = self.points[1].0;
            if next_v <= -1.0 {
                self.left_value += (next_v - v) * p;
                self.points.pop_front();
            } else {
                self.left_value += (-1.0 - v) * p;
                self.points[0].0 = -1.0;
                break;
            }
        }
        while matches!(self.points.back(), Some(&(v, _)) if v >= 1.0) {
            self.points.pop_back();
        }
        self.points.push_back((1.0, f64::NEG_INFINITY));
    }

    fn add_linear(&mut self, a: f64) {
        for point in self.points.iter_mut() {
            point.1 += a; // the sentinel's −∞ absorbs this
        }
        self.left_value -= a;
    }

    fn supremum(&self) -> f64 {
        let mut total = self.left_value;
        for i in 0..self.points.len() - 1 {
            let (v, p) = self.points[i];
            if p > 0.0 {
                total += (self.points[i + 1].0 - v) * p;
            }
        }
        total
    }

    fn segments(&self) -> usize {
        self.points.len() - 1
    }

    fn snapshot(&self) -> EnvelopeSnapshot {
        EnvelopeSnapshot {
            left_value: self.left_value,
            breakpoints: self.points.iter().take(self.points.len() - 1).copied().collect(),
        }
    }
}
