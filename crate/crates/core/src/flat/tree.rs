//! Balanced-tree envelope: bulk updates touch O(log n) nodes.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::ops::Bound;

use super::{EnvelopeBackend, EnvelopeSnapshot};

/// Stored slope, ordered descending so that map order equals breakpoint
/// position order (concavity: larger slope means further left). Slopes are
/// finite and, within one envelope, pairwise distinct.
#[derive(Debug, Clone, Copy, PartialEq)]
struct SlopeKey(f64);

impl Eq for SlopeKey {}

impl PartialOrd for SlopeKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SlopeKey {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.partial_cmp(&self.0).expect("envelope slopes are finite")
    }
}

/// Envelope as a balanced ordered tree keyed by slope.
///
/// Each node stores the gap to its predecessor, so a breakpoint's true
/// position is the prefix sum of gaps up to it (the first node's gap is its
/// absolute position). A max-filter then reduces to O(1) gap surgery: widen
/// the gap at the rising/falling boundary by `2d` (inserting the plateau
/// node there if missing) and slide everything left by `d` through the first
/// node's gap. Slopes shift uniformly through `slope_offset`, so adding a
/// linear term is O(1); a node's true slope is its key plus the offset.
///
/// There is no sentinel node: the right domain edge is implicit at 1, and
/// the rightmost breakpoint position is cached in `rightmost` to keep
/// right-edge clipping O(1) per removed node.
#[derive(Debug, Clone)]
pub struct TreeEnvelope {
    left_value: f64,
    slope_offset: f64,
    nodes: BTreeMap<SlopeKey, f64>,
    rightmost: f64,
}

impl Default for TreeEnvelope {
    fn default() -> Self {
        let mut nodes = BTreeMap::new();
        nodes.insert(SlopeKey(0.0), -1.0);
        Self { left_value: 0.0, slope_offset: 0.0, nodes, rightmost: -1.0 }
    }
}

impl TreeEnvelope {
    /// Key whose true slope is exactly zero under the current offset.
    fn plateau_key(&self) -> SlopeKey {
        SlopeKey(0.0 - self.slope_offset)
    }

    /// First node (in position order) with true slope < 0.
    fn first_falling(&self) -> Option<SlopeKey> {
        self.nodes
            .range((Bound::Excluded(self.plateau_key()), Bound::Unbounded))
            .next()
            .map(|(&k, _)| k)
    }
}

impl EnvelopeBackend for TreeEnvelope {
    fn from_snapshot(snapshot: &EnvelopeSnapshot) -> Self {
        debug_assert!(snapshot.check_invariants().is_ok());
        let mut nodes = BTreeMap::new();
        let mut previous = 0.0;
        let mut rightmost = 0.0;
        for &(position, slope) in &snapshot.breakpoints {
            nodes.insert(SlopeKey(slope), position - previous);
            previous = position;
            rightmost = position;
        }
        Self { left_value: snapshot.left_value, slope_offset: 0.0, nodes, rightmost }
    }

    fn max_filter(&mut self, d: f64) {
        debug_assert!(d >= 0.0, "window half-width must be non-negative");
        if d == 0.0 {
            return;
        }
        let plateau = self.plateau_key();
        let falling = self.first_falling();
        if self.nodes.contains_key(&plateau) {
            // existing plateau: only the falling run moves away from it
            if let Some(key) = falling {
                *self.nodes.get_mut(&key).expect("key from range query") += 2.0 * d;
                self.rightmost += 2.0 * d;
            }
        } else {
            let gap = match falling {
                Some(key) => {
                    // plateau node takes over the boundary gap; the falling
                    // run ends up 2d further right
                    let slot = self.nodes.get_mut(&key).expect("key from range query");
                    let taken = *slot;
                    *slot = 2.0 * d;
                    self.rightmost += 2.0 * d - taken;
                    taken
                }
                // everything rises: the plateau opens at the domain edge
                None => 1.0 - self.rightmost,
            };
            self.nodes.insert(plateau, gap);
            self.rightmost += gap;
        }
        // slide the whole structure left by d; the falling run was already
        // pushed 2d right through the boundary gap, netting +d
        *self.nodes.first_entry().expect("envelope never empty").get_mut() -= d;
        self.rightmost -= d;
    }

    fn clip_to_unit(&mut self) {
        loop {
            let (first_key, first_gap, second) = {
                let mut it = self.nodes.iter();
                let (&k, &g) = it.next().expect("envelope never empty");
                (k, g, it.next().map(|(&k2, &g2)| (k2, g2)))
            };
            if first_gap >= -1.0 {
                break;
            }
            let slope = first_key.0 + self.slope_offset;
            match second {
                Some((second_key, second_gap)) if first_gap + second_gap <= -1.0 => {
                    // segment entirely left of −1: fold and drop
                    self.left_value += second_gap * slope;
                    self.nodes.remove(&first_key);
                    *self.nodes.get_mut(&second_key).expect("second node exists") = first_gap + second_gap;
                }
                _ => {
                    // segment spans −1: fold the overhang and move the node,
                    // compensating the successor's gap so only this
                    // breakpoint's absolute position changes
                    self.left_value += (-1.0 - first_gap) * slope;
                    let shift = -1.0 - first_gap;
                    *self.nodes.get_mut(&first_key).expect("first node exists") = -1.0;
                    match second {
                        Some((second_key, second_gap)) => {
                            *self.nodes.get_mut(&second_key).expect("second node exists") = second_gap - shift;
                        }
                        None => self.rightmost += shift,
                    }
                    break;
                }
            }
        }
        while self.nodes.len() > 1 && self.rightmost >= 1.0 {
            let (_, gap) = self.nodes.pop_last().expect("len checked");
            self.rightmost -= gap;
        }
    }

    fn add_linear(&mut self, a: f64) {
        self.slope_offset += a;
        self.left_value -= a;
    }

    fn supremum(&self) -> f64 {
        let mut total = self.left_value;
        let mut position = 0.0;
        let mut it = self.nodes.iter().peekable();
        while let Some((&key, &gap)) = it.next() {
            position += gap;
            let slope = key.0 + self.slope_offset;
            if slope > 0.0 {
                let end = it.peek().map_or(1.0, |&(_, &next_gap)| position + next_gap);
                total += (end - position) * slope;
            }
        }
        total
    }

    fn segments(&self) -> usize {
        self.nodes.len()
    }

    fn snapshot(&self) -> EnvelopeSnapshot {
        let mut breakpoints = Vec::with_capacity(self.nodes.len());
        let mut position = 0.0;
        for (&key, &gap) in &self.nodes {
            position += gap;
            breakpoints.push((position, key.0 + self.slope_offset));
        }
        EnvelopeSnapshot { left_value: self.left_value, breakpoints }
    }
}
