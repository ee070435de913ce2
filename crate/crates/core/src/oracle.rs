//! Brute-force verification oracles.
//!
//! Every metric in this crate is the optimum of a small linear program over
//! Lipschitz test-function values. [`dual_lp_oracle`] solves these programs
//! directly by dynamic programming over a value grid; it is deliberately
//! naive, small-scale only, and independent of the closed-form code paths it
//! checks. [`transport_oracle_w1`] is the exact primal counterpart for the
//! equal-mass 1-Wasserstein case: the order-preserving coupling, optimal in
//! one dimension for convex costs.
//!
//! This module exists to back the `selftest` command and the test suites;
//! it is not a stable library interface.

use std::collections::VecDeque;

use thiserror::Error;

use crate::measure::{DiscreteMeasure, SignedAtomList};
use crate::wasserstein::mass_tolerance;

/// Default cap on the number of atoms an oracle instance may have.
pub const DEFAULT_INSTANCE_CAP: usize = 16;

/// Cap on grid states, guarding against accidental quadratic-grid blowups
/// when the support diameter is large relative to the step.
const MAX_GRID_STATES: usize = 8_000_000;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("oracle instance too large: {size} exceeds cap {cap}")]
    InstanceTooLarge { size: usize, cap: usize },
    #[error("total masses differ by {gap} (tolerance {tolerance})")]
    MassMismatch { gap: f64, tolerance: f64 },
}

/// Constraint set of one dual LP: test functions are 1-Lipschitz throughout,
/// optionally bounded uniformly (`|f| <= bound`) and optionally anchored
/// (`f(position) ∈ [lo, hi]`). At least one of the two is always present,
/// otherwise the program would be unbounded for unequal total masses.
#[derive(Debug, Clone, Copy)]
pub struct DualConstraintSpec {
    bound_all: Option<f64>,
    anchor: Option<(f64, f64, f64)>,
}

impl DualConstraintSpec {
    /// `|f| <= 1`: the flat metric's test-function ball.
    pub fn flat() -> Self {
        Self { bound_all: Some(1.0), anchor: None }
    }

    /// `f(position) = 0`: plain 1-Wasserstein. Pinning one value is
    /// legitimate because the objective is invariant under adding a constant
    /// when the signed masses sum to zero; use this spec on equal-total-mass
    /// differences only.
    pub fn w1_anchored(position: f64) -> Self {
        Self { bound_all: None, anchor: Some((position, 0.0, 0.0)) }
    }

    /// `f(0) ∈ [-1, 1]`: the centralized 1-Wasserstein metric.
    pub fn centralized() -> Self {
        Self { bound_all: None, anchor: Some((0.0, -1.0, 1.0)) }
    }
}

/// Rounding error of the grid DP: projecting a true optimizer onto the grid
/// costs at most `h · Σ|a_k|`, so the relaxed DP value never falls more than
/// this below the true LP optimum. (It can exceed the optimum too — the
/// half-step transition slack is a relaxation whose overshoot grows with the
/// instance — which is what [`dual_lp_oracle_bracket`] accounts for.)
pub fn oracle_tolerance(delta: &SignedAtomList, h: f64) -> f64 {
    h * delta.atoms().iter().map(|a| a.mass.abs()).sum::<f64>()
}

/// How grid windows relate to the true Lipschitz cones.
#[derive(Clone, Copy, PartialEq, Eq)]
enum WindowBias {
    /// `|Δ| <= d + h/2` and anchor slack `h/2`: the classic recipe. Close to
    /// the optimum in practice but guaranteed on neither side — the slack
    /// relaxes the program while the flooring can still exclude a rounded
    /// optimizer.
    HalfStepSlack,
    /// Windows `floor(d/h)` steps, anchor exact: every grid profile is
    /// genuinely feasible, so the value never exceeds the optimum.
    Restricted,
    /// Windows `floor(d/h) + 2` steps (at least `d + h`) and anchor slack
    /// `h/2`: any optimizer rounded to the grid stays feasible, so the value
    /// is at least the optimum minus half of [`oracle_tolerance`].
    Covering,
}

/// Maximize `|Σ a_k f_k|` over grid-valued test functions satisfying `spec`,
/// with `|f_k − f_{k−1}| <= |x_k − x_{k−1}| + h/2` (the half-step slack keeps
/// the rounded continuous optimum feasible on the grid).
pub fn dual_lp_oracle(delta: &SignedAtomList, spec: &DualConstraintSpec, h: f64) -> Result<f64, OracleError> {
    dual_lp_oracle_with_cap(delta, spec, h, DEFAULT_INSTANCE_CAP)
}

/// [`dual_lp_oracle`] with an explicit instance-size cap.
pub fn dual_lp_oracle_with_cap(
    delta: &SignedAtomList,
    spec: &DualConstraintSpec,
    h: f64,
    cap: usize,
) -> Result<f64, OracleError> {
    grid_dp(delta, spec, h, cap, WindowBias::HalfStepSlack)
}

/// Sound two-sided bracket `(lower, upper)` of the true LP optimum: the
/// lower run restricts every window so its profiles are genuinely feasible
/// (`lower <= optimum`), the upper run widens them enough that a rounded
/// optimizer always fits (`upper >= optimum − ε/2` with
/// `ε =` [`oracle_tolerance`]). A correct closed form therefore always lands
/// in `[lower − ε, upper + ε]`.
pub fn dual_lp_oracle_bracket(
    delta: &SignedAtomList,
    spec: &DualConstraintSpec,
    h: f64,
) -> Result<(f64, f64), OracleError> {
    dual_lp_oracle_bracket_with_cap(delta, spec, h, DEFAULT_INSTANCE_CAP)
}

/// [`dual_lp_oracle_bracket`] with an explicit instance-size cap.
pub fn dual_lp_oracle_bracket_with_cap(
    delta: &SignedAtomList,
    spec: &DualConstraintSpec,
    h: f64,
    cap: usize,
) -> Result<(f64, f64), OracleError> {
    let lower = grid_dp(delta, spec, h, cap, WindowBias::Restricted)?;
    let upper = grid_dp(delta, spec, h, cap, WindowBias::Covering)?;
    Ok((lower, upper))
}

fn grid_dp(
    delta: &SignedAtomList,
    spec: &DualConstraintSpec,
    h: f64,
    cap: usize,
    bias: WindowBias,
) -> Result<f64, OracleError> {
    assert!(h > 0.0 && h.is_finite(), "grid step must be positive");
    if delta.is_empty() {
        return Ok(0.0);
    }
    if delta.len() > cap {
        return Err(OracleError::InstanceTooLarge { size: delta.len(), cap });
    }

    // Atom table, with a zero-mass atom at the anchor position when absent.
    let mut atoms: Vec<(f64, f64)> = Vec::with_capacity(delta.len() + 1);
    if let Some((anchor_pos, _, _)) = spec.anchor {
        let mut inserted = false;
        for a in delta.atoms() {
            if !inserted && a.position >= anchor_pos {
                if a.position > anchor_pos {
                    atoms.push((anchor_pos, 0.0));
                }
                inserted = true;
            }
            atoms.push((a.position, a.mass));
        }
        if !inserted {
            atoms.push((anchor_pos, 0.0));
        }
    } else {
        atoms.extend(delta.atoms().iter().map(|a| (a.position, a.mass)));
    }

    // Value grid: integer multiples of h covering every feasible value.
    let value_bound = match spec.bound_all {
        Some(bound) => bound,
        None => {
            let (anchor_pos, lo, hi) = spec.anchor.expect("spec always has a bound or an anchor");
            let reach = atoms
                .iter()
                .map(|&(x, _)| (x - anchor_pos).abs())
                .fold(0.0, f64::max);
            lo.abs().max(hi.abs()) + reach
        }
    };
    let half_steps = match bias {
        // the restricted run must not offer values outside the true bound
        WindowBias::Restricted => (value_bound / h).floor().max(0.0) as i64,
        _ => (value_bound / h).round().max(0.0) as i64,
    };
    let states = 2 * half_steps as usize + 1;
    if states > MAX_GRID_STATES {
        return Err(OracleError::InstanceTooLarge { size: states, cap: MAX_GRID_STATES });
    }
    let value_at = |i: usize| (i as i64 - half_steps) as f64 * h;

    let anchor_slack = match bias {
        WindowBias::HalfStepSlack | WindowBias::Covering => 0.5 * h,
        WindowBias::Restricted => 0.0,
    };
    let anchor_state_ok = |i: usize| -> bool {
        match spec.anchor {
            None => true,
            Some((_, lo, hi)) => {
                let v = value_at(i);
                v >= lo - anchor_slack && v <= hi + anchor_slack
            }
        }
    };
    let anchor_index = spec
        .anchor
        .map(|(pos, _, _)| atoms.iter().position(|&(x, _)| x == pos).expect("anchor atom inserted above"));

    let mut current = vec![0.0f64; states];
    let mut next = vec![0.0f64; states];
    let mut prev_x = atoms[0].0;
    for (k, &(x, a)) in atoms.iter().enumerate() {
        if k == 0 {
            for (i, slot) in current.iter_mut().enumerate() {
                *slot = a * value_at(i);
            }
        } else {
            let d = x - prev_x;
            let window = match bias {
                WindowBias::HalfStepSlack => ((d + 0.5 * h) / h).floor() as usize,
                WindowBias::Restricted => (d / h).floor() as usize,
                WindowBias::Covering => (d / h).floor() as usize + 2,
            };
            sliding_window_max(&current, window, &mut next);
            for (i, slot) in next.iter_mut().enumerate() {
                *slot += a * value_at(i);
            }
            std::mem::swap(&mut current, &mut next);
        }
        if anchor_index == Some(k) {
            for (i, slot) in current.iter_mut().enumerate() {
                if !anchor_state_ok(i) {
                    *slot = f64::NEG_INFINITY;
                }
            }
        }
        prev_x = x;
    }

    let best = current
        .iter()
        .filter(|v| v.is_finite())
        .map(|v| v.abs())
        .fold(0.0, f64::max);
    Ok(best)
}

/// `out[i] = max(values[j])` over `|j − i| <= window`, via a monotone deque.
fn sliding_window_max(values: &[f64], window: usize, out: &mut [f64]) {
    let n = values.len();
    let mut deque: VecDeque<usize> = VecDeque::new();
    let mut admitted = 0usize;
    for (i, slot) in out.iter_mut().enumerate() {
        let last = (i + window).min(n - 1);
        while admitted <= last {
            while let Some(&back) = deque.back() {
                if values[back] <= values[admitted] {
                    deque.pop_back();
                } else {
                    break;
                }
            }
            deque.push_back(admitted);
            admitted += 1;
        }
        while let Some(&front) = deque.front() {
            if front + window < i {
                deque.pop_front();
            } else {
                break;
            }
        }
        *slot = values[*deque.front().expect("window is non-empty")];
    }
}

/// One edge of a monotone transport plan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransportMove {
    pub from: f64,
    pub to: f64,
    pub mass: f64,
}

/// A transport plan and its cost. Mass left in place is not listed.
#[derive(Debug, Clone, PartialEq)]
pub struct TransportPlan {
    pub cost: f64,
    pub moves: Vec<TransportMove>,
}

/// Exact equal-mass 1-Wasserstein cost via the monotone (north-west corner)
/// coupling of the two sorted atom lists.
pub fn transport_oracle_w1(mu: &DiscreteMeasure, nu: &DiscreteMeasure) -> Result<TransportPlan, OracleError> {
    let tolerance = mass_tolerance(mu, nu);
    let gap = (mu.total_mass() - nu.total_mass()).abs();
    if gap > tolerance {
        return Err(OracleError::MassMismatch { gap, tolerance });
    }

    let a = mu.atoms();
    let b = nu.atoms();
    let mut moves = Vec::new();
    let mut cost = 0.0;
    let (mut i, mut j) = (0, 0);
    let mut remaining_a = a.first().map_or(0.0, |x| x.mass);
    let mut remaining_b = b.first().map_or(0.0, |x| x.mass);
    while i < a.len() && j < b.len() {
        let flow = remaining_a.min(remaining_b);
        if flow > 0.0 {
            let (from, to) = (a[i].position, b[j].position);
            cost += flow * (to - from).abs();
            if from != to {
                moves.push(TransportMove { from, to, mass: flow });
            }
        }
        remaining_a -= flow;
        remaining_b -= flow;
        if remaining_a == 0.0 {
            i += 1;
            remaining_a = a.get(i).map_or(0.0, |x| x.mass);
        }
        if remaining_b == 0.0 {
            j += 1;
            remaining_b = b.get(j).map_or(0.0, |x| x.mass);
        }
    }
    Ok(TransportPlan { cost, moves })
}
