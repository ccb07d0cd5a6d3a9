//! Exact dynamic programming over a discretized battery-state grid.
//!
//! Residuals are restricted to the grid `{0, δ, 2δ, …}` (topped by the
//! capacity itself when δ does not divide it). The energy charge separates
//! by stage, but the demand charge depends on the peak net draw across the
//! whole day, which breaks stage-separability. Separability is restored by
//! an outer search over peak caps:
//!
//! 1. Collect every net value achievable on the grid (hourly base `l - g`
//!    plus every allowed residual delta), dedup, sort ascending, and add the
//!    no-battery peak for good measure.
//! 2. For each candidate cap, run a stage DP minimizing the energy charge
//!    over transitions whose net draw stays at or below the cap.
//! 3. Bill each capped schedule from its actual peak and keep the cheapest.
//!
//! The optimal grid schedule's peak is itself a candidate, and the DP under
//! that cap can only improve on the schedule, so the scan is exact over the
//! grid. The grid optimum upper-bounds the continuous optimum.
//!
//! [`brute_force_solve`] enumerates every grid schedule outright; it is the
//! oracle's oracle on instances small enough to afford it.

use alloc::vec;
use alloc::vec::Vec;

use crate::cost::{breakdown_from_nets, raw_net_series};
use crate::domain::{CostBreakdown, InvalidScenario, Scenario, Schedule};
use crate::feasibility::TOLERANCE_KWH;

/// Schedules enumerated by [`brute_force_solve`] are capped at this count.
pub const BRUTE_FORCE_LIMIT: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SnapMode {
    /// Snap the initial charge to the largest grid state at or below it.
    Floor,
    /// Snap to the closest grid state (ties resolve downward).
    Nearest,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DpConfig {
    /// Grid spacing δ, kWh.
    pub grid_step: f64,
    pub snap_mode: SnapMode,
}

impl Default for DpConfig {
    fn default() -> Self {
        Self { grid_step: 0.05, snap_mode: SnapMode::Nearest }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DpSolution {
    pub schedule: Schedule,
    pub cost: CostBreakdown,
    /// Initial charge actually used, after snapping onto the grid. The
    /// schedule and bill refer to this value; it equals the scenario's
    /// whenever that is already a grid state.
    pub snapped_initial_charge: f64,
    /// Distance moved by the snap, kWh (0 when the initial charge was
    /// already on the grid).
    pub snap_distance: f64,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DpError {
    #[error("grid step {0} must be positive and finite")]
    BadGridStep(f64),
    #[error(transparent)]
    Scenario(#[from] InvalidScenario),
    #[error("{states} grid states over {horizon} hours exceed the enumeration limit of {limit} schedules")]
    TooLarge { states: usize, horizon: usize, limit: u64 },
}

fn grid_states(capacity: f64, step: f64) -> Vec<f64> {
    let cells = (capacity / step + 1e-9) as usize;
    let mut states: Vec<f64> = (0..=cells).map(|k| (k as f64 * step).min(capacity)).collect();
    if capacity - states[cells] > 1e-9 {
        // δ does not divide the capacity: truncate the last cell at C.
        states.push(capacity);
    } else {
        // δ divides the capacity within tolerance: pin the top state to C
        // exactly so a full battery is representable without drift.
        states[cells] = capacity;
    }
    states
}

fn snap_index(value: f64, states: &[f64], mode: SnapMode) -> usize {
    match mode {
        SnapMode::Floor => {
            let mut best = 0;
            for (k, &state) in states.iter().enumerate() {
                if state <= value + TOLERANCE_KWH {
                    best = k;
                }
            }
            best
        }
        SnapMode::Nearest => {
            let mut best = 0;
            let mut best_distance = f64::INFINITY;
            for (k, &state) in states.iter().enumerate() {
                let distance = (state - value).abs();
                if distance < best_distance {
                    best_distance = distance;
                    best = k;
                }
            }
            best
        }
    }
}

/// Transition matrix: `allowed[u]` lists the reachable target states and the
/// residual delta they imply.
fn allowed_transitions(states: &[f64], scenario: &Scenario) -> Vec<Vec<(usize, f64)>> {
    let b = &scenario.battery;
    states
        .iter()
        .map(|&from| {
            states
                .iter()
                .enumerate()
                .filter_map(|(v, &to)| {
                    let delta = to - from;
                    (delta <= b.charge_limit + TOLERANCE_KWH
                        && -delta <= b.discharge_limit + TOLERANCE_KWH)
                        .then_some((v, delta))
                })
                .collect()
        })
        .collect()
}

/// Every net draw achievable on the grid, ascending and deduplicated, plus
/// the no-battery peak.
fn peak_candidates(scenario: &Scenario, transitions: &[Vec<(usize, f64)>]) -> Vec<f64> {
    let mut deltas: Vec<f64> = transitions
        .iter()
        .flat_map(|row| row.iter().map(|&(_, delta)| delta))
        .collect();
    deltas.sort_by(|a, b| a.partial_cmp(b).expect("grid deltas are finite"));
    deltas.dedup();

    let mut candidates = Vec::with_capacity(deltas.len() * scenario.horizon + 1);
    for (&load, &gen) in scenario.load.iter().zip(&scenario.generation) {
        let base = load - gen;
        candidates.extend(deltas.iter().map(|&d| d + base));
        candidates.push(base);
    }
    candidates.sort_by(|a, b| a.partial_cmp(b).expect("net draws are finite"));
    candidates.dedup_by(|a, b| (*a - *b).abs() <= TOLERANCE_KWH);
    candidates
}

/// Minimum-energy-charge path with every net draw at or below `cap`.
/// Returns the state-index path of length `horizon`, or `None` when no
/// schedule respects the cap.
fn capped_energy_dp(
    scenario: &Scenario,
    states: &[f64],
    transitions: &[Vec<(usize, f64)>],
    start: usize,
    cap: f64,
) -> Option<Vec<usize>> {
    let horizon = scenario.horizon;
    let n = states.len();
    let mut cost = vec![f64::INFINITY; n];
    cost[start] = 0.0;
    let mut parent = vec![vec![usize::MAX; n]; horizon];

    for (hour, parent_row) in parent.iter_mut().enumerate() {
        let base = scenario.load[hour] - scenario.generation[hour];
        let price = scenario.tariff.energy_price[hour];
        let mut next = vec![f64::INFINITY; n];
        for (u, from_cost) in cost.iter().enumerate() {
            if !from_cost.is_finite() {
                continue;
            }
            for &(v, delta) in &transitions[u] {
                let net = delta + base;
                if net > cap + 1e-9 {
                    continue;
                }
                let stage = if net > 0.0 { net * price } else { 0.0 };
                let candidate = from_cost + stage;
                if candidate < next[v] {
                    next[v] = candidate;
                    parent_row[v] = u;
                }
            }
        }
        cost = next;
    }

    let terminal_floor = if scenario.cyclic {
        scenario.initial_charge - TOLERANCE_KWH
    } else {
        f64::NEG_INFINITY
    };
    let mut best: Option<usize> = None;
    for (v, &c) in cost.iter().enumerate() {
        if c.is_finite() && states[v] >= terminal_floor && best.is_none_or(|b| c < cost[b]) {
            best = Some(v);
        }
    }
    let mut v = best?;

    let mut path = vec![0usize; horizon];
    for hour in (0..horizon).rev() {
        path[hour] = v;
        v = parent[hour][v];
    }
    Some(path)
}

fn prepare(scenario: &Scenario, config: &DpConfig) -> Result<(Scenario, Vec<f64>, usize, f64), DpError> {
    if !(config.grid_step.is_finite() && config.grid_step > 0.0) {
        return Err(DpError::BadGridStep(config.grid_step));
    }
    scenario.validate()?;
    let states = grid_states(scenario.battery.capacity, config.grid_step);
    let start = snap_index(scenario.initial_charge, &states, config.snap_mode);
    let snap_distance = (states[start] - scenario.initial_charge).abs();
    let mut snapped = scenario.clone();
    snapped.initial_charge = states[start];
    Ok((snapped, states, start, snap_distance))
}

fn solution_from_path(
    scenario: &Scenario,
    states: &[f64],
    path: &[usize],
    snap_distance: f64,
) -> DpSolution {
    let residual: Vec<f64> = path.iter().map(|&v| states[v]).collect();
    let cost = breakdown_from_nets(scenario, raw_net_series(scenario, &residual));
    DpSolution {
        schedule: Schedule::new(residual),
        cost,
        snapped_initial_charge: scenario.initial_charge,
        snap_distance,
    }
}

/// Exact minimum-cost schedule over the grid, via the peak-cap scan.
pub fn dp_solve(scenario: &Scenario, config: &DpConfig) -> Result<DpSolution, DpError> {
    let (snapped, states, start, snap_distance) = prepare(scenario, config)?;
    let transitions = allowed_transitions(&states, &snapped);
    let candidates = peak_candidates(&snapped, &transitions);

    let mut best: Option<DpSolution> = None;
    for &cap in &candidates {
        let Some(path) = capped_energy_dp(&snapped, &states, &transitions, start, cap) else {
            continue;
        };
        let solution = solution_from_path(&snapped, &states, &path, snap_distance);
        if best.as_ref().is_none_or(|b| solution.cost.total < b.cost.total) {
            best = Some(solution);
        }
    }
    Ok(best.expect("the zero-delta schedule always satisfies the largest cap"))
}

/// Enumerates every grid schedule and returns the exact minimum. Errors out
/// above [`BRUTE_FORCE_LIMIT`] schedules.
pub fn brute_force_solve(scenario: &Scenario, config: &DpConfig) -> Result<DpSolution, DpError> {
    let (snapped, states, start, snap_distance) = prepare(scenario, config)?;
    let count = (states.len() as u64).checked_pow(snapped.horizon as u32);
    if count.is_none_or(|c| c > BRUTE_FORCE_LIMIT) {
        return Err(DpError::TooLarge {
            states: states.len(),
            horizon: snapped.horizon,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let transitions = allowed_transitions(&states, &snapped);

    struct Search<'a> {
        scenario: &'a Scenario,
        states: &'a [f64],
        transitions: &'a [Vec<(usize, f64)>],
        path: Vec<usize>,
        best_total: f64,
        best_path: Option<Vec<usize>>,
    }

    impl Search<'_> {
        fn visit(&mut self, hour: usize, from: usize, energy: f64, peak: f64) {
            if hour == self.scenario.horizon {
                if self.scenario.cyclic
                    && self.states[from] < self.scenario.initial_charge - TOLERANCE_KWH
                {
                    return;
                }
                let billed = if self.scenario.literal_demand { peak } else { peak.max(0.0) };
                let total = energy + billed * self.scenario.tariff.demand_rate;
                if total < self.best_total {
                    self.best_total = total;
                    self.best_path = Some(self.path.clone());
                }
                return;
            }
            let base = self.scenario.load[hour] - self.scenario.generation[hour];
            let price = self.scenario.tariff.energy_price[hour];
            for &(v, delta) in &self.transitions[from] {
                let net = delta + base;
                let stage = if net > 0.0 { net * price } else { 0.0 };
                self.path.push(v);
                self.visit(hour + 1, v, energy + stage, peak.max(net));
                self.path.pop();
            }
        }
    }

    let mut search = Search {
        scenario: &snapped,
        states: &states,
        transitions: &transitions,
        path: Vec::with_capacity(snapped.horizon),
        best_total: f64::INFINITY,
        best_path: None,
    };
    search.visit(0, start, 0.0, f64::NEG_INFINITY);

    let path = search.best_path.expect("the zero-delta schedule is always enumerable");
    Ok(solution_from_path(&snapped, &states, &path, snap_distance))
}
