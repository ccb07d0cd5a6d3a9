//! Per-gene feasible intervals and cascade repair.
//!
//! A schedule is feasible when every residual stays inside `[0, C]` and every
//! hourly swing stays inside `[-P_d, P_c]`. Folding both families into a
//! bound on one gene given its left neighbour `prev` yields the interval
//!
//! ```text
//! max(0, prev - P_d)  <=  x  <=  min(C, prev + P_c)
//! ```
//!
//! which is never empty for `prev` in `[0, C]`. Initialization, crossover,
//! and mutation all sample inside this interval; after a local change, the
//! left-to-right [`repair_suffix`] pass clamps each downstream gene into the
//! interval of its (possibly already repaired) neighbour.

use crate::domain::{BatterySpec, Scenario, Schedule};

/// Slack absorbed when checking feasibility, kWh. Repair writes exact
/// endpoint values, so repaired schedules pass with zero slack; the
/// tolerance only covers floating-point drift in externally built schedules.
pub const TOLERANCE_KWH: f64 = 1e-12;

/// Closed sampling interval for one gene.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneBounds {
    pub lower: f64,
    pub upper: f64,
}

impl GeneBounds {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn contains(&self, value: f64) -> bool {
        value >= self.lower && value <= self.upper
    }

    /// Returns `value` if inside, otherwise the nearer endpoint. A value
    /// equidistant from both endpoints (possible only when the interval is
    /// a single point) resolves to the lower endpoint.
    pub fn clamp(&self, value: f64) -> f64 {
        if value < self.lower {
            self.lower
        } else if value > self.upper {
            self.upper
        } else {
            value
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum BoundsError {
    #[error("previous residual {prev} outside [0, {capacity}]")]
    PrevOutOfRange { prev: f64, capacity: f64 },
}

/// Feasible interval for a gene whose left neighbour holds `prev` kWh.
pub fn gene_bounds(prev: f64, battery: &BatterySpec) -> Result<GeneBounds, BoundsError> {
    if !(prev >= 0.0 && prev <= battery.capacity) {
        return Err(BoundsError::PrevOutOfRange { prev, capacity: battery.capacity });
    }
    Ok(raw_bounds(prev, battery))
}

fn raw_bounds(prev: f64, battery: &BatterySpec) -> GeneBounds {
    GeneBounds {
        lower: (prev - battery.discharge_limit).max(0.0),
        upper: (prev + battery.charge_limit).min(battery.capacity),
    }
}

/// Sampling interval for the gene at `index` (0-based), aware of the
/// scenario's cyclic flag.
///
/// For cyclic scenarios the lower bound is raised so the terminal residual
/// can still climb back to the initial charge within the remaining hours;
/// generated and repaired schedules then satisfy the terminal constraint by
/// construction. `prev` must already respect its own bounds, which every
/// operator in this crate maintains.
pub fn gene_bounds_at(prev: f64, index: usize, scenario: &Scenario) -> GeneBounds {
    debug_assert!(
        prev >= -TOLERANCE_KWH && prev <= scenario.battery.capacity + TOLERANCE_KWH,
        "left neighbour {prev} outside the battery envelope"
    );
    let mut bounds = raw_bounds(prev, &scenario.battery);
    if scenario.cyclic {
        let hours_left = (scenario.horizon - 1 - index) as f64;
        let reach = scenario.initial_charge - hours_left * scenario.battery.charge_limit;
        if reach > bounds.lower {
            // Never invert the interval: a prefix that ignored the cyclic
            // trajectory still repairs to the closest attainable schedule.
            bounds.lower = reach.min(bounds.upper);
        }
    }
    bounds
}

/// Clamps genes from `from` (0-based) onward into the bounds induced by
/// their repaired left neighbours. Genes before `from` are trusted.
pub fn repair_suffix(mut x: Schedule, from: usize, scenario: &Scenario) -> Schedule {
    let mut prev = if from == 0 {
        scenario.initial_charge
    } else {
        x.residual[from - 1]
    };
    for i in from..x.residual.len() {
        let repaired = gene_bounds_at(prev, i, scenario).clamp(x.residual[i]);
        x.residual[i] = repaired;
        prev = repaired;
    }
    x
}

/// First constraint violation in a schedule, if any.
#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum Violation {
    #[error("schedule has {got} entries, expected {expected}")]
    Length { expected: usize, got: usize },
    #[error("residual[{index}] = {value} outside [0, {capacity}]")]
    Range { index: usize, value: f64, capacity: f64 },
    #[error("swing {delta} at hour {index} outside [-{discharge_limit}, {charge_limit}]")]
    Swing { index: usize, delta: f64, charge_limit: f64, discharge_limit: f64 },
    #[error("terminal residual {last} below initial charge {initial} on a cyclic scenario")]
    Cyclic { last: f64, initial: f64 },
}

/// Checks both constraint families (and the cyclic terminal constraint when
/// the scenario requests it) within [`TOLERANCE_KWH`], reporting the first
/// violating index.
pub fn check_schedule(x: &Schedule, scenario: &Scenario) -> Result<(), Violation> {
    if x.residual.len() != scenario.horizon {
        return Err(Violation::Length { expected: scenario.horizon, got: x.residual.len() });
    }
    let b = &scenario.battery;
    let mut prev = scenario.initial_charge;
    for (index, &value) in x.residual.iter().enumerate() {
        if !(value >= -TOLERANCE_KWH && value <= b.capacity + TOLERANCE_KWH) {
            return Err(Violation::Range { index, value, capacity: b.capacity });
        }
        let delta = value - prev;
        if delta > b.charge_limit + TOLERANCE_KWH || -delta > b.discharge_limit + TOLERANCE_KWH {
            return Err(Violation::Swing {
                index,
                delta,
                charge_limit: b.charge_limit,
                discharge_limit: b.discharge_limit,
            });
        }
        prev = value;
    }
    if scenario.cyclic {
        let last = *x.residual.last().expect("validated horizon is at least 1");
        if last < scenario.initial_charge - TOLERANCE_KWH {
            return Err(Violation::Cyclic { last, initial: scenario.initial_charge });
        }
    }
    Ok(())
}

pub fn is_feasible(x: &Schedule, scenario: &Scenario) -> bool {
    check_schedule(x, scenario).is_ok()
}
