//! Reference schedulers the optimizer is compared against.
//!
//! The net-power-based (NPB) heuristic charges the battery whenever
//! generation exceeds the load and discharges otherwise, ignoring prices
//! entirely. The NO-ESS reference is the bill with no battery at all
//! (see [`crate::cost::no_ess_cost`]).

use alloc::vec::Vec;

use crate::cost::evaluate;
use crate::domain::{CostBreakdown, Scenario, Schedule};
use crate::feasibility::Violation;

/// Charges on surplus and discharges on deficit, capped by the power limits
/// and by the energy actually available or storable.
pub fn npb_schedule(scenario: &Scenario) -> Schedule {
    let b = &scenario.battery;
    let mut residual = Vec::with_capacity(scenario.horizon);
    let mut prev = scenario.initial_charge;
    for (&load, &gen) in scenario.load.iter().zip(&scenario.generation) {
        let surplus = gen - load;
        let next = if surplus > 0.0 {
            (prev + surplus.min(b.charge_limit)).min(b.capacity)
        } else if surplus < 0.0 {
            (prev - (-surplus).min(b.discharge_limit)).max(0.0)
        } else {
            prev
        };
        residual.push(next);
        prev = next;
    }
    Schedule::new(residual)
}

/// Bill for the NPB schedule.
///
/// Infallible on non-cyclic scenarios. On a cyclic scenario with a nonzero
/// initial charge the heuristic may end the day below the required terminal
/// level, in which case the feasibility error is passed through.
pub fn npb_cost(scenario: &Scenario) -> Result<CostBreakdown, Violation> {
    evaluate(scenario, &npb_schedule(scenario))
}
